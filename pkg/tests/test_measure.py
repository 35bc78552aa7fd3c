import math

import numpy as np
import pytest

from provar import (
    AnalyticDensity,
    Box,
    DivergenceError,
    IntegrandError,
    MultiPoly,
    NotNormalizableError,
    ProbabilisticPair,
    QuadratureSpec,
    SeriesSpec,
    default_quadrature,
    gauss_legendre_nodes,
    integrate,
    normalize,
    pair_from_json,
    pair_to_json,
    truncated_series,
    validate_density,
)


def monomial_integral(expo, box):
    """Closed form of the monomial integral over the box."""
    total = 1.0
    for e, lo, hi in zip(expo, box.lower, box.upper):
        total *= (hi ** (e + 1) - lo ** (e + 1)) / (e + 1)
    return total


def poly_integral(p, box):
    return sum(c * monomial_integral(e, box) for e, c in p.terms.items())


class TestBox:
    def test_fields(self):
        b = Box((0.0, -1.0), (2.0, 1.0))
        assert b.dim == 2
        assert b.volume == 4.0
        assert abs(b.diagonal - math.sqrt(8.0)) < 1e-15

    def test_invalid(self):
        with pytest.raises(ValueError):
            Box((0.0,), (0.0,))
        with pytest.raises(ValueError):
            Box((1.0,), (0.0,))
        with pytest.raises(ValueError):
            Box((0.0,), (math.inf,))


class TestNodes:
    def test_against_numpy(self):
        for m in (1, 2, 3, 5, 8, 16, 40):
            x, w = gauss_legendre_nodes(m)
            xr, wr = np.polynomial.legendre.leggauss(m)
            assert np.max(np.abs(x - xr)) < 1e-13
            assert np.max(np.abs(w - wr)) < 1e-13

    def test_symmetry_and_weight_sum(self):
        x, w = gauss_legendre_nodes(9)
        assert abs(w.sum() - 2.0) < 1e-14
        assert np.max(np.abs(x + x[::-1])) < 1e-14


class TestIntegrate:
    def test_constant_dice(self):
        one = MultiPoly.constant(1, 1.0)
        box = Box((0.0,), (6.0,))
        assert abs(integrate(one, box, QuadratureSpec.gauss(4)) - 6.0) < 1e-12
        mc = integrate(one, box, QuadratureSpec.monte_carlo(10000, seed=5))
        assert abs(mc - 6.0) < 1e-9  # constant integrand: MC is exact

    def test_odd_function(self):
        x = MultiPoly.variable(1, 0)
        val = integrate(x, Box((-1.0,), (1.0,)), QuadratureSpec.gauss(6))
        assert abs(val) < 1e-14

    def test_x2y2(self):
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)
        p = (x * x) * (y * y)
        val = integrate(p, Box((0.0, 0.0), (1.0, 1.0)), QuadratureSpec.gauss(2))
        assert abs(val - 1.0 / 9.0) < 1e-12

    def test_gl_exactness_random(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            nvars = int(rng.integers(1, 4))
            m = int(rng.integers(2, 7))
            degree = 2 * m - 1
            terms = {
                tuple(int(rng.integers(0, degree + 1)) for _ in range(nvars)):
                    float(rng.normal())
                for _ in range(6)
            }
            p = MultiPoly(nvars, terms)
            lo = rng.uniform(-2, 0, size=nvars)
            hi = lo + rng.uniform(0.5, 2.5, size=nvars)
            box = Box(tuple(lo), tuple(hi))
            got = integrate(p, box, QuadratureSpec.gauss(m))
            want = poly_integral(p, box)
            assert abs(got - want) <= 1e-10 * max(abs(want), 1.0)

    def test_callable_vectorized_and_scalar(self):
        box = Box((0.0,), (1.0,))
        spec = QuadratureSpec.gauss(12)
        vec = integrate(lambda pts: np.cos(pts[:, 0]), box, spec)
        scal = integrate(lambda x: math.cos(x), box, spec)
        assert abs(vec - math.sin(1.0)) < 1e-12
        assert abs(scal - math.sin(1.0)) < 1e-12

    def test_mc_reproducible(self):
        f = AnalyticDensity("gaussian", mean=0.0, sigma=1.0)
        box = Box((-2.0,), (2.0,))
        spec = QuadratureSpec.monte_carlo(50000, seed=9)
        assert integrate(f, box, spec) == integrate(f, box, spec)

    def test_mc_3sigma_coverage(self):
        # bound from the per-seed sample std should contain the tensor
        # value for at least 95 of 100 seeds
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)
        p = x * x + y + 2.0
        box = Box((0.0, 0.0), (1.0, 1.0))
        want = poly_integral(p, box)
        rng_hits = 0
        n = 2000
        for seed in range(100):
            rng = np.random.default_rng(seed)
            pts = rng.uniform(0.0, 1.0, size=(n, 2))
            vals = p.eval_many(pts)
            est = vals.mean() * box.volume
            se = vals.std(ddof=1) / math.sqrt(n) * box.volume
            if abs(est - want) <= 3.0 * se:
                rng_hits += 1
            # the library MC estimator with the same seed matches this path
            lib = integrate(p, box, QuadratureSpec.monte_carlo(n, seed=seed))
            assert abs(lib - est) < 1e-12
        assert rng_hits >= 95

    def test_integrand_error(self):
        def bad(x):
            return math.inf

        with pytest.raises(IntegrandError):
            integrate(bad, Box((0.0,), (1.0,)), QuadratureSpec.gauss(3))

    def test_default_quadrature(self):
        x = MultiPoly.variable(1, 0)
        p = x ** 5
        spec = default_quadrature(p)
        assert spec.method == "gauss-legendre-tensor"
        assert spec.nodes_per_axis == 5  # ceil(6/2) + 2
        spec2 = default_quadrature(lambda t: t)
        assert spec2.method == "monte-carlo"
        assert spec2.sample_count == 1_000_000


class TestNormalize:
    def test_dice(self):
        pair = normalize(MultiPoly.constant(1, 1.0), Box((0.0,), (6.0,)))
        assert abs(pair.omega - 6.0) < 1e-12
        assert abs(pair.normalizer - 1.0 / 6.0) < 1e-13

    def test_constant_general(self):
        c = 2.5
        box = Box((0.0, 0.0), (2.0, 3.0))
        pair = normalize(MultiPoly.constant(2, c), box)
        assert abs(pair.normalizer - 1.0 / (c * box.volume)) < 1e-13

    def test_x_squared(self):
        x = MultiPoly.variable(1, 0)
        pair = normalize(x * x, Box((0.0,), (1.0,)))
        assert abs(pair.omega - 1.0 / 3.0) < 1e-12
        assert abs(pair.normalizer - 3.0) < 1e-12

    def test_reintegration_invariant(self):
        x = MultiPoly.variable(1, 0)
        pair = normalize(x * x + 0.5, Box((-1.0,), (2.0,)))
        reint = integrate(pair.normalizer * pair.density, pair.box, pair.quadrature)
        assert abs(reint - 1.0) < 1e-12

    def test_zero_mass(self):
        x = MultiPoly.variable(1, 0)
        with pytest.raises(NotNormalizableError) as err:
            normalize(x, Box((-1.0,), (1.0,)))
        assert err.value.kind == "zero"

    def test_negative_mass(self):
        with pytest.raises(NotNormalizableError) as err:
            normalize(MultiPoly.constant(1, -2.0), Box((0.0,), (1.0,)))
        assert err.value.kind == "negative"

    def test_divergence(self):
        # finite node values whose weighted accumulation overflows
        with pytest.raises(DivergenceError):
            normalize(MultiPoly.constant(1, 1e308), Box((0.0,), (6.0,)))

    def test_scale_equivariance(self):
        rng = np.random.default_rng(22)
        x = MultiPoly.variable(1, 0)
        f = x * x + 1.0
        box = Box((-1.0,), (1.0,))
        p1 = normalize(f, box)
        p2 = normalize(7.5 * f, box)
        pts = rng.uniform(-1.0, 1.0, size=20)
        for t in pts:
            a = p1.normalized_density((t,))
            b = p2.normalized_density((t,))
            assert abs(a - b) <= 1e-10 * max(abs(a), 1.0)


class TestValidate:
    def test_constant_passes(self):
        pair = normalize(MultiPoly.constant(1, 1.0), Box((0.0,), (6.0,)))
        report = validate_density(pair)
        assert report.passed and report.failed_check is None
        assert report.min_density >= 0.0
        assert abs(report.reintegral - 1.0) < 1e-10

    def test_sign_change_fails_nonnegativity(self):
        x = MultiPoly.variable(1, 0)
        pair = ProbabilisticPair(
            density=x, box=Box((-1.0,), (1.0,)), omega=1.0, normalizer=1.0,
            quadrature=QuadratureSpec.gauss(4),
        )
        report = validate_density(pair)
        assert not report.passed
        assert report.failed_check == "nonnegativity"
        assert report.min_density < 0.0

    def test_truncated_gaussian_passes(self):
        p = truncated_series(SeriesSpec.gaussian(0.0, 1.0, 20))
        box = Box((-4.0,), (4.0,))
        pair = normalize(p, box)
        report = validate_density(pair)
        assert report.passed, report
        assert abs(report.reintegral - 1.0) < 1e-6
        # the raw mass tracks the true Gaussian mass on the box loosely;
        # the truncation error concentrates at the box edges
        exact_mass = math.erf(4.0 / math.sqrt(2.0))
        assert abs(pair.omega - exact_mass) < 0.05

    def test_normalization_failure_reported(self):
        pair = ProbabilisticPair(
            density=MultiPoly.constant(1, 1.0), box=Box((0.0,), (2.0,)),
            omega=1.0, normalizer=1.0, quadrature=QuadratureSpec.gauss(3),
        )
        report = validate_density(pair)
        assert not report.passed
        assert report.failed_check == "normalization"


class TestPairSerialization:
    def test_poly_round_trip(self):
        x = MultiPoly.variable(1, 0)
        pair = normalize(x * x + 1.0, Box((-1.0,), (1.0,)))
        text = pair_to_json(pair)
        back = pair_from_json(text)
        assert back.omega == pair.omega
        assert back.normalizer == pair.normalizer
        assert back.density == pair.density
        assert back.box == pair.box
        assert pair_to_json(back) == text

    def test_analytic_round_trip(self):
        f = AnalyticDensity("exponential", lam=0.7)
        pair = normalize(f, Box((0.0,), (5.0,)), QuadratureSpec.monte_carlo(2000, seed=3))
        back = pair_from_json(pair_to_json(pair))
        assert back.density.family == "exponential"
        assert back.density.params == {"lam": 0.7}
        assert back.quadrature == pair.quadrature
