import json

import numpy as np
import pytest

from provar import (
    MultiPoly,
    PointCloud,
    UnderdeterminedError,
    basis_size,
    builtin_variety,
    fit_implicit,
    fit_to_json,
    monomial_basis,
    sample_parametric,
    select_degree,
)


def basis_vector(poly, basis):
    """The polynomial's coefficients over the basis, unit-normalized."""
    v = np.array([poly.coefficient(e) for e in basis])
    return v / np.linalg.norm(v)


def cosine(fit, poly):
    return float(np.dot(fit.coefficients, basis_vector(poly, fit.basis)))


class TestBasis:
    def test_univariate(self):
        assert monomial_basis(1, 2) == [(0,), (1,), (2,)]
        assert basis_size(1, 2) == 3

    def test_bivariate_order(self):
        assert monomial_basis(2, 2) == [
            (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)
        ]
        assert basis_size(2, 2) == 6

    def test_trivariate_size(self):
        basis = monomial_basis(3, 4)
        assert len(basis) == 35
        assert basis_size(3, 4) == 35
        assert len(set(basis)) == 35
        assert all(sum(e) <= 4 for e in basis)

    def test_invalid(self):
        with pytest.raises(ValueError):
            monomial_basis(0, 2)
        with pytest.raises(ValueError):
            monomial_basis(1, -1)


class TestFitImplicit:
    def test_sphere_degree2(self):
        v = builtin_variety("sphere", r=1.0)
        cloud = sample_parametric(v, 200, seed=0)
        fit = fit_implicit(cloud, 2)
        assert fit.residual_rms < 1e-8
        assert abs(cosine(fit, v.poly)) > 0.9999
        assert abs(np.linalg.norm(fit.coefficients) - 1.0) < 1e-12

    def test_sign_convention(self):
        v = builtin_variety("sphere", r=1.0)
        fit = fit_implicit(sample_parametric(v, 200, seed=0), 2)
        nz = fit.coefficients[fit.coefficients != 0.0]
        assert nz[0] > 0.0

    def test_repeated_point_degree1(self):
        p = np.array([0.7, -0.3])
        cloud = PointCloud(np.tile(p, (10, 1)))
        fit = fit_implicit(cloud, 1)
        assert fit.residual_rms < 1e-10
        poly = fit.to_multipoly()
        assert abs(poly.evaluate(p)) < 1e-8

    def test_elliptic_degree3(self):
        v = builtin_variety("elliptic")
        cloud = sample_parametric(v, 300, seed=0)
        fit = fit_implicit(cloud, 3)
        assert fit.residual_rms < 1e-8
        assert abs(cosine(fit, v.poly)) > 0.9999

    def test_known_answer_recovery(self):
        cases = [
            ("sphere", {"r": 1.0}, 2),
            ("torus", {"R": 2.0, "r": 0.5}, 4),
            ("elliptic", {}, 3),
        ]
        for name, kwargs, true_degree in cases:
            v = builtin_variety(name, **kwargs)
            cloud = sample_parametric(v, 500, seed=42)
            fit = fit_implicit(cloud, true_degree)
            assert fit.residual_rms < 1e-7, name
            assert abs(cosine(fit, v.poly)) > 0.999, name

    def test_to_multipoly_residual_consistent(self):
        v = builtin_variety("elliptic")
        cloud = sample_parametric(v, 120, seed=1)
        fit = fit_implicit(cloud, 3)
        poly = fit.to_multipoly()
        vals = poly.eval_many(cloud.points)
        assert abs(np.sqrt((vals * vals).mean()) - fit.residual_rms) < 1e-12

    def test_rigid_motion(self):
        v = builtin_variety("sphere", r=1.0)
        pts = sample_parametric(v, 200, seed=2).points
        rng = np.random.default_rng(0)
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        moved = pts @ q.T + np.array([1.5, -2.0, 0.25])
        fit = fit_implicit(PointCloud(moved), 2)
        assert fit.residual_rms < 1e-6

    def test_noise_monotonicity(self):
        v = builtin_variety("sphere", r=1.0)
        pts = sample_parametric(v, 400, seed=3).points
        rng = np.random.default_rng(7)
        noise = rng.normal(size=pts.shape)
        residuals = []
        for sigma in (0.0, 0.01, 0.05):
            fit = fit_implicit(PointCloud(pts + sigma * noise), 2)
            residuals.append(fit.residual_rms)
        assert residuals[0] <= residuals[1] <= residuals[2]

    def test_underdetermined(self):
        cloud = PointCloud(np.random.default_rng(0).normal(size=(3, 2)))
        with pytest.raises(UnderdeterminedError) as err:
            fit_implicit(cloud, 2)
        assert "6" in str(err.value) and "3" in str(err.value)

    def test_degree_validated(self):
        cloud = PointCloud(np.zeros((5, 2)))
        with pytest.raises(ValueError):
            fit_implicit(cloud, 0)


class TestSelectDegree:
    def test_sphere_selects_2(self):
        v = builtin_variety("sphere", r=1.0)
        cloud = sample_parametric(v, 300, seed=0)
        fit = select_degree(cloud, 4, 1e-6)
        assert fit.degree == 2
        assert fit.converged
        assert fit.swept_residuals[1] > 1e-6
        assert fit.swept_residuals[2] <= 1e-6
        assert 3 not in fit.swept_residuals

    def test_torus_selects_4(self):
        v = builtin_variety("torus", R=2.0, r=0.5)
        cloud = sample_parametric(v, 500, seed=0)
        fit = select_degree(cloud, 5, 1e-6)
        assert fit.degree == 4
        assert fit.converged
        for d in (1, 2, 3):
            assert fit.swept_residuals[d] > 1e-6, d
        assert 5 not in fit.swept_residuals

    def test_elliptic_selects_3(self):
        v = builtin_variety("elliptic")
        cloud = sample_parametric(v, 300, seed=0)
        fit = select_degree(cloud, 4, 1e-6)
        assert fit.degree == 3
        assert fit.converged

    def test_threshold_unreachable(self):
        rng = np.random.default_rng(5)
        cloud = PointCloud(rng.normal(size=(100, 2)))
        fit = select_degree(cloud, 3, 1e-12)
        assert not fit.converged
        assert fit.degree == 3
        assert sorted(fit.swept_residuals) == [1, 2, 3]

    def test_scale_invariance_of_selection(self):
        v = builtin_variety("torus", R=2.0, r=0.5)
        pts = sample_parametric(v, 500, seed=1).points
        a = select_degree(PointCloud(pts), 5, 1e-6)
        b = select_degree(PointCloud(10.0 * pts), 5, 1e-6)
        assert a.degree == b.degree == 4

    def test_underdetermined_everywhere(self):
        cloud = PointCloud(np.random.default_rng(1).normal(size=(2, 3)))
        with pytest.raises(UnderdeterminedError):
            select_degree(cloud, 3, 1e-6)

    def test_partial_sweep_keeps_last(self):
        # 8 points: degree 1 (4 monomials) and degree 2 (10) in 3 vars;
        # degree 2 is underdetermined so the sweep stops after degree 1
        rng = np.random.default_rng(2)
        cloud = PointCloud(rng.normal(size=(8, 3)))
        fit = select_degree(cloud, 3, 1e-12)
        assert fit.degree == 1
        assert not fit.converged


class TestSerialization:
    def test_json_fields(self):
        v = builtin_variety("sphere", r=1.0)
        fit = select_degree(sample_parametric(v, 300, seed=0), 4, 1e-6)
        obj = json.loads(fit_to_json(fit))
        assert obj["degree"] == 2
        assert obj["converged"] is True
        assert len(obj["basis"]) == len(obj["coefficients"]) == 10
        assert obj["swept_residuals"]["1"] > 1e-6

    def test_deterministic(self):
        v = builtin_variety("elliptic")
        cloud = sample_parametric(v, 200, seed=0)
        assert fit_to_json(fit_implicit(cloud, 3)) == fit_to_json(
            fit_implicit(cloud, 3)
        )
