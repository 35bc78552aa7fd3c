import json
import math

import numpy as np
import pytest

from provar import (
    PersistenceDiagram,
    PointCloud,
    SimplexBudgetError,
    betti_at,
    build_rips,
    builtin_variety,
    compute_persistence,
    diagram_from_json,
    diagram_to_json,
    persistent_betti_summary,
    sample_parametric,
)
from oracle_homology import betti_brute, count_simplices_brute

SQRT2 = math.sqrt(2.0)


def square_cloud():
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


class TestBuild:
    def test_equilateral_triangle(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
        filt = build_rips(pts, max_dim=1, max_scale=2.0)
        got = list(filt.simplices())
        assert len(got) == 7
        # vertices first at value 0, the triangle last (it carries the
        # largest value and the dimension tie-break)
        assert got[:3] == [((0,), 0.0), ((1,), 0.0), ((2,), 0.0)]
        assert sorted(s for s, _ in got[3:6]) == [(0, 1), (0, 2), (1, 2)]
        assert got[6][0] == (0, 1, 2)
        for _, value in got[3:]:
            assert abs(value - 1.0) < 1e-12

    def test_two_far_points(self):
        pts = np.array([[0.0], [5.0]])
        filt = build_rips(pts, max_dim=1, max_scale=1.0)
        assert list(filt.simplices()) == [((0,), 0.0), ((1,), 0.0)]

    def test_default_max_scale(self):
        v = builtin_variety("sphere", r=1.0)
        cloud = sample_parametric(v, 40, seed=0)
        filt = build_rips(cloud, max_dim=1)
        assert abs(filt.max_scale - 0.4 * cloud.diameter()) < 1e-12

    def test_faces_precede_cofaces(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(20, 3))
        filt = build_rips(pts, max_dim=2, max_scale=1.5)
        seen = set()
        for simplex, value in filt.simplices():
            for drop in range(len(simplex)):
                face = simplex[:drop] + simplex[drop + 1:]
                if face:
                    assert face in seen, (face, simplex)
            seen.add(simplex)

    def test_values_sorted_and_equal_diameter(self):
        rng = np.random.default_rng(3)
        pts = rng.normal(size=(15, 2))
        filt = build_rips(pts, max_dim=2, max_scale=2.0)
        vals = filt.values
        assert np.all(np.diff(vals) >= 0)
        for simplex, value in filt.simplices():
            sub = pts[list(simplex)]
            diam = 0.0
            for a in range(len(simplex)):
                for b in range(a + 1, len(simplex)):
                    diam = max(diam, float(np.linalg.norm(sub[a] - sub[b])))
            assert abs(value - diam) < 1e-12

    def test_simplex_count_matches_brute(self):
        rng = np.random.default_rng(7)
        for n in (5, 12, 25):
            pts = rng.uniform(size=(n, 3))
            scale = 0.7
            filt = build_rips(pts, max_dim=2, max_scale=scale)
            assert filt.simplex_count == count_simplices_brute(pts, scale, 2)

    def test_budget_error_names_count(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(size=(30, 2))
        with pytest.raises(SimplexBudgetError) as err:
            build_rips(pts, max_dim=2, max_scale=2.0, budget=100)
        assert err.value.count > 100
        assert err.value.budget == 100
        assert str(err.value.count) in str(err.value)

    def test_bad_args(self):
        pts = np.zeros((3, 2))
        with pytest.raises(ValueError):
            build_rips(pts, max_dim=3)
        with pytest.raises(ValueError):
            build_rips(pts, max_dim=1, max_scale=-1.0)
        with pytest.raises(ValueError):
            build_rips(np.empty((0, 2)), max_dim=1)


class TestPersistence:
    def test_single_point(self):
        filt = build_rips(np.zeros((1, 3)), max_dim=2, max_scale=1.0)
        diag = compute_persistence(filt)
        assert diag.bars(0).tolist() == [[0.0, math.inf]]
        assert diag.bars(1).shape == (0, 2)
        assert diag.bars(2).shape == (0, 2)

    def test_unit_square(self):
        filt = build_rips(square_cloud(), max_dim=1, max_scale=2.0)
        diag = compute_persistence(filt)
        h0 = diag.bars(0)
        assert h0.shape == (4, 2)
        finite = h0[np.isfinite(h0[:, 1])]
        assert np.allclose(finite, [[0.0, 1.0]] * 3, atol=1e-12)
        assert np.isinf(h0[:, 1]).sum() == 1
        h1 = diag.bars(1)
        # one real loop plus the two instantly-filled diagonal cycles,
        # which are retained as zero-persistence pairs
        assert h1.shape == (3, 2)
        assert np.allclose(h1[0], [1.0, SQRT2], atol=1e-12)
        assert np.allclose(h1[1:], [[SQRT2, SQRT2]] * 2, atol=1e-12)

    def test_unit_square_betti_at(self):
        filt = build_rips(square_cloud(), max_dim=1, max_scale=2.0)
        diag = compute_persistence(filt)
        assert betti_at(diag, 0.0) == (4, 0)
        assert betti_at(diag, 1.2) == (1, 1)
        assert betti_at(diag, 1.5) == (1, 0)

    def test_h0_bar_count_equals_n(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 7, 30):
            pts = rng.normal(size=(n, 2))
            diag = compute_persistence(build_rips(pts, max_dim=1, max_scale=3.0))
            assert diag.bars(0).shape[0] == n

    def test_exactly_one_infinite_h0(self):
        rng = np.random.default_rng(12)
        pts = rng.normal(size=(25, 3))
        diag = compute_persistence(build_rips(pts, max_dim=2, max_scale=10.0))
        assert np.isinf(diag.bars(0)[:, 1]).sum() == 1

    def test_births_le_deaths(self):
        rng = np.random.default_rng(13)
        pts = rng.normal(size=(30, 2))
        diag = compute_persistence(build_rips(pts, max_dim=2, max_scale=1.0))
        for k in range(3):
            bars = diag.bars(k)
            if bars.shape[0]:
                assert np.all(bars[:, 0] <= bars[:, 1])

    def test_bar_counts_well_formed(self):
        # every dim-k simplex is a creator or a destroyer, so the number
        # of H_k bars equals (#k-simplices) - (#finite pairs in H_{k-1})
        rng = np.random.default_rng(14)
        pts = rng.uniform(size=(22, 3))
        filt = build_rips(pts, max_dim=2, max_scale=0.8)
        diag = compute_persistence(filt)
        n_by_dim = {k: int((filt.dims == k).sum()) for k in range(4)}
        finite_prev = 0
        for k in range(3):
            bars = diag.bars(k)
            assert bars.shape[0] == n_by_dim[k] - finite_prev
            finite_prev = int(np.isfinite(bars[:, 1]).sum())

    def test_betti_matches_brute_force(self):
        rng = np.random.default_rng(15)
        for trial in range(4):
            n = int(rng.integers(6, 15))
            pts = rng.uniform(size=(n, 2 + trial % 2))
            scale = 0.9
            filt = build_rips(pts, max_dim=2, max_scale=scale)
            diag = compute_persistence(filt)
            for v in np.unique(filt.values):
                got = betti_at(diag, float(v))
                want = betti_brute(pts, float(v), 2)
                assert got == want, (trial, float(v), got, want)

    def test_numba_and_python_agree(self):
        rng = np.random.default_rng(16)
        for n, dim in ((20, 2), (35, 3)):
            pts = rng.normal(size=(n, dim))
            filt = build_rips(pts, max_dim=2, max_scale=1.2)
            a = compute_persistence(filt, use_numba=True)
            b = compute_persistence(filt, use_numba=False)
            for k in range(3):
                assert np.array_equal(a.bars(k), b.bars(k)), (n, k)

    def test_monotone_in_max_scale(self):
        rng = np.random.default_rng(18)
        pts = rng.normal(size=(25, 2))
        small = compute_persistence(build_rips(pts, max_dim=1, max_scale=0.8))
        large = compute_persistence(build_rips(pts, max_dim=1, max_scale=1.6))
        for k in range(2):
            fs = small.bars(k)
            done = fs[np.isfinite(fs[:, 1]) & (fs[:, 1] < 0.8 - 1e-12)]
            fl = large.bars(k)
            for bar in done:
                hit = np.isclose(fl[:, 0], bar[0], atol=1e-12) & np.isclose(
                    fl[:, 1], bar[1], atol=1e-12
                )
                assert hit.any(), (k, bar)

    def test_stability_smoke(self):
        rng = np.random.default_rng(19)
        pts = rng.uniform(size=(30, 2))
        delta = 1e-3
        noisy = pts + rng.uniform(-delta / 2, delta / 2, size=pts.shape)
        a = compute_persistence(build_rips(pts, max_dim=1, max_scale=0.7))
        b = compute_persistence(build_rips(noisy, max_dim=1, max_scale=0.7))
        # every comfortably long bar must move by at most the
        # perturbation size in each endpoint
        for k in range(2):
            for bar in a.bars(k):
                pers = (bar[1] if np.isfinite(bar[1]) else 0.7) - bar[0]
                if pers <= 10 * delta:
                    continue
                cand = b.bars(k)
                if np.isfinite(bar[1]):
                    ok = (np.abs(cand[:, 0] - bar[0]) <= 2 * delta) & (
                        np.abs(cand[:, 1] - bar[1]) <= 2 * delta
                    )
                else:
                    ok = (np.abs(cand[:, 0] - bar[0]) <= 2 * delta) & np.isinf(
                        cand[:, 1]
                    )
                assert ok.any(), (k, bar)


class TestSummaries:
    def test_short_bar_filtered(self):
        diag = PersistenceDiagram(
            max_dim=0, max_scale=1.0, n_points=2,
            pairs={0: np.array([[0.0, math.inf], [0.0, 0.01]])},
        )
        assert persistent_betti_summary(diag, 0.1) == (1,)

    def test_ratio_validated(self):
        diag = PersistenceDiagram(max_dim=0, max_scale=1.0, n_points=1,
                                  pairs={0: np.array([[0.0, math.inf]])})
        for bad in (0.0, 1.0, -0.2, 2.0):
            with pytest.raises(ValueError):
                persistent_betti_summary(diag, bad)

    def test_zero_persistence_never_counts(self):
        diag = PersistenceDiagram(
            max_dim=1, max_scale=2.0, n_points=4,
            pairs={0: np.array([[0.0, math.inf]]),
                   1: np.array([[1.0, 1.0], [0.5, 1.9]])},
        )
        assert persistent_betti_summary(diag, 0.05) == (1, 1)

    def test_square_summary(self):
        filt = build_rips(square_cloud(), max_dim=1, max_scale=2.0)
        diag = compute_persistence(filt)
        # threshold 0.4: the infinite bar (pers 2) and the three merge
        # bars (pers 1) all count, as does the loop (pers sqrt(2) - 1)
        assert persistent_betti_summary(diag, 0.2) == (4, 1)
        # threshold 1.2 keeps only the essential component
        assert persistent_betti_summary(diag, 0.6) == (1, 0)

    def test_scale_zero_betti(self):
        rng = np.random.default_rng(20)
        pts = rng.normal(size=(9, 2))
        diag = compute_persistence(build_rips(pts, max_dim=1, max_scale=1.0))
        assert betti_at(diag, 0.0) == (9, 0)


class TestDiagramJson:
    def test_round_trip(self):
        filt = build_rips(square_cloud(), max_dim=1, max_scale=2.0)
        diag = compute_persistence(filt)
        text = diagram_to_json(diag)
        back = diagram_from_json(text)
        assert back.max_dim == diag.max_dim
        assert back.max_scale == diag.max_scale
        assert back.n_points == diag.n_points
        for k in range(2):
            assert np.array_equal(back.bars(k), diag.bars(k))
        assert diagram_to_json(back) == text

    def test_inf_becomes_null(self):
        filt = build_rips(np.zeros((1, 2)), max_dim=1, max_scale=1.0)
        text = diagram_to_json(compute_persistence(filt))
        obj = json.loads(text)
        assert obj["dims"]["0"] == [[0.0, None]]
