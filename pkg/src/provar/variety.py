"""Implicit algebraic varieties and point clouds drawn on or near them.

A variety is the zero set of a polynomial inside a bounding box.  Three
builtins cover the usual demonstrations:

* torus(R, r): ring torus about the z axis, tube radius r, center radius R;
* elliptic: the real plane curve y^2 = x^3 - x;
* sphere(r): the round sphere of radius r.

Two samplers: ``sample_parametric`` puts points exactly on the variety
through a parametrization, and ``sample_thickened`` draws from the
Gaussian-band density exp(-f(x)^2 / (2 sigma^2)) by rejection, which
works for any polynomial, not just the builtins.
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import SamplingBudgetError, VarietyError
from .measure import Box
from .poly import MultiPoly

__all__ = [
    "ImplicitVariety",
    "builtin_variety",
    "PointCloud",
    "sample_parametric",
    "ThickenedDensity",
    "sample_thickened",
    "save_cloud",
    "load_cloud",
]

_REJECTION_BATCH = 8192


@dataclass(frozen=True)
class ImplicitVariety:
    """Zero set of ``poly`` restricted to ``bounding_box``."""

    poly: MultiPoly
    bounding_box: Box
    name: str = ""
    params: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.poly.nvars

    def residual(self, points):
        """f evaluated at the points; zero means on the variety."""
        return self.poly.eval_many(np.asarray(points, dtype=float))


def _torus_poly(big_r, small_r):
    x = MultiPoly.variable(3, 0)
    y = MultiPoly.variable(3, 1)
    z = MultiPoly.variable(3, 2)
    s = x * x + y * y + z * z + (big_r * big_r - small_r * small_r)
    return s * s - (4.0 * big_r * big_r) * (x * x + y * y)

def _elliptic_poly():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    return x * x * x - x - y * y

def _sphere_poly(radius):
    x = MultiPoly.variable(3, 0)
    y = MultiPoly.variable(3, 1)
    z = MultiPoly.variable(3, 2)
    return x * x + y * y + z * z - radius * radius


def builtin_variety(name, **params):
    """Construct one of the builtin varieties.

    torus: params R (center circle radius) and r (tube radius), R > r > 0.
        Box [-(R+r)-0.5, (R+r)+0.5]^3.
    elliptic: no params.  Box [-1.5, 2.0] x [-2.5, 2.5], which contains
        the oval (x in [-1, 0]) and a stretch of the unbounded branch.
    sphere: param r > 0.  Box [-r-0.5, r+0.5]^3.
    """
    if name == "torus":
        big_r = float(params.pop("R", 2.0))
        small_r = float(params.pop("r", 0.5))
        if params:
            raise VarietyError("torus takes R and r only, got %r" % sorted(params))
        if not (big_r > small_r > 0):
            raise VarietyError(
                "torus requires R > r > 0, got R=%g, r=%g" % (big_r, small_r)
            )
        out = big_r + small_r + 0.5
        box = Box.cube(3, -out, out)
        return ImplicitVariety(
            _torus_poly(big_r, small_r), box, "torus", {"R": big_r, "r": small_r}
        )
    if name == "elliptic":
        if params:
            raise VarietyError("elliptic takes no parameters, got %r" % sorted(params))
        box = Box((-1.5, -2.5), (2.0, 2.5))
        return ImplicitVariety(_elliptic_poly(), box, "elliptic", {})
    if name == "sphere":
        radius = float(params.pop("r", 1.0))
        if params:
            raise VarietyError("sphere takes r only, got %r" % sorted(params))
        if not radius > 0:
            raise VarietyError("sphere requires r > 0, got r=%g" % radius)
        box = Box.cube(3, -radius - 0.5, radius + 0.5)
        return ImplicitVariety(_sphere_poly(radius), box, "sphere", {"r": radius})
    raise VarietyError("unknown builtin variety %r" % (name,))


@dataclass
class PointCloud:
    """An (n, dim) array of points plus a provenance record.

    Provenance captures how the cloud was made (variety, sampler, seed,
    parameters) so downstream artifacts can name their origin.
    """

    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a nonempty (n, dim) array")
        self.points = pts

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def diameter(self):
        """Largest pairwise distance in the cloud."""
        pts = self.points
        best = 0.0
        # chunked to keep the distance block small for large n
        step = 512
        for i in range(0, len(pts), step):
            block = pts[i:i + step]
            d2 = ((block[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
            m = float(d2.max())
            if m > best:
                best = m
        return math.sqrt(best)


# ----------------------------------------------------------------------
# parametric samplers


def _sample_torus(big_r, small_r, n, rng):
    """Uniform surface measure on the torus.

    The azimuthal angle phi is uniform; the tube angle theta has density
    proportional to R + r cos(theta), handled by rejection against the
    envelope (R + r) so accepted angles follow the exact area element.
    """
    thetas = np.empty(n)
    have = 0
    while have < n:
        cand = rng.uniform(0.0, 2.0 * math.pi, size=_REJECTION_BATCH)
        u = rng.uniform(0.0, 1.0, size=_REJECTION_BATCH)
        keep = cand[u < (big_r + small_r * np.cos(cand)) / (big_r + small_r)]
        take = min(n - have, keep.size)
        thetas[have:have + take] = keep[:take]
        have += take
    phis = rng.uniform(0.0, 2.0 * math.pi, size=n)
    rad = big_r + small_r * np.cos(thetas)
    return np.column_stack([
        rad * np.cos(phis),
        rad * np.sin(phis),
        small_r * np.sin(thetas),
    ])


def _sample_sphere(radius, n, rng):
    """Uniform on the sphere: normalized 3-d Gaussian draws scaled by r."""
    pts = np.empty((n, 3))
    have = 0
    while have < n:
        g = rng.standard_normal(size=(n - have, 3))
        norms = np.sqrt((g * g).sum(axis=1))
        ok = norms > 0.0
        g = g[ok] / norms[ok][:, None]
        pts[have:have + g.shape[0]] = radius * g
        have += g.shape[0]
    return pts


def _sample_elliptic(n, x_max):
    """Deterministic sweep of the curve y^2 = x^3 - x.

    The real locus inside the box has two pieces: the oval over
    x in [-1, 0] and the unbounded branch over x >= 1, clipped at x_max.
    Points are allocated to the pieces in proportion to their x extent,
    swept uniformly in x, and emitted on both y branches (y = +-sqrt).
    """
    span_oval = 1.0
    span_branch = x_max - 1.0
    n_oval = max(2, int(round(n * span_oval / (span_oval + span_branch))))
    n_branch = n - n_oval
    if n_branch < 2:
        n_branch = 2
        n_oval = n - 2

    def sweep(lo, hi, count):
        m = (count + 1) // 2
        xs = np.linspace(lo, hi, m)
        ys = np.sqrt(np.maximum(xs ** 3 - xs, 0.0))
        upper = np.column_stack([xs, ys])
        lower = np.column_stack([xs[::-1], -ys[::-1]])
        return np.vstack([upper, lower])[:count]

    oval = sweep(-1.0, 0.0, n_oval)
    branch = sweep(1.0, x_max, n_branch)
    return np.vstack([oval, branch])


def sample_parametric(variety, n, seed=0):
    """Draw n points exactly on a builtin variety.

    ``variety`` must come from ``builtin_variety`` (the parametrizations
    are per-builtin).  The elliptic sweep is deterministic; the torus and
    sphere samplers are seeded draws, bit-reproducible for a given seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    name = variety.name
    rng = np.random.default_rng(seed)
    if name == "torus":
        pts = _sample_torus(variety.params["R"], variety.params["r"], n, rng)
    elif name == "sphere":
        pts = _sample_sphere(variety.params["r"], n, rng)
    elif name == "elliptic":
        pts = _sample_elliptic(n, variety.bounding_box.upper[0])
    else:
        raise VarietyError(
            "no parametric sampler for variety %r; use sample_thickened" % (name,)
        )
    prov = {
        "variety": name,
        "params": dict(variety.params),
        "sampler": "parametric",
        "n": int(n),
        "dim": int(pts.shape[1]),
        "seed": int(seed),
    }
    return PointCloud(pts, prov)


# ----------------------------------------------------------------------
# thickened sampler


@dataclass
class ThickenedDensity:
    """The band density exp(-f(x)^2 / (2 sigma^2)) around a variety.

    sigma defaults to 5% of the bounding box diagonal, which keeps the
    band visually tight without starving the rejection sampler.
    """

    variety: ImplicitVariety
    sigma: float = None

    def __post_init__(self):
        if self.sigma is None:
            self.sigma = 0.05 * self.variety.bounding_box.diagonal
        self.sigma = float(self.sigma)
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        vals = self.variety.poly.eval_many(x[None, :] if single else x)
        out = np.exp(-vals * vals / (2.0 * self.sigma * self.sigma))
        return float(out[0]) if single else out


def sample_thickened(density, n, seed=0, proposal_cap=None):
    """Rejection-sample n points from a thickened-variety density.

    Proposals are uniform on the bounding box; a proposal x is accepted
    with probability exp(-f(x)^2 / (2 sigma^2)) <= 1, so accepted points
    follow the band density restricted to the box.  Points are emitted in
    acceptance order and never lie outside the box.

    Raises
    ------
    SamplingBudgetError
        After ``proposal_cap`` proposals (default 1000 * n) fewer than n
        points were accepted; the message reports the acceptance rate.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if proposal_cap is None:
        proposal_cap = 1000 * n
    box = density.variety.bounding_box
    lo = np.array(box.lower)
    hi = np.array(box.upper)
    rng = np.random.default_rng(seed)
    out = np.empty((n, box.dim))
    have = 0
    proposed = 0
    while have < n:
        if proposed >= proposal_cap:
            rate = have / proposed if proposed else 0.0
            raise SamplingBudgetError(
                "accepted %d of %d needed points after %d proposals "
                "(acceptance rate %.2e); increase sigma or the proposal cap"
                % (have, n, proposed, rate),
                accepted=have,
                proposed=proposed,
            )
        take = min(_REJECTION_BATCH, proposal_cap - proposed)
        cand = rng.uniform(lo, hi, size=(take, box.dim))
        u = rng.uniform(0.0, 1.0, size=take)
        acc = cand[u < density(cand)]
        proposed += take
        keep = min(n - have, acc.shape[0])
        out[have:have + keep] = acc[:keep]
        have += keep
    prov = {
        "variety": density.variety.name or "custom",
        "params": dict(density.variety.params),
        "sampler": "thickened",
        "sigma": density.sigma,
        "n": int(n),
        "dim": int(box.dim),
        "seed": int(seed),
        "proposals_used": int(proposed),
    }
    return PointCloud(out, prov)


# ----------------------------------------------------------------------
# cloud files


def save_cloud(cloud, path):
    """Write a cloud as CSV (header x1..xn) plus a JSON provenance sidecar.

    Coordinates are written with repr so loading recovers exact doubles;
    the sidecar lands at ``<path>.meta.json``.
    """
    dim = cloud.dim
    header = ",".join("x%d" % (i + 1) for i in range(dim))
    lines = [header]
    for row in cloud.points:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(path + ".meta.json", "w") as fh:
        json.dump(cloud.provenance, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_cloud(path):
    """Read a cloud written by ``save_cloud``; the sidecar is optional."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("empty cloud file %s" % path)
    header = lines[0].split(",")
    if not all(h.startswith("x") for h in header):
        raise ValueError("expected header x1,...,xn in %s" % path)
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    pts = np.array(rows, dtype=float)
    meta_path = path + ".meta.json"
    prov = {"file": os.path.basename(path)}
    if os.path.exists(meta_path):
        with open(meta_path) as fh:
            prov = json.load(fh)
    return PointCloud(pts, prov)
