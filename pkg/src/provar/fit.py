"""Implicit polynomial fitting: recover f with f(points) ~ 0.

Given a cloud sampled from (or near) a variety f = 0, the best degree-d
implicit polynomial in the least-squares sense is the smallest
eigenvector of the Gram matrix of monomial evaluations.  Columns are
RMS-scaled before forming the Gram matrix; without that, degree-4
recovery on clouds outside the unit box is numerically hopeless.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from .errors import NumericalError, UnderdeterminedError
from .poly import MultiPoly

__all__ = [
    "monomial_basis",
    "basis_size",
    "FitResult",
    "fit_implicit",
    "select_degree",
    "fit_to_json",
]


def monomial_basis(nvars, degree):
    """Exponent tuples of all monomials of total degree <= degree.

    Graded order: by total degree, then lexicographically with earlier
    variables first, so for two variables and degree two the basis reads
    1, x, y, x^2, xy, y^2.
    """
    if nvars < 1 or degree < 0:
        raise ValueError("need nvars >= 1 and degree >= 0")
    expos = []

    def rec(prefix, remaining, budget):
        if remaining == 1:
            expos.append(prefix + (budget,))
            return
        for e in range(budget, -1, -1):
            rec(prefix + (e,), remaining - 1, budget - e)

    out = []
    for d in range(degree + 1):
        expos.clear()
        rec((), nvars, d)
        out.extend(expos)
    return out


def basis_size(nvars, degree):
    """Number of monomials of total degree <= degree: C(nvars + degree, degree)."""
    return int(comb(nvars + degree, degree, exact=True))


def _vandermonde(pts, basis):
    v = np.empty((pts.shape[0], len(basis)))
    for col, expo in enumerate(basis):
        term = np.ones(pts.shape[0])
        for axis, e in enumerate(expo):
            if e:
                term = term * pts[:, axis] ** e
        v[:, col] = term
    return v


@dataclass
class FitResult:
    """Outcome of an implicit fit.

    coefficients follow ``basis`` order, have unit Euclidean norm, and
    the first nonzero coefficient is positive (sign convention, since -f
    and f define the same variety).  ``converged`` is False only when a
    degree sweep exhausted max_degree without meeting its threshold.
    """

    degree: int
    basis: list
    coefficients: np.ndarray
    residual_rms: float
    gram_condition: float
    converged: bool = True
    swept_residuals: dict = None

    def to_multipoly(self, nvars=None):
        nv = nvars if nvars is not None else len(self.basis[0])
        return MultiPoly(
            nv, {e: c for e, c in zip(self.basis, self.coefficients) if c != 0.0}
        )


def fit_implicit(cloud, degree):
    """Least-squares implicit polynomial of the given total degree.

    Minimizes mean(f(p)^2) over unit-norm coefficient vectors: the
    minimizer is the eigenvector for the smallest eigenvalue of
    M = V^T V / n, V the monomial design matrix.  V's columns are
    RMS-scaled first and the scaling is folded back into the returned
    coefficients.

    Raises
    ------
    UnderdeterminedError
        If the cloud has fewer points than the basis has monomials.
    NumericalError
        If the symmetric eigensolver fails to converge.
    """
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    degree = int(degree)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    nvars = pts.shape[1]
    basis = monomial_basis(nvars, degree)
    nb = len(basis)
    n = pts.shape[0]
    if n < nb:
        raise UnderdeterminedError(
            "fit of degree %d in %d variables needs at least %d points, got %d"
            % (degree, nvars, nb, n)
        )
    v = _vandermonde(pts, basis)
    col_rms = np.sqrt((v * v).mean(axis=0))
    col_rms[col_rms == 0.0] = 1.0
    vs = v / col_rms
    gram = vs.T @ vs / n
    try:
        eigvals, eigvecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigendecomposition failed: %s" % exc) from exc
    u = eigvecs[:, 0]
    coeffs = u / col_rms
    coeffs = coeffs / np.linalg.norm(coeffs)
    for c in coeffs:
        if c != 0.0:
            if c < 0.0:
                coeffs = -coeffs
            break
    resid = v @ coeffs
    residual_rms = math.sqrt(float((resid * resid).mean()))
    lo = float(eigvals[0])
    hi = float(eigvals[-1])
    gram_condition = hi / lo if lo > 0 else math.inf
    return FitResult(
        degree=degree,
        basis=basis,
        coefficients=coeffs,
        residual_rms=residual_rms,
        gram_condition=gram_condition,
    )


def select_degree(cloud, max_degree, residual_threshold):
    """Sweep degrees 1..max_degree; return the first fit under threshold.

    The sweep stops at the first qualifying degree (which is therefore
    the smallest).  If none qualifies, the max_degree fit is returned
    with ``converged=False``.  Residuals of every degree actually swept
    are recorded on the result.

    Raises
    ------
    UnderdeterminedError
        If even degree 1 has more monomials than the cloud has points.
    """
    max_degree = int(max_degree)
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    swept = {}
    last = None
    for d in range(1, max_degree + 1):
        try:
            result = fit_implicit(cloud, d)
        except UnderdeterminedError:
            if last is None:
                raise
            break
        swept[d] = result.residual_rms
        last = result
        if result.residual_rms <= residual_threshold:
            result.swept_residuals = dict(swept)
            return result
    last.converged = False
    last.swept_residuals = dict(swept)
    return last


def fit_to_json(result):
    obj = {
        "degree": int(result.degree),
        "converged": bool(result.converged),
        "residual_rms": float(result.residual_rms),
        "gram_condition": float(result.gram_condition),
        "basis": [list(e) for e in result.basis],
        "coefficients": [float(c) for c in result.coefficients],
        "swept_residuals": {
            str(k): float(v) for k, v in (result.swept_residuals or {}).items()
        },
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
