"""Sparse multivariate polynomials with real coefficients.

The representation is a dict mapping exponent tuples to float coefficients.
Zero coefficients are never stored, so two polynomials are equal iff their
term dicts are equal ("canonical form").  Arithmetic returns canonical-form
results.

Also provides:

* truncated Taylor series for a few standard density families,
* tensor-product Bernstein approximation on the unit cube, both as an
  explicit polynomial (monomial coefficients) and as a numerically stable
  direct evaluator for large degrees,
* a plain text serialization that round-trips exactly.
"""

import math
import numbers

import numpy as np
from scipy.special import comb, factorial

from .errors import PolynomialFormatError, SeriesError

__all__ = [
    "MultiPoly",
    "SeriesSpec",
    "truncated_series",
    "bernstein_approx",
    "bernstein_values",
    "format_poly",
    "parse_poly",
]


def _powi(base, exp):
    """base**exp for integer exp >= 0 by binary exponentiation."""
    result = 1.0
    b = float(base)
    e = int(exp)
    while e > 0:
        if e & 1:
            result *= b
        b *= b
        e >>= 1
    return result


class MultiPoly:
    """Sparse polynomial in ``nvars`` real variables.

    Parameters
    ----------
    nvars : int
        Number of variables, >= 1.
    terms : dict, optional
        Mapping from exponent tuples (length ``nvars``, nonnegative ints)
        to coefficients.  Zero coefficients are dropped on construction.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        nvars = int(nvars)
        if nvars < 1:
            raise ValueError("nvars must be >= 1, got %d" % nvars)
        self.nvars = nvars
        clean = {}
        if terms:
            for expo, coeff in terms.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != nvars:
                    raise ValueError(
                        "exponent tuple %r has length %d, expected %d"
                        % (expo, len(expo), nvars)
                    )
                if any(e < 0 for e in expo):
                    raise ValueError("negative exponent in %r" % (expo,))
                c = float(coeff)
                if c != 0.0:
                    clean[expo] = clean.get(expo, 0.0) + c
                    if clean[expo] == 0.0:
                        del clean[expo]
        self.terms = clean

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: float(value)})

    @classmethod
    def variable(cls, nvars, index):
        """The monomial x_index (0-based)."""
        if not 0 <= index < nvars:
            raise ValueError("variable index %d out of range" % index)
        expo = [0] * nvars
        expo[index] = 1
        return cls(nvars, {tuple(expo): 1.0})

    # ------------------------------------------------------------------
    # structure

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Max total degree of any stored term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_per_axis(self):
        """Max exponent seen on each axis; all zeros for the zero polynomial."""
        degs = [0] * self.nvars
        for expo in self.terms:
            for i, e in enumerate(expo):
                if e > degs[i]:
                    degs[i] = e
        return tuple(degs)

    def coefficient(self, expo):
        return self.terms.get(tuple(expo), 0.0)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    # ------------------------------------------------------------------
    # arithmetic

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise ValueError(
                "cannot combine polynomials in %d and %d variables"
                % (self.nvars, other.nvars)
            )

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for expo, c in other.terms.items():
            s = out.get(expo, 0.0) + c
            if s == 0.0:
                out.pop(expo, None)
            else:
                out[expo] = s
        result = MultiPoly.zero(self.nvars)
        result.terms = out
        return result

    __radd__ = __add__

    def __neg__(self):
        result = MultiPoly.zero(self.nvars)
        result.terms = {e: -c for e, c in self.terms.items()}
        return result

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, numbers.Real):
            return MultiPoly.constant(self.nvars, other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            c = float(other)
            if c == 0.0:
                return MultiPoly.zero(self.nvars)
            result = MultiPoly.zero(self.nvars)
            result.terms = {e: c * v for e, v in self.terms.items()}
            return result
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_compatible(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expo, 0.0) + c1 * c2
                if s == 0.0:
                    out.pop(expo, None)
                else:
                    out[expo] = s
        result = MultiPoly.zero(self.nvars)
        result.terms = out
        return result

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1.0)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    # evaluation

    def evaluate(self, point):
        """Evaluate at a single point.

        ``point`` is a sequence of length ``nvars``; a bare scalar is
        accepted when ``nvars == 1``.
        """
        if self.nvars == 1 and isinstance(point, numbers.Real):
            point = (point,)
        xs = tuple(float(v) for v in point)
        if len(xs) != self.nvars:
            raise ValueError(
                "point has %d coordinates, expected %d" % (len(xs), self.nvars)
            )
        total = 0.0
        for expo, coeff in self.terms.items():
            term = coeff
            for x, e in zip(xs, expo):
                if e:
                    term *= _powi(x, e)
            total += term
        return total

    __call__ = evaluate

    def eval_many(self, points):
        """Evaluate at many points at once.

        Parameters
        ----------
        points : ndarray, shape (m, nvars)

        Returns
        -------
        ndarray, shape (m,)
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.nvars:
            raise ValueError(
                "points have %d coordinates, expected %d"
                % (pts.shape[1], self.nvars)
            )
        out = np.zeros(pts.shape[0])
        for expo, coeff in self.terms.items():
            term = np.full(pts.shape[0], coeff)
            for axis, e in enumerate(expo):
                if e:
                    term *= pts[:, axis] ** e
            out += term
        return out

    # ------------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(%d, 0)" % self.nvars
        parts = []
        for expo in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[expo]
            mono = "*".join(
                "x%d^%d" % (i, e) for i, e in enumerate(expo) if e
            )
            parts.append("%r%s" % (c, "*" + mono if mono else ""))
        return "MultiPoly(%d, %s)" % (self.nvars, " + ".join(parts))


# ----------------------------------------------------------------------
# truncated series


class SeriesSpec:
    """Request for a truncated Taylor expansion of a standard density.

    Families
    --------
    exponential : rate ``lam`` > 0, expansion of lam*exp(-lam*x) about 0.
    gaussian : ``mean``, ``sigma`` > 0, expansion of the normal density
        in powers of (x - mean) via the Taylor series of exp(u) at
        u = -(x - mean)^2 / (2 sigma^2).
    explicit : literal coefficient list, lowest order first.
    shifted-power : sum of (x - shift)^i for i = 0..order.

    ``order`` is the truncation order K: powers of the *series variable*
    up to and including K are kept.  For the gaussian family the series
    variable is u, so the polynomial degree is 2K.
    """

    def __init__(self, family, order=None, lam=None, mean=None, sigma=None,
                 coeffs=None, shift=None):
        self.family = family
        self.order = order
        self.lam = lam
        self.mean = mean
        self.sigma = sigma
        self.coeffs = None if coeffs is None else tuple(float(c) for c in coeffs)
        self.shift = shift
        self._validate()

    def _validate(self):
        fam = self.family
        if fam == "exponential":
            if self.lam is None or not self.lam > 0:
                raise SeriesError("exponential family needs rate lam > 0")
            self._need_order()
        elif fam == "gaussian":
            if self.sigma is None or not self.sigma > 0:
                raise SeriesError("gaussian family needs sigma > 0")
            if self.mean is None:
                raise SeriesError("gaussian family needs a mean")
            self._need_order()
        elif fam == "explicit":
            if not self.coeffs:
                raise SeriesError("explicit family needs a coefficient list")
            if self.order is None:
                self.order = len(self.coeffs) - 1
            elif self.order != len(self.coeffs) - 1:
                raise SeriesError(
                    "explicit order %r does not match %d coefficients"
                    % (self.order, len(self.coeffs))
                )
        elif fam == "shifted-power":
            if self.shift is None:
                raise SeriesError("shifted-power family needs a shift")
            self._need_order()
        else:
            raise SeriesError("unknown series family %r" % (fam,))

    def _need_order(self):
        if self.order is None or int(self.order) != self.order or self.order < 0:
            raise SeriesError("truncation order must be an integer >= 0")
        self.order = int(self.order)

    @classmethod
    def exponential(cls, lam, order):
        return cls("exponential", order=order, lam=lam)

    @classmethod
    def gaussian(cls, mean, sigma, order):
        return cls("gaussian", order=order, mean=mean, sigma=sigma)

    @classmethod
    def explicit(cls, coeffs):
        return cls("explicit", coeffs=coeffs)

    @classmethod
    def shifted_power(cls, shift, order):
        return cls("shifted-power", order=order, shift=shift)

    def __repr__(self):
        fields = []
        for name in ("order", "lam", "mean", "sigma", "coeffs", "shift"):
            v = getattr(self, name)
            if v is not None:
                fields.append("%s=%r" % (name, v))
        return "SeriesSpec(%r, %s)" % (self.family, ", ".join(fields))


def _shift_univariate(coeffs, a):
    """Rewrite sum_i c_i t^i with t = x - a as coefficients in x.

    coeffs is indexed by power of t.  Returns coefficients indexed by
    power of x: new_j = sum_{i>=j} c_i C(i,j) (-a)^(i-j).
    """
    n = len(coeffs)
    out = [0.0] * n
    for i, c in enumerate(coeffs):
        if c == 0.0:
            continue
        for j in range(i + 1):
            out[j] += c * comb(i, j, exact=True) * _powi(-a, i - j)
    return out


def truncated_series(spec):
    """Build the truncated series named by ``spec`` as a univariate MultiPoly."""
    fam = spec.family
    if fam == "exponential":
        lam = float(spec.lam)
        terms = {}
        for k in range(spec.order + 1):
            terms[(k,)] = lam * _powi(-lam, k) / factorial(k, exact=True)
        return MultiPoly(1, terms)

    if fam == "gaussian":
        m = float(spec.mean)
        sigma = float(spec.sigma)
        pref = 1.0 / math.sqrt(2.0 * math.pi * sigma * sigma)
        # coefficients in t = x - m: only even powers appear,
        # t^(2k) coefficient = pref * (-1/(2 sigma^2))^k / k!
        coeffs_t = [0.0] * (2 * spec.order + 1)
        u_scale = -1.0 / (2.0 * sigma * sigma)
        for k in range(spec.order + 1):
            coeffs_t[2 * k] = pref * _powi(u_scale, k) / factorial(k, exact=True)
        if m == 0.0:
            coeffs_x = coeffs_t
        else:
            coeffs_x = _shift_univariate(coeffs_t, m)
        return MultiPoly(1, {(i,): c for i, c in enumerate(coeffs_x)})

    if fam == "explicit":
        return MultiPoly(1, {(i,): c for i, c in enumerate(spec.coeffs)})

    if fam == "shifted-power":
        a = float(spec.shift)
        coeffs_t = [1.0] * (spec.order + 1)
        coeffs_x = _shift_univariate(coeffs_t, a) if a != 0.0 else coeffs_t
        return MultiPoly(1, {(i,): c for i, c in enumerate(coeffs_x)})

    raise SeriesError("unknown series family %r" % (fam,))


# ----------------------------------------------------------------------
# Bernstein approximation on the unit cube


def _bernstein_conversion_matrix(degree):
    """Matrix T with monomial coeffs = T @ grid values, one axis.

    For values f(i/N), i = 0..N, the Bernstein polynomial of degree N is
    sum_m coeff_m x^m with coeff_m = C(N,m) * Delta^m f(0), where Delta is
    the forward difference on the grid.  T[m, i] = C(N,m) C(m,i) (-1)^(m-i).
    """
    n1 = degree + 1
    t = np.zeros((n1, n1))
    for m in range(n1):
        cnm = comb(degree, m, exact=True)
        for i in range(m + 1):
            t[m, i] = cnm * comb(m, i, exact=True) * (-1.0) ** (m - i)
    return t


def _grid_values(f, degree, nvars):
    """Evaluate f on the tensor grid (i_1/N, ..., i_n/N)."""
    axis = np.arange(degree + 1) / degree if degree > 0 else np.zeros(1)
    shape = (degree + 1,) * nvars
    vals = np.empty(shape)
    if nvars == 1:
        for i, x in enumerate(axis):
            vals[i] = float(f(x))
    else:
        for idx in np.ndindex(*shape):
            point = np.array([axis[i] for i in idx])
            vals[idx] = float(f(point))
    return vals


def bernstein_approx(f, degree, nvars=1):
    """Tensor-product Bernstein approximation of f on [0,1]^nvars.

    Parameters
    ----------
    f : callable
        For ``nvars == 1`` called with a scalar in [0,1]; otherwise called
        with a 1-d ndarray of length ``nvars``.  A MultiPoly works directly.
    degree : int
        Bernstein degree N >= 1, same on every axis.
    nvars : int
        Number of variables.

    Returns
    -------
    MultiPoly
        The approximant expanded in the monomial basis.

    Notes
    -----
    Monomial coefficients of a degree-N Bernstein polynomial grow like
    C(N, N/2), so evaluating the returned polynomial suffers catastrophic
    cancellation for large N (around N = 50 in double precision).  Use
    ``bernstein_values`` to evaluate high-degree approximants stably.
    """
    degree = int(degree)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    nvars = int(nvars)
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    vals = _grid_values(f, degree, nvars)
    t = _bernstein_conversion_matrix(degree)
    coeffs = vals
    for axis in range(nvars):
        coeffs = np.moveaxis(
            np.tensordot(t, np.moveaxis(coeffs, axis, 0), axes=(1, 0)), 0, axis
        )
    terms = {}
    for idx in np.ndindex(*coeffs.shape):
        c = float(coeffs[idx])
        if c != 0.0:
            terms[idx] = c
    return MultiPoly(nvars, terms)


def bernstein_values(f, degree, points, nvars=1):
    """Evaluate the Bernstein approximant of f directly in the Bernstein basis.

    Numerically stable for degrees up to about 1000: each basis function
    C(N,i) x^i (1-x)^(N-i) lies in [0,1] on the unit interval, so no
    cancellation occurs.  Agrees with evaluating ``bernstein_approx(f, N)``
    wherever the latter is itself stable.

    Parameters
    ----------
    f : callable
        Same convention as ``bernstein_approx``.
    degree : int
        Bernstein degree N >= 1.
    points : ndarray
        Shape (m,) for ``nvars == 1``, else (m, nvars); all in [0,1].
    nvars : int

    Returns
    -------
    ndarray, shape (m,)
    """
    degree = int(degree)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    vals = _grid_values(f, degree, nvars)
    pts = np.asarray(points, dtype=float)
    if nvars == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] != nvars:
        raise ValueError("points must have shape (m, %d)" % nvars)
    idx = np.arange(degree + 1)
    binoms = comb(degree, idx)
    out = vals
    # contract one axis at a time with the per-point basis vectors
    for axis in range(nvars):
        x = pts[:, axis][:, None]
        basis = binoms * x ** idx * (1.0 - x) ** (degree - idx)  # (m, N+1)
        # out has shape (m?, N+1, ...) depending on how many axes are done
        if axis == 0:
            out = np.tensordot(basis, out, axes=(1, 0))  # (m, rest...)
        else:
            out = np.einsum("mi,mi...->m...", basis, out)
    return out


# ----------------------------------------------------------------------
# text format


def format_poly(p):
    """Serialize a MultiPoly to the plain text format.

    First line ``nvars=<n>``; one line per term: the coefficient (repr,
    so parsing recovers the exact double) followed by the exponents.
    Terms are written in graded order, ties broken lexicographically,
    so equal polynomials serialize identically.
    """
    lines = ["nvars=%d" % p.nvars]
    for expo in sorted(p.terms, key=lambda e: (sum(e), e)):
        c = p.terms[expo]
        lines.append(" ".join([repr(c)] + [str(e) for e in expo]))
    return "\n".join(lines) + "\n"


def parse_poly(text):
    """Parse the text format produced by ``format_poly``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise PolynomialFormatError("empty polynomial text")
    head = lines[0]
    if not head.startswith("nvars="):
        raise PolynomialFormatError(
            "first line must be 'nvars=<n>', got %r" % head
        )
    try:
        nvars = int(head[len("nvars="):])
    except ValueError:
        raise PolynomialFormatError("bad nvars value in %r" % head) from None
    if nvars < 1:
        raise PolynomialFormatError("nvars must be >= 1, got %d" % nvars)
    terms = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != nvars + 1:
            raise PolynomialFormatError(
                "term line %r has %d fields, expected coefficient plus %d exponents"
                % (ln, len(parts), nvars)
            )
        try:
            coeff = float(parts[0])
            expo = tuple(int(v) for v in parts[1:])
        except ValueError:
            raise PolynomialFormatError("unparsable term line %r" % ln) from None
        if any(e < 0 for e in expo):
            raise PolynomialFormatError("negative exponent in %r" % ln)
        if expo in terms:
            raise PolynomialFormatError("duplicate exponent tuple in %r" % ln)
        terms[expo] = coeff
    return MultiPoly(nvars, terms)
