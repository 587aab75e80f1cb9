"""Gamma ratios, the Gauss hypergeometric function on [0, 1] and the
radial integral ``J_{c,t}``.

``J_{c,t}(z)`` denotes the weighted integral

    J_{c,t}(z) = int_B (1 - |w|^2)^t / |1 - <z, w>|^(n+1+t+c) dv(w),

which depends on ``z`` only through ``|z|`` and has the closed form

    Gamma(n+1) Gamma(t+1) / Gamma(n+1+t) * 2F1(lam, lam; n+1+t; |z|^2),

with ``lam = (n+1+t+c)/2``. For ``c < 0`` it extends continuously to the
sphere, with boundary value given by Gauss summation.

The hypergeometric function is evaluated by its power series for
``x <= 1/2``. Closer to 1 the series is re-expanded around ``x = 1``
(the ``1 - x`` connection formulas, including the logarithmic case of an
integer parameter excess), so the cost does not blow up as ``x -> 1``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma

from .errors import DivergenceError, DomainError, NumericError

__all__ = [
    "log_gamma",
    "gamma_ratio",
    "rising_factorial",
    "HypergeometricInput",
    "gauss_2f1",
    "gauss_2f1_at_one",
    "JIntegralSpec",
    "j_closed_form",
    "j_boundary",
    "extrapolate_boundary",
    "gauss_2f1_limit",
    "j_limit",
]

MAX_TERMS = 1_000_000
REL_TOL = 1e-16
# Parameter excesses closer than this to an integer use the logarithmic formulas.
INTEGER_SNAP = 1e-12


def log_gamma(x):
    """Natural log of Gamma(x) for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


def _is_nonpositive_int(x):
    return x <= 0 and float(x).is_integer()


def _log_abs_gamma(x):
    """``(log|Gamma(x)|, sign Gamma(x))`` for any real ``x`` off the poles."""
    if _is_nonpositive_int(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1.0
    sign = 1.0 if math.floor(x) % 2 == 0 else -1.0
    return math.lgamma(x), sign


def gamma_ratio(numer, denom=()):
    """``prod Gamma(numer) / prod Gamma(denom)`` evaluated in log space.

    A pole in ``denom`` makes the ratio zero; a pole in ``numer`` is an error.
    """
    log_val = 0.0
    sign = 1.0
    for x in denom:
        if _is_nonpositive_int(x):
            return 0.0
        lg, s = _log_abs_gamma(x)
        log_val -= lg
        sign *= s
    for x in numer:
        lg, s = _log_abs_gamma(x)
        log_val += lg
        sign *= s
    return sign * math.exp(log_val)


def rising_factorial(x, k):
    """Pochhammer symbol ``(x)_k = x (x+1) ... (x+k-1)`` as a plain product."""
    out = 1.0
    for j in range(k):
        out *= x + j
    return out


@dataclass(frozen=True)
class HypergeometricInput:
    """Real parameters ``(a, b; c)`` and argument ``x`` of 2F1."""

    a: float
    b: float
    c: float
    x: float

    def __post_init__(self):
        if _is_nonpositive_int(self.c):
            raise DomainError(f"c = {self.c!r} is a pole of the 2F1 series")
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(f"x = {self.x!r} outside [0, 1]")
        if self.x == 1.0 and not self.c - self.a - self.b > 0:
            raise DivergenceError("2F1 diverges at x = 1 unless c - a - b > 0")


def _series(a, b, c, x):
    """Plain power series; terminates if ``a`` or ``b`` is a nonpositive integer."""
    total = 1.0
    term = 1.0
    small = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
        if term == 0.0:
            return total
        if abs(term) < REL_TOL * abs(total):
            small += 1
            # two in a row guards against a transient tiny term
            if small >= 2:
                return total
        else:
            small = 0
    raise NumericError(
        f"2F1({a}, {b}; {c}; {x}) series did not converge in {MAX_TERMS} terms",
        partial=total,
        bound=abs(term),
    )


def _near_one_fractional(a, b, c, y):
    """Connection formula around x = 1 for non-integer ``s = c - a - b``."""
    s = c - a - b
    first = gamma_ratio((c, s), (c - a, c - b))
    second = gamma_ratio((c, -s), (a, b))
    out = 0.0
    if first != 0.0:
        out += first * _series(a, b, 1.0 - s, y)
    if second != 0.0:
        out += second * y**s * _series(c - a, c - b, s + 1.0, y)
    return out


def _near_one_logarithmic(a, b, m, y):
    """Connection formula around x = 1 for ``c = a + b + m``, integer ``m >= 0``."""
    c = a + b + m
    finite = 0.0
    if m > 0:
        pre = gamma_ratio((m, c), (a + m, b + m))
        term = 1.0
        finite = 1.0
        for k in range(1, m):
            term *= (a + k - 1) * (b + k - 1) / (k * (1 - m + k - 1)) * y
            finite += term
        finite *= pre

    pre = gamma_ratio((c,), (a, b))
    if pre == 0.0:
        return finite
    log_y = math.log(y)
    coef = 1.0 / math.factorial(m)
    total = 0.0
    small = 0
    for k in range(MAX_TERMS):
        if k > 0:
            coef *= (a + m + k - 1) * (b + m + k - 1) / (k * (k + m)) * y
        bracket = (
            log_y
            - digamma(k + 1.0)
            - digamma(k + m + 1.0)
            + digamma(a + k + m)
            + digamma(b + k + m)
        )
        term = coef * bracket
        total += term
        if coef == 0.0:
            break
        if abs(term) < REL_TOL * abs(total):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise NumericError(
            f"logarithmic 2F1 expansion did not converge in {MAX_TERMS} terms",
            partial=total,
            bound=abs(term),
        )
    return finite - (-y) ** m * pre * total


def _f21(a, b, c, x):
    if x == 0.0:
        return 1.0
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return _series(a, b, c, x)
    if x <= 0.5:
        return _series(a, b, c, x)

    y = 1.0 - x
    s = c - a - b
    if _is_nonpositive_int(c - a) or _is_nonpositive_int(c - b):
        # Euler transformation to a terminating series
        return y**s * _series(c - a, c - b, c, x)
    m = round(s)
    if abs(s - m) > INTEGER_SNAP:
        return _near_one_fractional(a, b, c, y)
    if m >= 0:
        return _near_one_logarithmic(a, b, m, y)
    # negative integer excess: Euler transformation flips its sign
    return y**m * _near_one_logarithmic(c - a, c - b, -m, y)


def gauss_2f1(a, b=None, c=None, x=None):
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for real arguments.

    Accepts either a :class:`HypergeometricInput` or the four numbers.
    ``x`` must lie in ``[0, 1]``; ``x = 1`` requires ``c - a - b > 0`` and is
    delegated to :func:`gauss_2f1_at_one`.

    Raises
    ------
    NumericError
        A series failed to converge within the iteration cap.
    """
    h = a if isinstance(a, HypergeometricInput) else HypergeometricInput(
        float(a), float(b), float(c), float(x)
    )
    if h.x == 1.0:
        return gauss_2f1_at_one(h.a, h.b, h.c)
    return _f21(h.a, h.b, h.c, h.x)


def gauss_2f1_at_one(a, b, c):
    """Gauss summation ``Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))``."""
    s = c - a - b
    if not s > 0:
        raise DivergenceError(
            f"2F1({a}, {b}; {c}; 1) diverges: c - a - b = {s} <= 0"
        )
    if _is_nonpositive_int(c):
        raise DomainError(f"c = {c!r} is a pole of the 2F1 series")
    return gamma_ratio((c, s), (c - a, c - b))


@dataclass(frozen=True)
class JIntegralSpec:
    """Parameters of ``J_{c,t}`` at a point of radius ``radius`` in C^n."""

    c: float
    t: float
    n: int
    radius: float = 0.0
    lam: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        if not self.t > -1:
            raise DomainError(f"weight exponent t = {self.t!r} must exceed -1")
        if not 0.0 <= self.radius <= 1.0:
            raise DomainError(f"radius {self.radius!r} outside [0, 1]")
        object.__setattr__(self, "lam", (self.n + 1 + self.t + self.c) / 2.0)

    @classmethod
    def at_point(cls, c, t, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        r = float(np.sqrt(np.sum(np.abs(z) ** 2)))
        return cls(c, t, z.shape[-1], r)

    @property
    def exponent(self):
        """Power of ``|1 - <z, w>|`` in the denominator of the integrand."""
        return self.n + 1 + self.t + self.c

    @property
    def weight_mass(self):
        """``int_B (1-|w|^2)^t dv = Gamma(n+1) Gamma(t+1) / Gamma(n+1+t)``."""
        return gamma_ratio((self.n + 1, self.t + 1), (self.n + 1 + self.t,))


def j_closed_form(spec):
    """Closed form of ``J_{c,t}`` at radius ``spec.radius``."""
    if spec.radius == 1.0:
        return j_boundary(spec.c, spec.t, spec.n)
    x = spec.radius**2
    return spec.weight_mass * gauss_2f1(spec.lam, spec.lam, spec.n + 1 + spec.t, x)


def j_boundary(c, t, n):
    """Boundary value ``J_{c,t}(e_1)``, finite only for ``c < 0``."""
    if not c < 0:
        raise DivergenceError(f"J_(c,t) is unbounded for c = {c} >= 0")
    if not t > -1:
        raise DomainError(f"weight exponent t = {t!r} must exceed -1")
    return gamma_ratio((n + 1, t + 1, -c), ((n + 1 + t - c) / 2, (n + 1 + t - c) / 2))


def extrapolate_boundary(ys, values, excess, order=3):
    """Estimate ``lim_{y -> 0} F`` from samples of ``F(y)`` near ``y = 0``.

    A generalized Richardson step: fits ``values`` by least squares to the
    known form of a hypergeometric function near ``x = 1`` with ``y = 1 - x``,

        F ~ A0 + A1 y + ... + y^s (B0 + B1 y + ...)        (s non-integer)
        F ~ A0 + A1 y + ... + y^m log(y) (B0 + B1 y + ...) (s = m integer)

    keeping powers up to ``order``. Returns the fitted ``A0``.
    """
    ys = np.asarray(ys, dtype=float)
    values = np.asarray(values, dtype=float)
    if not excess > 0:
        raise DivergenceError("no finite limit when the parameter excess is <= 0")
    cols = [np.ones_like(ys)]
    cols += [ys**j for j in range(1, order + 1)]
    m = round(excess)
    log_case = abs(excess - m) <= INTEGER_SNAP
    p = excess
    while p <= order + 1e-12:
        cols.append(ys**p * (np.log(ys) if log_case else 1.0))
        p += 1.0
    basis = np.stack(cols, axis=1)
    if basis.shape[1] >= len(ys):
        raise DomainError("too few samples for the extrapolation basis")
    scale = np.max(np.abs(basis), axis=0)
    coef, *_ = np.linalg.lstsq(basis / scale, values, rcond=None)
    return float(coef[0] / scale[0])


def gauss_2f1_limit(a, b, c, kmin=8, kmax=20):
    """Limit of ``2F1(a, b; c; x)`` as ``x -> 1`` from ``x = 1 - 2^-k``."""
    ks = np.arange(kmin, kmax + 1)
    ys = 2.0 ** (-ks.astype(float))
    values = [gauss_2f1(a, b, c, 1.0 - y) for y in ys]
    return extrapolate_boundary(ys, values, c - a - b)


def j_limit(c, t, n, kmin=8, kmax=20):
    """Limit of ``J_{c,t}(r e_1)`` as ``r -> 1`` from ``r = 1 - 2^-k``."""
    ks = np.arange(kmin, kmax + 1)
    rs = 1.0 - 2.0 ** (-ks.astype(float))
    values = [j_closed_form(JIntegralSpec(c, t, n, r)) for r in rs]
    return extrapolate_boundary(1.0 - rs**2, values, -c)
