"""Weighted Bergman projection and its derivative operators.

With ``mu = n + 1 + sigma`` the projection is

    P_sigma f(z) = int_B (1-|w|^2)^sigma / (1 - <z,w>)^mu f(w) dv(w),

and every derivative of order ``|alpha| = n + 1`` is the operator

    Q_alpha f(z) = G * int_B conj(w)^alpha (1-|w|^2)^sigma
                          / (1 - <z,w>)^(n+1+mu) f(w) dv(w),

where ``G = Gamma(n+1+mu) / Gamma(mu) = mu (mu+1) ... (mu+n)``. The dual
operator with respect to ``<., .>_v`` on the left and ``<., .>_lambda`` on
the right is

    Q*_alpha g(z) = G z^alpha (1-|z|^2)^mu
                    * int_B g(w) / (1 - <z,w>)^(n+1+mu) dv(w).

Complex powers use the principal branch, which is safe because
``Re(1 - <z,w>) > 0`` for ``z, w`` in the open ball.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ball_geometry import as_point, inner_product, norm_sq, unit_vector
from .errors import DegenerateParameterError, DomainError
from .quadrature import (
    IntegralEstimate,
    integrate_lambda,
    integrate_pullback,
    integrate_v,
    sample_ball,
)
from .special_functions import gamma_ratio, rising_factorial

__all__ = [
    "ProjectionParams",
    "MultiIndex",
    "ExtremalFunction",
    "WeightedMonomial",
    "Monomial",
    "kernel",
    "project",
    "q_op",
    "q_conj",
    "moebius_bias",
    "maximizer_g",
    "extremal_g",
    "enumerate_multiindices",
    "besov_seminorm",
    "l1_lambda_norm",
    "pairing_v",
    "pairing_lambda",
    "shipped_family",
    "shipped_pairs",
]


@dataclass(frozen=True)
class ProjectionParams:
    """Dimension ``n`` and weight exponent ``sigma`` of ``P_sigma``."""

    n: int
    sigma: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")

    @property
    def mu(self):
        return self.n + 1 + self.sigma

    @property
    def bounded(self):
        """True iff ``sigma > -(n+1)``, i.e. ``mu > 0``."""
        return self.mu > 0

    @property
    def derivative_order(self):
        return self.n + 1

    @property
    def prefactor(self):
        """``Gamma(n+1+mu) / Gamma(mu)``, the constant of ``Q_alpha``."""
        if not self.mu > 0:
            raise DegenerateParameterError(
                f"mu = {self.mu} <= 0: Gamma(n+1+mu)/Gamma(mu) is outside the bounded range mu > 0"
            )
        return gamma_ratio((self.n + 1 + self.mu,), (self.mu,))

    @property
    def prefactor_product(self):
        """Same constant as the rising factorial ``(mu)_(n+1)``."""
        return rising_factorial(self.mu, self.n + 1)


@dataclass(frozen=True)
class MultiIndex:
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if any(a < 0 for a in entries) or not entries:
            raise DomainError(f"invalid multi-index {self.entries!r}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self):
        return len(self.entries)

    @property
    def degree(self):
        return sum(self.entries)

    @property
    def factorial(self):
        return math.prod(math.factorial(a) for a in self.entries)

    def monomial(self, z):
        """``z^alpha`` evaluated along the last axis."""
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape[:-1], dtype=complex)
        for k, a in enumerate(self.entries):
            if a:
                out = out * z[..., k] ** a
        return out

    def leq(self, other):
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other):
        return MultiIndex(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"MultiIndex{self.entries}"


def _as_index(alpha, n=None):
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    if n is not None and alpha.n != n:
        raise DomainError(f"multi-index {alpha} does not match dimension {n}")
    return alpha


def enumerate_multiindices(n, degree):
    """All ``alpha in Z_+^n`` with ``|alpha| = degree``, lexicographically descending."""
    if n < 1 or degree < 0:
        raise DomainError("need n >= 1 and degree >= 0")

    def rec(k, rest):
        if k == n - 1:
            yield (rest,)
            return
        for a in range(rest, -1, -1):
            for tail in rec(k + 1, rest - a):
                yield (a,) + tail

    return [MultiIndex(e) for e in rec(0, degree)]


def _principal_power(base, exponent):
    # complex ** real on numpy arrays is the principal branch
    return np.power(base, -exponent)


def kernel(p, z, w):
    """``K_sigma(z, w) = (1-|w|^2)^sigma / (1 - <z,w>)^(n+1+sigma)``."""
    z = as_point(z)
    w = as_point(w)
    return (1.0 - norm_sq(w)) ** p.sigma * _principal_power(1.0 - inner_product(z, w), p.mu)


def _bias_for(p, cfg):
    if -1 < p.sigma < 0 and cfg.radial_bias > p.sigma:
        return cfg.with_bias(p.sigma)
    return cfg


def _check_alpha(p, alpha):
    alpha = _as_index(alpha, p.n)
    if not p.mu > 0:
        raise DegenerateParameterError(
            f"mu = {p.mu} <= 0: Gamma(n+1+mu)/Gamma(mu) is outside the bounded range mu > 0"
        )
    if alpha.degree != p.n + 1:
        raise DomainError(f"|alpha| must equal n+1 = {p.n + 1}, got {alpha.degree}")
    return alpha


def project(p, f, z, cfg):
    """Monte Carlo estimate of ``P_sigma f(z)``.

    For ``sigma in (-1, 0)`` the radial bias is lowered to ``sigma`` so the
    weight singularity is sampled exactly. For ``sigma <= -1`` the caller
    must supply ``f`` with compensating boundary decay.
    """
    z = as_point(z)

    def integrand(w):
        return kernel(p, z, w) * f(w)

    return integrate_v(integrand, p.n, _bias_for(p, cfg))


def _q_op_values(p, alpha, f, z, w):
    """Integrand of ``Q_alpha f(z)``: shape ``z.shape[:-1] + w.shape[:-1]``."""
    zw = np.einsum("...k,mk->...m", z, np.conj(w))
    col = p.prefactor * np.conj(alpha.monomial(w)) * (1.0 - norm_sq(w)) ** p.sigma * f(w)
    return col * _principal_power(1.0 - zw, p.n + 1 + p.mu)


def q_op(p, alpha, f, z, cfg):
    """Monte Carlo estimate of ``Q_alpha f(z)``, the ``alpha`` derivative of ``P_sigma f``."""
    alpha = _check_alpha(p, alpha)
    z = as_point(z)

    def integrand(w):
        return _q_op_values(p, alpha, f, z, w)

    return integrate_v(integrand, p.n, _bias_for(p, cfg))


def _q_conj_values(p, alpha, g, z, w):
    zw = np.einsum("...k,mk->...m", z, np.conj(w))
    row = p.prefactor * alpha.monomial(z) * (1.0 - norm_sq(z)) ** p.mu
    return row[..., None] * _principal_power(1.0 - zw, p.n + 1 + p.mu) * g(w)


def moebius_bias(p):
    """Radial bias for ``omega`` in the pulled-back ``Q*`` integral.

    After ``w = phi_z(omega)`` a unimodular ``g`` leaves an integrand of size
    ``|1 - <z,omega>|^(mu-n-1)``. Drawing ``omega`` with density
    ``~ (1-|omega|^2)^a`` keeps the second moment bounded in ``z`` iff
    ``a < 2 mu - n - 1`` and the fourth moment (which governs how reliable the
    standard error is) iff ``a < 4 mu / 3 - n - 1``. The bias is clipped to
    ``[-0.8, 0]``; it is 0 whenever ``mu >= 3 (n+1) / 4``.
    """
    return min(0.0, max(-0.8, 4.0 * p.mu / 3.0 - p.n - 1.0))


def q_conj(p, alpha, g, z, cfg, sampler="uniform"):
    """Monte Carlo estimate of ``Q*_alpha g(z)`` for bounded ``g``.

    Parameters
    ----------
    sampler : {"uniform", "moebius"}
        ``"uniform"`` samples ``w`` from ``dv``. ``"moebius"`` substitutes
        ``w = phi_z(omega)``; the integrand's mass near ``z/|z|`` is then
        spread over the whole ball. ``omega`` is drawn with radial bias
        :func:`moebius_bias`, which keeps the variance bounded as
        ``|z| -> 1`` whenever ``mu > n/2`` and slows its growth otherwise.
    """
    alpha = _check_alpha(p, alpha)
    z = as_point(z)
    if z.ndim != 1:
        raise DomainError("q_conj takes a single point z")
    row = p.prefactor * complex(alpha.monomial(z)) * (1.0 - norm_sq(z)) ** p.mu
    q = p.n + 1 + p.mu

    def integrand(w):
        return row * _principal_power(1.0 - inner_product(z, w), q) * g(w)

    if sampler == "uniform":
        return integrate_v(integrand, p.n, cfg.with_bias(0.0))
    if sampler == "moebius":
        return integrate_pullback(integrand, z, cfg.with_bias(moebius_bias(p)))
    raise DomainError(f"unknown sampler {sampler!r}")


@dataclass(frozen=True)
class ExtremalFunction:
    """Unimodular test function ``w -> |1-<z,w>|^q / (1 - conj<z,w>)^q``.

    ``q = n + 1 + mu``. ``kind`` is ``"maximizer"`` for an arbitrary anchor
    ``z`` or ``"boundary_family"`` for ``z = eps * e_1``.
    """

    kind: str
    anchor: np.ndarray
    params: ProjectionParams

    @property
    def exponent(self):
        return self.params.n + 1 + self.params.mu

    def __call__(self, w):
        v = 1.0 - inner_product(self.anchor, np.asarray(w, dtype=complex))
        q = self.exponent
        return np.abs(v) ** q / np.conj(v) ** q


def maximizer_g(p, z):
    """The ``g`` with ``||g||_inf = 1`` that maximizes ``|Q*_alpha g(z)|``."""
    z = as_point(z)
    return ExtremalFunction("maximizer", z, p)


def extremal_g(p, eps):
    """The boundary family ``g_eps``, i.e. the maximizer anchored at ``eps * e_1``."""
    if not 0 < eps < 1:
        raise DomainError(f"eps = {eps!r} must lie in (0, 1)")
    return ExtremalFunction("boundary_family", eps * unit_vector(p.n), p)


def besov_seminorm(p, f, cfg_outer, cfg_inner):
    """Estimate ``sum_{|alpha|=n+1} int_B |Q_alpha f| dv`` by nested Monte Carlo.

    Each outer point ``z_i`` gets its own inner stream
    ``cfg_inner.substream(i)``. The reported ``std_error`` is the outer
    standard error plus the mean inner standard error; the latter also
    bounds the upward bias that the modulus puts on noisy inner values.
    """
    alphas = enumerate_multiindices(p.n, p.n + 1)
    inner_cfg = _bias_for(p, cfg_inner)
    per_point = []
    inner_err = []
    i = 0
    for zs, zw in sample_ball(p.n, cfg_outer.with_bias(0.0)):
        for z, wt in zip(zs, zw):
            total = 0.0
            err = 0.0
            for a in alphas:
                est = q_op(p, a, f, z, inner_cfg.substream(i))
                total += abs(est.value)
                err += est.std_error
            per_point.append(wt * total)
            inner_err.append(wt * err)
            i += 1
    vals = np.asarray(per_point)
    outer_se = float(vals.std(ddof=1) / np.sqrt(len(vals))) if len(vals) > 1 else float("inf")
    combined = outer_se + float(np.mean(inner_err))
    return IntegralEstimate(float(vals.mean()), combined, len(vals))


def l1_lambda_norm(f, n, cfg):
    """Estimate ``int_B |f| dlambda``; rejects ``f`` without enough boundary decay."""
    return integrate_lambda(lambda w: np.abs(f(w)), n, cfg)


def _nested(h, n, cfg_outer, cfg_inner, block=64):
    """Estimate ``int int h(x, y) dv(x) dv(y)`` from an outer and an inner sample.

    ``h(xs, ys)`` returns the matrix ``h(x_i, y_j)``. All outer points share the
    inner sample; the standard error combines the spread of row means over
    ``x`` and of column means over ``y``.
    """
    inner = list(sample_ball(n, cfg_inner))
    ys = np.concatenate([c[0] for c in inner])
    yw = np.concatenate([c[1] for c in inner])
    rows = []
    col_sum = np.zeros(len(ys), dtype=complex)
    count = 0
    for xs, xw in sample_ball(n, cfg_outer):
        for s in range(0, len(xs), block):
            vals = h(xs[s:s + block], ys) * xw[s:s + block, None] * yw[None, :]
            if not np.all(np.isfinite(vals)):
                raise DomainError("nested integrand is not finite")
            rows.append(vals.mean(axis=1))
            col_sum += vals.sum(axis=0)
            count += vals.shape[0]
    rows = np.concatenate(rows)
    cols = col_sum / count
    value = complex(rows.mean())

    def var(a):
        return float(np.var(a.real, ddof=1) + np.var(a.imag, ddof=1))

    se = float(np.sqrt(var(rows) / len(rows) + var(cols) / len(cols)))
    return IntegralEstimate(value, se, len(rows) * len(cols))


def pairing_v(p, alpha, f, g, cfg_outer, cfg_inner):
    """``<Q_alpha f, g>_v = int_B Q_alpha f(z) conj(g(z)) dv(z)``.

    The outer variable is ``z``; the inner integral defining ``Q_alpha f`` is
    sampled with ``cfg_inner`` (radial bias lowered to ``sigma`` if needed).
    """
    alpha = _check_alpha(p, alpha)

    def h(zs, ws):
        return _q_op_values(p, alpha, f, zs, ws) * np.conj(g(zs))[:, None]

    return _nested(h, p.n, cfg_outer.with_bias(0.0), _bias_for(p, cfg_inner))


def pairing_lambda(p, alpha, f, g, cfg_outer, cfg_inner):
    """``<f, Q*_alpha g>_lambda = int_B f(w) conj(Q*_alpha g(w)) dlambda(w)``."""
    alpha = _check_alpha(p, alpha)
    n = p.n

    def h(ws, zs):
        lam = f(ws) / (1.0 - norm_sq(ws)) ** (n + 1)
        return lam[:, None] * np.conj(_q_conj_values(p, alpha, g, ws, zs))

    return _nested(h, n, cfg_outer.with_bias(0.0), cfg_inner.with_bias(0.0))


def _sphere_abs_moment(powers):
    """``int_S prod |zeta_k|^(p_k) dsigma`` for real ``p_k >= 0``."""
    n = len(powers)
    num = [1 + q / 2 for q in powers] + [n]
    return gamma_ratio(num, (n + sum(powers) / 2,))


def _ball_abs_moment(powers, k=0.0):
    """``int_B |w^p| (1-|w|^2)^k dv``."""
    n = len(powers)
    half = sum(powers) / 2
    radial = n * gamma_ratio((n + half, k + 1), (n + half + k + 1,))
    return radial * _sphere_abs_moment(powers)


@dataclass(frozen=True)
class WeightedMonomial:
    """Test function ``scale * (1-|w|^2)^(n+1+k) * w^beta`` with exact norms.

    Every member lies in ``L^1(dlambda)`` for ``k > -1``, and ``P_sigma`` maps
    it to a multiple of ``z^beta``, so all quantities needed by the
    inequality checks have closed forms.
    """

    beta: MultiIndex
    k: float = 1.0
    scale: float = 1.0
    name: str = ""

    @property
    def n(self):
        return self.beta.n

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return self.scale * (1.0 - norm_sq(w)) ** (self.n + 1 + self.k) * self.beta.monomial(w)

    def l1_lambda_exact(self):
        return abs(self.scale) * _ball_abs_moment(self.beta.entries, self.k)

    def projection_coefficient(self, p):
        """``A`` with ``P_sigma f(z) = A z^beta``."""
        s = p.sigma + self.n + 1 + self.k
        b = self.beta.degree
        return (
            self.scale
            * rising_factorial(p.mu, b)
            * math.factorial(self.n)
            * gamma_ratio((s + 1,), (self.n + 1 + b + s,))
        )

    def q_exact(self, p, alpha, z):
        """Exact ``Q_alpha f(z)``."""
        alpha = _as_index(alpha, self.n)
        if not alpha.leq(self.beta):
            return np.zeros(np.asarray(z).shape[:-1], dtype=complex)
        rest = self.beta - alpha
        c = self.projection_coefficient(p) * self.beta.factorial / rest.factorial
        return c * rest.monomial(z)

    def besov_exact(self, p):
        total = 0.0
        a_coef = abs(self.projection_coefficient(p))
        for alpha in enumerate_multiindices(self.n, self.n + 1):
            if alpha.leq(self.beta):
                rest = self.beta - alpha
                total += a_coef * self.beta.factorial / rest.factorial * _ball_abs_moment(rest.entries)
        return total

    def pairing_exact(self, p, alpha, gamma):
        """Exact ``<Q_alpha f, z^gamma>_v``."""
        alpha = _as_index(alpha, self.n)
        gamma = _as_index(gamma, self.n)
        if not alpha.leq(self.beta) or (self.beta - alpha) != gamma:
            return 0.0
        c = self.projection_coefficient(p) * self.beta.factorial / gamma.factorial
        return c * math.factorial(self.n) * gamma.factorial / math.factorial(self.n + gamma.degree)


@dataclass(frozen=True)
class Monomial:
    """Bounded holomorphic monomial ``z^gamma`` (sup norm 1 on the ball)."""

    gamma: MultiIndex

    def __call__(self, z):
        return self.gamma.monomial(z)


def shipped_family(n):
    """Admissible ``f`` used by the inequality and duality checks."""
    e1 = [1] + [0] * (n - 1)
    top = [n + 1] + [0] * (n - 1)
    mixed = [n, 1] + [0] * (n - 2) if n > 1 else [n + 2]
    zero = [0] * n
    return [
        WeightedMonomial(MultiIndex(zero), k=0.0, name="weight"),
        WeightedMonomial(MultiIndex(zero), k=1.0, name="weight_k1"),
        WeightedMonomial(MultiIndex(e1), k=1.0, name="linear"),
        WeightedMonomial(MultiIndex(top), k=1.0, name="top_degree"),
        WeightedMonomial(MultiIndex(mixed), k=1.0, name="mixed"),
        WeightedMonomial(MultiIndex(top), k=1.0, scale=0.0, name="zero"),
    ]


def shipped_pairs(n):
    """``(f, g)`` pairs for the duality check with ``alpha = (n+1, 0, ..., 0)``.

    ``g`` runs over monomials that pair nontrivially with ``Q_alpha f`` as
    well as one that pairs to zero.
    """
    top = [n + 1] + [0] * (n - 1)
    zero = [0] * n
    f_top = WeightedMonomial(MultiIndex([n + 2] + [0] * (n - 1)), k=2.0, name="top_plus")
    f_flat = WeightedMonomial(MultiIndex(top), k=2.0, name="top")
    e1 = [1] + [0] * (n - 1)
    return [
        (f_top, Monomial(MultiIndex(e1))),
        (f_flat, Monomial(MultiIndex(zero))),
        (f_top, Monomial(MultiIndex(zero))),
    ]
