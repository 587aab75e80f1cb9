"""Seeded Monte Carlo integration over the unit ball of C^n.

Integrals are taken against the normalized volume measure ``dv`` (so that
``int_B dv = 1``) or the invariant measure ``dlambda = dv / (1-|w|^2)^(n+1)``.

Sample points are drawn as a uniform direction on the unit sphere of C^n
times a radius with ``u = |w|^2 ~ Beta(n, t_imp + 1)``. Under ``dv`` the
law of ``u`` is ``Beta(n, 1)``, so the importance weight is

    n B(n, t_imp + 1) (1 - u)^(-t_imp),

which is identically 1 for ``t_imp = 0``. Choosing ``t_imp = sigma`` absorbs
a boundary singularity ``(1-|w|^2)^sigma`` with ``sigma in (-1, 0)``.

Samples are generated chunk by chunk. Chunk ``i`` uses a Philox stream keyed
by ``(seed, *stream, i)``, and chunk statistics are merged in chunk order, so
an estimate is a pure function of ``(integrand, n, config)`` whatever the
number of worker threads (``BERGMAN_THREADS``).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .ball_geometry import as_point, inner_product, moebius_map, norm_sq, real_jacobian, unit_vector
from .errors import DomainError, InadmissibleIntegrandError, NumericError
from .special_functions import gamma_ratio

__all__ = [
    "QuadratureConfig",
    "IntegralEstimate",
    "sample_ball",
    "integrate_v",
    "integrate_lambda",
    "integrate_pullback",
    "integrate_radial",
    "j_numeric",
    "worker_count",
]

DEFAULT_CHUNK = 1 << 16
# Smallest sampled 1 - |w|^2; keeps |w| < 1 after rounding of the coordinates.
GAP_MIN = 1e-15


@dataclass(frozen=True)
class QuadratureConfig:
    """Sampling plan for a Monte Carlo integral.

    Parameters
    ----------
    sample_count : int
        Number of points ``N``.
    seed : int
        Root seed (any 64-bit integer).
    radial_bias : float
        Exponent ``t_imp > -1`` of the radial importance density.
    chunk_size : int, optional
        Points per RNG chunk; defaults to ``min(N, 65536)``.
    stream : tuple of int
        Extra key appended to the seed, used to derive independent
        sub-streams (e.g. one per outer point of a nested integral).
    """

    sample_count: int
    seed: int = 0
    radial_bias: float = 0.0
    chunk_size: int | None = None
    stream: tuple = ()

    def __post_init__(self):
        if self.sample_count < 1:
            raise DomainError("sample_count must be >= 1")
        if not self.radial_bias > -1:
            raise DomainError(f"radial_bias {self.radial_bias!r} must exceed -1")
        if self.chunk_size is None:
            object.__setattr__(self, "chunk_size", min(self.sample_count, DEFAULT_CHUNK))
        if not 1 <= self.chunk_size <= self.sample_count:
            raise DomainError("chunk_size must lie in [1, sample_count]")

    @property
    def n_chunks(self):
        return -(-self.sample_count // self.chunk_size)

    def substream(self, *key):
        """Same plan on an independent stream keyed by ``key``."""
        return replace(self, stream=self.stream + tuple(int(k) for k in key))

    def with_bias(self, radial_bias):
        return replace(self, radial_bias=float(radial_bias))

    def with_samples(self, sample_count):
        return replace(self, sample_count=int(sample_count), chunk_size=None)


@dataclass(frozen=True)
class IntegralEstimate:
    """Monte Carlo estimate ``value +- std_error`` from ``n_samples`` points.

    For complex integrands ``component_errors`` holds the standard errors of
    the real and imaginary parts and ``std_error`` their root-sum-square.
    """

    value: complex | float
    std_error: float
    n_samples: int
    component_errors: tuple = (0.0, 0.0)

    @property
    def real(self):
        return float(np.real(self.value))

    def agrees_with(self, target, k=3.0, other_error=0.0, floor=0.0):
        """``|value - target| <= k * sqrt(se^2 + other_error^2) + floor``."""
        band = k * float(np.hypot(self.std_error, other_error)) + floor
        return bool(abs(self.value - target) <= band)

    def __repr__(self):
        return f"IntegralEstimate({self.value!r} +- {self.std_error:.3g}, N={self.n_samples})"


def worker_count():
    """Thread cap from ``BERGMAN_THREADS``; never affects results."""
    raw = os.environ.get("BERGMAN_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        k = int(raw)
    except ValueError:
        raise DomainError(f"BERGMAN_THREADS must be a positive integer, got {raw!r}") from None
    if k < 1:
        raise DomainError(f"BERGMAN_THREADS must be a positive integer, got {raw!r}")
    return k


def _chunk_rng(cfg, index):
    seq = np.random.SeedSequence(cfg.seed & (2**64 - 1), spawn_key=cfg.stream + (index,))
    return np.random.Generator(np.random.Philox(seq))


def _chunk_points(n, cfg, index):
    start = index * cfg.chunk_size
    m = min(cfg.chunk_size, cfg.sample_count - start)
    rng = _chunk_rng(cfg, index)
    g = rng.standard_normal((m, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    t = cfg.radial_bias
    # draw the gap 1 - |w|^2 directly so it keeps full relative precision
    gap = np.maximum(rng.beta(t + 1.0, n, size=m), GAP_MIN)
    r = np.sqrt(1.0 - gap)
    points = (g[:, :n] + 1j * g[:, n:]) * r[:, None]
    if t == 0.0:
        weights = np.ones(m)
    else:
        weights = n * gamma_ratio((n, t + 1.0), (n + t + 1.0,)) * gap ** (-t)
    return points, weights


def sample_ball(n, cfg):
    """Yield ``(points, weights)`` chunks realizing ``dv`` on the ball of C^n.

    ``points`` has shape ``(m, n)``; the weighted mean of ``f(points)`` is an
    unbiased estimate of ``int_B f dv``.
    """
    if n < 1:
        raise DomainError("dimension must be >= 1")
    for i in range(cfg.n_chunks):
        yield _chunk_points(n, cfg, i)


def _chunk_moments(values):
    """(count, mean, centered sum of squares) for real and imaginary parts."""
    m = values.shape[0]
    re = values.real
    im = values.imag if np.iscomplexobj(values) else np.zeros(m)
    mre, mim = re.mean(), im.mean()
    return m, mre, mim, float(np.sum((re - mre) ** 2)), float(np.sum((im - mim) ** 2))


def _merge(a, b):
    # Chan et al. pairwise update, applied in chunk order for reproducibility.
    na, ra, ia, sra, sia = a
    nb, rb, ib, srb, sib = b
    n = na + nb
    dr, di = rb - ra, ib - ia
    return (
        n,
        ra + dr * nb / n,
        ia + di * nb / n,
        sra + srb + dr * dr * na * nb / n,
        sia + sib + di * di * na * nb / n,
    )


def _evaluate_chunk(f, n, cfg, index):
    points, weights = _chunk_points(n, cfg, index)
    vals = np.asarray(f(points))
    if vals.shape != weights.shape:
        vals = np.broadcast_to(vals, weights.shape)
    vals = vals * weights
    finite = np.isfinite(vals)
    if not np.all(finite):
        j = int(np.argmin(finite))
        raise NumericError(
            f"integrand is not finite at sample {index * cfg.chunk_size + j}",
            point=points[j],
        )
    return _chunk_moments(vals), np.iscomplexobj(vals)


def _estimate(f, n, cfg):
    if n < 1:
        raise DomainError("dimension must be >= 1")
    workers = min(worker_count(), cfg.n_chunks)
    indices = range(cfg.n_chunks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda i: _evaluate_chunk(f, n, cfg, i), indices))
    else:
        parts = [_evaluate_chunk(f, n, cfg, i) for i in indices]
    total = parts[0][0]
    for moments, _ in parts[1:]:
        total = _merge(total, moments)
    is_complex = any(c for _, c in parts)
    count, mre, mim, sre, sim = total
    if count > 1:
        se_re = float(np.sqrt(sre / (count - 1) / count))
        se_im = float(np.sqrt(sim / (count - 1) / count))
    else:
        se_re = se_im = float("inf")
    if is_complex:
        return IntegralEstimate(complex(mre, mim), float(np.hypot(se_re, se_im)), count, (se_re, se_im))
    return IntegralEstimate(float(mre), se_re, count, (se_re, 0.0))


def integrate_v(f, n, cfg):
    """Estimate ``int_B f dv``.

    ``f`` maps a ``(m, n)`` complex array of points to ``m`` values. When the
    integrand carries a factor ``(1-|w|^2)^sigma`` with ``sigma < 0`` the
    config should use ``radial_bias <= sigma``.

    Raises
    ------
    NumericError
        Some weighted sample is not finite; ``point`` holds the offender.
    """
    return _estimate(f, n, cfg)


def _boundary_profile(f, n, depth):
    """max |f| / (1-|w|^2)^n over a fixed set of directions at 1-|w|^2 = depth."""
    rng = np.random.Generator(np.random.Philox(12345))
    g = rng.standard_normal((16, 2 * n))
    dirs = np.vstack([unit_vector(n)[None, :], (g[:, :n] + 1j * g[:, n:])])
    dirs /= np.sqrt(norm_sq(dirs))[:, None]
    vals = np.abs(np.asarray(f(dirs * np.sqrt(1.0 - depth)), dtype=complex))
    return float(np.max(vals)) / depth**n


def integrate_lambda(f, n, cfg, check_admissible=True):
    """Estimate ``int_B f dlambda`` with ``dlambda = dv / (1-|w|^2)^(n+1)``.

    With ``check_admissible`` the integrand is probed on two shells near the
    sphere first: ``|f| / (1-|w|^2)^n`` must shrink towards the boundary,
    otherwise ``f`` is not integrable against ``dlambda`` and
    :class:`InadmissibleIntegrandError` is raised.
    """
    if check_admissible:
        shallow = _boundary_profile(f, n, 1e-4)
        deep = _boundary_profile(f, n, 1e-8)
        if not np.isfinite(deep) or (deep > 0 and deep >= shallow):
            raise InadmissibleIntegrandError(
                "integrand does not decay fast enough to be integrable against dlambda",
                partial=deep,
            )

    def ratio(w):
        return f(w) / (1.0 - norm_sq(w)) ** (n + 1)

    return _estimate(ratio, n, cfg)


def integrate_pullback(f, z, cfg):
    """Estimate ``int_B f dv`` through the substitution ``w = phi_z(omega)``.

    ``int_B f(w) dv(w) = int_B f(phi_z(omega)) J(z, omega) dv(omega)`` where
    ``J`` is the real Jacobian of ``phi_z``. Integrands that concentrate near
    ``z/|z|`` when ``|z|`` is close to 1 become nearly flat in ``omega``.
    """
    z = as_point(z)
    n = z.shape[-1]

    def pulled(omega):
        return f(moebius_map(z, omega)) * real_jacobian(z, omega)

    return _estimate(pulled, n, cfg)


def integrate_radial(g, n, node_count=64):
    """Gauss-Legendre value of ``n int_0^1 u^(n-1) g(u) du``.

    This is ``int_B g(|w|^2) dv`` for a radial integrand.
    """
    x, wts = np.polynomial.legendre.leggauss(node_count)
    u = 0.5 * (x + 1.0)
    vals = np.asarray(g(u), dtype=float) * np.ones_like(u)
    if not np.all(np.isfinite(vals)):
        raise NumericError("radial integrand is not finite at a node", point=u[~np.isfinite(vals)][0])
    return float(n * 0.5 * np.sum(wts * u ** (n - 1) * vals))


def j_numeric(spec, cfg, point=None):
    """Monte Carlo estimate of ``J_{c,t}`` at ``point`` (default ``radius * e_1``).

    The radial bias of ``cfg`` is replaced by ``min(t, 0)``.
    """
    n = spec.n
    z = spec.radius * unit_vector(n) if point is None else as_point(point)
    if z.shape != (n,):
        raise DomainError(f"point must have shape ({n},)")
    t_imp = min(spec.t, 0.0)
    residual = spec.t - t_imp
    p = spec.exponent

    def integrand(w):
        val = np.abs(1.0 - inner_product(z, w)) ** (-p)
        if residual:
            val = val * (1.0 - norm_sq(w)) ** residual
        return val

    return _estimate(integrand, n, cfg.with_bias(t_imp))
