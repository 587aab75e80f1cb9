"""Evidence for the sharp norm of ``P_sigma : L^1(B, dlambda) -> B_1``.

For ``sigma > -(n+1)`` and ``mu = n + 1 + sigma`` the norm is

    C(n, sigma) = n! Gamma(n+1+mu) / Gamma((n+1+mu)/2)^2.

The upper bound is the supremum over ``r`` of ``G * J_{-mu,0}(r e_1)`` with
``G = Gamma(n+1+mu)/Gamma(mu)``, attained only in the limit ``r -> 1``. The
lower bound is witnessed by ``|Q*_alpha g_eps(eps e_1)|`` with
``alpha = (n+1, 0, ..., 0)``, which equals ``G eps^(n+1) J_{-mu,0}(eps e_1)``.
For ``sigma <= -(n+1)`` the function ``J_{-mu,0}`` is unbounded and so is
the operator.
"""

import math
from dataclasses import asdict, dataclass, field

from .ball_geometry import unit_vector
from .bergman_ops import (
    MultiIndex,
    ProjectionParams,
    besov_seminorm,
    enumerate_multiindices,
    extremal_g,
    l1_lambda_norm,
    q_conj,
)
from .errors import DomainError, UnboundedOperatorError
from .special_functions import (
    JIntegralSpec,
    gamma_ratio,
    j_boundary,
    j_closed_form,
    j_limit,
)

__all__ = [
    "NormCertificate",
    "SweepPoint",
    "SpotCheck",
    "TOLERANCES",
    "closed_constant",
    "upper_bound_profile",
    "boundary_limit",
    "lower_bound_sweep",
    "divergence_probe",
    "certify",
    "inequality_spotcheck",
    "default_eps_list",
    "default_radius_grid",
    "alpha_profile",
    "sigma_zero_factorial",
]

TOLERANCES = {
    "gamma_identity_rel": 1e-10,
    "extrapolation_rel": 1e-6,
    "mc_band_sigmas": 3.0,
    # absolute floor for MC bands, relative to the compared value; covers
    # round-off when the sampled integrand is constant and se is ~0
    "mc_roundoff_rel": 1e-10,
    "divergence_ratio": 10.0,
}


def default_eps_list(k_max=12):
    return [1.0 - 2.0**-k for k in range(1, k_max + 1)]


def default_radius_grid():
    return [round(0.1 * i, 1) for i in range(10)] + [0.95, 0.99, 0.999]


def closed_constant(p):
    """``n! Gamma(n+1+mu) / Gamma((n+1+mu)/2)^2`` for ``sigma > -(n+1)``."""
    if not p.bounded:
        raise UnboundedOperatorError(
            f"unbounded: sigma <= -(n+1) (n={p.n}, sigma={p.sigma})"
        )
    half = (p.n + 1 + p.mu) / 2
    return gamma_ratio((p.n + 1, p.n + 1 + p.mu), (half, half))


def upper_bound_profile(p, radius_grid):
    """``[(r, G * J_{-mu,0}(r e_1))]`` over ``radius_grid``."""
    if not p.bounded:
        raise UnboundedOperatorError(f"unbounded: sigma <= -(n+1) (sigma={p.sigma})")
    g = p.prefactor
    return [(float(r), g * j_closed_form(JIntegralSpec(-p.mu, 0.0, p.n, float(r)))) for r in radius_grid]


def boundary_limit(p):
    """``G * J_{-mu,0}(e_1)`` from Gauss summation; equals :func:`closed_constant`."""
    return p.prefactor * j_boundary(-p.mu, 0.0, p.n)


@dataclass(frozen=True)
class SweepPoint:
    eps: float
    numeric: float
    std_error: float
    closed: float


def lower_bound_sweep(p, eps_list, cfg, sampler="moebius"):
    """``|Q*_alpha g_eps(eps e_1)|`` by Monte Carlo next to its closed form.

    Uses ``alpha = (n+1, 0, ..., 0)``; every other ``alpha`` gives zero at
    ``eps e_1``.
    """
    if not p.bounded:
        raise UnboundedOperatorError(f"unbounded: sigma <= -(n+1) (sigma={p.sigma})")
    alpha = MultiIndex((p.n + 1,) + (0,) * (p.n - 1))
    out = []
    for i, eps in enumerate(eps_list):
        eps = float(eps)
        if not 0 < eps < 1:
            raise DomainError(f"eps = {eps!r} must lie in (0, 1)")
        z = eps * unit_vector(p.n)
        est = q_conj(p, alpha, extremal_g(p, eps), z, cfg.substream(i), sampler=sampler)
        closed = p.prefactor * eps ** (p.n + 1) * j_closed_form(JIntegralSpec(-p.mu, 0.0, p.n, eps))
        out.append(SweepPoint(eps, float(abs(est.value)), est.std_error, closed))
    return out


def divergence_probe(p, eps_list=None):
    """``[(eps, J_{-mu,0}(eps e_1))]`` for ``mu <= 0``; default ``eps = 1 - 2^-k``, ``k <= 20``."""
    if p.bounded:
        raise DomainError(f"divergence_probe needs sigma <= -(n+1), got sigma = {p.sigma}")
    if eps_list is None:
        eps_list = default_eps_list(20)
    return [(float(e), j_closed_form(JIntegralSpec(-p.mu, 0.0, p.n, float(e)))) for e in eps_list]


@dataclass
class NormCertificate:
    """Closed form plus numerical evidence for one ``(n, sigma)``.

    ``verdict`` is ``"pass"``, ``"fail"`` or ``"unbounded"``; ``checks`` maps
    each invariant to its outcome and ``errors`` collects failures of
    sub-steps that did not abort the run.
    """

    params: ProjectionParams
    closed_form: float | None
    upper_evidence: list = field(default_factory=list)
    boundary_limit: float | None = None
    extrapolated_limit: float | None = None
    lower_evidence: list = field(default_factory=list)
    divergence_evidence: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    verdict: str = "fail"
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))

    @property
    def passed(self):
        return self.verdict in ("pass", "unbounded")

    def to_dict(self):
        return {
            "params": {"n": self.params.n, "sigma": self.params.sigma, "mu": self.params.mu},
            "closed_form": self.closed_form,
            "upper": [{"r": r, "bound": b} for r, b in self.upper_evidence],
            "boundary_limit": self.boundary_limit,
            "extrapolated_limit": self.extrapolated_limit,
            "lower": [asdict(s) for s in self.lower_evidence],
            "divergence": [{"eps": e, "J": j} for e, j in self.divergence_evidence],
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "errors": list(self.errors),
            "verdict": self.verdict,
            "tolerances": dict(self.tolerances),
        }


def _nondecreasing(values, rel=1e-12):
    return all(b >= a - rel * max(abs(a), abs(b)) for a, b in zip(values, values[1:]))


def _bounded_checks(cert, cfg, eps_list, radius_grid, sampler):
    p = cert.params
    tol = cert.tolerances
    c = cert.closed_form
    rel = tol["gamma_identity_rel"]

    cert.upper_evidence = upper_bound_profile(p, radius_grid)
    bounds = [b for _, b in cert.upper_evidence]
    cert.checks["upper_nondecreasing"] = _nondecreasing(bounds)
    cert.checks["upper_below_constant"] = max(bounds) <= c * (1 + rel)

    cert.boundary_limit = boundary_limit(p)
    cert.checks["boundary_equals_constant"] = abs(cert.boundary_limit - c) <= rel * c
    cert.extrapolated_limit = p.prefactor * j_limit(-p.mu, 0.0, p.n)
    cert.checks["extrapolated_limit_matches"] = (
        abs(cert.extrapolated_limit - c) <= tol["extrapolation_rel"] * c
    )

    cert.lower_evidence = lower_bound_sweep(p, eps_list, cfg, sampler=sampler)
    k = tol["mc_band_sigmas"]
    floor = tol["mc_roundoff_rel"]
    sweep = cert.lower_evidence
    cert.checks["lower_within_band"] = all(
        abs(s.numeric - s.closed) <= k * s.std_error + floor * s.closed for s in sweep
    )
    cert.checks["lower_closed_nondecreasing"] = _nondecreasing([s.closed for s in sweep])
    cert.checks["lower_numeric_nondecreasing"] = all(
        b.numeric >= a.numeric - k * (a.std_error + b.std_error) - floor * b.closed
        for a, b in zip(sweep, sweep[1:])
    )
    cert.checks["lower_below_constant"] = all(
        s.closed <= c * (1 + rel) and s.numeric <= c + k * s.std_error + floor * c for s in sweep
    )


def _unbounded_checks(cert):
    p = cert.params
    probe = divergence_probe(p)
    cert.divergence_evidence = probe
    values = [j for _, j in probe]
    baseline = j_closed_form(JIntegralSpec(-p.mu, 0.0, p.n, 0.5))
    cert.checks["divergence_strictly_increasing"] = bool(all(b > a for a, b in zip(values, values[1:])))
    cert.checks["divergence_ratio"] = bool(values[-1] / baseline > cert.tolerances["divergence_ratio"])


def certify(p, cfg, eps_list=None, radius_grid=None, sampler="moebius"):
    """Assemble a :class:`NormCertificate` for ``P_sigma``.

    Bounded case: closed constant, upper profile, boundary limit and the
    Monte Carlo lower sweep. Unbounded case (``sigma <= -(n+1)``): growth of
    ``J_{-mu,0}`` towards the sphere. Failures of sub-steps are recorded in
    ``errors`` and turn the verdict to ``"fail"``.
    """
    eps_list = default_eps_list() if eps_list is None else list(eps_list)
    radius_grid = default_radius_grid() if radius_grid is None else list(radius_grid)
    if p.bounded:
        cert = NormCertificate(p, closed_constant(p))
        try:
            _bounded_checks(cert, cfg, eps_list, radius_grid, sampler)
        except (ArithmeticError, ValueError) as exc:
            cert.errors.append(f"{type(exc).__name__}: {exc}")
        ok = not cert.errors and cert.checks and all(cert.checks.values())
        cert.verdict = "pass" if ok else "fail"
    else:
        cert = NormCertificate(p, None)
        try:
            _unbounded_checks(cert)
        except (ArithmeticError, ValueError) as exc:
            cert.errors.append(f"{type(exc).__name__}: {exc}")
        ok = not cert.errors and all(cert.checks.values())
        cert.verdict = "unbounded" if ok else "fail"
    return cert


@dataclass(frozen=True)
class SpotCheck:
    name: str
    lhs: float
    lhs_error: float
    rhs: float
    rhs_error: float
    margin: float
    holds: bool


def inequality_spotcheck(p, family, cfg_outer, cfg_inner, cfg_l1, k=3.0):
    """Check ``||P_sigma f||_B1 <= C ||f||_L1(dlambda)`` on each ``f`` in ``family``.

    Both sides are Monte Carlo estimates; ``holds`` allows ``k`` combined
    standard errors.
    """
    if not p.sigma > -1:
        raise DomainError("the shipped test family needs sigma > -1")
    c = closed_constant(p)
    out = []
    for i, f in enumerate(family):
        lhs = besov_seminorm(p, f, cfg_outer.substream(i), cfg_inner.substream(i))
        l1 = l1_lambda_norm(f, p.n, cfg_l1.substream(i))
        rhs = c * l1.value
        rhs_err = c * l1.std_error
        margin = rhs - lhs.value
        holds = margin >= -k * math.hypot(lhs.std_error, rhs_err)
        out.append(
            SpotCheck(getattr(f, "name", repr(f)), lhs.value, lhs.std_error, rhs, rhs_err, margin, bool(holds))
        )
    return out


def alpha_profile(p, eps, cfg):
    """``|Q*_alpha g_eps(eps e_1)|`` for every ``|alpha| = n+1``.

    Only ``alpha = (n+1, 0, ..., 0)`` can be nonzero since ``z^alpha``
    vanishes at ``eps e_1`` otherwise.
    """
    z = eps * unit_vector(p.n)
    g = extremal_g(p, eps)
    return [
        (a, q_conj(p, a, g, z, cfg, sampler="moebius"))
        for a in enumerate_multiindices(p.n, p.n + 1)
    ]


def sigma_zero_factorial(n):
    """``(2n+1)! / n!``, the constant for the unweighted projection."""
    return math.factorial(2 * n + 1) / math.factorial(n)

