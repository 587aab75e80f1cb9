"""Invariant suites run by ``bergman-norm check``.

Each suite returns a list of :class:`CheckResult`. Monte Carlo comparisons
use 3-standard-error bands; exact identities use the tolerances quoted in
the check names.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ball_geometry import (
    identity_residual,
    moebius_map,
    norm_sq,
    real_jacobian,
)
from .bergman_ops import (
    MultiIndex,
    ProjectionParams,
    maximizer_g,
    pairing_lambda,
    pairing_v,
    project,
    q_conj,
    q_op,
    shipped_family,
    shipped_pairs,
    WeightedMonomial,
)
from .certification import closed_constant, inequality_spotcheck
from .quadrature import QuadratureConfig, integrate_pullback, integrate_v, j_numeric
from .special_functions import (
    JIntegralSpec,
    gauss_2f1,
    gauss_2f1_at_one,
    gauss_2f1_limit,
    j_boundary,
    j_closed_form,
    j_limit,
)

__all__ = [
    "CheckResult",
    "SUITES",
    "run_suite",
    "random_ball_points",
    "finite_difference_jacobian",
    "holomorphic_fd",
    "identities_suite",
    "change_of_variables_suite",
    "hypergeometric_suite",
    "adjoint_suite",
    "inequality_suite",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + (f": {self.detail}" if self.detail else "")


def random_ball_points(rng, count, n, radius=1.0):
    """``count`` points uniform in the ball of C^n of the given radius."""
    g = rng.standard_normal((count, 2 * n))
    d = g[:, :n] + 1j * g[:, n:]
    d /= np.sqrt(norm_sq(d))[:, None]
    r = radius * rng.random(count) ** (1.0 / (2 * n))
    return d * r[:, None]


def _realify(v):
    return np.concatenate([v.real, v.imag])


def finite_difference_jacobian(z, omega, h=1e-5):
    """Central-difference determinant of ``omega -> phi_z(omega)`` as a map of R^(2n)."""
    n = len(omega)
    cols = []
    for k in range(2 * n):
        e = np.zeros(n, dtype=complex)
        e[k % n] = 1.0 if k < n else 1j
        plus = _realify(moebius_map(z, omega + h * e))
        minus = _realify(moebius_map(z, omega - h * e))
        cols.append((plus - minus) / (2 * h))
    return float(np.linalg.det(np.stack(cols, axis=1)))


def holomorphic_fd(F, z, alpha, h=1e-3):
    """Mixed partial ``d^alpha F(z)`` of a holomorphic ``F`` by central differences.

    Uses the order-``m`` central stencil ``sum_j (-1)^j C(m,j) F(z + (m/2 - j) h e_k) / h^m``
    in each coordinate (half steps for odd ``m``), taken along real directions.
    """
    z = np.asarray(z, dtype=complex)
    stencils = []
    for k, m in enumerate(alpha):
        stencils.append([((m / 2 - j) * h, (-1) ** j * math.comb(m, j) / h**m) for j in range(m + 1)])
    total = 0.0
    for combo in np.ndindex(*[len(s) for s in stencils]):
        shift = np.zeros_like(z)
        coef = 1.0
        for k, j in enumerate(combo):
            step, c = stencils[k][j]
            shift[k] = step
            coef *= c
        total = total + coef * F(z + shift)
    return total


def identities_suite(samples=10_000, seed=0):
    """Pointwise identity, involution, ball preservation and Jacobian checks."""
    out = []
    rng = np.random.default_rng(seed)
    for n in (1, 2, 3):
        zs = random_ball_points(rng, samples, n, 0.999)
        ws = random_ball_points(rng, samples, n, 0.999)
        res = max(float(identity_residual(z, w)) for z, w in zip(zs, ws))
        out.append(CheckResult(f"identity residual < 1e-12 (n={n})", res < 1e-12, f"max {res:.2e}"))

        zs = random_ball_points(rng, samples, n, 0.99)
        ws = random_ball_points(rng, samples, n, 0.99)
        inv = 0.0
        inside = True
        fixed = 0.0
        for z, w in zip(zs, ws):
            phi = moebius_map(z, w)
            inside &= bool(norm_sq(phi) < 1.0)
            inv = max(inv, float(np.max(np.abs(moebius_map(z, phi) - w))))
            fixed = max(fixed, float(np.max(np.abs(moebius_map(z, z)))))
        out.append(CheckResult(f"involution < 1e-12 (n={n})", inv < 1e-12, f"max {inv:.2e}"))
        out.append(CheckResult(f"ball preserved (n={n})", inside))
        out.append(CheckResult(f"phi_z(z) = 0 (n={n})", fixed < 1e-12, f"max {fixed:.2e}"))

        worst = 0.0
        for z, w in zip(zs[:200], ws[:200]):
            exact = float(real_jacobian(z, w))
            worst = max(worst, abs(finite_difference_jacobian(z, w) - exact) / exact)
        out.append(CheckResult(f"Jacobian vs finite differences < 1e-6 (n={n})", worst < 1e-6, f"max rel {worst:.2e}"))
    return out


def change_of_variables_suite(samples=50_000, seed=0, n_points=20, dims=(1, 2)):
    """Change of variables under ``phi_z``: three estimates of one integral.

    For ``a`` in ``{-2, -1, 0, 1, n}`` the integrals of
    ``(1-|z|^2)^a |1-<z,w>|^-(n+1+a)``, of ``|1-<z,w>|^-(n+1-a)`` and of the
    first integrand pulled back by ``phi_z`` (with the real Jacobian) must
    agree; at least 19 of 20 random ``z`` must fall inside every pairwise
    3-standard-error band.
    """
    out = []
    rng = np.random.default_rng(seed)
    for n in dims:
        zs = random_ball_points(rng, n_points, n, 0.8)
        for a in sorted({-2, -1, 0, 1, n}):
            inside = [0, 0, 0]
            for i, z in enumerate(zs):
                cfg = QuadratureConfig(samples, seed=seed).substream(n, a + 10, i)
                scale = (1.0 - norm_sq(z)) ** a

                def lhs_f(w, z=z, scale=scale):
                    return scale * np.abs(1.0 - w @ np.conj(z)) ** (-(n + 1 + a))

                def rhs_f(w, z=z):
                    return np.abs(1.0 - w @ np.conj(z)) ** (-(n + 1 - a))

                lhs = integrate_v(lhs_f, n, cfg.substream(0))
                rhs = integrate_v(rhs_f, n, cfg.substream(1))
                pull = integrate_pullback(lhs_f, z, cfg.substream(2))
                pairs = [(lhs, rhs), (lhs, pull), (rhs, pull)]
                for j, (x, y) in enumerate(pairs):
                    inside[j] += x.agrees_with(y.value, other_error=y.std_error)
            ok = all(c >= n_points - 1 for c in inside)
            out.append(
                CheckResult(
                    f"change of variables (n={n}, a={a})",
                    ok,
                    f"inside band lhs/rhs {inside[0]}, lhs/pullback {inside[1]}, rhs/pullback {inside[2]} of {n_points}",
                )
            )
    return out


def j_grid():
    return [
        (n, c, t, r)
        for n in (1, 2)
        for c in (-3, -2, -1)
        for t in (0.0, 0.5)
        for r in (0.0, 0.3, 0.6, 0.9)
    ]


def hypergeometric_suite(samples=200_000, seed=0):
    """Gauss summation, radial monotonicity, boundary limits and the MC grid for ``J``."""
    out = []
    worst = 0.0
    mono = True
    worst_limit = 0.0
    for n in (1, 2, 3):
        for c in (-3.0, -2.0, -1.0, -0.5):
            for t in (0.0, 0.5, -0.5, 2.0):
                spec = JIntegralSpec(c, t, n)
                gauss = gauss_2f1_at_one(spec.lam, spec.lam, n + 1 + t) * spec.weight_mass
                b = j_boundary(c, t, n)
                worst = max(worst, abs(gauss - b) / b)
                vals = [j_closed_form(JIntegralSpec(c, t, n, r)) for r in np.r_[np.arange(0, 1, 0.1), 0.99]]
                mono &= all(y >= x for x, y in zip(vals, vals[1:]))
                worst_limit = max(worst_limit, abs(j_limit(c, t, n) - b) / b)
    out.append(CheckResult("Gauss summation matches J boundary (1e-10)", worst < 1e-10, f"max rel {worst:.2e}"))
    out.append(CheckResult("J nondecreasing in |z|", mono))
    out.append(CheckResult("extrapolated boundary limit (1e-6)", worst_limit < 1e-6, f"max rel {worst_limit:.2e}"))

    worst_series = 0.0
    for a, b, c in [(0.5, 0.5, 2.0), (1.25, 1.25, 3.5), (-0.5, -0.5, 2.0), (0.3, 0.7, 1.2)]:
        worst_series = max(worst_series, abs(gauss_2f1_limit(a, b, c) - gauss_2f1_at_one(a, b, c)))
    out.append(CheckResult("2F1 series limit at 1 (1e-6)", worst_series < 1e-6, f"max {worst_series:.2e}"))
    ln = abs(gauss_2f1(1, 1, 2, 0.5) - 2 * math.log(2))
    out.append(CheckResult("2F1(1,1;2;1/2) = 2 ln 2", ln < 1e-14, f"err {ln:.1e}"))

    inside = 0
    grid = j_grid()
    for i, (n, c, t, r) in enumerate(grid):
        spec = JIntegralSpec(c, t, n, r)
        est = j_numeric(spec, QuadratureConfig(samples, seed=seed).substream(i))
        inside += est.agrees_with(j_closed_form(spec))
    frac = inside / len(grid)
    out.append(CheckResult("J Monte Carlo vs closed form (>= 95% of cells)", frac >= 0.95, f"{inside}/{len(grid)}"))
    return out


def adjoint_suite(samples=4_000, seed=0, inner_samples=20_000):
    """Duality of ``Q`` and ``Q*``, derivative identity, prefactor and maximizer."""
    out = []
    for sigma in (0.0, 1.0):
        p = ProjectionParams(1, sigma)
        alpha = MultiIndex((2,))
        for j, (f, g) in enumerate(shipped_pairs(1)):
            lhs = pairing_v(p, alpha, f, g, QuadratureConfig(samples, seed=seed).substream(j, 0),
                            QuadratureConfig(inner_samples, seed=seed).substream(j, 1))
            rhs = pairing_lambda(p, alpha, f, g, QuadratureConfig(samples, seed=seed).substream(j, 2),
                                 QuadratureConfig(inner_samples, seed=seed).substream(j, 3))
            ok = lhs.agrees_with(rhs.value, other_error=rhs.std_error)
            out.append(CheckResult(
                f"<Qf,g>_v = <f,Q*g>_lambda (sigma={sigma}, {f.name}, g=z^{g.gamma.entries})",
                ok, f"{lhs.value:.5f} vs {rhs.value:.5f}",
            ))

    p = ProjectionParams(1, 0.0)
    f = WeightedMonomial(MultiIndex((2,)), k=0.0)
    cfg = QuadratureConfig(100_000, seed=seed)
    z = np.array([0.3 + 0j])
    fd = holomorphic_fd(lambda x: project(p, f, x, cfg).value, z, (2,))
    q = q_op(p, (2,), f, z, cfg).value
    rel = abs(fd - q) / abs(q)
    out.append(CheckResult("q_op = d^alpha project (1e-3, common random numbers)", rel < 1e-3, f"rel {rel:.2e}"))

    worst = 0.0
    for n in range(1, 6):
        for sigma in (-0.5, 0.0, 1.0, 2.5):
            p = ProjectionParams(n, sigma)
            worst = max(worst, abs(p.prefactor - p.prefactor_product) / p.prefactor_product)
    out.append(CheckResult("prefactor Gamma ratio = rising factorial (1e-12)", worst < 1e-12, f"max rel {worst:.1e}"))

    p = ProjectionParams(1, 0.0)
    z = np.array([0.7 + 0j])
    alpha = MultiIndex((2,))
    cfg = QuadratureConfig(50_000, seed=seed)
    best = q_conj(p, alpha, maximizer_g(p, z), z, cfg)
    rng = np.random.default_rng(seed)
    beaten = 0
    for i in range(100):
        phase = rng.standard_normal(3)
        amp = rng.uniform(0.5, 1.0)

        def g(w, phase=phase, amp=amp):
            base = maximizer_g(p, z)(w)
            return amp * base * np.exp(1j * (phase[0] * w[:, 0].real + phase[1] * w[:, 0].imag + phase[2]))

        est = q_conj(p, alpha, g, z, cfg.substream(i))
        if abs(est.value) > best.value.real + 3 * math.hypot(est.std_error, best.std_error):
            beaten += 1
    out.append(CheckResult("maximizer dominates 100 bounded perturbations", beaten == 0, f"{beaten} exceed"))
    return out


def inequality_suite(samples=2_000, seed=0, inner_samples=2_000):
    """``||P f||_B1 <= C ||f||_L1(dlambda)`` over the shipped family (n=1, sigma=0)."""
    p = ProjectionParams(1, 0.0)
    rows = inequality_spotcheck(
        p,
        shipped_family(1),
        QuadratureConfig(samples, seed=seed),
        QuadratureConfig(inner_samples, seed=seed).substream(1),
        QuadratureConfig(100_000, seed=seed).substream(2),
    )
    c = closed_constant(p)
    return [
        CheckResult(
            f"besov <= {c:g} * L1(dlambda) for {r.name}",
            r.holds,
            f"lhs {r.lhs:.4g} +- {r.lhs_error:.2g}, rhs {r.rhs:.4g}, margin {r.margin:.4g}",
        )
        for r in rows
    ]


SUITES = {
    "identities": identities_suite,
    "lemma-trans": change_of_variables_suite,
    "hypergeometric": hypergeometric_suite,
    "adjoint": adjoint_suite,
    "inequality": inequality_suite,
}


def run_suite(name, samples=None, seed=0):
    """Run suite ``name``; ``samples`` overrides its default sample count."""
    fn = SUITES[name]
    kwargs = {"seed": seed}
    if samples is not None:
        kwargs["samples"] = samples
    return fn(**kwargs)

