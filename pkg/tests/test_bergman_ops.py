import math

import numpy as np
import pytest

from bergman_norm.bergman_ops import (
    MultiIndex,
    Monomial,
    ProjectionParams,
    WeightedMonomial,
    besov_seminorm,
    enumerate_multiindices,
    extremal_g,
    kernel,
    l1_lambda_norm,
    maximizer_g,
    moebius_bias,
    pairing_lambda,
    pairing_v,
    project,
    q_conj,
    q_op,
    shipped_family,
    shipped_pairs,
)
from bergman_norm.checks import holomorphic_fd
from bergman_norm.errors import DegenerateParameterError, DomainError
from bergman_norm.quadrature import QuadratureConfig
from bergman_norm.special_functions import JIntegralSpec, j_closed_form

# P_sigma[(1-|w|^2)^(2+k) w^beta](z) / z^beta in C^1, by 2-d quadrature (mpmath)
MPMATH_PROJECTION = [
    ((0.5, 1.0, 2), 0.0543900543900544),
    ((0.0, 0.0, 2), 0.1),
    ((1.0, 2.0, 3), 0.0198412698412698),
]


def test_params():
    p = ProjectionParams(2, 0.5)
    assert p.mu == 3.5 and p.bounded and p.derivative_order == 3
    assert p.prefactor == pytest.approx(3.5 * 4.5 * 5.5)
    assert not ProjectionParams(1, -2.0).bounded
    with pytest.raises(DegenerateParameterError):
        ProjectionParams(1, -2.5).prefactor
    with pytest.raises(DomainError):
        ProjectionParams(0, 0.0)


def test_multiindex():
    a = MultiIndex((2, 1))
    assert a.degree == 3 and a.factorial == 2 and a.n == 2
    assert a.monomial(np.array([2.0, 3.0])) == pytest.approx(12.0)
    assert MultiIndex((1, 0)).leq(a) and not MultiIndex((0, 2)).leq(a)
    assert (a - MultiIndex((1, 1))) == MultiIndex((1, 0))
    with pytest.raises(DomainError):
        MultiIndex((-1, 0))


@pytest.mark.parametrize("n,degree", [(1, 2), (2, 3), (3, 4), (4, 5)])
def test_enumeration_count(n, degree):
    alphas = enumerate_multiindices(n, degree)
    assert len(alphas) == math.comb(n + degree - 1, n - 1)
    assert len(set(alphas)) == len(alphas)
    assert alphas[0].entries[0] == degree
    if degree == n + 1:
        assert len(alphas) == math.factorial(2 * n) // (math.factorial(n + 1) * math.factorial(n - 1))


def test_kernel_one_dimensional():
    p = ProjectionParams(1, 0.0)
    z, w = np.array([0.3 + 0.1j]), np.array([0.5j])
    assert kernel(p, z, w) == pytest.approx(1 / (1 - z[0] * np.conj(w[0])) ** 2)


@pytest.mark.parametrize("key,expected", MPMATH_PROJECTION)
def test_projection_coefficient_against_quadrature(key, expected):
    sigma, k, b = key
    f = WeightedMonomial(MultiIndex((b,)), k=k)
    assert f.projection_coefficient(ProjectionParams(1, sigma)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("sigma", [0.0, 1.0, -0.5])
def test_project_monte_carlo(sigma):
    p = ProjectionParams(2, sigma)
    f = WeightedMonomial(MultiIndex((1, 1)), k=1.0)
    z = np.array([0.4, -0.3j])
    est = project(p, f, z, QuadratureConfig(200_000, seed=1))
    assert est.agrees_with(f.projection_coefficient(p) * z[0] * z[1])


def test_project_reproduces_holomorphic_polynomial():
    # the kernel carries no weight normalisation, so P_sigma h = h * n! Gamma(sigma+1) / Gamma(n+1+sigma)
    p = ProjectionParams(1, 1.0)
    z = np.array([0.5 + 0.2j])
    est = project(p, Monomial(MultiIndex((2,))), z, QuadratureConfig(400_000, seed=2))
    assert est.agrees_with(z[0] ** 2 / 2)
    p = ProjectionParams(2, 0.0)
    z = np.array([0.3, 0.4j])
    est = project(p, Monomial(MultiIndex((1, 1))), z, QuadratureConfig(400_000, seed=3))
    assert est.agrees_with(z[0] * z[1])


@pytest.mark.parametrize("n,sigma", [(1, 0.0), (2, 1.0), (2, -0.5)])
def test_q_op_matches_exact(n, sigma):
    p = ProjectionParams(n, sigma)
    f = WeightedMonomial(MultiIndex((n + 2,) + (0,) * (n - 1)), k=1.0)
    alpha = MultiIndex((n + 1,) + (0,) * (n - 1))
    z = 0.5 * np.exp(0.3j) * np.eye(n)[0]
    est = q_op(p, alpha, f, z, QuadratureConfig(200_000, seed=3))
    assert est.agrees_with(complex(f.q_exact(p, alpha, z)))


def test_q_op_rejects_wrong_order():
    p = ProjectionParams(1, 0.0)
    with pytest.raises(DomainError):
        q_op(p, (1,), WeightedMonomial(MultiIndex((1,))), np.zeros(1), QuadratureConfig(10))
    with pytest.raises(DegenerateParameterError):
        q_op(ProjectionParams(1, -2.0), (2,), WeightedMonomial(MultiIndex((1,))), np.zeros(1), QuadratureConfig(10))


def test_q_op_is_derivative_of_projection():
    # common random numbers: same config on both sides
    p = ProjectionParams(1, 0.0)
    f = WeightedMonomial(MultiIndex((2,)), k=0.0)
    cfg = QuadratureConfig(100_000, seed=4)
    z = np.array([0.3 + 0j])
    fd = holomorphic_fd(lambda x: project(p, f, x, cfg).value, z, (2,))
    q = q_op(p, (2,), f, z, cfg).value
    assert abs(fd - q) / abs(q) < 1e-3
    assert q.real == pytest.approx(0.2, rel=0.01)


def test_fd_helper_on_polynomial():
    F = lambda z: z[0] ** 3 * z[1] ** 2
    z = np.array([0.2 + 0.1j, -0.3j])
    assert holomorphic_fd(F, z, (2, 1), h=1e-3) == pytest.approx(6 * z[0] * 2 * z[1], rel=1e-5)


def test_maximizer_is_unimodular():
    p = ProjectionParams(2, 0.5)
    g = maximizer_g(p, np.array([0.6, 0.2j]))
    w = np.array([[0.1, 0.3j], [-0.5, 0.4]])
    np.testing.assert_allclose(np.abs(g(w)), 1.0)
    assert g.exponent == pytest.approx(2 + 1 + 3.5)
    with pytest.raises(DomainError):
        extremal_g(p, 1.0)


@pytest.mark.parametrize("n,sigma", [(1, 0.0), (1, 1.0), (2, -0.5)])
@pytest.mark.parametrize("sampler", ["uniform", "moebius"])
def test_q_conj_extremal_value(n, sigma, sampler):
    # |Q* g_eps(eps e_1)| = G eps^(n+1) J_{-mu,0}(eps e_1)
    p = ProjectionParams(n, sigma)
    eps = 0.6
    alpha = MultiIndex((n + 1,) + (0,) * (n - 1))
    z = eps * np.eye(n)[0]
    est = q_conj(p, alpha, extremal_g(p, eps), z, QuadratureConfig(200_000, seed=5), sampler=sampler)
    closed = p.prefactor * eps ** (n + 1) * j_closed_form(JIntegralSpec(-p.mu, 0.0, n, eps))
    assert est.agrees_with(closed, floor=1e-10 * closed)


def test_q_conj_other_alpha_vanishes_on_axis():
    p = ProjectionParams(2, 0.0)
    z = np.array([0.7, 0.0])
    est = q_conj(p, (2, 1), extremal_g(p, 0.7), z, QuadratureConfig(1000))
    assert est.value == 0


def test_moebius_bias_range():
    assert moebius_bias(ProjectionParams(1, 0.0)) == 0.0
    b = moebius_bias(ProjectionParams(1, -1.9))
    assert -0.8 <= b < 0


def test_q_conj_unknown_sampler():
    p = ProjectionParams(1, 0.0)
    with pytest.raises(DomainError):
        q_conj(p, (2,), extremal_g(p, 0.5), np.array([0.5]), QuadratureConfig(10), sampler="grid")


def test_l1_lambda_norm_family():
    for f in shipped_family(2)[1:]:
        est = l1_lambda_norm(f, 2, QuadratureConfig(100_000, seed=6))
        assert est.agrees_with(f.l1_lambda_exact(), floor=1e-12)


def test_l1_lambda_weight_exact():
    # int (1-|w|^2)^(n+1) dlambda = 1
    f = WeightedMonomial(MultiIndex((0,)), k=0.0)
    assert f.l1_lambda_exact() == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["linear", "top_degree", "mixed"])
def test_besov_matches_exact(name):
    p = ProjectionParams(1, 0.0)
    f = {g.name: g for g in shipped_family(1)}[name]
    est = besov_seminorm(p, f, QuadratureConfig(400, seed=7), QuadratureConfig(4000, seed=8))
    assert est.agrees_with(f.besov_exact(p))


def test_besov_of_zero_function():
    p = ProjectionParams(1, 0.0)
    zero = shipped_family(1)[-1]
    est = besov_seminorm(p, zero, QuadratureConfig(50), QuadratureConfig(100))
    assert est.value == 0.0 and zero.besov_exact(p) == 0.0


@pytest.mark.parametrize("sigma", [0.0, 1.0])
def test_pairings_match_exact(sigma):
    p = ProjectionParams(1, sigma)
    alpha = MultiIndex((2,))
    for j, (f, g) in enumerate(shipped_pairs(1)):
        exact = f.pairing_exact(p, alpha, g.gamma)
        lv = pairing_v(p, alpha, f, g, QuadratureConfig(1000, seed=j), QuadratureConfig(10_000, seed=j + 10))
        ll = pairing_lambda(p, alpha, f, g, QuadratureConfig(1000, seed=j + 20), QuadratureConfig(10_000, seed=j + 30))
        assert lv.agrees_with(exact)
        assert ll.agrees_with(exact)


def test_pairing_exact_values():
    # <Q f, z>_v for f = (1-|w|^2)^4 w^3 in C^1, sigma = 0: A = (2)_3 * Gamma(5)/Gamma(9) ... times 3!/1! * 1/2
    p = ProjectionParams(1, 0.0)
    f = WeightedMonomial(MultiIndex((3,)), k=2.0)
    a = 2 * 3 * 4 * math.gamma(5) / math.gamma(9)
    assert f.pairing_exact(p, (2,), (1,)) == pytest.approx(a * 6 / 2)
    assert f.pairing_exact(p, (2,), (0,)) == 0.0


def test_enumeration_order_n2():
    assert [a.entries for a in enumerate_multiindices(2, 3)] == [(3, 0), (2, 1), (1, 2), (0, 3)]
    assert len(enumerate_multiindices(3, 4)) == 15


def test_maximizer_at_origin_is_one():
    p = ProjectionParams(1, 0.0)
    w = np.array([[0.3 + 0.4j], [-0.7j]])
    np.testing.assert_allclose(maximizer_g(p, np.zeros(1))(w), 1.0)


def test_q_conj_vanishes_at_origin():
    p = ProjectionParams(2, 0.5)
    est = q_conj(p, (3, 0), extremal_g(p, 0.5), np.zeros(2), QuadratureConfig(1000))
    assert est.value == 0


def test_q_conj_of_maximizer_is_real():
    p = ProjectionParams(1, 0.0)
    z = np.array([0.7 + 0j])
    est = q_conj(p, (2,), maximizer_g(p, z), z, QuadratureConfig(100_000, seed=12))
    assert est.value.real > 0
    assert abs(est.value.imag) <= 3 * est.component_errors[1] + 1e-12


def test_q_op_of_constant_vanishes_at_origin():
    p = ProjectionParams(1, 0.0)
    est = q_op(p, (2,), lambda w: np.ones(len(w)), np.zeros(1), QuadratureConfig(100_000, seed=13))
    assert est.agrees_with(0.0)
