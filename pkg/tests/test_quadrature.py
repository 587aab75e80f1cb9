import math

import numpy as np
import pytest

from bergman_norm.errors import DomainError, InadmissibleIntegrandError, NumericError
from bergman_norm.quadrature import (
    QuadratureConfig,
    integrate_lambda,
    integrate_pullback,
    integrate_radial,
    integrate_v,
    j_numeric,
    sample_ball,
    worker_count,
)
from bergman_norm.special_functions import JIntegralSpec, j_closed_form
from bergman_norm.ball_geometry import norm_sq


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(0)
    with pytest.raises(DomainError):
        QuadratureConfig(10, radial_bias=-1.0)
    with pytest.raises(DomainError):
        QuadratureConfig(10, chunk_size=20)
    cfg = QuadratureConfig(200_000)
    assert cfg.chunk_size == 65536 and cfg.n_chunks == 4
    assert cfg.substream(3, 4).stream == (3, 4)


@pytest.mark.parametrize("bias", [0.0, -0.5, 1.5])
def test_samples_inside_ball_and_weights_normalised(bias):
    total, count = 0.0, 0
    for pts, wts in sample_ball(3, QuadratureConfig(50_000, seed=1, radial_bias=bias)):
        assert pts.shape[1] == 3
        assert np.all(norm_sq(pts) < 1)
        total += wts.sum()
        count += len(wts)
    assert count == 50_000
    assert total / count == pytest.approx(1.0, abs=0.03)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_moments_of_dv(n):
    # int |w|^2 dv = n/(n+1), int |w_1|^2 dv = 1/(n+1)
    est = integrate_v(lambda w: norm_sq(w), n, QuadratureConfig(100_000, seed=2))
    assert est.agrees_with(n / (n + 1))
    est = integrate_v(lambda w: np.abs(w[:, 0]) ** 2, n, QuadratureConfig(100_000, seed=3))
    assert est.agrees_with(1 / (n + 1))


def test_constant_integrand_has_zero_error():
    est = integrate_v(lambda w: np.ones(len(w)), 2, QuadratureConfig(1000))
    assert est.value == pytest.approx(1.0)
    assert est.std_error == pytest.approx(0.0, abs=1e-12)


def test_complex_integrand_component_errors():
    est = integrate_v(lambda w: w[:, 0] + 2j * np.abs(w[:, 0]), 1, QuadratureConfig(50_000, seed=4))
    assert isinstance(est.value, complex)
    assert est.agrees_with(2j * 2 / 3)
    assert est.std_error == pytest.approx(math.hypot(*est.component_errors))


def test_bias_absorbs_weight_singularity():
    # int (1-|w|^2)^-0.5 dv over C^1 = 2; the weight cancels the integrand
    f = lambda w: (1 - norm_sq(w)) ** -0.5
    est = integrate_v(f, 1, QuadratureConfig(20_000, seed=5, radial_bias=-0.5))
    assert est.value == pytest.approx(2.0, rel=1e-8)


def test_determinism_across_threads(monkeypatch):
    cfg = QuadratureConfig(300_000, seed=11, chunk_size=10_000)
    f = lambda w: np.abs(1 - w[:, 0] * 0.9) ** -3
    monkeypatch.setenv("BERGMAN_THREADS", "1")
    a = integrate_v(f, 2, cfg)
    monkeypatch.setenv("BERGMAN_THREADS", "8")
    b = integrate_v(f, 2, cfg)
    assert a.value == b.value and a.std_error == b.std_error
    c = integrate_v(f, 2, cfg.substream(1))
    assert c.value != a.value


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("BERGMAN_THREADS", "3")
    assert worker_count() == 3
    for bad in ("0", "-1", "two"):
        monkeypatch.setenv("BERGMAN_THREADS", bad)
        with pytest.raises(DomainError):
            worker_count()


def test_nonfinite_sample_reported():
    def f(w):
        out = np.ones(len(w))
        out[0] = np.nan
        return out

    with pytest.raises(NumericError) as info:
        integrate_v(f, 1, QuadratureConfig(100))
    assert info.value.point is not None


def test_lambda_integral():
    # int (1-|w|^2)^(n+1) dlambda = 1
    n = 2
    est = integrate_lambda(lambda w: (1 - norm_sq(w)) ** (n + 1), n, QuadratureConfig(1000))
    assert est.value == pytest.approx(1.0)
    # (1-|w|^2)^(n+1+k) gives n! Gamma(k+1)/Gamma(n+1+k)
    est = integrate_lambda(lambda w: (1 - norm_sq(w)) ** (n + 1.5), n, QuadratureConfig(100_000, seed=3))
    assert est.agrees_with(2 * math.gamma(1.5) / math.gamma(3.5))


def test_lambda_integral_rejects_nonintegrable():
    with pytest.raises(InadmissibleIntegrandError):
        integrate_lambda(lambda w: np.ones(len(w)), 1, QuadratureConfig(1000))


def test_pullback_matches_direct():
    z = np.array([0.5, 0.3j])
    f = lambda w: np.abs(1 - w @ np.conj(z)) ** -2.5
    a = integrate_v(f, 2, QuadratureConfig(200_000, seed=6))
    b = integrate_pullback(f, z, QuadratureConfig(200_000, seed=7))
    assert a.agrees_with(b.value, other_error=b.std_error)


def test_radial_rule():
    # g is a function of u = |w|^2; int |w|^4 dv in C^2 = 2/(2+2)
    assert integrate_radial(lambda u: u**2, 2) == pytest.approx(0.5, rel=1e-13)


@pytest.mark.parametrize("key", [(1, -1, 0.0, 0.6), (2, -2, 0.5, 0.9), (1, -3, 0.5, 0.3)])
def test_j_numeric(key):
    n, c, t, r = key
    spec = JIntegralSpec(c, t, n, r)
    est = j_numeric(spec, QuadratureConfig(200_000, seed=8))
    assert est.agrees_with(j_closed_form(spec))


def test_j_numeric_at_explicit_point():
    spec = JIntegralSpec(-1, 0.0, 2, 0.7)
    z = 0.7 * np.array([0.6, 0.8j])
    est = j_numeric(spec, QuadratureConfig(100_000, seed=9), point=z)
    assert est.agrees_with(j_closed_form(spec))
