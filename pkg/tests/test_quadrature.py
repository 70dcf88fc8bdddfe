from math import exp, pi, sqrt

import numpy as np
import pytest

from levy_spectral import (AccuracyError, DomainError, QuadratureConfig, RealGrid, Relativistic,
                           Stable, TruncatedStable, BrownianPlusStable, BrownianPlusPoisson,
                           cosine_transform, folded_pv, fourier_cosine_inverse, improper_integral,
                           laplace_transform, pv_psi_integral)
from levy_spectral.quadrature import DEFAULT_CONFIG, parallel_map


def test_stable_pv_constant():
    value, err = pv_psi_integral(Stable(1.5), 1.0)
    assert value == pytest.approx(-1 / sqrt(3), abs=1e-10)
    assert err < 1e-9


def test_brownian_weighted_pv():
    weight = lambda z: 1.0 / (1.0 + z * z)
    value, _ = pv_psi_integral(Stable(2.0), 1.0, weight=weight)
    assert value == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
def test_sine_kernel_has_zero_principal_value(lam):
    f = lambda x: 2 * lam / (lam * lam - x * x)
    value, _ = folded_pv(f, lam, 1.0)
    assert abs(value / pi) <= DEFAULT_CONFIG.abs_tol


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("xi", [0.5, 1.0, 2.0])
def test_weighted_sine_kernel(lam, xi):
    w = lambda z: xi / (xi * xi + z * z) * 2 * lam / (lam + z)
    f = lambda z: w(z) / (lam - z)
    h = 1e-4 * lam
    center = -2 * lam * (w(lam + h) - w(lam - h)) / (2 * h)
    value, _ = folded_pv(f, lam, center)
    assert value / pi == pytest.approx(lam / (lam * lam + xi * xi), abs=1e-9)


@pytest.mark.parametrize("exp_", [Stable(1.5), Relativistic(1.5, 1.0), BrownianPlusStable(0.5, 1.0),
                                  TruncatedStable(1.5, 1.0), BrownianPlusPoisson(9.0)], ids=str)
def test_pv_stable_under_window_halving(exp_):
    narrow = QuadratureConfig(singularity_window=5e-4)
    for lam in (0.3, 3.0):
        a, _ = pv_psi_integral(exp_, lam)
        b, _ = pv_psi_integral(exp_, lam, cfg=narrow)
        assert abs(a - b) <= max(1e-9, 1e-8 * abs(a))


def test_pv_rejects_divergent_tail():
    with pytest.raises(DomainError):
        pv_psi_integral(Relativistic(0.8, 1.0), 1.0)


def test_pv_rejects_bad_pole():
    with pytest.raises(DomainError):
        pv_psi_integral(Stable(1.5), 0.0)


@pytest.mark.parametrize("lam", ["0.5", "1", "2", "100"])
def test_relativistic_constant_matches_oracle(oracle, lam):
    value, _ = pv_psi_integral(Relativistic(1.5, 1.0), float(lam))
    assert -value == pytest.approx(oracle["relativistic15_K"][lam], abs=1e-9)


@pytest.mark.parametrize("lam", ["0.1", "1", "10"])
def test_mixture_constant_matches_oracle(oracle, lam):
    value, _ = pv_psi_integral(BrownianPlusStable(0.5, 1.0), float(lam))
    assert -value == pytest.approx(oracle["mix05_K"][lam], abs=1e-8)


def test_cosine_inverse_exponential_pair():
    x = np.linspace(0, 20, 41)
    g = fourier_cosine_inverse(lambda s: 2 / (1 + s * s), RealGrid(x))
    assert np.max(np.abs(g.values - np.exp(-x))) <= 1e-10
    assert g.values[0] == pytest.approx(1.0, abs=1e-10)


def test_cosine_inverse_gaussian():
    g = fourier_cosine_inverse(lambda s: np.exp(-s * s), [1.0])
    assert g.values[0] == pytest.approx(sqrt(pi) / 2 * exp(-0.25) / pi, abs=1e-10)


def test_cosine_transform_reports_error():
    value, err = cosine_transform(lambda s: 1 / (1 + s * s), 3.0)
    assert value == pytest.approx(pi / 2 * exp(-3), abs=1e-10)
    assert 0 <= err < 1e-9


def test_improper_integrals(oracle):
    assert improper_integral(lambda s: 1 / (1 + s * s))[0] == pytest.approx(pi / 2, abs=1e-10)
    assert improper_integral(lambda s: exp(-s))[0] == pytest.approx(1.0, abs=1e-10)
    v, _ = improper_integral(lambda s: 1 / (1 + s**1.5))
    assert v == pytest.approx(oracle["improper_1_over_1_plus_xi_1.5"], abs=1e-8)


def test_improper_integral_with_envelope():
    v, err = improper_integral(lambda s: exp(-s), envelope=lambda r: exp(-r))
    assert v == pytest.approx(1.0, abs=1e-9)
    assert err > 0


def test_laplace_transform_of_exponential_density():
    x = np.array([0.0, 0.5, 1.0, 4.0])
    vals, errs = laplace_transform(lambda s: np.exp(-s), x)
    assert np.allclose(vals, 1 / (1 + x), atol=1e-10)
    assert np.all(errs < 1e-8)


def test_accuracy_error_carries_estimate():
    tight = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_subdivisions=3)
    with pytest.raises(AccuracyError) as info:
        improper_integral(lambda s: np.sin(s) ** 2 / (1 + s * s), tight)
    assert info.value.estimate is not None and info.value.error is not None


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0}, {"rel_tol": -1}, {"singularity_window": 0.5},
                                    {"max_subdivisions": 0}])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        QuadratureConfig(**kwargs)


def test_parallel_map_respects_thread_cap(monkeypatch):
    monkeypatch.setenv("LEVY_SPECTRAL_THREADS", "1")
    assert parallel_map(lambda v: v * v, range(5)) == [0, 1, 4, 9, 16]
    monkeypatch.setenv("LEVY_SPECTRAL_THREADS", "4")
    assert parallel_map(lambda v: v + 1, range(5)) == [1, 2, 3, 4, 5]
