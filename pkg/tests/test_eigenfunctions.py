from math import cos, pi, sqrt

import numpy as np
import pytest

from levy_spectral import (BrownianPlusPoisson, BrownianPlusStable, DomainError, Method, Relativistic,
                           Stable, TruncatedStable, compute_eigendata, eigenfunction_values, eval_F,
                           eval_G, eval_G_laplace, g_integral, g_symbol, laplace_F, weighted_k)


def test_stable_phase_is_constant():
    e = compute_eigendata(Stable(1.5), 1.0)
    assert e.theta == pytest.approx(pi / 6, abs=1e-9)
    assert e.K == pytest.approx(1 / sqrt(3), abs=1e-9)
    for lam in (0.01, 3.0, 300.0):
        assert compute_eigendata(Stable(1.1), lam).theta == pytest.approx(pi / 1.1 - pi / 2, abs=1e-7)


def test_brownian_phase_is_exactly_zero():
    e = compute_eigendata(Stable(2.0), 3.0)
    assert e.K == 0.0 and e.theta == 0.0 and e.sin_theta == 0.0


def test_cos_and_sin_come_from_k():
    e = compute_eigendata(Relativistic(1.5, 1.0), 0.7)
    assert e.cos_theta == pytest.approx(cos(e.theta), abs=1e-15)
    assert e.sin_theta**2 + e.cos_theta**2 == pytest.approx(1.0, abs=1e-15)


def test_phase_rejects_nonpositive_lambda():
    with pytest.raises(DomainError):
        compute_eigendata(Stable(1.5), 0.0)


def test_g_symbol_values():
    s = Stable(1.5)
    e = compute_eigendata(s, 1.0)
    assert g_symbol(s, e, 1.0) == pytest.approx(sqrt(3) / 2 * 0.25, abs=1e-9)
    assert g_symbol(s, e, 0.0) == pytest.approx(sqrt(3) / 2 * 0.5, abs=1e-9)
    # Continuity across the removable singularity.
    near = g_symbol(s, e, np.array([1 - 1e-5, 1 + 1e-5]))
    assert np.allclose(near, sqrt(3) / 8, atol=1e-5)


def test_brownian_symbol_vanishes():
    b = Stable(2.0)
    e = compute_eigendata(b, 2.0)
    xi = np.linspace(0, 10, 101)
    assert np.max(np.abs(g_symbol(b, e, xi))) <= 1e-12


@pytest.mark.parametrize("x", ["0.25", "0.5", "1", "2", "5"])
def test_stable_g_laplace_route_matches_oracle(oracle, x):
    s = Stable(1.5)
    g = eval_G_laplace(s, compute_eigendata(s, 1.0), [float(x)]).values[0]
    assert g == pytest.approx(oracle["stable15_G1"][x], abs=1e-9)


def test_stable_g_fourier_route_matches_oracle(oracle):
    s = Stable(1.5)
    xs = [0.5, 1.0, 2.0]
    g = eval_G(s, compute_eigendata(s, 1.0), xs).values
    expected = [oracle["stable15_G1"][k] for k in ("0.5", "1", "2")]
    assert np.allclose(g, expected, atol=1e-7)


def test_g_at_origin_equals_sin_theta():
    s = Stable(1.5)
    e = compute_eigendata(s, 1.0)
    assert eval_G(s, e, [0.0]).values[0] == pytest.approx(0.5, abs=1e-6)
    _, g, _ = eigenfunction_values(s, 1.0, np.array([0.0]))
    assert g[0] == pytest.approx(0.5, abs=1e-12)


def test_brownian_eigenfunction_is_sine():
    x = np.linspace(-10, 10, 401)
    prof = eval_F(Stable(2.0), compute_eigendata(Stable(2.0), 1.0), x)
    assert np.max(np.abs(prof.F_values - np.sin(np.abs(x)))) <= 1e-8
    assert np.all(prof.G_values == 0)


@pytest.mark.parametrize("method", [Method.LAPLACE, Method.FOURIER])
def test_f_vanishes_at_origin(method):
    s = Stable(1.5)
    prof = eval_F(s, compute_eigendata(s, 1.0), np.linspace(-3, 3, 13), method=method)
    assert abs(prof.F_values[6]) <= 1e-6
    assert prof.method is method


def test_stable_scaling():
    s = Stable(1.5)
    x = np.linspace(-4, 4, 33)
    f2, _, _ = eigenfunction_values(s, 2.0, x)
    f1, _, _ = eigenfunction_values(s, 1.0, 2 * x)
    assert np.max(np.abs(f2 - f1)) <= 1e-6


def test_eigenfunction_is_even():
    r = Relativistic(1.5, 1.0)
    x = np.linspace(0.1, 6, 12)
    a, _, _ = eigenfunction_values(r, 0.8, x)
    b, _, _ = eigenfunction_values(r, 0.8, -x)
    assert np.array_equal(a, b)


def test_f_approaches_shifted_sine():
    s = Stable(1.1)
    x = np.array([50.0, 200.0, 800.0])
    f, _, _ = eigenfunction_values(s, 1.0, x)
    dev = np.abs(f - np.sin(x + pi / 1.1 - pi / 2))
    assert dev[-1] < dev[0] and dev[-1] < 1e-3


def test_g_completely_monotone_tail():
    r = Relativistic(1.5, 1.0)
    x = np.geomspace(0.1, 100, 40)
    g = eval_G_laplace(r, compute_eigendata(r, 1.0), x).values
    assert np.all(np.diff(g) <= 1e-12) and np.all(g >= -1e-12)


@pytest.mark.parametrize("xi", ["0.5", "1", "2"])
def test_laplace_f_matches_oracle(oracle, xi):
    s = Stable(1.5)
    assert laplace_F(s, compute_eigendata(s, 1.0), float(xi)) == pytest.approx(
        oracle["stable15_laplace_F1"][xi], abs=1e-8)


def test_laplace_f_brownian():
    b = Stable(2.0)
    assert laplace_F(b, compute_eigendata(b, 1.0), 1.0) == pytest.approx(1.0, abs=1e-9)


def test_laplace_f_small_xi_limit():
    s = Stable(1.5)
    e = compute_eigendata(s, 1.0)
    limit = e.cos_theta * s.psi_prime(1.0) / s.psi(1.0)
    assert laplace_F(s, e, 1e-6) == pytest.approx(limit, abs=1e-4)


@pytest.mark.parametrize("key", ["0.5,0.5", "1,1", "2,0.5", "1,2"])
def test_weighted_k_matches_oracle(oracle, key):
    lam, xi = map(float, key.split(","))
    value, _ = weighted_k(Stable(1.5), lam, xi)
    assert value == pytest.approx(oracle["stable15_K_xi"][key], abs=1e-9)


@pytest.mark.parametrize("key", ["0.5,0.5", "0.5,2", "2,0.5", "2,2"])
def test_relativistic_weighted_k_matches_oracle(oracle, key):
    lam, xi = map(float, key.split(","))
    value, _ = weighted_k(Relativistic(1.5, 1.0), lam, xi)
    assert value == pytest.approx(oracle["relativistic15_K_xi"][key], abs=1e-9)


def test_g_integral_values():
    s = Stable(1.5)
    # ∫G is the symbol at 0: (2 cos ϑ/λ)(1 − α/2) for the stable family.
    assert g_integral(s, compute_eigendata(s, 1.0)) == pytest.approx(sqrt(3) / 4, abs=1e-9)
    assert g_integral(s, compute_eigendata(s, 2.0)) == pytest.approx(sqrt(3) / 8, abs=1e-9)
    assert g_integral(s, compute_eigendata(s, 1.0)) == pytest.approx(
        g_symbol(s, compute_eigendata(s, 1.0), 0.0), abs=1e-12)
    assert g_integral(Stable(2.0), compute_eigendata(Stable(2.0), 1.0)) == 0.0


def test_poisson_phase_turns_negative():
    p = BrownianPlusPoisson(9.0)
    thetas = [compute_eigendata(p, lam).theta for lam in np.linspace(4, 5, 11)]
    assert min(thetas) < 0


def test_truncated_uses_fourier_route():
    t = TruncatedStable(1.5, 1.0)
    prof = eval_F(t, compute_eigendata(t, 1.0), np.linspace(-2, 2, 9))
    assert prof.method is Method.FOURIER
    assert abs(prof.F_values[4]) <= 1e-6


def test_mixture_routes_agree():
    m = BrownianPlusStable(0.5, 1.0)
    e = compute_eigendata(m, 1.0)
    x = np.linspace(0.5, 5, 10)
    a = eval_G(m, e, x).values
    b = eval_G_laplace(m, e, x).values
    assert np.max(np.abs(a - b)) <= 1e-6
