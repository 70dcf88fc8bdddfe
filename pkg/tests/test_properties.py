"""Property-based checks of invariants that hold for every admissible input."""

from math import pi

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from levy_spectral import (BrownianPlusStable, RealGrid, Relativistic, Stable, TruncatedStable,
                           compute_eigendata, eigenfunction_values, g_symbol, laplace_F, psi_inverse)
from levy_spectral.cli import main as cli_main
from levy_spectral.quadrature import DEFAULT_CONFIG

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])

alphas = st.floats(1.05, 1.95)
lams = st.floats(0.05, 20.0)
xs = st.floats(-30.0, 30.0)

holomorphic = st.one_of(
    alphas.map(Stable),
    st.builds(BrownianPlusStable, st.floats(0.3, 1.9), st.floats(0.1, 3.0)),
    st.builds(Relativistic, st.floats(1.1, 1.9), st.floats(0.2, 3.0)),
)


@SETTINGS
@given(alpha=alphas, lam=lams)
def test_stable_phase_closed_form(alpha, lam):
    assert abs(compute_eigendata(Stable(alpha), lam).theta - (pi / alpha - pi / 2)) <= 1e-6


@SETTINGS
@given(exp=holomorphic, lam=lams)
def test_phase_in_first_quadrant_for_concave_families(exp, lam):
    theta = compute_eigendata(exp, lam).theta
    assert -1e-9 <= theta < pi / 2


@SETTINGS
@given(exp=holomorphic, lam=lams, x=xs)
def test_eigenfunction_even_and_bounded(exp, lam, x):
    f, g, _ = eigenfunction_values(exp, lam, np.array([x, -x]))
    e = compute_eigendata(exp, lam)
    assert f[0] == f[1]
    assert -1e-8 <= g[0] <= e.sin_theta + 1e-6
    assert abs(f[0]) <= 1 + e.sin_theta + 1e-6


@SETTINGS
@given(exp=holomorphic, lam=lams)
def test_eigenfunction_vanishes_at_origin(exp, lam):
    f, _, _ = eigenfunction_values(exp, lam, np.array([0.0]))
    assert abs(f[0]) <= 1e-6


@SETTINGS
@given(alpha=alphas, lam=st.floats(0.1, 5.0), scale=st.floats(0.2, 5.0), x=st.floats(-5.0, 5.0))
def test_stable_eigenfunctions_scale(alpha, lam, scale, x):
    s = Stable(alpha)
    a, _, _ = eigenfunction_values(s, lam * scale, np.array([x]))
    b, _, _ = eigenfunction_values(s, lam, np.array([x * scale]))
    assert abs(a[0] - b[0]) <= 1e-6


@SETTINGS
@given(exp=holomorphic, lam=st.floats(0.1, 5.0), xi=st.floats(0.05, 10.0))
def test_laplace_transform_of_f_is_nonnegative(exp, lam, xi):
    assert laplace_F(exp, compute_eigendata(exp, lam), xi) >= -1e-8


@SETTINGS
@given(exp=holomorphic, lam=lams, xi=st.floats(0.0, 100.0))
def test_symbol_is_even_and_finite(exp, lam, xi):
    e = compute_eigendata(exp, lam)
    a, b = g_symbol(exp, e, np.array([xi, -xi]))
    assert a == b and np.isfinite(a)


@SETTINGS
@given(alpha=st.floats(0.3, 1.9), c=st.floats(0.1, 5.0), xi=st.floats(0.01, 200.0))
def test_truncated_exponent_monotone_and_even(alpha, c, xi):
    t = TruncatedStable(alpha, c)
    assert t.psi(-xi) == t.psi(xi)
    assert t.psi(xi * 1.01) > t.psi(xi)
    assert t.psi_prime(xi) > 0


@SETTINGS
@given(exp=holomorphic, value=st.floats(1e-6, 1e6))
def test_psi_inverse_round_trip(exp, value):
    assert abs(exp.psi(psi_inverse(exp, value)) - value) <= 1e-9 * value


@SETTINGS
@given(lo=st.floats(-50, 50), width=st.floats(0.1, 50), count=st.integers(1, 500))
def test_grid_parse_round_trip(lo, width, count):
    g = RealGrid.parse(f"{lo!r}:{lo + width!r}:{count}")
    assert len(g) == count
    assert g.points[0] == lo and np.all(np.diff(g.points) > 0)


@settings(max_examples=10, deadline=None)
@given(alpha=alphas)
def test_cli_theta_column(alpha):
    import contextlib
    import io
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["theta", f"stable:alpha={alpha!r}", "--lambda", "0.5:2:3"])
    rows = buf.getvalue().strip().splitlines()[1:]
    assert code == 0
    assert all(abs(float(r.split(",")[2]) - (pi / alpha - pi / 2)) <= 1e-6 for r in rows)


def test_default_tolerances_are_sane():
    assert DEFAULT_CONFIG.abs_tol <= 1e-8 and DEFAULT_CONFIG.rel_tol <= 1e-6
