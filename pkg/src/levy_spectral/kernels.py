"""Transition densities, resolvents and hitting times of the process killed at 0.

Spectral integrals over λ run over a logarithmic variable near λ = 0, where
the integrands may have integrable power singularities, and over λ itself
further out, where they oscillate.  They are cut at the point where
e^{−tΨ(λ)} falls below the absolute tolerance.
"""

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import exp as _exp, log, pi

import numpy as np
from scipy import integrate

from .eigenfunctions import compute_eigendata, eigenfunction_values, l_ratio, weighted_k
from .exceptions import AccuracyError, AssumptionError, DomainError
from .exponents import check_assumptions, psi_inverse
from .grids import GridFunction, RealGrid, as_grid
from .quadrature import DEFAULT_CONFIG, _quad, cosine_transform, improper_integral

__all__ = [
    "AssumptionWarning", "ResolventSet", "KernelGrid", "assumption_status", "require_concavity",
    "spectral_integral", "free_density", "killed_density", "kernel_grid", "killed_apply",
    "trapezoid_weights", "resolvent_u",
    "laplace_hitting", "hitting_tail", "hitting_prob_finite", "phi", "phi_xi",
    "phi_two", "phi_tilde", "phi_plus_boundary", "capital_phi", "capital_phi_matrix", "capital_phi_times",
]


class AssumptionWarning(UserWarning):
    """A result was computed outside the hypotheses that guarantee it."""


@lru_cache(maxsize=64)
def assumption_status(exp):
    """Assumption report on a standard log grid 1e−3 … 1e3."""
    return check_assumptions(exp, RealGrid.log(1e-3, 1e3, 601))


def require_concavity(exp, advisory=True, what="this quantity"):
    """Warn (or raise, when ``advisory`` is false) if ξ ↦ Ψ(√ξ) is not concave."""
    if assumption_status(exp).concave_half:
        return True
    msg = f"{exp} is not concave in ξ²; {what} is not covered by the representation"
    if not advisory:
        raise AssumptionError(msg)
    warnings.warn(msg, AssumptionWarning, stacklevel=3)
    return False


def _quad_vec(f, a, b, cfg):
    res, err = integrate.quad_vec(f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                                  norm="max", limit=cfg.max_subdivisions * 10)
    return np.atleast_1d(res), float(err)


def spectral_integral(fun, cfg=DEFAULT_CONFIG, upper=None, scale=1.0):
    """∫_0^upper fun(λ) dλ for a vector-valued integrand; ``upper=None`` means ∞.

    Below ``scale`` (and for an infinite range, above ``upper``) a
    logarithmic variable is used.  The neglected pieces near 0 and ∞ are
    found by shrinking or growing the range until |fun(λ)|·λ is negligible,
    and their size is added to the error.  Returns ``(values, abserr)``.
    """
    tiny = 1e-3 * cfg.abs_tol

    def weighted(lam):
        return float(np.max(np.abs(fun(lam)))) * lam

    hi = scale if upper is None else min(scale, upper)
    lo = hi * 1e-2
    while weighted(lo) > tiny and lo > 1e-150:
        lo *= 1e-2
    err_ends = 10 * weighted(lo)

    def in_log(v):
        lam = _exp(v)
        return np.asarray(fun(lam), dtype=float) * lam

    total, err = _quad_vec(in_log, log(lo), log(hi), cfg)
    if upper is None:
        top = hi * 1e2
        while weighted(top) > tiny and top < 1e150:
            top *= 1e2
        err_ends += 10 * weighted(top)
        more, e2 = _quad_vec(in_log, log(hi), log(top), cfg)
        total, err = total + more, err + e2
    elif upper > hi:
        more, e2 = _quad_vec(lambda lam: np.asarray(fun(lam), dtype=float), hi, upper, cfg)
        total, err = total + more, err + e2
    return total, err + err_ends


def _cutoff(exp, t, cfg):
    """Λ(t): first λ with tΨ(λ) ≥ −ln(abs_tol·factor), and a bound on ∫_Λ^∞ e^{−tΨ}."""
    level = -log(cfg.abs_tol * cfg.tail_cutoff_factor)
    lam = psi_inverse(exp, level / t)
    tail, err = _quad(lambda s: np.exp(-t * exp.psi(s)), lam, np.inf, cfg)
    return lam, abs(tail) + err


def _check(values, err, cfg, what):
    scale = float(np.max(np.abs(values))) if np.size(values) else 0.0
    if not np.all(np.isfinite(values)) or err > 4 * cfg.tolerance(scale):
        raise AccuracyError(f"{what}: error estimate {err:.3g} exceeds tolerance",
                            estimate=values, error=err)


def free_density(exp, t, x, cfg=DEFAULT_CONFIG):
    """p_t(x) = (1/π) ∫_0^∞ e^{−tΨ(ξ)} cos(ξx) dξ."""
    if not t > 0:
        raise DomainError("t must be positive")
    lam, _ = _cutoff(exp, t, cfg)
    value, err = cosine_transform(lambda s: np.exp(-t * np.asarray(exp.psi(s))), x, cfg,
                                  breakpoints=(lam,), head=lam)
    return value / pi


@dataclass
class KernelGrid:
    """Killed and free transition densities on a product grid."""

    t: float
    x_grid: RealGrid
    y_grid: RealGrid
    values: np.ndarray
    free_values: np.ndarray
    error: float = 0.0
    advisory: bool = False


def kernel_grid(exp, t, x_grid, y_grid, cfg=DEFAULT_CONFIG, advisory=True):
    """p_t^{R∖0}(x, y) and p_t(x − y) for all grid pairs.

    Both use one λ-integral: the killed density is
    (1/π) ∫ e^{−tΨ(λ)} [sin λx sin λy + F_λ(x) F_λ(y)] dλ, the first term
    being the antisymmetric part (p_t(x−y) − p_t(x+y))/2.
    """
    if not t > 0:
        raise DomainError("t must be positive; densities are not defined at t = 0")
    ok = require_concavity(exp, advisory, "the killed density")
    xg, yg = as_grid(x_grid), as_grid(y_grid)
    x, y = xg.points, yg.points
    ax = np.abs(np.concatenate([x, y]))
    uniq, inv = np.unique(ax, return_inverse=True)
    ix, iy = inv[: x.size], inv[x.size:]
    diff = (x[:, None] - y[None, :]).ravel()
    upper, tail = _cutoff(exp, t, cfg)
    n = x.size * y.size

    def fun(lam):
        f, _, _ = eigenfunction_values(exp, lam, uniq, cfg)
        fx, fy = f[ix], f[iy]
        damp = np.exp(-t * exp.psi(lam))
        killed = np.outer(np.sin(lam * x), np.sin(lam * y)) + np.outer(fx, fy)
        return damp * np.concatenate([killed.ravel(), np.cos(lam * diff)])

    scale = 1.0 / max(1.0, float(np.max(ax)))
    res, err = spectral_integral(fun, cfg, upper=upper, scale=min(scale, upper))
    err += 2 * tail
    res = res / pi
    err = err / pi
    _check(res, err, cfg, "killed density")
    values = res[:n].reshape(x.size, y.size)
    values[x == 0, :] = 0.0
    values[:, y == 0] = 0.0
    free = res[n:].reshape(x.size, y.size)
    return KernelGrid(float(t), xg, yg, values, free, err, advisory=not ok)


def trapezoid_weights(points):
    """Weights w with Σ w_i g(x_i) the trapezoid rule on sorted nodes."""
    x = np.asarray(points, dtype=float)
    if x.size < 2:
        return np.zeros_like(x)
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def killed_apply(exp, t, f, x_grid, cfg=DEFAULT_CONFIG, advisory=True):
    """(P_t^{R∖0} f)(x) = ∫ p_t^{R∖0}(x, y) f(y) dy for a sampled f.

    The y-integral (trapezoid on f's grid) is taken inside the λ-integral of
    the killed density, so the result is one vector-valued λ-quadrature.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    require_concavity(exp, advisory, "the killed semigroup")
    y = f.grid.points
    wf = trapezoid_weights(y) * f.values
    x = as_grid(x_grid).points
    ax = np.abs(np.concatenate([x, y]))
    uniq, inv = np.unique(ax, return_inverse=True)
    ix, iy = inv[: x.size], inv[x.size:]
    upper, tail = _cutoff(exp, t, cfg)

    def fun(lam):
        fl, _, _ = eigenfunction_values(exp, lam, uniq, cfg)
        odd = np.sin(lam * x) * (wf @ np.sin(lam * y))
        even = fl[ix] * (wf @ fl[iy])
        return np.exp(-t * exp.psi(lam)) * (odd + even)

    scale = 1.0 / max(1.0, float(np.max(ax)))
    res, err = spectral_integral(fun, cfg, upper=upper, scale=min(scale, upper))
    err = (err + 4 * tail * float(np.sum(np.abs(wf)))) / pi
    res = res / pi
    _check(res, err, cfg, "killed semigroup")
    return GridFunction(as_grid(x_grid), res, np.full(x.size, err))


def killed_density(exp, t, x, y, cfg=DEFAULT_CONFIG, advisory=True):
    """p_t^{R∖0}(x, y); zero when either point is the origin."""
    if x == 0 or y == 0:
        if not t > 0:
            raise DomainError("t must be positive")
        return 0.0
    return float(kernel_grid(exp, t, [x], [y], cfg, advisory).values[0, 0])


def _resolvent_breaks(exp, z):
    """Ψ⁻¹(z) and decades above it, where 1/(z + Ψ) changes character."""
    start = psi_inverse(exp, z)
    top = max(1.0, 10 * start)
    return tuple(start * 10.0 ** np.arange(int(np.ceil(np.log10(top / start))) + 1))


def resolvent_u(exp, z, x, cfg=DEFAULT_CONFIG):
    """u_z(x) = (1/π) ∫_0^∞ cos(ξx)/(z + Ψ(ξ)) dξ."""
    if not z > 0:
        raise DomainError("z must be positive")
    bps = _resolvent_breaks(exp, z)
    value, _ = cosine_transform(lambda s: 1.0 / (z + np.asarray(exp.psi(s))), x, cfg,
                                breakpoints=bps, head=max(1.0, 2 * psi_inverse(exp, z)))
    return value / pi


def laplace_hitting(exp, z, x, cfg=DEFAULT_CONFIG):
    """E_x e^{−zτ₀} = u_z(x)/u_z(0)."""
    if x == 0:
        return 1.0
    return resolvent_u(exp, z, x, cfg) / resolvent_u(exp, z, 0.0, cfg)


def hitting_prob_finite(exp, x, cfg=DEFAULT_CONFIG, zs=(1e-4, 1e-5, 1e-6)):
    """P_x(τ₀ < ∞) as the z → 0⁺ limit of E_x e^{−zτ₀}.

    The ratio is evaluated at three geometrically spaced z.  When
    ∫_0 dξ/Ψ diverges (Ψ(ξ) ≍ ξ^p with p ≥ 1) u_z(0) → ∞ while
    u_z(0) − u_z(x) stays bounded, so the limit is 1; the samples must then
    increase towards it.  Otherwise the limit is taken by Aitken's Δ²
    extrapolation, exact for r(z) = P + C z^q.
    """
    if x == 0:
        raise DomainError("x must be nonzero")
    r = np.array([laplace_hitting(exp, z, x, cfg) for z in zs])
    d1, d2 = r[1] - r[0], r[2] - r[1]
    slack = 1e-8
    if exp.small_scale_power() >= 1:
        if d1 < -slack or d2 < -slack or r[2] > 1 + slack:
            raise AccuracyError("resolvent ratios do not increase towards 1", estimate=r[2])
        return 1.0
    if abs(d2) <= 1e-12:
        limit = r[2]
    else:
        q = d2 / d1 if d1 != 0 else np.inf
        if not 0 < q < 0.9:
            raise AccuracyError("ratios do not converge geometrically as z → 0",
                                estimate=r[2], error=abs(d2))
        limit = r[2] + d2 * q / (1 - q)
    if not -1e-3 <= limit <= 1 + 1e-3:
        raise AccuracyError(f"extrapolated probability {limit:.6g} is outside [0, 1]", estimate=limit)
    return float(min(1.0, max(0.0, limit)))


def hitting_tail(exp, t, x, cfg=DEFAULT_CONFIG, advisory=True, with_error=False):
    """P_x(t < τ₀ < ∞) for a scalar or an array of times.

    The integrand cos ϑ_λ e^{−tΨ(λ)} Ψ'(λ) F_λ(x)/Ψ(λ) is split into the
    bounded sine part [sin(λ|x| + ϑ_λ) − sin ϑ_λ] and the nonnegative part
    [sin ϑ_λ − G_λ(x)], each integrated with its own error budget.
    """
    if x == 0:
        raise DomainError("x must be nonzero")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts <= 0):
        raise DomainError("t must be positive")
    require_concavity(exp, advisory, "the hitting-time formula")
    ax = abs(float(x))
    upper, tail = _cutoff(exp, float(ts.min()), cfg)

    def weight(lam):
        e = compute_eigendata(exp, lam, cfg)
        return e, e.cos_theta * np.exp(-ts * exp.psi(lam)) * exp.psi_prime(lam) / exp.psi(lam)

    def sine_part(lam):
        e, w = weight(lam)
        return w * (np.sin(lam * ax + e.theta) - e.sin_theta)

    def g_part(lam):
        e, w = weight(lam)
        _, g, _ = eigenfunction_values(exp, lam, np.array([ax]), cfg)
        return w * (e.sin_theta - g[0])

    scale = min(upper, 1.0 / ax)
    s1, e1 = spectral_integral(sine_part, cfg, upper=upper, scale=scale)
    s2, e2 = spectral_integral(g_part, cfg, upper=upper, scale=scale)
    # |F| ≤ 2 and Ψ'/Ψ ≤ Ψ'(Λ)/Ψ(Λ)·(growth) beyond Λ; bound the remainder crudely.
    rest = 2 * tail * exp.psi_prime(upper) / exp.psi(upper)
    values = (s1 + s2) / pi
    err = (e1 + e2 + rest) / pi
    _check(values, err, cfg, "hitting tail")
    values = np.clip(values, 0.0, 1.0)
    out = float(values[0]) if np.ndim(t) == 0 else values
    return (out, err) if with_error else out


@dataclass(frozen=True)
class ResolventSet:
    """φ(z), φ(ξ, z), φ(ξ₁, ξ₂, z) and their relatives for one exponent."""

    exp: object
    cfg: object = DEFAULT_CONFIG

    def _integral(self, weight, z, extra=()):
        z = complex(z)
        exp = self.exp
        s = -z.real
        pts = list(extra)
        if abs(z) > 0:
            pts.append(psi_inverse(exp, abs(z)))
        if s > 0 and abs(z.imag) > 0:
            # Near the cut: resolve the Lorentzian of width |Im z|/Ψ' around Ψ⁻¹(−Re z).
            centre = psi_inverse(exp, s)
            width = abs(z.imag) / exp.psi_prime(centre)
            for k in 3.0 ** np.arange(11):
                for sign in (-1, 1):
                    p = centre + sign * k * width
                    if p > 0:
                        pts.append(p)
            pts.append(centre)
        elif s > 0:
            raise DomainError("φ is singular on the negative real axis; use phi_plus_boundary")
        pts = sorted(set(p for p in pts if p > 0))

        # Panels on either side of the cut cancel, so each is integrated more tightly.
        eps = self.cfg.abs_tol / (len(pts) + 1)
        rel = self.cfg.rel_tol * 1e-3

        def part(fn):
            total, err = 0.0, 0.0
            for a, b in zip([0.0] + pts[:-1], pts):
                v, e = _quad(fn, a, b, self.cfg, epsabs=eps, epsrel=rel)
                total, err = total + v, err + e
            v, e = improper_integral(fn, self.cfg, lower=pts[-1] if pts else 0.0)
            _check(total + v, err + e, self.cfg, "φ integral")
            return total + v

        def re_f(zeta):
            return float(np.real(weight(zeta) / (exp.psi(zeta) + z)))

        def im_f(zeta):
            return float(np.imag(weight(zeta) / (exp.psi(zeta) + z)))

        if z.imag == 0:
            return part(re_f) / pi
        return complex(part(re_f), part(im_f)) / pi

    def phi(self, z):
        return self._integral(lambda s: 1.0, z)

    def phi_xi(self, xi, z):
        x2 = xi * xi
        return self._integral(lambda s: x2 / (x2 + s * s), z, (xi,))

    def phi_two(self, xi1, xi2, z):
        a, b = xi1 * xi1, xi2 * xi2
        return self._integral(lambda s: a / (a + s * s) * b / (b + s * s), z, (xi1, xi2))

    def phi_tilde(self, xi1, xi2, z):
        return self.phi_two(xi1, xi2, z) - self.phi_xi(xi1, z) * self.phi_xi(xi2, z) / self.phi(z)

    def u(self, z, x):
        return resolvent_u(self.exp, z, x, self.cfg)

    def K(self, lam, xi=None):
        if xi is None:
            return compute_eigendata(self.exp, lam, self.cfg).K
        return weighted_k(self.exp, lam, xi, self.cfg)[0]

    def L(self, lam, xi):
        return l_ratio(lam, xi)


def phi(rset, z):
    return rset.phi(z)


def phi_xi(rset, xi, z):
    return rset.phi_xi(xi, z)


def phi_two(rset, xi1, xi2, z):
    return rset.phi_two(xi1, xi2, z)


def phi_tilde(rset, xi1, xi2, z):
    return rset.phi_tilde(xi1, xi2, z)


def phi_plus_boundary(rset, lam, xi):
    """(φ⁺(−Ψ(λ)), φ⁺(ξ, −Ψ(λ))), boundary values from the upper half-plane.

    φ⁺(−Ψ(λ)) = (K_λ − i)/Ψ'(λ) and φ⁺(ξ, −Ψ(λ)) = (K_λ(ξ) − iL_λ(ξ))/Ψ'(λ).
    """
    d = rset.exp.psi_prime(lam)
    k = rset.K(lam)
    kx = rset.K(lam, xi)
    return complex(k, -1.0) / d, complex(kx, -l_ratio(lam, xi)) / d


def capital_phi_matrix(rset, xis, t=0.0):
    """Φ(ξ_i, ξ_j, t) for all pairs from ``xis``, as a symmetric matrix.

    Φ(ξ₁, ξ₂, t) = ∫_0^∞ A_λ(ξ₁) A_λ(ξ₂) e^{−tΨ(λ)} dλ with
    A_λ(ξ) = (K_λ L_λ(ξ) − K_λ(ξ))/√(1 + K_λ²).
    """
    xis = np.asarray(xis, dtype=float)
    if t < 0:
        raise DomainError("t must be nonnegative")
    exp, cfg = rset.exp, rset.cfg
    iu = np.triu_indices(xis.size)

    def amplitudes(lam):
        e = compute_eigendata(exp, lam, cfg)
        kx = np.array([weighted_k(exp, lam, x, cfg)[0] for x in xis])
        return (e.K * l_ratio(lam, xis) - kx) * e.cos_theta

    def fun(lam):
        a = amplitudes(lam)
        m = np.outer(a, a)[iu]
        return m * np.exp(-t * exp.psi(lam)) if t > 0 else m

    upper = None
    extra = 0.0
    if t > 0:
        upper, tail = _cutoff(exp, t, cfg)
        extra = tail * 4
    res, err = spectral_integral(fun, cfg, upper=upper, scale=float(np.min(xis)))
    err += extra
    _check(res, err, cfg, "Φ integral")
    out = np.zeros((xis.size, xis.size))
    out[iu] = res
    out.T[iu] = res
    return out


def capital_phi(rset, xi1, xi2, t=0.0):
    """Φ(ξ₁, ξ₂, t); at t = 0 it equals (π/2) ξ₁ξ₂/(ξ₁ + ξ₂)."""
    m = capital_phi_matrix(rset, [xi1, xi2], t)
    return float(m[0, 1])


def capital_phi_times(rset, xi1, xi2, ts):
    """Φ(ξ₁, ξ₂, t) for an array of t > 0 in one λ-integral."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts <= 0):
        raise DomainError("times must be positive")
    exp, cfg = rset.exp, rset.cfg
    xis = np.array([xi1, xi2], dtype=float)

    def fun(lam):
        e = compute_eigendata(exp, lam, cfg)
        kx = np.array([weighted_k(exp, lam, x, cfg)[0] for x in xis])
        a = (e.K * l_ratio(lam, xis) - kx) * e.cos_theta
        return a[0] * a[1] * np.exp(-ts * exp.psi(lam))

    upper, tail = _cutoff(exp, float(ts.min()), cfg)
    res, err = spectral_integral(fun, cfg, upper=upper, scale=float(xis.min()))
    _check(res, err + 4 * tail, cfg, "Φ integral")
    return res
