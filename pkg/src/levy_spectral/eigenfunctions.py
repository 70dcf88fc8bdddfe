"""Phase shifts ϑ_λ, correction terms G_λ and generalised eigenfunctions F_λ.

F_λ(x) = sin(λ|x| + ϑ_λ) − G_λ(x) is the bounded solution of the killed
eigenvalue problem with eigenvalue Ψ(λ).  The phase comes from the
principal-value constant K_λ, and G_λ is obtained either by Fourier
inversion of its symbol or, when Ψ has a holomorphic extension, from a
Laplace-transform representation with a nonnegative density.
"""

import threading
from dataclasses import dataclass
from enum import Enum
from math import atan, pi, sqrt

import numpy as np

from .exceptions import AccuracyError, DomainError, PositivityError
from .grids import GridFunction, RealGrid, as_grid
from .quadrature import DEFAULT_CONFIG, fourier_cosine_inverse, laplace_transform, pv_psi_integral

__all__ = [
    "EigenData", "EigenfunctionProfile", "Method", "compute_eigendata", "g_symbol",
    "eval_G", "eval_G_laplace", "eval_F", "eigenfunction_values", "weighted_k",
    "l_ratio", "laplace_F", "g_integral", "clear_cache",
]


@dataclass(frozen=True)
class EigenData:
    """Phase data at one spectral point λ.

    ``K`` is the principal-value constant, ``theta = arctan K``, and
    ``cos_theta``, ``sin_theta`` are computed from K directly.  ``error``
    bounds the quadrature error in K.
    """

    lam: float
    K: float
    theta: float
    cos_theta: float
    sin_theta: float
    error: float = 0.0

    @classmethod
    def from_k(cls, lam, k, error=0.0):
        norm = sqrt(1.0 + k * k)
        return cls(float(lam), float(k), atan(k), 1.0 / norm, k / norm, float(error))


class Method(str, Enum):
    FOURIER = "FourierInversion"
    LAPLACE = "LaplaceRoute"


@dataclass
class EigenfunctionProfile:
    """F_λ and G_λ sampled on a grid, with the route used for G."""

    eigen: EigenData
    x_grid: RealGrid
    G_values: np.ndarray
    F_values: np.ndarray
    method: Method
    error_estimate: float

    @property
    def sine_envelope(self):
        return np.sin(self.eigen.lam * np.abs(self.x_grid.points) + self.eigen.theta)


_cache = {}
_cache_lock = threading.Lock()


def clear_cache():
    with _cache_lock:
        _cache.clear()


def _key(exp, lam, cfg):
    return exp, cfg, float(f"{lam:.12e}")


def compute_eigendata(exp, lam, cfg=DEFAULT_CONFIG):
    """K_λ = −(1/π) PV ∫_0^∞ Ψ'(λ)/(Ψ(λ) − Ψ(ξ)) dξ and the derived phase."""
    lam = float(lam)
    if not (lam > 0 and np.isfinite(lam)):
        raise DomainError("λ must be positive and finite")
    key = _key(exp, lam, cfg)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    value, err = pv_psi_integral(exp, lam, cfg=cfg)
    # A K indistinguishable from zero (within its error, or far below the
    # absolute tolerance) is taken as zero, so that integrands built from
    # sin ϑ vanish instead of carrying quadrature noise.
    k = 0.0 if abs(value) <= max(err, 1e-2 * cfg.abs_tol) else -value
    data = EigenData.from_k(lam, k, err)
    with _cache_lock:
        if len(_cache) > 200_000:
            _cache.clear()
        _cache[key] = data
    return data


def g_symbol(exp, eigen, xi, cfg=DEFAULT_CONFIG):
    """Fourier transform of G_λ at ξ, continuous through ξ = λ.

    Within a relative window δ of λ the removable singularity is replaced
    by linear interpolation between the limit value and the window edges.
    """
    lam = eigen.lam
    xi = np.abs(np.asarray(xi, dtype=float))
    p0, p1, p2 = exp.psi(lam), exp.psi_prime(lam), exp.psi_second(lam)
    c = eigen.cos_theta

    def direct(x):
        return c * (2 * lam / (lam * lam - x * x) - p1 / (p0 - np.asarray(exp.psi(x))))

    width = cfg.singularity_window * lam
    inside = np.abs(xi - lam) < width
    out = np.empty_like(xi)
    if np.any(~inside):
        out[~inside] = direct(xi[~inside])
    if np.any(inside):
        center = c * (0.5 / lam - 0.5 * p2 / p1)
        lo, hi = direct(np.array([lam - width, lam + width]))
        xin = xi[inside]
        frac = np.abs(xin - lam) / width
        out[inside] = center + frac * np.where(xin < lam, lo - center, hi - center)
    return float(out) if out.ndim == 0 else out


def _symbol_is_negligible(exp, eigen, cfg):
    lam = eigen.lam
    probe = np.concatenate([lam * np.geomspace(1e-4, 1e4, 801), [0.0, lam]])
    return float(np.max(np.abs(g_symbol(exp, eigen, probe, cfg)))) < cfg.abs_tol


def eval_G(exp, eigen, x_grid, cfg=DEFAULT_CONFIG):
    """G_λ on a grid by oscillatory Fourier inversion of its symbol."""
    grid = as_grid(x_grid)
    if _symbol_is_negligible(exp, eigen, cfg):
        return GridFunction(grid, np.zeros(len(grid)), np.full(len(grid), cfg.abs_tol))
    lam = eigen.lam
    delta = cfg.singularity_window
    bps = (lam * (1 - delta), lam, lam * (1 + delta))
    return fourier_cosine_inverse(lambda s: g_symbol(exp, eigen, s, cfg), grid, cfg,
                                  breakpoints=bps, head=4 * lam)


def _laplace_density(exp, eigen):
    p0 = exp.psi(eigen.lam)

    def density(xi):
        with np.errstate(over="ignore", invalid="ignore"):
            rho = np.imag(1.0 / (p0 - exp.psi_plus_imag_axis(np.asarray(xi, dtype=float))))
        # Ψ⁺ overflows only where the density is below the smallest double.
        return np.where(np.isfinite(rho), rho, 0.0)

    lower = getattr(exp, "threshold", 0.0)
    return density, lower


def _check_density(exp, eigen, density, lower, cfg):
    lam = eigen.lam
    probe = lower + lam * np.geomspace(1e-6, 1e6, 1201)
    gap = np.abs(exp.psi(lam) - exp.psi_plus_imag_axis(probe))
    if np.min(gap) <= 1e-12 * exp.psi(lam):
        raise DomainError("Ψ⁺(iξ) meets Ψ(λ) on the imaginary axis")
    rho = density(probe)
    if np.min(rho) < -cfg.abs_tol * max(1.0, np.max(np.abs(rho))):
        raise PositivityError("Laplace-route density is negative; branch of Ψ⁺ is wrong")


def _g_laplace_values(exp, eigen, x, cfg):
    density, lower = _laplace_density(exp, eigen)
    _check_density(exp, eigen, density, lower, cfg)
    factor = exp.psi_prime(eigen.lam) * eigen.cos_theta / pi
    vals, errs = laplace_transform(density, x, cfg, lower=lower, scale=eigen.lam)
    return factor * vals, abs(factor) * errs


def eval_G_laplace(exp, eigen, x_grid, cfg=DEFAULT_CONFIG):
    """G_λ(x) = (Ψ'(λ) cos ϑ_λ/π) ∫_0^∞ Im[1/(Ψ(λ) − Ψ⁺(iξ))] e^{−ξ|x|} dξ."""
    grid = as_grid(x_grid)
    ax = np.abs(grid.points)
    uniq, inverse = np.unique(ax, return_inverse=True)
    vals, errs = _g_laplace_values(exp, eigen, uniq, cfg)
    return GridFunction(grid, vals[inverse], errs[inverse])


def _g_values(exp, eigen, ax, cfg, method):
    if eigen.K == 0 and _symbol_is_negligible(exp, eigen, cfg):
        return np.zeros(ax.shape), np.full(ax.shape, cfg.abs_tol)
    if method is Method.LAPLACE:
        return _g_laplace_values(exp, eigen, ax, cfg)
    gf = eval_G(exp, eigen, ax, cfg)
    return gf.values, gf.errors


def _pick_method(exp, method):
    if method is None:
        return Method.LAPLACE if exp.supports_holomorphic else Method.FOURIER
    return Method(method)


def eigenfunction_values(exp, lam, x, cfg=DEFAULT_CONFIG, method=None):
    """F_λ at the points x (any shape), with G_λ and a pointwise error bound."""
    eigen = compute_eigendata(exp, lam, cfg)
    method = _pick_method(exp, method)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x).ravel()
    uniq, inverse = np.unique(ax, return_inverse=True)
    # G_λ(0) = sin ϑ_λ since F_λ vanishes at the origin; the transform
    # routes converge slowly there, so the value is filled in directly.
    g, gerr = np.full(uniq.shape, eigen.sin_theta), np.zeros(uniq.shape)
    nz = uniq > 0
    if np.any(nz):
        g[nz], gerr[nz] = _g_values(exp, eigen, uniq[nz], cfg, method)
    g, gerr = g[inverse].reshape(x.shape), gerr[inverse].reshape(x.shape)
    f = np.sin(lam * np.abs(x) + eigen.theta) - g
    return f, g, gerr + eigen.error


def eval_F(exp, eigen, x_grid, cfg=DEFAULT_CONFIG, method=None):
    """Profile of F_λ = sin(λ|x| + ϑ_λ) − G_λ on a grid.

    G comes from the Laplace route when Ψ⁺ is available, otherwise from
    Fourier inversion.  If x = 0 is on the grid, F(0) must vanish within
    ten times the error estimate.
    """
    grid = as_grid(x_grid)
    method = _pick_method(exp, method)
    ax = np.abs(grid.points)
    uniq, inverse = np.unique(ax, return_inverse=True)
    g, gerr = _g_values(exp, eigen, uniq, cfg, method)
    g = g[inverse]
    f = np.sin(eigen.lam * ax + eigen.theta) - g
    # K's quadrature error moves sin ϑ by at most |dK|.
    error = float(np.max(gerr)) + eigen.error + cfg.abs_tol
    at_zero = ax == 0
    if np.any(at_zero) and np.max(np.abs(f[at_zero])) > 10 * error:
        raise AccuracyError(f"F_λ(0) = {np.max(np.abs(f[at_zero])):.3g} is not zero within tolerance",
                            estimate=f, error=error)
    return EigenfunctionProfile(eigen, grid, g, f, method, error)


def l_ratio(lam, xi):
    """L_λ(ξ) = ξ²/(ξ² + λ²)."""
    return xi * xi / (xi * xi + lam * lam)


def weighted_k(exp, lam, xi, cfg=DEFAULT_CONFIG):
    """K_λ(ξ) = −(1/π) PV ∫_0^∞ ξ²/(ξ²+ζ²) · Ψ'(λ)/(Ψ(λ) − Ψ(ζ)) dζ, as ``(value, abserr)``."""
    xi = float(xi)
    if not xi > 0:
        raise DomainError("ξ must be positive")
    x2 = xi * xi
    value, err = pv_psi_integral(
        exp, lam,
        weight=lambda z: x2 / (x2 + z * z),
        weight_prime=lambda z: -2 * z * x2 / (x2 + z * z) ** 2,
        cfg=cfg, breakpoints=tuple(xi * 10.0 ** np.arange(-3, 4)))
    return -value, err


def laplace_F(exp, eigen, xi, cfg=DEFAULT_CONFIG):
    """∫ F_λ(x) e^{−ξ|x|} dx = (2/ξ)(K_λ L_λ(ξ) − K_λ(ξ)) cos ϑ_λ.

    The result is nonnegative for every ξ > 0; a value below −abs_tol
    raises :class:`PositivityError`.
    """
    xi = float(xi)
    k_xi, _ = weighted_k(exp, eigen.lam, xi, cfg)
    value = 2.0 / xi * (eigen.K * l_ratio(eigen.lam, xi) - k_xi) * eigen.cos_theta
    if value < -cfg.abs_tol * max(1.0, 2.0 / xi):
        raise PositivityError(f"Laplace transform of F_λ is negative ({value:.3g})")
    return value


def g_integral(exp, eigen):
    """∫ G_λ(x) dx, the value of the symbol at ξ = 0.

    Equals (2 cos ϑ_λ/λ)(1 − λΨ'(λ)/(2Ψ(λ))).
    """
    lam = eigen.lam
    return 2 * eigen.cos_theta / lam * (1 - lam * exp.psi_prime(lam) / (2 * exp.psi(lam)))
