"""Spectral transforms of the killed semigroup and checks of their properties.

For f on the line, Π_even f(λ) = ∫ f F_λ and Π_odd f(λ) = ∫ f(x) sin(λx) dx.
The pair diagonalises the killed semigroup and is unitary up to a factor
√π.  Integrals over x use the trapezoid rule on the grid the function is
sampled on, so accuracy is set by the caller's sampling.
"""

from dataclasses import dataclass
from math import pi

import numpy as np

from .eigenfunctions import compute_eigendata, eigenfunction_values, laplace_F
from .exceptions import DomainError
from .grids import GridFunction, RealGrid, as_grid
from .kernels import killed_apply, spectral_integral, trapezoid_weights
from .quadrature import DEFAULT_CONFIG, parallel_map

__all__ = [
    "TransformPair", "pi_even", "pi_odd", "pi_transform", "pi_star", "verify_parseval",
    "parseval_matrix", "verify_diagonalization", "generator_deviation", "default_lambda_grid",
]


@dataclass
class TransformPair:
    """(Π_even f, Π_odd f) sampled on a λ grid."""

    lambda_grid: RealGrid
    even_part: np.ndarray
    odd_part: np.ndarray

    @property
    def lam(self):
        return self.lambda_grid.points


def _sorted(f):
    order = np.argsort(f.grid.points, kind="stable")
    return f.grid.points[order], f.values[order]


def _eigen_matrix(exp, lam, x, cfg):
    """Rows F_λ(x) for each λ."""
    rows = parallel_map(lambda l: eigenfunction_values(exp, l, x, cfg)[0], list(lam))
    return np.array(rows).reshape(len(lam), len(x))


def pi_even(exp, f, lambda_grid, cfg=DEFAULT_CONFIG):
    """Π_even f(λ) = ∫ f(x) F_λ(x) dx for each λ in the grid."""
    lam = as_grid(lambda_grid).points
    if np.any(lam <= 0):
        raise DomainError("λ grid must be positive")
    x, v = _sorted(f)
    w = trapezoid_weights(x) * v
    return _eigen_matrix(exp, lam, x, cfg) @ w


def pi_odd(f, lambda_grid, cfg=DEFAULT_CONFIG):
    """Π_odd f(λ) = ∫ f(x) sin(λx) dx for each λ in the grid."""
    lam = as_grid(lambda_grid).points
    x, v = _sorted(f)
    w = trapezoid_weights(x) * v
    return np.sin(np.outer(lam, x)) @ w


def pi_transform(exp, f, lambda_grid, cfg=DEFAULT_CONFIG):
    grid = as_grid(lambda_grid)
    return TransformPair(grid, pi_even(exp, f, grid, cfg), pi_odd(f, grid, cfg))


def pi_star(exp, even_values, odd_values, lambda_grid, x_grid, cfg=DEFAULT_CONFIG):
    """Π*(f₁, f₂)(x) = ∫_0^∞ f₁(λ) F_λ(x) dλ + ∫_0^∞ f₂(λ) sin(λx) dλ.

    f₁ and f₂ are given on ``lambda_grid`` and taken to vanish outside it.
    """
    lam = as_grid(lambda_grid).points
    xg = as_grid(x_grid)
    x = xg.points
    wl = trapezoid_weights(lam)
    f1 = np.asarray(even_values, dtype=float)
    f2 = np.asarray(odd_values, dtype=float)
    out = np.zeros(x.size)
    active = np.flatnonzero(f1 != 0)
    if active.size:
        out += (wl[active] * f1[active]) @ _eigen_matrix(exp, lam[active], x, cfg)
    out += (wl * f2) @ np.sin(np.outer(lam, x))
    return GridFunction(xg, out)


def default_lambda_grid(x_max, lam_max=40.0):
    """Uniform λ grid with at least 8 points per period of sin(λ x_max)."""
    step = 2 * pi / (8 * max(float(x_max), 1e-3))
    count = int(np.ceil(lam_max / step)) + 1
    return RealGrid.linear(lam_max / count, lam_max, count)


def parseval_matrix(exp, xis, cfg=DEFAULT_CONFIG):
    """∫_0^∞ Π_even e_ξᵢ(λ) Π_even e_ξⱼ(λ) dλ for e_ξ(x) = e^{−ξ|x|}.

    Π_even e_ξ(λ) is the closed-form Laplace transform of F_λ, so no
    x-quadrature is involved.
    """
    xis = np.asarray(xis, dtype=float)
    if np.any(xis <= 0):
        raise DomainError("ξ must be positive")
    iu = np.triu_indices(xis.size)

    def fun(lam):
        e = compute_eigendata(exp, lam, cfg)
        v = np.array([laplace_F(exp, e, xi, cfg) for xi in xis])
        return np.outer(v, v)[iu]

    res, err = spectral_integral(fun, cfg, scale=float(np.min(xis)))
    out = np.zeros((xis.size, xis.size))
    out[iu] = res
    out.T[iu] = res
    return out, err


def verify_parseval(exp, xi1, xi2, cfg=DEFAULT_CONFIG):
    """(computed, expected, relative error) for ⟨Π_even e_ξ₁, Π_even e_ξ₂⟩ = 2π/(ξ₁+ξ₂)."""
    m, _ = parseval_matrix(exp, [xi1, xi2], cfg)
    computed = float(m[0, 1])
    expected = 2 * pi / (xi1 + xi2)
    return computed, expected, abs(computed - expected) / expected


def _evolved(exp, f, t, x_grid, cfg, advisory):
    if t == 0:
        return f
    return killed_apply(exp, t, f, x_grid, cfg, advisory)


def verify_diagonalization(exp, f, t, lambda_grid, cfg=DEFAULT_CONFIG, x_grid=None, advisory=True):
    """max over λ of |Π P_t^{R∖0} f − e^{−tΨ(λ)} Π f|, both parity parts.

    P_t^{R∖0} f is computed on ``x_grid`` (by default f's support widened by
    40 on each side at the finer of f's spacing and 0.05) from the killed
    density, then transformed.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    lam = as_grid(lambda_grid).points
    if x_grid is None:
        x, _ = _sorted(f)
        step = min(0.05, float(np.min(np.diff(x)))) if x.size > 1 else 0.05
        reach = float(np.max(np.abs(x))) + 40.0
        x_grid = RealGrid.linear(-reach, reach, int(2 * reach / step) + 1)
    pf = _evolved(exp, f, t, x_grid, cfg, advisory)
    damp = np.exp(-t * np.asarray(exp.psi(lam)))
    even = pi_even(exp, pf, lam, cfg) - damp * pi_even(exp, f, lam, cfg)
    odd = pi_odd(pf, lam, cfg) - damp * pi_odd(f, lam, cfg)
    return float(max(np.max(np.abs(even)), np.max(np.abs(odd))))


def generator_deviation(exp, f, lambda_grid, h=1e-2, cfg=DEFAULT_CONFIG, x_grid=None, advisory=True):
    """Weak-form generator check: max |(Π P_h f − Π f)/h + Ψ Π f| over λ.

    The deviation is O(h) for smooth f.
    """
    lam = as_grid(lambda_grid).points
    if x_grid is None:
        x, _ = _sorted(f)
        reach = float(np.max(np.abs(x))) + 40.0
        x_grid = RealGrid.linear(-reach, reach, int(2 * reach / 0.05) + 1)
    pf = killed_apply(exp, h, f, x_grid, cfg, advisory)
    psi = np.asarray(exp.psi(lam))
    base_even, base_odd = pi_even(exp, f, lam, cfg), pi_odd(f, lam, cfg)
    d_even = (pi_even(exp, pf, lam, cfg) - base_even) / h + psi * base_even
    d_odd = (pi_odd(pf, lam, cfg) - base_odd) / h + psi * base_odd
    return float(max(np.max(np.abs(d_even)), np.max(np.abs(d_odd))))
