"""Symmetric Lévy exponents Ψ and checks of their structural hypotheses.

Five families are provided. Each is a frozen dataclass, so exponents are
hashable and can key caches. Evaluation methods are vectorised over numpy
arrays and treat Ψ as an even function of ξ.
"""

from dataclasses import dataclass, fields
from functools import lru_cache
from math import factorial, pi

import numpy as np
from scipy import integrate, special

from .exceptions import CapabilityError, DomainError
from .grids import as_points

__all__ = [
    "LevyExponent", "Stable", "BrownianPlusStable", "Relativistic",
    "TruncatedStable", "BrownianPlusPoisson", "AssumptionReport",
    "psi", "psi_prime", "psi_second", "psi_plus_imag_axis", "psi_inverse",
    "check_assumptions", "parse_family",
]


def _finite_array(xi):
    arr = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("exponent argument must be finite")
    return arr


def _ret(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


@dataclass(frozen=True)
class LevyExponent:
    """Base class. Subclasses implement the ``_psi*`` methods for ξ ≥ 0."""

    supports_holomorphic = False

    @property
    def kind(self):
        return type(self).__name__

    @property
    def params(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __str__(self):
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind}({args})"

    def psi(self, xi):
        arr = np.abs(_finite_array(xi))
        return _ret(self._psi(arr))

    def psi_prime(self, xi):
        arr = _finite_array(xi)
        a = np.abs(arr)
        if np.any(a == 0) and not self._smooth_at_zero(1):
            raise DomainError(f"Ψ' is singular at 0 for {self}")
        return _ret(np.sign(arr) * self._psi_prime(a) if np.any(arr < 0) else self._psi_prime(a))

    def psi_second(self, xi):
        arr = np.abs(_finite_array(xi))
        if np.any(arr == 0) and not self._smooth_at_zero(2):
            raise DomainError(f"Ψ'' is singular at 0 for {self}")
        return _ret(self._psi_second(arr))

    def concavity_defect(self, xi):
        """ξΨ''(ξ) − Ψ'(ξ), which is ≤ 0 exactly when ξ ↦ Ψ(√ξ) is concave."""
        arr = np.abs(_finite_array(xi))
        return _ret(self._defect(arr))

    def psi_plus_imag_axis(self, xi):
        """Boundary value Ψ⁺(iξ) of the holomorphic extension from Re > 0."""
        if not self.supports_holomorphic:
            raise CapabilityError(f"{self.kind} has no holomorphic extension available")
        arr = _finite_array(xi)
        if np.any(arr < 0):
            raise DomainError("psi_plus_imag_axis needs ξ ≥ 0")
        out = self._psi_plus(arr)
        return complex(out) if np.ndim(out) == 0 else out

    def small_scale_power(self):
        """Exponent p with Ψ(ξ) ≍ ξ^p as ξ → 0."""
        return 2.0

    def scales(self):
        """Lengths in ξ where Ψ changes regime; quadratures put breakpoints there."""
        return ()

    # Period of oscillating terms in Ψ, or None.
    oscillation_period = None

    def _smooth_at_zero(self, order):
        return True

    def _defect(self, xi):
        return xi * self._psi_second(xi) - self._psi_prime(xi)

    def tail_bound(self, radius):
        """Upper bound for ∫_R^∞ dξ/(1+Ψ(ξ)); ``inf`` if none is available."""
        raise NotImplementedError


@dataclass(frozen=True)
class Stable(LevyExponent):
    """Ψ(ξ) = |ξ|^α with α ∈ (1, 2]."""

    alpha: float = 1.5
    supports_holomorphic = True

    def __post_init__(self):
        if not 1 < self.alpha <= 2:
            raise DomainError(f"stable index must lie in (1, 2], got {self.alpha}")

    def _psi(self, xi):
        return xi**self.alpha

    def _psi_prime(self, xi):
        return self.alpha * xi ** (self.alpha - 1)

    def _psi_second(self, xi):
        if self.alpha == 2:
            return np.full_like(xi, 2.0)
        return self.alpha * (self.alpha - 1) * xi ** (self.alpha - 2)

    def _defect(self, xi):
        return self.alpha * (self.alpha - 2) * xi ** (self.alpha - 1)

    def _smooth_at_zero(self, order):
        return order == 1 or self.alpha == 2

    def _psi_plus(self, xi):
        return xi**self.alpha * np.exp(0.5j * pi * self.alpha)

    def small_scale_power(self):
        return self.alpha

    def tail_bound(self, radius):
        return radius ** (1 - self.alpha) / (self.alpha - 1)


@dataclass(frozen=True)
class BrownianPlusStable(LevyExponent):
    """Ψ(ξ) = ξ² + β|ξ|^α, Brownian motion plus an independent stable part."""

    alpha: float = 1.5
    beta: float = 1.0
    supports_holomorphic = True

    def __post_init__(self):
        if not 0 < self.alpha <= 2 or self.beta <= 0:
            raise DomainError("mixture needs α ∈ (0, 2] and β > 0")

    def _psi(self, xi):
        return xi**2 + self.beta * xi**self.alpha

    def _psi_prime(self, xi):
        return 2 * xi + self.beta * self.alpha * xi ** (self.alpha - 1)

    def _psi_second(self, xi):
        a = self.alpha
        stable = np.full_like(xi, 2.0) if a == 2 else a * (a - 1) * xi ** (a - 2)
        return 2 + self.beta * stable

    def _defect(self, xi):
        return self.beta * self.alpha * (self.alpha - 2) * xi ** (self.alpha - 1)

    def _smooth_at_zero(self, order):
        return self.alpha == 2 or self.alpha > order

    def _psi_plus(self, xi):
        return -(xi**2) + self.beta * xi**self.alpha * np.exp(0.5j * pi * self.alpha)

    def small_scale_power(self):
        return min(self.alpha, 2.0)

    def scales(self):
        return () if self.alpha == 2 else (self.beta ** (1 / (2 - self.alpha)),)

    def tail_bound(self, radius):
        return 1.0 / radius


@dataclass(frozen=True)
class Relativistic(LevyExponent):
    """Ψ(ξ) = (ξ² + m^{2/α})^{α/2} − m, relativistic α-stable with mass m."""

    alpha: float = 1.5
    m: float = 1.0
    supports_holomorphic = True

    def __post_init__(self):
        if not 0 < self.alpha <= 2 or self.m <= 0:
            raise DomainError("relativistic family needs α ∈ (0, 2] and m > 0")

    @property
    def threshold(self):
        """m^{1/α}, where Ψ⁺(iξ) stops being real."""
        return self.m ** (1 / self.alpha)

    def scales(self):
        return (self.threshold,)

    def _psi(self, xi):
        mu2 = self.threshold**2
        return self.m * np.expm1(0.5 * self.alpha * np.log1p(xi**2 / mu2))

    def _base(self, xi):
        return xi**2 + self.threshold**2

    def _psi_prime(self, xi):
        return self.alpha * xi * self._base(xi) ** (0.5 * self.alpha - 1)

    def _psi_second(self, xi):
        a, b = self.alpha, self._base(xi)
        return a * b ** (0.5 * a - 1) + a * (a - 2) * xi**2 * b ** (0.5 * a - 2)

    def _defect(self, xi):
        a = self.alpha
        return a * (a - 2) * xi**3 * self._base(xi) ** (0.5 * a - 2)

    def _psi_plus(self, xi):
        mu = self.threshold
        xi = np.asarray(xi, dtype=float)
        below = np.clip(mu**2 - xi**2, 0, None) ** (0.5 * self.alpha) + 0j
        above = np.clip(xi**2 - mu**2, 0, None) ** (0.5 * self.alpha) * np.exp(0.5j * pi * self.alpha)
        return np.where(xi <= mu, below, above) - self.m

    def tail_bound(self, radius):
        if self.alpha <= 1:
            return np.inf
        radius = max(radius, (2 * self.m) ** (1 / self.alpha))
        return 2 * radius ** (1 - self.alpha) / (self.alpha - 1)


# Truncated stable helpers.  With A(u) = ∫_0^u (1 − cos s) s^{−1−α} ds the
# exponent is Ψ(ξ) = 2c ξ^α A(ξ); the derivatives follow by differentiating
# under the integral sign ∫_0^1 (1 − cos ξx) x^{−1−α} dx.

_SERIES_SWITCH = 2.0
_ASYMPTOTIC_SWITCH = 40.0
_SERIES_TERMS = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


@lru_cache(maxsize=64)
def _series_coefficients(alpha, order):
    """Coefficients in ξ² of the Taylor series of the ``order``-th derivative of ξ^α A(ξ)."""
    ks = range(_SERIES_TERMS, 0, -1)
    return np.array([(-1) ** (k + 1) / (factorial(2 * k - order) * (2 * k - alpha)) for k in ks])


@lru_cache(maxsize=64)
def _defect_coefficients(alpha):
    ks = range(_SERIES_TERMS, 0, -1)
    return np.array([(-1) ** (k + 1) * (2 * k - 2) / (factorial(2 * k - 1) * (2 * k - alpha))
                     for k in ks])


def _even_series(xi, coeffs, power_shift):
    """Σ_{k≥1} coeffs[k] ξ^{2k+power_shift} by Horner's rule in ξ²."""
    return np.polyval(coeffs, xi * xi) * xi ** (2 + power_shift)


def _oscillatory_tail(u, beta, terms=30):
    """Re ∫_u^∞ e^{is} s^{−β} ds by its asymptotic expansion, for u ≥ 40."""
    total = np.zeros_like(u, dtype=complex)
    term = np.ones_like(u, dtype=complex)
    for k in range(terms):
        total += term
        term = term * (-1j) * (beta + k) / u
    return np.real(1j * np.exp(1j * u) * u ** (-beta) * total)


@dataclass(frozen=True)
class TruncatedStable(LevyExponent):
    """Stable-like exponent whose Lévy density is cut off outside [−1, 1].

    Ψ(ξ) = 2c ∫_0^1 (1 − cos ξx) x^{−1−α} dx, with α ∈ (0, 2) and
    jump intensity c > 0.
    """

    alpha: float = 1.5
    c: float = 1.0
    oscillation_period = 2 * pi

    def __post_init__(self):
        if not 0 < self.alpha < 2 or self.c <= 0:
            raise DomainError("truncated stable needs α ∈ (0, 2) and c > 0")

    def scales(self):
        return (1.0,)

    def _a_infinity(self):
        a = self.alpha
        if a == 1:
            return pi / 2
        return -special.gamma(-a) * np.cos(0.5 * pi * a)

    def _a_integral(self, u):
        """A(u) for u > 2."""
        a = self.alpha
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        far = u >= _ASYMPTOTIC_SWITCH
        uf = u[far]
        out[far] = self._a_infinity() - uf ** (-a) / a + _oscillatory_tail(uf, 1 + a)
        mid = ~far
        if np.any(mid):
            um = u[mid]
            two = np.array([_SERIES_SWITCH])
            start = _SERIES_SWITCH ** (-a) * self._scaled_a(two)[0]
            half = 0.5 * (um - _SERIES_SWITCH)
            s = _SERIES_SWITCH + half[:, None] * (_GL_NODES[None, :] + 1)
            vals = (1 - np.cos(s)) * s ** (-1 - a)
            out[mid] = start + half * (vals @ _GL_WEIGHTS)
        return out

    def _scaled_a(self, xi):
        """ξ^α A(ξ) by its power series, for ξ ≤ 2."""
        return _even_series(xi, _series_coefficients(self.alpha, 0), 0)

    def _split(self, xi, small, large):
        xi = np.asarray(xi, dtype=float)
        out = np.empty_like(xi)
        lo = xi <= _SERIES_SWITCH
        if np.any(lo):
            out[lo] = small(xi[lo])
        if np.any(~lo):
            xl = xi[~lo]
            out[~lo] = large(xl, self._a_integral(xl))
        return out

    def _psi(self, xi):
        a = self.alpha
        return 2 * self.c * self._split(xi, self._scaled_a, lambda x, A: x**a * A)

    def _psi_prime(self, xi):
        a = self.alpha
        small = lambda x: _even_series(x, _series_coefficients(a, 1), -1)
        large = lambda x, A: a * x ** (a - 1) * A + (1 - np.cos(x)) / x
        return 2 * self.c * self._split(xi, small, large)

    def _psi_second(self, xi):
        a = self.alpha
        small = lambda x: _even_series(x, _series_coefficients(a, 2), -2)
        large = lambda x, A: (a * (a - 1) * x ** (a - 2) * A + (a - 1) * (1 - np.cos(x)) / x**2
                              + np.sin(x) / x)
        return 2 * self.c * self._split(xi, small, large)

    def _defect(self, xi):
        a = self.alpha
        small = lambda x: _even_series(x, _defect_coefficients(a), -1)
        large = lambda x, A: (a * (a - 2) * x ** (a - 1) * A + (a - 2) * (1 - np.cos(x)) / x
                              + np.sin(x))
        return 2 * self.c * self._split(xi, small, large)

    def tail_bound(self, radius):
        if self.alpha <= 1:
            return np.inf
        a_r = self._a_integral(np.array([max(radius, 2 * _SERIES_SWITCH)]))[0]
        radius = max(radius, 2 * _SERIES_SWITCH)
        return radius ** (1 - self.alpha) / (2 * self.c * a_r * (self.alpha - 1))


@dataclass(frozen=True)
class BrownianPlusPoisson(LevyExponent):
    """Ψ(ξ) = ξ² + a(1 − cos ξ): Brownian motion plus ±1 jumps at total rate a."""

    rate: float = 9.0
    oscillation_period = 2 * pi

    def __post_init__(self):
        if self.rate <= 0:
            raise DomainError("jump rate must be positive")

    def scales(self):
        return (1.0,)

    def _psi(self, xi):
        return xi**2 + 2 * self.rate * np.sin(0.5 * xi) ** 2

    def _psi_prime(self, xi):
        return 2 * xi + self.rate * np.sin(xi)

    def _psi_second(self, xi):
        return 2 + self.rate * np.cos(xi)

    def _defect(self, xi):
        return self.rate * (xi * np.cos(xi) - np.sin(xi))

    def tail_bound(self, radius):
        return 1.0 / radius


def psi(exp, xi):
    return exp.psi(xi)


def psi_prime(exp, xi):
    return exp.psi_prime(xi)


def psi_second(exp, xi):
    return exp.psi_second(xi)


def psi_plus_imag_axis(exp, xi):
    return exp.psi_plus_imag_axis(xi)


def psi_inverse(exp, value):
    """Solve Ψ(ξ) = value for ξ ≥ 0 (Ψ is assumed increasing)."""
    from scipy.optimize import brentq

    if value <= 0:
        return 0.0
    hi = 1.0
    while exp.psi(hi) < value:
        hi *= 4
    lo = hi / 4 if hi > 1 else 0.0
    if lo == 0.0:
        lo = 1.0
        while exp.psi(lo) > value and lo > 1e-300:
            lo /= 4
        hi = min(hi, 4 * lo)
    return brentq(lambda x: exp.psi(x) - value, lo, hi, xtol=1e-15 * lo, rtol=1e-15)


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of sampling the structural hypotheses on a grid."""

    hit_integrable: bool
    hit_integral: float
    hit_tail_bound: float
    monotone: bool
    concave_half: bool
    samples_used: int
    worst_violation: float

    @property
    def all_hold(self):
        return self.hit_integrable and self.monotone and self.concave_half


def check_assumptions(exp, grid, tol=1e-10):
    """Sample Ψ' > 0 and ξΨ'' ≤ Ψ' on the grid and test integrability of 1/(1+Ψ).

    Concavity of ξ ↦ Ψ(√ξ) is equivalent to ξΨ''(ξ) ≤ Ψ'(ξ); the check
    allows a defect of ``tol·(1 + |Ψ'|)`` for rounding.
    """
    xi = as_points(grid)
    if xi.size == 0 or np.any(xi <= 0) or np.any(np.diff(xi) <= 0):
        raise DomainError("assumption grid must be positive and increasing")
    d1 = np.asarray(exp.psi_prime(xi), dtype=float)
    defect = np.asarray(exp.concavity_defect(xi), dtype=float)
    monotone = bool(np.all(d1 > 0))
    concave = bool(np.all(defect <= tol * (1 + np.abs(d1))))
    worst = float(max(np.max(-d1), np.max(defect / (1 + np.abs(d1)))))

    radius = float(xi[-1])
    head, _ = integrate.quad(lambda s: 1.0 / (1.0 + exp.psi(s)), 0.0, radius,
                             limit=500, points=[min(1.0, radius / 2)])
    bound = float(exp.tail_bound(radius))
    return AssumptionReport(
        hit_integrable=bool(np.isfinite(bound)),
        hit_integral=float(head),
        hit_tail_bound=bound,
        monotone=monotone,
        concave_half=concave,
        samples_used=int(xi.size),
        worst_violation=worst,
    )


_FAMILIES = {
    "stable": (Stable, {"alpha": "alpha"}),
    "mix": (BrownianPlusStable, {"alpha": "alpha", "beta": "beta"}),
    "rel": (Relativistic, {"alpha": "alpha", "m": "m"}),
    "trunc": (TruncatedStable, {"alpha": "alpha", "c": "c"}),
    "bmpoisson": (BrownianPlusPoisson, {"rate": "rate", "a": "rate"}),
}
_ALIASES = {
    "brownianplusstable": "mix", "relativistic": "rel",
    "truncatedstable": "trunc", "truncated": "trunc", "brownianpluspoisson": "bmpoisson",
    "brownian": "stable",
}


def parse_family(text):
    """Build an exponent from a string such as ``stable:alpha=1.5`` or ``bmpoisson:rate=9``."""
    given, _, rest = text.strip().lower().partition(":")
    name = _ALIASES.get(given, given)
    if name not in _FAMILIES:
        raise DomainError(f"unknown family {name!r}; expected one of {sorted(_FAMILIES)}")
    cls, keys = _FAMILIES[name]
    kwargs = {}
    if given == "brownian":
        kwargs["alpha"] = 2.0
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in keys:
            raise DomainError(f"bad parameter {item!r} for family {name}")
        try:
            kwargs[keys[key]] = float(value)
        except ValueError:
            raise DomainError(f"parameter {key} needs a number, got {value!r}") from None
    return cls(**kwargs)
