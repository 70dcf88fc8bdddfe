"""Integration engines: principal values, oscillatory cosine transforms,
improper integrals and Laplace transforms of densities.

Routines that return a single number follow :func:`scipy.integrate.quad`
and return ``(value, abserr)``.
"""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import pi

import numpy as np
from scipy import integrate

from .exceptions import AccuracyError, DomainError
from .grids import GridFunction, as_grid

__all__ = [
    "QuadratureConfig", "DEFAULT_CONFIG", "folded_pv", "pv_psi_integral",
    "fourier_cosine_inverse", "cosine_transform", "improper_integral",
    "laplace_transform", "parallel_map",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation controls shared by every integral.

    ``singularity_window`` is relative to the pole location.
    ``tail_cutoff_factor`` scales the envelope level (in units of
    ``abs_tol``) at which infinite ranges are truncated.
    ``oscillatory_blocks`` half-periods are summed directly before the
    alternating tail is accelerated.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    singularity_window: float = 1e-3
    tail_cutoff_factor: float = 1.0
    oscillatory_blocks: int = 64

    def __post_init__(self):
        if min(self.abs_tol, self.rel_tol, self.tail_cutoff_factor) <= 0:
            raise DomainError("tolerances must be strictly positive")
        if not 0 < self.singularity_window < 0.5:
            raise DomainError("singularity window must lie in (0, 1/2)")
        if self.max_subdivisions < 1 or self.oscillatory_blocks < 1:
            raise DomainError("subdivision and block counts must be positive")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_tolerances(self, abs_tol=None, rel_tol=None):
        return QuadratureConfig(
            abs_tol=self.abs_tol if abs_tol is None else abs_tol,
            rel_tol=self.rel_tol if rel_tol is None else rel_tol,
            max_subdivisions=self.max_subdivisions,
            singularity_window=self.singularity_window,
            tail_cutoff_factor=self.tail_cutoff_factor,
            oscillatory_blocks=self.oscillatory_blocks,
        )


DEFAULT_CONFIG = QuadratureConfig()

# A few pieces are combined in most routines, so some slack over the
# per-piece tolerance is allowed before declaring failure.
_SLACK = 4.0


def _quad(f, a, b, cfg, **kw):
    """scipy quad with the config tolerances; warnings become error estimates."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=kw.pop("epsabs", cfg.abs_tol),
                             epsrel=kw.pop("epsrel", cfg.rel_tol),
                             limit=kw.pop("limit", cfg.max_subdivisions), full_output=1, **kw)
    return out[0], out[1]


def _checked(value, error, cfg, what):
    if not np.isfinite(value) or error > _SLACK * cfg.tolerance(value):
        raise AccuracyError(f"{what}: error estimate {error:.3g} exceeds tolerance",
                            estimate=value, error=error)
    return value, error


def _panel_gl(f, start, width, count):
    """Sum of 20-point Gauss–Legendre rules over ``count`` panels of a vectorised f."""
    mids = start + width * (np.arange(count) + 0.5)
    nodes = mids[:, None] + 0.5 * width * _GL_X[None, :]
    return float(np.sum(f(nodes.ravel()).reshape(nodes.shape) @ _GL_W) * 0.5 * width)


def _tail_beyond(f, start, cfg, far_points, period):
    """∫_start^∞ f for f without singularities, decaying at least like 1/ξ.

    The range is mapped onto (0, 1] by ξ = start/s.  With an oscillation
    period, whole periods are first summed by Gauss–Legendre panels up to a
    cut that grows until the mapped remainder integrates cleanly.
    """
    def mapped(z):
        return lambda s: f(z / s) * z / (s * s)

    reach = min([1e-15] + [1e-3 * start / b for b in far_points if b > start])
    decades = {10.0 ** -k for k in range(1, int(-np.log10(reach)) + 1)}
    if period is None:
        pts = sorted(decades | {start / b for b in far_points if b > start})
        return _quad(mapped(start), 0.0, 1.0, cfg, points=pts)
    count = 64
    while True:
        cut = start + count * period
        panels = _panel_gl(f, start, period, count)
        pts = sorted(decades | {cut / b for b in far_points if b > cut})
        rest, err = _quad(mapped(cut), 0.0, 1.0, cfg, points=pts)
        if err <= cfg.abs_tol or count >= 2**20:
            return panels + rest, err
        count *= 4


def folded_pv(f, pole, center_value, cfg=DEFAULT_CONFIG, breakpoints=(), period=None):
    """Principal value of ∫_0^∞ f(ξ) dξ for f with a simple pole at ``pole``.

    On (0, 2λ) the two sides of the pole are reflected onto each other,
    ξ = λ(1 ∓ u), and added, which cancels the pole.  The sum is integrated
    adaptively on (δ, 1); on the window (0, δ) Simpson's rule is used with
    ``center_value``, the limit of the reflected integrand at u = 0.  The
    remainder (2λ, ∞) is mapped onto (0, 1] by ξ = 2λ/s, which turns
    power-law tails into integrable endpoint singularities.  ``f`` must
    accept arrays when ``period`` is given.
    """
    lam = float(pole)
    if not lam > 0:
        raise DomainError("pole must be positive")
    delta = cfg.singularity_window
    if period is not None:
        delta = min(delta, 0.02 * period / lam)
    # The pieces can cancel, so they are integrated to a tighter relative tolerance.
    piece = cfg.with_tolerances(cfg.abs_tol / 4, cfg.rel_tol * 1e-2)

    def reflected(u):
        return lam * (f(lam * (1.0 - u)) + f(lam * (1.0 + u)))

    near = {abs(b / lam - 1.0) for b in breakpoints if 0 < b < 2 * lam}
    if period is not None:
        near |= set(period / lam * np.arange(1, min(int(lam / period) + 1, 20000)))
    # Crossovers far below λ sit within a negligible sliver next to u = 1.
    near = sorted(p for p in near if delta < p < 1.0 - 1e-9)
    main, err = _quad(reflected, delta, 1.0, piece, points=near or None,
                      limit=max(cfg.max_subdivisions, 2 * len(near) + 50))
    h = [center_value] + [reflected(k * delta / 4) for k in (1, 2, 3, 4)]
    coarse = delta / 6 * (h[0] + 4 * h[2] + h[4])
    fine = delta / 12 * (h[0] + 4 * h[1] + 2 * h[2] + 4 * h[3] + h[4])
    err += abs(fine - coarse)
    rest, rerr = _tail_beyond(f, 2 * lam, piece, breakpoints, period)
    return _checked(main + fine + rest, err + rerr, cfg, "principal value integral")


def pv_psi_integral(exp, lam, weight=None, cfg=DEFAULT_CONFIG, weight_prime=None, breakpoints=()):
    """(1/π) PV ∫_0^∞ w(ξ) Ψ'(λ)/(Ψ(λ) − Ψ(ξ)) dξ, returned as ``(value, abserr)``.

    ``weight`` defaults to 1.  Its derivative is needed for the removable
    singularity and is taken by a central difference when not supplied.
    """
    lam = float(lam)
    if not lam > 0 or not np.isfinite(lam):
        raise DomainError("λ must be positive and finite")
    if not np.isfinite(exp.tail_bound(1.0)):
        raise DomainError(f"{exp}: ∫ dξ/Ψ diverges at infinity, so the principal value does not exist")
    p0, p1, p2 = exp.psi(lam), exp.psi_prime(lam), exp.psi_second(lam)
    if not p1 > 0:
        raise DomainError(f"Ψ'(λ) must be positive, got {p1}")
    if weight is None:
        w = lambda x: 1.0
        w0, w1 = 1.0, 0.0
    else:
        w = weight
        w0 = weight(lam)
        if weight_prime is not None:
            w1 = weight_prime(lam)
        else:
            step = 1e-5 * lam
            w1 = (weight(lam + step) - weight(lam - step)) / (2 * step)

    def f(x):
        return w(x) * p1 / (p0 - exp.psi(x))

    center = lam * (w0 * p2 / p1 - 2 * w1)
    value, err = folded_pv(f, lam, center, cfg, tuple(breakpoints) + tuple(exp.scales()),
                           period=exp.oscillation_period)
    return value / pi, err / pi


def improper_integral(f, cfg=DEFAULT_CONFIG, lower=0.0, envelope=None, points=()):
    """∫_lower^∞ f, returned as ``(value, abserr)``.

    With ``envelope`` (a function R ↦ bound on ∫_R^∞ |f|), the range is cut
    at the first R = 2^k where the bound drops below the cutoff level and the
    bound is added to the error.  Without it the infinite range is handled by
    scipy's transformation to a finite interval.
    """
    pts = sorted(p for p in points if p > lower)
    if envelope is not None:
        level = 0.5 * cfg.abs_tol * cfg.tail_cutoff_factor
        radius = max([lower + 1.0] + pts)
        while envelope(radius) > level:
            radius *= 2
            if radius > 1e300:
                raise AccuracyError("tail envelope never drops below tolerance")
        value, err = _quad(f, lower, radius, cfg, points=pts or None)
        err += envelope(radius)
        return _checked(value, err, cfg, "improper integral")
    if pts:
        split = pts[-1]
        v1, e1 = _quad(f, lower, split, cfg, points=pts[:-1] or None)
        v2, e2 = _quad(f, split, np.inf, cfg)
        return _checked(v1 + v2, e1 + e2, cfg, "improper integral")
    value, err = _quad(f, lower, np.inf, cfg)
    return _checked(value, err, cfg, "improper integral")


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _panel_integrals(symbol, x, starts, width, tol=0.0, max_split=1024):
    """∫ symbol(ξ) cos(ξx) over [s, s + width] for each start s.

    Each panel is cut into m equal pieces, each with a 20-point
    Gauss–Legendre rule, and m is doubled for the panels whose estimate
    moves by more than ``tol`` (symbols with their own oscillation need
    this once the half-period π/x is wide).  Returns the values and the last
    change as an error estimate.
    """
    def rule(a, m):
        h = width / m
        left = a[:, None] + h * np.arange(m)[None, :]
        nodes = left[:, :, None] + 0.5 * h * (_GL_X[None, None, :] + 1)
        vals = np.asarray(symbol(nodes.ravel()), dtype=float).reshape(nodes.shape)
        return 0.5 * h * ((vals * np.cos(nodes * x)) @ _GL_W).sum(axis=1)

    starts = np.asarray(starts, dtype=float)
    coarse = rule(starts, 1)
    fine = rule(starts, 2)
    err = np.abs(fine - coarse)
    m = 2
    bad = err > tol
    while np.any(bad) and m < max_split:
        m *= 2
        finer = rule(starts[bad], m)
        err[bad] = np.abs(finer - fine[bad])
        fine[bad] = finer
        bad[bad] = err[bad] > tol
    return fine, err


def _euler_sum(terms, tol):
    """Sum of an alternating series by the Euler transform; returns (sum, error)."""
    a = np.abs(np.asarray(terms, dtype=float))
    sign = np.sign(terms[0]) if terms[0] != 0 else 1.0
    total = 0.0
    last = np.inf
    diffs = a.copy()
    for n in range(a.size):
        term = diffs[0] / 2 ** (n + 1)
        total += term * (-1) ** n
        last = abs(term)
        if last < tol:
            break
        diffs = np.diff(diffs)
        if diffs.size == 0:
            break
    return sign * total, last


def cosine_transform(symbol, x, cfg=DEFAULT_CONFIG, breakpoints=(), head=1.0):
    """∫_0^∞ symbol(ξ) cos(ξx) dξ as ``(value, abserr)``.

    ``symbol`` must accept numpy arrays.  The range up to the first zero of
    cos(ξx) past ``head`` (and past the breakpoints) is done by adaptive
    Clenshaw–Curtis quadrature with cosine weight.  Beyond it the integral is
    split into half-periods; ``cfg.oscillatory_blocks`` of them are summed
    directly and the remaining alternating series is Euler-accelerated.
    """
    x = abs(float(x))
    scalar = lambda s: float(symbol(np.array([s]))[0])
    bps = sorted(b for b in breakpoints if b > 0)
    reach = max([head] + [2 * b for b in bps])
    if x == 0:
        return improper_integral(scalar, cfg, points=bps + [64 * max(reach, 2 * pi)])
    k0 = max(0, int(np.ceil(reach * x / pi - 0.5)))
    z0 = (k0 + 0.5) * pi / x
    edges = [0.0] + [b for b in bps if b < z0] + [z0]
    value, err = 0.0, 0.0
    # The head and the oscillatory tail can cancel, so the head is held to a
    # tighter relative tolerance than the total.
    eps = cfg.abs_tol / (2 * len(edges))
    rel = cfg.rel_tol * 1e-2
    for a, b in zip(edges[:-1], edges[1:]):
        if x * (b - a) > 40 * pi:
            v, e = _quad(scalar, a, b, cfg, weight="cos", wvar=x, epsabs=eps, epsrel=rel)
        else:
            v, e = _quad(lambda s: scalar(s) * np.cos(s * x), a, b, cfg, epsabs=eps, epsrel=rel)
        value += v
        err += e

    width = pi / x
    direct = cfg.oscillatory_blocks
    extra = 48
    ptol = 1e-3 * cfg.abs_tol
    panels, perr = _panel_integrals(symbol, x, z0 + width * np.arange(direct + extra), width, ptol)

    def accelerated(n):
        tail, terr = _euler_sum(panels[n:n + extra], 0.1 * cfg.abs_tol)
        return panels[:n].sum() + tail, terr

    def alternating(block):
        big = np.abs(block) > 0.01 * cfg.abs_tol
        signs = np.sign(block)
        return not np.any(big[1:] & big[:-1] & (signs[1:] == signs[:-1]))

    estimate, terr = accelerated(direct)
    if not alternating(panels[direct:]) or terr > 0.25 * cfg.tolerance(value + estimate):
        # Non-monotone envelope (e.g. an oscillating symbol): push the start of
        # the accelerated tail out until successive estimates agree.
        n = direct
        while True:
            n *= 2
            if n > 2**16:
                raise AccuracyError("oscillatory tail did not settle; symbol envelope insufficient",
                                    estimate=value + estimate, error=terr)
            more, more_err = _panel_integrals(symbol, x, z0 + width * np.arange(panels.size, n + extra),
                                              width, ptol)
            panels = np.concatenate([panels, more])
            perr = np.concatenate([perr, more_err])
            new, terr = accelerated(n)
            change = abs(new - estimate)
            estimate = new
            if change < 0.25 * cfg.tolerance(value + estimate):
                terr += change
                break
    value += estimate
    err += perr.sum() + terr
    return _checked(value, err, cfg, "cosine transform")


def _workers():
    env = os.environ.get("LEVY_SPECTRAL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))


def parallel_map(func, items):
    """Map over items with a thread pool capped by ``LEVY_SPECTRAL_THREADS``."""
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def fourier_cosine_inverse(symbol, x_grid, cfg=DEFAULT_CONFIG, breakpoints=(), head=1.0):
    """g(x) = (1/π) ∫_0^∞ symbol(ξ) cos(ξx) dξ on a grid, for an even integrable symbol."""
    grid = as_grid(x_grid)
    ax = np.abs(grid.points)
    uniq, inverse = np.unique(ax, return_inverse=True)
    results = parallel_map(lambda x: cosine_transform(symbol, x, cfg, breakpoints, head), uniq)
    vals = np.array([r[0] for r in results]) / pi
    errs = np.array([r[1] for r in results]) / pi
    return GridFunction(grid, vals[inverse], errs[inverse])


def laplace_transform(density, x, cfg=DEFAULT_CONFIG, lower=0.0, scale=1.0, max_nodes=400_000):
    """∫_lower^∞ density(ξ) e^{−ξx} dξ for every x ≥ 0 in an array.

    Uses ξ = lower + scale·e^u and the trapezoidal rule in u, halving the
    step until successive results agree.  For a density analytic near the
    half-line this converges exponentially fast.  The x = 0 entries are
    done separately by adaptive quadrature.  Returns ``(values, errors)``.
    """
    x = np.abs(np.asarray(x, dtype=float))
    values = np.zeros_like(x)
    errors = np.zeros_like(x)
    at_zero = x == 0
    if np.any(at_zero):
        v, e = improper_integral(lambda s: float(density(np.array([s]))[0]), cfg,
                                 lower=lower, points=[lower + scale])
        values[at_zero], errors[at_zero] = v, e
    pos = ~at_zero
    if not np.any(pos):
        return values, errors
    xp = x[pos]
    tiny = 1e-3 * cfg.abs_tol

    def g(u):
        e = scale * np.exp(u)
        return np.asarray(density(lower + e), dtype=float) * e

    u_lo = -8.0
    while abs(g(np.array([u_lo]))[0]) > tiny and u_lo > -700:
        u_lo -= 4.0
    xmin = xp.min()
    # Beyond e^700 the exponent overflows; x below e^−700/scale is
    # indistinguishable from the origin at double precision anyway.
    u_hi = min(700.0, max(2.0, -np.log(min(1.0, scale * xmin))))
    while True:
        e = scale * np.exp(u_hi)
        if abs(g(np.array([u_hi]))[0] * np.exp(-(lower + e) * xmin)) < tiny or u_hi > 700:
            break
        u_hi += 1.0

    def level_sum(nodes):
        gv = g(nodes)
        xi = lower + scale * np.exp(nodes)
        out = np.zeros_like(xp)
        for chunk in np.array_split(np.arange(nodes.size), max(1, nodes.size * xp.size // 2_000_000)):
            out += np.exp(-np.outer(xp, xi[chunk])) @ gv[chunk]
        return out

    h = 0.5
    count = int(np.ceil((u_hi - u_lo) / h))
    total = h * level_sum(u_lo + h * np.arange(count + 1))
    while True:
        refined = 0.5 * total + 0.5 * h * level_sum(u_lo + h * (np.arange(count) + 0.5))
        diff = np.abs(refined - total)
        h *= 0.5
        count *= 2
        total = refined
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total))
        if np.all(diff <= tol):
            break
        if count > max_nodes:
            values[pos] = total
            raise AccuracyError("Laplace transform did not converge", estimate=values,
                                error=float(diff.max()))
    values[pos] = total
    errors[pos] = diff
    return values, errors
