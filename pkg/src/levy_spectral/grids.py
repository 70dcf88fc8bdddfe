"""Sample grids and sampled functions."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

MAX_GRID_POINTS = 10**7


@dataclass(frozen=True)
class RealGrid:
    """Sorted sample points on the real line."""

    points: np.ndarray
    spacing: str = "linear"

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("grid must be a nonempty one-dimensional array")
        if pts.size > MAX_GRID_POINTS:
            raise DomainError(f"grid has {pts.size} points, limit is {MAX_GRID_POINTS}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("grid points must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def linear(cls, start, stop, count):
        return cls(np.linspace(start, stop, int(count)), "linear")

    @classmethod
    def log(cls, start, stop, count):
        if start <= 0 or stop <= 0:
            raise DomainError("log grid bounds must be positive")
        return cls(np.geomspace(start, stop, int(count)), "log")

    @classmethod
    def parse(cls, text):
        """Parse ``min:max:count[:log]``; a bare number gives a one-point grid."""
        parts = text.strip().split(":")
        try:
            if len(parts) == 1:
                return cls(np.array([float(parts[0])]))
            if len(parts) not in (3, 4):
                raise ValueError
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise DomainError(f"bad grid spec {text!r}, expected min:max:count[:log]") from None
        if count < 1:
            raise DomainError("grid count must be positive")
        if count > MAX_GRID_POINTS:
            raise DomainError(f"grid count {count} exceeds {MAX_GRID_POINTS}")
        if len(parts) == 4:
            if parts[3].lower() != "log":
                raise DomainError(f"unknown grid spacing {parts[3]!r}")
            return cls.log(lo, hi, count)
        return cls.linear(lo, hi, count)

    def __len__(self):
        return self.points.size

    def __array__(self, dtype=None, copy=None):
        return self.points if dtype is None else self.points.astype(dtype)


@dataclass
class GridFunction:
    """Values of a function sampled on a grid, with pointwise error bounds."""

    grid: RealGrid
    values: np.ndarray
    errors: np.ndarray = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.errors is None:
            self.errors = np.zeros_like(self.values)
        else:
            self.errors = np.broadcast_to(np.asarray(self.errors, dtype=float), self.values.shape).copy()

    @property
    def x(self):
        return self.grid.points

    @property
    def max_error(self):
        return float(np.max(self.errors)) if self.errors.size else 0.0


def as_points(grid):
    """Accept a RealGrid, array or scalar and return a float array."""
    if isinstance(grid, RealGrid):
        return grid.points
    return np.atleast_1d(np.asarray(grid, dtype=float))


def as_grid(grid):
    return grid if isinstance(grid, RealGrid) else RealGrid(as_points(grid))
