"""Periodic coordinate grid and the phase-space lattice built on top of it.

The grid carries N evenly spaced points on [x_min, x_min + L); its momentum
radius is P = pi*hbar/dx, so the covered phase-space rectangle has area
2*L*P = N*h with h = 2*pi*hbar.  A lattice splits the same rectangle into
n_x * n_p = N unit cells of area h, one Gaussian basis function per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError, LatticeMismatchError


class PhasePoint(NamedTuple):
    """A point (x, p) in phase space."""

    x: float
    p: float


@dataclass(frozen=True)
class GridSpec:
    """Evenly spaced periodic coordinate grid.

    Grid point i is ``x_min + i*dx`` for i = 0..n_points-1; the right domain
    edge ``x_min + length`` is not a grid point.  ``dx`` is stored implicitly
    as ``length / n_points`` so that ``dx * n_points == length`` exactly.
    """

    n_points: int
    x_min: float
    length: float
    hbar: float

    def __post_init__(self):
        if self.n_points < 1:
            raise InvalidArgumentError(f"n_points must be >= 1, got {self.n_points}")
        if not (self.length > 0):
            raise InvalidArgumentError(f"length must be > 0, got {self.length}")
        if not (self.hbar > 0):
            raise InvalidArgumentError(f"hbar must be > 0, got {self.hbar}")

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @property
    def p_max(self) -> float:
        """Momentum radius P of the covered rectangle [-P, P)."""
        return math.pi * self.hbar / self.dx

    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    def phase_space_area(self) -> float:
        """Area 2*L*P of the rectangle; equals n_points * 2*pi*hbar."""
        return 2.0 * self.length * self.p_max


def make_grid(x_min: float, length: float, n_points: int, hbar: float) -> GridSpec:
    """Validated grid constructor.

    Parameters
    ----------
    x_min : left edge of the periodic domain.
    length : domain length L > 0.
    n_points : number of grid points, at least 2.
    hbar : reduced Planck constant (sets the momentum scale).
    """
    if n_points < 2:
        raise InvalidArgumentError(f"n_points must be >= 2, got {n_points}")
    if not (length > 0):
        raise InvalidArgumentError(f"length must be > 0, got {length}")
    if not (hbar > 0):
        raise InvalidArgumentError(f"hbar must be > 0, got {hbar}")
    return GridSpec(n_points=n_points, x_min=float(x_min), length=float(length),
                    hbar=float(hbar))


@dataclass(frozen=True)
class VnLatticeSpec:
    """n_x-by-n_p lattice of phase-space unit cells over a grid's rectangle.

    Cell widths are a = L/n_x in position and dp = 2*pi*hbar/a in momentum,
    so a*dp = h and n_p*dp spans the full momentum extent 2*P.  ``alpha`` is
    the Gaussian width parameter of the basis functions placed on the cell
    centers.
    """

    grid: GridSpec
    n_x: int
    n_p: int
    alpha: float

    def __post_init__(self):
        if self.n_x < 1 or self.n_p < 1:
            raise InvalidArgumentError(
                f"n_x and n_p must be >= 1, got {self.n_x}, {self.n_p}")
        if self.n_x * self.n_p != self.grid.n_points:
            raise LatticeMismatchError(
                f"lattice cells n_x*n_p = {self.n_x}*{self.n_p} = "
                f"{self.n_x * self.n_p} but grid has n_points = {self.grid.n_points}")
        if not (self.alpha > 0):
            raise InvalidArgumentError(f"alpha must be > 0, got {self.alpha}")

    @property
    def a(self) -> float:
        """Cell width in position."""
        return self.grid.length / self.n_x

    @property
    def dp(self) -> float:
        """Cell width in momentum; a*dp = 2*pi*hbar."""
        return 2.0 * math.pi * self.grid.hbar / self.a

    @property
    def size(self) -> int:
        return self.n_x * self.n_p


def default_alpha(grid: GridSpec, n_x: int) -> float:
    """Width parameter dp/(2a) that keeps the sampled Gaussians independent."""
    a = grid.length / n_x
    dp = 2.0 * math.pi * grid.hbar / a
    return dp / (2.0 * a)


def make_lattice(grid: GridSpec, n_x: int, n_p: int,
                 alpha: float | None = None) -> VnLatticeSpec:
    """Validated lattice constructor; alpha defaults to dp/(2a)."""
    if n_x < 1 or n_p < 1:
        raise InvalidArgumentError(f"n_x and n_p must be >= 1, got {n_x}, {n_p}")
    if n_x * n_p != grid.n_points:
        raise LatticeMismatchError(
            f"lattice cells n_x*n_p = {n_x}*{n_p} = {n_x * n_p} but grid has "
            f"n_points = {grid.n_points}")
    if alpha is None:
        alpha = default_alpha(grid, n_x)
    elif not (alpha > 0):
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    return VnLatticeSpec(grid=grid, n_x=n_x, n_p=n_p, alpha=float(alpha))


def cell_center(lattice: VnLatticeSpec, cell_index: int) -> PhasePoint:
    """Phase-space center of one unit cell.

    The flattened index runs position-fastest: cell_index = j*n_x + i with
    i the position slot and j the momentum slot.  Centers sit half a cell
    away from the rectangle edges, so none lies on the boundary.
    """
    if not 0 <= cell_index < lattice.size:
        raise IndexError(
            f"cell_index {cell_index} out of range for {lattice.n_x}x{lattice.n_p} lattice")
    i = cell_index % lattice.n_x
    j = cell_index // lattice.n_x
    x = lattice.grid.x_min + (i + 0.5) * lattice.a
    p = -lattice.grid.p_max + (j + 0.5) * lattice.dp
    return PhasePoint(x, p)


def cell_centers(lattice: VnLatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """All cell centers at once, as (x, p) arrays in flattening order."""
    idx = np.arange(lattice.size)
    x = lattice.grid.x_min + (idx % lattice.n_x + 0.5) * lattice.a
    p = -lattice.grid.p_max + (idx // lattice.n_x + 0.5) * lattice.dp
    return x, p
