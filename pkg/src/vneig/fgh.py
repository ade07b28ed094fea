"""Fourier grid Hamiltonian: exact periodic kinetic matrix plus diagonal potential.

The kinetic matrix is the closed form for a band-limited periodic grid,

    T_ii = (hbar^2/2M) * (K^2/3) * (1 + 2/N^2),          K = pi/dx,
    T_ij = (hbar^2/2M) * (2K^2/N^2) * (-1)^(j-i) / sin^2(pi (j-i)/N),

which for even N is exactly the plane-wave kinetic operator sampled on the
grid (momenta 2*pi*j/L, j = -N/2+1 .. N/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .eigensolve import SpectrumResult, fix_phases
from .errors import (InvalidArgumentError, NumericalFailureError,
                     SingularPotentialError)
from .lattice import GridSpec
from .potentials import PotentialModel


@dataclass(frozen=True)
class GridHamiltonian:
    """Dense symmetric grid Hamiltonian and its potential diagonal."""

    grid: GridSpec
    matrix: np.ndarray
    potential_diag: np.ndarray


def kinetic_matrix(grid: GridSpec, mass: float) -> np.ndarray:
    """Kinetic-energy matrix on the periodic grid; symmetric Toeplitz."""
    if not (mass > 0):
        raise InvalidArgumentError(f"mass must be > 0, got {mass}")
    n = grid.n_points
    K = np.pi / grid.dx
    pref = grid.hbar**2 / (2.0 * mass)
    col = np.empty(n)
    col[0] = pref * (K**2 / 3.0) * (1.0 + 2.0 / n**2)
    if n > 1:
        d = np.arange(1, n)
        col[1:] = pref * (2.0 * K**2 / n**2) * (-1.0)**d / np.sin(np.pi * d / n)**2
    return sla.toeplitz(col)


def fgh_hamiltonian(grid: GridSpec, model: PotentialModel, mass: float) -> GridHamiltonian:
    """Assemble H = T + diag(V(x_i)); fails on a singular grid point."""
    x = grid.points()
    try:
        v = np.asarray(model.value(x), dtype=float)
    except SingularPotentialError as exc:
        i = int(np.abs(x).argmin())
        raise SingularPotentialError(
            f"potential singular on the grid: index {i}, x = {x[i]!r}") from exc
    bad = ~np.isfinite(v)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise SingularPotentialError(
            f"potential not finite on the grid: index {i}, x = {x[i]!r}")
    matrix = kinetic_matrix(grid, mass)
    matrix[np.diag_indices_from(matrix)] += v
    return GridHamiltonian(grid=grid, matrix=matrix, potential_diag=v)


def solve_fgh(H: GridHamiltonian, n_wanted: int) -> SpectrumResult:
    """Lowest n_wanted eigenpairs of the grid Hamiltonian."""
    n = H.grid.n_points
    if not 1 <= n_wanted <= n:
        raise InvalidArgumentError(
            f"n_wanted must be in [1, {n}], got {n_wanted}")
    try:
        w, v = sla.eigh(H.matrix)
    except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NumericalFailureError(
            f"dense symmetric eigensolve failed on {n}x{n} grid Hamiltonian: "
            f"{exc}") from exc
    w = w[:n_wanted]
    v = fix_phases(v[:, :n_wanted])
    residual = float(np.max(np.linalg.norm(H.matrix @ v - v * w, axis=0)
                            / np.linalg.norm(v, axis=0)))
    return SpectrumResult(
        eigenvalues=w,
        basis_size=n,
        residual_max=residual,
        overlap_condition=1.0,
        method_tag="fgh",
        eigenvectors=v,
    )
