"""Potential-energy models with analytic bound-state oracles.

Three closed-form models (harmonic, Morse, Coulomb) plus a tabulated hook.
Each model carries its particle mass; the analytic level formulas serve as
ground truth in tests and experiment reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularPotentialError
from .lattice import PhasePoint


@dataclass(frozen=True)
class Harmonic:
    """V(x) = m*omega^2*x^2 / 2."""

    mass: float
    omega: float

    kind = "harmonic"

    def __post_init__(self):
        if not (self.mass > 0):
            raise InvalidArgumentError(f"mass must be > 0, got {self.mass}")
        if not (self.omega > 0):
            raise InvalidArgumentError(f"omega must be > 0, got {self.omega}")

    def value(self, x):
        return 0.5 * self.mass * self.omega**2 * np.asarray(x, dtype=float)**2


@dataclass(frozen=True)
class Morse:
    """V(x) = depth * (1 - exp(-steepness*x))^2, minimum at x = 0."""

    depth: float
    steepness: float
    mass: float

    kind = "morse"

    def __post_init__(self):
        for name in ("depth", "steepness", "mass"):
            if not (getattr(self, name) > 0):
                raise InvalidArgumentError(
                    f"{name} must be > 0, got {getattr(self, name)}")

    def value(self, x):
        return self.depth * (1.0 - np.exp(-self.steepness * np.asarray(x, dtype=float)))**2

    def well_frequency(self, hbar: float) -> float:
        """Harmonic frequency at the well bottom: steepness*sqrt(2*depth/mass)."""
        return self.steepness * math.sqrt(2.0 * self.depth / self.mass)

    def bound_state_count(self, hbar: float) -> int:
        lam = math.sqrt(2.0 * self.mass * self.depth) / (self.steepness * hbar)
        return int(math.floor(lam - 0.5)) + 1


@dataclass(frozen=True)
class Coulomb:
    """V(x) = -charge^2 / (|x| + core_offset).

    The symmetric |x| form keeps the model bounded on grids spanning
    negative x; core_offset = 0 is the bare singular case and then the
    model must not be evaluated at x = 0.
    """

    charge: float
    mass: float
    core_offset: float = 0.0

    kind = "coulomb"

    def __post_init__(self):
        if not (self.charge > 0):
            raise InvalidArgumentError(f"charge must be > 0, got {self.charge}")
        if not (self.mass > 0):
            raise InvalidArgumentError(f"mass must be > 0, got {self.mass}")
        if self.core_offset < 0:
            raise InvalidArgumentError(
                f"core_offset must be >= 0, got {self.core_offset}")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.core_offset == 0.0 and np.any(x == 0.0):
            raise SingularPotentialError(
                "bare Coulomb potential evaluated at x = 0")
        return -self.charge**2 / (np.abs(x) + self.core_offset)


@dataclass(frozen=True)
class TabulatedPotential:
    """Two-column (x, V) table interpolated linearly; extension hook only."""

    x_table: np.ndarray
    v_table: np.ndarray
    mass: float

    kind = "tabulated"

    def __post_init__(self):
        x = np.asarray(self.x_table, dtype=float)
        v = np.asarray(self.v_table, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise InvalidArgumentError(
                "x_table and v_table must be matching 1-D arrays of length >= 2")
        if np.any(np.diff(x) <= 0):
            raise InvalidArgumentError("x_table must be strictly increasing")
        if not (self.mass > 0):
            raise InvalidArgumentError(f"mass must be > 0, got {self.mass}")
        object.__setattr__(self, "x_table", x)
        object.__setattr__(self, "v_table", v)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x_table[0]) or np.any(x > self.x_table[-1]):
            raise InvalidArgumentError(
                "tabulated potential queried outside its x range "
                f"[{self.x_table[0]}, {self.x_table[-1]}]")
        return np.interp(x, self.x_table, self.v_table)


PotentialModel = Harmonic | Morse | Coulomb | TabulatedPotential


def eval_potential(model: PotentialModel, x: float) -> float:
    """Potential energy at a single coordinate."""
    return float(model.value(x))


def classical_energy(model: PotentialModel, point: PhasePoint) -> float:
    """Classical Hamiltonian p^2/(2m) + V(x) at a phase-space point."""
    return float(point.p**2 / (2.0 * model.mass) + model.value(point.x))


def analytic_levels(model: PotentialModel, hbar: float, count: int) -> np.ndarray:
    """First ``count`` exact bound-state energies, ascending.

    Harmonic: hbar*omega*(n + 1/2), n = 0, 1, ...
    Morse: hbar*w0*(n + 1/2) - [hbar*w0*(n + 1/2)]^2 / (4*depth) with
        w0 = steepness*sqrt(2*depth/mass); only the bound ladder exists.
    Coulomb: the Bohr series -mass*charge^4 / (2*hbar^2*n^2), n = 1, 2, ...
        (the distinct values; the 1-D |x| potential pairs parities near each).
    """
    if count < 1:
        raise InvalidArgumentError(f"count must be >= 1, got {count}")
    if not (hbar > 0):
        raise InvalidArgumentError(f"hbar must be > 0, got {hbar}")
    if isinstance(model, Harmonic):
        n = np.arange(count)
        return hbar * model.omega * (n + 0.5)
    if isinstance(model, Morse):
        n_bound = model.bound_state_count(hbar)
        if count > n_bound:
            raise InvalidArgumentError(
                f"Morse well holds only {n_bound} bound states, "
                f"requested {count}")
        n = np.arange(count)
        w0 = model.well_frequency(hbar)
        e1 = hbar * w0 * (n + 0.5)
        return e1 - e1**2 / (4.0 * model.depth)
    if isinstance(model, Coulomb):
        n = np.arange(1, count + 1, dtype=float)
        return -model.mass * model.charge**4 / (2.0 * hbar**2 * n**2)
    raise NotImplementedError(
        f"no analytic spectrum for potential kind '{model.kind}'")


def _nth_level(model, hbar, n) -> float:
    """Level n through the same float expressions as :func:`analytic_levels`."""
    if isinstance(model, Harmonic):
        return hbar * model.omega * (n + 0.5)
    # Coulomb; n is zero-based here, the Bohr index is n + 1
    return -model.mass * model.charge**4 / (2.0 * hbar**2 * float(n + 1)**2)


def count_states_below(model: PotentialModel, hbar: float, e_cut: float) -> int:
    """Number of analytic levels strictly below e_cut.

    Resolved by binary search on the (monotone) level formula, so the
    boundary behavior agrees exactly with :func:`analytic_levels`.
    """
    if not math.isfinite(e_cut):
        raise InvalidArgumentError("e_cut must be finite")
    if isinstance(model, Morse):
        levels = analytic_levels(model, hbar, model.bound_state_count(hbar))
        return int(np.sum(levels < e_cut))
    if isinstance(model, Coulomb) and e_cut >= 0:
        raise InvalidArgumentError(
            "Coulomb level count diverges for e_cut >= 0; pass e_cut < 0")
    if not isinstance(model, (Harmonic, Coulomb)):
        raise NotImplementedError(
            f"no analytic spectrum for potential kind '{model.kind}'")
    if _nth_level(model, hbar, 0) >= e_cut:
        return 0
    lo = 0                             # E(lo) < e_cut
    hi = 1
    while _nth_level(model, hbar, hi) < e_cut:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _nth_level(model, hbar, mid) < e_cut:
            lo = mid
        else:
            hi = mid
    return lo + 1
