"""Sampled phase-space Gaussian basis, its bi-orthogonal dual, and pruning.

Everything is expressed through grid samples.  G holds the lattice Gaussians
column-wise at the grid points, S = G^dag G is their overlap under the plain
grid-sum inner product, and B = G S^-1 samples the bi-orthogonal partner
basis (G^dag B = I).  Hamiltonians in either basis are congruences of the
grid Hamiltonian, so with an invertible G all three spectra coincide; the
payoff of the dual basis is that rows/columns can be pruned to the
classically relevant cells.

The missing sqrt(L/N) normalization of the plain grid sum rescales H and the
metric identically and cancels in the generalized eigenproblem; scaling G by
any nonzero constant leaves every generalized eigenvalue unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .eigensolve import SpectrumResult, generalized_hermitian_eig
from .errors import (EmptyBasisError, IllConditionedOverlapError,
                     InvalidArgumentError)
from .fgh import GridHamiltonian, fgh_hamiltonian, solve_fgh
from .lattice import GridSpec, VnLatticeSpec, cell_centers
from .potentials import Harmonic, PotentialModel

METHOD_TAGS = ("fgh", "pvn", "bvn", "vn-analytic")

DEFAULT_COND_THRESHOLD = 1e12

# exact condition number is computed below this size; iterative estimate above
_EXACT_COND_LIMIT = 1024


def _herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def gaussian_samples(lattice: VnLatticeSpec) -> np.ndarray:
    """Matrix G of lattice Gaussians sampled on the grid.

    G[n, m] = g_m(x_n) with
    g_m(x) = (2*alpha/pi)^(1/4) * exp(-alpha*(x-x_c)^2 - i*p_c*(x-x_c)/hbar)
    and (x_c, p_c) the center of cell m.  Rows follow grid points, columns
    follow cells in flattening order.
    """
    grid = lattice.grid
    xc, pc = cell_centers(lattice)
    d = grid.points()[:, np.newaxis] - xc[np.newaxis, :]
    alpha = lattice.alpha
    norm = (2.0 * alpha / np.pi)**0.25
    return norm * np.exp(-alpha * d**2 - 1j * pc[np.newaxis, :] * d / grid.hbar)


def overlap_matrix(G: np.ndarray) -> np.ndarray:
    """S = G^dag G, Hermitized against rounding."""
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InvalidArgumentError(f"G must be square, got shape {G.shape}")
    try:
        # rank-k Hermitian update does half the work of a general product
        s = sla.blas.zherk(1.0, np.asfortranarray(G), trans=2, lower=0)
        s = s + np.triu(s, 1).conj().T
    except (AttributeError, TypeError, ValueError):
        s = G.conj().T @ G
    return _herm(s)


def overlap_condition(S: np.ndarray, factor=None) -> float:
    """Condition estimate of the overlap matrix.

    Exact eigenvalue ratio for small matrices; for large ones a fixed-seed
    power iteration (with inverse iteration through the Cholesky factor)
    that is accurate enough for gating purposes.
    """
    n = S.shape[0]
    if n <= _EXACT_COND_LIMIT or factor is None:
        w = sla.eigvalsh(S)
        return float(w[-1] / w[0]) if w[0] > 0 else np.inf
    rng = np.random.default_rng(7)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(60):
        v = S @ v
        v /= np.linalg.norm(v)
    lam_max = float(np.real(v.conj() @ (S @ v)))
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w /= np.linalg.norm(w)
    for _ in range(60):
        w = sla.cho_solve(factor, w)
        w /= np.linalg.norm(w)
    lam_min = float(np.real(w.conj() @ (S @ w)))
    if lam_min <= 0:
        return np.inf
    return lam_max / lam_min


def _overlap_factor(S: np.ndarray, cond_threshold: float, condition: float | None):
    """Cholesky factor of S plus its (possibly estimated) condition number."""
    try:
        factor = sla.cho_factor(S, lower=True)
    except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
        raise IllConditionedOverlapError(
            f"overlap matrix is not numerically positive definite: {exc}",
            condition=np.inf) from exc
    if condition is None:
        condition = overlap_condition(S, factor)
    if condition > cond_threshold:
        raise IllConditionedOverlapError(
            f"overlap condition estimate {condition:.3e} exceeds threshold "
            f"{cond_threshold:.3e}", condition=condition)
    return factor, condition


def dual_samples(G: np.ndarray, S: np.ndarray,
                 cond_threshold: float = DEFAULT_COND_THRESHOLD,
                 condition: float | None = None) -> np.ndarray:
    """Bi-orthogonal dual samples B = G S^-1, via solves against S.

    Solves the Hermitian positive-definite system S B^dag = G^dag rather
    than forming S^-1; the result satisfies G^dag B = I and B G^dag = I for
    invertible G.
    """
    if G.shape != S.shape:
        raise InvalidArgumentError(
            f"G and S dimensions differ: {G.shape} vs {S.shape}")
    factor, _ = _overlap_factor(S, cond_threshold, condition)
    return sla.cho_solve(factor, G.conj().T).conj().T


def pvn_hamiltonian(G: np.ndarray, H_fgh: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(G^dag H G, G^dag G): the Hamiltonian and metric in the sampled basis."""
    G = np.asarray(G)
    H_fgh = np.asarray(H_fgh)
    if G.shape[0] != H_fgh.shape[0] or H_fgh.shape[0] != H_fgh.shape[1]:
        raise InvalidArgumentError(
            f"dimension mismatch: G {G.shape}, H {H_fgh.shape}")
    Hp = _herm(G.conj().T @ (H_fgh @ G))
    return Hp, overlap_matrix(G)


def bvn_hamiltonian(B: np.ndarray, H_fgh: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(B^dag H B, B^dag B): Hamiltonian and metric in the dual basis.

    The metric B^dag B reproduces S^-1, which is what makes principal
    submatrices of the pair a legitimate pruned problem.
    """
    B = np.asarray(B)
    H_fgh = np.asarray(H_fgh)
    if B.shape[0] != H_fgh.shape[0] or H_fgh.shape[0] != H_fgh.shape[1]:
        raise InvalidArgumentError(
            f"dimension mismatch: B {B.shape}, H {H_fgh.shape}")
    Hb = _herm(B.conj().T @ (H_fgh @ B))
    sb = _herm(B.conj().T @ B)
    return Hb, sb


@dataclass(frozen=True, eq=False)
class BasisMatrices:
    """Sampled Gaussians G, overlap S = G^dag G, and duals B = G S^-1."""

    lattice: VnLatticeSpec
    G: np.ndarray
    S: np.ndarray
    B: np.ndarray


def build_basis(lattice: VnLatticeSpec,
                cond_threshold: float = DEFAULT_COND_THRESHOLD) -> BasisMatrices:
    G = gaussian_samples(lattice)
    S = overlap_matrix(G)
    B = dual_samples(G, S, cond_threshold)
    return BasisMatrices(lattice=lattice, G=G, S=S, B=B)


def cell_energies(lattice: VnLatticeSpec, model: PotentialModel,
                  mass: float) -> np.ndarray:
    """Classical energy p^2/(2*mass) + V(x) at every cell center."""
    xc, pc = cell_centers(lattice)
    return pc**2 / (2.0 * mass) + np.asarray(model.value(xc), dtype=float)


@dataclass(frozen=True, eq=False)
class PruneMask:
    """Sorted kept-cell indices from a classical-energy cut."""

    kept: np.ndarray
    e_cut: float
    lattice: VnLatticeSpec

    @property
    def size(self) -> int:
        return len(self.kept)


def prune_mask(lattice: VnLatticeSpec, model: PotentialModel, mass: float,
               e_cut: float, margin: float = 0.0) -> PruneMask:
    """Keep every cell whose center energy is at most e_cut + margin.

    Pure center rule: a cell survives iff the classical Hamiltonian at its
    center is below the cut.  ``margin`` (default 0) widens the cut for
    experiments without changing the stored e_cut semantics.
    """
    if not np.isfinite(e_cut):
        raise InvalidArgumentError("e_cut must be finite")
    energies = cell_energies(lattice, model, mass)
    kept = np.flatnonzero(energies <= e_cut + margin)
    if kept.size == 0:
        raise EmptyBasisError(
            f"e_cut = {e_cut!r} keeps no cells (minimum center energy is "
            f"{energies.min()!r})")
    return PruneMask(kept=kept, e_cut=float(e_cut), lattice=lattice)


def restrict(H: np.ndarray, s: np.ndarray, mask: PruneMask
             ) -> tuple[np.ndarray, np.ndarray]:
    """Principal submatrices of (H, s) on the kept cells."""
    kept = np.asarray(mask.kept)
    n = H.shape[0]
    if kept.size and (kept.min() < 0 or kept.max() >= n):
        raise InvalidArgumentError(
            f"mask indices out of range for dimension {n}")
    ix = np.ix_(kept, kept)
    return H[ix], s[ix]


def pvn_coefficients(G: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Diagnostic overlaps <g~_j|psi> = sum_n g_j*(x_n) psi(x_n), one column per state."""
    return G.conj().T @ np.asarray(states)


def _restricted_bvn(G, S, H, kept, cond_threshold):
    """Pruned dual-basis pencil without forming the full N x N dual products."""
    factor, condition = _overlap_factor(S, cond_threshold, None)
    rhs = np.zeros((S.shape[0], len(kept)), dtype=complex)
    rhs[kept, np.arange(len(kept))] = 1.0
    Bk = G @ sla.cho_solve(factor, rhs)
    Hb = _herm(Bk.conj().T @ (H @ Bk))
    sb = _herm(Bk.conj().T @ Bk)
    return Hb, sb, condition


def solve_method(grid: GridSpec, lattice: VnLatticeSpec | None,
                 model: PotentialModel, mass: float, method_tag: str,
                 mask: PruneMask | None = None,
                 cond_threshold: float = DEFAULT_COND_THRESHOLD) -> SpectrumResult:
    """Dispatch one bound-state solve through the requested pipeline.

    ``fgh`` diagonalizes the grid Hamiltonian directly; ``pvn`` and ``bvn``
    solve the congruent generalized problems in the sampled Gaussian and
    dual bases; ``vn-analytic`` is the non-periodic closed-form Gaussian
    comparison method (harmonic oscillator only).  A prune mask is only
    meaningful for ``bvn``.
    """
    if method_tag not in METHOD_TAGS:
        raise InvalidArgumentError(
            f"method_tag must be one of {METHOD_TAGS}, got {method_tag!r}")
    if mask is not None and method_tag != "bvn":
        raise InvalidArgumentError(
            f"a prune mask is only valid with method 'bvn', got {method_tag!r}")
    if method_tag != "fgh" and lattice is None:
        raise InvalidArgumentError(f"method {method_tag!r} requires a lattice")

    if method_tag == "fgh":
        H = fgh_hamiltonian(grid, model, mass)
        return solve_fgh(H, grid.n_points)

    if method_tag == "vn-analytic":
        return analytic_vn_solve(lattice, model, mass)

    H = fgh_hamiltonian(grid, model, mass).matrix
    G = gaussian_samples(lattice)
    S = overlap_matrix(G)

    if method_tag == "pvn":
        Hp, _ = pvn_hamiltonian(G, H)
        res = generalized_hermitian_eig(Hp, S)
        return SpectrumResult(
            eigenvalues=res.eigenvalues, basis_size=lattice.size,
            residual_max=res.residual_max, overlap_condition=res.s_condition,
            method_tag="pvn", eigenvectors=res.eigenvectors)

    # bvn
    if mask is not None and mask.size < lattice.size:
        kept = np.asarray(mask.kept)
        Hb, sb, _ = _restricted_bvn(G, S, H, kept, cond_threshold)
        basis_size = len(kept)
    else:
        B = dual_samples(G, S, cond_threshold)
        Hb, sb = bvn_hamiltonian(B, H)
        basis_size = lattice.size
    res = generalized_hermitian_eig(Hb, sb)
    return SpectrumResult(
        eigenvalues=res.eigenvalues, basis_size=basis_size,
        residual_max=res.residual_max, overlap_condition=res.s_condition,
        method_tag="bvn", eigenvectors=res.eigenvectors)


def analytic_vn_matrices(lattice: VnLatticeSpec, model: PotentialModel,
                         mass: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form H and S of the conventional (non-periodic) Gaussian basis.

    Gaussian integrals over the whole real line, available for the harmonic
    oscillator.  With centers (x_i, p_i), width alpha and q = (p_i - p_j)/hbar:

        S_ij = exp(-alpha*(x_i-x_j)^2/2 - q^2/(8*alpha)
                   + i*(q*xbar - (p_i x_i - p_j x_j)/hbar)),

    and the kinetic/potential elements follow from the first two moments of
    the shared complex Gaussian weight.
    """
    if not isinstance(model, Harmonic):
        raise NotImplementedError(
            "closed-form Gaussian integrals are only implemented for the "
            f"harmonic oscillator, got potential kind '{model.kind}'")
    hbar = lattice.grid.hbar
    alpha = lattice.alpha
    xc, pc = cell_centers(lattice)
    Xi, Xj = np.meshgrid(xc, xc, indexing="ij")
    Pi, Pj = np.meshgrid(pc, pc, indexing="ij")
    q = (Pi - Pj) / hbar
    xbar = 0.5 * (Xi + Xj)
    S = np.exp(-0.5 * alpha * (Xi - Xj)**2 - q**2 / (8.0 * alpha)
               + 1j * (q * xbar - (Pi * Xi - Pj * Xj) / hbar))
    mu1 = 1j * q / (4.0 * alpha)
    mu2 = 1.0 / (4.0 * alpha) - q**2 / (16.0 * alpha**2)
    dj = xbar - Xj
    m0 = S
    m1 = S * (mu1 + dj)
    m2 = S * (mu2 + 2.0 * dj * mu1 + dj**2)
    T = -(hbar**2 / (2.0 * mass)) * (
        4.0 * alpha**2 * m2 + (4j * alpha / hbar) * Pj * m1
        - (Pj**2 / hbar**2 + 2.0 * alpha) * m0)
    V = 0.5 * model.mass * model.omega**2 * S * (mu2 + 2.0 * xbar * mu1 + xbar**2)
    return _herm(T + V), _herm(S)


def analytic_vn_solve(lattice: VnLatticeSpec, model: PotentialModel,
                      mass: float) -> SpectrumResult:
    """Generalized solve of the conventional Gaussian method (comparison oracle)."""
    H, S = analytic_vn_matrices(lattice, model, mass)
    res = generalized_hermitian_eig(H, S)
    return SpectrumResult(
        eigenvalues=res.eigenvalues, basis_size=lattice.size,
        residual_max=res.residual_max, overlap_condition=res.s_condition,
        method_tag="vn-analytic", eigenvectors=res.eigenvectors)
