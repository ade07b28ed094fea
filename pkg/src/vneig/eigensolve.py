"""Generalized Hermitian-definite eigensolver H U = s U E with diagnostics.

The primary path reduces via a triangular (Cholesky) factorization of the
metric s; a spectral-truncation path handles near-singular metrics and
serves as the automatic fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (EmptySubspaceError, InvalidArgumentError,
                     NumericalFailureError)

DEFAULT_SPECTRAL_THRESHOLD = 1e-12


@dataclass
class GeneralizedEigResult:
    """Eigenpairs of a Hermitian pencil plus solve diagnostics.

    ``eigenvalues`` ascend; ``eigenvectors`` holds one column per pair,
    normalized to U^dag s U = I on the retained subspace.  ``residual_max``
    is max_i ||H u_i - lambda_i s u_i|| / ||u_i||.  ``rank_deficient`` marks
    spectral truncation of the metric; then fewer pairs than the input
    dimension are returned.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_max: float
    s_condition: float
    rank_deficient: bool
    used_fallback: bool = False


@dataclass
class SpectrumResult:
    """Ascending eigenvalues of one solver run plus bookkeeping.

    ``basis_size`` counts the functions actually used (grid points, lattice
    cells, or kept cells after pruning); ``overlap_condition`` is the metric
    condition number seen by the eigensolver (1 for an orthogonal basis).
    """

    eigenvalues: np.ndarray
    basis_size: int
    residual_max: float
    overlap_condition: float
    method_tag: str
    eigenvectors: np.ndarray | None = field(default=None, repr=False)


def _check_square(name, a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {a.shape}")
    return a


def _check_hermitian(name, a, tol=1e-8):
    drift = np.abs(a - a.conj().T).max()
    scale = 1.0 + np.abs(a).max()
    if drift > tol * scale:
        raise InvalidArgumentError(
            f"{name} is not Hermitian (max asymmetry {drift:.3e})")


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = np.array(vectors)
    if v.size == 0:
        return v
    idx = np.abs(v).argmax(axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    mag = np.abs(lead)
    safe = np.where(mag > 0, mag, 1.0)
    phase = np.where(mag > 0, lead / safe, 1.0)
    return v / phase


def condition_estimate(s: np.ndarray) -> float:
    """Ratio of the extreme eigenvalues of a Hermitian matrix."""
    s = _check_square("s", s)
    w = sla.eigvalsh(s)
    if w[-1] <= 0:
        return np.inf
    if w[0] <= 0:
        return np.inf
    return float(w[-1] / w[0])


def _residual_max(H, s, eigenvalues, vectors):
    R = H @ vectors - (s @ vectors) * eigenvalues[np.newaxis, :]
    norms = np.linalg.norm(vectors, axis=0)
    return float(np.max(np.linalg.norm(R, axis=0) / norms))


def generalized_hermitian_eig(H: np.ndarray, s: np.ndarray) -> GeneralizedEigResult:
    """Solve H U = s U E for a Hermitian H and Hermitian positive-definite s.

    Factorizes s triangularly and solves the transformed standard problem;
    if the factorization fails (s not numerically definite), falls back to
    :func:`spectral_regularized_eig` and flags it in the result.
    """
    H = _check_square("H", H)
    s = _check_square("s", s)
    if H.shape != s.shape:
        raise InvalidArgumentError(
            f"H and s dimensions differ: {H.shape} vs {s.shape}")
    _check_hermitian("H", H)
    _check_hermitian("s", s)

    try:
        eigenvalues, vectors = sla.eigh(H, s)
    except (sla.LinAlgError, np.linalg.LinAlgError):
        result = spectral_regularized_eig(H, s, DEFAULT_SPECTRAL_THRESHOLD)
        result.used_fallback = True
        return result

    vectors = fix_phases(vectors)
    w_s = sla.eigvalsh(s)
    s_condition = float(w_s[-1] / w_s[0]) if w_s[0] > 0 else np.inf
    return GeneralizedEigResult(
        eigenvalues=eigenvalues,
        eigenvectors=vectors,
        residual_max=_residual_max(H, s, eigenvalues, vectors),
        s_condition=s_condition,
        rank_deficient=False,
    )


def spectral_regularized_eig(H: np.ndarray, s: np.ndarray,
                             threshold: float = DEFAULT_SPECTRAL_THRESHOLD
                             ) -> GeneralizedEigResult:
    """Robust path: project out metric modes below threshold*lambda_max.

    Eigendecomposes s, keeps modes with eigenvalue >= threshold*lambda_max,
    and solves the standard problem in the retained, whitened subspace.
    """
    H = _check_square("H", H)
    s = _check_square("s", s)
    if H.shape != s.shape:
        raise InvalidArgumentError(
            f"H and s dimensions differ: {H.shape} vs {s.shape}")
    if not 0 < threshold < 1:
        raise InvalidArgumentError(f"threshold must be in (0, 1), got {threshold}")
    _check_hermitian("H", H)
    _check_hermitian("s", s)

    w, V = sla.eigh(s)
    lam_max = w[-1]
    if lam_max <= 0:
        raise EmptySubspaceError(
            f"metric has no positive modes to retain (largest eigenvalue "
            f"{lam_max!r})")
    keep = w >= threshold * lam_max
    n_keep = int(np.count_nonzero(keep))

    W = V[:, keep] / np.sqrt(w[keep])[np.newaxis, :]
    Hp = W.conj().T @ H @ W
    Hp = 0.5 * (Hp + Hp.conj().T)
    try:
        eigenvalues, Y = sla.eigh(Hp)
    except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NumericalFailureError(
            f"projected standard eigensolve failed: {exc}") from exc
    vectors = fix_phases(W @ Y)
    rank_deficient = n_keep < len(w)
    s_condition = float(lam_max / w[keep][0])
    return GeneralizedEigResult(
        eigenvalues=eigenvalues,
        eigenvectors=vectors,
        residual_max=_residual_max(H, s, eigenvalues, vectors),
        s_condition=s_condition,
        rank_deficient=rank_deficient,
    )
