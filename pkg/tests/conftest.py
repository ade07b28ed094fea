import numpy as np
import pytest

from vneig import (build_basis, fgh_hamiltonian, load_config, preset_path,
                   solve_fgh)


@pytest.fixture(scope="session")
def harmonic_cfg():
    return load_config(preset_path("harmonic-pvn"))


@pytest.fixture(scope="session")
def morse_cfg():
    return load_config(preset_path("morse-bvn"))


@pytest.fixture(scope="session")
def coulomb_cfg():
    return load_config(preset_path("coulomb-bvn"))


@pytest.fixture(scope="session")
def harmonic_setup(harmonic_cfg):
    """Grid Hamiltonian, basis matrices, and FGH solve of the harmonic preset."""
    cfg = harmonic_cfg
    H = fgh_hamiltonian(cfg.grid, cfg.model, cfg.mass)
    bs = build_basis(cfg.lattice)
    return {"cfg": cfg, "H": H, "basis": bs, "fgh": solve_fgh(H, cfg.grid.n_points)}


@pytest.fixture(scope="session")
def morse_setup(morse_cfg):
    cfg = morse_cfg
    H = fgh_hamiltonian(cfg.grid, cfg.model, cfg.mass)
    bs = build_basis(cfg.lattice)
    return {"cfg": cfg, "H": H, "basis": bs, "fgh": solve_fgh(H, cfg.grid.n_points)}


@pytest.fixture(scope="session")
def coulomb_pruned_pencil(coulomb_cfg):
    """Restricted 189-cell dual-basis pencil of the Coulomb preset (heavy)."""
    import scipy.linalg as sla

    from vneig import gaussian_samples, overlap_matrix, prune_mask
    from vneig.experiments import search_ecut

    cfg = coulomb_cfg
    found = search_ecut(cfg.lattice, cfg.model, cfg.mass, cfg.target_count)
    mask = prune_mask(cfg.lattice, cfg.model, cfg.mass, found.e_cut)
    H = fgh_hamiltonian(cfg.grid, cfg.model, cfg.mass).matrix
    G = gaussian_samples(cfg.lattice)
    S = overlap_matrix(G)
    factor = sla.cho_factor(S, lower=True)
    rhs = np.zeros((S.shape[0], mask.size), dtype=complex)
    rhs[mask.kept, np.arange(mask.size)] = 1.0
    Bk = G @ sla.cho_solve(factor, rhs)
    Hb = Bk.conj().T @ (H @ Bk)
    Hb = 0.5 * (Hb + Hb.conj().T)
    sb = Bk.conj().T @ Bk
    sb = 0.5 * (sb + sb.conj().T)
    return {"cfg": cfg, "mask": mask, "Hb": Hb, "sb": sb}


def random_trig_potential(rng, grid):
    """Smooth periodic potential from a few random Fourier modes."""
    x = grid.points()
    v = np.zeros_like(x)
    for k in range(1, 4):
        amp = rng.uniform(0.2, 1.0)
        phase = rng.uniform(0, 2 * np.pi)
        v += amp * np.cos(2 * np.pi * k * (x - grid.x_min) / grid.length + phase)
    return v - v.min()
