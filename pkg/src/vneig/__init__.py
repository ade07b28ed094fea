"""Spectral bound-state solvers on periodic grids with phase-space Gaussian bases.

Public surface: grid/lattice geometry, potential models with analytic
oracles, the Fourier grid Hamiltonian, the sampled Gaussian (pvn) and
bi-orthogonal dual (bvn) bases with classical pruning, a generalized
Hermitian eigensolver, and the experiment runner behind the ``vneig`` CLI.
"""

from .basis import (BasisMatrices, PruneMask, analytic_vn_matrices,
                    analytic_vn_solve, build_basis, bvn_hamiltonian,
                    cell_energies, dual_samples, gaussian_samples,
                    overlap_condition, overlap_matrix, prune_mask,
                    pvn_coefficients, pvn_hamiltonian, restrict, solve_method)
from .config import (ExperimentConfig, SweepConfig, list_presets, load_config,
                     load_sweep_config, preset_path)
from .eigensolve import (GeneralizedEigResult, SpectrumResult,
                         condition_estimate, generalized_hermitian_eig,
                         spectral_regularized_eig)
from .errors import (AccuracyGateError, ConfigError, EmptyBasisError,
                     EmptySubspaceError, IllConditionedOverlapError,
                     InvalidArgumentError, LatticeMismatchError,
                     NumericalFailureError, SingularPotentialError, VnEigError)
from .experiments import (EcutSearch, EfficiencyPoint, emit_phase_mask,
                          find_ecut, run_experiment, search_ecut, sweep_hbar)
from .fgh import GridHamiltonian, fgh_hamiltonian, kinetic_matrix, solve_fgh
from .lattice import (GridSpec, PhasePoint, VnLatticeSpec, cell_center,
                      cell_centers, default_alpha, make_grid, make_lattice)
from .potentials import (Coulomb, Harmonic, Morse, TabulatedPotential,
                         analytic_levels, classical_energy, count_states_below,
                         eval_potential)

__version__ = "0.1.0"
