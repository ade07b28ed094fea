"""Experiment runner: single solves, e_cut search, hbar-efficiency sweep.

All outputs are plain text: a ``key = value`` summary per run and
comma-separated per-level tables.  Floats are written with ``repr`` so a
re-read reproduces them bit for bit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from . import basis as vb
from .config import ExperimentConfig, SweepConfig
from .eigensolve import SpectrumResult
from .errors import AccuracyGateError, ConfigError, InvalidArgumentError
from .fgh import fgh_hamiltonian, solve_fgh
from .lattice import GridSpec, VnLatticeSpec, cell_centers, make_grid
from .potentials import Coulomb, PotentialModel, analytic_levels, count_states_below


# ---------------------------------------------------------------------------
# e_cut search

@dataclass
class EcutSearch:
    e_cut: float
    count: int
    exact: bool
    neighbor_counts: tuple[int, ...]


def search_ecut(lattice: VnLatticeSpec, model: PotentialModel, mass: float,
                target_count: int) -> EcutSearch:
    """Smallest center-rule cut whose mask holds target_count cells.

    Bisects e_cut between the extreme center energies; kept-cell count is a
    step function of e_cut, so when ties make the target unreachable the
    nearest achievable count is returned with both neighbors reported.
    """
    n = lattice.size
    if not 1 <= target_count <= n:
        raise InvalidArgumentError(
            f"target_count must be in [1, {n}], got {target_count}")
    energies = np.sort(vb.cell_energies(lattice, model, mass))

    def count_at(e):
        return int(np.searchsorted(energies, e, side="right"))

    lo, hi = energies[0] - 1.0, energies[-1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if count_at(mid) >= target_count:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    # snap to the exact step boundary the bisection bracketed
    c_hi = count_at(hi)
    boundary = energies[c_hi - 1]
    c_lo = int(np.searchsorted(energies, boundary, side="left"))
    if c_hi == target_count:
        return EcutSearch(float(boundary), c_hi, True, (c_hi,))
    # tie: target sits strictly inside a jump from c_lo to c_hi
    if c_lo >= 1 and (target_count - c_lo) <= (c_hi - target_count):
        pick = c_lo
    else:
        pick = c_hi
    return EcutSearch(float(energies[pick - 1]), pick, False, (c_lo, c_hi))


def find_ecut(config: ExperimentConfig, target_count: int) -> float:
    """Config-level wrapper around :func:`search_ecut`."""
    if config.lattice is None:
        raise ConfigError("find_ecut requires a [lattice] section")
    return search_ecut(config.lattice, config.model, config.mass,
                       target_count).e_cut


# ---------------------------------------------------------------------------
# single experiment

@dataclass
class LevelRow:
    level: int
    energy: float
    oracle: float | None
    abs_error: float | None
    rel_error: float | None


@dataclass
class ExperimentOutcome:
    result: SpectrumResult
    rows: list[LevelRow]
    summary: dict
    summary_path: Path
    levels_path: Path


def _oracle_pairing(model: PotentialModel) -> str:
    # Coulomb parities pair up near each Bohr value, so match by proximity
    return "nearest" if isinstance(model, Coulomb) else "index"


def _pair_levels(eigenvalues, model, hbar, n_levels, oracle_on):
    rows = []
    pairing = _oracle_pairing(model)
    if not oracle_on:
        for i in range(n_levels):
            rows.append(LevelRow(i, float(eigenvalues[i]), None, None, None))
        return rows, pairing
    targets = np.asarray(analytic_levels(model, hbar, n_levels))
    if pairing == "index":
        for i in range(n_levels):
            e = float(eigenvalues[i])
            t = float(targets[i])
            rows.append(LevelRow(i, e, t, abs(e - t), abs(e - t) / abs(t)))
    else:
        for i in range(n_levels):
            t = float(targets[i])
            e = float(eigenvalues[np.abs(eigenvalues - t).argmin()])
            rows.append(LevelRow(i, e, t, abs(e - t), abs(e - t) / abs(t)))
    return rows, pairing


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_summary(path: Path, entries: dict) -> None:
    lines = [f"{key} = {_fmt(value)}" for key, value in entries.items()]
    path.write_text("\n".join(lines) + "\n")


def read_summary(path) -> dict:
    """Parse a summary file back into a {key: str} dict."""
    out = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


def write_levels(path: Path, rows: list[LevelRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "energy", "oracle", "abs_error", "rel_error"])
        for r in rows:
            writer.writerow([
                r.level, _fmt(r.energy),
                "" if r.oracle is None else _fmt(r.oracle),
                "" if r.abs_error is None else _fmt(r.abs_error),
                "" if r.rel_error is None else _fmt(r.rel_error)])


def read_levels(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _resolve_mask(config: ExperimentConfig):
    if config.method != "bvn":
        return None, None
    if config.e_cut is not None:
        e_cut = config.e_cut
        search = None
    else:
        search = search_ecut(config.lattice, config.model, config.mass,
                             config.target_count)
        e_cut = search.e_cut
    mask = vb.prune_mask(config.lattice, config.model, config.mass, e_cut,
                         margin=config.margin)
    return mask, search


def _write_dropped_diag(path, config, mask, n_levels):
    """Per dropped cell: largest dual-side overlap with the converged states."""
    H = fgh_hamiltonian(config.grid, config.model, config.mass)
    states = solve_fgh(H, n_levels).eigenvectors
    G = vb.gaussian_samples(config.lattice)
    coeff = vb.pvn_coefficients(G, states)
    coeff = coeff / np.abs(coeff).max(axis=0, keepdims=True)
    importance = np.abs(coeff).max(axis=1)
    xc, pc = cell_centers(config.lattice)
    energies = vb.cell_energies(config.lattice, config.model, config.mass)
    dropped = sorted(set(range(config.lattice.size)) - set(mask.kept.tolist()))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell_index", "x_center", "p_center", "center_energy",
                         "max_state_overlap"])
        for j in dropped:
            writer.writerow([j, _fmt(xc[j]), _fmt(pc[j]), _fmt(energies[j]),
                             _fmt(importance[j])])


def run_experiment(config: ExperimentConfig, out_dir,
                   tolerance_digits: int | None = None,
                   quiet: bool = False) -> ExperimentOutcome:
    """Solve one configured problem and write its report files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    mask, search = _resolve_mask(config)
    result = vb.solve_method(config.grid, config.lattice, config.model,
                             config.mass, config.method, mask=mask)
    if config.n_levels > len(result.eigenvalues):
        raise ConfigError(
            f"report.n_levels = {config.n_levels} exceeds the "
            f"{len(result.eigenvalues)} available eigenvalues")

    rows, pairing = _pair_levels(result.eigenvalues, config.model,
                                 config.grid.hbar, config.n_levels,
                                 config.oracle)

    summary = {
        "method": config.method,
        "potential": config.model.kind,
        "hbar": config.grid.hbar,
        "grid_points": config.grid.n_points,
        "basis_size": result.basis_size,
        "n_levels": config.n_levels,
        "oracle": "on" if config.oracle else "off",
        "oracle_pairing": pairing if config.oracle else "none",
        "residual_max": result.residual_max,
        "overlap_condition": result.overlap_condition,
    }
    if mask is not None:
        summary["e_cut"] = mask.e_cut
        summary["kept_count"] = mask.size
        if search is not None:
            summary["e_cut_search_exact"] = search.exact
            summary["e_cut_neighbor_counts"] = ",".join(
                str(c) for c in search.neighbor_counts)
    if config.oracle:
        summary["max_abs_error"] = max(r.abs_error for r in rows)
        summary["max_rel_error"] = max(r.rel_error for r in rows)
    for i in range(config.n_levels):
        summary[f"eigenvalue_{i:03d}"] = rows[i].energy

    summary_path = out_dir / config.summary_file
    levels_path = out_dir / config.levels_file
    write_summary(summary_path, summary)
    write_levels(levels_path, rows)
    if config.diag_dropped and mask is not None:
        _write_dropped_diag(out_dir / (Path(config.levels_file).stem
                                       + "-dropped.csv"),
                            config, mask, config.n_levels)

    if not quiet:
        print(f"[{config.method}] basis {result.basis_size}, "
              f"{config.n_levels} levels -> {summary_path.name}")
        if config.oracle:
            print(f"  max abs error {summary['max_abs_error']:.3e}, "
                  f"max rel error {summary['max_rel_error']:.3e}")

    if tolerance_digits is not None:
        if not config.oracle:
            raise ConfigError("a tolerance gate requires report.oracle = on")
        tol = 10.0**(-tolerance_digits)
        worst = max((r.rel_error if pairing == "nearest" else r.abs_error)
                    for r in rows)
        if worst > tol:
            kind = "relative" if pairing == "nearest" else "absolute"
            raise AccuracyGateError(
                f"worst {kind} level error {worst:.3e} exceeds the "
                f"1e-{tolerance_digits} gate")

    return ExperimentOutcome(result=result, rows=rows, summary=summary,
                             summary_path=summary_path, levels_path=levels_path)


# ---------------------------------------------------------------------------
# phase-space mask emission

def emit_phase_mask(config: ExperimentConfig, out_dir,
                    quiet: bool = False) -> Path:
    """Write one row per cell: index, center, and kept flag of the bvn mask."""
    if config.method != "bvn":
        raise ConfigError("phase-mask output requires method.name = bvn")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mask, _ = _resolve_mask(config)
    kept = np.zeros(config.lattice.size, dtype=int)
    kept[mask.kept] = 1
    xc, pc = cell_centers(config.lattice)
    path = out_dir / config.mask_file
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell_index", "x_center", "p_center", "kept"])
        for j in range(config.lattice.size):
            writer.writerow([j, _fmt(xc[j]), _fmt(pc[j]), kept[j]])
    if not quiet:
        print(f"phase mask: {int(kept.sum())} of {len(kept)} cells kept "
              f"-> {path.name}")
    return path


# ---------------------------------------------------------------------------
# hbar-efficiency sweep

@dataclass
class EfficiencyPoint:
    hbar: float
    basis_size: int
    states_below_cut: int
    eta: float


@dataclass
class SweepOutcome:
    bvn_points: list[EfficiencyPoint]
    fgh_points: list[EfficiencyPoint]
    failures: list[float]
    bvn_path: Path
    fgh_path: Path
    summary_path: Path


def _fgh_gate_error(x_min, length, n, hbar, model, mass, targets):
    grid = make_grid(x_min, length, n, hbar)
    H = fgh_hamiltonian(grid, model, mass)
    ev = sla.eigh(H.matrix, eigvals_only=True)
    return float(np.abs(ev[:len(targets)] - targets).max())


def _fgh_minimal_n(point, model, mass, targets, tol):
    """Smallest even grid size meeting the gate on the point's tight box."""
    hbar = point.hbar
    shell_p = math.sqrt(2.0 * mass * float(targets[-1]))
    n_lo = point.fgh_n_lo or max(8, int(0.9 * point.fgh_length * shell_p
                                        / (math.pi * hbar)) // 2 * 2)
    n_hi = point.fgh_n_hi or int(1.8 * point.fgh_length * shell_p
                                 / (math.pi * hbar)) // 2 * 2
    err = lambda n: _fgh_gate_error(point.fgh_x_min, point.fgh_length, n,
                                    hbar, model, mass, targets)
    if err(n_hi) > tol:
        return None
    lo, hi = n_lo, n_hi
    if err(lo) <= tol:
        return lo
    while hi - lo > 2:
        mid = (lo + hi) // 4 * 2
        if err(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi


def _bvn_minimal_mask(point, model, mass, targets, tol):
    """Smallest center-rule mask meeting the gate, via the e_cut count ladder."""
    lattice = point.lattice
    grid = point.grid
    count = len(targets)
    H = fgh_hamiltonian(grid, model, mass).matrix
    G = vb.gaussian_samples(lattice)
    S = vb.overlap_matrix(G)
    B = vb.dual_samples(G, S)
    Hb, sb = vb.bvn_hamiltonian(B, H)
    energies = vb.cell_energies(lattice, model, mass)
    order = np.argsort(energies)
    sorted_e = energies[order]
    # achievable mask sizes: one per distinct center energy
    ladder = np.unique(np.searchsorted(sorted_e, sorted_e, side="right"))
    ladder = ladder[ladder >= count]
    if ladder.size == 0:
        return None, None

    def err_at(k):
        kept = np.sort(order[:k])
        ix = np.ix_(kept, kept)
        ev = sla.eigh(Hb[ix], sb[ix], eigvals_only=True)
        return float(np.abs(ev[:count] - targets).max())

    # exponential bracket on the ladder index, then binary refinement
    i, step, passing = 0, 1, None
    while i < len(ladder):
        if err_at(int(ladder[i])) <= tol:
            passing = i
            break
        i += step
        step *= 2
    if passing is None:
        if err_at(int(ladder[-1])) > tol:
            return None, None
        passing = len(ladder) - 1
    if passing > 0:
        lo, hi = 0, passing    # ladder[0] was tested first and failed
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if err_at(int(ladder[mid])) <= tol:
                hi = mid
            else:
                lo = mid
        passing = hi
    k = int(ladder[passing])
    return k, float(sorted_e[k - 1])


def sweep_hbar(sweep: SweepConfig, out_dir, tolerance_digits: int | None = None,
               quiet: bool = False) -> SweepOutcome:
    """Basis-efficiency sweep over the configured hbar ladder.

    For each point: the smallest center-rule bvn mask and the smallest even
    FGH grid that reproduce every analytic level below the energy shell to
    the gate tolerance (absolute, 10^-digits).  Gate failures are recorded
    and the sweep continues.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    digits = tolerance_digits if tolerance_digits is not None else sweep.digits
    tol = 10.0**(-digits)

    bvn_points, fgh_points, failures = [], [], []
    echo = {
        "e_shell": sweep.e_shell,
        "gate_digits": digits,
        "potential": sweep.model.kind,
        "mass": sweep.mass,
    }
    for idx, point in enumerate(sweep.points):
        hbar = point.hbar
        count = count_states_below(sweep.model, hbar, sweep.e_shell)
        targets = np.asarray(analytic_levels(sweep.model, hbar, count))
        pre = f"point_{idx:02d}"
        echo[f"{pre}_hbar"] = hbar
        echo[f"{pre}_states_below_shell"] = count
        echo[f"{pre}_grid"] = (f"x_min={point.grid.x_min!r} "
                               f"length={point.grid.length!r} "
                               f"n={point.grid.n_points}")
        echo[f"{pre}_lattice"] = (f"{point.lattice.n_x}x{point.lattice.n_p} "
                                  f"alpha={point.lattice.alpha!r}")
        echo[f"{pre}_fgh_box"] = (f"x_min={point.fgh_x_min!r} "
                                  f"length={point.fgh_length!r}")

        mask_size, e_cut = _bvn_minimal_mask(point, sweep.model, sweep.mass,
                                             targets, tol)
        n_min = _fgh_minimal_n(point, sweep.model, sweep.mass, targets, tol)

        if mask_size is None or n_min is None:
            failures.append(hbar)
            echo[f"{pre}_status"] = "gate-unreachable"
            if not quiet:
                print(f"hbar={hbar}: accuracy gate unreachable, skipping point")
            continue
        echo[f"{pre}_status"] = "ok"
        echo[f"{pre}_bvn_mask"] = mask_size
        echo[f"{pre}_bvn_e_cut"] = e_cut
        echo[f"{pre}_fgh_n_min"] = n_min
        bvn_points.append(EfficiencyPoint(hbar, mask_size, count,
                                          mask_size / count))
        fgh_points.append(EfficiencyPoint(hbar, n_min, count, n_min / count))
        if not quiet:
            print(f"hbar={hbar}: {count} states | bvn mask {mask_size} "
                  f"(eta {mask_size / count:.3f}) | fgh N {n_min} "
                  f"(eta {n_min / count:.3f})")

    bvn_path = out_dir / sweep.bvn_file
    fgh_path = out_dir / sweep.fgh_file
    for path, pts in ((bvn_path, bvn_points), (fgh_path, fgh_points)):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["hbar", "eta"])
            for p in pts:
                writer.writerow([_fmt(p.hbar), _fmt(p.eta)])
    summary_path = out_dir / sweep.summary_file
    write_summary(summary_path, echo)
    return SweepOutcome(bvn_points=bvn_points, fgh_points=fgh_points,
                        failures=failures, bvn_path=bvn_path,
                        fgh_path=fgh_path, summary_path=summary_path)
