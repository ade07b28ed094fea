"""Experiment configuration files: flat INI sections, strictly validated.

A solve config carries [grid], [potential], [method], [report], and
optionally [lattice] and [prune] sections; a sweep config uses [sweep],
[potential], and one [point <hbar>] section per sweep value.  Unknown keys
are rejected so preset typos cannot silently change an experiment.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, InvalidArgumentError, LatticeMismatchError
from .lattice import GridSpec, VnLatticeSpec, make_grid, make_lattice
from .potentials import (Coulomb, Harmonic, Morse, PotentialModel,
                         TabulatedPotential)

METHODS = ("fgh", "pvn", "bvn", "vn-analytic")

_GRID_KEYS = {"x_min", "length", "n_points", "hbar"}
_LATTICE_KEYS = {"n_x", "n_p", "alpha"}
_POTENTIAL_KEYS = {
    "harmonic": {"kind", "mass", "omega"},
    "morse": {"kind", "mass", "depth", "steepness"},
    "coulomb": {"kind", "mass", "charge", "core_offset"},
    "tabulated": {"kind", "mass", "file"},
}
_METHOD_KEYS = {"name"}
_PRUNE_KEYS = {"e_cut", "target_count", "margin"}
_REPORT_KEYS = {"n_levels", "oracle", "summary_file", "levels_file",
                "mask_file", "diag_dropped"}


def preset_path(name: str) -> Path:
    """Path of a bundled preset file, by bare name (e.g. 'harmonic-pvn')."""
    ref = resources.files("vneig").joinpath("presets", f"{name}.ini")
    p = Path(str(ref))
    if not p.exists():
        raise ConfigError(f"no bundled preset named {name!r}")
    return p


def list_presets() -> list[str]:
    folder = Path(str(resources.files("vneig").joinpath("presets")))
    return sorted(p.stem for p in folder.glob("*.ini"))


@dataclass
class ExperimentConfig:
    grid: GridSpec
    model: PotentialModel
    mass: float
    method: str
    n_levels: int
    oracle: bool
    summary_file: str
    levels_file: str
    lattice: VnLatticeSpec | None = None
    e_cut: float | None = None
    target_count: int | None = None
    margin: float = 0.0
    mask_file: str = "phase-mask.csv"
    diag_dropped: bool = False
    source: Path | None = field(default=None, repr=False)


def _read_ini(path) -> configparser.ConfigParser:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return parser


def _check_keys(section: str, present, allowed) -> None:
    unknown = sorted(set(present) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def _get(parser, section, key, conv, required=True, default=None):
    if not parser.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key {section}.{key}")
        return default
    raw = parser.get(section, key)
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc


def _get_bool(parser, section, key, required=True, default=None):
    raw = _get(parser, section, key, str, required, None)
    if raw is None:
        return default
    lowered = raw.strip().lower()
    if lowered in ("on", "true", "yes", "1"):
        return True
    if lowered in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"bad value for {section}.{key}: {raw!r} (want on/off)")


def _build_model(parser, base_dir: Path) -> tuple[PotentialModel, float]:
    if not parser.has_section("potential"):
        raise ConfigError("missing required section [potential]")
    kind = _get(parser, "potential", "kind", str).strip().lower()
    if kind not in _POTENTIAL_KEYS:
        raise ConfigError(
            f"potential.kind must be one of {sorted(_POTENTIAL_KEYS)}, got {kind!r}")
    _check_keys("potential", parser.options("potential"), _POTENTIAL_KEYS[kind])
    mass = _get(parser, "potential", "mass", float)
    try:
        if kind == "harmonic":
            model = Harmonic(mass=mass, omega=_get(parser, "potential", "omega", float))
        elif kind == "morse":
            model = Morse(depth=_get(parser, "potential", "depth", float),
                          steepness=_get(parser, "potential", "steepness", float),
                          mass=mass)
        elif kind == "coulomb":
            model = Coulomb(charge=_get(parser, "potential", "charge", float),
                            mass=mass,
                            core_offset=_get(parser, "potential", "core_offset",
                                             float, required=False, default=0.0))
        else:
            table_path = base_dir / _get(parser, "potential", "file", str)
            if not table_path.exists():
                raise ConfigError(f"tabulated potential file not found: {table_path}")
            data = np.loadtxt(table_path)
            if data.ndim != 2 or data.shape[1] != 2:
                raise ConfigError(
                    f"tabulated potential file must have two columns: {table_path}")
            model = TabulatedPotential(x_table=data[:, 0], v_table=data[:, 1],
                                       mass=mass)
    except InvalidArgumentError as exc:
        raise ConfigError(f"bad [potential] parameters: {exc}") from exc
    return model, mass


def _build_grid(parser) -> GridSpec:
    if not parser.has_section("grid"):
        raise ConfigError("missing required section [grid]")
    _check_keys("grid", parser.options("grid"), _GRID_KEYS)
    try:
        return make_grid(
            x_min=_get(parser, "grid", "x_min", float),
            length=_get(parser, "grid", "length", float),
            n_points=_get(parser, "grid", "n_points", int),
            hbar=_get(parser, "grid", "hbar", float))
    except InvalidArgumentError as exc:
        raise ConfigError(f"bad [grid] parameters: {exc}") from exc


def _build_lattice(parser, grid) -> VnLatticeSpec:
    _check_keys("lattice", parser.options("lattice"), _LATTICE_KEYS)
    try:
        return make_lattice(
            grid,
            n_x=_get(parser, "lattice", "n_x", int),
            n_p=_get(parser, "lattice", "n_p", int),
            alpha=_get(parser, "lattice", "alpha", float, required=False))
    except (LatticeMismatchError, InvalidArgumentError) as exc:
        raise ConfigError(f"bad [lattice] parameters: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    """Load and validate a solve config."""
    path = Path(path)
    parser = _read_ini(path)

    grid = _build_grid(parser)
    model, mass = _build_model(parser, path.parent)

    if not parser.has_section("method"):
        raise ConfigError("missing required section [method]")
    _check_keys("method", parser.options("method"), _METHOD_KEYS)
    method = _get(parser, "method", "name", str).strip().lower()
    if method not in METHODS:
        raise ConfigError(f"method.name must be one of {METHODS}, got {method!r}")

    lattice = None
    if parser.has_section("lattice"):
        lattice = _build_lattice(parser, grid)
    elif method != "fgh":
        raise ConfigError(f"method {method!r} requires a [lattice] section")

    e_cut = target_count = None
    margin = 0.0
    if parser.has_section("prune"):
        if method != "bvn":
            raise ConfigError("[prune] section is only valid with method.name = bvn")
        _check_keys("prune", parser.options("prune"), _PRUNE_KEYS)
        e_cut = _get(parser, "prune", "e_cut", float, required=False)
        target_count = _get(parser, "prune", "target_count", int, required=False)
        margin = _get(parser, "prune", "margin", float, required=False, default=0.0)
        if (e_cut is None) == (target_count is None):
            raise ConfigError(
                "[prune] must set exactly one of e_cut / target_count")
        if target_count is not None and not 1 <= target_count <= grid.n_points:
            raise ConfigError(
                f"prune.target_count must be in [1, {grid.n_points}], "
                f"got {target_count}")
    elif method == "bvn":
        raise ConfigError("method bvn requires a [prune] section "
                          "(set e_cut or target_count)")

    if not parser.has_section("report"):
        raise ConfigError("missing required section [report]")
    _check_keys("report", parser.options("report"), _REPORT_KEYS)
    n_levels = _get(parser, "report", "n_levels", int)
    if n_levels < 1:
        raise ConfigError(f"report.n_levels must be >= 1, got {n_levels}")
    oracle = _get_bool(parser, "report", "oracle")
    if oracle and model.kind == "tabulated":
        raise ConfigError("report.oracle = on is unavailable for a tabulated potential")

    stem = path.stem
    return ExperimentConfig(
        grid=grid, model=model, mass=mass, method=method, lattice=lattice,
        e_cut=e_cut, target_count=target_count, margin=margin,
        n_levels=n_levels, oracle=oracle,
        summary_file=_get(parser, "report", "summary_file", str,
                          required=False, default=f"{stem}-summary.txt"),
        levels_file=_get(parser, "report", "levels_file", str,
                         required=False, default=f"{stem}-levels.csv"),
        mask_file=_get(parser, "report", "mask_file", str,
                       required=False, default=f"{stem}-mask.csv"),
        diag_dropped=_get_bool(parser, "report", "diag_dropped",
                               required=False, default=False),
        source=path)


_SWEEP_KEYS = {"e_shell", "digits", "hbar_values", "bvn_file", "fgh_file",
               "summary_file"}
_POINT_KEYS = {"x_min", "length", "n_x", "n_p", "alpha",
               "fgh_x_min", "fgh_length", "fgh_n_lo", "fgh_n_hi"}


@dataclass
class SweepPoint:
    hbar: float
    grid: GridSpec
    lattice: VnLatticeSpec
    fgh_x_min: float
    fgh_length: float
    fgh_n_lo: int | None
    fgh_n_hi: int | None


@dataclass
class SweepConfig:
    model: PotentialModel
    mass: float
    e_shell: float
    digits: int
    points: list[SweepPoint]
    bvn_file: str
    fgh_file: str
    summary_file: str
    source: Path | None = field(default=None, repr=False)


def load_sweep_config(path) -> SweepConfig:
    """Load and validate an hbar-sweep config."""
    path = Path(path)
    parser = _read_ini(path)
    if not parser.has_section("sweep"):
        raise ConfigError("missing required section [sweep]")
    _check_keys("sweep", parser.options("sweep"), _SWEEP_KEYS)
    model, mass = _build_model(parser, path.parent)
    if model.kind == "tabulated":
        raise ConfigError("sweep requires an analytic potential oracle")
    e_shell = _get(parser, "sweep", "e_shell", float)
    digits = _get(parser, "sweep", "digits", int, required=False, default=12)
    if digits < 1:
        raise ConfigError(f"sweep.digits must be >= 1, got {digits}")
    raw_values = _get(parser, "sweep", "hbar_values", str)
    tokens = [t.strip() for t in raw_values.split(",") if t.strip()]
    if not tokens:
        raise ConfigError("sweep.hbar_values is empty")

    points = []
    for token in tokens:
        try:
            hbar = float(token)
        except ValueError as exc:
            raise ConfigError(f"bad hbar value {token!r} in sweep.hbar_values") from exc
        section = f"point {token}"
        if not parser.has_section(section):
            raise ConfigError(f"missing section [{section}] for hbar = {token}")
        _check_keys(section, parser.options(section), _POINT_KEYS)
        try:
            grid = make_grid(
                x_min=_get(parser, section, "x_min", float),
                length=_get(parser, section, "length", float),
                n_points=_get(parser, section, "n_x", int)
                * _get(parser, section, "n_p", int),
                hbar=hbar)
            lattice = make_lattice(
                grid,
                n_x=_get(parser, section, "n_x", int),
                n_p=_get(parser, section, "n_p", int),
                alpha=_get(parser, section, "alpha", float, required=False))
        except InvalidArgumentError as exc:
            raise ConfigError(f"bad [{section}] parameters: {exc}") from exc
        points.append(SweepPoint(
            hbar=hbar, grid=grid, lattice=lattice,
            fgh_x_min=_get(parser, section, "fgh_x_min", float),
            fgh_length=_get(parser, section, "fgh_length", float),
            fgh_n_lo=_get(parser, section, "fgh_n_lo", int, required=False),
            fgh_n_hi=_get(parser, section, "fgh_n_hi", int, required=False)))

    return SweepConfig(
        model=model, mass=mass, e_shell=e_shell, digits=digits, points=points,
        bvn_file=_get(parser, "sweep", "bvn_file", str,
                      required=False, default="sweep-bvn.csv"),
        fgh_file=_get(parser, "sweep", "fgh_file", str,
                      required=False, default="sweep-fgh.csv"),
        summary_file=_get(parser, "sweep", "summary_file", str,
                          required=False, default="sweep-summary.txt"),
        source=path)
