"""Run configuration: YAML parsing, validation and conversion to sweep plans.

A configuration document looks like::

    schema_version: 1
    scenario: fig3c          # optional named preset
    seed: 7
    workers: 1
    output: results/
    format: csv
    parameters:              # overrides applied to every run of the scenario
      n_realizations: 200
    constants:
      linewidth_mhz: 5.2

Without ``scenario`` the ``parameters`` block alone describes a single run.
Physical units are used throughout the document; conversion to the internal
Gamma0 units happens in :meth:`RunParams.to_plan`.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields

import numpy as np
import yaml

from .atom import Chirality, CouplingModel
from .constants import DEFAULTS, SPEED_OF_LIGHT
from .lattice import LatticeSpec, harmonic_sigma_z, phase_from_trap_detuning
from .presets import PRESETS
from .spectra import DEFAULT_REALIZATIONS, SweepPlan

SCHEMA_VERSION = 1
TOP_LEVEL_KEYS = {"schema_version", "scenario", "seed", "workers", "output", "format",
                  "parameters", "constants"}
FORMATS = ("csv",)
MODES = ("spectrum", "atom_number")


class ConfigError(ValueError):
    """Invalid configuration; ``violations`` lists every problem found."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def mhz_to_gamma(value, linewidth_mhz: float):
    return value / linewidth_mhz


def gamma_to_mhz(value, linewidth_mhz: float):
    return value * linewidth_mhz


@dataclass(frozen=True)
class Constants:
    linewidth_mhz: float = DEFAULTS["linewidth_mhz"]
    wavelength_nm: float = DEFAULTS["wavelength_nm"]
    atom_mass_kg: float = DEFAULTS["atom_mass_kg"]


@dataclass(frozen=True)
class RunParams:
    """One spectrum (or one atom-number scan) in laboratory units."""

    label: str = "custom"
    mode: str = "spectrum"
    n_atoms: int = 2000
    n_chains: int = 2
    n_sites: int | None = None
    fill_factor: float = 1.0
    survival: float = 1.0
    trap_detuning_nm: float = 0.0
    phase_per_site: float | None = None
    gamma_1d: float = 0.01
    gamma_prime: float = 1.0
    chirality: str = "symmetric"
    forward_factor: float = 2.8
    forward_backward_ratio: float = 12.0
    shift_mhz: float = 0.0
    sigma_delta_mhz: float = 0.0
    sigma_z_nm: float | None = None
    temperature_uk: float | None = None
    axial_frequency_khz: float | None = None
    detuning_min_mhz: float = -40.0
    detuning_max_mhz: float = 60.0
    detuning_step_mhz: float = 1.0
    n_realizations: int = DEFAULT_REALIZATIONS
    probe_dispersion: bool = False
    survival_grid: tuple = ()

    def detuning_grid_mhz(self) -> np.ndarray:
        n = int(math.floor((self.detuning_max_mhz - self.detuning_min_mhz)
                           / self.detuning_step_mhz + 1e-9)) + 1
        return self.detuning_min_mhz + self.detuning_step_mhz * np.arange(n)

    def sigma_z_value_nm(self, constants: Constants) -> float:
        if self.sigma_z_nm is not None:
            return self.sigma_z_nm
        if self.temperature_uk is not None and self.axial_frequency_khz is not None:
            sigma = harmonic_sigma_z(self.temperature_uk * 1e-6, constants.atom_mass_kg,
                                     2 * math.pi * self.axial_frequency_khz * 1e3)
            return sigma * 1e9
        return 0.0

    def to_plan(self, constants: Constants, seed: int) -> SweepPlan:
        lw = constants.linewidth_mhz
        if self.chirality == "chiral":
            coupling = CouplingModel.chiral(self.gamma_1d, self.forward_factor,
                                            self.forward_backward_ratio, self.gamma_prime,
                                            mhz_to_gamma(self.shift_mhz, lw))
        else:
            coupling = CouplingModel.symmetric(self.gamma_1d, self.gamma_prime,
                                               mhz_to_gamma(self.shift_mhz, lw))
        phase = self.phase_per_site
        if phase is None:
            phase = phase_from_trap_detuning(self.trap_detuning_nm, constants.wavelength_nm)
        lattice = LatticeSpec(
            n_atoms_expected=self.n_atoms,
            fill_factor=self.fill_factor,
            survival=self.survival,
            phase_per_site=phase,
            sigma_delta=mhz_to_gamma(self.sigma_delta_mhz, lw),
            sigma_z=self.sigma_z_value_nm(constants) / constants.wavelength_nm,
            n_chains=self.n_chains,
            n_sites=self.n_sites,
        )
        dispersion = 0.0
        if self.probe_dispersion:
            nu0_mhz = SPEED_OF_LIGHT / (constants.wavelength_nm * 1e-9) * 1e-6
            dispersion = lw / nu0_mhz
        return SweepPlan(
            detuning_grid=mhz_to_gamma(self.detuning_grid_mhz(), lw),
            coupling=coupling,
            lattice=lattice,
            chirality=Chirality(self.chirality),
            n_realizations=self.n_realizations,
            master_seed=seed,
            dispersion=dispersion,
        )


@dataclass(frozen=True)
class RunConfig:
    runs: tuple[RunParams, ...]
    scenario: str | None = None
    seed: int = 0
    workers: int = 1
    output: str = "."
    format: str = "csv"
    constants: Constants = field(default_factory=Constants)
    defaults_applied: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


_PARAM_FIELDS = {f.name: f for f in fields(RunParams)}
_CONST_FIELDS = {f.name for f in fields(Constants)}
_INT_PARAMS = {"n_atoms", "n_chains", "n_sites", "n_realizations"}
_OPTIONAL_PARAMS = {"n_sites", "phase_per_site", "sigma_z_nm", "temperature_uk",
                    "axial_frequency_khz"}


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _coerce_params(block: dict, where: str, violations: list) -> dict:
    out = {}
    for key, value in block.items():
        if key not in _PARAM_FIELDS:
            violations.append(f"{where}: unknown key '{key}'")
            continue
        if value is None and key in _OPTIONAL_PARAMS:
            out[key] = None
        elif key in ("label", "mode", "chirality"):
            if not isinstance(value, str):
                violations.append(f"{where}.{key}: expected a string")
                continue
            out[key] = value
        elif key == "probe_dispersion":
            if not isinstance(value, bool):
                violations.append(f"{where}.{key}: expected true or false")
                continue
            out[key] = value
        elif key == "survival_grid":
            if not isinstance(value, (list, tuple)) or not all(_is_number(v) for v in value):
                violations.append(f"{where}.{key}: expected a list of numbers")
                continue
            out[key] = tuple(float(v) for v in value)
        elif key in _INT_PARAMS:
            if not _is_int(value):
                violations.append(f"{where}.{key}: expected an integer")
                continue
            out[key] = value
        else:
            if not _is_number(value):
                violations.append(f"{where}.{key}: expected a finite number")
                continue
            out[key] = float(value)
    return out


def _check_run(p: RunParams, violations: list):
    where = f"run '{p.label}'"
    checks = [
        (p.mode in MODES, f"mode must be one of {MODES}"),
        (p.chirality in [c.value for c in Chirality], "chirality must be 'symmetric' or 'chiral'"),
        (p.n_atoms >= 1, "n_atoms must be >= 1"),
        (p.n_chains in (1, 2), "n_chains must be 1 or 2"),
        (p.n_sites is None or p.n_sites >= 1, "n_sites must be >= 1"),
        (0.0 <= p.fill_factor <= 1.0, f"fill_factor must lie in [0, 1], got {p.fill_factor}"),
        (0.0 <= p.survival <= 1.0, f"survival must lie in [0, 1], got {p.survival}"),
        (p.phase_per_site is None or p.phase_per_site > 0, "phase_per_site must be > 0"),
        (p.gamma_1d >= 0, "gamma_1d must be >= 0"),
        (p.gamma_prime >= 0, "gamma_prime must be >= 0"),
        (p.gamma_1d + p.gamma_prime > 0, "total decay rate must be positive"),
        (p.forward_factor >= 0, "forward_factor must be >= 0"),
        (p.forward_backward_ratio > 0, "forward_backward_ratio must be > 0"),
        (p.sigma_delta_mhz >= 0, "sigma_delta_mhz must be >= 0"),
        (p.sigma_z_nm is None or p.sigma_z_nm >= 0, "sigma_z_nm must be >= 0"),
        (p.temperature_uk is None or p.temperature_uk > 0, "temperature_uk must be > 0"),
        (p.axial_frequency_khz is None or p.axial_frequency_khz > 0,
         "axial_frequency_khz must be > 0"),
        ((p.temperature_uk is None) == (p.axial_frequency_khz is None),
         "temperature_uk and axial_frequency_khz must be given together"),
        (p.detuning_step_mhz > 0, "detuning_step_mhz must be > 0"),
        (p.detuning_max_mhz > p.detuning_min_mhz, "detuning_max_mhz must exceed detuning_min_mhz"),
        (p.n_realizations >= 1, "n_realizations must be >= 1"),
        (all(0.0 <= s <= 1.0 for s in p.survival_grid), "survival_grid values must lie in [0, 1]"),
        (p.mode != "atom_number" or len(p.survival_grid) > 0,
         "atom_number mode needs a non-empty survival_grid"),
        (p.n_sites is not None or p.fill_factor * p.survival != 0,
         "fill_factor * survival is 0; give n_sites explicitly"),
    ]
    violations.extend(f"{where}: {msg}" for ok, msg in checks if not ok)


def parse_document(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"parse error{where}: {problem}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping at the top level")
    return doc


def build_config(doc: dict) -> RunConfig:
    violations = []
    for key in doc:
        if key not in TOP_LEVEL_KEYS:
            violations.append(f"unknown top-level key '{key}'")

    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        violations.append(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")

    scenario = doc.get("scenario")
    params = doc.get("parameters")
    if params is not None and not isinstance(params, dict):
        violations.append("parameters must be a mapping")
        params = None
    if scenario is None and not params:
        violations.append("no scenario and no parameters given")
    if scenario is not None and scenario not in PRESETS:
        violations.append(f"unknown scenario '{scenario}' (see 'preset list')")

    seed = doc.get("seed", 0)
    if not _is_int(seed) or seed < 0:
        violations.append("seed must be a non-negative integer")
    workers = doc.get("workers", 1)
    if not _is_int(workers) or workers < 1:
        violations.append("workers must be a positive integer")
    fmt = doc.get("format", "csv")
    if fmt not in FORMATS:
        violations.append(f"format must be one of {FORMATS}")
    output = doc.get("output", ".")
    if not isinstance(output, str):
        violations.append("output must be a path string")

    const_block = doc.get("constants") or {}
    constants = Constants()
    if not isinstance(const_block, dict):
        violations.append("constants must be a mapping")
    else:
        bad = [k for k in const_block if k not in _CONST_FIELDS]
        violations.extend(f"constants: unknown key '{k}'" for k in bad)
        good = {k: v for k, v in const_block.items() if k in _CONST_FIELDS}
        bad_values = [k for k, v in good.items() if not _is_number(v) or v <= 0]
        violations.extend(f"constants.{k}: expected a positive number" for k in bad_values)
        if not bad and not bad_values:
            constants = Constants(**{k: float(v) for k, v in good.items()})

    overrides = _coerce_params(params or {}, "parameters", violations)
    run_blocks = [dict()]
    base = {}
    if scenario in PRESETS:
        base = _coerce_params(PRESETS[scenario]["base"], f"preset {scenario}", violations)
        run_blocks = [_coerce_params(r, f"preset {scenario}", violations)
                      for r in PRESETS[scenario]["runs"]]
    runs = []
    defaults_applied = {}
    for block in run_blocks:
        merged = {**base, **block, **overrides}
        if "label" in overrides and len(run_blocks) > 1:
            merged["label"] = f"{overrides['label']}-{block.get('label', 'run')}"
        p = RunParams(**merged)
        _check_run(p, violations)
        runs.append(p)
        defaults_applied[p.label] = {
            name: _jsonable(getattr(p, name)) for name in _PARAM_FIELDS if name not in merged
        }
    labels = [p.label for p in runs]
    if len(set(labels)) != len(labels):
        violations.append("run labels must be unique")
    if violations:
        raise ConfigError(violations)
    top_level = {"seed": seed, "workers": workers, "output": output, "format": fmt}
    for name, value in top_level.items():
        if name not in doc:
            defaults_applied.setdefault("_config", {})[name] = value
    for name in _CONST_FIELDS - set(const_block):
        defaults_applied.setdefault("_constants", {})[name] = getattr(constants, name)
    return RunConfig(tuple(runs), scenario, seed, workers, output, fmt, constants,
                     defaults_applied, version)


def load_config(text: str) -> RunConfig:
    """Parse and validate a YAML configuration document."""
    return build_config(parse_document(text))


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    return value


def run_params_dict(p: RunParams) -> dict:
    return {k: _jsonable(v) for k, v in dataclasses.asdict(p).items()}
