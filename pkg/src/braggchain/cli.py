"""Command-line entry point.

::

    braggchain simulate CONFIG [--seed S] [--workers W] [--out PATH] [--format csv]
    braggchain preset list
    braggchain preset show NAME
    braggchain oracle check [--instances N] [--seed S]

Exit status is 0 on success, 1 for an invalid configuration and 2 for a
runtime failure; failures also print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .atom import Chirality, CouplingModel
from .config import ConfigError, RunConfig, build_config, parse_document, run_params_dict
from .lattice import ChainRealization
from .oracle import problem_from_chain, solve_multiple_scattering
from .output import write_atom_number, write_metadata, write_spectrum
from .presets import PRESETS
from .spectra import evaluate_chain, reflectance_vs_atom_number, run_sweep

log = logging.getLogger("braggchain")

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2


def _error_record(kind: str, exc: Exception) -> dict:
    record = {"status": "error", "kind": kind, "message": str(exc)}
    if isinstance(exc, ConfigError):
        record["violations"] = exc.violations
    return record


def run(config: RunConfig) -> list[Path]:
    """Execute every run of ``config``; returns the paths written."""
    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    lw = config.constants.linewidth_mhz
    written = []
    for params in config.runs:
        plan = params.to_plan(config.constants, config.seed)
        log.info("run %s: %d sites, %d realizations, %d detunings", params.label,
                 plan.lattice.site_count, plan.n_realizations, plan.detuning_grid.size)
        table = out_dir / f"{params.label}.{config.format}"
        if params.mode == "atom_number":
            points = reflectance_vs_atom_number(plan, params.survival_grid, workers=config.workers)
            write_atom_number(table, points, plan.n_realizations, lw)
        else:
            result = run_sweep(plan, workers=config.workers)
            write_spectrum(table, result, lw)
        metadata = {
            "code_version": __version__,
            "schema_version": config.schema_version,
            "scenario": config.scenario,
            "label": params.label,
            "mode": params.mode,
            "seed": config.seed,
            "workers": config.workers,
            "format": config.format,
            "parameters": run_params_dict(params),
            "constants": dataclasses.asdict(config.constants),
            "defaults_applied": {
                "run": config.defaults_applied.get(params.label, {}),
                "config": config.defaults_applied.get("_config", {}),
                "constants": config.defaults_applied.get("_constants", {}),
            },
            "plan": plan.metadata(),
            "table": table.name,
        }
        meta = out_dir / f"{params.label}.meta.json"
        write_metadata(meta, metadata)
        written += [table, meta]
    return written


def _cmd_simulate(args) -> int:
    try:
        doc = parse_document(Path(args.config).read_text())
        # command-line values take precedence over the document
        for key, value in (("seed", args.seed), ("workers", args.workers),
                           ("output", args.out), ("format", args.format)):
            if value is not None:
                doc[key] = value
        config = build_config(doc)
    except (ConfigError, OSError) as exc:
        print(json.dumps(_error_record("validation", exc)), file=sys.stderr)
        return EXIT_VALIDATION
    try:
        for path in run(config):
            print(path)
    except Exception as exc:  # noqa: BLE001 - report any runtime failure as a record
        log.debug("run failed", exc_info=True)
        print(json.dumps(_error_record("runtime", exc)), file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_preset_list(args) -> int:
    for name, preset in PRESETS.items():
        print(f"{name:12s} {preset['description']}")
    return EXIT_OK


def _cmd_preset_show(args) -> int:
    if args.name not in PRESETS:
        print(json.dumps({"status": "error", "kind": "validation",
                          "message": f"unknown preset '{args.name}'"}), file=sys.stderr)
        return EXIT_VALIDATION
    print(yaml.safe_dump({"schema_version": 1, "scenario": args.name}, sort_keys=False), end="")
    print(yaml.safe_dump({"preset": PRESETS[args.name]}, sort_keys=False), end="")
    return EXIT_OK


def oracle_check(instances: int = 200, seed: int = 0, max_atoms: int = 8) -> float:
    """Largest |R - R_oracle|, |T - T_oracle| over random short chains."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(instances):
        n = int(rng.integers(1, max_atoms + 1))
        positions = np.sort(rng.uniform(0, 4 * np.pi, n))
        offsets = rng.normal(0, 1, n)
        if i % 2:
            chirality = Chirality.CHIRAL
            coupling = CouplingModel(rng.uniform(0, 0.5), rng.uniform(0, 0.5), rng.uniform(0.05, 2))
        else:
            chirality = Chirality.SYMMETRIC
            coupling = CouplingModel.symmetric(rng.uniform(0, 1), rng.uniform(0.05, 2))
        chain = ChainRealization(positions, offsets, 0, n)
        delta = float(rng.normal(0, 2))
        R, T = evaluate_chain(chain, coupling, chirality, delta)
        Ro, To = solve_multiple_scattering(problem_from_chain(chain, coupling, chirality, delta))
        worst = max(worst, abs(R[0] - Ro), abs(T[0] - To))
    return float(worst)


def _cmd_oracle_check(args) -> int:
    try:
        worst = oracle_check(args.instances, args.seed)
    except Exception as exc:  # noqa: BLE001
        print(json.dumps(_error_record("runtime", exc)), file=sys.stderr)
        return EXIT_RUNTIME
    ok = bool(worst <= args.tolerance)
    print(json.dumps({"instances": args.instances, "max_abs_deviation": worst,
                      "tolerance": args.tolerance, "pass": ok}))
    return EXIT_OK if ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braggchain", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a configuration file")
    sim.add_argument("config")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--workers", type=int)
    sim.add_argument("--out")
    sim.add_argument("--format")
    sim.set_defaults(func=_cmd_simulate)

    preset = sub.add_parser("preset", help="inspect shipped scenarios")
    psub = preset.add_subparsers(dest="preset_command", required=True)
    psub.add_parser("list").set_defaults(func=_cmd_preset_list)
    show = psub.add_parser("show")
    show.add_argument("name")
    show.set_defaults(func=_cmd_preset_show)

    oracle = sub.add_parser("oracle", help=argparse.SUPPRESS)
    osub = oracle.add_subparsers(dest="oracle_command", required=True)
    check = osub.add_parser("check")
    check.add_argument("--instances", type=int, default=200)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--tolerance", type=float, default=1e-10)
    check.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
