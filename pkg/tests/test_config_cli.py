import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braggchain import __version__
from braggchain.cli import main, run
from braggchain.config import (
    ConfigError,
    build_config,
    gamma_to_mhz,
    load_config,
    mhz_to_gamma,
)
from braggchain.lattice import phase_from_trap_detuning
from braggchain.output import SPECTRUM_COLUMNS, read_table
from braggchain.presets import PRESETS
from braggchain.spectra import run_sweep


def write(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadConfig:
    def test_fig3c_preset(self):
        cfg = load_config("scenario: fig3c\n")
        (p,) = cfg.runs
        assert (p.n_atoms, p.gamma_1d, p.fill_factor, p.trap_detuning_nm) == (2000, 0.007, 0.3, 0.12)
        plan = p.to_plan(cfg.constants, cfg.seed)
        assert plan.coupling.gamma_1d == pytest.approx(0.007)
        assert plan.lattice.phase_per_site == phase_from_trap_detuning(0.12)
        assert plan.lattice.site_count == 3333
        assert plan.detuning_grid.size == 101
        assert plan.n_realizations == 15

    def test_empty_document(self):
        with pytest.raises(ConfigError, match="no scenario and no parameters"):
            load_config("")

    def test_fill_factor_range(self):
        with pytest.raises(ConfigError) as info:
            load_config("parameters:\n  fill_factor: 1.3\n")
        assert any("fill_factor must lie in [0, 1], got 1.3" in v for v in info.value.violations)

    def test_all_violations_are_listed(self):
        with pytest.raises(ConfigError) as info:
            load_config("seed: -2\nbogus: 1\nparameters:\n  fill_factor: 2\n  survival: -1\n"
                        "  colour: red\n")
        assert len(info.value.violations) == 5

    @pytest.mark.parametrize("text, fragment", [
        ("scenario: fig3c\nextra: 1\n", "unknown top-level key 'extra'"),
        ("scenario: fig3c\nparameters:\n  n_atom: 5\n", "unknown key 'n_atom'"),
        ("scenario: fig3c\nconstants:\n  hbar: 1\n", "constants: unknown key 'hbar'"),
        ("scenario: nope\n", "unknown scenario 'nope'"),
        ("scenario: fig3c\nschema_version: 2\n", "unsupported schema_version"),
        ("parameters:\n  n_atoms: 2.5\n", "expected an integer"),
        ("parameters:\n  temperature_uk: 20\n", "must be given together"),
    ])
    def test_rejections(self, text, fragment):
        with pytest.raises(ConfigError) as info:
            load_config(text)
        assert any(fragment in v for v in info.value.violations)

    def test_parse_error_has_position(self):
        with pytest.raises(ConfigError, match=r"line 2, column \d+"):
            load_config("scenario: fig3c\n seed: 1\n")

    def test_overrides_apply_to_every_run(self):
        cfg = load_config("scenario: fig1c\nparameters:\n  n_realizations: 3\n")
        assert len(cfg.runs) == 4
        assert all(p.n_realizations == 3 for p in cfg.runs)

    def test_defaults_are_recorded(self):
        cfg = load_config("scenario: fig3c\n")
        applied = cfg.defaults_applied
        assert applied["fig3c"]["detuning_step_mhz"] == 1.0
        assert applied["_config"]["seed"] == 0
        assert applied["_constants"]["linewidth_mhz"] == 5.2

    def test_temperature_sets_axial_spread(self):
        cfg = load_config("parameters:\n  temperature_uk: 20\n  axial_frequency_khz: 258\n")
        assert cfg.runs[0].sigma_z_value_nm(cfg.constants) == pytest.approx(22, abs=0.5)

    def test_constants_override(self):
        cfg = load_config("scenario: fig3c\nconstants:\n  linewidth_mhz: 10.4\n")
        plan = cfg.runs[0].to_plan(cfg.constants, 0)
        assert plan.detuning_grid[0] == pytest.approx(-40 / 10.4)
        assert plan.coupling.shift == pytest.approx(3 / 10.4)

    def test_every_preset_resolves(self):
        for name in PRESETS:
            cfg = load_config(f"scenario: {name}\n")
            for p in cfg.runs:
                p.to_plan(cfg.constants, 0)


@given(x=st.floats(-1e6, 1e6, allow_nan=False), lw=st.floats(0.01, 100))
def test_unit_round_trip(x, lw):
    back = gamma_to_mhz(mhz_to_gamma(x, lw), lw)
    assert back == pytest.approx(x, rel=1e-12, abs=1e-300)
    assert gamma_to_mhz(x, lw) == x * lw


class TestRun:
    def test_fig1c_writes_four_tables(self, tmp_path):
        cfg = build_config({"scenario": "fig1c", "output": str(tmp_path),
                            "parameters": {"detuning_step_mhz": 5.0}})
        written = run(cfg)
        tables = sorted(p.name for p in written if p.suffix == ".csv")
        assert tables == ["dl0.0nm.csv", "dl0.1nm.csv", "dl0.2nm.csv", "dl0.3nm.csv"]
        for name in tables:
            cols = read_table(tmp_path / name)
            assert tuple(cols) == SPECTRUM_COLUMNS
            assert len(cols["delta_mhz"]) == 21

    def test_fig5b_pair(self, tmp_path):
        cfg = build_config({"scenario": "fig5b", "output": str(tmp_path),
                            "parameters": {"n_realizations": 2, "detuning_step_mhz": 5.0}})
        names = {p.name for p in run(cfg)}
        assert {"chiral.csv", "symmetric.csv", "chiral.meta.json", "symmetric.meta.json"} <= names
        meta = json.loads((tmp_path / "chiral.meta.json").read_text())
        assert meta["plan"]["chirality"] == "chiral"
        assert meta["parameters"]["forward_factor"] == 2.8
        assert meta["parameters"]["forward_backward_ratio"] == 12.0

    def test_metadata_is_sufficient_to_rerun(self, tmp_path):
        cfg = build_config({"scenario": "fig3d", "seed": 11, "output": str(tmp_path / "a"),
                            "parameters": {"n_realizations": 2}})
        run(cfg)
        meta = json.loads((tmp_path / "a" / "fig3d.meta.json").read_text())
        assert meta["code_version"] == __version__
        assert meta["seed"] == 11
        rerun = build_config({"seed": meta["seed"], "output": str(tmp_path / "b"),
                              "parameters": meta["parameters"], "constants": meta["constants"]})
        run(rerun)
        assert ((tmp_path / "a" / "fig3d.csv").read_bytes()
                == (tmp_path / "b" / "fig3d.csv").read_bytes())

    def test_atom_number_mode(self, tmp_path):
        cfg = build_config({"scenario": "fig4-inset", "output": str(tmp_path),
                            "parameters": {"n_realizations": 1, "survival_grid": [1.0, 0.5],
                                           "detuning_step_mhz": 5.0}})
        run(cfg)
        cols = read_table(tmp_path / "fig4-inset.csv")
        assert cols["survival"] == [1.0, 0.5]
        assert cols["expected_atoms"][1] == pytest.approx(1000, abs=0.5)


class TestMain:
    CONFIG = "scenario: fig3c\nparameters:\n  n_realizations: 2\n  detuning_step_mhz: 5\n"

    def test_simulate_is_byte_identical(self, tmp_path, capsys):
        cfg = write(tmp_path, self.CONFIG)
        for out in ("a", "b"):
            assert main(["simulate", str(cfg), "--seed", "4", "--out", str(tmp_path / out)]) == 0
        for name in ("fig3c.csv", "fig3c.meta.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert "fig3c.csv" in capsys.readouterr().out

    def test_seed_changes_output(self, tmp_path):
        cfg = write(tmp_path, self.CONFIG)
        main(["simulate", str(cfg), "--seed", "1", "--out", str(tmp_path / "a")])
        main(["simulate", str(cfg), "--seed", "2", "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "fig3c.csv").read_bytes() != (tmp_path / "b" / "fig3c.csv").read_bytes()

    def test_validation_exit_code(self, tmp_path, capsys):
        cfg = write(tmp_path, "parameters:\n  fill_factor: 1.3\n")
        assert main(["simulate", str(cfg)]) == 1
        record = json.loads(capsys.readouterr().err)
        assert record["kind"] == "validation"
        assert any("fill_factor" in v for v in record["violations"])

    def test_missing_file_is_a_validation_error(self, tmp_path):
        assert main(["simulate", str(tmp_path / "missing.yaml")]) == 1

    def test_runtime_exit_code(self, tmp_path, capsys):
        # a lossless single atom on resonance has t = 0 and no transfer matrix
        cfg = write(tmp_path, "parameters:\n  n_atoms: 1\n  n_chains: 1\n  gamma_prime: 0\n"
                              "  detuning_min_mhz: -1\n  detuning_max_mhz: 1\n")
        assert main(["simulate", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert json.loads(capsys.readouterr().err)["kind"] == "runtime"

    def test_preset_list(self, capsys):
        assert main(["preset", "list"]) == 0
        listed = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
        assert listed == list(PRESETS)
        assert set(listed) == {"fig1c", "fig1d", "fig3c", "fig3d", "fig4-inset", "fig5b",
                               "figS2", "figS3", "figS5"}

    def test_preset_show(self, capsys):
        assert main(["preset", "show", "fig3c"]) == 0
        assert "gamma_1d: 0.007" in capsys.readouterr().out
        assert main(["preset", "show", "nope"]) == 1

    def test_oracle_check(self, capsys):
        assert main(["oracle", "check", "--instances", "50"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["pass"] is True
        assert record["max_abs_deviation"] < 1e-10

    def test_cli_overrides_document(self, tmp_path):
        cfg = write(tmp_path, self.CONFIG + "output: ignored\nseed: 1\n")
        assert main(["simulate", str(cfg), "--seed", "9", "--out", str(tmp_path / "x")]) == 0
        meta = json.loads((tmp_path / "x" / "fig3c.meta.json").read_text())
        assert meta["seed"] == 9
        assert not (tmp_path / "ignored").exists()

    def test_unsupported_format(self, tmp_path):
        cfg = write(tmp_path, self.CONFIG)
        assert main(["simulate", str(cfg), "--format", "parquet"]) == 1


def test_table_precision_round_trips(tmp_path):
    cfg = build_config({"scenario": "fig3d", "output": str(tmp_path),
                        "parameters": {"n_realizations": 2}})
    plan = cfg.runs[0].to_plan(cfg.constants, 0)
    run(cfg)
    cols = read_table(tmp_path / "fig3d.csv")
    assert np.array_equal(np.array(cols["r_mean"]), run_sweep(plan).r_mean)
    assert not any(math.isnan(x) for x in cols["t_std"])
