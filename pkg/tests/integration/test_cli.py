import csv
import json
import logging

import pytest
from typer.testing import CliRunner

from beable_cli.core.config import CLIConfig, set_config
from beable_cli.core.manifest import read_manifest, sha256_file
from beable_cli.main import app

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_version():
    result = invoke("version")
    assert result.exit_code == 0
    assert "beablectl v" in result.output


def test_list_shows_every_experiment():
    result = invoke("list")
    assert result.exit_code == 0
    for name in ["spectrum", "doubling", "evolve", "equivariance", "nonlocality"]:
        assert name in result.output


def test_config_show():
    result = invoke("config", "show", "--experiment", "spectrum", "--format", "json")
    assert result.exit_code == 0
    assert '"sites": 32' in result.output


def test_config_show_unknown_experiment():
    result = invoke("config", "show", "--experiment", "teleport")
    assert result.exit_code == 1


def test_validate_accepts_a_good_file(tmp_path):
    path = write_config(tmp_path, {"seed": 9, "lattice": {"sites": 16}})
    result = invoke("config", "validate", path)
    assert result.exit_code == 0


def test_validate_rejects_unknown_keys(tmp_path):
    path = write_config(tmp_path, {"lattce": {"sites": 8}})
    result = invoke("config", "validate", path)
    assert result.exit_code == 1
    assert "lattce" in result.output


def test_validate_rejects_mismatched_quanta(tmp_path):
    path = write_config(tmp_path, {"lattice": {"sites": 8, "quanta": 2}})
    result = invoke("config", "validate", path)
    assert result.exit_code == 1


def test_validate_rejects_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"seed": 1,\n  "lattice": }')
    result = invoke("config", "validate", path)
    assert result.exit_code == 1


def test_spectrum_run_artifacts(tmp_path):
    result = invoke("spectrum", "--out-dir", tmp_path / "a")
    assert result.exit_code == 0, result.output

    run_dir = tmp_path / "a" / "spectrum"
    manifest = read_manifest(run_dir)
    assert manifest.status == "success"
    assert [c.status for c in manifest.checks] == ["PASS"]
    assert manifest.config["seed"] == 1234

    recorded = {f.path: f.sha256 for f in manifest.files}
    assert set(recorded) == {"spectrum_levels.csv", "spectrum_dispersion.csv", "schema.json"}
    for name, digest in recorded.items():
        assert sha256_file(run_dir / name) == digest

    schema = json.loads((run_dir / "schema.json").read_text())
    documented = {(c["file"], c["column"]) for c in schema["columns"]}
    for name in ["spectrum_levels.csv", "spectrum_dispersion.csv"]:
        rows = read_rows(run_dir / name)
        assert rows
        assert {(name, column) for column in rows[0]} <= documented

    levels = read_rows(run_dir / "spectrum_levels.csv")
    assert len(levels) == 32
    assert max(float(r["deviation"]) for r in levels) <= 1e-10


def test_verbose_run_prints_the_resolved_configuration(tmp_path):
    try:
        result = invoke("--verbose", "spectrum", "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        assert "Resolved configuration" in result.output
        quiet = invoke("spectrum", "--out-dir", tmp_path / "quiet")
        assert "Resolved configuration" not in quiet.output
    finally:
        set_config(CLIConfig())
        logging.getLogger().setLevel(logging.WARNING)


def test_runs_are_byte_identical(tmp_path):
    for out in ("first", "second"):
        assert invoke("spectrum", "--out-dir", tmp_path / out, "--seed", 5).exit_code == 0
    for name in ["spectrum_levels.csv", "spectrum_dispersion.csv", "schema.json"]:
        first = (tmp_path / "first" / "spectrum" / name).read_bytes()
        second = (tmp_path / "second" / "spectrum" / name).read_bytes()
        assert first == second


def test_doubling(tmp_path):
    result = invoke("doubling", "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    manifest = read_manifest(tmp_path / "doubling")
    assert {c.name for c in manifest.checks} >= {"positive_levels", "negative_levels", "staggered_multiplicity"}


def test_massless_doubling_leaves_level_counts_undefined(tmp_path):
    path = write_config(tmp_path, {"lattice": {"sites": 8, "mass": 0.0}, "packets": [{"center": 4.0, "width": 2.0}]})
    result = invoke("doubling", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    statuses = {c.name: c.status for c in read_manifest(tmp_path / "doubling").checks}
    assert statuses["positive_levels"] == "UNDEFINED"


def test_evolve_small(tmp_path):
    path = write_config(tmp_path, {"horizon": 2.0, "samples": 11})
    result = invoke("evolve", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    rows = read_rows(tmp_path / "evolve" / "evolve_timeline.csv")
    assert len(rows) == 11
    names = {c.name for c in read_manifest(tmp_path / "evolve").checks}
    assert {"hermiticity", "fock_oracle_agreement", "norm_drift", "energy_drift"} <= names


def test_trajectories(tmp_path):
    path = write_config(tmp_path, {"horizon": 0.5})
    result = invoke("trajectories", "--config", path, "--out-dir", tmp_path, "--threads", 2)
    assert result.exit_code == 0, result.output
    run_dir = tmp_path / "trajectories"
    paths = read_rows(run_dir / "trajectories_paths.csv")
    assert {r["trajectory"] for r in paths} == {"0", "1", "2", "3", "4"}
    assert (run_dir / "trajectories_jumps.csv").exists()


def test_master_equation_small(tmp_path):
    path = write_config(
        tmp_path,
        {
            "horizon": 1.0,
            "lattice": {"sites": 8, "quanta": 1},
            "packets": [{"center": 4.0, "width": 2.0, "momentum": 0.5}],
        },
    )
    result = invoke("master-equation", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    rows = read_rows(tmp_path / "master_equation" / "master_equation_residuals.csv")
    assert float(rows[-1]["time"]) == pytest.approx(1.0)


def test_quenched_master_equation_makes_no_claim(tmp_path):
    path = write_config(
        tmp_path,
        {
            "horizon": 1.0,
            "lattice": {"sites": 8, "quanta": 1},
            "packets": [{"center": 4.0, "width": 2.0, "momentum": 0.5}],
            "master": {"quench": 0.5},
        },
    )
    result = invoke("master-equation", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    manifest = read_manifest(tmp_path / "master_equation")
    assert [c.status for c in manifest.checks] == ["UNDEFINED"]
    assert manifest.diagnostics["initial_tv"] > 0.0
    rows = read_rows(tmp_path / "master_equation" / "master_equation_residuals.csv")
    assert float(rows[0]["tv_distance"]) == pytest.approx(manifest.diagnostics["initial_tv"])


def test_nonlocality_small(tmp_path):
    path = write_config(tmp_path, {"nonlocality": {"points": 64}})
    result = invoke("nonlocality", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    grid = read_rows(tmp_path / "nonlocality" / "nonlocality_grid.csv")
    assert len(grid) == 64 * 64


def test_commutator_check(tmp_path):
    result = invoke("commutator-check", "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    pairs = read_rows(tmp_path / "commutator_check" / "commutator_check_pair.csv")
    assert [r["smearing"] for r in pairs] == ["gaussian", "constant"]
    diagnostics = read_manifest(tmp_path / "commutator_check").diagnostics
    assert diagnostics["gaussian"]["pair_modulus"] > 1e-6
    assert diagnostics["constant"]["max_abs_commutator"] <= 1e-10


def test_velocity_table(tmp_path):
    result = invoke("velocity-table", "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    rows = read_rows(tmp_path / "velocity_table" / "velocity_table_velocities.csv")
    assert len(rows) == 10


def test_equivariance_checks_every_checkpoint(tmp_path):
    path = write_config(tmp_path, {"trajectories": {"count": 300}})
    result = invoke("equivariance", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code in (0, 2), result.output
    checks = {c.name: c for c in read_manifest(tmp_path / "equivariance").checks}
    for t in ("0.5", "1", "2"):
        assert f"tv_distance@t={t}" in checks
        z_check = checks[f"z_exceed@t={t}"]
        assert z_check.threshold == pytest.approx(0.01)
        assert z_check.comparison == "<"


def test_equivariance_with_mismatched_quanta(tmp_path):
    path = write_config(tmp_path, {"lattice": {"quanta": 2}})
    result = invoke("equivariance", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 1
    assert not (tmp_path / "equivariance").exists()


def test_missing_config_file(tmp_path):
    result = invoke("spectrum", "--config", tmp_path / "absent.json", "--out-dir", tmp_path)
    assert result.exit_code == 1


def test_failed_check_exits_two(tmp_path):
    path = write_config(tmp_path, {"master": {"tolerance": 1e-30}, "horizon": 0.2})
    result = invoke("master-equation", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 2
    manifest = read_manifest(tmp_path / "master_equation")
    assert manifest.status == "fail"
    assert [c.name for c in manifest.failed_checks] == ["master_equation_residual"]


def test_simulation_error_is_recorded(tmp_path):
    path = write_config(tmp_path, {"horizon": 1.0, "trajectories": {"dt": 1.0, "count": 50}})
    result = invoke("trajectories", "--config", path, "--out-dir", tmp_path)
    assert result.exit_code == 1
    manifest = read_manifest(tmp_path / "trajectories")
    assert manifest.status == "error"
    assert manifest.error["error"] == "RATE_STEP_OVERFLOW"
