"""Tests for the sweep module."""

import hashlib
import json

import pandas
import pytest

from grunstab import constants
from grunstab import environment
from grunstab import errors
from grunstab import stability
from grunstab import sweep


def polygon_config(tmp_path, **changes) -> sweep.SweepConfig:
    """Return a small random polygon sweep that writes into the temporary directory."""
    data = {
        "family": "random_polygon",
        "dim": 2,
        "count": 6,
        "seed": 7,
        "output": str(tmp_path / "polygons.csv"),
    }
    data.update(changes)
    return sweep.config_from_dict(data)


def test_config_defaults(tmp_path):
    """Check the defaults of the optional entries."""
    config = polygon_config(tmp_path)
    assert config.workers == 1
    assert config.plane == constants.sweep.Plane_Axis
    assert config.epsilon_list == ()


@pytest.mark.parametrize(
    "changes",
    [
        {"family": "random_ellipsoid"},
        {"dim": 3},
        {"dim": "two"},
        {"count": 0},
        {"workers": 0},
        {"plane": "diagonal"},
        {"output": ""},
        {"family": "perturbed_cone", "epsilon_list": []},
        {"family": "perturbed_cone", "epsilon_list": [0.1, -0.1]},
        {"family": "random_polytope", "dim": 6},
        {"family": "random_polytope", "dim": 3, "vertices": 3},
    ],
)
def test_config_rejects_invalid_entries(tmp_path, changes):
    """Check that every invalid entry is a configuration error."""
    with pytest.raises(errors.ConfigError):
        polygon_config(tmp_path, **changes)


def test_read_config_turns_input_errors_into_config_errors(tmp_path):
    """Check that a missing or malformed file is a configuration error."""
    with pytest.raises(errors.ConfigError):
        sweep.read_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"family": ')
    with pytest.raises(errors.ConfigError):
        sweep.read_config(broken)
    valid = tmp_path / "valid.json"
    valid.write_text(json.dumps({"family": "random_polygon", "dim": 2, "output": "out.csv"}))
    assert sweep.read_config(valid).count == 1


def test_seed_override_from_the_environment(tmp_path, monkeypatch):
    """Check that GRUNBAUM_SEED replaces the configured seed."""
    config = polygon_config(tmp_path)
    monkeypatch.setenv(constants.environment.Seed, "123")
    assert sweep.apply_seed_override(config, environment.get_seed_override()).seed == 123
    monkeypatch.setenv(constants.environment.Seed, "abc")
    with pytest.raises(errors.ConfigError):
        environment.get_seed_override()
    monkeypatch.delenv(constants.environment.Seed)
    assert sweep.apply_seed_override(config, environment.get_seed_override()) == config


def test_perturbed_cone_sweep_at_zero_is_exact(tmp_path):
    """Check that epsilon zero gives a row with no gap."""
    config = sweep.config_from_dict(
        {
            "family": "perturbed_cone",
            "dim": 2,
            "epsilon_list": [0.0, 0.1],
            "output": str(tmp_path / "cone.csv"),
        }
    )
    table, reports = sweep.run_sweep(config)
    assert len(table) == 2
    assert table["epsilon"].tolist() == [0.0, 0.1]
    assert abs(table["gap"][0]) <= 1e-9
    assert table["errors"].tolist() == ["", ""]
    assert all(stability.report_passed(report) for report in reports)


def test_sweep_table_has_the_fixed_header(tmp_path):
    """Check the column layout of the sweep table."""
    table, _ = sweep.run_sweep(polygon_config(tmp_path))
    assert list(table.columns) == sweep.report_columns()
    assert table.columns[0] == constants.sweep.Format_Version
    assert table["index"].tolist() == list(range(6))
    assert table["passed"].all()


def test_sweep_is_byte_identical_across_runs_and_workers(tmp_path):
    """Check that the CSV depends only on the configuration."""
    first = polygon_config(tmp_path, output=str(tmp_path / "first.csv"))
    second = polygon_config(tmp_path, output=str(tmp_path / "second.csv"), workers=2)
    sweep.save_sweep(first, sweep.run_sweep(first)[0])
    sweep.save_sweep(second, sweep.run_sweep(second)[0])
    assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()


def test_sweep_with_random_planes_in_three_dimensions(tmp_path):
    """Check a random polytope sweep with random centroid planes."""
    config = polygon_config(tmp_path, family="random_polytope", dim=3, count=3, plane="random", vertices=10)
    table, reports = sweep.run_sweep(config)
    assert len(table) == 3
    assert len(reports) == 3
    assert (table["n"] == 3).all()


def test_run_task_records_errors_in_the_row(tmp_path):
    """Check that a failing body leaves a row with its error."""
    config = polygon_config(tmp_path)
    task = next(iter(sweep.create_tasks(config)))
    broken = sweep.SweepTask(
        index=task.index, family=task.family, epsilon=None, body=task.body, plane=None, problem="DegenerateBody: flat"
    )
    row, report = sweep.run_task(broken)
    assert report is None
    assert row["errors"] == "DegenerateBody: flat"


@pytest.mark.slow
def test_hundred_random_polygons_pass(tmp_path):
    """Check one hundred seeded polygons in a sweep."""
    config = polygon_config(tmp_path, count=100, workers=2)
    table, reports = sweep.run_sweep(config)
    sweep.save_sweep(config, table)
    saved = pandas.read_csv(config.output)
    assert len(saved) == 100
    assert len(reports) == 100
    assert all(stability.report_passed(report) for report in reports)


@pytest.mark.slow
def test_random_polygon_csv_is_reproducible(tmp_path):
    """Check that the seed 7 sweep of one hundred polygons writes the same bytes every time."""
    digests = []
    for workers in (1, 2, 1):
        output = str(tmp_path / f"run{len(digests)}.csv")
        config = polygon_config(tmp_path, count=100, workers=workers, output=output)
        table, _ = sweep.run_sweep(config)
        sweep.save_sweep(config, table)
        digests.append(hashlib.sha256(config.output.read_bytes()).hexdigest())
    assert len(set(digests)) == 1
    assert len(pandas.read_csv(tmp_path / "run0.csv")) == 100
