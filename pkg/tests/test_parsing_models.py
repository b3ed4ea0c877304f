import argparse
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from sectorbound.config import Config, load_config
from sectorbound.errors import DomainError
from sectorbound.models import (
    DirichletConfig,
    MatrixPayload,
    MuConfig,
    ProblemConfig,
    RunConfig,
    load_matrix,
    load_model,
)
from sectorbound.utils.parsing import parse_angle, parse_float, parse_p_list, parse_radii
from sectorbound.utils.reports import format_number, render_csv
from tests.conftest import SKEW


def make_config(**overrides) -> Config:
    values = dict(
        log_level="INFO",
        out_dir="out",
        n_angles=720,
        n_rays=9,
        radii="1e-2:1e4:12",
        n_boundary=2000,
        eps=0.05,
        seed=0,
        shift=1.0,
    )
    values.update(overrides)
    return Config(**values)


def test_parse_float():
    assert parse_float(" 2.5 ") == 2.5
    assert parse_float("inf") == math.inf
    with pytest.raises(ValueError):
        parse_float("nan")
    with pytest.raises(ValueError):
        parse_float("")


def test_parse_p_list():
    assert parse_p_list("2, 4,1.5") == [2.0, 4.0, 1.5]
    assert parse_p_list("inf") == [math.inf]
    assert parse_p_list("") == []
    with pytest.raises(ValueError, match=r"\(1, inf\)"):
        parse_p_list("2,1")


def test_parse_radii():
    radii = parse_radii("1e-2:1e4:12")
    assert len(radii) == 12
    assert radii[0] == pytest.approx(1e-2)
    assert radii[-1] == pytest.approx(1e4)
    assert parse_radii("3:3:1") == [3.0]
    for bad in ("1:2", "0:1:3", "2:1:3", "1:2:0"):
        with pytest.raises(ValueError):
            parse_radii(bad)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1.2", 1.2),
        ("pi", math.pi),
        ("pi/2", math.pi / 2),
        ("kappa", 0.5),
        ("kappa+0.3", 0.8),
        ("kappa - 0.01", 0.49),
        ("kappa+pi/8", 0.5 + math.pi / 8),
    ],
)
def test_parse_angle(text, expected):
    assert parse_angle(text, kappa=0.5) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", "tau", "kappa*2", "pi/x", "1.2.3", "pi/0"])
def test_parse_angle_rejects(text):
    with pytest.raises(DomainError):
        parse_angle(text, kappa=0.5)


def test_parse_angle_needs_kappa():
    with pytest.raises(DomainError, match="refers to kappa"):
        parse_angle("kappa+0.1")


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_csv_numbers_round_trip(value):
    assert float(format_number(value)) == value


def test_render_csv():
    text = render_csv(("quantity", "value"), [("kappa", math.pi / 4), ("real_coefficients", True)])
    assert text == f"quantity,value\nkappa,{math.pi / 4:.17g}\nreal_coefficients,1\n"


def test_matrix_payload_round_trip(rng, tmp_path):
    t = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps(MatrixPayload.from_matrix(t).model_dump()))
    np.testing.assert_array_equal(load_matrix(path), t)


def test_matrix_payload_checks_size():
    with pytest.raises(ValidationError, match="expected 4 entries"):
        MatrixPayload(n=2, entries=[(1.0, 0.0)])


def test_load_model_reports_domain_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(DomainError, match="cannot read JSON"):
        load_model(broken, MatrixPayload)
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"n": 2, "entries": [[1, 0]]}))
    with pytest.raises(DomainError, match="invalid MatrixPayload"):
        load_model(invalid, MatrixPayload)


def test_problem_config_builds_problem(skew_config):
    problem = ProblemConfig.model_validate(skew_config).to_problem()
    assert problem.grid.nx == 6
    assert problem.bc.dirichlet_nodes(problem.grid).shape[0] == 24
    np.testing.assert_array_equal(problem.mu.matrix, np.array(SKEW))


def test_grid_config_accepts_aliases():
    config = ProblemConfig.model_validate(
        {"grid": {"nx": 2, "ny": 3, "Lx": 2.0, "ly": 0.5}, "mu": {"kind": "closed_form", "name": "identity"}}
    )
    assert (config.grid.lx, config.grid.ly) == (2.0, 0.5)
    assert config.dirichlet.to_boundary().is_empty


def test_mu_config_complex_entries():
    field = MuConfig(kind="constant", matrix=[[2, [0, 1]], [[0, 1], 2]]).to_field()
    np.testing.assert_array_equal(field.matrix, [[2, 1j], [1j, 2]])


@pytest.mark.parametrize(
    "payload",
    [
        {"kind": "constant"},
        {"kind": "table", "matrix": [[1, 0], [0, 1]]},
        {"kind": "constant", "matrix": [[1, 0, 0], [0, 1, 0]]},
        {"kind": "closed_form"},
        {"kind": "polynomial", "name": "x"},
    ],
)
def test_mu_config_rejects(payload):
    with pytest.raises(ValidationError):
        MuConfig.model_validate(payload)


def test_dirichlet_config_rejects_bad_interval():
    with pytest.raises(ValidationError):
        DirichletConfig(left=[(0.5, 1.5)])


def test_run_config_merges_flags_over_config():
    args = argparse.Namespace(command="resolvent", out="results", n_rays=3, radii="1:10:2", theta="kappa+0.2", p=None)
    run = RunConfig.from_args(args, make_config())
    assert run.out_dir.name == "results"
    assert run.n_rays == 3
    assert run.radii == pytest.approx([1.0, 10.0])
    assert run.n_angles == 720
    assert run.theta == "kappa+0.2"
    assert run.p_values == []


@pytest.mark.parametrize(
    "overrides",
    [{"n_angles": 4}, {"eps": 0.0}, {"radii": "1:2"}, {"theta": "tau"}, {"p": "0.5"}, {"shift": -1.0}],
)
def test_run_config_rejects(overrides):
    args = argparse.Namespace(command="angles", **overrides)
    with pytest.raises(ValidationError):
        RunConfig.from_args(args, make_config())


def test_load_config_reads_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("SECTORBOUND_N_ANGLES", "90")
    monkeypatch.setenv("SECTORBOUND_OUT_DIR", str(tmp_path))
    monkeypatch.setenv("LOG_LEVEL", "debug")
    config = load_config()
    assert config.n_angles == 90
    assert config.out_dir == tmp_path
    assert config.log_level == "DEBUG"


def test_load_config_rejects_bad_number(monkeypatch):
    monkeypatch.setenv("SECTORBOUND_EPS", "small")
    with pytest.raises(RuntimeError, match="SECTORBOUND_EPS"):
        load_config()
