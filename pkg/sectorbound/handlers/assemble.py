from __future__ import annotations

import argparse
import logging
from pathlib import Path

from sectorbound.errors import EXIT_OK
from sectorbound.handlers.angles import kappa_p_rows
from sectorbound.models import MatrixPayload, ProblemConfig, RunConfig, load_model
from sectorbound.services.elliptic import AssembledForm
from sectorbound.utils.reports import write_csv, write_json, write_workbook

logger = logging.getLogger(__name__)

HEADER = ("quantity", "value")


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("assemble", parents=parents, help="assemble the P1 operator of a problem config")
    parser.add_argument("config_path", type=Path, help="problem config JSON (grid, mu, dirichlet)")
    parser.set_defaults(handler=run)


def form_rows(form: AssembledForm, p_values: list[float]) -> list[tuple[str, object]]:
    """field_bounds table; L_p angles only make sense for real coefficients."""
    angles = form.field_angles
    rows: list[tuple[str, object]] = [
        ("m", angles.m),
        ("M", angles.M),
        ("classical", angles.classical),
        ("kappa", angles.kappa),
        ("n_nodes", form.grid.n_nodes),
        ("n_free", int(form.free_nodes.shape[0])),
        ("real_coefficients", form.real_coefficients),
    ]
    if form.real_coefficients:
        rows += kappa_p_rows(angles.kappa, p_values)
    return rows


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    problem = load_model(args.config_path, ProblemConfig).to_problem()
    form = problem.assemble()
    matrix = form.operator()
    logger.info(f"🧮 Assembled {matrix.shape[0]} free nodes on a {form.grid.nx}x{form.grid.ny} grid")

    out = run_config.out_dir
    write_json(out / "matrix.json", MatrixPayload.from_matrix(matrix).model_dump())
    rows = form_rows(form, run_config.p_values)
    write_csv(out / "angles.csv", HEADER, rows)
    if run_config.xlsx:
        write_workbook(out / "assemble.xlsx", {"angles": (HEADER, rows)})
    if form.needs_shift:
        logger.warning("⚠️ No Dirichlet nodes: the operator is singular, shift it before calculus checks")
    logger.info(f"📁 matrix.json and angles.csv written to {out}")
    return EXIT_OK
