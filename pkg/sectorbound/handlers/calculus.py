from __future__ import annotations

import argparse
import logging
from pathlib import Path

from sectorbound.errors import EXIT_CHECK_FAILED, EXIT_OK
from sectorbound.models import MatrixPayload, RunConfig, load_model, parse_problem, read_json
from sectorbound.services.numerics import ComplexMatrix
from sectorbound.services.resolvent_calculus import RATIONAL_FUNCTIONS, rational_calculus_check
from sectorbound.services.sector_core import matrix_angles
from sectorbound.utils.reports import write_json

logger = logging.getLogger(__name__)

DEFAULT_FUNCTION = "z/(1+z)^2"


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("calculus", parents=parents, help="check ||f(A)|| against the sector sup of |f|")
    parser.add_argument("input_path", type=Path, help="problem config JSON or matrix JSON")
    parser.add_argument("--f", dest="f_id", choices=sorted(RATIONAL_FUNCTIONS), default=DEFAULT_FUNCTION)
    parser.set_defaults(handler=run)


def load_operator(path: Path, shift: float) -> tuple[ComplexMatrix, float, float]:
    """(A, kappa, applied shift); problem configs without Dirichlet nodes get A + shift * I."""
    payload = read_json(path)
    if isinstance(payload, dict) and "grid" in payload:
        form = parse_problem(payload, path).to_problem().assemble()
        applied = shift if form.needs_shift else 0.0
        return form.operator(applied), form.field_angles.kappa, applied
    matrix = load_model(path, MatrixPayload).to_matrix()
    return matrix, matrix_angles(matrix).kappa, 0.0


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    matrix, kappa, shift = load_operator(args.input_path, run_config.shift)
    if shift:
        logger.info(f"➕ No Dirichlet nodes, checking A + {shift:g} I")
    report = rational_calculus_check(matrix, kappa, run_config.eps, args.f_id, run_config.n_boundary, run_config.n_angles)

    path = write_json(
        run_config.out_dir / "report.json",
        {
            "f": report.f_id,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "boundary_sup": report.boundary_sup,
            "kappa": report.kappa,
            "eps": report.eps,
            "shift": shift,
            "pass": report.passed,
        },
    )
    logger.info(f"📁 Report written to {path}")
    if not report.passed:
        logger.error(f"❌ ||f(A)|| = {report.lhs:.6g} exceeds {report.rhs:.6g}")
        return EXIT_CHECK_FAILED
    logger.info(f"✅ ||f(A)|| = {report.lhs:.6g} <= {report.rhs:.6g}")
    return EXIT_OK
