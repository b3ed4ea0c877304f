from __future__ import annotations

import argparse
import logging
from pathlib import Path

from sectorbound.errors import EXIT_CHECK_FAILED, EXIT_OK, NotCoerciveError
from sectorbound.models import RunConfig, load_matrix
from sectorbound.services.fov import boundary_containment, fov_boundary
from sectorbound.services.sector_core import matrix_angles
from sectorbound.utils.charts import build_fov_chart
from sectorbound.utils.parsing import parse_angle
from sectorbound.utils.reports import atomic_write_bytes, write_csv, write_json, write_workbook

logger = logging.getLogger(__name__)

BOUNDARY_HEADER = ("phi", "support", "re", "im")


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("fov", parents=parents, help="trace the numerical range and check a sector")
    parser.add_argument("matrix_path", type=Path, help='matrix JSON {"n": ..., "entries": [[re, im], ...]}')
    parser.set_defaults(handler=run)


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    matrix = load_matrix(args.matrix_path)
    logger.info(f"🔢 Loaded {matrix.shape[0]}x{matrix.shape[0]} matrix from {args.matrix_path}")

    angles = None
    try:
        angles = matrix_angles(matrix)
    except NotCoerciveError:
        # an explicit numeric theta still works for non-coercive matrices
        if run_config.theta is None or "kappa" in run_config.theta.lower():
            raise
    theta_text = run_config.theta or "kappa"
    theta = parse_angle(theta_text, kappa=angles.kappa if angles else None)

    boundary = fov_boundary(matrix, run_config.n_angles)
    report = boundary_containment(boundary, theta)
    out = run_config.out_dir
    write_csv(out / "boundary.csv", BOUNDARY_HEADER, boundary.rows())
    chart = build_fov_chart(
        boundary,
        kappa=angles.kappa if angles else None,
        classical=angles.classical if angles else None,
        theta=theta,
    )
    atomic_write_bytes(out / "fov.svg", chart)

    payload = {"max_arg": report.max_arg, "theta": report.theta, "pass": report.passed}
    if angles is not None:
        payload.update({"m": angles.m, "M": angles.M, "kappa": angles.kappa, "classical": angles.classical})
    write_json(out / "report.json", payload)
    if run_config.xlsx:
        write_workbook(
            out / "fov.xlsx",
            {"boundary": (BOUNDARY_HEADER, boundary.rows()), "report": (("quantity", "value"), list(payload.items()))},
        )
    logger.info(f"📁 boundary.csv, fov.svg and report.json written to {out}")

    if not report.passed:
        logger.error(f"❌ Numerical range reaches arg {report.max_arg:.12g} > theta {theta:.12g}")
        return EXIT_CHECK_FAILED
    logger.info(f"✅ Numerical range inside the sector: max arg {report.max_arg:.12g} <= {theta:.12g}")
    return EXIT_OK
