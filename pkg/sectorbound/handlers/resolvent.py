from __future__ import annotations

import argparse
import logging
from pathlib import Path

from sectorbound.errors import EXIT_CHECK_FAILED, EXIT_OK
from sectorbound.models import ProblemConfig, RunConfig, load_model
from sectorbound.services.resolvent_calculus import ray_scan
from sectorbound.utils.parsing import parse_angle
from sectorbound.utils.reports import write_csv, write_json, write_workbook

logger = logging.getLogger(__name__)

SCAN_HEADER = ("re_lambda", "im_lambda", "resolvent_norm", "bound")
DEFAULT_THETA = "pi/2"


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("resolvent", parents=parents, help="scan resolvent norms along rays")
    parser.add_argument("config_path", type=Path, help="problem config JSON (grid, mu, dirichlet)")
    parser.set_defaults(handler=run)


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    form = load_model(args.config_path, ProblemConfig).to_problem().assemble()
    angles = form.field_angles
    theta = parse_angle(run_config.theta or DEFAULT_THETA, kappa=angles.kappa)
    logger.info(
        f"🔭 Scanning {run_config.n_rays} rays x {len(run_config.radii)} radii at theta={theta:.6g} "
        f"(kappa={angles.kappa:.6g})"
    )
    scan = ray_scan(form, theta, run_config.n_rays, run_config.radii)

    out = run_config.out_dir
    rows = scan.rows()
    write_csv(out / "scan.csv", SCAN_HEADER, rows)
    report = {
        "theta": scan.theta,
        "constant": scan.bound_constant,
        "max_violation": scan.max_violation,
        "pass": scan.passed,
        "m": angles.m,
        "M": angles.M,
        "kappa": angles.kappa,
    }
    write_json(out / "report.json", report)
    if run_config.xlsx:
        write_workbook(
            out / "resolvent.xlsx",
            {"scan": (SCAN_HEADER, rows), "report": (("quantity", "value"), list(report.items()))},
        )
    logger.info(f"📁 scan.csv and report.json written to {out}")

    if not scan.passed:
        logger.error(f"❌ Resolvent bound violated by {scan.max_violation:.6g}")
        return EXIT_CHECK_FAILED
    return EXIT_OK
