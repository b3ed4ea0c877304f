from __future__ import annotations

import argparse
import logging
import math

from sectorbound.errors import EXIT_OK
from sectorbound.models import RunConfig
from sectorbound.services.sector_core import SectorAngles, kappa_p
from sectorbound.utils.parsing import parse_float
from sectorbound.utils.reports import render_csv, write_csv

logger = logging.getLogger(__name__)

HEADER = ("quantity", "value")


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("angles", parents=parents, help="sharp and classical sector angles for (m, M)")
    parser.add_argument("m", type=parse_float, help="coercivity bound, 0 < m")
    parser.add_argument("M", type=parse_float, help="boundedness bound, M >= m")
    parser.set_defaults(handler=run)


def kappa_p_rows(kappa: float, p_values: list[float]) -> list[tuple[str, float]]:
    rows = []
    for p in p_values:
        label = "kappa_inf (limit, excluded)" if math.isinf(p) else f"kappa_{p:g}"
        rows.append((label, kappa_p(kappa, p)))
    return rows


def angle_rows(m: float, M: float, p_values: list[float]) -> list[tuple[str, float]]:
    angles = SectorAngles.from_bounds(m, M)
    rows = [("m", m), ("M", M), ("classical", angles.classical), ("kappa", angles.kappa)]
    return rows + kappa_p_rows(angles.kappa, p_values)


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    rows = angle_rows(args.m, args.M, run_config.p_values)
    print(render_csv(HEADER, rows), end="")
    path = write_csv(run_config.out_dir / "angles.csv", HEADER, rows)
    logger.info(f"📁 Angles written to {path}")
    return EXIT_OK
