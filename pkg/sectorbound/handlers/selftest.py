from __future__ import annotations

import argparse
import logging

from sectorbound.errors import EXIT_CHECK_FAILED, EXIT_OK
from sectorbound.models import RunConfig
from sectorbound.services.acceptance import run_acceptance
from sectorbound.utils.reports import write_csv

logger = logging.getLogger(__name__)

HEADER = ("check", "pass", "seconds", "detail")


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("selftest", parents=parents, help="run the acceptance checks")
    parser.set_defaults(handler=run)


def run(run_config: RunConfig, args: argparse.Namespace) -> int:
    results = run_acceptance(run_config.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.seconds:7.2f}s  {r.detail}")

    rows = [(r.name, r.passed, f"{r.seconds:.3f}", r.detail) for r in results]
    path = write_csv(run_config.out_dir / "selftest.csv", HEADER, rows)
    logger.info(f"📁 Self-test table written to {path}")

    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"❌ Failed checks: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    logger.info(f"✅ All {len(results)} checks passed")
    return EXIT_OK
