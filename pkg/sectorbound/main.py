from __future__ import annotations

import argparse
import logging
import sys
from datetime import datetime
from typing import Optional, Sequence

from pydantic import ValidationError

from sectorbound import __version__
from sectorbound.config import load_config
from sectorbound.errors import EXIT_USAGE, SectorboundError
from sectorbound.handlers import angles, assemble, calculus, fov, resolvent, selftest
from sectorbound.models import RunConfig

logger = logging.getLogger(__name__)

COMMANDS = (angles, fov, assemble, resolvent, calculus, selftest)


class ColorFormatter(logging.Formatter):
    COLORS = {
        "DEBUG": "\033[94m",
        "INFO": "\033[92m",
        "WARNING": "\033[93m",
        "ERROR": "\033[91m",
        "CRITICAL": "\033[95m",
    }
    RESET = "\033[0m"
    BOLD = "\033[1m"

    def format(self, record: logging.LogRecord) -> str:
        level = record.levelname
        color = self.COLORS.get(level, "")
        colored_level = f"{color}{self.BOLD}{level}{self.RESET}" if color else level
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")

        parts = [f"[{timestamp}]", f"{colored_level:8}", "│"]
        if record.module and record.funcName:
            parts.append(f"{record.module}.{record.funcName}")
        if record.lineno:
            parts.append(f"(line {record.lineno})")
        parts.append("│")
        parts.append(record.getMessage())

        if record.exc_info:
            exc_text = self.formatException(record.exc_info)
            parts.append(f"\n{'─' * 80}\n{exc_text}")
        return " ".join(parts)


def setup_logging(level: str) -> None:
    # stderr keeps stdout free for the printed tables
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColorFormatter())
    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()
    root.addHandler(handler)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: SECTORBOUND_OUT_DIR)")
    common.add_argument("--n-angles", type=int, help="support-function angles for numerical range sweeps")
    common.add_argument("--n-rays", type=int, help="rays per resolvent scan")
    common.add_argument("--radii", help="resolvent scan radii as MIN:MAX:COUNT, log-spaced")
    common.add_argument("--theta", help='sector half-angle: "1.2", "pi/2", "kappa+0.3"')
    common.add_argument("--p", help="comma-separated L_p exponents in (1, inf)")
    common.add_argument("--eps", type=float, help="calculus sector widening in radians")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--n-boundary", type=int, help="boundary samples per ray for sup |f|")
    common.add_argument("--shift", type=float, help="delta added to operators without Dirichlet nodes")
    common.add_argument("--xlsx", action="store_true", help="also write the tables as an Excel workbook")
    common.add_argument("--log-level", help="overrides LOG_LEVEL")

    parser = argparse.ArgumentParser(
        prog="sectorbound",
        description="Sharp numerical-range sector angles for non-symmetric elliptic forms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers, [common])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        config = load_config()
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        setup_logging((args.log_level or config.log_level).upper())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        run_config = RunConfig.from_args(args, config)
    except (ValidationError, ValueError) as exc:
        logger.error(f"❌ Invalid options: {exc}")
        return EXIT_USAGE

    logger.info(f"🚀 sectorbound {run_config.command} → {run_config.out_dir}")
    try:
        code = args.handler(run_config, args)
    except SectorboundError as exc:
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        return exc.exit_code
    logger.info(f"✅ Finished {run_config.command} with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
