from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv


BASE_DIR = Path(__file__).resolve().parent.parent


@dataclass(frozen=True)
class Config:
    log_level: str
    out_dir: Path
    n_angles: int
    n_rays: int
    radii: str  # MIN:MAX:COUNT, log-spaced
    n_boundary: int
    eps: float
    seed: int
    shift: float  # δ for operators without Dirichlet nodes


def _env_number(name: str, default: str, cast: type[int] | type[float]) -> int | float:
    raw = os.getenv(name, default).strip()
    try:
        return cast(raw)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be a number, got {raw!r}") from exc


def load_config() -> Config:
    load_dotenv(BASE_DIR / ".env")
    log_level = os.getenv("LOG_LEVEL", "INFO").strip().upper()
    out_dir = Path(os.getenv("SECTORBOUND_OUT_DIR", "out"))
    radii = os.getenv("SECTORBOUND_RADII", "1e-2:1e4:12").strip()

    return Config(
        log_level=log_level,
        out_dir=out_dir,
        n_angles=int(_env_number("SECTORBOUND_N_ANGLES", "720", int)),
        n_rays=int(_env_number("SECTORBOUND_N_RAYS", "9", int)),
        radii=radii,
        n_boundary=int(_env_number("SECTORBOUND_N_BOUNDARY", "2000", int)),
        eps=float(_env_number("SECTORBOUND_EPS", "0.05", float)),
        seed=int(_env_number("SECTORBOUND_SEED", "0", int)),
        shift=float(_env_number("SECTORBOUND_SHIFT", "1.0", float)),
    )
