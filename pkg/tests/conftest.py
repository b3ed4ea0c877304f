from __future__ import annotations

import math

import numpy as np
import pytest

from sectorbound.services.elliptic import BoundarySpec, CoefficientField, Grid, assemble

SKEW = [[1.0, 1.0], [-1.0, 1.0]]
SQRT2 = math.sqrt(2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def skew_matrix() -> np.ndarray:
    return np.array(SKEW, dtype=np.complex128)


@pytest.fixture
def skew_dirichlet_form():
    return assemble(Grid(8, 8), CoefficientField.constant(SKEW), BoundarySpec.all_dirichlet())


@pytest.fixture
def skew_neumann_form():
    return assemble(Grid(4, 4), CoefficientField.constant(SKEW), BoundarySpec.neumann())


@pytest.fixture
def skew_config() -> dict:
    return {
        "grid": {"nx": 6, "ny": 6},
        "mu": {"kind": "constant", "matrix": SKEW},
        "dirichlet": {"left": [[0, 1]], "right": [[0, 1]], "bottom": [[0, 1]], "top": [[0, 1]]},
    }


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Run every test against the built-in defaults, not a developer's .env."""
    for name in (
        "LOG_LEVEL",
        "SECTORBOUND_OUT_DIR",
        "SECTORBOUND_N_ANGLES",
        "SECTORBOUND_N_RAYS",
        "SECTORBOUND_RADII",
        "SECTORBOUND_N_BOUNDARY",
        "SECTORBOUND_EPS",
        "SECTORBOUND_SEED",
        "SECTORBOUND_SHIFT",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("sectorbound.config.load_dotenv", lambda *args, **kwargs: False)
