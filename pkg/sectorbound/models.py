from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Any, Literal, Optional, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, ValidationError, field_validator, model_validator

from sectorbound.config import Config
from sectorbound.errors import DomainError
from sectorbound.services.elliptic import BoundarySpec, CoefficientField, EllipticProblem, Grid
from sectorbound.services.numerics import ComplexMatrix, as_matrix
from sectorbound.utils.parsing import parse_angle, parse_p_list, parse_radii


ComplexEntry = Union[FiniteFloat, tuple[FiniteFloat, FiniteFloat]]
Interval = tuple[FiniteFloat, FiniteFloat]
ModelT = TypeVar("ModelT", bound=BaseModel)


def _to_complex(entry: ComplexEntry) -> complex:
    if isinstance(entry, tuple):
        return complex(entry[0], entry[1])
    return complex(entry)


def _to_2x2(rows: list[list[ComplexEntry]]) -> list[list[complex]]:
    if len(rows) != 2 or any(len(row) != 2 for row in rows):
        raise ValueError("coefficient matrices must be 2x2")
    return [[_to_complex(entry) for entry in row] for row in rows]


class MatrixPayload(BaseModel):
    """Matrix JSON: {"n": int, "entries": [[re, im], ...]} row-major."""

    n: int = Field(ge=1)
    entries: list[tuple[FiniteFloat, FiniteFloat]]

    @model_validator(mode="after")
    def validate_size(self) -> MatrixPayload:
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries for n={self.n}, got {len(self.entries)}")
        return self

    def to_matrix(self) -> ComplexMatrix:
        values = np.array([complex(re, im) for re, im in self.entries], dtype=np.complex128)
        return as_matrix(values.reshape(self.n, self.n))

    @classmethod
    def from_matrix(cls, matrix: ComplexMatrix) -> MatrixPayload:
        flat = np.asarray(matrix, dtype=np.complex128).ravel()
        return cls(n=matrix.shape[0], entries=[(float(z.real), float(z.imag)) for z in flat])


class GridConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    nx: int = Field(ge=1)
    ny: int = Field(ge=1)
    lx: FiniteFloat = Field(default=1.0, gt=0, alias="Lx")
    ly: FiniteFloat = Field(default=1.0, gt=0, alias="Ly")

    def to_grid(self) -> Grid:
        return Grid(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)


class MuConfig(BaseModel):
    kind: Literal["constant", "table", "closed_form"]
    matrix: Optional[list[list[ComplexEntry]]] = None
    cells: Optional[list[list[list[ComplexEntry]]]] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def validate_kind_fields(self) -> MuConfig:
        required = {"constant": self.matrix, "table": self.cells, "closed_form": self.name}
        if required[self.kind] is None:
            field_name = {"constant": "matrix", "table": "cells", "closed_form": "name"}[self.kind]
            raise ValueError(f"mu of kind {self.kind!r} needs {field_name!r}")
        if self.matrix is not None:
            _to_2x2(self.matrix)
        for cell in self.cells or []:
            _to_2x2(cell)
        return self

    def to_field(self) -> CoefficientField:
        if self.kind == "constant":
            return CoefficientField.constant(_to_2x2(self.matrix))
        if self.kind == "table":
            return CoefficientField.from_table([_to_2x2(cell) for cell in self.cells])
        return CoefficientField.closed_form(self.name)


class DirichletConfig(BaseModel):
    left: list[Interval] = []
    right: list[Interval] = []
    bottom: list[Interval] = []
    top: list[Interval] = []

    @field_validator("left", "right", "bottom", "top")
    @classmethod
    def validate_intervals(cls, value: list[Interval]) -> list[Interval]:
        for a, b in value:
            if not 0.0 <= a <= b <= 1.0:
                raise ValueError(f"interval [{a}, {b}] must satisfy 0 <= a <= b <= 1")
        return value

    def to_boundary(self) -> BoundarySpec:
        return BoundarySpec.from_sides(left=self.left, right=self.right, bottom=self.bottom, top=self.top)


class ProblemConfig(BaseModel):
    grid: GridConfig
    mu: MuConfig
    dirichlet: DirichletConfig = Field(default_factory=DirichletConfig)

    def to_problem(self) -> EllipticProblem:
        return EllipticProblem(grid=self.grid.to_grid(), mu=self.mu.to_field(), bc=self.dirichlet.to_boundary())


class RunConfig(BaseModel):
    command: str
    out_dir: Path
    n_angles: int = Field(ge=8)
    n_rays: int = Field(ge=1)
    radii: list[float] = Field(min_length=1)
    theta: Optional[str] = None
    p_values: list[float] = []
    eps: float = Field(gt=0)
    seed: int = Field(ge=0)
    n_boundary: int = Field(ge=2)
    shift: float = Field(gt=0)
    xlsx: bool = False

    @field_validator("radii", mode="before")
    @classmethod
    def validate_radii(cls, value: Any) -> list[float]:
        return parse_radii(value) if isinstance(value, str) else value

    @field_validator("theta")
    @classmethod
    def validate_theta(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            parse_angle(value, kappa=0.0)
        return value

    @field_validator("p_values", mode="before")
    @classmethod
    def validate_p_values(cls, value: Any) -> list[float]:
        return parse_p_list(value) if isinstance(value, str) else value

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: Config) -> RunConfig:
        """CLI flags over Config defaults."""

        def pick(name: str, default: Any) -> Any:
            value = getattr(args, name, None)
            return default if value is None else value

        return cls(
            command=args.command,
            out_dir=pick("out", config.out_dir),
            n_angles=pick("n_angles", config.n_angles),
            n_rays=pick("n_rays", config.n_rays),
            radii=pick("radii", config.radii),
            theta=pick("theta", None),
            p_values=pick("p", []),
            eps=pick("eps", config.eps),
            seed=pick("seed", config.seed),
            n_boundary=pick("n_boundary", config.n_boundary),
            shift=pick("shift", config.shift),
            xlsx=bool(getattr(args, "xlsx", False)),
        )


def read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read JSON from {path}: {exc}") from exc


def load_model(path: Path, model: type[ModelT]) -> ModelT:
    """Read and validate a JSON file; validation problems surface as DomainError."""
    try:
        return model.model_validate(read_json(path))
    except ValidationError as exc:
        raise DomainError(f"invalid {model.__name__} in {path}: {exc}") from exc


def load_matrix(path: Path) -> ComplexMatrix:
    return load_model(path, MatrixPayload).to_matrix()


def parse_problem(payload: Any, source: Path) -> ProblemConfig:
    try:
        return ProblemConfig.model_validate(payload)
    except ValidationError as exc:
        raise DomainError(f"invalid ProblemConfig in {source}: {exc}") from exc
