"""
P1 assembly of a[u, v] = integral of mu grad(u) . conj(grad(v)) on a rectangle.

Nodes are numbered row-major with x fastest. Each cell is split by its
lower-left to upper-right diagonal into two counter-clockwise right triangles;
triangle ``2c`` and ``2c + 1`` belong to cell ``c = j * nx + i``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sectorbound.errors import DomainError, NotEllipticError, ShapeError
from sectorbound.services.numerics import (
    ComplexMatrix,
    ComplexVector,
    as_vector,
    hermitian_eigh_stack,
)
from sectorbound.services.sector_core import SectorAngles

logger = logging.getLogger(__name__)

Side = Literal["left", "right", "bottom", "top"]
FieldKind = Literal["constant", "table", "closed_form"]
ClosedForm = Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.complex128]]
NodalFunction = Callable[[NDArray[np.float64], NDArray[np.float64]], ArrayLike]

SIDES: tuple[Side, ...] = ("left", "right", "bottom", "top")
INTERVAL_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise DomainError(f"cell counts must be >= 1, got nx={self.nx}, ny={self.ny}")
        if not (self.lx > 0 and self.ly > 0 and math.isfinite(self.lx) and math.isfinite(self.ly)):
            raise DomainError(f"side lengths must be positive, got Lx={self.lx}, Ly={self.ly}")

    @property
    def n_nodes(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def n_triangles(self) -> int:
        return 2 * self.n_cells

    @property
    def triangle_area(self) -> float:
        return self.lx * self.ly / (2 * self.n_cells)

    def node_index(self, i: int, j: int) -> int:
        return j * (self.nx + 1) + i

    def coordinates(self) -> NDArray[np.float64]:
        xs = np.linspace(0.0, self.lx, self.nx + 1)
        ys = np.linspace(0.0, self.ly, self.ny + 1)
        x, y = np.meshgrid(xs, ys)
        return np.column_stack([x.ravel(), y.ravel()])

    def triangles(self) -> NDArray[np.int64]:
        i, j = np.meshgrid(np.arange(self.nx), np.arange(self.ny))
        n00 = (j * (self.nx + 1) + i).ravel()
        n10 = n00 + 1
        n01 = n00 + self.nx + 1
        n11 = n01 + 1
        lower = np.column_stack([n00, n10, n11])
        upper = np.column_stack([n00, n11, n01])
        return np.stack([lower, upper], axis=1).reshape(-1, 3)

    def centroids(self) -> NDArray[np.float64]:
        return self.coordinates()[self.triangles()].mean(axis=1)


def _constant(matrix: ArrayLike) -> ClosedForm:
    value = np.asarray(matrix, dtype=np.complex128)

    def field_fn(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.complex128]:
        return np.broadcast_to(value, (x.shape[0], 2, 2)).copy()

    return field_fn


def _anisotropic(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.complex128]:
    values = np.zeros((x.shape[0], 2, 2), dtype=np.complex128)
    values[:, 0, 0] = 1.0 + x
    values[:, 1, 1] = 2.0 + y
    return values


def _rotating(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.complex128]:
    s = np.sin(np.pi * x)
    values = np.zeros((x.shape[0], 2, 2), dtype=np.complex128)
    values[:, 0, 0] = values[:, 1, 1] = 2.0
    values[:, 0, 1] = s
    values[:, 1, 0] = -s
    return values


def _complex_drift(x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.complex128]:
    values = np.zeros((x.shape[0], 2, 2), dtype=np.complex128)
    values[:, 0, 0] = values[:, 1, 1] = 2.0
    values[:, 0, 1] = values[:, 1, 0] = 1j * y
    return values


NAMED_FIELDS: dict[str, ClosedForm] = {
    "identity": _constant(np.eye(2)),
    "skew": _constant([[1.0, 1.0], [-1.0, 1.0]]),
    "anisotropic": _anisotropic,
    "rotating": _rotating,
    "complex_drift": _complex_drift,
}


def _coercivity_and_norms(values: NDArray[np.complex128]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Per-matrix lambda_min of the Hermitian part and operator norm."""
    real_parts, _ = hermitian_eigh_stack(values)
    grams, _ = hermitian_eigh_stack(np.conj(np.swapaxes(values, -1, -2)) @ values)
    return real_parts[:, 0], np.sqrt(np.maximum(grams[:, -1], 0.0))


def _require_elliptic(values: NDArray[np.complex128]) -> None:
    if not np.all(np.isfinite(values)):
        raise DomainError("coefficient entries must be finite")
    lowest, _ = _coercivity_and_norms(values)
    worst = int(np.argmin(lowest))
    if lowest[worst] <= 0:
        raise NotEllipticError(
            f"not elliptic: Hermitian part of mu has eigenvalue {lowest[worst]:.6g} at evaluation point {worst}"
        )


@dataclass(frozen=True, eq=False)
class CoefficientField:
    kind: FieldKind
    matrix: ComplexMatrix | None = None
    table: NDArray[np.complex128] | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "constant":
            if self.matrix is None or self.matrix.shape != (2, 2):
                raise ShapeError("constant coefficient must be a 2x2 matrix")
            _require_elliptic(self.matrix[None, :, :])
        elif self.kind == "table":
            if self.table is None or self.table.ndim != 3 or self.table.shape[1:] != (2, 2):
                raise ShapeError("coefficient table must have shape (n_cells, 2, 2)")
            _require_elliptic(self.table)
        elif self.kind == "closed_form":
            if self.name not in NAMED_FIELDS:
                raise DomainError(f"unknown closed-form field {self.name!r}; known: {sorted(NAMED_FIELDS)}")
        else:
            raise DomainError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def constant(cls, matrix: ArrayLike) -> CoefficientField:
        return cls(kind="constant", matrix=np.array(matrix, dtype=np.complex128))

    @classmethod
    def from_table(cls, values: ArrayLike) -> CoefficientField:
        return cls(kind="table", table=np.array(values, dtype=np.complex128))

    @classmethod
    def closed_form(cls, name: str) -> CoefficientField:
        return cls(kind="closed_form", name=name)

    def evaluate(self, grid: Grid) -> NDArray[np.complex128]:
        """One 2x2 matrix per triangle, shape (n_triangles, 2, 2)."""
        if self.kind == "constant":
            return np.broadcast_to(self.matrix, (grid.n_triangles, 2, 2)).copy()
        if self.kind == "table":
            if self.table.shape[0] != grid.n_cells:
                raise ShapeError(f"table has {self.table.shape[0]} cells, grid has {grid.n_cells}")
            return np.repeat(self.table, 2, axis=0)
        centroids = grid.centroids()
        values = np.asarray(NAMED_FIELDS[self.name](centroids[:, 0], centroids[:, 1]), dtype=np.complex128)
        _require_elliptic(values)
        return values


@dataclass(frozen=True)
class BoundarySpec:
    """Closed Dirichlet intervals in side parameter t in [0, 1] (t = y/Ly on left/right, x/Lx on bottom/top)."""

    intervals: Mapping[Side, tuple[tuple[float, float], ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for side, spans in self.intervals.items():
            if side not in SIDES:
                raise DomainError(f"unknown side {side!r}")
            for a, b in spans:
                if not 0.0 <= a <= b <= 1.0:
                    raise DomainError(f"interval [{a}, {b}] on side {side} must satisfy 0 <= a <= b <= 1")

    @classmethod
    def from_sides(cls, **sides: Iterable[Iterable[float]]) -> BoundarySpec:
        return cls({side: tuple((float(a), float(b)) for a, b in spans) for side, spans in sides.items()})

    @classmethod
    def neumann(cls) -> BoundarySpec:
        return cls()

    @classmethod
    def all_dirichlet(cls) -> BoundarySpec:
        return cls({side: ((0.0, 1.0),) for side in SIDES})

    @property
    def is_empty(self) -> bool:
        return not any(self.intervals.values())

    def dirichlet_nodes(self, grid: Grid) -> NDArray[np.int64]:
        nodes: set[int] = set()
        for side, spans in self.intervals.items():
            count = grid.ny if side in ("left", "right") else grid.nx
            for k in range(count + 1):
                t = k / count
                if not any(a - INTERVAL_TOL <= t <= b + INTERVAL_TOL for a, b in spans):
                    continue
                if side == "left":
                    nodes.add(grid.node_index(0, k))
                elif side == "right":
                    nodes.add(grid.node_index(grid.nx, k))
                elif side == "bottom":
                    nodes.add(grid.node_index(k, 0))
                else:
                    nodes.add(grid.node_index(k, grid.ny))
        return np.array(sorted(nodes), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class AssembledForm:
    grid: Grid
    a_full: ComplexMatrix
    free_nodes: NDArray[np.int64]
    a: ComplexMatrix
    field_angles: SectorAngles
    real_coefficients: bool

    @property
    def dirichlet_nodes(self) -> NDArray[np.int64]:
        return np.setdiff1d(np.arange(self.grid.n_nodes), self.free_nodes)

    @property
    def needs_shift(self) -> bool:
        """No Dirichlet nodes: constants are in the space and A is singular."""
        return self.free_nodes.shape[0] == self.grid.n_nodes

    def operator(self, shift: float = 0.0) -> ComplexMatrix:
        if self.a.shape[0] == 0:
            raise DomainError("every node is a Dirichlet node; the restricted operator is empty")
        return self.a + shift * np.eye(self.a.shape[0], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class EllipticProblem:
    grid: Grid
    mu: CoefficientField
    bc: BoundarySpec = field(default_factory=BoundarySpec)

    def assemble(self) -> AssembledForm:
        return assemble(self.grid, self.mu, self.bc)


def _angles_from_values(values: NDArray[np.complex128]) -> SectorAngles:
    lowest, norms = _coercivity_and_norms(values)
    m = float(np.min(lowest))
    if m <= 0:
        raise NotEllipticError(f"not elliptic: min over triangles of lambda_min(Re mu) is {m:.6g}")
    return SectorAngles.from_bounds(m, max(float(np.max(norms)), m))


def field_bounds(mu: CoefficientField, grid: Grid) -> SectorAngles:
    return _angles_from_values(mu.evaluate(grid))


def _gradients(grid: Grid) -> NDArray[np.float64]:
    """Hat-function gradients per triangle, shape (n_triangles, 3, 2)."""
    xy = grid.coordinates()[grid.triangles()]
    x, y = xy[:, :, 0], xy[:, :, 1]
    twice_area = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    grads = np.empty((xy.shape[0], 3, 2))
    grads[:, 0] = np.column_stack([y[:, 1] - y[:, 2], x[:, 2] - x[:, 1]])
    grads[:, 1] = np.column_stack([y[:, 2] - y[:, 0], x[:, 0] - x[:, 2]])
    grads[:, 2] = np.column_stack([y[:, 0] - y[:, 1], x[:, 1] - x[:, 0]])
    return grads / twice_area[:, None, None]


def assemble_matrix(grid: Grid, values: ArrayLike) -> ComplexMatrix:
    """A[i, j] = sum over triangles of area * grad(phi_i)^T mu grad(phi_j); no ellipticity check."""
    mu = np.asarray(values, dtype=np.complex128)
    if mu.shape != (grid.n_triangles, 2, 2):
        raise ShapeError(f"expected coefficient values of shape {(grid.n_triangles, 2, 2)}, got {mu.shape}")
    grads = _gradients(grid)
    local = grid.triangle_area * np.einsum("tia,tab,tjb->tij", grads, mu, grads)
    triangles = grid.triangles()
    rows = np.broadcast_to(triangles[:, :, None], local.shape)
    cols = np.broadcast_to(triangles[:, None, :], local.shape)
    a_full = np.zeros((grid.n_nodes, grid.n_nodes), dtype=np.complex128)
    np.add.at(a_full, (rows, cols), local)
    return a_full


def assemble(grid: Grid, mu: CoefficientField, bc: BoundarySpec) -> AssembledForm:
    values = mu.evaluate(grid)
    angles = _angles_from_values(values)
    a_full = assemble_matrix(grid, values)
    dirichlet = bc.dirichlet_nodes(grid)
    free = np.setdiff1d(np.arange(grid.n_nodes), dirichlet)
    logger.debug(
        f"Assembled {grid.nx}x{grid.ny} grid: {grid.n_nodes} nodes, {dirichlet.shape[0]} Dirichlet, "
        f"m={angles.m:.6g}, M={angles.M:.6g}"
    )
    return AssembledForm(
        grid=grid,
        a_full=a_full,
        free_nodes=free,
        a=a_full[np.ix_(free, free)],
        field_angles=angles,
        real_coefficients=bool(np.all(np.imag(values) == 0.0)),
    )


def interpolate(grid: Grid, f: NodalFunction) -> ComplexVector:
    xy = grid.coordinates()
    values = np.asarray(f(xy[:, 0], xy[:, 1]), dtype=np.complex128)
    return as_vector(np.broadcast_to(values, (grid.n_nodes,)).copy())


def form_value(form: AssembledForm, u: ArrayLike) -> complex:
    """a[u] = sum_ij A_full[i, j] u_j conj(u_i)."""
    vector = as_vector(u)
    if vector.shape[0] != form.a_full.shape[0]:
        raise ShapeError(f"dimension mismatch: u has {vector.shape[0]} entries, form has {form.a_full.shape[0]} nodes")
    return complex(np.vdot(vector, form.a_full @ vector))
