"""
Resolvent-norm scans and rational functional-calculus checks on sectorial matrices.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sectorbound.errors import (
    DomainError,
    InadmissibleError,
    PreconditionError,
    SingularMatrixError,
    SpectrumError,
)
from sectorbound.services.elliptic import AssembledForm
from sectorbound.services.fov import DEFAULT_N_ANGLES, verify_sector_containment
from sectorbound.services.numerics import (
    ComplexMatrix,
    as_matrix,
    lu_factorize,
    operator_norm,
    smallest_singular,
)
from sectorbound.services.sector_core import (
    HALF_PI,
    SectorAngles,
    resolvent_constant,
    sector_contains,
    sector_distance,
)

logger = logging.getLogger(__name__)

RESOLVENT_TOL = 1e-8
CALCULUS_RTOL = 1e-8
CROUZEIX_DELYON_CONSTANT = 2.0 + 2.0 / math.sqrt(3.0)
DEFAULT_EPS = 0.05
DEFAULT_N_BOUNDARY = 2000
BOUNDARY_RADII = (1e-6, 1e6)


@dataclass(frozen=True)
class KatoSample:
    lam: complex
    norm: float
    bound: float


@dataclass(frozen=True)
class KatoReport:
    kappa: float
    samples: tuple[KatoSample, ...]
    max_violation: float
    passed: bool


@dataclass(frozen=True)
class ResolventScan:
    theta: float
    lambdas: NDArray[np.complex128]
    norms: NDArray[np.float64]
    bound_constant: float
    max_violation: float
    passed: bool

    def rows(self) -> list[tuple[float, float, float, float]]:
        """(re, im, ||(A + lambda I)^-1||, constant / |lambda|) per sample."""
        return [
            (float(lam.real), float(lam.imag), float(norm), self.bound_constant / abs(lam))
            for lam, norm in zip(self.lambdas, self.norms)
        ]


@dataclass(frozen=True)
class CalculusReport:
    f_id: str
    lhs: float
    rhs: float
    boundary_sup: float
    kappa: float
    eps: float
    passed: bool


@dataclass(frozen=True)
class NamedRational:
    """A rational test function with its scalar form and its matrix evaluation by LU solves."""

    label: str
    scalar: Callable[[NDArray[np.complex128]], NDArray[np.complex128]]
    of_matrix: Callable[[ComplexMatrix], ComplexMatrix]


def _shifted(a: ComplexMatrix, c: float) -> ComplexMatrix:
    return a + c * np.eye(a.shape[0], dtype=np.complex128)


def _z_over_one_plus_z_squared(a: ComplexMatrix) -> ComplexMatrix:
    lu = lu_factorize(_shifted(a, 1.0))
    return a @ lu.solve(lu.solve(np.eye(a.shape[0], dtype=np.complex128)))


def _z_squared_over_one_plus_z_cubed(a: ComplexMatrix) -> ComplexMatrix:
    lu = lu_factorize(_shifted(a, 1.0))
    block = lu.solve(lu.solve(lu.solve(np.eye(a.shape[0], dtype=np.complex128))))
    return a @ (a @ block)


def _resolvent_difference(a: ComplexMatrix) -> ComplexMatrix:
    identity = np.eye(a.shape[0], dtype=np.complex128)
    return lu_factorize(_shifted(a, 1.0)).solve(identity) - lu_factorize(_shifted(a, 2.0)).solve(identity)


RATIONAL_FUNCTIONS: dict[str, NamedRational] = {
    f.label: f
    for f in (
        NamedRational("z/(1+z)^2", lambda z: z / (1 + z) ** 2, _z_over_one_plus_z_squared),
        NamedRational("z^2/(1+z)^3", lambda z: z**2 / (1 + z) ** 3, _z_squared_over_one_plus_z_cubed),
        NamedRational("1/(1+z) - 1/(2+z)", lambda z: 1 / (1 + z) - 1 / (2 + z), _resolvent_difference),
    )
}


def resolvent_norm(matrix: ArrayLike, lam: complex) -> float:
    """||(A + lambda I)^-1|| = 1 / sigma_min(A + lambda I)."""
    a = as_matrix(matrix)
    shifted = a + lam * np.eye(a.shape[0], dtype=np.complex128)
    try:
        lu_factorize(shifted)
    except SingularMatrixError as exc:
        raise SpectrumError(f"lambda in spectrum: A + ({lam})I is singular") from exc
    sigma = smallest_singular(shifted)
    if sigma == 0.0:
        raise SpectrumError(f"lambda in spectrum: A + ({lam})I is singular")
    return 1.0 / sigma


def kato_bound_check(
    matrix: ArrayLike,
    kappa: float,
    lambdas: Iterable[complex],
    n_angles: int = DEFAULT_N_ANGLES,
) -> KatoReport:
    """Check ||(A + lambda I)^-1|| <= 1 / dist(-lambda, Sigma(kappa)) for each lambda."""
    a = as_matrix(matrix)
    values = [complex(lam) for lam in lambdas]
    for lam in values:
        if sector_contains(-lam, kappa):
            raise InadmissibleError(f"lambda not admissible: -({lam}) lies in the sector of half-angle {kappa:.6g}")
    containment = verify_sector_containment(a, kappa, n_angles)
    if not containment.passed:
        raise PreconditionError(
            f"numerical range reaches arg {containment.max_arg:.6g}, outside the sector of half-angle {kappa:.6g}"
        )

    samples = []
    for lam in values:
        norm = resolvent_norm(a, lam)
        samples.append(KatoSample(lam=lam, norm=norm, bound=1.0 / sector_distance(-lam, kappa)))
    max_violation = max((s.norm - s.bound for s in samples), default=-math.inf)
    return KatoReport(
        kappa=kappa,
        samples=tuple(samples),
        max_violation=max_violation,
        passed=max_violation <= RESOLVENT_TOL,
    )


def scan_resolvent(
    matrix: ArrayLike,
    angles: SectorAngles,
    theta: float,
    n_rays: int,
    radii: Sequence[float],
) -> ResolventScan:
    """Sample lambda = r e^{i psi}, psi uniform in [-(pi - theta), pi - theta], against C(theta) / |lambda|."""
    constant = resolvent_constant(theta, angles.m, angles.M)
    if n_rays < 1:
        raise DomainError(f"n_rays must be positive, got {n_rays}")
    radius_values = np.asarray(radii, dtype=np.float64)
    if radius_values.size == 0 or np.any(radius_values <= 0) or not np.all(np.isfinite(radius_values)):
        raise DomainError("radii must be a non-empty list of positive numbers")

    a = as_matrix(matrix)
    psi = np.linspace(-(math.pi - theta), math.pi - theta, n_rays)
    lambdas = (radius_values[None, :] * np.exp(1j * psi)[:, None]).ravel()
    norms = np.array([resolvent_norm(a, lam) for lam in lambdas])
    products = norms * np.abs(lambdas)
    max_violation = float(np.max(products - constant))
    logger.debug(f"Resolvent scan theta={theta:.6g}: {lambdas.size} samples, max norm*|lambda|={products.max():.6g}")
    return ResolventScan(
        theta=theta,
        lambdas=lambdas,
        norms=norms,
        bound_constant=constant,
        max_violation=max_violation,
        passed=max_violation <= RESOLVENT_TOL,
    )


def ray_scan(form: AssembledForm, theta: float, n_rays: int, radii: Sequence[float], shift: float = 0.0) -> ResolventScan:
    return scan_resolvent(form.operator(shift), form.field_angles, theta, n_rays, radii)


def boundary_sup(f_id: str, kappa: float, eps: float, n_boundary: int = DEFAULT_N_BOUNDARY) -> float:
    """max |f| over log-spaced samples of the rays arg z = +-(kappa + eps); f vanishes at 0 and infinity."""
    f = RATIONAL_FUNCTIONS[f_id]
    angle = kappa + eps
    radii = np.logspace(math.log10(BOUNDARY_RADII[0]), math.log10(BOUNDARY_RADII[1]), n_boundary)
    rays = np.concatenate([radii * np.exp(1j * angle), radii * np.exp(-1j * angle)])
    return float(np.max(np.abs(f.scalar(rays))))


def rational_calculus_check(
    matrix: ArrayLike,
    kappa: float,
    eps: float,
    f_id: str,
    n_boundary: int = DEFAULT_N_BOUNDARY,
    n_angles: int = DEFAULT_N_ANGLES,
) -> CalculusReport:
    """||f(A)|| <= (2 + 2/sqrt(3)) sup |f| on the sector of half-angle kappa + eps."""
    if f_id not in RATIONAL_FUNCTIONS:
        raise DomainError(f"unknown function {f_id!r}; known: {sorted(RATIONAL_FUNCTIONS)}")
    if not 0.0 <= kappa < HALF_PI:
        raise DomainError(f"kappa must lie in [0, pi/2), got {kappa}")
    if not eps > 0 or kappa + eps >= HALF_PI:
        raise DomainError(f"eps must be positive with kappa + eps < pi/2, got kappa={kappa:.6g}, eps={eps}")
    if n_boundary < 2:
        raise DomainError(f"n_boundary must be at least 2, got {n_boundary}")

    a = as_matrix(matrix)
    containment = verify_sector_containment(a, kappa, n_angles)
    if not containment.passed:
        raise PreconditionError(
            f"numerical range reaches arg {containment.max_arg:.6g}, outside the sector of half-angle {kappa:.6g}"
        )
    try:
        lu_factorize(a)
    except SingularMatrixError as exc:
        raise PreconditionError("operator is not injective; shift it by delta * I first") from exc

    lhs = operator_norm(RATIONAL_FUNCTIONS[f_id].of_matrix(a))
    sup = boundary_sup(f_id, kappa, eps, n_boundary)
    rhs = CROUZEIX_DELYON_CONSTANT * sup
    logger.debug(f"Calculus check {f_id}: lhs={lhs:.6g}, rhs={rhs:.6g}")
    return CalculusReport(
        f_id=f_id,
        lhs=lhs,
        rhs=rhs,
        boundary_sup=sup,
        kappa=kappa,
        eps=eps,
        passed=lhs <= rhs + CALCULUS_RTOL * (1.0 + rhs),
    )
