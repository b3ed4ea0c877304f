"""
Sector geometry and the closed-form angle and constant formulas.

Angles are radians. ``arg`` is the principal value in (-pi, pi]; ``0`` lies in
every sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

from numpy.typing import ArrayLike

from sectorbound.errors import DomainError, NotCoerciveError
from sectorbound.services.numerics import (
    ComplexMatrix,
    as_matrix,
    hermitian_eigh,
    hermitian_part,
    operator_norm,
)

EQUALITY_RTOL = 1e-10
ANGLE_TOL = 1e-12
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Sector:
    half_angle: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.half_angle < math.pi:
            raise DomainError(f"sector half-angle must lie in [0, pi), got {self.half_angle}")

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return sector_contains(z, self.half_angle, tol)


@dataclass(frozen=True)
class SectorAngles:
    m: float
    M: float
    kappa: float
    classical: float

    def __post_init__(self) -> None:
        _check_bounds(self.m, self.M)
        if not 0.0 <= self.kappa <= self.classical + ANGLE_TOL:
            raise DomainError(f"need 0 <= kappa <= classical, got kappa={self.kappa}, classical={self.classical}")

    @classmethod
    def from_bounds(cls, m: float, M: float) -> SectorAngles:
        return cls(m=m, M=M, kappa=sharp_angle(m, M), classical=classical_angle(m, M))


@dataclass(frozen=True)
class ImaginaryPartReport:
    E_norm: float
    bound: float
    margin: float
    passed: bool


def _check_bounds(m: float, M: float) -> None:
    if not (math.isfinite(m) and math.isfinite(M)):
        raise DomainError("m and M must be finite")
    if m <= 0:
        raise DomainError(f"m must be positive, got {m}")
    if M < m:
        raise DomainError(f"M < m ({M} < {m})")


def cartesian_decomposition(matrix: ArrayLike) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Split T = S + iE into its Hermitian real part S and imaginary part E."""
    t = as_matrix(matrix)
    s = hermitian_part(t)
    e = (t - t.conj().T) / 2j
    return s, 0.5 * (e + e.conj().T)


def coercivity_constant(matrix: ArrayLike) -> float:
    """Best m with Re(Tu, u) >= m|u|^2; may be <= 0."""
    s, _ = cartesian_decomposition(matrix)
    values, _ = hermitian_eigh(s)
    return float(values[0])


def imaginary_part_bound_check(matrix: ArrayLike) -> ImaginaryPartReport:
    """Compare ||E|| with sqrt(||T||^2 - m^2) for a coercive T."""
    t = as_matrix(matrix)
    m = coercivity_constant(t)
    if m <= 0:
        raise NotCoerciveError(f"not coercive: smallest eigenvalue of the real part is {m:.6g}")
    _, e = cartesian_decomposition(t)
    e_norm = operator_norm(e)
    norm = operator_norm(t)
    bound = math.sqrt(max(norm * norm - m * m, 0.0))
    margin = bound - e_norm
    return ImaginaryPartReport(
        E_norm=e_norm,
        bound=bound,
        margin=margin,
        passed=e_norm <= bound + EQUALITY_RTOL * (1.0 + bound),
    )


def sharp_angle(m: float, M: float) -> float:
    """kappa = arctan sqrt((M/m)^2 - 1)."""
    _check_bounds(m, M)
    return math.atan2(math.sqrt((M - m) * (M + m)), m)


def classical_angle(m: float, M: float) -> float:
    _check_bounds(m, M)
    return math.atan2(M, m)


def kappa_p(kappa: float, p: float) -> float:
    """Interpolated L_p angle; p = inf returns the excluded limit pi/2."""
    if not 0.0 <= kappa < HALF_PI:
        raise DomainError(f"kappa must lie in [0, pi/2), got {kappa}")
    if math.isnan(p) or p <= 1.0:
        raise DomainError(f"p must lie in (1, inf), got {p}")
    if math.isinf(p):
        return HALF_PI
    weight = abs(1.0 - 2.0 / p)
    return (1.0 - weight) * kappa + weight * HALF_PI


def resolvent_constant(theta: float, m: float, M: float) -> float:
    """M / (m sin(theta) - sqrt(M^2 - m^2) cos(theta)) for theta in (kappa, pi/2]."""
    kappa = sharp_angle(m, M)
    if theta > HALF_PI:
        raise DomainError(f"theta must not exceed pi/2, got {theta}")
    denominator = m * math.sin(theta) - math.sqrt((M - m) * (M + m)) * math.cos(theta)
    if theta <= kappa or denominator <= 0.0:
        raise DomainError(
            f"denominator nonpositive: theta={theta:.12g} must exceed kappa={kappa:.12g}, "
            "the resolvent constant blows up as theta approaches kappa"
        )
    return M / denominator


def sector_contains(z: complex, theta: float, tol: float = 0.0) -> bool:
    if z == 0:
        return True
    return abs(cmath.phase(z)) <= theta + tol


def sector_distance(w: complex, theta: float) -> float:
    """Euclidean distance from w to the closed sector of half-angle theta."""
    if w == 0:
        return 0.0
    angle = abs(cmath.phase(w))
    if angle <= theta:
        return 0.0
    if angle <= theta + HALF_PI:
        return abs(w) * math.sin(angle - theta)
    return abs(w)


def minimal_enclosing_angle(points: Iterable[complex]) -> float:
    values = list(points)
    if not values:
        raise DomainError("minimal_enclosing_angle needs at least one point")
    return max((abs(cmath.phase(z)) for z in values if z != 0), default=0.0)


def matrix_angles(matrix: ArrayLike) -> SectorAngles:
    """Matrix-level angles: m from the real part, M = ||T||."""
    t = as_matrix(matrix)
    m = coercivity_constant(t)
    if m <= 0:
        raise NotCoerciveError(f"not coercive: smallest eigenvalue of the real part is {m:.6g}")
    return SectorAngles.from_bounds(m, max(operator_norm(t), m))
