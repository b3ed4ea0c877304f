"""
Numerical range boundary by the support-function rotation method.

For each direction phi the top eigenpair of Re(e^{-i phi} T) gives the support
value h(phi) and a boundary point (T u, u). The sampled support lines bound an
outer polygon, the sampled points an inner one; Lambda(T) lies between them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sectorbound.errors import DomainError
from sectorbound.services.numerics import (
    ComplexMatrix,
    Eigensolver,
    DEFAULT_EIGENSOLVER,
    as_matrix,
    hermitian_eigh,
    hermitian_eigh_stack,
    operator_norm,
)
from sectorbound.services.sector_core import minimal_enclosing_angle

logger = logging.getLogger(__name__)

DEFAULT_N_ANGLES = 720
MIN_N_ANGLES = 8
CONTAINMENT_TOL = 1e-8


@dataclass(frozen=True)
class SupportPoint:
    h: float
    p: complex


@dataclass(frozen=True)
class FovBoundary:
    angles: NDArray[np.float64]
    support: NDArray[np.float64]
    points: NDArray[np.complex128]

    def __len__(self) -> int:
        return int(self.angles.shape[0])

    def hull_excess(self, z: ArrayLike) -> NDArray[np.float64]:
        """max_phi Re(e^{-i phi} z) - h(phi) per value; <= 0 inside the support hull."""
        values = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        projections = np.real(np.exp(-1j * self.angles)[None, :] * values[:, None])
        return np.max(projections - self.support[None, :], axis=1)

    def hull_contains(self, z: complex, tol: float = 0.0) -> bool:
        return bool(self.hull_excess(z)[0] <= tol)

    def hull_vertices(self) -> NDArray[np.complex128]:
        """Vertices of the circumscribed polygon: crossings of consecutive support lines."""
        phi1, phi2 = self.angles, np.roll(self.angles, -1)
        h1, h2 = self.support, np.roll(self.support, -1)
        det = np.sin(phi2 - phi1)
        x = (h1 * np.sin(phi2) - h2 * np.sin(phi1)) / det
        y = (h2 * np.cos(phi1) - h1 * np.cos(phi2)) / det
        return x + 1j * y

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (float(phi), float(h), float(p.real), float(p.imag))
            for phi, h, p in zip(self.angles, self.support, self.points)
        ]


@dataclass(frozen=True)
class ContainmentReport:
    max_arg: float
    theta: float
    passed: bool


def _rotated_real_parts(t: ComplexMatrix, angles: NDArray[np.float64]) -> NDArray[np.complex128]:
    rotation = np.exp(-1j * angles)[:, None, None]
    rotated = rotation * t[None, :, :]
    return 0.5 * (rotated + np.conj(np.swapaxes(rotated, -1, -2)))


def support_point(matrix: ArrayLike, phi: float, method: Eigensolver = DEFAULT_EIGENSOLVER) -> SupportPoint:
    t = as_matrix(matrix)
    rotated = np.exp(-1j * phi) * t
    values, vectors = hermitian_eigh(0.5 * (rotated + rotated.conj().T), method)
    u = vectors[:, -1]
    return SupportPoint(h=float(values[-1]), p=complex(np.vdot(u, t @ u)))


def fov_boundary(
    matrix: ArrayLike,
    n_angles: int = DEFAULT_N_ANGLES,
    method: Eigensolver = DEFAULT_EIGENSOLVER,
) -> FovBoundary:
    if n_angles < MIN_N_ANGLES:
        raise DomainError(f"n_angles must be at least {MIN_N_ANGLES}, got {n_angles}")
    t = as_matrix(matrix)
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles
    values, vectors = hermitian_eigh_stack(_rotated_real_parts(t, angles), method)
    tops = vectors[:, :, -1]
    points = np.einsum("ki,ij,kj->k", tops.conj(), t, tops)
    logger.debug(f"FoV boundary: n={t.shape[0]}, angles={n_angles}")
    return FovBoundary(angles=angles, support=values[:, -1].copy(), points=points)


def boundary_containment(boundary: FovBoundary, theta: float) -> ContainmentReport:
    max_arg = minimal_enclosing_angle(boundary.points)
    return ContainmentReport(max_arg=max_arg, theta=theta, passed=max_arg <= theta + CONTAINMENT_TOL)


def verify_sector_containment(
    matrix: ArrayLike,
    theta: float,
    n_angles: int = DEFAULT_N_ANGLES,
) -> ContainmentReport:
    return boundary_containment(fov_boundary(matrix, n_angles), theta)


def outer_enclosing_angle(matrix: ArrayLike, n_angles: int = DEFAULT_N_ANGLES) -> float:
    """Upper bound for the angle of Lambda(T) from the circumscribed support polygon."""
    return minimal_enclosing_angle(fov_boundary(matrix, n_angles).hull_vertices())


def brute_force_fov_sample(matrix: ArrayLike, n_random: int, seed: int) -> NDArray[np.complex128]:
    """Values (Tu, u) for seeded random unit vectors.

    Vectors are complex Gaussian draws from ``numpy.random.default_rng(seed)``
    (PCG64), so samples are bit-reproducible for a given seed and numpy version.
    """
    if n_random < 1:
        raise DomainError(f"n_random must be positive, got {n_random}")
    t = as_matrix(matrix)
    rng = np.random.default_rng(seed)
    n = t.shape[0]
    u = rng.standard_normal((n_random, n)) + 1j * rng.standard_normal((n_random, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return np.einsum("ki,ij,kj->k", u.conj(), t, u)


def oracle_tolerance(matrix: ArrayLike) -> float:
    return CONTAINMENT_TOL * operator_norm(matrix)
