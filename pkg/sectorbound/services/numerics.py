"""
Dense complex linear algebra: Hermitian eigensolvers, singular values, LU solves.

Matrices are plain ``complex128`` ndarrays. Two eigensolvers are available:
``"jacobi"`` (cyclic complex Jacobi rotations) and ``"lapack"``
(``numpy.linalg.eigh``, the default). Both return ascending eigenvalues and
orthonormal eigenvectors in the columns of ``V``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from sectorbound.errors import NotHermitianError, ShapeError, SingularMatrixError

logger = logging.getLogger(__name__)

ComplexMatrix = NDArray[np.complex128]
ComplexVector = NDArray[np.complex128]
RealVector = NDArray[np.float64]
Eigensolver = Literal["jacobi", "lapack"]

DEFAULT_EIGENSOLVER: Eigensolver = "lapack"
HERMITIAN_RTOL = 1e-12
JACOBI_OFF_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 60
PIVOT_RTOL = 1e-14


class EigenPair(NamedTuple):
    value: float
    vector: ComplexVector


def as_matrix(data: ArrayLike) -> ComplexMatrix:
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise ShapeError(f"expected a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ShapeError("matrix has non-finite entries")
    return matrix


def as_vector(data: ArrayLike) -> ComplexVector:
    vector = np.array(data, dtype=np.complex128)
    if vector.ndim != 1:
        raise ShapeError(f"expected a vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ShapeError("vector has non-finite entries")
    return vector


def max_abs(matrix: ComplexMatrix) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def hermitian_part(matrix: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (matrix + matrix.conj().T)


def ensure_hermitian(matrix: ArrayLike) -> ComplexMatrix:
    """Validate Hermitian symmetry and return the exactly symmetrized copy."""
    h = as_matrix(matrix)
    deviation = max_abs(h - h.conj().T)
    if deviation > HERMITIAN_RTOL * max_abs(h):
        raise NotHermitianError(f"not Hermitian: max |H - H^*| = {deviation:.3e}")
    return hermitian_part(h)


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(h: ComplexMatrix) -> tuple[RealVector, ComplexMatrix]:
    """Cyclic Jacobi on a Hermitian matrix (assumed already symmetrized).

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation, so ``U = diag(1, e^{-i alpha}) R`` and
    ``U^* A U`` has a zero ``(p, q)`` entry.
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v

    target = JACOBI_OFF_RTOL * scale
    sweeps = 0
    while _off_diagonal_norm(a) > target:
        if sweeps == JACOBI_MAX_SWEEPS:
            logger.warning(
                f"Jacobi stopped after {sweeps} sweeps, off-diagonal mass "
                f"{_off_diagonal_norm(a):.3e} > {target:.3e} (n={n})"
            )
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                phase = (apq / magnitude).conjugate()
                u = np.array([[c, s], [-s * phase, c * phase]], dtype=np.complex128)

                pq = [p, q]
                a[:, pq] = a[:, pq] @ u
                a[pq, :] = u.conj().T @ a[pq, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, pq] = v[:, pq] @ u

    logger.debug(f"Jacobi converged: n={n}, sweeps={sweeps}")
    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def hermitian_eigh(
    matrix: ArrayLike,
    method: Eigensolver = DEFAULT_EIGENSOLVER,
) -> tuple[RealVector, ComplexMatrix]:
    """Ascending eigenvalues and eigenvector columns of a Hermitian matrix."""
    h = ensure_hermitian(matrix)
    if method == "jacobi":
        return jacobi_eigh(h)
    if method == "lapack":
        values, vectors = np.linalg.eigh(h)
        return values, vectors
    raise ValueError(f"unknown eigensolver {method!r}")


def hermitian_eigh_stack(
    stack: NDArray[np.complex128],
    method: Eigensolver = DEFAULT_EIGENSOLVER,
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Batched ``hermitian_eigh`` over the leading axis; inputs are symmetrized, not checked."""
    stack = 0.5 * (stack + np.conj(np.swapaxes(stack, -1, -2)))
    if method == "lapack":
        return np.linalg.eigh(stack)
    if method == "jacobi":
        pairs = [jacobi_eigh(h) for h in stack]
        return np.stack([w for w, _ in pairs]), np.stack([v for _, v in pairs])
    raise ValueError(f"unknown eigensolver {method!r}")


def hermitian_eigs(matrix: ArrayLike, method: Eigensolver = DEFAULT_EIGENSOLVER) -> list[EigenPair]:
    values, vectors = hermitian_eigh(matrix, method)
    return [EigenPair(float(values[k]), vectors[:, k].copy()) for k in range(values.shape[0])]


def _gram_extremes(matrix: ArrayLike, method: Eigensolver) -> tuple[float, float]:
    t = as_matrix(matrix)
    values, _ = hermitian_eigh(t.conj().T @ t, method)
    return max(float(values[0]), 0.0), max(float(values[-1]), 0.0)


def operator_norm(matrix: ArrayLike, method: Eigensolver = DEFAULT_EIGENSOLVER) -> float:
    """Largest singular value."""
    _, top = _gram_extremes(matrix, method)
    return math.sqrt(top)


def smallest_singular(matrix: ArrayLike, method: Eigensolver = DEFAULT_EIGENSOLVER) -> float:
    bottom, _ = _gram_extremes(matrix, method)
    return math.sqrt(bottom)


@dataclass(frozen=True)
class LUFactor:
    """Row-pivoted LU factorization; ``solve`` accepts a vector or a block of columns."""

    lu: ComplexMatrix
    piv: NDArray[np.int32]

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, rhs: ArrayLike) -> NDArray[np.complex128]:
        b = np.asarray(rhs, dtype=np.complex128)
        if b.shape[0] != self.n:
            raise ShapeError(f"right-hand side has {b.shape[0]} rows, expected {self.n}")
        return scipy.linalg.lu_solve((self.lu, self.piv), b)


def lu_factorize(matrix: ArrayLike) -> LUFactor:
    t = as_matrix(matrix)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(t)
    smallest_pivot = float(np.min(np.abs(np.diag(lu))))
    if smallest_pivot <= PIVOT_RTOL * max_abs(t):
        raise SingularMatrixError(f"singular matrix: pivot {smallest_pivot:.3e}")
    return LUFactor(lu=lu, piv=piv)


def solve(matrix: ArrayLike, rhs: ArrayLike) -> ComplexVector:
    return lu_factorize(matrix).solve(as_vector(rhs))
