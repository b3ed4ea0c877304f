"""
Acceptance checks run by ``selftest``: each returns a CheckResult and never raises on a failed bound.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from sectorbound.services.elliptic import (
    AssembledForm,
    BoundarySpec,
    CoefficientField,
    Grid,
    assemble,
    field_bounds,
    form_value,
    interpolate,
)
from sectorbound.services.fov import (
    brute_force_fov_sample,
    fov_boundary,
    oracle_tolerance,
    outer_enclosing_angle,
    verify_sector_containment,
)
from sectorbound.services.numerics import ComplexMatrix, hermitian_eigh, operator_norm
from sectorbound.services.resolvent_calculus import (
    RATIONAL_FUNCTIONS,
    kato_bound_check,
    rational_calculus_check,
    ray_scan,
)
from sectorbound.services.sector_core import (
    classical_angle,
    coercivity_constant,
    imaginary_part_bound_check,
    kappa_p,
    matrix_angles,
    sector_contains,
    sharp_angle,
)

logger = logging.getLogger(__name__)

SKEW = ((1.0, 1.0), (-1.0, 1.0))
SQRT2 = math.sqrt(2.0)
QUARTER_PI = 0.25 * math.pi


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def random_complex_matrix(rng: np.random.Generator, n: int) -> ComplexMatrix:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def random_coercive_matrix(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """Complex Gaussian matrix shifted so that its real part has lambda_min in [0.1, 1)."""
    g = random_complex_matrix(rng, n)
    return g + (rng.uniform(0.1, 1.0) - coercivity_constant(g)) * np.eye(n)


def random_sectorial_matrix(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """Coercive matrix with ||T|| / m <= 3, so its sector angle stays below arctan(sqrt(8))."""
    g = random_complex_matrix(rng, n)
    return g + (2.0 * operator_norm(g) + 0.5) * np.eye(n)


def skew_form(n: int, bc: BoundarySpec) -> AssembledForm:
    """mu = [[1, 1], [-1, 1]] on the unit square, the extremal case for the sharp angle."""
    return assemble(Grid(n, n), CoefficientField.constant(SKEW), bc)


def skew_witness(grid: Grid):
    return interpolate(grid, lambda x, y: -x + y + 1j * (x + y))


def check_golden_form_value(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for n in (1, 2, 4, 8, 16, 32):
        form = skew_form(n, BoundarySpec.neumann())
        worst = max(worst, abs(form_value(form, skew_witness(form.grid)) - (4 - 4j)))
    angles = field_bounds(CoefficientField.constant(SKEW), Grid(1, 1))
    passed = (
        worst <= 1e-10
        and abs(angles.m - 1.0) <= 1e-12
        and abs(angles.M - SQRT2) <= 1e-12
        and abs(sharp_angle(angles.m, angles.M) - QUARTER_PI) <= 1e-12
    )
    return CheckResult("golden form value", passed, f"max |a[u] - (4-4i)| = {worst:.3e}, m={angles.m}, M={angles.M}")


def check_sharpness(rng: np.random.Generator) -> CheckResult:
    form = skew_form(8, BoundarySpec.neumann())
    value = form_value(form, skew_witness(form.grid))
    arg_gap = abs(abs(np.angle(value)) - QUARTER_PI)
    sharp = verify_sector_containment(np.array(SKEW), QUARTER_PI)
    tighter = verify_sector_containment(np.array(SKEW), QUARTER_PI - 0.01)
    passed = arg_gap <= 1e-12 and sharp.passed and not tighter.passed
    return CheckResult("sharpness", passed, f"| |arg a[u]| - pi/4 | = {arg_gap:.3e}, max_arg = {sharp.max_arg:.15f}")


def random_coercive_table(rng: np.random.Generator, grid: Grid) -> CoefficientField:
    """One random coercive complex 2x2 matrix per grid cell."""
    return CoefficientField.from_table([random_coercive_matrix(rng, 2) for _ in range(grid.n_cells)])


def random_nodal_vector(rng: np.random.Generator, grid: Grid) -> np.ndarray:
    return rng.standard_normal(grid.n_nodes) + 1j * rng.standard_normal(grid.n_nodes)


def check_form_containment(rng: np.random.Generator, count: int = 200) -> CheckResult:
    failures = 0
    for _ in range(count):
        grid = Grid(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        form = assemble(grid, random_coercive_table(rng, grid), BoundarySpec.neumann())
        value = form_value(form, random_nodal_vector(rng, grid))
        failures += not sector_contains(value, form.field_angles.kappa, 1e-9)
    return CheckResult("form value containment", failures == 0, f"{failures} of {count} (mu, u) pairs outside the sector")


def check_imaginary_part_bound(rng: np.random.Generator, count: int = 1000) -> CheckResult:
    failures = 0
    for k in range(count):
        t = random_coercive_matrix(rng, int(rng.integers(2, 9)))
        report = imaginary_part_bound_check(t)
        theta = matrix_angles(t).kappa
        samples = brute_force_fov_sample(t, 500, seed=k)
        if report.E_norm > report.bound + 1e-10 or not all(sector_contains(z, theta, 1e-9) for z in samples):
            failures += 1
    equality = imaginary_part_bound_check(np.eye(2) + 1j * np.diag([1.0, -1.0]))
    gap = abs(equality.E_norm - equality.bound)
    return CheckResult(
        "imaginary part bound",
        failures == 0 and gap <= 1e-10,
        f"{failures} of {count} matrices failed, equality-case gap {gap:.3e}",
    )


def check_angle_improvement(rng: np.random.Generator, count: int = 100) -> CheckResult:
    failures = 0
    for _ in range(count):
        m = rng.uniform(0.1, 10.0)
        big_m = m * rng.uniform(1.0 + 1e-6, 100.0)
        kappa, classical = sharp_angle(m, big_m), classical_angle(m, big_m)
        if not (kappa < classical < 0.5 * math.pi):
            failures += 1
    gap = classical_angle(1.0, SQRT2) - sharp_angle(1.0, SQRT2)
    gap_error = abs(gap - (math.atan(SQRT2) - QUARTER_PI))
    return CheckResult(
        "angle improvement",
        failures == 0 and gap_error <= 1e-12,
        f"{failures} of {count} pairs failed, gap error at (1, sqrt 2) {gap_error:.3e}",
    )


def check_resolvent_rays(rng: np.random.Generator) -> CheckResult:
    form = skew_form(16, BoundarySpec.all_dirichlet())
    kappa = form.field_angles.kappa
    radii = np.logspace(-2, 4, 12)
    worst = -math.inf
    passed = True
    for theta in (kappa + 0.1, kappa + 0.3, 0.5 * math.pi):
        scan = ray_scan(form, theta, 9, radii)
        worst = max(worst, scan.max_violation)
        passed = passed and scan.passed
    return CheckResult("resolvent rays", passed, f"max norm*|lambda| - C(theta) = {worst:.3e}")


def random_admissible_lambdas(rng: np.random.Generator, kappa: float, count: int) -> list[complex]:
    psi = rng.uniform(kappa + 0.01, math.pi, count) * rng.choice([-1.0, 1.0], count)
    radii = 10.0 ** rng.uniform(-2.0, 2.0, count)
    return [complex(-r * np.exp(1j * p)) for r, p in zip(radii, psi)]


def check_kato_bound(rng: np.random.Generator, count: int = 200) -> CheckResult:
    failures = 0
    worst = -math.inf
    for _ in range(count):
        t = random_coercive_matrix(rng, int(rng.integers(2, 9)))
        kappa = outer_enclosing_angle(t)
        report = kato_bound_check(t, kappa, random_admissible_lambdas(rng, kappa, 50))
        worst = max(worst, report.max_violation)
        failures += not report.passed
    return CheckResult("resolvent distance bound", failures == 0, f"{failures} of {count} failed, worst {worst:.3e}")


def check_kappa_p_table(rng: np.random.Generator) -> CheckResult:
    passed = (
        kappa_p(QUARTER_PI, 2.0) == QUARTER_PI
        and abs(kappa_p(QUARTER_PI, 4.0) - 3 * math.pi / 8) <= 1e-12
        and abs(kappa_p(QUARTER_PI, 4.0 / 3.0) - 3 * math.pi / 8) <= 1e-12
        and all(kappa_p(QUARTER_PI, p) < 0.5 * math.pi for p in (1.01, 1.1, 2.0, 10.0, 100.0))
    )
    return CheckResult("L_p angle table", passed, f"kappa_4 = {kappa_p(QUARTER_PI, 4.0):.15f}")


def check_rational_calculus(rng: np.random.Generator, count: int = 200, eps: float = 0.05) -> CheckResult:
    failures = 0
    for _ in range(count):
        t = random_sectorial_matrix(rng, int(rng.integers(2, 9)))
        kappa = matrix_angles(t).kappa
        failures += sum(not rational_calculus_check(t, kappa, eps, f_id).passed for f_id in RATIONAL_FUNCTIONS)

    for bc, shift in ((BoundarySpec.all_dirichlet(), 0.0), (BoundarySpec.neumann(), 1.0)):
        form = skew_form(8, bc)
        a = form.operator(shift)
        failures += sum(
            not rational_calculus_check(a, form.field_angles.kappa, eps, f_id).passed for f_id in RATIONAL_FUNCTIONS
        )
    return CheckResult("rational calculus", failures == 0, f"{failures} failed checks")


def check_oracles(rng: np.random.Generator, count: int = 200) -> CheckResult:
    outside = 0
    for k in range(count):
        t = random_complex_matrix(rng, int(rng.integers(2, 9)))
        boundary = fov_boundary(t)
        excess = boundary.hull_excess(brute_force_fov_sample(t, 200, seed=k))
        outside += int(np.sum(excess > oracle_tolerance(t)))

    eig_error = 0.0
    for _ in range(100):
        a, d = rng.standard_normal(2)
        b = complex(rng.standard_normal(), rng.standard_normal())
        h = np.array([[a, b], [b.conjugate(), d]])
        radius = math.hypot((a - d) / 2, abs(b))
        expected = np.array([(a + d) / 2 - radius, (a + d) / 2 + radius])
        for method in ("jacobi", "lapack"):
            values, _ = hermitian_eigh(h, method)
            eig_error = max(eig_error, float(np.max(np.abs(values - expected))))
    return CheckResult(
        "oracle equivalence",
        outside == 0 and eig_error <= 1e-12,
        f"{outside} samples outside the support hull, max 2x2 eigenvalue error {eig_error:.3e}",
    )


ACCEPTANCE_CHECKS: dict[str, Callable[[np.random.Generator], CheckResult]] = {
    "golden": check_golden_form_value,
    "sharpness": check_sharpness,
    "form_containment": check_form_containment,
    "imaginary_part": check_imaginary_part_bound,
    "angle_improvement": check_angle_improvement,
    "resolvent_rays": check_resolvent_rays,
    "kato": check_kato_bound,
    "kappa_p": check_kappa_p_table,
    "calculus": check_rational_calculus,
    "oracles": check_oracles,
}


def run_acceptance(seed: int = 0) -> list[CheckResult]:
    results = []
    for offset, (key, check) in enumerate(ACCEPTANCE_CHECKS.items()):
        started = time.perf_counter()
        result = check(np.random.default_rng(seed + offset))
        elapsed = time.perf_counter() - started
        results.append(CheckResult(result.name, result.passed, result.detail, elapsed))
        logger.debug(f"Acceptance {key}: passed={result.passed} in {elapsed:.2f}s")
    return results
