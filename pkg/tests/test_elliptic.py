import math

import numpy as np
import pytest

from sectorbound.errors import DomainError, NotEllipticError, ShapeError
from sectorbound.services.acceptance import random_coercive_table, random_nodal_vector
from sectorbound.services.elliptic import (
    BoundarySpec,
    CoefficientField,
    EllipticProblem,
    Grid,
    assemble,
    assemble_matrix,
    field_bounds,
    form_value,
    interpolate,
)
from sectorbound.services.fov import verify_sector_containment
from sectorbound.services.sector_core import sector_contains
from tests.conftest import SKEW, SQRT2


def skew_witness(grid):
    return interpolate(grid, lambda x, y: -x + y + 1j * (x + y))


def test_grid_counts():
    grid = Grid(3, 2, lx=2.0, ly=1.0)
    assert grid.n_nodes == 12
    assert grid.n_cells == 6
    assert grid.n_triangles == 12
    assert grid.triangle_area == pytest.approx(2.0 / 12)
    assert grid.node_index(3, 2) == 11
    np.testing.assert_allclose(grid.coordinates()[grid.node_index(1, 1)], [2.0 / 3, 0.5])


def test_triangles_are_counter_clockwise():
    grid = Grid(3, 4)
    xy = grid.coordinates()[grid.triangles()]
    twice_area = (xy[:, 1, 0] - xy[:, 0, 0]) * (xy[:, 2, 1] - xy[:, 0, 1]) - (xy[:, 2, 0] - xy[:, 0, 0]) * (
        xy[:, 1, 1] - xy[:, 0, 1]
    )
    np.testing.assert_allclose(twice_area, 2 * grid.triangle_area)


@pytest.mark.parametrize("nx, ny", [(0, 1), (1, 0)])
def test_grid_rejects_empty(nx, ny):
    with pytest.raises(DomainError):
        Grid(nx, ny)


def test_identity_gives_five_point_stencil():
    grid = Grid(4, 4)
    form = assemble(grid, CoefficientField.closed_form("identity"), BoundarySpec.neumann())
    row = form.a_full[grid.node_index(2, 2)]
    expected = np.zeros(grid.n_nodes)
    expected[grid.node_index(2, 2)] = 4.0
    for i, j in [(1, 2), (3, 2), (2, 1), (2, 3)]:
        expected[grid.node_index(i, j)] = -1.0
    np.testing.assert_allclose(row, expected, atol=1e-14)


@pytest.mark.parametrize("name", ["identity", "skew", "anisotropic", "rotating", "complex_drift"])
def test_constants_are_in_the_kernel(name):
    form = assemble(Grid(5, 3), CoefficientField.closed_form(name), BoundarySpec.neumann())
    np.testing.assert_allclose(form.a_full @ np.ones(form.grid.n_nodes), 0.0, atol=1e-12)
    assert form.needs_shift


def test_hermitian_coefficients_give_hermitian_matrix():
    form = assemble(Grid(4, 5), CoefficientField.closed_form("anisotropic"), BoundarySpec.all_dirichlet())
    np.testing.assert_allclose(form.a, form.a.conj().T, atol=1e-14)
    assert form.real_coefficients


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
def test_skew_form_value_is_four_minus_four_i(n):
    form = assemble(Grid(n, n), CoefficientField.constant(SKEW), BoundarySpec.neumann())
    value = form_value(form, skew_witness(form.grid))
    assert abs(value - (4 - 4j)) <= 1e-10
    assert abs(abs(np.angle(value)) - math.pi / 4) <= 1e-12


def test_form_value_scales_with_area():
    grid = Grid(4, 4, lx=2.0, ly=0.5)
    form = assemble(grid, CoefficientField.constant(SKEW), BoundarySpec.neumann())
    assert form_value(form, skew_witness(grid)) == pytest.approx(4 - 4j, abs=1e-10)


def test_skew_field_bounds():
    angles = field_bounds(CoefficientField.constant(SKEW), Grid(1, 1))
    assert angles.m == pytest.approx(1.0, abs=1e-12)
    assert angles.M == pytest.approx(SQRT2, abs=1e-12)
    assert angles.kappa == pytest.approx(math.pi / 4, abs=1e-12)


def test_rotating_field_bounds():
    grid = Grid(8, 8)
    angles = field_bounds(CoefficientField.closed_form("rotating"), grid)
    s_max = np.max(np.sin(np.pi * grid.centroids()[:, 0]))
    assert angles.m == pytest.approx(2.0)
    assert angles.M == pytest.approx(math.sqrt(4.0 + s_max**2))


@pytest.mark.parametrize("matrix", [[[1.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [-1.0, 0.0]]])
def test_not_elliptic_constant(matrix):
    with pytest.raises(NotEllipticError, match="not elliptic"):
        CoefficientField.constant(matrix)


def test_table_field():
    grid = Grid(2, 1)
    table = [np.eye(2), np.array(SKEW)]
    field = CoefficientField.from_table(table)
    values = field.evaluate(grid)
    assert values.shape == (4, 2, 2)
    np.testing.assert_allclose(values[2], SKEW)
    with pytest.raises(ShapeError):
        field.evaluate(Grid(3, 1))


def test_table_field_must_be_elliptic():
    with pytest.raises(NotEllipticError):
        CoefficientField.from_table([np.eye(2), -np.eye(2)])


def test_unknown_closed_form():
    with pytest.raises(DomainError, match="unknown closed-form field"):
        CoefficientField.closed_form("spiral")


def test_real_coefficients_flag():
    grid = Grid(3, 3)
    assert assemble(grid, CoefficientField.closed_form("rotating"), BoundarySpec.neumann()).real_coefficients
    assert not assemble(grid, CoefficientField.closed_form("complex_drift"), BoundarySpec.neumann()).real_coefficients


def test_dirichlet_nodes():
    grid = Grid(3, 4)
    assert BoundarySpec.all_dirichlet().dirichlet_nodes(grid).shape[0] == grid.n_nodes - 2 * 3
    left_half = BoundarySpec.from_sides(left=[(0.0, 0.5)]).dirichlet_nodes(grid)
    np.testing.assert_array_equal(left_half, [grid.node_index(0, k) for k in range(3)])
    assert BoundarySpec.neumann().dirichlet_nodes(grid).shape[0] == 0


def test_boundary_spec_validates_intervals():
    with pytest.raises(DomainError):
        BoundarySpec.from_sides(top=[(0.6, 0.4)])
    with pytest.raises(DomainError):
        BoundarySpec.from_sides(middle=[(0.0, 1.0)])


def test_restricted_operator(skew_dirichlet_form):
    form = skew_dirichlet_form
    assert form.a.shape == (49, 49)
    np.testing.assert_array_equal(form.a, form.a_full[np.ix_(form.free_nodes, form.free_nodes)])
    assert not form.needs_shift
    np.testing.assert_allclose(form.operator(0.5), form.a + 0.5 * np.eye(49))


def test_fully_constrained_operator_is_empty():
    form = assemble(Grid(1, 1), CoefficientField.constant(SKEW), BoundarySpec.all_dirichlet())
    with pytest.raises(DomainError):
        form.operator()


def test_problem_assembles():
    problem = EllipticProblem(Grid(3, 3), CoefficientField.closed_form("skew"), BoundarySpec.from_sides(left=[(0, 1)]))
    form = problem.assemble()
    assert form.a.shape == (12, 12)
    assert form.field_angles.kappa == pytest.approx(math.pi / 4)


@pytest.mark.parametrize("name", ["skew", "rotating", "complex_drift"])
def test_numerical_range_inside_field_sector(name):
    form = assemble(Grid(6, 6), CoefficientField.closed_form(name), BoundarySpec.from_sides(left=[(0, 1)], top=[(0, 0.5)]))
    assert verify_sector_containment(form.a, form.field_angles.kappa, 360).passed


def test_assemble_matrix_checks_shape():
    with pytest.raises(ShapeError):
        assemble_matrix(Grid(2, 2), np.zeros((3, 2, 2)))


def test_form_value_checks_dimension(skew_dirichlet_form):
    with pytest.raises(ShapeError, match="dimension mismatch"):
        form_value(skew_dirichlet_form, np.ones(3))


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_nonfinite_coefficients_rejected(bad):
    with pytest.raises(DomainError, match="finite"):
        CoefficientField.constant([[bad, 0.0], [0.0, 1.0]])
    with pytest.raises(DomainError, match="finite"):
        CoefficientField.from_table([np.eye(2), [[1.0, bad], [0.0, 1.0]]])


def test_form_values_of_random_tables_stay_in_field_sector(rng):
    mixed = BoundarySpec.from_sides(left=[(0.0, 1.0)], top=[(0.25, 0.75)])
    for k in range(200):
        grid = Grid(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        bc = mixed if k % 2 else BoundarySpec.neumann()
        form = assemble(grid, random_coercive_table(rng, grid), bc)
        u = random_nodal_vector(rng, grid)
        u[form.dirichlet_nodes] = 0.0
        value = form_value(form, u)
        assert sector_contains(value, form.field_angles.kappa, 1e-9), (k, value, form.field_angles)


def test_perturbed_witness_approaches_sharp_angle(rng):
    form = assemble(Grid(8, 8), CoefficientField.constant(SKEW), BoundarySpec.neumann())
    witness = skew_witness(form.grid)
    for scale in (1e-1, 1e-2, 1e-3, 1e-4):
        angle = abs(np.angle(form_value(form, witness + scale * random_nodal_vector(rng, form.grid))))
        assert angle <= math.pi / 4 + 1e-9
    assert math.pi / 4 - angle < 1e-3


def test_random_vectors_stay_below_sharp_angle(rng):
    form = assemble(Grid(4, 4), CoefficientField.constant(SKEW), BoundarySpec.neumann())
    angles = [abs(np.angle(form_value(form, random_nodal_vector(rng, form.grid)))) for _ in range(500)]
    assert max(angles) <= math.pi / 4 + 1e-9


def test_assembly_is_linear_in_mu(rng):
    grid = Grid(5, 4)
    bc = BoundarySpec.from_sides(left=[(0.0, 1.0)], bottom=[(0.0, 0.5)])
    first, second = random_coercive_table(rng, grid), random_coercive_table(rng, grid)
    total = CoefficientField.from_table(first.table + second.table)
    np.testing.assert_allclose(
        assemble(grid, total, bc).a_full,
        assemble(grid, first, bc).a_full + assemble(grid, second, bc).a_full,
        atol=1e-12,
    )


def test_restricted_matrix_reproduces_form_value(rng):
    grid = Grid(5, 4)
    form = assemble(
        grid, random_coercive_table(rng, grid), BoundarySpec.from_sides(right=[(0.0, 1.0)], top=[(0.0, 0.4)])
    )
    u = random_nodal_vector(rng, grid)
    u[form.dirichlet_nodes] = 0.0
    free = u[form.free_nodes]
    assert form_value(form, u) == pytest.approx(np.vdot(free, form.a @ free), abs=1e-10)


@pytest.mark.parametrize("bc", [BoundarySpec.neumann(), BoundarySpec.all_dirichlet()])
def test_skew_hermitian_part_is_identity_assembly(bc):
    grid = Grid(6, 5)
    skew = assemble(grid, CoefficientField.constant(SKEW), bc).a
    identity = assemble(grid, CoefficientField.closed_form("identity"), bc).a
    np.testing.assert_allclose(0.5 * (skew + skew.conj().T), identity, atol=1e-13)
