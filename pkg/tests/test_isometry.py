import random

import pytest

from virtquad import config
from virtquad.config import Budget
from virtquad.embedding import embed_ambient
from virtquad.errors import BudgetExceeded, Degenerate, InvariantViolation, NotMinimal, ParityMismatch
from virtquad.field import make_field
from virtquad.isometry import (
    check_group_axioms,
    enumerate_cell,
    enumerate_isometries,
    enumerate_virtual_isometries,
    fixes_pointwise,
    kernel_of_restriction,
    order_formula,
    restrict_to_u,
    restriction_map,
    verify_cell,
    verify_orders,
)
from virtquad.linalg import MatrixF, SubspaceF, kernel
from virtquad.models import CheckStatus, IsometrySet, Semantics
from virtquad.quadratic import QuadraticSpace, VirtualQuadraticSpace, is_isometry
from virtquad.search import carrying_maps


def form(spec, rows):
    return QuadraticSpace.from_rows(spec, rows)


def odd_form(spec):
    return form(spec, [[0, 1, 0], [0, 0, 0], [0, 0, 1]])


def test_enumerate_small_groups(gf2, budget):
    plane = enumerate_isometries(form(gf2, [[0, 1], [0, 0]]), budget)
    assert plane.order == 2
    assert [m.codes() for m in plane.elements] == [[[0, 1], [1, 0]], [[1, 0], [0, 1]]]
    assert enumerate_isometries(form(gf2, [[1, 1], [0, 1]]), budget).order == 6
    assert enumerate_isometries(odd_form(gf2), budget).order == 6


def test_every_enumerated_map_is_an_isometry(gf3, budget):
    qs = form(gf3, [[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    group = enumerate_isometries(qs, budget)
    assert group.order == 48
    assert all(is_isometry(qs, m) for m in group.elements)
    assert check_group_axioms(group)


def test_virtual_isometries(gf2, gf3, budget):
    vqs = embed_ambient(odd_form(gf2))
    group = enumerate_virtual_isometries(vqs, budget)
    assert group.order == 12
    assert fixes_pointwise(group, vqs.u_perp)

    plane = VirtualQuadraticSpace(form(gf3, [[0, 1], [0, 0]]), SubspaceF.full(gf3, 2))
    assert enumerate_virtual_isometries(plane, budget).order == 4
    assert enumerate_virtual_isometries(plane, budget).keys() == enumerate_isometries(plane.ambient, budget).keys()


def test_node_budget(gf2):
    with pytest.raises(BudgetExceeded):
        enumerate_isometries(odd_form(gf2), Budget(max_nodes=3))


def test_dimension_cap(gf2):
    with pytest.raises(BudgetExceeded):
        enumerate_isometries(odd_form(gf2), Budget(max_dim=2))


def test_carrying_maps_limit(gf3, budget):
    plane = form(gf3, [[0, 1], [0, 0]])
    outcome = carrying_maps(plane, plane, budget, limit=1)
    assert len(outcome.maps) == 1
    assert outcome.nodes > 0


@pytest.mark.parametrize("q,dim,epsilon,semantics,expected", [
    (2, 2, 1, Semantics.CLASSICAL, 2),
    (2, 2, -1, Semantics.CLASSICAL, 6),
    (3, 2, 1, Semantics.CLASSICAL, 4),
    (3, 2, -1, Semantics.CLASSICAL, 8),
    (5, 2, -1, Semantics.CLASSICAL, 12),
    (2, 4, 1, Semantics.CLASSICAL, 72),
    (2, 4, -1, Semantics.CLASSICAL, 120),
    (3, 3, None, Semantics.VIRTUAL, 48),
    (3, 3, None, Semantics.CLASSICAL, 48),
    (5, 3, None, Semantics.VIRTUAL, 240),
    (2, 3, None, Semantics.CLASSICAL, 6),
    (2, 3, None, Semantics.VIRTUAL, 12),
    (4, 3, None, Semantics.CLASSICAL, 60),
    (4, 3, None, Semantics.VIRTUAL, 120),
    (2, 5, None, Semantics.VIRTUAL, 1440),
    (2, 1, None, Semantics.VIRTUAL, 2),
    (2, 1, None, Semantics.CLASSICAL, 1),
])
def test_order_formula(q, dim, epsilon, semantics, expected):
    assert order_formula(q, dim, epsilon, semantics) == expected


def test_order_formula_is_exact_for_large_inputs():
    assert order_formula(7, 6, -1) == 2 * 7**6 * (7**3 + 1) * (7**2 - 1) * (7**4 - 1)


def test_order_formula_parity_checks():
    with pytest.raises(ParityMismatch):
        order_formula(3, 2, None)
    with pytest.raises(ParityMismatch):
        order_formula(3, 3, 1)


@pytest.mark.parametrize("q,dim,epsilon,semantics", [
    (2, 2, 1, Semantics.CLASSICAL),
    (2, 2, -1, Semantics.CLASSICAL),
    (3, 2, -1, Semantics.CLASSICAL),
    (5, 2, -1, Semantics.CLASSICAL),
    (2, 3, None, Semantics.VIRTUAL),
    (3, 3, None, Semantics.VIRTUAL),
    (4, 3, None, Semantics.VIRTUAL),
    (2, 4, -1, Semantics.CLASSICAL),
])
def test_enumeration_matches_formula(q, dim, epsilon, semantics, budget):
    assert enumerate_cell(q, dim, epsilon, semantics, budget).order == order_formula(q, dim, epsilon, semantics)


@pytest.mark.slow
def test_enumeration_matches_formula_dim5(budget):
    assert enumerate_cell(2, 5, None, Semantics.VIRTUAL, budget).order == 1440


def test_restriction_map_char2(gf2, budget):
    vqs = embed_ambient(odd_form(gf2))
    group = enumerate_virtual_isometries(vqs, budget)
    result = restriction_map(vqs, group, budget)
    assert result.image.order == 6
    assert result.kernel.order == 2
    assert result.surjective


def test_restriction_kernel_gf4(gf4, budget):
    vqs = embed_ambient(odd_form(gf4))
    group = enumerate_virtual_isometries(vqs, budget)
    kernel = kernel_of_restriction(vqs, group)
    assert kernel.order == 2
    fixed = SubspaceF.span(gf4, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert fixes_pointwise(kernel, fixed)


def test_restriction_trivial_when_u_is_v(gf3, budget):
    vqs = VirtualQuadraticSpace(form(gf3, [[0, 1], [0, 0]]), SubspaceF.full(gf3, 2))
    group = enumerate_virtual_isometries(vqs, budget)
    result = restriction_map(vqs, group, budget)
    assert result.kernel.order == 1
    assert result.image.order == group.order
    assert result.surjective


def test_restriction_needs_minimal_space(gf3, budget):
    ambient = form(gf3, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    vqs = VirtualQuadraticSpace(ambient, SubspaceF.span(gf3, 4, [[1, 0, 0, 0], [0, 1, 0, 0]]))
    with pytest.raises(NotMinimal):
        restriction_map(vqs, enumerate_virtual_isometries(vqs, budget))


def test_restriction_needs_nondegenerate_u(gf2, budget):
    vqs = embed_ambient(form(gf2, [[1, 0], [0, 1]]))
    with pytest.raises(Degenerate):
        restriction_map(vqs, enumerate_virtual_isometries(vqs, budget))


def test_group_axioms_reject_a_non_group(gf2, budget):
    group = enumerate_isometries(form(gf2, [[1, 1], [0, 1]]), budget)
    identity = MatrixF.identity(gf2, 2).key()
    group.elements = [m for m in group.elements if m.key() != identity]
    assert not check_group_axioms(group)


def test_group_axioms_sampled(gf2, budget):
    group = enumerate_cell(2, 4, -1, Semantics.CLASSICAL, budget)
    assert group.order == 120
    assert check_group_axioms(group, random.Random(7), samples=20)


def test_verify_orders(budget):
    reports = verify_orders([2, 3], [1, 2, 3], budget)
    assert len(reports) == 12
    assert all(r.status == CheckStatus.MATCH for r in reports)


def test_verify_orders_reports_skipped_cells():
    reports = verify_orders([2], [4], Budget(max_nodes=10))
    assert [r.status for r in reports] == [CheckStatus.SKIPPED, CheckStatus.SKIPPED]
    assert all(r.reason for r in reports)


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2)])
def test_group_does_not_depend_on_the_ambient(p, d, budget):
    spec = make_field(p, d)
    plain = embed_ambient(odd_form(spec))
    twisted = embed_ambient(odd_form(spec), twist=1)
    assert plain.ambient.coeffs.codes() != twisted.ambient.coeffs.codes()
    a = enumerate_virtual_isometries(plain, budget)
    b = enumerate_virtual_isometries(twisted, budget)
    assert a.order == b.order
    assert {restrict_to_u(plain, m).key() for m in a.elements} == {
        restrict_to_u(twisted, m).key() for m in b.elements
    }


def five_dim_form(spec):
    rows = [[0] * 5 for _ in range(5)]
    rows[0][1] = rows[2][3] = rows[4][4] = 1
    return form(spec, rows)


@pytest.mark.parametrize("p,d,order,image", [(2, 1, 12, 6), (2, 2, 120, 60)])
def test_restriction_is_onto_with_kernel_of_order_two(p, d, order, image, budget):
    vqs = embed_ambient(odd_form(make_field(p, d)))
    group = enumerate_virtual_isometries(vqs, budget)
    assert group.order == order
    result = restriction_map(vqs, group, budget)
    assert result.image.order == image
    assert result.kernel.order == 2
    assert result.surjective
    assert result.image.keys() == enumerate_isometries(vqs.form, budget).keys()


@pytest.mark.slow
def test_restriction_is_onto_in_dimension_five(gf2, budget):
    vqs = embed_ambient(five_dim_form(gf2))
    group = enumerate_virtual_isometries(vqs, budget)
    assert group.order == 1440
    result = restriction_map(vqs, group, budget)
    assert result.image.order == 720
    assert result.kernel.order == 2
    assert result.surjective


def test_restriction_without_budget_leaves_surjectivity_open(gf2, budget):
    vqs = embed_ambient(odd_form(gf2))
    result = restriction_map(vqs, enumerate_virtual_isometries(vqs, budget))
    assert result.surjective is None
    assert result.image.order == 6


def test_restriction_rejects_a_set_that_is_not_a_group(gf3, budget):
    vqs = VirtualQuadraticSpace(form(gf3, [[0, 1], [0, 0]]), SubspaceF.full(gf3, 2))
    group = enumerate_virtual_isometries(vqs, budget)
    identity = MatrixF.identity(gf3, 2).key()
    kept = [m for m in group.elements if m.key() == identity] + [
        m for m in group.elements if m.key() != identity
    ][:2]
    broken = IsometrySet(space=vqs, order=len(kept), method=group.method, elements=kept)
    with pytest.raises(InvariantViolation):
        restriction_map(vqs, broken)


@pytest.mark.parametrize("d", [1, 2])
def test_isometries_fix_u_perp_and_n(d, budget):
    spec = make_field(2, d)
    vqs = embed_ambient(odd_form(spec))
    assert fixes_pointwise(enumerate_virtual_isometries(vqs, budget), vqs.u_perp)

    u_group = enumerate_isometries(vqs.form, budget)
    n_in_u = kernel(vqs.form.gram)
    assert n_in_u.dim == 1
    assert fixes_pointwise(u_group, n_in_u)


def test_fixes_pointwise_detects_a_moved_vector(gf3, budget):
    plane = form(gf3, [[0, 1], [0, 0]])
    group = enumerate_isometries(plane, budget)
    assert not fixes_pointwise(group, SubspaceF.span(gf3, 2, [[1, 0]]))


def test_cell_without_arithmetic_tables_is_skipped(monkeypatch, budget):
    monkeypatch.setattr(config, "VQS_TABLE_LIMIT", 2)
    report = verify_cell(3, 1, None, Semantics.CLASSICAL, budget)
    assert report.status == CheckStatus.SKIPPED
    assert report.enumerated_value is None
    assert "tables" in report.reason
