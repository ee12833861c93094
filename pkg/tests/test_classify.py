from itertools import product

import pytest

from virtquad.classify import (
    block_decompose,
    canonical_form,
    canonical_representative,
    class_census,
    count_singular_vectors,
    find_carrying_map,
    find_singular_vector,
    is_isomorphic,
    is_similar,
    scale_form,
    split_hyperbolic,
)
from virtquad.config import Budget
from virtquad.errors import BudgetExceeded, CharacteristicMismatch, NonTrivialRadical, NotSingular
from virtquad.field import make_field
from virtquad.linalg import MatrixF, apply, invertible_p, vector
from virtquad.models import FormKind, SquareClass
from virtquad.quadratic import QuadraticSpace, all_vectors, carries, evaluate_codes, pullback


def form(spec, rows):
    return QuadraticSpace.from_rows(spec, rows)


def test_find_singular_vector(gf2, gf3):
    v = find_singular_vector(form(gf3, [[0, 1], [0, 0]]))
    assert [x.value for x in v] == [0, 1]
    assert find_singular_vector(form(gf2, [[1, 1], [0, 1]])) is None
    assert find_singular_vector(form(gf3, [[1]])) is None


def test_find_singular_vector_needs_trivial_radical(gf2):
    with pytest.raises(NonTrivialRadical):
        find_singular_vector(form(gf2, [[1, 0], [0, 1]]))


def test_split_whole_plane(gf3):
    split = split_hyperbolic(form(gf3, [[0, 1], [0, 0]]), vector(gf3, [0, 1]))
    assert split.residual.n == 0
    assert split.complement.is_zero()


def test_split_leaves_a_line(gf3):
    qs = form(gf3, [[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    split = split_hyperbolic(qs, vector(gf3, [0, 1, 0]))
    assert split.residual.coeffs.codes() == [[1]]


def test_split_leaves_the_minus_plane(gf2):
    qs = form(gf2, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
    split = split_hyperbolic(qs, vector(gf2, [0, 1, 0, 0]))
    minus = canonical_representative(gf2, 2, FormKind.MINUS)
    assert is_isomorphic(split.residual, minus)


def test_split_needs_singular_vector(gf3):
    with pytest.raises(NotSingular):
        split_hyperbolic(form(gf3, [[0, 1], [0, 0]]), vector(gf3, [1, 1]))


def test_canonical_form_examples(gf2, gf3):
    report = canonical_form(form(gf2, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]))
    assert report.canonical_kind == FormKind.PLUS
    assert report.witt_index == 2

    report = canonical_form(form(gf2, [[1, 1], [0, 1]]))
    assert report.canonical_kind == FormKind.MINUS
    assert report.witt_index == 0
    assert report.e_used.value == 1

    report = canonical_form(form(gf3, [[0, 2, 0], [0, 0, 0], [0, 0, 1]]))
    assert report.canonical_kind == FormKind.ODD_DIM
    assert report.witt_index == 1


def test_canonical_transform_carries_to_normal_form(gf4, gf5):
    for qs in (
        form(gf5, [[2, 1, 0], [0, 3, 4], [0, 0, 1]]),
        form(gf4, [[2, 1, 0], [0, 3, 0], [0, 0, 1]]),
        form(gf5, [[1, 0], [0, 1]]),
    ):
        report = canonical_form(qs)
        assert carries(qs, QuadraticSpace(qs.spec, qs.n, report.canonical_coeffs), report.transform)


def test_square_classes_in_odd_characteristic(gf3):
    square = canonical_form(form(gf3, [[1]]))
    nonsquare = canonical_form(form(gf3, [[2]]))
    assert square.square_class == SquareClass.SQUARE
    assert nonsquare.square_class == SquareClass.NONSQUARE
    assert square.similarity_key() == nonsquare.similarity_key()
    assert not is_isomorphic(form(gf3, [[1]]), form(gf3, [[2]]))
    assert is_similar(form(gf3, [[1]]), form(gf3, [[2]]))


def test_canonical_form_rejects_radical(gf2):
    with pytest.raises(NonTrivialRadical):
        canonical_form(form(gf2, [[1, 0], [0, 1]]))


def test_is_isomorphic_examples(gf2, gf3):
    assert is_isomorphic(form(gf3, [[0, 1], [0, 0]]), form(gf3, [[0, 2], [0, 0]]))
    assert not is_isomorphic(form(gf2, [[0, 1], [0, 0]]), form(gf2, [[1, 1], [0, 1]]))
    qs = form(gf3, [[1, 1], [0, 2]])
    assert is_isomorphic(qs, qs)


def test_is_isomorphic_with_radicals(gf2):
    a = form(gf2, [[1, 0], [0, 1]])
    b = form(gf2, [[1, 0], [0, 0]])
    assert is_isomorphic(a, b)
    assert not is_isomorphic(a, form(gf2, [[0, 0], [0, 0]]))


def test_find_carrying_map(gf3):
    a = form(gf3, [[0, 1], [0, 0]])
    b = form(gf3, [[0, 2], [0, 0]])
    m = find_carrying_map(a, b)
    assert m is not None
    assert carries(a, b, m)


def test_scale_form(gf5):
    qs = scale_form(form(gf5, [[1, 2], [0, 3]]), gf5.from_int(2))
    assert qs.coeffs.codes() == [[2, 4], [0, 1]]


def test_singular_vector_counts(gf2, gf3):
    assert count_singular_vectors(form(gf3, [[0, 1], [0, 0]])) == 5
    assert count_singular_vectors(form(gf2, [[1, 1], [0, 1]])) == 1
    hyperbolic = form(gf2, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    assert count_singular_vectors(hyperbolic) == 10


@pytest.mark.parametrize("p,d,n,expected", [
    (2, 1, 1, 1),
    (2, 1, 2, 2),
    (2, 1, 3, 1),
    (2, 1, 4, 2),
    (3, 1, 1, 1),
    (3, 1, 2, 2),
    (2, 2, 1, 1),
    (2, 2, 2, 2),
    (5, 1, 1, 1),
    (5, 1, 2, 2),
])
def test_class_census(p, d, n, expected):
    report = class_census(make_field(p, d), n)
    assert report.class_count == expected
    assert report.match


def test_census_square_class_tallies(gf3):
    report = class_census(gf3, 1)
    (cls,) = report.classes
    assert cls.count == 2
    assert cls.square_classes == {"square": 1, "nonsquare": 1}


@pytest.mark.slow
def test_class_census_gf5_dim3(gf5):
    assert class_census(gf5, 3).class_count == 1


def test_census_respects_scan_budget(gf3):
    with pytest.raises(BudgetExceeded):
        class_census(gf3, 3, Budget(max_scan=100))


def test_block_decompose_minus_plane(gf2):
    qs = form(gf2, [[1, 1], [0, 1]])
    blocks = block_decompose(qs)
    assert [b.kind for b in blocks.blocks] == ["plane"]
    assert blocks.blocks[0].a.value == 1 and blocks.blocks[0].b.value == 1
    assert pullback(qs, blocks.transform).coeffs == blocks.coeffs


def test_block_decompose_odd_dimension(gf4):
    qs = form(gf4, [[0, 1, 0], [0, 0, 0], [0, 0, 3]])
    blocks = block_decompose(qs)
    assert sorted(b.kind for b in blocks.blocks) == ["plane", "square"]
    assert pullback(qs, blocks.transform).coeffs == blocks.coeffs


def test_block_decompose_needs_characteristic_two(gf3):
    with pytest.raises(CharacteristicMismatch):
        block_decompose(form(gf3, [[0, 1], [0, 0]]))


def test_canonical_representative_nonsquare_in_characteristic_two(gf2):
    with pytest.raises(CharacteristicMismatch):
        canonical_representative(gf2, 1, FormKind.ODD_DIM, SquareClass.NONSQUARE)


def every_form(spec, n):
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for values in product(range(spec.q), repeat=len(cells)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, values):
            rows[i][j] = v
        yield form(spec, rows)


def orbit_keys(spec, n):
    """Map each form to the smallest value table in its GL(n) orbit, by brute force."""
    vectors = all_vectors(spec, n)
    index = {tuple(x.value for x in v): i for i, v in enumerate(vectors)}
    perms = []
    for values in product(range(spec.q), repeat=n * n):
        m = MatrixF.from_rows(spec, [list(values[i * n:(i + 1) * n]) for i in range(n)])
        if invertible_p(m):
            perms.append([index[tuple(y.value for y in apply(m, v))] for v in vectors])

    def key(qs):
        c = qs.coeffs.codes()
        table = [evaluate_codes(spec, c, [x.value for x in v]) for v in vectors]
        return min(tuple(table[i] for i in perm) for perm in perms), table.count(0)

    return key


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_isomorphism_agrees_with_brute_force(p, n):
    spec = make_field(p)
    key = orbit_keys(spec, n)
    keyed = [(qs, *key(qs)) for qs in every_form(spec, n)]
    reps = {}
    for qs, k, _ in keyed:
        reps.setdefault(k, qs)

    for qs, k, _ in keyed:
        for rk, rep in reps.items():
            assert is_isomorphic(qs, rep) == (k == rk)
            m = find_carrying_map(qs, rep)
            if k == rk:
                assert m is not None and carries(qs, rep, m)
            else:
                assert m is None


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3)])
def test_singular_count_is_a_class_invariant(p, n):
    spec = make_field(p)
    key = orbit_keys(spec, n)
    counts = {}
    for qs in every_form(spec, n):
        k, zeros = key(qs)
        assert count_singular_vectors(qs) == zeros
        assert counts.setdefault(k, zeros) == zeros
