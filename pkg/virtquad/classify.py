"""Canonical forms, isomorphism tests and the class census."""

import logging
from itertools import product
from typing import Optional

from . import config
from .embedding import symplectic_basis
from .errors import (
    BudgetExceeded,
    CharacteristicMismatch,
    InRadical,
    InvariantViolation,
    MixedFields,
    NonTrivialRadical,
    NotSingular,
    ParityMismatch,
    ShapeMismatch,
)
from .field import FieldElement, FieldSpec, find_canonical_e, is_square, sqrt
from .linalg import MatrixF, SubspaceF, Vector, apply, invertible_p, kernel, perp, solve
from .models import (
    Block,
    BlockDecomposition,
    CensusClass,
    CensusReport,
    CharParity,
    ClassificationReport,
    FormKind,
    SplitResult,
    SquareClass,
)
from .quadratic import (
    QuadraticSpace,
    bilinear,
    carries,
    evaluate,
    evaluate_codes,
    pullback,
    radical,
    restrict,
)
from .search import carrying_maps, check_scan

logger = logging.getLogger(__name__)


def _require_trivial_radical(qs: QuadraticSpace):
    rad = radical(qs)
    if not rad.is_zero():
        raise NonTrivialRadical(f"radical has dimension {rad.dim}")


def find_singular_vector(
    qs: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET
) -> Optional[Vector]:
    """First nonzero v with Q(v) = 0 in lexicographic order, or None."""
    _require_trivial_radical(qs)
    spec, n = qs.spec, qs.n
    check_scan(spec, n, budget, "singular-vector scan")
    c = qs.coeffs.codes()
    for x in product(range(spec.q), repeat=n):
        if any(x) and evaluate_codes(spec, c, x) == 0:
            return tuple(FieldElement(spec, a) for a in x)
    return None


def count_singular_vectors(qs: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET) -> int:
    """|{x : Q(x) = 0}|, the origin included."""
    spec = qs.spec
    check_scan(spec, qs.n, budget, "singular-vector count")
    c = qs.coeffs.codes()
    return sum(1 for x in product(range(spec.q), repeat=qs.n) if evaluate_codes(spec, c, x) == 0)


def split_hyperbolic(qs: QuadraticSpace, v: Vector) -> SplitResult:
    """
    Split off a hyperbolic plane <v, w'> carrying Q = xy.

    w is the lexicographically smallest solution of B(v, w) = 1 and
    w' = w - Q(w) v, so Q(w') = 0.
    """
    if len(v) != qs.n:
        raise ShapeMismatch(f"vector of length {len(v)} for a form of dimension {qs.n}")
    spec = qs.spec
    if not evaluate(qs, v).is_zero():
        raise NotSingular(f"Q{tuple(str(x) for x in v)} is not zero")
    row = MatrixF.from_rows(spec, [v], cols=qs.n) @ qs.gram
    w = solve(row, [spec.one])
    if w is None:
        raise InRadical("singular vector lies in the kernel of B")
    qw = evaluate(qs, w)
    w2 = tuple(a - qw * b for a, b in zip(w, v))
    plane = SubspaceF.span(spec, qs.n, [v, w2])
    complement = perp(plane, qs.gram)
    return SplitResult(plane=(tuple(v), w2), complement=complement, residual=restrict(qs, complement))


def _plane_rows(spec: FieldSpec, k: int, size: int) -> list[list[FieldElement]]:
    rows = [[spec.zero] * size for _ in range(size)]
    for i in range(k):
        rows[2 * i][2 * i + 1] = spec.one
    return rows


def canonical_representative(
    spec: FieldSpec, n: int, kind: FormKind, square_class: SquareClass = SquareClass.SQUARE
) -> QuadraticSpace:
    """
    The normal form of the given type.

    plus: x1x2 + ... + x_{n-1}x_n. minus: planes plus x^2 + xy + e y^2 in
    characteristic 2, x^2 - e y^2 otherwise. odd_dim: planes plus x^2, or
    e x^2 for the nonsquare class in odd characteristic.
    """
    kind = FormKind(kind)
    if kind == FormKind.PLUS:
        if n % 2:
            raise ParityMismatch(f"plus type needs even dimension, got {n}")
        rows = _plane_rows(spec, n // 2, n)
    elif kind == FormKind.MINUS:
        if n % 2 or n < 2:
            raise ParityMismatch(f"minus type needs even dimension at least 2, got {n}")
        e = find_canonical_e(spec)
        rows = _plane_rows(spec, n // 2 - 1, n)
        rows[n - 2][n - 2] = spec.one
        if spec.is_even:
            rows[n - 2][n - 1] = spec.one
            rows[n - 1][n - 1] = e
        else:
            rows[n - 1][n - 1] = -e
    else:
        if n % 2 == 0:
            raise ParityMismatch(f"odd_dim type needs odd dimension, got {n}")
        square_class = SquareClass(square_class)
        if square_class == SquareClass.NONSQUARE and spec.is_even:
            raise CharacteristicMismatch("every element is a square in characteristic 2")
        rows = _plane_rows(spec, n // 2, n)
        rows[n - 1][n - 1] = find_canonical_e(spec) if square_class == SquareClass.NONSQUARE else spec.one
    return QuadraticSpace(spec, n, MatrixF.from_rows(spec, rows, cols=n))


def _anisotropic_plane_basis(
    residual: QuadraticSpace, t12: FieldElement, t22: FieldElement
) -> tuple[Vector, Vector]:
    """Lexicographically first (c1, c2) with Q(c1) = 1, Q(c2) = t22, B(c1, c2) = t12."""
    spec = residual.spec
    vectors = [tuple(FieldElement(spec, a) for a in x) for x in product(range(spec.q), repeat=2)]
    for c1 in vectors:
        if not evaluate(residual, c1).is_one():
            continue
        for c2 in vectors:
            if evaluate(residual, c2) == t22 and bilinear(residual, c1, c2) == t12:
                return c1, c2
    raise InvariantViolation("anisotropic plane has no basis matching the normal form")


def canonical_form(qs: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET) -> ClassificationReport:
    """
    Reduce a trivial-radical form to its normal form.

    Hyperbolic planes are split off until no singular vector is left; the
    anisotropic residual has dimension 0, 1 or 2 and fixes the type.
    """
    _require_trivial_radical(qs)
    spec, n = qs.spec, qs.n
    frame: list[Vector] = []
    embed = MatrixF.identity(spec, n)
    residual = qs
    witt = 0
    while residual.n:
        v = find_singular_vector(residual, budget)
        if v is None:
            break
        split = split_hyperbolic(residual, v)
        frame += [apply(embed, u) for u in split.plane]
        embed = embed @ split.complement.basis.transpose()
        residual = split.residual
        witt += 1

    e_used = None
    square_class = None
    r = residual.n
    if r == 0:
        kind = FormKind.PLUS
    elif r == 1:
        kind = FormKind.ODD_DIM
        c = residual.coeffs[0, 0]
        if spec.is_even or is_square(c):
            scale = sqrt(c).inverse()
            square_class = SquareClass.SQUARE
        else:
            e_used = find_canonical_e(spec)
            scale = sqrt(c / e_used).inverse()
            square_class = SquareClass.NONSQUARE
        frame.append(apply(embed, (scale,)))
    elif r == 2:
        kind = FormKind.MINUS
        e_used = find_canonical_e(spec)
        if spec.is_even:
            t12, t22 = spec.one, e_used
        else:
            t12, t22 = spec.zero, -e_used
        c1, c2 = _anisotropic_plane_basis(residual, t12, t22)
        frame += [apply(embed, c1), apply(embed, c2)]
    else:
        raise InvariantViolation(f"anisotropic residual of dimension {r}")

    target = canonical_representative(spec, n, kind, square_class or SquareClass.SQUARE)
    transform = MatrixF.from_rows(spec, frame, cols=n).transpose() if n else MatrixF.identity(spec, 0)
    if not invertible_p(transform) or not carries(qs, target, transform):
        raise InvariantViolation("canonical transform does not carry the form to its normal form")
    if (kind == FormKind.PLUS and 2 * witt != n) or (kind == FormKind.MINUS and 2 * witt + 2 != n):
        raise InvariantViolation(f"{kind.value} form of dimension {n} with Witt index {witt}")

    return ClassificationReport(
        field=spec,
        dim=n,
        char_parity=CharParity.of(spec),
        canonical_kind=kind,
        witt_index=witt,
        canonical_coeffs=target.coeffs,
        transform=transform,
        e_used=e_used,
        square_class=square_class,
    )


def _same_field(a: QuadraticSpace, b: QuadraticSpace):
    if a.spec is not b.spec and a.spec != b.spec:
        raise MixedFields(f"forms over {a.spec} and {b.spec}")


def find_carrying_map(
    a: QuadraticSpace, b: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET
) -> Optional[MatrixF]:
    """An invertible m with Q_a(m y) = Q_b(y), by backtracking search."""
    _same_field(a, b)
    if a.n != b.n:
        return None
    maps = carrying_maps(b, a, budget, limit=1).maps
    return maps[0] if maps else None


def is_isomorphic(a: QuadraticSpace, b: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET) -> bool:
    _same_field(a, b)
    if a.n != b.n:
        return False
    rad_a, rad_b = radical(a), radical(b)
    if rad_a.dim != rad_b.dim:
        return False
    if rad_a.is_zero():
        return canonical_form(a, budget).invariant_key() == canonical_form(b, budget).invariant_key()
    return find_carrying_map(a, b, budget) is not None


def scale_form(qs: QuadraticSpace, factor: FieldElement) -> QuadraticSpace:
    """The form factor * Q."""
    rows = [[factor * qs.coeffs[i, j] for j in range(qs.n)] for i in range(qs.n)]
    return QuadraticSpace(qs.spec, qs.n, MatrixF.from_rows(qs.spec, rows, cols=qs.n))


def is_similar(a: QuadraticSpace, b: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET) -> bool:
    """a is isomorphic to l * b for some nonzero l."""
    _same_field(a, b)
    if a.n != b.n:
        return False
    if radical(a).is_zero() and radical(b).is_zero():
        return canonical_form(a, budget).similarity_key() == canonical_form(b, budget).similarity_key()
    return any(
        is_isomorphic(a, scale_form(b, l), budget) for l in a.spec.elements() if not l.is_zero()
    )


def class_census(
    spec: FieldSpec, n: int, budget: config.Budget = config.DEFAULT_BUDGET
) -> CensusReport:
    """
    Count classes of non-degenerate virtual spaces of dimension n.

    Every upper-triangular coefficient matrix is enumerated; trivial-radical
    forms are bucketed by similarity. Each class keeps the first form met in
    enumeration order as representative, and the square-class tallies of its
    members.
    """
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    total = spec.q ** len(slots)
    if total > budget.max_scan:
        raise BudgetExceeded(f"census of GF({spec.q}) dim {n} needs {total} forms (cap {budget.max_scan})")
    check_scan(spec, n, budget, "census")

    classes: dict[tuple, CensusClass] = {}
    nondegenerate = 0
    for values in product(range(spec.q), repeat=len(slots)):
        codes = [[0] * n for _ in range(n)]
        for (i, j), c in zip(slots, values):
            codes[i][j] = c
        qs = QuadraticSpace(spec, n, MatrixF.from_rows(spec, codes, cols=n))
        if not radical(qs).is_zero():
            continue
        nondegenerate += 1
        report = canonical_form(qs, budget)
        key = report.similarity_key()
        bucket = classes.get(key)
        if bucket is None:
            bucket = classes[key] = CensusClass(
                kind=report.canonical_kind,
                witt_index=report.witt_index,
                count=0,
                representative=qs.coeffs,
            )
        bucket.count += 1
        if report.square_class is not None:
            sq = report.square_class.value
            bucket.square_classes[sq] = bucket.square_classes.get(sq, 0) + 1

    logger.info("census GF(%d) dim %d: %d forms, %d trivial radical, %d classes",
                spec.q, n, total, nondegenerate, len(classes))
    return CensusReport(
        field=spec,
        dim=n,
        forms_scanned=total,
        trivial_radical=nondegenerate,
        classes=[classes[k] for k in sorted(classes)],
    )


def block_decompose(qs: QuadraticSpace) -> BlockDecomposition:
    """
    Characteristic 2: an orthogonal sum of blocks a x^2 and a(x^2 + xy + b y^2).

    Plane blocks come from a symplectic basis of a complement of ker B, one
    square block per canonical basis row of ker B.
    """
    spec, n = qs.spec, qs.n
    if not spec.is_even:
        raise CharacteristicMismatch(f"block decomposition is defined in characteristic 2, not over {spec}")
    ker = kernel(qs.gram)
    pivots = set(ker.pivots)
    complement = SubspaceF.span(
        spec, n, [[int(i == j) for j in range(n)] for i in range(n) if i not in pivots]
    )

    blocks: list[Block] = []
    if not complement.is_zero():
        on_complement = restrict(qs, complement)
        sym = symplectic_basis(on_complement.gram)
        lift = complement.basis.transpose()
        vecs = [apply(lift, r) for r in sym.row_vectors()]
        for i in range(0, len(vecs), 2):
            e, f = vecs[i], vecs[i + 1]
            a, b = evaluate(qs, e), evaluate(qs, f)
            if a.is_zero() and not b.is_zero():
                e, f = f, e
            elif a.is_zero():
                e = tuple(x + y for x, y in zip(e, f))
            a, b = evaluate(qs, e), evaluate(qs, f)
            blocks.append(Block(kind="plane", a=a, b=a * b, vectors=(e, tuple(a * x for x in f))))
    for k in ker.vectors():
        blocks.append(Block(kind="square", a=evaluate(qs, k), b=None, vectors=(k,)))

    rows = [[spec.zero] * n for _ in range(n)]
    pos = 0
    for block in blocks:
        rows[pos][pos] = block.a
        if block.kind == "plane":
            rows[pos][pos + 1] = block.a
            rows[pos + 1][pos + 1] = block.a * block.b
        pos += len(block.vectors)
    coeffs = MatrixF.from_rows(spec, rows, cols=n)
    columns = [v for block in blocks for v in block.vectors]
    transform = MatrixF.from_rows(spec, columns, cols=n).transpose() if n else MatrixF.identity(spec, 0)
    if not invertible_p(transform) or pullback(qs, transform).coeffs != coeffs:
        raise InvariantViolation("block transform does not produce the block form")
    return BlockDecomposition(blocks=blocks, coeffs=coeffs, transform=transform)
