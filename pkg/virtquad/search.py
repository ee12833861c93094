"""Backtracking search for linear maps carrying one quadratic form to another.

A map phi with Q_t(phi x) = Q_s(x) is fixed by the images of a basis s_1..s_n
of the source, and the condition holds exactly when

    Q_t(img_i) = Q_s(s_i)  and  B_t(img_i, img_j) = B_s(s_i, s_j)  (j < i).

Images are chosen level by level in lexicographic order, with an incremental
echelon keeping them linearly independent. Some leading basis vectors may
have their images fixed, which is how "fixes a subspace pointwise" is
enforced. All inner loops work on integer element codes.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from . import config
from .errors import BudgetExceeded, FieldTooLarge, MixedFields, ShapeMismatch
from .field import FieldSpec
from .linalg import MatrixF, SubspaceF, Vector, inverse
from .quadratic import QuadraticSpace, evaluate_codes

logger = logging.getLogger(__name__)


@dataclass
class SearchOutcome:
    maps: list[MatrixF]
    nodes: int


def check_scan(spec: FieldSpec, n: int, budget: config.Budget, what: str = "scan"):
    """Refuse exhaustive work over GF(q)^n beyond the configured caps."""
    size = spec.q ** n
    if size > budget.max_scan:
        raise BudgetExceeded(f"{what} over GF({spec.q})^{n} needs {size} vectors (cap {budget.max_scan})")
    if spec.q > config.VQS_TABLE_LIMIT:
        raise FieldTooLarge(f"{what} over {spec} needs arithmetic tables (limit {config.VQS_TABLE_LIMIT})")


def _check_caps(spec: FieldSpec, n: int, budget: config.Budget):
    if n > budget.max_dim:
        raise BudgetExceeded(f"dimension {n} exceeds the search cap {budget.max_dim}")
    if spec.q > budget.max_q:
        raise BudgetExceeded(f"field order {spec.q} exceeds the search cap {budget.max_q}")
    check_scan(spec, n, budget, "isometry search")


class _Echelon:
    """Rows kept reduced at their pivots, for incremental independence tests."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.rows: list[tuple[int, list[int]]] = []

    def reduce(self, v: Sequence[int]) -> list[int]:
        spec = self.spec
        x = list(v)
        for c, row in self.rows:
            f = x[c]
            if f:
                x = [spec.sub(a, spec.mul(f, b)) for a, b in zip(x, row)]
        return x

    def push(self, v: Sequence[int]) -> bool:
        """Add v if it is independent of the rows so far."""
        x = self.reduce(v)
        c = next((i for i, a in enumerate(x) if a), None)
        if c is None:
            return False
        inv = self.spec.inv(x[c])
        self.rows.append((c, [self.spec.mul(inv, a) for a in x]))
        return True

    def pop(self):
        self.rows.pop()


def _source_basis(spec: FieldSpec, n: int, fixed: Sequence[Vector]) -> tuple[list[list[int]], int]:
    """Canonical rows of span(fixed), then unit vectors at its non-pivot columns."""
    span = SubspaceF.span(spec, n, list(fixed))
    rows = span.basis.codes()
    pivots = set(span.pivots)
    rows += [[int(i == j) for j in range(n)] for i in range(n) if i not in pivots]
    return rows, span.dim


def carrying_maps(
    source: QuadraticSpace,
    target: QuadraticSpace,
    budget: config.Budget = config.DEFAULT_BUDGET,
    fixed: Sequence[Vector] = (),
    limit: Optional[int] = None,
) -> SearchOutcome:
    """
    Invertible maps phi with Q_target(phi x) = Q_source(x), sorted by matrix key.

    Vectors in `fixed` (source coordinates; source and target must then
    coincide) are mapped to themselves. Every candidate image examined
    counts as one node against budget.max_nodes. With `limit` the search
    stops after that many maps.
    """
    if source.spec is not target.spec and source.spec != target.spec:
        raise MixedFields(f"forms over {source.spec} and {target.spec}")
    if source.n != target.n:
        raise ShapeMismatch(f"no invertible map between dimensions {source.n} and {target.n}")
    spec, n, q = source.spec, source.n, source.spec.q
    _check_caps(spec, n, budget)
    if n == 0:
        return SearchOutcome([MatrixF.identity(spec, 0)], 0)

    basis, n_fixed = _source_basis(spec, n, fixed)
    cs, ct = source.coeffs.codes(), target.coeffs.codes()
    gs, gt = source.gram.codes(), target.gram.codes()

    def bil(g: list[list[int]], x: Sequence[int], y: Sequence[int]) -> int:
        acc = 0
        for i in range(n):
            if x[i]:
                inner = 0
                for j in range(n):
                    if g[i][j] and y[j]:
                        inner = spec.add(inner, spec.mul(g[i][j], y[j]))
                acc = spec.add(acc, spec.mul(x[i], inner))
        return acc

    want_q = [evaluate_codes(spec, cs, s) for s in basis]
    want_b = [[bil(gs, basis[i], basis[j]) for j in range(i)] for i in range(n)]

    # target vectors bucketed by Q-value, each bucket in lexicographic order
    buckets: dict[int, list[tuple[int, ...]]] = {}
    for x in product(range(q), repeat=n):
        if any(x):
            buckets.setdefault(evaluate_codes(spec, ct, x), []).append(x)

    images: list[Sequence[int]] = []
    functionals: list[list[int]] = []  # row j holds B_t(img_j, .)
    echelon = _Echelon(spec)
    found: list[list[Sequence[int]]] = []
    nodes = 0

    def functional(img: Sequence[int]) -> list[int]:
        out = []
        for col in range(n):
            acc = 0
            for i in range(n):
                if img[i] and gt[i][col]:
                    acc = spec.add(acc, spec.mul(img[i], gt[i][col]))
            out.append(acc)
        return out

    for i in range(n_fixed):
        images.append(basis[i])
        functionals.append(functional(basis[i]))
        echelon.push(basis[i])

    def descend(level: int) -> bool:
        nonlocal nodes
        if level == n:
            found.append(list(images))
            return limit is not None and len(found) >= limit
        targets = want_b[level]
        for x in buckets.get(want_q[level], ()):
            nodes += 1
            if nodes > budget.max_nodes:
                raise BudgetExceeded(f"isometry search exceeded {budget.max_nodes} nodes")
            ok = True
            for j in range(level):
                row = functionals[j]
                acc = 0
                for c in range(n):
                    if x[c] and row[c]:
                        acc = spec.add(acc, spec.mul(row[c], x[c]))
                if acc != targets[j]:
                    ok = False
                    break
            if not ok or not echelon.push(x):
                continue
            images.append(x)
            functionals.append(functional(x))
            stop = descend(level + 1)
            images.pop()
            functionals.pop()
            echelon.pop()
            if stop:
                return True
        return False

    descend(n_fixed)

    s_inv = inverse(MatrixF._from_codes(spec, n, n, [basis[j][i] for i in range(n) for j in range(n)]))
    maps = []
    for imgs in found:
        img_cols = MatrixF._from_codes(spec, n, n, [imgs[j][i] for i in range(n) for j in range(n)])
        maps.append(img_cols @ s_inv)
    maps.sort(key=MatrixF.key)
    logger.debug("carrying-map search over GF(%d)^%d: %d maps, %d nodes", q, n, len(maps), nodes)
    return SearchOutcome(maps, nodes)
