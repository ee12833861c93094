"""Quadratic spaces, their bilinear forms, radicals and isometries.

A form is stored as an upper-triangular coefficient matrix C with
Q(x) = sum_{i<=j} C_ij x_i x_j. In characteristic 2 the Gram matrix does not
determine Q, so C is the only representation used.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

from .errors import AmbientMismatch, DegenerateAmbient, FormValidationError, MixedFields, ShapeMismatch
from .field import FieldElement, FieldSpec, sqrt
from .linalg import (
    Entry,
    MatrixF,
    SubspaceF,
    Vector,
    invertible_p,
    kernel,
    perp,
    subspace_intersect,
)

logger = logging.getLogger(__name__)


def fold_upper(a: MatrixF) -> MatrixF:
    """Upper-triangular matrix defining the same form as x^T a x."""
    spec, n = a.spec, a.rows
    out = []
    for i in range(n):
        for j in range(n):
            if j < i:
                out.append(spec.zero)
            elif j == i:
                out.append(a[i, i])
            else:
                out.append(a[i, j] + a[j, i])
    return MatrixF(spec, n, n, tuple(out))


@dataclass(frozen=True)
class BilinearGram:
    """Gram matrix C + C^T of the associated bilinear form."""
    gram: MatrixF


@dataclass(frozen=True)
class QuadraticSpace:
    """(GF(q)^n, Q) with Q given by an upper-triangular coefficient matrix."""
    spec: FieldSpec
    n: int
    coeffs: MatrixF

    def __post_init__(self):
        if self.coeffs.rows != self.n or self.coeffs.cols != self.n:
            raise ShapeMismatch(f"{self.coeffs.rows}x{self.coeffs.cols} coefficients for dimension {self.n}")
        if not self.coeffs.is_upper_triangular():
            raise FormValidationError("coefficient matrix has nonzero entries below the diagonal")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[Entry]]) -> 'QuadraticSpace':
        n = len(rows)
        return cls(spec, n, MatrixF.from_rows(spec, rows, cols=n))

    @classmethod
    def zero_dim(cls, spec: FieldSpec) -> 'QuadraticSpace':
        return cls(spec, 0, MatrixF.zeros(spec, 0, 0))

    @cached_property
    def gram(self) -> MatrixF:
        return associated_bilinear(self).gram

    def __str__(self) -> str:
        terms = []
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.coeffs[i, j]
                if c.is_zero():
                    continue
                mono = f"x{i + 1}^2" if i == j else f"x{i + 1}x{j + 1}"
                terms.append(mono if c.is_one() else f"({c}){mono}")
        return ' + '.join(terms) if terms else '0'


def evaluate_codes(spec: FieldSpec, c: list[list[int]], x: Sequence[int]) -> int:
    acc = 0
    n = len(x)
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = c[i]
        inner = 0
        for j in range(i, n):
            if row[j] and x[j]:
                inner = spec.add(inner, spec.mul(row[j], x[j]))
        if inner:
            acc = spec.add(acc, spec.mul(xi, inner))
    return acc


def evaluate(qs: QuadraticSpace, x: Sequence[FieldElement]) -> FieldElement:
    """Q(x) = sum_{i<=j} C_ij x_i x_j."""
    if len(x) != qs.n:
        raise ShapeMismatch(f"vector of length {len(x)} for a form of dimension {qs.n}")
    return FieldElement(qs.spec, evaluate_codes(qs.spec, qs.coeffs.codes(), [e.value for e in x]))


def associated_bilinear(qs: QuadraticSpace) -> BilinearGram:
    """B(x, y) = Q(x + y) - Q(x) - Q(y), with Gram matrix C + C^T."""
    return BilinearGram(qs.coeffs + qs.coeffs.transpose())


def bilinear(qs: QuadraticSpace, x: Sequence[FieldElement], y: Sequence[FieldElement]) -> FieldElement:
    if len(x) != qs.n or len(y) != qs.n:
        raise ShapeMismatch(f"vectors of lengths {len(x)}, {len(y)} for dimension {qs.n}")
    spec = qs.spec
    g = qs.gram.codes()
    acc = 0
    for i in range(qs.n):
        if not x[i]:
            continue
        inner = 0
        for j in range(qs.n):
            if g[i][j] and y[j]:
                inner = spec.add(inner, spec.mul(g[i][j], y[j].value))
        acc = spec.add(acc, spec.mul(x[i].value, inner))
    return FieldElement(spec, acc)


def radical(qs: QuadraticSpace) -> SubspaceF:
    """
    Rad Q = {u in ker B : Q(u) = 0}.

    In odd characteristic Q vanishes on ker B, so the radical is ker B. In
    characteristic 2, Q is additive on ker B and Q(lu) = l^2 Q(u), so
    u -> sqrt(Q(u)) is linear there and the radical is its kernel.
    """
    k = kernel(qs.gram)
    if not qs.spec.is_even or k.is_zero():
        return k
    spec = qs.spec
    basis = k.vectors()
    functional = MatrixF.from_rows(spec, [[sqrt(evaluate(qs, b)) for b in basis]])
    coords = kernel(functional)
    vectors = []
    for y in coords.vectors():
        v = [spec.zero] * qs.n
        for coef, b in zip(y, basis):
            if coef:
                v = [a + coef * bi for a, bi in zip(v, b)]
        vectors.append(v)
    return SubspaceF.span(spec, qs.n, vectors)


def radical_bruteforce(qs: QuadraticSpace) -> SubspaceF:
    """The definitional radical {v : Q(v + u) = Q(u) for all u}, by exhaustive scan."""
    spec, n, q = qs.spec, qs.n, qs.spec.q
    c = qs.coeffs.codes()
    vectors = list(product(range(q), repeat=n))
    values = [evaluate_codes(spec, c, x) for x in vectors]

    def index(x: Sequence[int]) -> int:
        idx = 0
        for a in x:
            idx = idx * q + a
        return idx

    members = []
    for v in vectors:
        if all(values[index([spec.add(a, b) for a, b in zip(v, u)])] == qu for u, qu in zip(vectors, values)):
            members.append(v)
    return SubspaceF.span(spec, n, members)


def direct_sum(a: QuadraticSpace, b: QuadraticSpace) -> QuadraticSpace:
    """(Q + Q')(v + v') = Q(v) + Q'(v'), block-diagonal coefficients."""
    if a.spec is not b.spec and a.spec != b.spec:
        raise MixedFields(f"direct sum of forms over {a.spec} and {b.spec}")
    n = a.n + b.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < a.n and j < a.n:
                row.append(a.coeffs[i, j])
            elif i >= a.n and j >= a.n:
                row.append(b.coeffs[i - a.n, j - a.n])
            else:
                row.append(a.spec.zero)
        rows.append(row)
    return QuadraticSpace(a.spec, n, MatrixF.from_rows(a.spec, rows, cols=n))


def pullback(qs: QuadraticSpace, m: MatrixF) -> QuadraticSpace:
    """The form y -> Q(m y), for an n x k matrix m."""
    if m.rows != qs.n:
        raise ShapeMismatch(f"{m.rows}x{m.cols} map into a form of dimension {qs.n}")
    return QuadraticSpace(qs.spec, m.cols, fold_upper(m.transpose() @ qs.coeffs @ m))


def carries(a: QuadraticSpace, b: QuadraticSpace, m: MatrixF) -> bool:
    """Q_a(m y) = Q_b(y) for all y, decided on coefficients."""
    if m.rows != a.n or m.cols != b.n:
        raise ShapeMismatch(f"{m.rows}x{m.cols} map between dimensions {b.n} and {a.n}")
    return pullback(a, m).coeffs == b.coeffs


def is_isometry(qs: QuadraticSpace, m: MatrixF) -> bool:
    """m invertible and Q(m x) = Q(x) as polynomials."""
    if m.rows != qs.n or m.cols != qs.n:
        raise ShapeMismatch(f"{m.rows}x{m.cols} matrix for a form of dimension {qs.n}")
    return invertible_p(m) and carries(qs, qs, m)


def restrict(qs: QuadraticSpace, s: SubspaceF) -> QuadraticSpace:
    """Q|_s in the coordinates of s's canonical basis."""
    if s.ambient_dim != qs.n:
        raise AmbientMismatch(f"subspace of dimension-{s.ambient_dim} space for a form of dimension {qs.n}")
    return pullback(qs, s.basis.transpose())


@dataclass(frozen=True)
class VirtualQuadraticSpace:
    """(V, Q, U): a non-degenerate ambient form and a distinguished subspace U."""
    ambient: QuadraticSpace
    u_sub: SubspaceF

    def __post_init__(self):
        if self.u_sub.ambient_dim != self.ambient.n or (
            self.u_sub.spec is not self.ambient.spec and self.u_sub.spec != self.ambient.spec
        ):
            raise AmbientMismatch("subspace does not live in the ambient space")
        if not invertible_p(self.ambient.gram):
            raise DegenerateAmbient("ambient not non-degenerate")

    @property
    def spec(self) -> FieldSpec:
        return self.ambient.spec

    @property
    def dim(self) -> int:
        return self.u_sub.dim

    @cached_property
    def u_perp(self) -> SubspaceF:
        return perp(self.u_sub, self.ambient.gram)

    @cached_property
    def n_sub(self) -> SubspaceF:
        """U intersected with its orthogonal complement."""
        return subspace_intersect(self.u_sub, self.u_perp)

    @cached_property
    def form(self) -> QuadraticSpace:
        """Q|_U."""
        return restrict(self.ambient, self.u_sub)


def is_nondegenerate_virtual(vqs: VirtualQuadraticSpace) -> bool:
    """Rad(Q|_U) = {0}."""
    return radical(vqs.form).is_zero()


def is_minimal(vqs: VirtualQuadraticSpace) -> bool:
    """U^perp is contained in U."""
    return vqs.u_perp <= vqs.u_sub


def all_vectors(spec: FieldSpec, n: int) -> list[Vector]:
    """GF(q)^n in lexicographic order, first coordinate most significant."""
    return [tuple(FieldElement(spec, c) for c in x) for x in product(range(spec.q), repeat=n)]
