"""Exact dense linear algebra over a FieldSpec.

Spaces are always GF(q)^n with column vectors; subspaces are stored by a
basis in reduced row-echelon form, so two SubspaceF values are equal exactly
when they are the same subspace.
"""

from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional, Sequence, Union

from .errors import AmbientMismatch, InputError, MixedFields, ShapeMismatch, SingularMatrix
from .field import FieldElement, FieldSpec

Vector = tuple[FieldElement, ...]
Entry = Union[FieldElement, int]


def _code(spec: FieldSpec, x: Entry) -> int:
    if isinstance(x, FieldElement):
        if x.spec is not spec and x.spec != spec:
            raise MixedFields(f"entry from {x.spec} in a matrix over {spec}")
        return x.value
    if not 0 <= x < spec.q:
        raise InputError(f"element code {x} out of range for {spec}")
    return x


def vector(spec: FieldSpec, entries: Sequence[Entry]) -> Vector:
    return tuple(FieldElement(spec, _code(spec, x)) for x in entries)


def dot(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
    if len(u) != len(v):
        raise ShapeMismatch(f"dot product of lengths {len(u)} and {len(v)}")
    spec = u[0].spec if u else None
    if spec is None:
        raise ShapeMismatch("dot product of empty vectors has no field")
    acc = 0
    for a, b in zip(u, v):
        acc = spec.add(acc, spec.mul(a.value, b.value))
    return FieldElement(spec, acc)


@dataclass(frozen=True)
class MatrixF:
    """A rows x cols matrix over spec, stored row-major."""
    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(
        cls, spec: FieldSpec, rows: Sequence[Sequence[Entry]], cols: Optional[int] = None
    ) -> 'MatrixF':
        """Matrix from nested rows of FieldElements or element codes."""
        if cols is None:
            if not rows:
                raise ShapeMismatch("column count required for a matrix without rows")
            cols = len(rows[0])
        codes = []
        for row in rows:
            if len(row) != cols:
                raise ShapeMismatch(f"row of length {len(row)} in a matrix with {cols} columns")
            codes.extend(_code(spec, x) for x in row)
        return cls._from_codes(spec, len(rows), cols, codes)

    @classmethod
    def _from_codes(cls, spec: FieldSpec, rows: int, cols: int, codes: Sequence[int]) -> 'MatrixF':
        return cls(spec, rows, cols, tuple(FieldElement(spec, c) for c in codes))

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> 'MatrixF':
        return cls._from_codes(spec, rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> 'MatrixF':
        return cls._from_codes(spec, n, n, [int(i == j) for i in range(n) for j in range(n)])

    def __getitem__(self, idx: tuple[int, int]) -> FieldElement:
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_vectors(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def codes(self) -> list[list[int]]:
        return [[e.value for e in self.row(i)] for i in range(self.rows)]

    def key(self) -> tuple[int, ...]:
        """Hashable code tuple; sorting by it gives the canonical matrix order."""
        return tuple(e.value for e in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def is_upper_triangular(self) -> bool:
        return all(self[i, j].is_zero() for i in range(self.rows) for j in range(min(i, self.cols)))

    def transpose(self) -> 'MatrixF':
        return MatrixF(
            self.spec,
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: 'MatrixF') -> 'MatrixF':
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols}")
        return MatrixF(self.spec, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other: 'MatrixF') -> 'MatrixF':
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if other.spec is not self.spec and other.spec != self.spec:
            raise MixedFields(f"cannot multiply matrices over {self.spec} and {other.spec}")
        spec = self.spec
        a, b = self.codes(), other.codes()
        out = []
        for i in range(self.rows):
            ai = a[i]
            for j in range(other.cols):
                acc = 0
                for k in range(self.cols):
                    if ai[k]:
                        acc = spec.add(acc, spec.mul(ai[k], b[k][j]))
                out.append(acc)
        return MatrixF._from_codes(spec, self.rows, other.cols, out)

    def __str__(self) -> str:
        return '\n'.join('[' + ' '.join(str(e) for e in self.row(i)) + ']' for i in range(self.rows))


def stack(spec: FieldSpec, cols: int, *blocks: Sequence[Vector]) -> MatrixF:
    """Matrix whose rows are the given vectors, in order."""
    rows = [row for block in blocks for row in block]
    return MatrixF.from_rows(spec, rows, cols=cols)


class RrefResult(NamedTuple):
    matrix: MatrixF
    rank: int
    pivots: tuple[int, ...]


def _rref_codes(spec: FieldSpec, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = spec.inv(rows[r][c])
        rows[r] = [spec.mul(inv, x) for x in rows[r]]
        pivot = rows[r]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [spec.sub(x, spec.mul(f, y)) for x, y in zip(rows[i], pivot)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: MatrixF) -> RrefResult:
    """Reduced row-echelon form by Gauss-Jordan elimination."""
    rows, pivots = _rref_codes(m.spec, m.codes(), m.cols)
    flat = [x for row in rows for x in row]
    return RrefResult(MatrixF._from_codes(m.spec, m.rows, m.cols, flat), len(pivots), tuple(pivots))


@dataclass(frozen=True)
class SubspaceF:
    """A subspace of GF(q)^ambient_dim, held by its canonical RREF basis."""
    spec: FieldSpec
    ambient_dim: int
    basis: MatrixF

    @classmethod
    def span(cls, spec: FieldSpec, ambient_dim: int, vectors: Sequence[Sequence[Entry]]) -> 'SubspaceF':
        if not vectors:
            return cls.zero(spec, ambient_dim)
        codes = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeMismatch(f"vector of length {len(v)} in GF({spec.q})^{ambient_dim}")
            codes.append([_code(spec, x) for x in v])
        rows, pivots = _rref_codes(spec, codes, ambient_dim)
        rows = rows[:len(pivots)]
        flat = [x for row in rows for x in row]
        return cls(spec, ambient_dim, MatrixF._from_codes(spec, len(rows), ambient_dim, flat))

    @classmethod
    def zero(cls, spec: FieldSpec, ambient_dim: int) -> 'SubspaceF':
        return cls(spec, ambient_dim, MatrixF.zeros(spec, 0, ambient_dim))

    @classmethod
    def full(cls, spec: FieldSpec, ambient_dim: int) -> 'SubspaceF':
        return cls(spec, ambient_dim, MatrixF.identity(spec, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(
            next(j for j, e in enumerate(row) if not e.is_zero()) for row in self.basis.row_vectors()
        )

    def vectors(self) -> list[Vector]:
        return self.basis.row_vectors()

    def _reduce(self, v: Sequence[FieldElement]) -> list[int]:
        spec = self.spec
        x = [e.value for e in v]
        for row, c in zip(self.basis.codes(), self.pivots):
            f = x[c]
            if f:
                x = [spec.sub(a, spec.mul(f, b)) for a, b in zip(x, row)]
        return x

    def contains(self, v: Sequence[FieldElement]) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeMismatch(f"vector of length {len(v)} tested against GF({self.spec.q})^{self.ambient_dim}")
        return not any(self._reduce(v))

    def coordinates(self, v: Sequence[FieldElement]) -> Vector:
        """Coordinates of v in the canonical basis; read off at the pivot columns."""
        if not self.contains(v):
            raise AmbientMismatch("vector does not lie in the subspace")
        return tuple(v[c] for c in self.pivots)

    def __le__(self, other: 'SubspaceF') -> bool:
        _check_compatible(self, other)
        return all(other.contains(v) for v in self.vectors())


def _check_compatible(a: SubspaceF, b: SubspaceF):
    if a.ambient_dim != b.ambient_dim or (a.spec is not b.spec and a.spec != b.spec):
        raise AmbientMismatch(
            f"subspaces of GF({a.spec.q})^{a.ambient_dim} and GF({b.spec.q})^{b.ambient_dim}"
        )


def kernel(m: MatrixF) -> SubspaceF:
    """{x : m x = 0}."""
    spec = m.spec
    rows, pivots = _rref_codes(spec, m.codes(), m.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = [0] * m.cols
        x[f] = 1
        for i, c in enumerate(pivots):
            x[c] = spec.neg(rows[i][f])
        basis.append(x)
    return SubspaceF.span(spec, m.cols, basis)


SubspaceOp = Literal['sum', 'intersect']


def subspace_ops(a: SubspaceF, b: SubspaceF, kind: SubspaceOp) -> SubspaceF:
    """Sum or intersection, both read off one Zassenhaus elimination."""
    _check_compatible(a, b)
    spec, n = a.spec, a.ambient_dim
    block = [r + r for r in a.basis.codes()] + [r + [0] * n for r in b.basis.codes()]
    rows, pivots = _rref_codes(spec, block, 2 * n)
    rows = rows[:len(pivots)]
    if kind == 'sum':
        return SubspaceF.span(spec, n, [r[:n] for r, c in zip(rows, pivots) if c < n])
    if kind == 'intersect':
        return SubspaceF.span(spec, n, [r[n:] for r, c in zip(rows, pivots) if c >= n])
    raise InputError(f"unknown subspace operation: {kind}")


def subspace_sum(a: SubspaceF, b: SubspaceF) -> SubspaceF:
    return subspace_ops(a, b, 'sum')


def subspace_intersect(a: SubspaceF, b: SubspaceF) -> SubspaceF:
    return subspace_ops(a, b, 'intersect')


def perp(s: SubspaceF, gram: MatrixF) -> SubspaceF:
    """{v : B(u, v) = 0 for every u in s}."""
    n = s.ambient_dim
    if gram.rows != n or gram.cols != n:
        raise ShapeMismatch(f"{gram.rows}x{gram.cols} Gram matrix for GF({s.spec.q})^{n}")
    return kernel(s.basis @ gram)


def restricted_gram(gram: MatrixF, s: SubspaceF) -> MatrixF:
    """Gram matrix of the form restricted to s, in s's basis coordinates."""
    return s.basis @ gram @ s.basis.transpose()


def invertible_p(m: MatrixF) -> bool:
    if not m.is_square:
        raise ShapeMismatch(f"invertibility of a non-square {m.rows}x{m.cols} matrix")
    return rref(m).rank == m.rows


def apply(m: MatrixF, v: Sequence[FieldElement]) -> Vector:
    """The matrix-vector product m v."""
    if len(v) != m.cols:
        raise ShapeMismatch(f"applying a {m.rows}x{m.cols} matrix to a vector of length {len(v)}")
    spec = m.spec
    x = [e.value for e in v]
    out = []
    for i in range(m.rows):
        acc = 0
        for a, b in zip(m.row(i), x):
            if b:
                acc = spec.add(acc, spec.mul(a.value, b))
        out.append(FieldElement(spec, acc))
    return tuple(out)


def inverse(m: MatrixF) -> MatrixF:
    if not m.is_square:
        raise ShapeMismatch(f"inverse of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    spec = m.spec
    if n == 0:
        return m
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(m.codes())]
    rows, pivots = _rref_codes(spec, aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise SingularMatrix("matrix is not invertible")
    return MatrixF._from_codes(spec, n, n, [x for row in rows for x in row[n:]])


def solve(m: MatrixF, b: Sequence[FieldElement]) -> Optional[Vector]:
    """
    The lexicographically smallest x with m x = b, or None when inconsistent.

    After the particular solution is found, each RREF kernel row clears its
    pivot coordinate; pivots of the kernel are exactly the coordinates that
    can still be chosen freely once the earlier ones are fixed.
    """
    if len(b) != m.rows:
        raise ShapeMismatch(f"right-hand side of length {len(b)} for {m.rows} equations")
    spec, n = m.spec, m.cols
    aug = [row + [_code(spec, rhs)] for row, rhs in zip(m.codes(), b)]
    rows, pivots = _rref_codes(spec, aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    ker = kernel(m)
    for row, c in zip(ker.basis.codes(), ker.pivots):
        f = x[c]
        if f:
            x = [spec.sub(a, spec.mul(f, r)) for a, r in zip(x, row)]
    return tuple(FieldElement(spec, c) for c in x)
