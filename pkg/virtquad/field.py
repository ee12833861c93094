"""Exact arithmetic in finite fields GF(p^d).

Elements are dense coefficient vectors modulo p, reduced by a monic
irreducible modulus of degree d. Each element is addressed by its code
sum(c_i * p**i); ordering by code is the "lexicographic" order used
throughout the package, so GF(4) enumerates as 0, 1, a, a+1.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Literal, Optional, Sequence

from sympy import factorint, isprime

from . import config
from .errors import (
    CompositeCharacteristic,
    DivisionByZero,
    FieldTooLarge,
    InputError,
    MixedFields,
    NotASquare,
    ReducibleModulus,
)

logger = logging.getLogger(__name__)


def _poly_rem(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial f over GF(p), padded to deg f."""
    k = len(f) - 1
    rem = [c % p for c in a]
    for i in range(len(rem) - 1, k - 1, -1):
        c = rem[i]
        if c:
            shift = i - k
            for j in range(k + 1):
                rem[shift + j] = (rem[shift + j] - c * f[j]) % p
    rem = rem[:k]
    return rem + [0] * (k - len(rem))


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. d//2."""
    d = len(modulus) - 1
    for k in range(1, d // 2 + 1):
        for lower in product(range(p), repeat=k):
            divisor = list(lower) + [1]
            if not any(_poly_rem(modulus, divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldTables:
    """Integer arithmetic tables over element codes, indexed a * q + b."""
    q: int
    add: list[int]
    sub: list[int]
    mul: list[int]
    neg: list[int]
    inv: list[int]

    @classmethod
    def build(cls, spec: 'FieldSpec') -> 'FieldTables':
        q = spec.q
        add = [0] * (q * q)
        sub = [0] * (q * q)
        mul = [0] * (q * q)
        for a in range(q):
            row = a * q
            for b in range(q):
                add[row + b] = spec._raw_add(a, b)
                sub[row + b] = spec._raw_sub(a, b)
                if b >= a:
                    prod = spec._raw_mul(a, b)
                    mul[row + b] = prod
                    mul[b * q + a] = prod
        neg = [sub[b] for b in range(q)]
        inv = [0] * q
        for a in range(1, q):
            row = a * q
            for b in range(1, q):
                if mul[row + b] == 1:
                    inv[a] = b
                    break
        logger.debug("built arithmetic tables for GF(%d)", q)
        return cls(q=q, add=add, sub=sub, mul=mul, neg=neg, inv=inv)


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^d) = GF(p)[x] / (modulus)."""
    p: int
    d: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'q', self.p ** self.d)

    def __str__(self) -> str:
        return f"GF({self.q})"

    @property
    def is_even(self) -> bool:
        return self.p == 2

    # code <-> coefficient conversion

    def decode(self, code: int) -> tuple[int, ...]:
        coeffs = []
        for _ in range(self.d):
            code, c = divmod(code, self.p)
            coeffs.append(c)
        return tuple(coeffs)

    def encode(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    # raw polynomial arithmetic on codes

    def _raw_add(self, a: int, b: int) -> int:
        p = self.p
        return self.encode([(x + y) % p for x, y in zip(self.decode(a), self.decode(b))])

    def _raw_sub(self, a: int, b: int) -> int:
        p = self.p
        return self.encode([(x - y) % p for x, y in zip(self.decode(a), self.decode(b))])

    def _raw_mul(self, a: int, b: int) -> int:
        ca, cb = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.encode(_poly_rem(prod, self.modulus, self.p))

    @cached_property
    def _tables(self) -> Optional[FieldTables]:
        if self.q <= config.VQS_TABLE_LIMIT:
            return FieldTables.build(self)
        return None

    @property
    def tables(self) -> FieldTables:
        """Integer tables; only available for q up to VQS_TABLE_LIMIT."""
        tables = self._tables
        if tables is None:
            raise FieldTooLarge(
                f"{self} exceeds the table limit {config.VQS_TABLE_LIMIT} needed for exhaustive scans"
            )
        return tables

    # dispatching code arithmetic

    def add(self, a: int, b: int) -> int:
        t = self._tables
        return t.add[a * self.q + b] if t is not None else self._raw_add(a, b)

    def sub(self, a: int, b: int) -> int:
        t = self._tables
        return t.sub[a * self.q + b] if t is not None else self._raw_sub(a, b)

    def mul(self, a: int, b: int) -> int:
        t = self._tables
        return t.mul[a * self.q + b] if t is not None else self._raw_mul(a, b)

    def neg(self, a: int) -> int:
        t = self._tables
        return t.neg[a] if t is not None else self._raw_sub(0, a)

    def power(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"division by zero in {self}")
        t = self._tables
        return t.inv[a] if t is not None else self.power(a, self.q - 2)

    # element constructors

    def from_int(self, code: int) -> 'FieldElement':
        if not 0 <= code < self.q:
            raise InputError(f"element code {code} out of range for {self}")
        return FieldElement(self, code)

    def element(self, coeffs: Sequence[int]) -> 'FieldElement':
        if len(coeffs) > self.d:
            raise InputError(f"{len(coeffs)} coefficients given for {self} (degree {self.d})")
        padded = [c % self.p for c in coeffs] + [0] * (self.d - len(coeffs))
        return FieldElement(self, self.encode(padded))

    @cached_property
    def zero(self) -> 'FieldElement':
        return FieldElement(self, 0)

    @cached_property
    def one(self) -> 'FieldElement':
        return FieldElement(self, 1)

    def elements(self) -> list['FieldElement']:
        return list(enumerate_elements(self))


class FieldElement:
    """An element of a FieldSpec. Immutable."""

    __slots__ = ('spec', 'value')

    def __init__(self, spec: FieldSpec, value: int):
        self.spec = spec
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.decode(self.value)

    def _check(self, other: 'FieldElement') -> FieldSpec:
        if other.spec is not self.spec and other.spec != self.spec:
            raise MixedFields(f"cannot combine elements of {self.spec} and {other.spec}")
        return self.spec

    def __add__(self, other: 'FieldElement') -> 'FieldElement':
        spec = self._check(other)
        return FieldElement(spec, spec.add(self.value, other.value))

    def __sub__(self, other: 'FieldElement') -> 'FieldElement':
        spec = self._check(other)
        return FieldElement(spec, spec.sub(self.value, other.value))

    def __mul__(self, other: 'FieldElement') -> 'FieldElement':
        spec = self._check(other)
        return FieldElement(spec, spec.mul(self.value, other.value))

    def __truediv__(self, other: 'FieldElement') -> 'FieldElement':
        spec = self._check(other)
        return FieldElement(spec, spec.mul(self.value, spec.inv(other.value)))

    def __neg__(self) -> 'FieldElement':
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int) -> 'FieldElement':
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.spec, self.spec.power(self.value, e))

    def inverse(self) -> 'FieldElement':
        return FieldElement(self.spec, self.spec.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.value == other.value and (other.spec is self.spec or other.spec == self.spec)

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.d, self.value))

    def __lt__(self, other: 'FieldElement') -> bool:
        self._check(other)
        return self.value < other.value

    def __str__(self) -> str:
        if self.spec.d == 1:
            return str(self.value)
        terms = []
        for power, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            if power == 0:
                terms.append(str(c))
            else:
                mono = 'a' if power == 1 else f'a^{power}'
                terms.append(mono if c == 1 else f'{c}{mono}')
        return '+'.join(terms) if terms else '0'

    def __repr__(self) -> str:
        return f"FieldElement({self.spec}, {self})"


@lru_cache(maxsize=None)
def _make_field(p: int, d: int, modulus: Optional[tuple[int, ...]]) -> FieldSpec:
    if p < 2 or not isprime(p):
        raise CompositeCharacteristic(f"characteristic {p} is not prime")
    if d < 1:
        raise InputError(f"extension degree must be at least 1, got {d}")
    if p ** d > config.VQS_MAX_FIELD_ORDER:
        raise FieldTooLarge(
            f"GF({p}^{d}) exceeds the configured field order limit {config.VQS_MAX_FIELD_ORDER}"
        )

    if modulus is not None:
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise InputError(f"modulus {list(modulus)} is not a monic polynomial of degree {d}")
        if any(not 0 <= c < p for c in modulus):
            raise InputError(f"modulus coefficients must lie in [0, {p})")
        if not _is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {list(modulus)} factors over GF({p})")
        return FieldSpec(p=p, d=d, modulus=tuple(modulus))

    for lower in range(p ** d):
        candidate = []
        code = lower
        for _ in range(d):
            code, c = divmod(code, p)
            candidate.append(c)
        candidate.append(1)
        if _is_irreducible(candidate, p):
            logger.debug("default modulus for GF(%d^%d): %s", p, d, candidate)
            return FieldSpec(p=p, d=d, modulus=tuple(candidate))

    raise ReducibleModulus(f"no monic irreducible of degree {d} over GF({p})")


def make_field(p: int, d: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Build GF(p^d).

    When modulus is omitted the smallest monic irreducible of degree d (by
    code order) is used, so repeated calls return the same field.
    """
    return _make_field(p, d, tuple(modulus) if modulus is not None else None)


def field_for_order(q: int) -> FieldSpec:
    """The default field of order q."""
    factors = factorint(q) if q >= 2 else {}
    if len(factors) != 1:
        raise CompositeCharacteristic(f"{q} is not a prime power")
    (p, d), = factors.items()
    return make_field(int(p), int(d))


ArithKind = Literal['add', 'sub', 'mul', 'div']


def arith(a: FieldElement, b: FieldElement, kind: ArithKind) -> FieldElement:
    if kind == 'add':
        return a + b
    if kind == 'sub':
        return a - b
    if kind == 'mul':
        return a * b
    if kind == 'div':
        return a / b
    raise InputError(f"unknown arithmetic kind: {kind}")


def enumerate_elements(spec: FieldSpec) -> Iterator[FieldElement]:
    """All q elements in code order, starting with 0."""
    for code in range(spec.q):
        yield FieldElement(spec, code)


def is_square(a: FieldElement) -> bool:
    spec = a.spec
    if a.is_zero() or spec.is_even:
        return True
    return (a ** ((spec.q - 1) // 2)).is_one()


@lru_cache(maxsize=None)
def find_canonical_e(spec: FieldSpec) -> FieldElement:
    """
    The element e of the normal forms.

    Odd characteristic: the smallest non-square. Characteristic 2: the
    smallest e such that x^2 + x + e has no root in the field.
    """
    if spec.is_even:
        image = {spec.add(spec.mul(x, x), x) for x in range(spec.q)}
        for e in range(spec.q):
            if e not in image:
                return FieldElement(spec, e)
    else:
        for candidate in enumerate_elements(spec):
            if not is_square(candidate):
                return candidate
    raise NotASquare(f"no canonical e in {spec}")


def _tonelli_shanks(a: FieldElement) -> FieldElement:
    spec = a.spec
    s, t = 0, spec.q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = find_canonical_e(spec)
    c = z ** t
    x = a ** ((t + 1) // 2)
    b = a ** t
    m = s
    while not b.is_one():
        i, sq = 0, b
        while not sq.is_one():
            sq = sq * sq
            i += 1
        w = c ** (2 ** (m - i - 1))
        x = x * w
        c = w * w
        b = b * c
        m = i
    return x


def sqrt(a: FieldElement) -> FieldElement:
    """
    A square root of a.

    Characteristic 2 uses a^(q/2). Odd characteristic returns the root with
    the smaller code sum(c_i p^i), found by search up to VQS_SQRT_SEARCH_LIMIT
    and by Tonelli-Shanks above it. Code order is lexicographic order on the
    coefficient list read from the leading coefficient down, the same order
    enumerate_elements yields (GF(4): 0, 1, a, a+1).
    """
    spec = a.spec
    if a.is_zero():
        return a
    if spec.is_even:
        return a ** (spec.q // 2)
    if not is_square(a):
        raise NotASquare(f"{a} is not a square in {spec}")
    if spec.q <= config.VQS_SQRT_SEARCH_LIMIT:
        for x in enumerate_elements(spec):
            if x * x == a:
                return x
    x = _tonelli_shanks(a)
    y = -x
    return x if x.value < y.value else y
