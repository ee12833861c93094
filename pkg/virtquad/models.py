"""Data models for virtquad reports."""

import json
import csv
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .field import FieldElement, FieldSpec
from .errors import InputError
from .linalg import MatrixF, SubspaceF, Vector
from .quadratic import QuadraticSpace, VirtualQuadraticSpace


class CharParity(str, Enum):
    """Parity of the field characteristic."""
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, spec: FieldSpec) -> 'CharParity':
        return cls.EVEN if spec.is_even else cls.ODD


class FormKind(str, Enum):
    """Type of a trivial-radical form."""
    PLUS = "plus"
    MINUS = "minus"
    ODD_DIM = "odd_dim"


class SquareClass(str, Enum):
    """Square class of the one-dimensional residual x^2 or e*x^2."""
    SQUARE = "square"
    NONSQUARE = "nonsquare"


class Semantics(str, Enum):
    """Which group an order refers to: Iso(U) or Iso(V, U)."""
    CLASSICAL = "classical"
    VIRTUAL = "virtual"


class Method(str, Enum):
    """How an isometry set was obtained."""
    ENUMERATED = "enumerated"
    RESTRICTED = "restricted"
    FORMULA = "formula"


class CheckStatus(str, Enum):
    """Outcome of one verification cell."""
    MATCH = "match"
    MISMATCH = "mismatch"
    SKIPPED = "skipped"


def element_json(e: FieldElement) -> Union[int, list[int]]:
    """Elements of prime fields as ints, of extension fields as coefficient lists."""
    return e.value if e.spec.d == 1 else list(e.coeffs)


def matrix_json(m: MatrixF) -> list[list]:
    return [[element_json(e) for e in m.row(i)] for i in range(m.rows)]


def subspace_json(s: SubspaceF) -> list[list]:
    return matrix_json(s.basis)


def field_json(spec: FieldSpec) -> dict:
    return {"p": spec.p, "d": spec.d, "modulus": list(spec.modulus)}


@dataclass
class ClassificationReport:
    """Normal form of a trivial-radical quadratic space.

    The columns of `transform` are the canonical basis written in input
    coordinates, so folding transform^T C transform gives canonical_coeffs.
    """
    field: FieldSpec
    dim: int
    char_parity: CharParity
    canonical_kind: FormKind
    witt_index: int
    canonical_coeffs: MatrixF
    transform: MatrixF
    e_used: Optional[FieldElement] = None
    square_class: Optional[SquareClass] = None

    def invariant_key(self) -> tuple:
        """Complete isomorphism invariant of a trivial-radical form."""
        sq = self.square_class.value if self.square_class and self.char_parity == CharParity.ODD else None
        return (self.dim, self.canonical_kind.value, self.witt_index, sq)

    def similarity_key(self) -> tuple:
        """Invariant up to scaling the form by a nonzero constant."""
        return (self.dim, self.canonical_kind.value, self.witt_index)

    def to_dict(self) -> dict:
        return {
            "field": field_json(self.field),
            "dim": self.dim,
            "char_parity": self.char_parity.value,
            "canonical_kind": self.canonical_kind.value,
            "witt_index": self.witt_index,
            "canonical_coeffs": matrix_json(self.canonical_coeffs),
            "transform": matrix_json(self.transform),
            "e_used": element_json(self.e_used) if self.e_used is not None else None,
            "square_class": self.square_class.value if self.square_class else None,
        }


@dataclass
class SplitResult:
    """A hyperbolic plane split off a form, and what is left."""
    plane: tuple[Vector, Vector]
    complement: SubspaceF
    residual: QuadraticSpace


@dataclass
class Block:
    """One orthogonal summand: a*x^2 ("square") or a*(x^2 + xy + b*y^2) ("plane")."""
    kind: str
    a: FieldElement
    b: Optional[FieldElement]
    vectors: tuple[Vector, ...]


@dataclass
class BlockDecomposition:
    blocks: list[Block]
    coeffs: MatrixF
    transform: MatrixF


@dataclass
class MinimalDecomposition:
    """N, M, Sigma, N~, M^ and V_m, all in the coordinates of the input ambient."""
    n_sub: SubspaceF
    m_sub: SubspaceF
    sigma: SubspaceF
    n_tilde: SubspaceF
    m_hat: SubspaceF
    vm: SubspaceF

    def to_dict(self) -> dict:
        return {
            name: {"dim": sub.dim, "basis": subspace_json(sub)}
            for name, sub in (
                ("n_sub", self.n_sub),
                ("m_sub", self.m_sub),
                ("sigma", self.sigma),
                ("n_tilde", self.n_tilde),
                ("m_hat", self.m_hat),
                ("vm", self.vm),
            )
        }


@dataclass
class IsometrySet:
    """An isometry group, as explicit matrices when enumerated."""
    space: Union[QuadraticSpace, VirtualQuadraticSpace]
    order: int
    method: Method
    elements: Optional[list[MatrixF]] = None
    nodes: int = 0

    def keys(self) -> set[tuple[int, ...]]:
        return {m.key() for m in self.elements or []}


@dataclass
class RestrictionResult:
    """Image and kernel of Iso(V, U) -> Iso(U)."""
    image: IsometrySet
    kernel: IsometrySet
    surjective: Optional[bool] = None


@dataclass
class GroupOrderReport:
    """One verification cell: formula value against enumeration."""
    q: int
    k: int
    epsilon: Optional[int]
    dim: int
    semantics: Semantics
    formula_value: int
    enumerated_value: Optional[int] = None
    status: CheckStatus = CheckStatus.SKIPPED
    reason: str = ""

    @property
    def match(self) -> Optional[bool]:
        if self.enumerated_value is None:
            return None
        return self.enumerated_value == self.formula_value

    @property
    def type_label(self) -> str:
        if self.epsilon is None:
            return "odd"
        return "+" if self.epsilon > 0 else "-"

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "epsilon": self.epsilon,
            "dim": self.dim,
            "semantics": self.semantics.value,
            "formula_value": str(self.formula_value),
            "enumerated_value": str(self.enumerated_value) if self.enumerated_value is not None else None,
            "match": self.match,
            "status": self.status.value,
            "reason": self.reason,
        }


@dataclass
class CensusClass:
    """One similarity class of trivial-radical forms."""
    kind: FormKind
    witt_index: int
    count: int
    representative: MatrixF
    square_classes: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "witt_index": self.witt_index,
            "count": str(self.count),
            "representative": matrix_json(self.representative),
            "square_classes": {k: str(v) for k, v in sorted(self.square_classes.items())},
        }


@dataclass
class CensusReport:
    """Classes of non-degenerate virtual spaces of one dimension over one field."""
    field: FieldSpec
    dim: int
    forms_scanned: int
    trivial_radical: int
    classes: list[CensusClass]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def expected(self) -> int:
        return 2 if self.dim % 2 == 0 else 1

    @property
    def match(self) -> bool:
        return self.class_count == self.expected

    def to_dict(self) -> dict:
        return {
            "field": field_json(self.field),
            "q": self.field.q,
            "dim": self.dim,
            "forms_scanned": str(self.forms_scanned),
            "trivial_radical": str(self.trivial_radical),
            "class_count": str(self.class_count),
            "expected": str(self.expected),
            "match": self.match,
            "classes": [c.to_dict() for c in self.classes],
        }


@dataclass
class SweepResult:
    """Reports of one verification sweep."""
    reports: list[GroupOrderReport]
    metadata: dict

    def export(self, filename: str, format: str = "json"):
        """Export the reports to a JSON or CSV file."""
        if format == "json":
            data = {
                "reports_count": len(self.reports),
                "reports": [r.to_dict() for r in self.reports],
                "metadata": self.metadata,
            }
            with open(filename, 'w') as f:
                json.dump(data, f, indent=2)
        elif format == "csv":
            with open(filename, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow([
                    "q", "dim", "type", "semantics", "formula", "enumerated", "status", "reason"
                ])
                for r in self.reports:
                    writer.writerow([
                        r.q,
                        r.dim,
                        r.type_label,
                        r.semantics.value,
                        str(r.formula_value),
                        "" if r.enumerated_value is None else str(r.enumerated_value),
                        r.status.value,
                        r.reason,
                    ])
        else:
            raise InputError(f"unknown export format: {format}")


@dataclass
class RunConfig:
    """One CLI invocation, validated before anything is computed."""
    command: str
    input_path: Optional[str] = None
    q: Optional[int] = None
    dim: Optional[int] = None
    form_type: Optional[str] = None
    semantics: Semantics = Semantics.VIRTUAL
    qmax: Optional[int] = None
    dimmax: Optional[int] = None
    budget_nodes: Optional[int] = None
    max_dim: Optional[int] = None
    max_q: Optional[int] = None
    output: str = "json"
    seed: int = 0
    export_path: Optional[str] = None
    export_format: str = "json"
