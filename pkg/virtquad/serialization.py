"""Form JSON: parsing with pydantic validation, and serialization back."""

import json
import logging
from typing import Any, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from .errors import DegenerateAmbient, FormValidationError, ParseError
from .field import FieldElement, FieldSpec, make_field
from .linalg import MatrixF, SubspaceF
from .models import field_json, matrix_json
from .quadratic import QuadraticSpace, VirtualQuadraticSpace

logger = logging.getLogger(__name__)

Element = Union[int, list[int]]


class FieldModel(BaseModel):
    p: int
    d: int = Field(default=1, ge=1)
    modulus: Optional[list[int]] = None


class FormModel(BaseModel):
    field: FieldModel
    dim: int = Field(ge=0)
    coeffs: list[list[Element]]
    subspace: Optional[list[list[Element]]] = None


def _element(spec: FieldSpec, raw: Element, where: str) -> FieldElement:
    if isinstance(raw, list):
        if len(raw) > spec.d or any(not 0 <= c < spec.p for c in raw):
            raise ParseError(f"{raw} is not a coefficient list of {spec}", location=where)
        return spec.element(raw)
    if not 0 <= raw < spec.q:
        raise ParseError(f"element code {raw} out of range for {spec}", location=where)
    return FieldElement(spec, raw)


def _rows(spec: FieldSpec, raw: list[list[Element]], cols: int, name: str) -> list[list[FieldElement]]:
    out = []
    for i, row in enumerate(raw):
        if len(row) != cols:
            raise ParseError(f"row of length {len(row)}, expected {cols}", location=f"{name}[{i}]")
        out.append([_element(spec, x, f"{name}[{i}][{j}]") for j, x in enumerate(row)])
    return out


def _location(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_form(text: str) -> Union[QuadraticSpace, VirtualQuadraticSpace]:
    """
    Parse form JSON into a QuadraticSpace, or a VirtualQuadraticSpace when a
    "subspace" is given.

    Errors name their location: line and column for bad JSON, the field path
    for schema violations, (row, col) for entries below the diagonal.
    """
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", location=f"line {e.lineno}, column {e.colno}") from e

    try:
        model = FormModel.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ParseError(first["msg"], location=_location(first["loc"])) from e

    spec = make_field(model.field.p, model.field.d, model.field.modulus)
    n = model.dim
    if len(model.coeffs) != n:
        raise ParseError(f"{len(model.coeffs)} coefficient rows for dimension {n}", location="coeffs")
    rows = _rows(spec, model.coeffs, n, "coeffs")
    for i in range(n):
        for j in range(i):
            if not rows[i][j].is_zero():
                raise ParseError("nonzero entry below the diagonal", location=f"coeffs ({i}, {j})")
    qs = QuadraticSpace(spec, n, MatrixF.from_rows(spec, rows, cols=n))
    if model.subspace is None:
        return qs

    vectors = _rows(spec, model.subspace, n, "subspace")
    u_sub = SubspaceF.span(spec, n, vectors)
    given = [[e.value for e in v] for v in vectors]
    if given != u_sub.basis.codes():
        logger.warning("subspace basis is not in reduced row-echelon form; re-canonicalized")
    try:
        return VirtualQuadraticSpace(qs, u_sub)
    except DegenerateAmbient as e:
        raise FormValidationError("ambient not non-degenerate") from e


def form_dict(x: Union[QuadraticSpace, VirtualQuadraticSpace]) -> dict:
    if isinstance(x, VirtualQuadraticSpace):
        out = form_dict(x.ambient)
        out["subspace"] = matrix_json(x.u_sub.basis)
        return out
    return {"field": field_json(x.spec), "dim": x.n, "coeffs": matrix_json(x.coeffs)}


def dumps(data: Any) -> str:
    """Stable JSON text; identical inputs give byte-identical output."""
    return json.dumps(data, indent=2, sort_keys=True)


def serialize(x: Union[QuadraticSpace, VirtualQuadraticSpace]) -> str:
    return dumps(form_dict(x))
