import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virtquad.embedding import embed_ambient
from virtquad.errors import FormValidationError, ParseError
from virtquad.field import make_field
from virtquad.quadratic import QuadraticSpace, VirtualQuadraticSpace
from virtquad.serialization import dumps, parse_form, serialize


def test_parse_plain_form():
    qs = parse_form('{"field": {"p": 2}, "dim": 2, "coeffs": [[1, 1], [0, 1]]}')
    assert isinstance(qs, QuadraticSpace)
    assert qs.spec.q == 2
    assert qs.coeffs.codes() == [[1, 1], [0, 1]]


def test_parse_extension_field_elements():
    qs = parse_form('{"field": {"p": 2, "d": 2}, "dim": 2, "coeffs": [[[0, 1], 1], [0, 3]]}')
    assert qs.coeffs.codes() == [[2, 1], [0, 3]]


def test_parse_virtual_space():
    text = json.dumps({
        "field": {"p": 2},
        "dim": 4,
        "coeffs": [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 0]],
        "subspace": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
    })
    vqs = parse_form(text)
    assert isinstance(vqs, VirtualQuadraticSpace)
    assert vqs.dim == 3


def test_below_diagonal_names_the_entry():
    with pytest.raises(ParseError) as info:
        parse_form('{"field": {"p": 3}, "dim": 2, "coeffs": [[1, 0], [2, 1]]}')
    assert info.value.location == "coeffs (1, 0)"


def test_singular_ambient_is_rejected():
    text = '{"field": {"p": 2}, "dim": 1, "coeffs": [[1]], "subspace": [[1]]}'
    with pytest.raises(FormValidationError, match="ambient not non-degenerate"):
        parse_form(text)


def test_bad_json_names_line_and_column():
    with pytest.raises(ParseError) as info:
        parse_form('{"field": {"p": 2},\n "dim": }')
    assert info.value.location.startswith("line 2")


def test_schema_errors_name_the_field():
    with pytest.raises(ParseError) as info:
        parse_form('{"field": {"p": 2}, "coeffs": []}')
    assert info.value.location == "dim"


def test_out_of_range_element():
    with pytest.raises(ParseError) as info:
        parse_form('{"field": {"p": 3}, "dim": 1, "coeffs": [[3]]}')
    assert info.value.location == "coeffs[0][0]"


def test_wrong_row_count():
    with pytest.raises(ParseError):
        parse_form('{"field": {"p": 3}, "dim": 2, "coeffs": [[1, 0]]}')


def test_non_rref_subspace_is_canonicalized(caplog):
    text = json.dumps({
        "field": {"p": 3},
        "dim": 2,
        "coeffs": [[0, 1], [0, 0]],
        "subspace": [[2, 0]],
    })
    vqs = parse_form(text)
    assert vqs.u_sub.basis.codes() == [[1, 0]]
    assert "re-canonicalized" in caplog.text


def test_serialize_is_stable():
    text = '{"field": {"p": 2, "d": 2}, "dim": 1, "coeffs": [[[1, 1]]]}'
    out = serialize(parse_form(text))
    assert out == serialize(parse_form(out))
    data = json.loads(out)
    assert data["coeffs"] == [[[1, 1]]]
    assert data["field"]["modulus"] == [1, 1, 1]


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


@st.composite
def random_forms(draw):
    spec = make_field(*draw(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3)])))
    n = draw(st.integers(min_value=1, max_value=4))
    codes = st.integers(min_value=0, max_value=spec.q - 1)
    return QuadraticSpace.from_rows(spec, [[draw(codes) if j >= i else 0 for j in range(n)] for i in range(n)])


@settings(max_examples=100, deadline=None)
@given(random_forms())
def test_forms_survive_serialization(qs):
    assert parse_form(serialize(qs)) == qs


@settings(max_examples=50, deadline=None)
@given(random_forms())
def test_virtual_spaces_survive_serialization(qs):
    vqs = embed_ambient(qs)
    back = parse_form(serialize(vqs))
    assert isinstance(back, VirtualQuadraticSpace)
    assert back.ambient == vqs.ambient
    assert back.u_sub == vqs.u_sub
