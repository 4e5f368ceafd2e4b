from __future__ import annotations

import json

import pytest

from skewclifford.errors import (
    MuConstraintViolation,
    NonHomogeneous,
    NotMuSymmetric,
    ParseError,
    SchemaError,
)
from skewclifford.parsing import (
    fixture_text,
    parse_document,
    parse_form_expression,
    parse_input,
    read_source,
)

from conftest import ring


def base_doc(**extra):
    doc = {"field": {"p": 5}, "n": 2, "mu": [[1, 2], [3, 1]], "forms": ["z1^2", "z2^2"]}
    doc.update(extra)
    return doc


def test_skew_square_expansion():
    R = ring(5, 2, {(1, 2): 2})
    z1, z2 = R.gens()
    got = parse_form_expression("(z1+2*z2)^2", R)
    assert got == z1 * z1 + 6 * (z1 * z2) + 4 * (z2 * z2)
    assert str(got) == "z1^2 + z1*z2 - z2^2"


def test_q4_of_second_fixture(cv53):
    R = cv53.ring
    z = R.gens()
    assert parse_form_expression("z2^2 + z4^2 - z2*z3", R) == z[1] * z[1] + z[3] * z[3] - z[1] * z[2]
    assert cv53.forms[3] == z[1] * z[1] + z[3] * z[3] - z[1] * z[2]


def test_reversed_product_uses_mu():
    R = ring(5, 2, {(1, 2): 2})
    z1, z2 = R.gens()
    # z2 z1 = mu_12 z1 z2
    assert parse_form_expression("z2*z1", R) == 2 * (z1 * z2)


@pytest.mark.parametrize(
    "text, offset",
    [("(z1+", 4), ("z1 ** z2", 4), ("z1 $ z2", 3), ("z9^2", 0), ("z1*z2)", 5)],
)
def test_parse_error_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_form_expression(text, ring(5, 3))
    assert info.value.position == offset


@pytest.mark.parametrize("text", ["z1", "z1^2 + z2", "z1^3", "1"])
def test_non_homogeneous(text):
    with pytest.raises(NonHomogeneous):
        parse_form_expression(text, ring(5, 2))


def test_division_and_bracket_scalars():
    R = ring(5, 2)
    z1, _ = R.gens()
    assert parse_form_expression("z1^2/2", R) == 3 * (z1 * z1)
    R25 = ring(5, 2, k=2)
    f = parse_form_expression("[0,1]*z1^2", R25)
    assert f.coefficient((2, 0)) == 5
    with pytest.raises(ParseError):
        parse_form_expression("z1^2/z2", R)


def test_render_parse_roundtrip(cv53, vvw):
    for s in (cv53, vvw):
        for q in s.forms:
            assert parse_form_expression(str(q), s.ring) == q


def test_fixture_documents():
    doc = parse_input(fixture_text("vvw-gca"))
    mu = doc.ring.mu
    assert mu[1][2] == 12 and mu[2][1] == 12
    assert all(mu[i][j] == 1 for i in range(4) for j in range(4) if {i, j} != {1, 2})
    assert doc.options.max_ext == 2
    cv = parse_input(fixture_text("cv-5-3").encode())
    assert (cv.ring.mu[0][3], cv.ring.mu[0][2], cv.ring.mu[0][1]) == (5, 8, 1)


def test_mu_constraint():
    with pytest.raises(MuConstraintViolation):
        parse_document(base_doc(mu=[[1, 2], [2, 1]]))


def test_not_mu_symmetric_pointer():
    doc = base_doc(matrices=[[[1, 1], [1, 0]], [[0, 0], [0, 1]]])
    del doc["forms"]
    with pytest.raises(NotMuSymmetric) as info:
        parse_document(doc)
    assert info.value.pointer == "/matrices/0/0/1"


@pytest.mark.parametrize(
    "mutate, pointer",
    [
        (lambda d: d.update(matrices=[[[1, 0], [0, 0]], [[0, 0], [0, 1]]]), ""),
        (lambda d: d.pop("forms"), ""),
        (lambda d: d.update(extra=1), ""),
        (lambda d: d.update(n="2"), "/n"),
        (lambda d: d.update(mu=[[1, 2]]), "/mu"),
        (lambda d: d.update(forms=["z1^2"]), "/forms"),
        (lambda d: d.update(forms=["z1^2", 7]), "/forms/1"),
        (lambda d: d.update(options={"max_ext": 0}), "/options/max_ext"),
        (lambda d: d.update(options={"order_policy": "random"}), "/options/order_policy"),
        (lambda d: d.update(options={"colour": 1}), "/options"),
        (lambda d: d.update(field={"p": 5, "q": 2}), "/field"),
        (lambda d: d.update(forms=["z1^2", {"z1*z2*z2": 1}]), "/forms/1/z1*z2*z2"),
    ],
)
def test_schema_errors(mutate, pointer):
    doc = base_doc()
    mutate(doc)
    with pytest.raises((SchemaError, NonHomogeneous)) as info:
        parse_document(doc)
    assert (info.value.pointer or "") == pointer


def test_coefficient_map_forms():
    doc = parse_document(base_doc(forms=[{"z1^2": 1}, {"z2^2": 1, "z1*z2": [3]}]))
    R = doc.ring
    z1, z2 = R.gens()
    assert doc.system.forms[1] == z2 * z2 + 3 * (z1 * z2)


def test_bad_json_and_encoding():
    with pytest.raises(SchemaError):
        parse_input("{not json")
    with pytest.raises(SchemaError):
        parse_input(b"\xff\xfe")
    with pytest.raises(SchemaError):
        parse_input(json.dumps([1, 2]))


def test_read_source(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(base_doc()))
    assert parse_input(read_source(str(path))).n == 2
    assert read_source("fixture:cv-5-3") == fixture_text("cv-5-3")
    from skewclifford.errors import InputError

    with pytest.raises(InputError):
        read_source("fixture:nope")
    with pytest.raises(InputError):
        read_source(str(tmp_path / "missing.json"))
