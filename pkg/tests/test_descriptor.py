from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from algchains.descriptor import (
    DescriptorSyntaxError,
    GroupDescriptor,
    UnknownTypeError,
    check_characteristic,
    parse,
    render,
    trivial,
)
from algchains.rootdata import SimpleType, simple, simple_types_up_to

SMALL = simple_types_up_to(6)
descriptors = st.builds(
    GroupDescriptor,
    st.integers(0, 30),
    st.integers(0, 10),
    st.lists(st.sampled_from(SMALL), max_size=5).map(tuple),
)


def test_parse_basic():
    g = parse("U6 A2 A1 T1")
    assert (g.u, g.z) == (6, 1)
    assert g.factors == (simple("A2"), simple("A1"))
    assert g.dim == 18


def test_parse_powers_and_separators():
    assert parse("A1^3 * T2") == GroupDescriptor(0, 2, (simple("A1"),) * 3)
    assert parse("A1A2") == parse("A2 A1")
    assert parse("u2t1") == GroupDescriptor(2, 1)


def test_trivial():
    assert parse("1") == trivial()
    assert render(trivial()) == "1"
    assert trivial().is_trivial


def test_canonical_forms():
    assert parse("C2") == parse("B2")
    assert parse("D3") == parse("A3")
    assert parse("B1 C1") == parse("A1^2")
    assert parse("D2") == parse("A1 A1")


@pytest.mark.parametrize("text,pos", [("X9", 0), ("A1 Q", 3), ("A", 1), ("A1^", 3)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(DescriptorSyntaxError) as exc:
        parse(text)
    assert exc.value.position == pos


@pytest.mark.parametrize("text", ["", "   ", "U0", "T0 U0"])
def test_empty_expression(text):
    with pytest.raises(DescriptorSyntaxError, match="trivial group"):
        parse(text)


@pytest.mark.parametrize("text", ["D1", "E9", "A0", "G3"])
def test_unknown_type(text):
    with pytest.raises(UnknownTypeError):
        parse(text)


def test_rank_cap():
    parse(f"A{2**20}")
    with pytest.raises(DescriptorSyntaxError, match="cap"):
        parse(f"A{2**20 + 1}")


def test_render_orders_factors():
    assert render(GroupDescriptor(6, 1, (simple("A1"), simple("A2")))) == "U6 A2 A1 T1"
    assert render(GroupDescriptor(0, 0, (simple("A1"),) * 3)) == "A1^3"
    assert render(GroupDescriptor(0, 0, (simple("G2"), simple("E8"), simple("A1")))) == "G2 E8 A1"


@given(descriptors)
def test_render_parse_roundtrip(g):
    if g.is_trivial:
        assert render(g) == "1"
    assert parse(render(g)) == g


@given(descriptors, descriptors)
def test_dim_additive_and_minus(a, b):
    s = a + b
    assert s.dim == a.dim + b.dim
    assert s.minus(b) == a
    assert s.minus(a) == b


def test_minus_rejects_non_subdescriptor():
    assert parse("A2").minus(parse("A1")) is None
    assert parse("T1").minus(parse("U1")) is None


def test_without_and_isotypic():
    g = parse("A1^2 B2")
    assert g.without(simple("A1")) == parse("A1 B2")
    assert g.isotypic()[simple("A1")] == 2
    assert g.simple_type is None
    assert parse("E8").simple_type == simple("E8")


def test_characteristic():
    assert check_characteristic(0) == 0
    assert check_characteristic(7) == 7
    for bad in (1, 4, -3, 9):
        with pytest.raises(ValueError):
            check_characteristic(bad)


def test_negative_dimensions_rejected():
    with pytest.raises(ValueError):
        GroupDescriptor(-1, 0)
