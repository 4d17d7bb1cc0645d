from __future__ import annotations

import pytest

from algchains.rootdata import (
    NonCanonicalTypeError,
    SimpleType,
    UnknownTypeError,
    borel_dim,
    canonicalize,
    dim_simple,
    levi_types,
    num_positive_roots,
    simple,
    simple_types_up_to,
)

import oracles

TYPES = simple_types_up_to(8)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_positive_roots_match_root_enumeration(t):
    assert num_positive_roots(t) == oracles.num_positive_roots(t.family, t.rank)


@pytest.mark.parametrize("t", TYPES, ids=str)
def test_levi_factors_match_diagram(t):
    for node in range(1, t.rank + 1):
        levi = levi_types(t, node)
        assert sum(num_positive_roots(x) for x in levi) == oracles.levi_positive_roots(t.family, t.rank, node)
        assert sum(x.rank for x in levi) == t.rank - 1
        assert sorted(x.rank for x in levi) == oracles.levi_components(t.family, t.rank, node)


def test_dimensions():
    assert dim_simple(simple("A1")) == 3
    assert dim_simple(simple("E8")) == 248
    assert borel_dim(simple("E8")) == 128
    assert borel_dim(simple("C3")) == 12
    assert dim_simple(simple("G2")) == 14


def test_low_rank_coincidences():
    assert canonicalize("B", 1) == [simple("A1")]
    assert canonicalize("C", 1) == [simple("A1")]
    assert canonicalize("C", 2) == [simple("B2")]
    assert canonicalize("D", 2) == [simple("A1"), simple("A1")]
    assert canonicalize("D", 3) == [simple("A3")]
    assert canonicalize("E", 7) == [simple("E7")]


@pytest.mark.parametrize("fam,r", [("D", 1), ("E", 9), ("E", 5), ("F", 3), ("G", 3), ("H", 3), ("A", 0)])
def test_unknown_types(fam, r):
    with pytest.raises(UnknownTypeError):
        canonicalize(fam, r)


def test_noncanonical_constructor_rejected():
    with pytest.raises(NonCanonicalTypeError):
        SimpleType("C", 2)
    with pytest.raises(NonCanonicalTypeError):
        SimpleType("D", 3)


def test_huge_rank_allowed_in_core_type():
    t = SimpleType("B", 2**260)
    assert t.rank == 2**260


def test_f4_levis_are_bourbaki():
    f4 = simple("F4")
    assert levi_types(f4, 1) == [simple("C3")]
    assert levi_types(f4, 4) == [simple("B3")]


def test_e8_end_node_levi():
    assert levi_types(simple("E8"), 8) == [simple("E7")]
    assert levi_types(simple("E8"), 1) == [simple("D7")]
