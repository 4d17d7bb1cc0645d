from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from algchains import depth as D
from algchains.chaincert import verify
from algchains.descriptor import GroupDescriptor, parse
from algchains.length import length
from algchains.rootdata import SimpleType, simple, simple_types_up_to

import oracles

PRIMES = (2, 3, 5, 7, 11, 13)


@pytest.mark.parametrize("t", simple_types_up_to(12), ids=str)
def test_char0_matches_independent_case_split(t):
    assert D.depth_char0(t) == oracles.char0_depth(t.family, t.rank)


def test_table_lookups():
    assert D.depth_table_p(simple("A2"), 2) == 6
    assert D.depth_table_p(simple("C4"), 3) == 6
    assert D.depth_table_p(simple("F4"), 11) == 5
    assert D.depth_table_p(simple("F4"), 101) == 4
    assert D.depth_table_p(simple("E8"), 19) == 5
    assert D.depth_table_p(simple("E8"), 23) == 4
    assert D.depth_table_p(simple("B5"), 2) is None
    with pytest.raises(D.DomainError):
        D.depth_table_p(simple("A2"), 4)


def test_cell_counts():
    assert len(D.table_cells(D.LOW_RANK_TABLE, D.LOW_RANK_ROWS)) == 42
    assert len(D.table_cells(D.EXCEPTIONAL_TABLE, D.EXCEPTIONAL_ROWS)) == 29


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_psi_matches_tower(p):
    rng = random.Random(p)
    xs = list(range(1, 400)) + [rng.randrange(1, 10**12) for _ in range(300)]
    for e in oracles.tower(p, 10**40):
        xs += [e - 1, e, e + 1]
    for x in xs:
        if x >= 1:
            assert D.psi(p, x) == oracles.psi_direct(p, x), (p, x)


def test_psi_huge_arguments():
    assert D.psi(2, 2**256) == 3
    assert D.psi(2, 2**256 + 1) == 4
    assert D.psi(2, 2**260) == 4
    assert D.psi(3, 3**81) == 3


@given(st.sampled_from(PRIMES), st.integers(1, 10**30), st.integers(1, 10**30))
def test_psi_monotone(p, a, b):
    a, b = sorted((a, b))
    assert D.psi(p, a) <= D.psi(p, b)


def test_steinberg_tower():
    ranks, bound = D.steinberg_tower(5, 1)
    assert ranks == [1, 2] and bound == 4
    ranks, bound = D.steinberg_tower(5, 2)
    assert ranks == [1, 2, (5**4 - 1) // 2] and bound == 5
    ranks, bound = D.steinberg_tower(7, 1)
    assert ranks == [1, 3] and bound == 5
    ranks, _ = D.steinberg_tower(11, 3)
    assert isinstance(ranks[3], D.TowerRank)
    with pytest.raises(D.DomainError):
        D.steinberg_tower(3, 1)


def test_steinberg_parents():
    assert D.steinberg_parent_of(5, 11) == 1  # B5 > A1 at p = 11
    assert D.steinberg_parent_of(7320, 11) == 2
    assert D.steinberg_parent_of(60, 11) is None
    assert D.steinberg_parent_of(312, 5) == 2
    assert D.steinberg_parent_of(3, 7) is None
    assert D.steinberg_parent_of(7, 5) is None


@pytest.mark.parametrize("p", [5, 11, 13])
def test_steinberg_chains_realize_bound(p):
    ranks, bound = D.steinberg_tower(p, 2, digit_cap=40)
    for k, r in enumerate(ranks[1:], start=1):
        if isinstance(r, int) and r < 2000:
            d = D.depth(SimpleType("B", r), p)
            assert d.upper <= D.steinberg_tower(p, k)[1]


def test_lower_bounds():
    assert D.depth_lower(simple("C6"), 2) == 4
    assert D.depth_lower(SimpleType("B", 2**260), 2) == 4
    # the next tower value after 2^256 is 2^(2^512), far beyond any usable rank
    assert D.depth_lower(SimpleType("B", 2**260 + 1), 2) == 4
    assert D.psi(2, 2**260 + 1) == 4
    assert D.depth_lower(simple("A1"), 7) == 3


@pytest.mark.parametrize("name,p", [("C8", 2), ("C6", 2), ("B5", 3), ("D6", 5), ("A5", 2), ("A6", 3), ("B7", 2)])
def test_classical_construction_certifies(name, p):
    n, cert = D.depth_upper_classical(simple(name), p)
    assert n == cert.length
    assert verify(cert).certified
    assert n >= D.depth_lower(simple(name), p)


def test_classical_construction_values():
    assert D.depth_upper_classical(simple("C8"), 2)[0] == 9
    assert D.depth_upper_classical(simple("C6"), 2)[0] == 13
    assert D.upper_length(simple("B5"), 11)[0] == 4


def test_classical_construction_domain():
    with pytest.raises(D.DomainError):
        D.depth_upper_classical(simple("A1"), 2)
    with pytest.raises(D.DomainError):
        D.depth_upper_classical(simple("E6"), 2)
    with pytest.raises(D.DomainError):
        D.depth_upper_classical(simple("C5"), 4)


@pytest.mark.parametrize("r", [1, 2, 3, 5, 6, 12, 100, 255, 1023, 1024, 1025, 4097])
def test_c_binary_bound_at_two(r):
    if r >= 2:
        (t,) = D.canonicalize("C", r)
        assert D.upper_length(t, 2)[0] <= oracles.binary_bound(r)


@pytest.mark.parametrize("family", ["A", "B", "C", "D"])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_fast_lengths_match_recursive(family, p):
    n = 700
    arr = D.classical_lengths(family, p, n)
    lo = {"A": 1, "B": 2, "C": 3, "D": 4}[family]
    for r in list(range(lo, 130)) + list(range(130, n + 1, 37)) + [511, 512, 513, n]:
        t = D.canonicalize(family, r)
        if len(t) != 1:
            continue
        assert int(arr[r]) == D.upper_length(t[0], p)[0], (family, p, r)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_constructions_never_beat_the_tables(p):
    # Every table cell is an exact depth, so no valid chain may be shorter.
    for name in ("B2", "A3", "B3", "C3", "A4", "B4", "C4", "D4"):
        t = simple(name)
        exact = D.depth_table_p(t, p)
        for _, prefix, rest in D._classical_options(t, p):
            plan = D._with_length(D._Plan(0, "", prefix, rest), p)
            assert plan.length >= exact, (name, p, prefix, rest)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_powers_of_small_simples(name):
    s = simple(name)
    for c in (0, 2, 3, 5):
        ls = D.depth(s, c).upper
        for k in range(1, 7):
            d = D.depth(GroupDescriptor(0, 0, (s,) * k), c)
            assert d.lower >= k + 2
            assert d.upper <= k - 1 + ls


def test_quotient_lower_bound_examples():
    assert D.depth(parse("A1 T1"), 0) == D.DepthResult(4, 4, True)
    assert D.depth(parse("U3 T1"), 0).lower == 4
    d = D.depth(parse("U2 A1 T1"), 2)
    assert d.lower <= d.upper


@settings(max_examples=150)
@given(
    st.integers(0, 10),
    st.integers(0, 4),
    st.lists(st.sampled_from(simple_types_up_to(8)), max_size=4),
    st.sampled_from((0, 2, 3, 5, 7)),
)
def test_depth_sandwich(u, z, fs, c):
    g = GroupDescriptor(u, z, tuple(fs))
    d = D.depth(g, c)
    assert d.lower <= d.upper <= length(g)
    if not g.is_soluble and g.factors != (simple("A1"),):
        assert d.upper < length(g) or g.factors != (simple("A1"),) * len(g.factors)


def test_depth_is_exact_for_table_types():
    assert D.depth(simple("E8"), 2) == D.DepthResult(9, 9, True)
    assert D.depth(simple("A6"), 0) == D.DepthResult(6, 6, True)
    assert not D.depth(simple("C6"), 2).exact


def test_shortest_chain_for_huge_rank():
    nodes, method = D.shortest_chain(SimpleType("C", 2**40), 2)
    assert len(nodes) - 1 == D.upper_length(SimpleType("C", 2**40), 2)[0]
