"""Length: the maximal length of an unrefinable chain, which has a closed form."""

from __future__ import annotations

from dataclasses import dataclass

from .chaincert import ChainCertificate
from .descriptor import GroupDescriptor, check_characteristic, trivial
from .maxsubdb import MaxSubDB, parabolic
from .rootdata import SimpleType, borel_dim, end_node


def length(g: GroupDescriptor | SimpleType) -> int:
    if isinstance(g, SimpleType):
        g = GroupDescriptor.of(g)
    return g.u + g.z + sum(borel_dim(t) + t.rank for t in g.factors)


@dataclass(frozen=True)
class HalfDimCheck:
    length: int
    dim: int
    holds: bool


def length_exceeds_half_dim(g: GroupDescriptor) -> HalfDimCheck:
    if g.is_trivial:
        raise ValueError("the trivial group has no dimension to compare against")
    l, d = length(g), g.dim
    return HalfDimCheck(l, d, 2 * l > d)


def length_equals_dim(g: GroupDescriptor) -> bool:
    return all(t == SimpleType("A", 1) for t in g.factors)


def _longest_nodes(start: GroupDescriptor) -> list[GroupDescriptor]:
    nodes = [start]
    cur = start
    while not cur.is_soluble:
        # Largest factor first; its end-node parabolic lowers the semisimple rank by one.
        s = cur.factors[0]
        p = parabolic(s, end_node(s))
        cur = cur.without(s) + p
        nodes.append(cur)
    while not cur.is_trivial:
        cur = GroupDescriptor(cur.u - 1, cur.z) if cur.u else GroupDescriptor(0, cur.z - 1)
        nodes.append(cur)
    return nodes


def max_length_chain(t: SimpleType, c: int, db: MaxSubDB | None = None) -> ChainCertificate:
    """A certificate of length dim B + rank through maximal parabolics, then the soluble residue."""
    c = check_characteristic(c)
    nodes = _longest_nodes(GroupDescriptor.of(t))
    assert nodes[-1] == trivial()
    return ChainCertificate.build(nodes, c, db)
