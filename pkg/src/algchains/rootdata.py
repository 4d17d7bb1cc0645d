"""Counts and dimensions for simple algebraic group types.

Only closed forms live here: number of positive roots, dimension, Borel
dimension, and the low-rank coincidences (B1 = C1 = A1, D2 = A1 A1,
D3 = A3, C2 = B2) that make every isogeny class have one canonical key.
"""

from __future__ import annotations

from dataclasses import dataclass

FAMILIES = "ABCDEFG"

# Ordering used for descriptor normalization: G > F > E > D > C > B > A.
_FAMILY_ORDER = {f: i for i, f in enumerate(FAMILIES)}

MAX_RANK = 2**20


class UnknownTypeError(ValueError):
    """No simple group of the requested family and rank exists."""


class NonCanonicalTypeError(ValueError):
    pass


def _valid_canonical(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in "BC":
        return rank >= 2 if family == "B" else rank >= 3
    if family == "D":
        return rank >= 4
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


@dataclass(frozen=True, order=False)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES or not isinstance(self.rank, int) or self.rank < 1:
            raise UnknownTypeError(f"no simple type {self.family}{self.rank}")
        if not _valid_canonical(self.family, self.rank):
            raise NonCanonicalTypeError(
                f"{self.family}{self.rank} is not canonical; use canonicalize()"
            )

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def __repr__(self) -> str:
        return f"SimpleType({self})"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_FAMILY_ORDER[self.family], self.rank)

    @property
    def is_classical(self) -> bool:
        return self.family in "ABCD"

    @property
    def is_exceptional(self) -> bool:
        return self.family in "EFG"


def simple(name: str) -> SimpleType:
    """Shorthand: ``simple("E8")``.  The name must already be canonical."""
    return SimpleType(name[0], int(name[1:]))


def canonicalize(family: str, rank: int) -> list[SimpleType]:
    """Resolve low-rank coincidences; the result is a list of canonical types."""
    if family not in FAMILIES or rank < 1:
        raise UnknownTypeError(f"no simple type {family}{rank}")
    if family in "BC" and rank == 1:
        return [SimpleType("A", 1)]
    if family == "C" and rank == 2:
        return [SimpleType("B", 2)]
    if family == "D":
        if rank == 1:
            raise UnknownTypeError("D1 is a torus, not a simple group")
        if rank == 2:
            return [SimpleType("A", 1), SimpleType("A", 1)]
        if rank == 3:
            return [SimpleType("A", 3)]
    if not _valid_canonical(family, rank):
        raise UnknownTypeError(f"no simple type {family}{rank}")
    return [SimpleType(family, rank)]


_EXCEPTIONAL_N = {("G", 2): 6, ("F", 4): 24, ("E", 6): 36, ("E", 7): 63, ("E", 8): 120}


def num_positive_roots(t: SimpleType) -> int:
    if not isinstance(t, SimpleType):
        raise NonCanonicalTypeError(f"expected a SimpleType, got {t!r}")
    r = t.rank
    if t.family == "A":
        return r * (r + 1) // 2
    if t.family in "BC":
        return r * r
    if t.family == "D":
        return r * (r - 1)
    return _EXCEPTIONAL_N[(t.family, r)]


def dim_simple(t: SimpleType) -> int:
    return t.rank + 2 * num_positive_roots(t)


def borel_dim(t: SimpleType) -> int:
    return num_positive_roots(t) + t.rank


def _canon_parts(parts: list[tuple[str, int]]) -> list[SimpleType]:
    out: list[SimpleType] = []
    for fam, r in parts:
        if r >= 1:
            out.extend(canonicalize(fam, r))
    return out


# Bourbaki labelling of E_n: chain 1-3-4-5-...-n with node 2 hanging off 4.
def _e_edges(n: int) -> set[frozenset[int]]:
    edges = {frozenset((1, 3)), frozenset((2, 4))}
    edges.update(frozenset((k, k + 1)) for k in range(3, n))
    return edges


def _simply_laced_component(nodes: set[int], edges: set[frozenset[int]]) -> SimpleType:
    adj = {v: [w for w in nodes if frozenset((v, w)) in edges] for v in nodes}
    branch = [v for v in nodes if len(adj[v]) == 3]
    if not branch:
        return SimpleType("A", len(nodes))
    centre = branch[0]
    legs = []
    for start in adj[centre]:
        length, prev, cur = 0, centre, start
        while cur is not None:
            length += 1
            nxt = [w for w in adj[cur] if w != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        legs.append(length)
    legs.sort()
    if legs[:2] == [1, 1]:
        return canonicalize("D", legs[2] + 3)[0]
    return SimpleType("E", sum(legs) + 1)


def _e_levi(n: int, node: int) -> list[SimpleType]:
    edges = _e_edges(n)
    remaining = set(range(1, n + 1)) - {node}
    out = []
    while remaining:
        comp, stack = set(), [min(remaining)]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(w for w in remaining if frozenset((v, w)) in edges and w not in comp)
        remaining -= comp
        out.append(_simply_laced_component(comp, edges))
    return out


def levi_types(t: SimpleType, node: int) -> list[SimpleType]:
    """Simple factors of the Levi of the maximal parabolic obtained by deleting ``node``.

    Nodes use Bourbaki numbering, 1..rank.
    """
    r = t.rank
    if not 1 <= node <= r:
        raise ValueError(f"{t} has no node {node}")
    fam = t.family
    if fam in "ABC":
        return _canon_parts([("A", node - 1), (fam, r - node)])
    if fam == "D":
        if node <= r - 2:
            return _canon_parts([("A", node - 1), ("D", r - node)])
        return _canon_parts([("A", r - 1)])
    if fam == "G":
        return [SimpleType("A", 1)]
    if fam == "F":
        return {
            1: [SimpleType("C", 3)],
            2: [SimpleType("A", 2), SimpleType("A", 1)],
            3: [SimpleType("A", 2), SimpleType("A", 1)],
            4: [SimpleType("B", 3)],
        }[node]
    return _e_levi(r, node)


def end_node(t: SimpleType) -> int:
    """The fixed end node dropped when descending through maximal parabolics."""
    return t.rank


def simple_types_up_to(max_rank: int) -> list[SimpleType]:
    """Every canonical simple type of rank <= max_rank, in type order."""
    out = []
    for fam in FAMILIES:
        for r in range(1, max_rank + 1):
            if _valid_canonical(fam, r):
                out.append(SimpleType(fam, r))
    return out
