"""Depth: the minimal length of an unrefinable chain of connected subgroups.

Exact values come from the characteristic-zero classification and from the
two positive-characteristic tables (rank at most 4, and exceptional types).
For classical groups of rank >= 5 in positive characteristic only bounds
are known: a tower lower bound and explicit recursive chain constructions.
"""

from __future__ import annotations

import functools
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .descriptor import GroupDescriptor, check_characteristic, is_prime, parse, trivial
from .maxsubdb import CharPredicate
from .rootdata import SimpleType, canonicalize


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tables, as (p_min, value) breakpoints: the last value extends to all larger p

Breakpoints = tuple[tuple[int, int], ...]

LOW_RANK_TABLE: dict[str, Breakpoints] = {
    "A1": ((2, 3),),
    "A2": ((2, 6), (3, 4)),
    "B2": ((2, 5), (5, 4)),
    "G2": ((2, 5), (7, 4)),
    "A3": ((2, 6), (3, 5)),
    "B3": ((2, 6), (7, 5)),
    "C3": ((2, 6), (3, 5), (7, 4)),
    "A4": ((2, 9), (3, 6), (5, 5)),
    "B4": ((2, 7), (3, 5), (11, 4)),
    "C4": ((2, 7), (3, 6), (11, 4)),
    "D4": ((2, 7), (5, 5)),
    "F4": ((2, 8), (3, 6), (7, 5), (13, 4)),
}
LOW_RANK_ROWS = (2, 3, 5, 7, 11, 13)  # 13 stands for the row "p > 11"

EXCEPTIONAL_TABLE: dict[str, Breakpoints] = {
    "G2": ((2, 5), (7, 4)),
    "F4": ((2, 8), (3, 6), (7, 5), (13, 4)),
    "E6": ((2, 6), (5, 5)),
    "E7": ((2, 8), (3, 7), (5, 5), (17, 4)),
    "E8": ((2, 9), (3, 7), (5, 5), (23, 4)),
}
EXCEPTIONAL_ROWS = (2, 3, 5, 7, 11, 13, 17, 19, 23)  # 23 stands for "p > 19"


def _lookup(bps: Breakpoints, p: int) -> int:
    value = bps[0][1]
    for p_min, v in bps:
        if p >= p_min:
            value = v
    return value


def table_cells(table: dict[str, Breakpoints], rows: Sequence[int]) -> list[tuple[str, int, int]]:
    """Populated cells (type, row prime, value): a column is filled down to its last breakpoint."""
    out = []
    for name, bps in table.items():
        last = bps[-1][0]
        for p in rows:
            if p <= last:
                out.append((name, p, _lookup(bps, p)))
    return out


def depth_char0(t: SimpleType) -> int:
    fam, r = t.family, t.rank
    if t == SimpleType("A", 1):
        return 3
    if t == SimpleType("A", 6):
        return 6
    if (fam == "A" and r >= 3) or fam == "D" or t in (SimpleType("B", 3), SimpleType("E", 6)):
        return 5
    return 4


def depth_table_p(t: SimpleType, p: int) -> int | None:
    if not is_prime(p):
        raise DomainError(f"{p} is not a prime")
    key = str(t)
    if key in LOW_RANK_TABLE:
        return _lookup(LOW_RANK_TABLE[key], p)
    if key in EXCEPTIONAL_TABLE:
        return _lookup(EXCEPTIONAL_TABLE[key], p)
    return None


# ---------------------------------------------------------------------------
# the tower e_1(p) = p, e_(l+1)(p) = p^(e_l(p)^2) and its inverse psi_p


def _ceil_log(p: int, x: int) -> int:
    """Least L >= 0 with p**L >= x."""
    if x <= 1:
        return 0
    L = max(0, int((x.bit_length() - 1) / math.log2(p)) - 1)
    while p**L < x:
        L += 1
    while L > 0 and p ** (L - 1) >= x:
        L -= 1
    return L


def psi(p: int, x: int) -> int:
    """Least l with e_l(p) >= x, without ever building a tower value.

    e_(l+1)(p) >= x  iff  e_l(p)^2 >= ceil(log_p x)  iff  e_l(p) >= ceil(sqrt(ceil(log_p x))).
    """
    if p < 2 or x < 1:
        raise DomainError("psi needs p >= 2 and x >= 1")
    count = 1
    while x > p:
        L = _ceil_log(p, x)
        x = math.isqrt(L - 1) + 1
        count += 1
    return count


@dataclass(frozen=True)
class TowerRank:
    """The rank (p^(inner^2) - 1)/2, kept symbolic because it is too large to print."""

    p: int
    inner: "int | TowerRank"

    @property
    def log10(self) -> float:
        inner = self.inner
        if isinstance(inner, TowerRank):
            lg = inner.log10
            return math.inf if lg > 300 else 10 ** (2 * lg) * math.log10(self.p)
        return inner * inner * math.log10(self.p) - math.log10(2)

    def __str__(self) -> str:
        return f"({self.p}^({self.inner})^2-1)/2"


def steinberg_tower(p: int, k: int, digit_cap: int = 4000) -> tuple[list, int]:
    """Ranks r_0 = 1, r_(l+1) = (p^(r_l^2) - 1)/2 and the depth bound for B_(r_k).

    B_(r_l) sits inside B_(r_(l+1)) through its Steinberg module, so
    B_(r_k) > B_(r_(k-1)) > ... > B_1 = A1 > U1T1 > T1 > 1 gives k + 3.
    At p = 7 the first step B_3 > A1 is not maximal (the A1 lies in G2), and
    the tower runs through B_3, whose depth is 5, so the bound is k + 4 there.
    """
    if not is_prime(p) or p < 5:
        raise DomainError("the Steinberg tower needs a prime p >= 5")
    if k < 0:
        raise DomainError("k must be non-negative")
    ranks: list = [1]
    for _ in range(k):
        r = ranks[-1]
        if isinstance(r, int) and r * r * math.log10(p) <= digit_cap:
            ranks.append((p ** (r * r) - 1) // 2)
        else:
            ranks.append(TowerRank(p, r))
    bound = k + 4 if (p == 7 and k >= 1) else k + 3
    return ranks, bound


def steinberg_parent_of(r: int, p: int) -> int | None:
    """m with r = (p^(m^2) - 1)/2 and B_m < B_r maximal, if any."""
    if p < 5:
        return None
    m = 1
    while True:
        big = (p ** (m * m) - 1) // 2
        if big > r:
            return None
        if big == r and not (p == 7 and m == 1):
            return m
        m += 1


# ---------------------------------------------------------------------------
# lower bounds


def depth_lower(t: SimpleType, c: int) -> int:
    c = check_characteristic(c)
    if c == 0:
        return depth_char0(t)
    tab = depth_table_p(t, c)
    if tab is not None:
        return tab
    return max(psi(c, t.rank), 3 if t == SimpleType("A", 1) else 4)


# ---------------------------------------------------------------------------
# chain plans
#
# A plan is a fixed prefix of nodes starting at the group, followed by a
# product of simple groups that is reduced block by block: S^k first loses
# k-1 copies diagonally, then S's own chain runs with the later blocks
# carried along as a direct factor.


@dataclass(frozen=True)
class _Plan:
    length: int
    method: str
    prefix: tuple[GroupDescriptor, ...]
    rest: tuple[SimpleType, ...]


def _types(fam: str, r: int) -> tuple[SimpleType, ...]:
    return tuple(canonicalize(fam, r))


# (characteristic condition, prefix, simple group the chain continues with)
_TABLE_CHAINS: dict[str, list[tuple[str, tuple[str, ...], str | None]]] = {
    "A1": [("all", ("A1", "U1 T1", "T1"), None)],
    "A2": [("p=2", ("A2", "U2 A1 T1", "A1 T1"), "A1"), ("all", ("A2",), "A1")],
    "B2": [("p=2,p=3", ("B2", "A1^2"), "A1"), ("all", ("B2",), "A1")],
    "G2": [("p=2,p=3,p=5", ("G2", "A1^2"), "A1"), ("all", ("G2",), "A1")],
    "A3": [("p=2", ("A3",), "B2"), ("all", ("A3", "A1^2"), "A1")],
    "B3": [("all", ("B3",), "G2")],
    "C3": [("p=2", ("C3",), "G2"), ("p=3,p=5", ("C3", "A1^2"), "A1"), ("all", ("C3",), "A1")],
    "A4": [("p=2", ("A4", "U4 A3 T1", "A3 T1"), "A3"), ("all", ("A4",), "B2")],
    "B4": [("p=2", ("B4", "B2^2"), "B2"), ("p=3,p=5,p=7", ("B4", "A1^2"), "A1"), ("all", ("B4",), "A1")],
    "C4": [("p=2", ("C4", "B2^2"), "B2"), ("p=3,p=5,p=7", ("C4", "A1^3", "A1^2"), "A1"), ("all", ("C4",), "A1")],
    "D4": [("p=2,p=3", ("D4",), "B3"), ("all", ("D4",), "A2")],
    "F4": [
        ("p=2", ("F4",), "C4"),
        ("p=3,p=5", ("F4", "A2^2"), "A2"),
        ("p=7", ("F4",), "G2"),
        ("p=11", ("F4",), "B4"),
        ("all", ("F4",), "A1"),
    ],
    "E6": [("p=0,p=2,p=3", ("E6",), "G2"), ("all", ("E6",), "A2")],
    "E7": [
        ("p=2", ("E7", "G2 C3", "G2^2"), "G2"),
        ("p=3", ("E7", "G2 A1", "A2 A1", "A1^2"), "A1"),
        ("5<=p<=13", ("E7", "A1^2"), "A1"),
        ("all", ("E7",), "A1"),
    ],
    "E8": [
        ("p=2", ("E8", "D8"), "B4"),
        ("p=3", ("E8", "A8", "A2^2"), "A2"),
        ("5<=p<=19", ("E8",), "B2"),
        ("all", ("E8",), "A1"),
    ],
    "A6": [("p=0", ("A6",), "B3")],
}


def _table_plan(t: SimpleType, c: int) -> _Plan | None:
    for cond, prefix, rest in _TABLE_CHAINS.get(str(t), ()):
        if CharPredicate(cond)(c):
            rest_t = (parse(rest).simple_type,) if rest else ()
            method = "characteristic 0 classification" if c == 0 else "table"
            plan = _Plan(0, method, tuple(parse(s) for s in prefix), rest_t)
            return _with_length(plan, c)
    return None


def _product_length(types: Sequence[SimpleType], c: int) -> int:
    total = 0
    for s, k in GroupDescriptor(0, 0, tuple(types)).isotypic().items():
        total += k - 1 + _plan(s, c).length
    return total


def _with_length(plan: _Plan, c: int) -> _Plan:
    length = len(plan.prefix) + _product_length(plan.rest, c)
    return _Plan(length, plan.method, plan.prefix, plan.rest)


def _char0_options(t: SimpleType) -> Iterator[tuple[str, tuple, tuple]]:
    fam, r = t.family, t.rank
    g = (GroupDescriptor.of(t),)
    if fam == "A" and r % 2 == 1:
        yield "A_r > C_((r+1)/2) > A1", g, _types("C", (r + 1) // 2)
    elif fam == "A":
        yield "A_r > B_(r/2) > A1", g, _types("B", r // 2)
    elif fam in "BC":
        yield "maximal A1", g, _types("A", 1)
    elif fam == "D":
        yield "D_r > B_(r-1) > A1", g, _types("B", r - 1)


def _pow2_below(r: int) -> int:
    return 1 << (r.bit_length() - 1)


def _classical_options(t: SimpleType, p: int) -> Iterator[tuple[str, tuple, tuple]]:
    fam, r = t.family, t.rank
    g = (GroupDescriptor.of(t),)
    if fam == "C" or (fam == "B" and p == 2):
        a = _pow2_below(r)
        if a == r:
            yield f"{fam}: halve, {fam}_r > {fam}_(r/2)^2", g, _types(fam, r // 2) * 2
        else:
            yield f"{fam}: binary decomposition", g, _types(fam, a) + _types(fam, r - a)
    if fam == "B" and p != 2:
        yield "B_r > D_r", g, _types("D", r)
        m = steinberg_parent_of(r, p)
        if m is not None:
            yield "Steinberg module embedding", g, _types("B", m)
    if fam == "D":
        if p == 2 or r % 2 == 1:
            yield "D_r > B_(r-1)", g, _types("B", r - 1)
        if p != 2 and r % 2 == 0:
            a = _pow2_below(r)
            if a == r:
                yield "D: halve, D_r > D_(r/2)^2", g, _types("D", r // 2) * 2
            else:
                yield "D: binary decomposition", g, _types("D", a) + _types("D", r - a)
        if p != 2 and r == 5:
            yield "D5 > B2", g, _types("B", 2)
        if p != 2 and r % 2 == 1 and r >= 7:
            yield "D_r > D_3 D_(r-3)", g, _types("D", 3) + _types("D", r - 3)
    if fam == "A":
        if r % 2 == 1:
            yield "A_r > C_((r+1)/2)", g, _types("C", (r + 1) // 2)
        else:
            levi = GroupDescriptor.of(SimpleType("A", r - 1), u=r, z=1)
            yield "A_r: parabolic descent to A_(r-1)", g + (levi, levi.minus(GroupDescriptor(r))), (SimpleType("A", r - 1),)
            if p != 2:
                yield "A_r > B_(r/2)", g, _types("B", r // 2)


@functools.lru_cache(maxsize=None)
def _plan(t: SimpleType, c: int) -> _Plan:
    tab = _table_plan(t, c)
    if tab is not None:
        return tab
    options = _char0_options(t) if c == 0 else _classical_options(t, c)
    best: _Plan | None = None
    for method, prefix, rest in options:
        plan = _with_length(_Plan(0, method, prefix, rest), c)
        if best is None or plan.length < best.length:
            best = plan
    if best is None:
        raise DomainError(f"no chain construction for {t} at characteristic {c}")
    return best


@contextmanager
def _deep_recursion(rank: int):
    old = sys.getrecursionlimit()
    if rank > 1 << 12:
        sys.setrecursionlimit(max(old, 40 * rank.bit_length() + 2000))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _expand(t: SimpleType, c: int) -> list[GroupDescriptor]:
    plan = _plan(t, c)
    nodes = list(plan.prefix)
    blocks = list(GroupDescriptor(0, 0, plan.rest).isotypic().items())
    for i, (s, k) in enumerate(blocks):
        below = GroupDescriptor(0, 0, tuple(x for x, j in blocks[i + 1:] for _ in range(j)))
        for copies in range(k, 1, -1):
            nodes.append(GroupDescriptor(0, 0, (s,) * copies) + below)
        nodes.extend(n + below for n in _expand(s, c)[:-1])
    nodes.append(trivial())
    return nodes


def shortest_chain(t: SimpleType, c: int) -> tuple[list[GroupDescriptor], str]:
    """Shortest known chain for ``t`` and the construction that produced it."""
    c = check_characteristic(c)
    with _deep_recursion(t.rank):
        return _expand(t, c), _plan(t, c).method


def upper_length(t: SimpleType, c: int) -> tuple[int, str]:
    c = check_characteristic(c)
    with _deep_recursion(t.rank):
        plan = _plan(t, c)
        length, method = plan.length, plan.method
        # B_r and C_r have the same depth when p = 2 (special isogeny).
        if c == 2 and t.family in "BC" and t.rank >= 3:
            other = _plan(SimpleType("C" if t.family == "B" else "B", t.rank), c)
            if other.length < length:
                length, method = other.length, f"B/C identification at p=2 ({other.method})"
    return length, method


def depth_upper_classical(t: SimpleType, p: int):
    """Length and certificate of the recursive construction for a classical group."""
    from .chaincert import ChainCertificate

    if not t.is_classical or t.rank < 2:
        raise DomainError("the classical constructions need a classical type of rank >= 2")
    if not is_prime(p):
        raise DomainError(f"{p} is not a prime")
    nodes, _ = shortest_chain(t, p)
    cert = ChainCertificate.build(nodes, p)
    return len(nodes) - 1, cert


# ---------------------------------------------------------------------------
# fast length-only path for sweeps over every rank up to n


def classical_lengths(family: str, p: int, n: int) -> np.ndarray:
    """Lengths of the constructed chains of X_r for r = 0..n (entries below the family minimum are 0).

    Computed block by block over [2^k, 2^(k+1)) with numpy; agrees with
    ``upper_length`` (checked in the tests).
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not a prime")
    L = {f: np.zeros(n + 1, dtype=np.int64) for f in "ABCD"}

    def tab(name: str) -> int:
        return depth_table_p(parse(name).simple_type, p)

    for r in range(1, min(n, 4) + 1):
        L["A"][r] = tab(f"A{r}")
        L["C"][r] = tab("A1" if r == 1 else "B2" if r == 2 else f"C{r}")
        L["B"][r] = tab("A1" if r == 1 else f"B{r}")
    a1 = tab("A1")
    if n >= 2:
        L["D"][2] = 1 + a1  # A1^2
    if n >= 3:
        L["D"][3] = tab("A3")
    if n >= 4:
        L["D"][4] = tab("D4")

    steinberg = {}
    if p >= 5:
        m = 1
        while (p ** (m * m) - 1) // 2 <= n:
            r = (p ** (m * m) - 1) // 2
            if r >= 5 and not (p == 7 and m == 1):
                steinberg[r] = m
            m += 1

    def patch_b(lo: int, hi: int, parity: int) -> None:
        for r, m in steinberg.items():
            if lo <= r < hi and r % 2 == parity:
                L["B"][r] = min(L["B"][r], 1 + L["B"][m])

    k = 2
    while (1 << k) <= n:
        lo, hi = 1 << k, min(1 << (k + 1), n + 1)
        start = max(lo, 5)
        if start < hi:
            idx = np.arange(start, hi)
            j = idx - lo
            # C (and B at p = 2): halving at r = 2^k, otherwise split off 2^k
            for f in ("CB" if p == 2 else "C"):
                arr = L[f]
                if lo >= 5:
                    arr[lo] = 2 + arr[lo // 2]
                arr[idx[j > 0]] = 1 + arr[lo] + arr[j[j > 0]]
            if p == 2:
                L["D"][idx] = 1 + L["B"][idx - 1]
            else:
                D, B = L["D"], L["B"]
                even = idx[idx % 2 == 0]
                je = even - lo
                if lo >= 5:
                    D[lo] = 2 + D[lo // 2]
                D[even[je > 0]] = 1 + D[lo] + D[je[je > 0]]
                B[even] = 1 + D[even]
                patch_b(lo, hi, 0)
                odd = idx[idx % 2 == 1]
                dv = 1 + B[odd - 1]
                dv = np.where(odd >= 7, np.minimum(dv, 1 + L["D"][3] + D[np.maximum(odd - 3, 0)]), dv)
                dv = np.where(odd == 5, np.minimum(dv, 1 + L["B"][2]), dv)
                D[odd] = dv
                B[odd] = 1 + D[odd]
                patch_b(lo, hi, 1)
            A = L["A"]
            oddA = idx[idx % 2 == 1]
            A[oddA] = 1 + L["C"][(oddA + 1) // 2]
            evenA = idx[idx % 2 == 0]
            av = 3 + A[evenA - 1]
            if p != 2:
                av = np.minimum(av, 1 + L["B"][evenA // 2])
            A[evenA] = av
        k += 1
    return L[family]


# ---------------------------------------------------------------------------
# general descriptors


@dataclass(frozen=True)
class DepthResult:
    lower: int
    upper: int
    exact: bool
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"depth interval [{self.lower}, {self.upper}] is empty")
        if self.exact != (self.lower == self.upper):
            raise AssertionError("exact flag disagrees with the interval")

    def __str__(self) -> str:
        return str(self.lower) if self.exact else f"[{self.lower}, {self.upper}]"


@functools.lru_cache(maxsize=4096)
def _simple_depth(t: SimpleType, c: int) -> DepthResult:
    if c == 0:
        v = depth_char0(t)
        return DepthResult(v, v, True, ("exact: characteristic 0 classification",))
    tab = depth_table_p(t, c)
    if tab is not None:
        src = "low-rank table" if str(t) in LOW_RANK_TABLE else "exceptional table"
        return DepthResult(tab, tab, True, (f"exact: {src}",))
    lo = depth_lower(t, c)
    up, method = upper_length(t, c)
    why_lo = "tower bound psi_p(rank)" if lo > 4 else "only A1 has depth 3"
    return DepthResult(lo, up, lo == up, (f"lower: {why_lo}", f"upper: construction {method}"))


def depth(g: GroupDescriptor | SimpleType, c: int) -> DepthResult:
    c = check_characteristic(c)
    if isinstance(g, SimpleType):
        g = GroupDescriptor.of(g)
    if g.is_soluble:
        return DepthResult(g.dim, g.dim, True, ("exact: soluble group, depth = dimension",))
    s = g.simple_type
    if s is not None:
        return _simple_depth(s, c)
    counts = g.isotypic()
    simple_res = {t: _simple_depth(t, c) for t in counts}
    # Lower: peel the unipotent radical, then one quotient per extra simple
    # factor (or torus) before the deepest one.
    pieces = [simple_res[t].lower for t in g.factors]
    if g.z:
        pieces.append(g.z)
    lower = (1 if g.u else 0) + len(pieces) - 1 + max(pieces)
    upper = g.u + g.z + sum(k - 1 + simple_res[t].upper for t, k in counts.items())
    prov = (
        "lower: quotient bound over the radical and the simple factors",
        "upper: radical dimension plus diagonal descent in each isotypic power",
    )
    return DepthResult(lower, upper, lower == upper, prov)
