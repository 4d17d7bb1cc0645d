"""Chain difference cd = l - depth, chain ratio cr = l / depth, and checkable global bounds.

Every check is exact integer or rational arithmetic.  When the depth is only
known as an interval, a check reports Holds if the bound holds for every
value in the interval, Violated if it fails for every value, and
Inconclusive otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import mpmath

from .depth import depth
from .descriptor import GroupDescriptor, check_characteristic
from .length import length
from .rootdata import SimpleType, dim_simple

HOLDS = "Holds"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: str
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED


def _as_desc(g: GroupDescriptor | SimpleType) -> GroupDescriptor:
    return GroupDescriptor.of(g) if isinstance(g, SimpleType) else g


def chain_difference(g: GroupDescriptor | SimpleType, c: int) -> tuple[int, int]:
    g = _as_desc(g)
    d = depth(g, c)
    l = length(g)
    return l - d.upper, l - d.lower


def chain_ratio(g: GroupDescriptor | SimpleType, c: int) -> tuple[Fraction, Fraction]:
    g = _as_desc(g)
    if g.is_trivial:
        raise ValueError("the chain ratio of the trivial group is undefined")
    d = depth(g, c)
    l = length(g)
    return Fraction(l, d.upper), Fraction(l, d.lower)


def _verdict(name: str, at_best: bool, at_worst: bool, detail: str) -> CheckReport:
    """at_best: the bound holds at the most favourable end of the interval; at_worst: at the least."""
    if at_worst:
        return CheckReport(name, HOLDS, detail)
    if not at_best:
        return CheckReport(name, VIOLATED, detail)
    return CheckReport(name, INCONCLUSIVE, detail)


def _cd_dim_bound_holds(dim: int, cd: int) -> bool:
    # dim <= 2cd + 800 + 40 sqrt(400 + 2cd), squared without floats
    a = dim - 2 * cd - 800
    return a <= 0 or a * a <= 1600 * (400 + 2 * cd)


def check_cd_bound(g: GroupDescriptor | SimpleType, c: int) -> CheckReport:
    g = _as_desc(g)
    dim_bar = sum(dim_simple(t) for t in g.factors)
    lo, hi = chain_difference(g, c)
    detail = f"dim of semisimple quotient {dim_bar}, cd in [{lo}, {hi}]"
    return _verdict("cd-bound", _cd_dim_bound_holds(dim_bar, hi), _cd_dim_bound_holds(dim_bar, lo), detail)


def check_simple_cd_bound(t: SimpleType, c: int) -> CheckReport:
    c = check_characteristic(c)
    lo, hi = chain_difference(t, c)
    d = dim_simple(t)
    slack = 3 if c == 0 else 40
    detail = f"dim {d} <= 2 cd + {slack}, cd in [{lo}, {hi}]"
    ok_lo = d <= 2 * lo + slack and d <= 2 * lo + 40
    ok_hi = d <= 2 * hi + slack and d <= 2 * hi + 40
    return _verdict("simple-cd", ok_hi, ok_lo, detail)


def check_ss_cd_bound(t: SimpleType, k: int, c: int) -> CheckReport:
    c = check_characteristic(c)
    if k < 2:
        raise ValueError("the power bound needs k >= 2")
    g = GroupDescriptor(0, 0, (t,) * k)
    lo, hi = chain_difference(g, c)
    d = g.dim
    slack = 2 if c == 0 else 28
    detail = f"dim {d} <= 2 cd + {slack}, cd in [{lo}, {hi}]"
    return _verdict("power-cd", d <= 2 * hi + slack, d <= 2 * lo + slack, detail)


def _crsimple_p(d: int, cr: Fraction) -> bool | None:
    """d < ((log2 d)^2 + 24) cr, decided exactly when the bracket on log2 d allows it."""
    b = d.bit_length()
    lo_log, hi_log = b - 1, b  # lo_log <= log2 d < hi_log
    if d * cr.denominator < (lo_log * lo_log + 24) * cr.numerator:
        return True
    if d * cr.denominator >= (hi_log * hi_log + 24) * cr.numerator:
        return False
    with mpmath.workdps(60):
        lhs = mpmath.mpf(d)
        rhs = (mpmath.log(d, 2) ** 2 + 24) * mpmath.mpf(cr.numerator) / cr.denominator
        return bool(lhs < rhs)


def check_cr_bound(t: SimpleType, c: int) -> CheckReport:
    c = check_characteristic(c)
    lo, hi = chain_ratio(t, c)
    d = dim_simple(t)
    if c == 0:
        detail = f"dim {d} < 12 cr, cr in [{lo}, {hi}]"
        return _verdict("cr-simple", d < 12 * hi, d < 12 * lo, detail)
    detail = f"dim {d} < ((log2 dim)^2 + 24) cr, cr in [{lo}, {hi}]"
    return _verdict("cr-simple", bool(_crsimple_p(d, hi)), bool(_crsimple_p(d, lo)), detail)


def sum_dims_floor(types: Sequence[SimpleType], n: int | None = None) -> CheckReport:
    if len(set(types)) != len(types):
        raise ValueError("the types must be pairwise distinct")
    if n is not None and n != len(types):
        raise ValueError(f"expected {n} types, got {len(types)}")
    n = len(types)
    total = sum(dim_simple(t) for t in types)
    status = HOLDS if total >= n * n else VIOLATED
    return CheckReport("sum-dims", status, f"sum of dims {total} >= {n}^2 = {n * n}")


class DepthLengthClass(str, Enum):
    SOLUBLE = "Soluble"
    QUOTIENT_A1_CANDIDATE = "QuotientA1Candidate"
    IMPOSSIBLE = "Impossible"


def depth_equals_length_classifier(g: GroupDescriptor, c: int | None = None) -> DepthLengthClass:
    """Necessary condition for depth = length: soluble, or the semisimple quotient is a single A1."""
    if not g.factors:
        return DepthLengthClass.SOLUBLE
    if g.factors == (SimpleType("A", 1),):
        return DepthLengthClass.QUOTIENT_A1_CANDIDATE
    return DepthLengthClass.IMPOSSIBLE


def smallest_distinct_types(n: int) -> list[SimpleType]:
    """The n simple types of least dimension (ties broken by the type order)."""
    out: list[SimpleType] = []
    bound = 1
    while True:
        cands = []
        for fam, lo in (("A", 1), ("B", 2), ("C", 3), ("D", 4)):
            cands += [SimpleType(fam, r) for r in range(lo, bound + 1)]
        cands += [SimpleType(f, r) for f, r in (("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8))]
        cands.sort(key=lambda t: (dim_simple(t), t.sort_key))
        # every type of rank > bound has dimension > bound^2 + 2*bound
        safe = [t for t in cands if dim_simple(t) <= bound * bound]
        if len(safe) >= n:
            return safe[:n]
        bound = max(2 * bound, 2)
