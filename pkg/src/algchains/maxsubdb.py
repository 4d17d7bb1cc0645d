"""Curated maximal-connected-subgroup facts and the shortest-chain oracle.

Facts come from two places.  Concrete rows live in ``data/maxsub.dat``
(override with the ``ALGCHAINS_MAXSUBDB`` environment variable).  Families
of facts that hold for every rank (maximal parabolics, subspace
stabilisers, diagonal subgroups, soluble codimension-one descent) are
rules in this module.

A missing witness never means "not maximal".  Refutation is separate and
only happens when stored facts prove an intermediate subgroup exists.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .descriptor import GroupDescriptor, parse
from .rootdata import SimpleType, canonicalize, levi_types, num_positive_roots

ENV_VAR = "ALGCHAINS_MAXSUBDB"
FORMAT_VERSION = 1

PARABOLIC = "Parabolic"
LEVI_DROP = "LeviDrop"
SUBSPACE = "SubspaceStabilizer"
TENSOR_DIAG = "TensorOrDiagonal"
TABLE = "TableCited"
BOREL = "BorelDescent"
KINDS = (PARABOLIC, LEVI_DROP, SUBSPACE, TENSOR_DIAG, TABLE, BOREL)

COMPLETE = "Complete"
WITNESSES_ONLY = "WitnessesOnly"


class DatabaseFormatError(ValueError):
    pass


class NotCuratedError(LookupError):
    """The database holds no curated facts for this (group, characteristic)."""


class IncompleteDatabaseError(LookupError):
    """The oracle could not pin the depth down from the curated facts."""

    def __init__(self, message: str, lower: int, upper: int | None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


# ---------------------------------------------------------------------------
# characteristic predicates

_ATOM = re.compile(
    r"^(?:(?P<all>all)|p(?P<op>=|>=|<=|!=|>)(?P<n>\d+)|(?P<lo>\d+)<=p<=(?P<hi>\d+))$"
)


@dataclass(frozen=True)
class CharPredicate:
    text: str

    def __post_init__(self):
        for atom in self.atoms:
            if not _ATOM.match(atom):
                raise DatabaseFormatError(f"bad characteristic predicate {self.text!r}")

    @property
    def atoms(self) -> list[str]:
        return [a.strip().replace(" ", "") for a in self.text.split(",") if a.strip()]

    def __call__(self, c: int) -> bool:
        return any(self._atom(a, c) for a in self.atoms)

    @staticmethod
    def _atom(atom: str, c: int) -> bool:
        m = _ATOM.match(atom)
        if m["all"]:
            return True
        if m["lo"]:
            return c > 0 and int(m["lo"]) <= c <= int(m["hi"])
        n, op = int(m["n"]), m["op"]
        if op == "=":
            return c == n
        if op == "!=":
            return c != n
        if c == 0:
            return False
        return {">=": c >= n, "<=": c <= n, ">": c > n}[op]

    def __str__(self) -> str:
        return self.text


ALL = CharPredicate("all")


@dataclass(frozen=True)
class MaxStepWitness:
    parent: GroupDescriptor
    child: GroupDescriptor
    char_condition: CharPredicate
    kind: str
    citation: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DatabaseFormatError(f"unknown witness kind {self.kind!r}")
        if self.child.dim >= self.parent.dim:
            raise DatabaseFormatError(f"witness {self.parent} > {self.child} does not drop dimension")


@dataclass(frozen=True)
class CompletenessTag:
    group: SimpleType
    char_condition: CharPredicate
    status: str


@dataclass(frozen=True)
class _CompleteRecord:
    group: SimpleType
    cond: CharPredicate
    reductive: tuple[GroupDescriptor, ...]
    citation: str


@dataclass(frozen=True)
class _FloorRecord:
    group: SimpleType
    cond: CharPredicate
    citation: str


@dataclass(frozen=True)
class _RefinableRecord:
    parent: GroupDescriptor
    child: GroupDescriptor
    cond: CharPredicate
    citation: str


# ---------------------------------------------------------------------------
# loading


def _simple_of(text: str, line: int) -> SimpleType:
    t = parse(text).simple_type
    if t is None:
        raise DatabaseFormatError(f"line {line}: {text!r} is not a simple type")
    return t


class MaxSubDB:
    def __init__(self, rows, complete, floors, refinable, source: str = "<memory>"):
        self.source = source
        self.rows: dict[tuple[GroupDescriptor, GroupDescriptor], list[MaxStepWitness]] = {}
        self.by_parent: dict[GroupDescriptor, list[MaxStepWitness]] = {}
        for w in rows:
            self._add(w)
        self.complete: list[_CompleteRecord] = list(complete)
        self.floors: list[_FloorRecord] = list(floors)
        self.refinable: list[_RefinableRecord] = list(refinable)
        for rec in self.complete:
            parent = GroupDescriptor.of(rec.group)
            for child in rec.reductive:
                self._add(MaxStepWitness(parent, child, rec.cond, TABLE, rec.citation))

    def _add(self, w: MaxStepWitness) -> None:
        self.rows.setdefault((w.parent, w.child), []).append(w)
        self.by_parent.setdefault(w.parent, []).append(w)

    @classmethod
    def from_text(cls, text: str, source: str = "<memory>") -> "MaxSubDB":
        rows, complete, floors, refinable = [], [], [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split("|")]
            try:
                if fields[0] == "@complete":
                    _, g, cond, kids, cit = fields
                    kids_d = tuple(parse(k) for k in kids.split(";") if k.strip())
                    complete.append(_CompleteRecord(_simple_of(g, lineno), CharPredicate(cond), kids_d, cit))
                elif fields[0] == "@nosmall":
                    _, g, cond, cit = fields
                    floors.append(_FloorRecord(_simple_of(g, lineno), CharPredicate(cond), cit))
                elif fields[0] == "@refinable":
                    _, par, ch, cond, cit = fields
                    refinable.append(_RefinableRecord(parse(par), parse(ch), CharPredicate(cond), cit))
                else:
                    par, ch, cond, kind, cit = fields
                    rows.append(MaxStepWitness(parse(par), parse(ch), CharPredicate(cond), kind, cit))
            except ValueError as exc:
                if isinstance(exc, DatabaseFormatError):
                    raise
                raise DatabaseFormatError(f"{source}:{lineno}: {exc}") from exc
        return cls(rows, complete, floors, refinable, source)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "MaxSubDB":
        if path is None:
            path = os.environ.get(ENV_VAR)
        if path:
            p = Path(path)
            return cls.from_text(p.read_text(encoding="utf-8"), str(p))
        text = resources.files("algchains").joinpath("data/maxsub.dat").read_text(encoding="utf-8")
        return cls.from_text(text, "maxsub.dat")

    # -- simple-parent facts ------------------------------------------------

    def complete_record(self, g: SimpleType, c: int) -> _CompleteRecord | None:
        for rec in self.complete:
            if rec.group == g and rec.cond(c):
                return rec
        return None

    def has_no_small(self, g: SimpleType, c: int) -> bool:
        return any(f.group == g and f.cond(c) for f in self.floors) or _no_small_rule(g, c)

    def is_curated(self, g: SimpleType, c: int) -> bool:
        parent = GroupDescriptor.of(g)
        return (
            self.complete_record(g, c) is not None
            or any(f.group == g and f.cond(c) for f in self.floors)
            or any(w.char_condition(c) for w in self.by_parent.get(parent, ()))
        )

    def simple_step(self, s: SimpleType, child: GroupDescriptor, c: int) -> MaxStepWitness | None:
        parent = GroupDescriptor.of(s)
        for w in self.rows.get((parent, child), ()):
            if w.char_condition(c):
                return w
        for rule in _SIMPLE_RULES:
            w = rule.match(s, child, c)
            if w is not None:
                return w
        return None

    def simple_children(self, s: SimpleType, c: int) -> list[GroupDescriptor]:
        return _simple_children(self, s, c)


@functools.lru_cache(maxsize=None)
def default_db() -> MaxSubDB:
    return MaxSubDB.load()


def _db(db: MaxSubDB | None) -> MaxSubDB:
    return db if db is not None else default_db()


# ---------------------------------------------------------------------------
# parametric rules on a simple parent


def parabolic(t: SimpleType, node: int) -> GroupDescriptor:
    levi = levi_types(t, node)
    q = num_positive_roots(t) - sum(num_positive_roots(x) for x in levi)
    return GroupDescriptor(q, 1, tuple(levi))


def parabolics(t: SimpleType) -> list[GroupDescriptor]:
    seen: dict[GroupDescriptor, None] = {}
    for node in range(1, t.rank + 1):
        seen.setdefault(parabolic(t, node))
    return list(seen)


def _desc(*parts: tuple[str, int]) -> GroupDescriptor:
    out: list[SimpleType] = []
    for fam, r in parts:
        out.extend(canonicalize(fam, r))
    return GroupDescriptor(0, 0, tuple(out))


def _acts_as(s: SimpleType, fam: str) -> int | None:
    """Rank of ``s`` read as a member of family ``fam`` (B2 = C2, A1 = B1 = C1, A3 = D3)."""
    if s.family == fam:
        return s.rank
    if s == SimpleType("B", 2) and fam == "C":
        return 2
    if s == SimpleType("A", 1) and fam in "BC":
        return 1
    if s == SimpleType("A", 3) and fam == "D":
        return 3
    return None


class _Rule:
    kind = TABLE
    citation = ""
    cond = ALL

    def candidates(self, s: SimpleType, c: int) -> Iterable[GroupDescriptor]:
        return ()

    def match(self, s: SimpleType, child: GroupDescriptor, c: int) -> MaxStepWitness | None:
        if child.dim >= GroupDescriptor.of(s).dim:
            return None
        for cand in self.candidates(s, c):
            if cand == child:
                return MaxStepWitness(GroupDescriptor.of(s), child, self.cond, self.kind, self.citation)
        return None


class _ParabolicRule(_Rule):
    kind = PARABOLIC
    citation = "maximal parabolic subgroup (delete one Dynkin node)"

    def match(self, s, child, c):
        if child.z != 1 or child.u == 0:
            return None
        return super().match(s, child, c)

    def candidates(self, s, c):
        return parabolics(s)


class _SymplecticSplit(_Rule):
    kind = SUBSPACE
    citation = "stabiliser of a nondegenerate subspace: C_r > C_a C_(r-a)"

    def candidates(self, s, c):
        r = _acts_as(s, "C")
        if r is None or r < 2:
            return
        for a in range(1, r // 2 + 1):
            yield _desc(("C", a), ("C", r - a))


class _OddOrthogonalSplitChar2(_Rule):
    kind = SUBSPACE
    citation = "p=2: B_r > B_a B_(r-a), image of C_r > C_a C_(r-a) under the special isogeny"
    cond = CharPredicate("p=2")

    def candidates(self, s, c):
        r = _acts_as(s, "B")
        if c != 2 or r is None or r < 2:
            return
        for a in range(1, r // 2 + 1):
            yield _desc(("B", a), ("B", r - a))


class _BtoD(_Rule):
    kind = SUBSPACE
    citation = "D_r is a maximal connected subgroup of B_r"

    def candidates(self, s, c):
        r = _acts_as(s, "B")
        if r is not None and r >= 2:
            yield _desc(("D", r))


class _DtoB(_Rule):
    kind = SUBSPACE
    citation = "D_r > B_(r-1): stabiliser of a nonsingular 1-space"

    def candidates(self, s, c):
        r = _acts_as(s, "D")
        if r is not None and r >= 3:
            yield _desc(("B", r - 1))


class _OrthogonalSplit(_Rule):
    kind = SUBSPACE
    citation = "D_r > D_a D_(r-a): stabiliser of a nondegenerate 2a-space, a >= 2"

    def candidates(self, s, c):
        r = _acts_as(s, "D")
        if r is None or r < 4:
            return
        for a in range(2, r // 2 + 1):
            yield _desc(("D", a), ("D", r - a))


class _SymplecticInSL(_Rule):
    kind = TABLE
    citation = "A_r > C_((r+1)/2) for r odd"

    def candidates(self, s, c):
        if s.family == "A" and s.rank >= 3 and s.rank % 2 == 1:
            yield _desc(("C", (s.rank + 1) // 2))


class _OrthogonalInSL(_Rule):
    kind = TABLE
    citation = "A_r > B_(r/2) for r even, p != 2"
    cond = CharPredicate("p!=2")

    def candidates(self, s, c):
        if c != 2 and s.family == "A" and s.rank % 2 == 0:
            yield _desc(("B", s.rank // 2))


class _CharZeroA1(_Rule):
    kind = TABLE
    citation = "char 0: maximal A1 (C_r; B_r with r != 3; exceptional types other than E6)"
    cond = CharPredicate("p=0")

    def candidates(self, s, c):
        if c != 0:
            return
        if s.family == "C" or (s.family == "B" and s.rank != 3) or s.family in "FG" or (
            s.family == "E" and s.rank != 6
        ):
            yield _desc(("A", 1))


class _SteinbergTower(_Rule):
    kind = TABLE
    citation = "B_m embedded in B_((p^(m^2)-1)/2) via its Steinberg module, p >= 5"
    cond = CharPredicate("p>=5")

    def candidates(self, s, c):
        r = _acts_as(s, "B")
        if c < 5 or r is None:
            return
        m = 1
        while True:
            big = (c ** (m * m) - 1) // 2
            if big > r:
                return
            # The 7-dimensional A1 in B3 lies in G2, so it is not maximal.
            if big == r and not (c == 7 and m == 1):
                yield _desc(("B", m))
            m += 1


_SIMPLE_RULES: tuple[_Rule, ...] = (
    _ParabolicRule(),
    _SymplecticSplit(),
    _OddOrthogonalSplitChar2(),
    _BtoD(),
    _DtoB(),
    _OrthogonalSplit(),
    _SymplecticInSL(),
    _OrthogonalInSL(),
    _CharZeroA1(),
    _SteinbergTower(),
)


def _no_small_rule(g: SimpleType, c: int) -> bool:
    """Char 0: A_r (r >= 3), B3, D_r and E6 have no maximal A1."""
    if c != 0:
        return False
    return (g.family == "A" and g.rank >= 3) or g.family == "D" or g in (
        SimpleType("B", 3),
        SimpleType("E", 6),
    )


def _simple_children(db: MaxSubDB, s: SimpleType, c: int) -> list[GroupDescriptor]:
    out: dict[GroupDescriptor, None] = {}
    for w in db.by_parent.get(GroupDescriptor.of(s), ()):
        if w.char_condition(c):
            out.setdefault(w.child)
    for rule in _SIMPLE_RULES:
        for cand in rule.candidates(s, c):
            out.setdefault(cand)
    return list(out)


# ---------------------------------------------------------------------------
# general descriptors


def _levi_shape(d: GroupDescriptor) -> bool:
    """d looks like U_r A_(r-1) T_1 (the end-node parabolic of A_r), possibly times other factors."""
    return d.z >= 1 and d.u >= 2 and SimpleType("A", d.u - 1) in d.factors


def is_maximal_step(
    parent: GroupDescriptor, child: GroupDescriptor, c: int, db: MaxSubDB | None = None
) -> MaxStepWitness | None:
    db = _db(db)
    if child.dim >= parent.dim:
        return None
    if parent.is_soluble:
        if child.is_soluble and child.dim == parent.dim - 1:
            return MaxStepWitness(parent, child, ALL, BOREL, "soluble group: maximal connected subgroups have codimension 1")
        return None
    if child.factors == parent.factors:
        if child.u == parent.u and child.z == parent.z - 1:
            return MaxStepWitness(parent, child, ALL, LEVI_DROP, "normal subgroup of codimension 1 with torus quotient")
        if child.z == parent.z and child.u == parent.u - 1 and parent.u <= parent.z:
            return MaxStepWitness(parent, child, ALL, BOREL, "codimension-1 step inside a soluble direct factor U_aT_b")
        if child.u == 0 and child.z == parent.z and _levi_shape(parent):
            return MaxStepWitness(parent, child, ALL, LEVI_DROP, "U_r A_(r-1) T_1 > A_(r-1) T_1: the Levi factor of an end-node parabolic of A_r")
        return None
    counts = parent.isotypic()
    for s, k in counts.items():
        if k >= 2 and child == parent.without(s):
            return MaxStepWitness(parent, child, ALL, TENSOR_DIAG, f"diagonal {s} in {s}^2")
    for s in counts:
        rest = parent.without(s)
        piece = child.minus(rest)
        if piece is None:
            continue
        w = db.simple_step(s, piece, c)
        if w is not None:
            if parent == GroupDescriptor.of(s):
                return w
            return MaxStepWitness(parent, child, w.char_condition, w.kind, f"in factor {s}: {w.citation}")
    return None


def refutation(
    parent: GroupDescriptor, child: GroupDescriptor, c: int, db: MaxSubDB | None = None
) -> str | None:
    """A reason why ``child`` cannot be maximal connected in ``parent``, if the facts prove one."""
    db = _db(db)
    if child.dim >= parent.dim:
        return None
    if parent.is_soluble:
        if not child.is_soluble:
            return "subgroups of a soluble group are soluble"
        if child.dim != parent.dim - 1:
            return "soluble group: every maximal connected subgroup has codimension 1"
    for rec in db.refinable:
        if rec.parent == parent and rec.child == child and rec.cond(c):
            return rec.citation
    s = parent.simple_type
    if s is not None:
        if child.dim <= 3 and (db.has_no_small(s, c) or s.rank >= 2 and child.is_soluble):
            if s.rank >= 2 and child.is_soluble:
                return f"{s} has no maximal connected soluble subgroup of dimension <= 3"
            return f"{s} has no maximal connected subgroup of dimension <= 3 in this characteristic"
        rec = db.complete_record(s, c)
        if rec is not None and child not in rec.reductive and child not in parabolics(s):
            return f"not in the complete list for {s} ({rec.citation})"
    return None


def maximal_connected(g: SimpleType, c: int, db: MaxSubDB | None = None):
    """Stored maximal connected subgroups of ``g`` and whether the list is complete."""
    db = _db(db)
    rec = db.complete_record(g, c)
    if rec is not None:
        kids = parabolics(g) + [k for k in rec.reductive if k not in parabolics(g)]
        return kids, CompletenessTag(g, rec.cond, COMPLETE)
    if not db.is_curated(g, c):
        raise NotCuratedError(f"no curated maximal-subgroup facts for {g} at characteristic {c}")
    return _simple_children(db, g, c), CompletenessTag(g, CharPredicate(f"p={c}"), WITNESSES_ONLY)


def children(desc: GroupDescriptor, c: int, db: MaxSubDB | None = None) -> Iterator[GroupDescriptor]:
    """Every child the rules can certify (used by the oracle's search)."""
    db = _db(db)
    if desc.is_soluble:
        if desc.u:
            yield GroupDescriptor(desc.u - 1, desc.z)
        if desc.z:
            yield GroupDescriptor(desc.u, desc.z - 1)
        return
    if desc.z:
        yield GroupDescriptor(desc.u, desc.z - 1, desc.factors)
    if desc.u and desc.u <= desc.z:
        yield GroupDescriptor(desc.u - 1, desc.z, desc.factors)
    if _levi_shape(desc):
        yield GroupDescriptor(0, desc.z, desc.factors)
    counts = desc.isotypic()
    for s, k in counts.items():
        rest = desc.without(s)
        if k >= 2:
            yield rest
        for m in _simple_children(db, s, c):
            yield rest + m


# ---------------------------------------------------------------------------
# the oracle


class _Oracle:
    def __init__(self, db: MaxSubDB, c: int):
        self.db = db
        self.c = c
        self.lower = functools.lru_cache(maxsize=None)(self._lower)
        self.failed: dict[GroupDescriptor, int] = {}

    def _lower(self, d: GroupDescriptor) -> int:
        if d.is_soluble:
            return d.dim
        s = d.simple_type
        if s is not None:
            if s == SimpleType("A", 1):
                best = 3
            else:
                best = 5 if self.db.has_no_small(s, self.c) else 4
            rec = self.db.complete_record(s, self.c)
            if rec is not None:
                kids = parabolics(s) + list(rec.reductive)
                best = max(best, 1 + min(self.lower(k) for k in kids))
            return best
        # Quotient peeling: each proper normal quotient step costs at least one.
        pieces = [self.lower(GroupDescriptor.of(t)) for t in d.factors]
        if d.z:
            pieces.append(d.z)
        return (1 if d.u else 0) + len(pieces) - 1 + max(pieces)

    def reach(self, d: GroupDescriptor, budget: int) -> list[GroupDescriptor] | None:
        """A witnessed chain from ``d`` to 1 with at most ``budget`` steps."""
        if d.is_trivial:
            return [d]
        if budget <= 0 or self.lower(d) > budget:
            return None
        if self.failed.get(d, -1) >= budget:
            return None
        if d.is_soluble:
            nxt = next(children(d, self.c, self.db))
            tail = self.reach(nxt, budget - 1)
            return [d] + tail if tail else None
        kids = sorted(set(children(d, self.c, self.db)), key=lambda k: (self.lower(k), -k.dim, str(k)))
        for k in kids:
            if 1 + self.lower(k) > budget:
                break
            tail = self.reach(k, budget - 1)
            if tail is not None:
                return [d] + tail
        self.failed[d] = max(self.failed.get(d, -1), budget)
        return None


def depth_bruteforce(g: SimpleType, c: int, db: MaxSubDB | None = None, *, max_extra: int = 0) -> int:
    """Shortest unrefinable chain of ``g`` derivable from the curated facts alone.

    The lower side comes from complete enumerations, the no-small-subgroup
    facts and quotient peeling; the upper side is an actual witnessed chain.
    Raises IncompleteDatabaseError when the two do not meet.
    """
    db = _db(db)
    oracle = _Oracle(db, c)
    root = GroupDescriptor.of(g)
    lo = oracle.lower(root)
    for budget in range(lo, lo + max_extra + 1):
        chain = oracle.reach(root, budget)
        if chain is not None:
            if len(chain) - 1 == lo:
                return lo
            raise IncompleteDatabaseError(
                f"{g} at characteristic {c}: depth in [{lo}, {len(chain) - 1}]", lo, len(chain) - 1
            )
    raise IncompleteDatabaseError(
        f"{g} at characteristic {c}: lower bound {lo} not attained by a witnessed chain", lo, None
    )


def oracle_chain(g: SimpleType, c: int, budget: int, db: MaxSubDB | None = None) -> list[GroupDescriptor] | None:
    """A witnessed chain of length at most ``budget``, found by the oracle search."""
    return _Oracle(_db(db), c).reach(GroupDescriptor.of(g), budget)
