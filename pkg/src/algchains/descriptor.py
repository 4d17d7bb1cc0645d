"""Connected groups abstracted to (unipotent radical dim, central torus dim, simple factors).

Text grammar, e.g. ``"U6 A2 A1 T1"`` or ``"A1^3 * T2"``::

    expr   := "1" | term (sep? term)*
    term   := "U" INT | "T" INT | simple ("^" INT)?
    simple := ("A"|"B"|"C"|"D") INT | "E6" | "E7" | "E8" | "F4" | "G2"
    sep    := whitespace | "*"

Two non-isomorphic groups can share a descriptor: extension data (which
module the unipotent radical is, split or not) is deliberately forgotten.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .rootdata import (
    MAX_RANK,
    SimpleType,
    UnknownTypeError,
    canonicalize,
    dim_simple,
)

__all__ = [
    "GroupDescriptor",
    "DescriptorSyntaxError",
    "UnknownTypeError",
    "parse",
    "render",
    "trivial",
    "check_characteristic",
    "is_prime",
]


class DescriptorSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


def _sorted_factors(factors: Iterable[SimpleType]) -> tuple[SimpleType, ...]:
    return tuple(sorted(factors, key=lambda t: t.sort_key, reverse=True))


@dataclass(frozen=True)
class GroupDescriptor:
    u: int = 0
    z: int = 0
    factors: tuple[SimpleType, ...] = field(default=())

    def __post_init__(self):
        if self.u < 0 or self.z < 0:
            raise ValueError("descriptor dimensions must be non-negative")
        object.__setattr__(self, "factors", _sorted_factors(self.factors))

    @classmethod
    def of(cls, *types: SimpleType, u: int = 0, z: int = 0) -> "GroupDescriptor":
        return cls(u, z, tuple(types))

    def __add__(self, other: "GroupDescriptor") -> "GroupDescriptor":
        return GroupDescriptor(self.u + other.u, self.z + other.z, self.factors + other.factors)

    def __str__(self) -> str:
        return render(self)

    @property
    def dim(self) -> int:
        return self.u + self.z + sum(dim_simple(t) for t in self.factors)

    @property
    def radical_dim(self) -> int:
        return self.u + self.z

    @property
    def semisimple_part(self) -> tuple[SimpleType, ...]:
        return self.factors

    @property
    def is_soluble(self) -> bool:
        return not self.factors

    @property
    def is_trivial(self) -> bool:
        return self.u == 0 and self.z == 0 and not self.factors

    @property
    def is_reductive(self) -> bool:
        return self.u == 0

    @property
    def simple_type(self) -> SimpleType | None:
        """The type if this descriptor is a single simple group, else None."""
        if self.u == 0 and self.z == 0 and len(self.factors) == 1:
            return self.factors[0]
        return None

    def isotypic(self) -> Counter:
        return Counter(self.factors)

    def without(self, t: SimpleType) -> "GroupDescriptor":
        fs = list(self.factors)
        fs.remove(t)
        return GroupDescriptor(self.u, self.z, tuple(fs))

    def minus(self, other: "GroupDescriptor") -> "GroupDescriptor | None":
        """``self - other`` if ``other`` is a sub-descriptor, else None."""
        du, dz = self.u - other.u, self.z - other.z
        if du < 0 or dz < 0:
            return None
        left = Counter(self.factors)
        left.subtract(other.factors)
        if any(v < 0 for v in left.values()):
            return None
        return GroupDescriptor(du, dz, tuple(left.elements()))


def trivial() -> GroupDescriptor:
    return GroupDescriptor()


def render(g: GroupDescriptor) -> str:
    if g.is_trivial:
        return "1"
    parts = []
    if g.u:
        parts.append(f"U{g.u}")
    i = 0
    fs = g.factors
    while i < len(fs):
        j = i
        while j < len(fs) and fs[j] == fs[i]:
            j += 1
        k = j - i
        parts.append(f"{fs[i]}^{k}" if k > 1 else str(fs[i]))
        i = j
    if g.z:
        parts.append(f"T{g.z}")
    return " ".join(parts)


_SIMPLE_LETTERS = "ABCDEFG"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise DescriptorSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip_sep(self) -> None:
        while self.pos < len(self.text) and (self.text[self.pos].isspace() or self.text[self.pos] == "*"):
            self.pos += 1

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> GroupDescriptor:
        self.skip_sep()
        if self.pos == len(self.text):
            self.error("trivial group must be written as `1`")
        if self.text[self.pos:].strip() == "1":
            return trivial()
        u = z = 0
        factors: list[SimpleType] = []
        while True:
            self.skip_sep()
            if self.pos == len(self.text):
                break
            start = self.pos
            ch = self.text[self.pos].upper()
            self.pos += 1
            if ch in "UT":
                n = self.integer()
                if ch == "U":
                    u += n
                else:
                    z += n
            elif ch in _SIMPLE_LETTERS:
                rank = self.integer()
                if rank > MAX_RANK:
                    self.error(f"rank {rank} exceeds the cap 2^20", start)
                try:
                    types = canonicalize(ch, rank)
                except UnknownTypeError:
                    raise UnknownTypeError(
                        f"unknown simple type {ch}{rank} at position {start}"
                    ) from None
                reps = 1
                if self.pos < len(self.text) and self.text[self.pos] == "^":
                    self.pos += 1
                    reps = self.integer()
                    if reps < 1:
                        self.error("power must be at least 1", start)
                factors.extend(types * reps)
            else:
                self.error(f"unexpected character {self.text[start]!r}", start)
        if u == 0 and z == 0 and not factors:
            self.error("trivial group must be written as `1`", 0)
        return GroupDescriptor(u, z, tuple(factors))


def parse(text: str) -> GroupDescriptor:
    return _Parser(text).parse()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_characteristic(c: int) -> int:
    """Validate a characteristic: 0 or a prime."""
    if not isinstance(c, int) or (c != 0 and not is_prime(c)):
        raise ValueError(f"characteristic must be 0 or a prime, got {c!r}")
    return c
