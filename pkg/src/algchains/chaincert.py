"""Chain certificates: a descending chain of descriptors with one witness per step.

Verification is three-valued.  A step is Certified when a stored fact or
rule witnesses maximality, Refuted when the stored facts prove that an
intermediate connected subgroup exists, and Uncertifiable otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .descriptor import GroupDescriptor, check_characteristic, parse
from .maxsubdb import MaxSubDB, default_db, is_maximal_step, refutation

CERTIFIED = "Certified"
UNCERTIFIABLE = "Uncertifiable"
REFUTED = "Refuted"

HEADER = "# algchains chain certificate"
FORMAT = 1
UNWITNESSED = "Unwitnessed"


class MalformedCertificateError(ValueError):
    def __init__(self, message: str, indices: list[int]):
        super().__init__(f"{message} (at {', '.join(map(str, indices))})" if indices else message)
        self.indices = indices


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class StepRecord:
    kind: str
    citation: str


@dataclass(frozen=True)
class ChainCertificate:
    char: int
    nodes: tuple[GroupDescriptor, ...]
    steps: tuple[StepRecord, ...]

    @classmethod
    def build(cls, nodes, c: int, db: MaxSubDB | None = None) -> "ChainCertificate":
        """Attach the witness the database gives for each step (or mark it unwitnessed)."""
        nodes = tuple(nodes)
        steps = []
        for a, b in zip(nodes, nodes[1:]):
            w = is_maximal_step(a, b, c, db)
            steps.append(StepRecord(w.kind, w.citation) if w else StepRecord(UNWITNESSED, ""))
        return cls(c, nodes, tuple(steps))

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    def structural_problems(self) -> list[str]:
        problems = []
        if not self.nodes:
            return ["certificate has no nodes"]
        bad = [i for i in range(1, len(self.nodes)) if self.nodes[i].dim >= self.nodes[i - 1].dim]
        if bad:
            problems.append(f"dimension does not strictly decrease at node(s) {bad}")
        if not self.nodes[-1].is_trivial:
            problems.append(f"last node {self.nodes[-1]} is not the trivial group")
        # step lines are annotations; a certificate may omit them altogether
        if self.steps and len(self.steps) != len(self.nodes) - 1:
            problems.append(f"{len(self.steps)} step records for {len(self.nodes)} nodes")
        return problems

    def serialize(self) -> str:
        lines = [HEADER, f"format {FORMAT}", f"char {self.char}"]
        lines += [f"node {n}" for n in self.nodes]
        lines += [f"step {s.kind} | {s.citation}".rstrip() for s in self.steps]
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.serialize(), encoding="utf-8")


def length_of(cert: ChainCertificate) -> int:
    return cert.length


def parse_certificate(text: str) -> ChainCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != HEADER:
        raise CertificateFormatError("missing certificate header")
    char = None
    nodes, steps = [], []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "format":
            if rest.strip() != str(FORMAT):
                raise CertificateFormatError(f"unsupported certificate format {rest.strip()!r}")
        elif key == "char":
            try:
                char = check_characteristic(int(rest))
            except ValueError as exc:
                raise CertificateFormatError(str(exc)) from exc
        elif key == "node":
            nodes.append(parse(rest))
        elif key == "step":
            kind, _, cit = rest.partition("|")
            steps.append(StepRecord(kind.strip(), cit.strip()))
        else:
            raise CertificateFormatError(f"unknown line {ln!r}")
    if char is None:
        raise CertificateFormatError("certificate has no characteristic line")
    return ChainCertificate(char, tuple(nodes), tuple(steps))


def load_certificate(path: str | Path) -> ChainCertificate:
    return parse_certificate(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class StepVerdict:
    index: int
    parent: GroupDescriptor
    child: GroupDescriptor
    status: str
    reason: str


@dataclass(frozen=True)
class VerificationReport:
    verdict: str
    steps: tuple[StepVerdict, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def failing(self) -> list[StepVerdict]:
        return [s for s in self.steps if s.status != CERTIFIED]


def _depth_gap(parent: GroupDescriptor, child: GroupDescriptor, c: int) -> str | None:
    # If child were maximal, depth(parent) <= 1 + depth(child).
    from .depth import depth

    lo = depth(parent, c).lower
    up = depth(child, c).upper
    if lo > 1 + up:
        return f"depth of {parent} is at least {lo}, but 1 + depth of {child} is at most {1 + up}"
    return None


def verify(cert: ChainCertificate, db: MaxSubDB | None = None) -> VerificationReport:
    problems = cert.structural_problems()
    if problems:
        idx = [i for i in range(1, len(cert.nodes)) if cert.nodes[i].dim >= cert.nodes[i - 1].dim]
        if cert.nodes and not cert.nodes[-1].is_trivial:
            idx.append(len(cert.nodes) - 1)
        raise MalformedCertificateError("; ".join(problems), sorted(set(idx)))
    db = db if db is not None else default_db()
    c = cert.char
    out = []
    for i, (a, b) in enumerate(zip(cert.nodes, cert.nodes[1:])):
        why = refutation(a, b, c, db) or _depth_gap(a, b, c)
        if why:
            out.append(StepVerdict(i, a, b, REFUTED, why))
            continue
        w = is_maximal_step(a, b, c, db)
        if w is not None:
            out.append(StepVerdict(i, a, b, CERTIFIED, f"{w.kind}: {w.citation}"))
        else:
            out.append(StepVerdict(i, a, b, UNCERTIFIABLE, "no stored fact covers this step"))
    statuses = {s.status for s in out}
    verdict = REFUTED if REFUTED in statuses else UNCERTIFIABLE if UNCERTIFIABLE in statuses else CERTIFIED
    return VerificationReport(verdict, tuple(out))
