"""Shared graph vocabulary: weighted edges, deterministic ordering, batches, file formats.

Weights are 64-bit signed integers in the on-disk encoding; in memory any totally
ordered weight works. Edge identity is the unordered endpoint pair, and the
effective comparison key is (w, min(u, v), max(u, v)), so distinct edges never
compare equal even when weights tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class DynMsfError(Exception):
    """Base class for structured errors raised by this package."""


class SelfLoop(DynMsfError):
    pass


class DuplicateInBatch(DynMsfError):
    pass


class EdgeAlreadyPresent(DynMsfError):
    pass


class EdgeAbsent(DynMsfError):
    pass


@dataclass(frozen=True, slots=True)
class WeightedEdge:
    """Undirected weighted edge, canonically oriented u < v."""

    u: int
    v: int
    w: int

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoop(f"self-loop on vertex {self.u}")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    @property
    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def key(self) -> tuple[int, int, int]:
        """Total-order key: weight first, lexicographic endpoints as tie-break."""
        return (self.w, self.u, self.v)

    def __repr__(self):
        return f"({{{self.u},{self.v}}},{self.w})"


def edge_id(u: int, v: int) -> tuple[int, int]:
    """Canonical unordered endpoint pair."""
    return (u, v) if u < v else (v, u)


def compare(a: WeightedEdge, b: WeightedEdge) -> int:
    """Strict total order over edges: -1, 0, +1. Zero only on identical identity."""
    ka, kb = a.key, b.key
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def check_vertex(x: int, n: int) -> int:
    if not (0 <= x < n):
        raise DynMsfError(f"vertex {x} outside [0, {n})")
    return x


def validate_insert_batch(edges: Sequence[WeightedEdge], present: Iterable[tuple[int, int]],
                          n: int | None = None) -> None:
    """Check an insert batch against the current edge-id set.

    Raises SelfLoop / DuplicateInBatch / EdgeAlreadyPresent naming the offending edge.
    (Self-loops are already rejected by the WeightedEdge constructor; re-checked here
    for edges built by other means.)
    """
    present = set(present)
    seen = set()
    for e in edges:
        if e.u == e.v:
            raise SelfLoop(f"self-loop {e}")
        if n is not None:
            check_vertex(e.u, n)
            check_vertex(e.v, n)
        eid = e.ends
        if eid in seen:
            raise DuplicateInBatch(f"edge {{{e.u},{e.v}}} appears twice in batch")
        if eid in present:
            raise EdgeAlreadyPresent(f"edge {{{e.u},{e.v}}} already present")
        seen.add(eid)


def validate_delete_batch(pairs: Sequence[tuple[int, int]], present: Iterable[tuple[int, int]],
                          n: int | None = None) -> None:
    """Check a delete batch (unordered pairs) against the current edge-id set."""
    present = set(present)
    seen = set()
    for u, v in pairs:
        if u == v:
            raise SelfLoop(f"self-loop {{{u},{v}}}")
        if n is not None:
            check_vertex(u, n)
            check_vertex(v, n)
        eid = edge_id(u, v)
        if eid in seen:
            raise DuplicateInBatch(f"edge {{{u},{v}}} appears twice in batch")
        if eid not in present:
            raise EdgeAbsent(f"edge {{{u},{v}}} not present")
        seen.add(eid)


# ---------------------------------------------------------------------------
# File formats.
#
# Graph file (text, line oriented): header "n m", then m lines "u v w".
# Trace file: one command per line:
#   I u v w            insert
#   D u v              delete
#   Q s t theta        pairwise cluster query
#   G k v1 ... vk theta  group-by-cluster query
#   C theta            cluster count
#   B                  batch boundary (commands between boundaries form one
#                      batch of uniform kind)
# ---------------------------------------------------------------------------


def write_graph_file(path, n: int, edges: Sequence[WeightedEdge]) -> None:
    with open(path, "w") as f:
        f.write(f"{n} {len(edges)}\n")
        for e in edges:
            f.write(f"{e.u} {e.v} {e.w}\n")


def read_graph_file(path) -> tuple[int, list[WeightedEdge]]:
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 2:
            raise DynMsfError(f"bad graph header in {path!r}")
        n, m = int(header[0]), int(header[1])
        edges = []
        for _ in range(m):
            u, v, w = f.readline().split()
            edges.append(WeightedEdge(int(u), int(v), int(w)))
    return n, edges


@dataclass(frozen=True, slots=True)
class TraceCommand:
    op: str                  # one of I D Q G C B
    args: tuple = ()

    def format(self) -> str:
        if self.op == "B":
            return "B"
        if self.op == "G":
            k, vs, theta = self.args
            return "G " + str(k) + " " + " ".join(map(str, vs)) + " " + str(theta)
        return self.op + " " + " ".join(map(str, self.args))


def parse_trace_line(line: str) -> TraceCommand | None:
    parts = line.split()
    if not parts or parts[0].startswith("#"):
        return None
    op = parts[0]
    if op == "B":
        return TraceCommand("B")
    if op == "I":
        u, v, w = map(int, parts[1:4])
        return TraceCommand("I", (u, v, w))
    if op == "D":
        u, v = map(int, parts[1:3])
        return TraceCommand("D", (u, v))
    if op == "Q":
        return TraceCommand("Q", (int(parts[1]), int(parts[2]), int(parts[3])))
    if op == "C":
        return TraceCommand("C", (int(parts[1]),))
    if op == "G":
        k = int(parts[1])
        vs = tuple(int(x) for x in parts[2:2 + k])
        theta = int(parts[2 + k])
        return TraceCommand("G", (k, vs, theta))
    raise DynMsfError(f"unknown trace command {op!r}")


def read_trace(path) -> list[TraceCommand]:
    cmds = []
    with open(path) as f:
        for line in f:
            cmd = parse_trace_line(line)
            if cmd is not None:
                cmds.append(cmd)
    return cmds


def iter_batches(cmds: Iterable[TraceCommand]) -> Iterator[list[TraceCommand]]:
    """Split a trace at B boundaries; each yielded group must be of uniform kind."""
    group: list[TraceCommand] = []
    for cmd in cmds:
        if cmd.op == "B":
            if group:
                yield group
                group = []
        else:
            group.append(cmd)
    if group:
        yield group
