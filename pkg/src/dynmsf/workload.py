"""Workload generation, oracle-checked replay, and throughput measurement.

Traces carry integer weights; cluster queries take similarity thresholds over
the negated weights (similarity = -weight). Workloads are built against a live
edge-set model so every batch validates by construction, and regeneration from
the same parameters is byte-identical.

Replay drives the dynamic MSF through the trace. Oracle mode recomputes a
static MSF from scratch after every mutation batch with an independent
sort-plus-union-find pass (kept separate from the library's own static MSF
helper on purpose) and answers every query with a thresholded union-find over
the full live edge set. Audit mode additionally runs the structural invariant
audit on a sample of batches.

The harness owns the writer; `workers` is recorded in reports and swept by the
benchmark, but this implementation executes sequentially, so checksums are
identical across worker counts by construction and multi-worker speedups are
reported as measured (about 1.0x).
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field

from .fulldyn import DynamicMsf
from .graph import DynMsfError, TraceCommand, WeightedEdge, iter_batches
from .slhac import SimilarityGraph


class InfeasibleMix(DynMsfError):
    pass


class MismatchDetected(DynMsfError):
    pass


@dataclass
class Workload:
    n: int
    seed: int
    commands: list

    def trace_lines(self):
        return [cmd.format() for cmd in self.commands]

    def mutation_count(self):
        return sum(1 for c in self.commands if c.op in "ID")


@dataclass
class RunReport:
    n: int
    check: str
    workers: int
    checksums: list = field(default_factory=list)   # one per mutation batch
    timings: list = field(default_factory=list)     # seconds per mutation batch
    mismatches: list = field(default_factory=list)  # (batch index, description)
    audit_failures: list = field(default_factory=list)
    batches: int = 0
    edges_processed: int = 0
    queries: int = 0

    @property
    def passed(self):
        return not self.mismatches and not self.audit_failures

    def exit_code(self):
        if self.mismatches:
            return 2
        if self.audit_failures:
            return 3
        return 0


def msf_checksum(edges) -> str:
    lines = sorted(f"{e.u} {e.v} {e.w}" for e in edges)
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:16]


def generate(n, m_cap, ops, batch_range=(1, 64), mix=(0.55, 0.35, 0.10),
             seed=0, weight_range=(-10**6, 10**6)) -> Workload:
    """Deterministic workload of uniform-kind batches separated by boundaries.

    mix is (insert, delete, query) mass; batch sizes are uniform over
    batch_range; inserts stop at m_cap live edges and deletes need a live edge,
    so an all-delete mix on an empty graph is rejected.
    """
    w_ins, w_del, w_qry = mix
    if w_ins <= 0 and w_del > 0:
        raise InfeasibleMix("deletes can never run without inserts")
    if n < 2 or (w_ins <= 0 and w_qry <= 0):
        raise InfeasibleMix("nothing to generate")
    rng = random.Random(seed)
    lo, hi = batch_range
    live = {}
    commands = []
    emitted = 0
    while emitted < ops:
        roll = rng.random() * (w_ins + w_del + w_qry)
        size = rng.randrange(lo, hi + 1)
        if roll < w_ins:
            batch = []
            tries = 0
            while len(batch) < size and len(live) + len(batch) < m_cap and tries < 6 * size:
                tries += 1
                u, v = rng.randrange(n), rng.randrange(n)
                if u == v:
                    continue
                pair = (min(u, v), max(u, v))
                if pair in live or any(c.args[:2] == pair for c in batch):
                    continue
                w = rng.randrange(*weight_range)
                batch.append(TraceCommand("I", (pair[0], pair[1], w)))
            if not batch:
                if w_del <= 0 and w_qry <= 0:
                    break     # insert-only mix saturated the edge cap
                if not live:
                    continue
                roll = w_ins  # graph full: fall through to deletes
            else:
                for c in batch:
                    live[c.args[:2]] = c.args[2]
                commands.extend(batch)
                commands.append(TraceCommand("B"))
                emitted += len(batch)
                continue
        if roll < w_ins + w_del:
            if not live:
                continue
            pool = sorted(live)
            size = min(size, len(pool))
            picked = rng.sample(pool, size)
            for pair in picked:
                del live[pair]
                commands.append(TraceCommand("D", pair))
            commands.append(TraceCommand("B"))
            emitted += size
        else:
            theta = rng.randrange(-(10**6), 10**6)
            kind = rng.random()
            if kind < 0.4:
                s, t = rng.sample(range(n), 2)
                commands.append(TraceCommand("Q", (s, t, theta)))
            elif kind < 0.7:
                k = rng.randrange(2, min(8, n) + 1)
                vs = tuple(sorted(rng.sample(range(n), k)))
                commands.append(TraceCommand("G", (k, vs, theta)))
            else:
                commands.append(TraceCommand("C", (theta,)))
            commands.append(TraceCommand("B"))
            emitted += 1
    return Workload(n, seed, commands)


class _Oracle:
    """Independent model: sorted live edges + fresh union-find per question."""

    def __init__(self, n):
        self.n = n
        self.sorted_keys = []    # (w, u, v), kept sorted

    def insert(self, batch):
        add = sorted((w, u, v) for u, v, w in batch)
        merged = []
        i = j = 0
        old = self.sorted_keys
        while i < len(old) or j < len(add):
            if j >= len(add) or (i < len(old) and old[i] <= add[j]):
                merged.append(old[i])
                i += 1
            else:
                merged.append(add[j])
                j += 1
        self.sorted_keys = merged

    def delete(self, pairs):
        gone = set(pairs)
        self.sorted_keys = [k for k in self.sorted_keys
                            if (k[1], k[2]) not in gone]

    def _uf(self):
        return list(range(self.n))

    @staticmethod
    def _find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def msf_keys(self):
        parent = self._uf()
        out = set()
        for w, u, v in self.sorted_keys:
            ru, rv = self._find(parent, u), self._find(parent, v)
            if ru != rv:
                parent[ru] = rv
                out.add((w, u, v))
        return out

    def threshold_partition(self, theta):
        parent = self._uf()
        for w, u, v in self.sorted_keys:
            if -w >= theta:
                ru, rv = self._find(parent, u), self._find(parent, v)
                if ru != rv:
                    parent[ru] = rv
        label = {}
        for x in range(self.n):
            r = self._find(parent, x)
            label.setdefault(r, x)
            label[r] = min(label[r], x)
        return {x: label[self._find(parent, x)] for x in range(self.n)}


def run(workload: Workload, check="oracle", workers=1, audit_rate=0.1,
        seed=0) -> RunReport:
    if check not in ("none", "oracle", "oracle+audit"):
        raise DynMsfError(f"unknown check mode {check!r}")
    report = RunReport(workload.n, check, workers)
    sim = SimilarityGraph(workload.n, seed=seed)
    msf = sim.inner
    oracle = _Oracle(workload.n) if check != "none" else None
    audit_rng = random.Random(workload.seed ^ 0xA0D17)
    for index, batch in enumerate(iter_batches(workload.commands)):
        kinds = {c.op for c in batch}
        if len(kinds) > 1:
            raise DynMsfError(f"mixed batch at index {index}: {kinds}")
        kind = kinds.pop()
        report.batches += 1
        if kind == "I":
            edges = [WeightedEdge(*c.args) for c in batch]
            t0 = time.perf_counter()
            msf.batch_insert(edges)
            report.timings.append(time.perf_counter() - t0)
            if oracle:
                oracle.insert([(e.u, e.v, e.w) for e in edges])
            report.edges_processed += len(edges)
            self_check(report, msf, oracle, index)
        elif kind == "D":
            pairs = [c.args for c in batch]
            t0 = time.perf_counter()
            msf.batch_delete(pairs)
            report.timings.append(time.perf_counter() - t0)
            if oracle:
                oracle.delete(pairs)
            report.edges_processed += len(pairs)
            self_check(report, msf, oracle, index)
        else:
            for c in batch:
                report.queries += 1
                answer = _answer_query(sim, c)
                if oracle:
                    expect = _oracle_query(oracle, c)
                    if answer != expect:
                        report.mismatches.append(
                            (index, f"query {c.format()}: {answer} != {expect}"))
        if check == "oracle+audit" and kind in "ID" and audit_rng.random() < audit_rate:
            issues = msf.audit()
            if issues:
                report.audit_failures.append((index, issues))
    return report


def self_check(report, msf, oracle, index):
    report.checksums.append(msf_checksum(msf.msf_edges()))
    if oracle:
        got = {e.key for e in msf.msf_edges()}
        want = oracle.msf_keys()
        if got != want:
            report.mismatches.append(
                (index, f"msf differs by {len(got ^ want)} edges"))


def _answer_query(sim: SimilarityGraph, cmd: TraceCommand):
    if cmd.op == "Q":
        s, t, theta = cmd.args
        return "SAME" if sim.same_cluster(s, t, theta) else "DIFF"
    if cmd.op == "C":
        return sim.num_clusters(cmd.args[0])
    k, vs, theta = cmd.args
    return sim.group_by_cluster(vs, theta)


def _oracle_query(oracle: _Oracle, cmd: TraceCommand):
    if cmd.op == "Q":
        s, t, theta = cmd.args
        part = oracle.threshold_partition(theta)
        return "SAME" if part[s] == part[t] else "DIFF"
    if cmd.op == "C":
        part = oracle.threshold_partition(cmd.args[0])
        return len(set(part.values()))
    k, vs, theta = cmd.args
    part = oracle.threshold_partition(theta)
    groups = {}
    for v in vs:
        groups.setdefault(part[v], []).append(v)
    return sorted(sorted(g) for g in groups.values())


BENCH_HEADER = "workers,n,ops,batches,seconds,edges_per_sec,final_checksum"


def bench(workload: Workload, workers_list=(1,), seed=0):
    """CSV rows (stable column contract, see BENCH_HEADER) per worker count."""
    rows = []
    for workers in workers_list:
        t0 = time.perf_counter()
        report = run(workload, check="none", workers=workers, seed=seed)
        elapsed = time.perf_counter() - t0
        ops = report.edges_processed
        final = report.checksums[-1] if report.checksums else "-"
        rows.append(f"{workers},{workload.n},{ops},{report.batches},"
                    f"{elapsed:.4f},{ops / elapsed if elapsed else 0:.1f},{final}")
    return [BENCH_HEADER] + rows


def scaling_workload(n, edges_per_phase, batch_size, seed=0) -> Workload:
    """Insert phases then delete phases at a fixed batch size, for scaling runs."""
    rng = random.Random(seed)
    commands = []
    live = []
    seen = set()
    while len(live) < edges_per_phase:
        batch = []
        while len(batch) < batch_size and len(live) + len(batch) < edges_per_phase:
            u, v = rng.randrange(n), rng.randrange(n)
            pair = (min(u, v), max(u, v))
            if u == v or pair in seen:
                continue
            seen.add(pair)
            batch.append(TraceCommand("I", (pair[0], pair[1], rng.randrange(-10**6, 10**6))))
        commands.extend(batch)
        commands.append(TraceCommand("B"))
        live.extend(c.args[:2] for c in batch)
    for i in range(0, len(live), batch_size):
        for pair in live[i:i + batch_size]:
            commands.append(TraceCommand("D", pair))
        commands.append(TraceCommand("B"))
    return Workload(n, seed, commands)
