"""Exact sequential graph clustering engine for all four linkage functions.

Similarities are exact (ints or Fractions); average linkage divides cut sums by
cluster sizes, so results are rationals with no drift. Cluster similarity:

  single            max edge weight across the cut
  complete          min edge weight across the cut
  average           sum of cut weights / (|X| * |Y|)
  weighted_average  (W(X,U) + W(Y,U)) / 2 when both edges exist, else the
                    existing value (path dependent: maintained by recurrence,
                    never recomputed from raw cut weights)

The exact policy always merges a globally maximum-similarity pair, breaking
ties by the lexicographically smallest (min cluster id, max cluster id) pair
where a cluster's id is its smallest member vertex. The adversarial policy
models lambda-approximate clustering: any pair with similarity at least
W_max/lambda may merge; it draws a seeded choice among the eligible cluster
bests (lambda = 1 degenerates to the exact policy).

Merging runs to full agglomeration per component so the dendrogram is complete;
the partition "clusters at theta" is captured the first time the maximum
similarity falls strictly below theta (W_max never increases, for any linkage
and any merge order, so the crossing is well defined).

Internals: every cluster keeps a lazy heap of (ratio, neighbor) where the ratio
is chosen so it does not depend on the cluster's own size (for average linkage,
cut sum / neighbor size). A global lazy heap holds one current-best entry per
cluster; stored values never underestimate (pair similarities never increase in
place), so correcting stale entries on pop keeps the true maximum on top. This
keeps giant equal-weight star collapses near O(E log E) instead of quadratic.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import DynMsfError

LINKAGES = ("single", "complete", "average", "weighted_average")


class LeafMismatch(DynMsfError):
    pass


class Dendrogram:
    """Binary merge forest: leaves 0..n-1, internal nodes appended per merge."""

    def __init__(self, n: int):
        self.n = n
        self.parent: list[int | None] = [None] * n
        self.children: list[tuple[int, int] | None] = [None] * n
        self.sim: list = [None] * n

    def add_merge(self, left: int, right: int, sim) -> int:
        idx = len(self.parent)
        self.parent.append(None)
        self.children.append((left, right))
        self.sim.append(sim)
        self.parent[left] = idx
        self.parent[right] = idx
        return idx

    def __len__(self):
        return len(self.parent)

    def roots(self):
        return [i for i, p in enumerate(self.parent) if p is None]

    def contents(self) -> list[frozenset]:
        """Leaf set per node (children precede parents by construction)."""
        out: list[frozenset] = []
        for i in range(len(self.parent)):
            if i < self.n:
                out.append(frozenset((i,)))
            else:
                l, r = self.children[i]
                out.append(out[l] | out[r])
        return out

    def format(self) -> str:
        """Parenthesized terms with merge similarities, one root per line."""
        def term(i):
            if i < self.n:
                return str(i)
            l, r = self.children[i]
            return f"({term(l)},{term(r)})@{self.sim[i]}"

        contents = self.contents()
        roots = sorted(self.roots(), key=lambda i: min(contents[i]))
        return "\n".join(term(r) for r in roots)


def dendrogram_diff(d1: Dendrogram, d2: Dendrogram) -> int:
    """Number of nodes whose parent or child set differs, matching by leaf content."""
    if d1.n != d2.n:
        raise LeafMismatch(f"leaf sets differ: {d1.n} vs {d2.n}")

    def shape(d: Dendrogram):
        contents = d.contents()
        info = {}
        for i, c in enumerate(contents):
            parent = d.parent[i]
            kids = d.children[i]
            info[c] = (
                None if parent is None else contents[parent],
                frozenset() if kids is None else
                frozenset((contents[kids[0]], contents[kids[1]])),
            )
        return info

    s1, s2 = shape(d1), shape(d2)
    changed = 0
    for c in set(s1) | set(s2):
        if s1.get(c) != s2.get(c):
            changed += 1
    return changed


@dataclass
class HacResult:
    dendrogram: Dendrogram
    clusters: list[list[int]]          # partition at theta, sorted groups
    merges: list = field(default_factory=list)   # (similarity, cid_a, cid_b)

    def partition_map(self) -> dict[int, int]:
        out = {}
        for grp in self.clusters:
            for v in grp:
                out[v] = grp[0]
        return out


class _Cluster:
    __slots__ = ("cid", "size", "members", "neighbors", "nbheap", "node")

    def __init__(self, cid):
        self.cid = cid
        self.size = 1
        self.members = [cid]
        self.neighbors = {}   # other cid -> aggregate
        self.nbheap = []      # (-float(ratio), -ratio, pairkey, other cid, ratio)
        self.node = cid


def _pairkey(a, b):
    return (a, b) if a < b else (b, a)


class _Engine:
    def __init__(self, n, edges, linkage, theta):
        if linkage not in LINKAGES:
            raise DynMsfError(f"unknown linkage {linkage!r}")
        self.linkage = linkage
        self.theta = theta
        self.clusters = {v: _Cluster(v) for v in range(n)}
        self.dendro = Dendrogram(n)
        self.heap = []       # (-float(sim), -sim, pairkey, owner cid)
        self.merges = []
        self.snapshot = None
        seen = set()
        for u, v, w in edges:
            pk = _pairkey(u, v)
            if u == v or pk in seen:
                raise DynMsfError(f"bad or duplicate edge {u},{v}")
            seen.add(pk)
            self.clusters[u].neighbors[v] = w
            self.clusters[v].neighbors[u] = w
        for cl in self.clusters.values():
            for n_cid, agg in cl.neighbors.items():
                self._push_nb(cl, n_cid, agg)
        for cl in self.clusters.values():
            self._push_global(cl)

    # -- linkage arithmetic ------------------------------------------------------

    def _combine(self, a, b):
        if a is None:
            return b
        kind = self.linkage
        if kind == "single":
            return a if a >= b else b
        if kind == "complete":
            return a if a <= b else b
        if kind == "average":
            return a + b
        return (Fraction(a) + Fraction(b)) / 2

    def _ratio(self, n_cid, agg):
        # Orders a cluster's neighbors by similarity without referencing the
        # cluster's own size, so it stays valid as the cluster grows.
        if self.linkage == "average":
            return Fraction(agg, self.clusters[n_cid].size)
        return agg

    def _sim(self, cl, ratio):
        if self.linkage == "average":
            return ratio / cl.size
        return ratio

    # -- heap plumbing --------------------------------------------------------------

    def _push_nb(self, cl, n_cid, agg):
        ratio = self._ratio(n_cid, agg)
        heapq.heappush(cl.nbheap,
                       (-float(ratio), -ratio, _pairkey(cl.cid, n_cid), n_cid, ratio))

    def _best(self, cl):
        """Validated (sim, pairkey, neighbor) for cl, or None. Corrects stale tops."""
        while cl.nbheap:
            _nf, _nr, pk, n_cid, ratio = cl.nbheap[0]
            other = self.clusters.get(n_cid)
            if other is None or n_cid not in cl.neighbors:
                heapq.heappop(cl.nbheap)
                continue
            cur = self._ratio(n_cid, cl.neighbors[n_cid])
            if cur != ratio:
                heapq.heappop(cl.nbheap)
                self._push_nb(cl, n_cid, cl.neighbors[n_cid])
                continue
            return (self._sim(cl, ratio), pk, n_cid)
        return None

    def _push_global(self, cl):
        # A pendant cluster (single neighbor) hanging off a non-pendant hub
        # needs no entry of its own: its only pair is the hub's best whenever
        # it is the global max, so it always surfaces from the hub's side.
        # Without this, every leaf of a giant star keeps a drifting entry and
        # each merge re-corrects all of them (quadratic).
        best = self._best(cl)
        if best is None:
            return
        if len(cl.neighbors) == 1:
            sole = self.clusters[next(iter(cl.neighbors))]
            if len(sole.neighbors) > 1:
                return
        sim, pk, _n = best
        heapq.heappush(self.heap, (-float(sim), -sim, pk, cl.cid))

    def _pop_valid(self):
        """Next (sim, pairkey, owner, neighbor) with the true global max on top."""
        while self.heap:
            nf, nsim, pk, cid = heapq.heappop(self.heap)
            cl = self.clusters.get(cid)
            if cl is None:
                continue
            best = self._best(cl)
            if best is None:
                continue
            sim, bpk, n_cid = best
            if -nsim == sim and bpk == pk:
                return (sim, pk, cid, n_cid)
            self._push_global(cl)
        return None

    def _push_back(self, entry):
        sim, pk, cid, _n = entry
        heapq.heappush(self.heap, (-float(sim), -sim, pk, cid))

    # -- merging --------------------------------------------------------------------

    def _merge(self, a_cid, b_cid, sim):
        s, o = (a_cid, b_cid) if a_cid < b_cid else (b_cid, a_cid)
        surv = self.clusters[s]
        gone = self.clusters.pop(o)
        self.merges.append((sim, s, o))
        surv.node = self.dendro.add_merge(surv.node, gone.node, sim)
        surv.members.extend(gone.members)
        surv.size += gone.size
        surv.neighbors.pop(o, None)
        for n_cid, oagg in gone.neighbors.items():
            if n_cid == s:
                continue
            other = self.clusters[n_cid]
            other.neighbors.pop(o, None)
            newagg = self._combine(surv.neighbors.get(n_cid), oagg)
            surv.neighbors[n_cid] = newagg
            other.neighbors[s] = newagg
            self._push_nb(surv, n_cid, newagg)
            self._push_nb(other, s, newagg)
        self._push_global(surv)

    def _capture(self):
        groups = sorted(sorted(c.members) for c in self.clusters.values())
        return groups

    # -- driving --------------------------------------------------------------------

    def run(self, policy, lam, seed) -> HacResult:
        adversarial = policy == "adversarial" and lam > 1
        rng = random.Random(seed) if adversarial else None
        while True:
            top = self._pop_valid()
            if top is None:
                break
            wmax = top[0]
            if self.snapshot is None and wmax < self.theta:
                self.snapshot = self._capture()
            if not adversarial:
                choice = top
            else:
                floor = Fraction(wmax, lam) if not isinstance(wmax, Fraction) \
                    else wmax / lam
                cands = [top]
                distinct = {top[1]}
                while len(distinct) < 8:
                    e = self._pop_valid()
                    if e is None:
                        break
                    if e[0] < floor:
                        self._push_back(e)
                        break
                    cands.append(e)
                    distinct.add(e[1])
                pick = rng.choice(sorted(distinct))
                choice = next(e for e in cands if e[1] == pick)
                for e in cands:
                    if e is not choice:
                        self._push_back(e)
            sim, _pk, cid, n_cid = choice
            self._merge(cid, n_cid, sim)
        if self.snapshot is None:
            self.snapshot = self._capture()
        return HacResult(self.dendro, self.snapshot, self.merges)


def run_hac(n, edges, linkage, theta, policy="exact", lam=1, seed=0) -> HacResult:
    """Cluster an n-vertex weighted graph; see the module docstring for policies."""
    if policy not in ("exact", "adversarial"):
        raise DynMsfError(f"unknown policy {policy!r}")
    if lam < 1:
        raise DynMsfError("lambda must be >= 1")
    return _Engine(n, edges, linkage, theta).run(policy, lam, seed)
