"""Independent brute-force oracles used across the test suite.

These deliberately avoid the library's own utilities: the union-find here is a
separate implementation, the MSF oracle is a plain Kruskal over sorted keys, and
the single-linkage oracle is direct threshold-and-components.
"""

from __future__ import annotations


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def kruskal_msf(n, edges):
    """Set of (u, v, w) keys in the unique tie-broken MSF."""
    uf = UnionFind(n)
    out = set()
    for w, u, v in sorted((e[2], e[0], e[1]) for e in edges):
        if uf.union(u, v):
            out.add((u, v, w))
    return out


def components(n, pairs):
    """Map vertex -> component id (min member) for the given edge pairs."""
    uf = UnionFind(n)
    for u, v in pairs:
        uf.union(u, v)
    label = {}
    for x in range(n):
        r = uf.find(x)
        if r not in label:
            label[r] = x if x < r else r
        label[r] = min(label[r], x)
    return {x: label[uf.find(x)] for x in range(n)}


def single_linkage_partition(n, sim_edges, theta):
    """Single-linkage clusters at threshold theta over (u, v, similarity) edges.

    Merging runs until every inter-cluster similarity is strictly below theta,
    which for single linkage equals components of {e : sim(e) >= theta}.
    """
    pairs = [(u, v) for u, v, s in sim_edges if s >= theta]
    return components(n, pairs)


def naive_single_linkage_agglomeration(n, sim_edges, theta):
    """Direct agglomeration: repeatedly merge the most similar cluster pair."""
    clusters = {i: {i} for i in range(n)}
    sims = {}
    for u, v, s in sim_edges:
        key = (min(u, v), max(u, v))
        sims[key] = max(sims.get(key, s), s)
    while sims:
        (a, b), best = max(sims.items(), key=lambda kv: (kv[1], -kv[0][0], -kv[0][1]))
        if best < theta:
            break
        merged = clusters.pop(b)
        clusters[a] |= merged
        fresh = {}
        for (x, y), s in sims.items():
            if (x, y) == (a, b):
                continue
            x2 = a if x == b else x
            y2 = a if y == b else y
            if x2 == y2:
                continue
            key = (min(x2, y2), max(x2, y2))
            fresh[key] = max(fresh.get(key, s), s)
        sims = fresh
    out = {}
    for root, members in clusters.items():
        mn = min(members)
        for m in members:
            out[m] = mn
    return out


def rank_of(sorted_items, x):
    """Number of elements <= x in the sorted list (true rank)."""
    import bisect

    return bisect.bisect_right(sorted_items, x)


def single_linkage_merge_list(n, sim_edges):
    """Full naive agglomeration: the descending list of (sim, a, b) merges.

    For single linkage the partition at any theta is recovered by replaying
    exactly the merges with sim >= theta (merge similarities are descending).
    """
    clusters = {i: {i} for i in range(n)}
    sims = {}
    for u, v, s in sim_edges:
        key = (min(u, v), max(u, v))
        sims[key] = max(sims.get(key, s), s)
    merges = []
    while sims:
        (a, b), best = max(sims.items(), key=lambda kv: (kv[1], -kv[0][0], -kv[0][1]))
        merges.append((best, a, b))
        clusters[a] |= clusters.pop(b)
        fresh = {}
        for (x, y), s in sims.items():
            if (x, y) == (a, b):
                continue
            x2 = a if x == b else x
            y2 = a if y == b else y
            if x2 == y2:
                continue
            key = (min(x2, y2), max(x2, y2))
            fresh[key] = max(fresh.get(key, s), s)
        sims = fresh
    return merges


def partition_from_merges(n, merges, theta):
    uf = UnionFind(n)
    for s, a, b in merges:
        if s >= theta:
            uf.union(a, b)
    label = {}
    for x in range(n):
        r = uf.find(x)
        label.setdefault(r, x)
        label[r] = min(label[r], x)
    return {x: label[uf.find(x)] for x in range(n)}
