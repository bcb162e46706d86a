"""Batch-decremental minimum spanning forest over a hierarchy of nested forests.

Levels run 1..ceil(log2 n). Every edge carries a level; a tree edge of level l
is linked into the forests for levels l..L, so F_1 (subseteq) ... (subseteq) F_L
and F_L is the maintained MSF. A non-tree edge of level l is registered (in both
directions) in the per-vertex sets of the level-l forest. New edges start at
level L; replacement searches walk levels upward and push examined edges down,
which is what amortizes the search cost.

Edges are generic records (key, u, v) with a globally unique, totally ordered
key; at the top level the key is a WeightedEdge's (w, u, v) triple, and in the
compressed local graphs of the fully dynamic algorithm the key of a compressed
edge is the key of the heaviest original edge it represents (so parallel pairs
stay distinguishable).

A deletion batch removes the edges everywhere, then runs level-ascending rounds
of doubling searches: a component of the level-i forest that lost an edge, has
size at most 2^(i-1), and still has incident level-i candidates first pushes its
level-i tree edges to level i-1, then fetches the 2^j (1 +- 1/2) lightest
incident candidates for growing j. The lightest fetched edge that leaves the
component is its replacement; the largest fetched prefix that contained no
replacement is pushed to level i-1 once the search ends (nothing is pushed from
the phase that succeeded). Each round keeps a lightest spanning subset of the
found replacements and promotes those to tree edges at their level and all
higher forests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .euler import EulerForest, ceil_log2
from .graph import DynMsfError, EdgeAbsent


class WrongMode(DynMsfError):
    pass


class UnionFind:
    """Small union-find used for static MSF computation inside the library."""

    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def static_msf(n, edges):
    """Keys of the unique tie-broken MSF of (key, u, v) records."""
    uf = UnionFind(n)
    chosen = []
    for key, u, v in sorted(edges):
        if uf.union(u, v):
            chosen.append((key, u, v))
    return chosen


@dataclass
class ReplacementReport:
    replacements: list = field(default_factory=list)   # (key, u, v) promoted to F_L
    still_split: list = field(default_factory=list)    # (u, v) pairs left disconnected


class LevelStructure:
    """Decremental MSF (or connectivity) core; single external writer."""

    def __init__(self, n, edges, mode="msf", seed=0):
        if n < 1:
            raise DynMsfError("need at least one vertex")
        if mode not in ("msf", "connectivity"):
            raise DynMsfError(f"unknown mode {mode!r}")
        self.n = n
        self.mode = mode
        self.levels = ceil_log2(n)
        self.forests = [EulerForest(n, level=i + 1, seed=seed)
                        for i in range(self.levels)]
        self.edges = {}        # key -> (key, u, v)
        self.edge_level = {}   # key -> level
        self.tree = set()      # keys of F_L tree edges
        self.tree_pair = {}    # (u, v) canonical pair -> tree edge key
        self.push_count = {}   # key -> times pushed down (diagnostics)

        edges = list(edges)
        for key, u, v in edges:
            if key in self.edges:
                raise DynMsfError(f"duplicate edge key {key!r}")
            if u == v:
                raise DynMsfError(f"self-loop {key!r}")
            self.edges[key] = (key, u, v)
            self.edge_level[key] = self.levels
        top = self.forests[-1]
        tree_records = static_msf(n, edges)
        top.link_batch([(u, v) for _, u, v in tree_records])
        for key, u, v in tree_records:
            self.tree.add(key)
            self.tree_pair[self._pair(u, v)] = key
        inserts = []
        for key, u, v in edges:
            if key not in self.tree:
                inserts.append((u, (key, u, v)))
                inserts.append((v, (key, v, u)))
        if inserts:
            top.update_nontree_batch(inserts=inserts)

    @staticmethod
    def _pair(u, v):
        return (u, v) if u < v else (v, u)

    # -- queries ---------------------------------------------------------------

    def connected(self, u, v) -> bool:
        return self.forests[-1].connected(u, v)

    def msf(self):
        """Edge records of the current MSF (keys of F_L)."""
        if self.mode != "msf":
            raise WrongMode("msf() requires msf mode")
        return {self.edges[k] for k in self.tree}

    def nontree_edges(self):
        return [self.edges[k] for k in self.edges if k not in self.tree]

    # -- deletion ----------------------------------------------------------------

    def delete_batch(self, keys) -> ReplacementReport:
        keys = list(keys)
        for k in keys:
            if k not in self.edges:
                raise EdgeAbsent(f"edge {k!r} not present")
        if len(set(keys)) != len(keys):
            raise DynMsfError("duplicate keys in delete batch")

        nontree_dels = {}   # level -> list of (vertex, element)
        cut_pairs = []      # (u, v, level) for removed tree edges
        cuts_by_level = {}  # level -> list of pairs
        for k in keys:
            _, u, v = self.edges.pop(k)
            lvl = self.edge_level.pop(k)
            if k in self.tree:
                self.tree.discard(k)
                del self.tree_pair[self._pair(u, v)]
                cut_pairs.append((u, v, lvl))
                cuts_by_level.setdefault(lvl, []).append((u, v))
            else:
                nontree_dels.setdefault(lvl, []).extend(
                    [(u, (k, u, v)), (v, (k, v, u))])
        for lvl, dels in nontree_dels.items():
            self.forests[lvl - 1].update_nontree_batch(deletes=dels)
        if cut_pairs:
            # A level-l tree edge is linked in forests l..L.
            for i in range(self.levels, 0, -1):
                batch = [p for l, ps in cuts_by_level.items() if l <= i for p in ps]
                if batch:
                    self.forests[i - 1].cut_batch(batch)
        report = self._replace(cut_pairs)
        return report

    # -- replacement search -------------------------------------------------------

    def _replace(self, cut_pairs) -> ReplacementReport:
        report = ReplacementReport()
        if not cut_pairs:
            return report
        start = min(l for _, _, l in cut_pairs)
        for i in range(start, self.levels + 1):
            fi = self.forests[i - 1]
            limit = 1 << (i - 1)
            while True:
                unresolved = [(u, v) for u, v, l in cut_pairs
                              if l <= i and not fi.connected(u, v)]
                if not unresolved:
                    break
                comps = {}  # id(rep) -> (anchor vertex, rep)
                for u, v in unresolved:
                    for x in (u, v):
                        rep = fi.find_rep(x)
                        if rep.comp_size > limit or rep.comp_count == 0:
                            continue
                        cur = comps.get(id(rep))
                        if cur is None or x < cur[0]:
                            comps[id(rep)] = (x, rep)
                if not comps:
                    break
                found = []  # candidate records (key, u, v), lightest per component
                for anchor, _rep in sorted(comps.values()):
                    cand = self._search_component(fi, i, anchor)
                    if cand is not None:
                        found.append(cand)
                if not found:
                    continue  # everything pushed; unresolved check ends the loop
                # Lightest spanning subset of the found replacements: process in
                # weight order against live connectivity (promotion relinks F_i).
                found.sort()
                for key, u, v in found:
                    if fi.find_rep(u) is fi.find_rep(v):
                        continue  # spanning filter: drop cycle-closing replacements
                    self._promote(key, i)
                    report.replacements.append((key, u, v))
        final = self.forests[-1]
        seen_pairs = set()
        for u, v, _ in cut_pairs:
            if not final.connected(u, v):
                pair = tuple(sorted((final.find_rep(u).sort_key(),
                                     final.find_rep(v).sort_key())))
                if pair not in seen_pairs:
                    seen_pairs.add(pair)
                    report.still_split.append((u, v))
        return report

    def _search_component(self, fi, i, anchor):
        """Doubling search out of anchor's component; returns the lightest crossing
        candidate or None. Pushes happen at the end of the search."""
        if i > 1:
            below = self.forests[i - 2]
            tree_push = [pair for pair in fi.component_tree_edges(anchor)
                         if self.edge_level[self.tree_pair[pair]] == i]
            if tree_push:
                below.link_batch(tree_push)
                for pair in tree_push:
                    key = self.tree_pair[pair]
                    self.edge_level[key] = i - 1
                    self.push_count[key] = self.push_count.get(key, 0) + 1
        my_rep = fi.find_rep(anchor)
        total = fi.component_nontree_count(anchor)
        if total == 0:
            return None
        candidate = None
        failed_prefix = []
        j = 0
        while True:
            fetch = fi.k_lightest(anchor, 1 << j)
            for elem in fetch:  # ascending, so the first crossing is the lightest
                key, a, b = elem
                if fi.find_rep(b) is not my_rep:
                    candidate = (key, a, b)
                    break
            if candidate is not None:
                break
            failed_prefix = fetch
            if len(fetch) >= total:
                break
            j += 1
        if failed_prefix:
            if i == 1:
                raise DynMsfError("non-crossing candidate in a singleton component")
            pushed = {}
            for key, a, b in failed_prefix:
                pushed[key] = (a, b)
            dels, ins = [], []
            for key, (a, b) in pushed.items():
                dels.extend([(a, (key, a, b)), (b, (key, b, a))])
                ins.extend([(a, (key, a, b)), (b, (key, b, a))])
                self.edge_level[key] = i - 1
                self.push_count[key] = self.push_count.get(key, 0) + 1
            fi.update_nontree_batch(deletes=dels)
            self.forests[i - 2].update_nontree_batch(inserts=ins)
        return candidate

    def _promote(self, key, i):
        """Turn a level-i non-tree edge into a tree edge of F_i..F_L."""
        _, u, v = self.edges[key]
        fi = self.forests[i - 1]
        fi.update_nontree_batch(deletes=[(u, (key, u, v)), (v, (key, v, u))])
        for lvl in range(i, self.levels + 1):
            self.forests[lvl - 1].link_batch([(u, v)])
        self.tree.add(key)
        self.tree_pair[self._pair(u, v)] = key

    # -- invariant audit (test support) --------------------------------------------

    def audit(self):
        """Full structural audit; returns a list of violation descriptions."""
        issues = []
        # Forest contents per level: exactly the tree edges of level <= i.
        for i in range(1, self.levels + 1):
            fi = self.forests[i - 1]
            want = set()
            for k in self.tree:
                if self.edge_level[k] <= i:
                    _, u, v = self.edges[k]
                    want.add(self._pair(u, v))
            have = {self._pair(a, b) for (a, b) in fi.edge_nodes}
            if want != have:
                issues.append(f"level {i}: linked edges {have ^ want} inconsistent")
            # Component size bound 2^i.
            seen = set()
            for v in range(self.n):
                rep = fi.find_rep(v)
                if id(rep) in seen:
                    continue
                seen.add(id(rep))
                if rep.comp_size > (1 << i):
                    issues.append(f"level {i}: component of size {rep.comp_size} > 2^{i}")
            # Non-tree registrations at exactly the edge's own level.
            want_elems = set()
            for k, (key, u, v) in self.edges.items():
                if k not in self.tree and self.edge_level[k] == i:
                    want_elems.add((u, (key, u, v)))
                    want_elems.add((v, (key, v, u)))
            have_elems = {(v, e) for v in range(self.n) for e in fi.nontree[v]}
            if want_elems != have_elems:
                issues.append(f"level {i}: non-tree sets inconsistent "
                              f"({len(have_elems ^ want_elems)} entries)")
        # Cycle invariant in testable form.
        adj = {}
        for k in self.tree:
            _, u, v = self.edges[k]
            adj.setdefault(u, []).append((v, k))
            adj.setdefault(v, []).append((u, k))
        for k, (key, u, v) in self.edges.items():
            if k in self.tree:
                continue
            path = self._tree_path(adj, u, v)
            if path is None:
                issues.append(f"non-tree edge {key!r} endpoints disconnected in F_L")
                continue
            lvl = self.edge_level[k]
            if not self.forests[lvl - 1].connected(u, v):
                issues.append(f"non-tree edge {key!r} endpoints split at its level {lvl}")
            for pk in path:
                if pk >= key:
                    issues.append(f"cycle invariant: tree edge {pk!r} not lighter than {key!r}")
                if self.edge_level[pk] > lvl:
                    issues.append(f"cycle invariant: tree edge {pk!r} above level of {key!r}")
        return issues

    @staticmethod
    def _tree_path(adj, u, v):
        if u == v:
            return []
        prev = {u: (None, None)}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                break
            for y, k in adj.get(x, ()):
                if y not in prev:
                    prev[y] = (x, k)
                    stack.append(y)
        if v not in prev:
            return None
        path = []
        x = v
        while x != u:
            x, k = prev[x]
            path.append(k)
        return path
