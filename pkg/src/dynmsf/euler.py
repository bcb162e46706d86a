"""Batch-dynamic forests as circular skip lists over Euler tours.

Each tree of the forest is one circular tour holding a node per vertex (its
self-loop) and one node per direction of each tree edge, so a component with v
vertices and e tree edges has tour length v + 2e. Skip-list heights are drawn
from a hash of (seed, node identity), so rebuilding a structure from the same
seed reproduces it exactly and no workload can observe the coin flips.

Per-vertex ordered sets hold incident non-tree elements (any orderable tuples;
a weight-w edge to u stored at v is the tuple (w, v, u)). Vertex nodes carry a
1/4-error quantile summary of their set; nodes at higher skip-list levels carry
a summary of their whole subsequence, combined left-to-right with

    f((Q1, t1), (Q2, t2)) = (combine(Q1, Q2, b(t)), t),  t = max(t1, t2) + 1,
    b(t) = 8*(log n + t^2 / log n)   (rounded up to an integer)

which keeps every component summary's error below 1/2 no matter how deep the
fold gets. Structural splices are applied eagerly at the bottom level; upper
links and summaries are rebuilt lazily per component, which yields the same
answers as eager path recomputation because the augmentation is a pure function
of (tree structure, non-tree sets, seed).
"""

from __future__ import annotations

import hashlib
from bisect import bisect_left, bisect_right, insort
from fractions import Fraction

from .graph import DynMsfError, EdgeAbsent, EdgeAlreadyPresent
from .quantile import QuantileSummary, combine, empty_summary, from_sorted

BASE_EPS = Fraction(1, 4)


class CycleCreated(DynMsfError):
    pass


class NotATreeEdge(DynMsfError):
    pass


def ceil_log2(n: int) -> int:
    """log n with the convention that n = 1 gives 1."""
    if n <= 2:
        return 1
    return (n - 1).bit_length()


class TourNode:
    __slots__ = ("a", "b", "height", "nxt", "prv", "vals", "base",
                 "ver_links", "ver_vals", "rep", "comp_size", "comp_count",
                 "comp_summary")

    def __init__(self, a, b, height):
        self.a = a
        self.b = b
        self.height = height
        self.nxt = [None] * height
        self.prv = [None] * height
        self.vals = [None] * height
        self.base = None          # (QuantileSummary, t) for vertex nodes
        self.ver_links = -1
        self.ver_vals = -1
        self.rep = self
        self.comp_size = 1
        self.comp_count = 0
        self.comp_summary = None

    @property
    def is_vertex(self):
        return self.a == self.b

    def sort_key(self):
        return (0 if self.a == self.b else 1, self.a, self.b)

    def __repr__(self):
        return f"v{self.a}" if self.a == self.b else f"e({self.a},{self.b})"


class EulerForest:
    """Dynamic forest with augmented tours; one writer at a time."""

    def __init__(self, n: int, level: int = 1, seed: int = 0):
        if n < 1:
            raise DynMsfError("forest needs at least one vertex")
        self.n = n
        self.level = level
        self.seed = seed
        self.logn = ceil_log2(n)
        self.height_cap = 4 * self.logn
        self.version = 0
        self.verts = [self._new_node(v, v) for v in range(n)]
        for node in self.verts:
            node.nxt[0] = node
            node.prv[0] = node
        self.edge_nodes: dict[tuple[int, int], TourNode] = {}
        self.nontree: list[list] = [[] for _ in range(n)]

    # -- node plumbing --------------------------------------------------------

    def _new_node(self, a, b):
        h = self._height(a, b)
        node = TourNode(a, b, h)
        if a == b:
            node.base = (empty_summary(BASE_EPS), 0)
        return node

    def _height(self, a, b):
        digest = hashlib.blake2b(
            f"{self.seed}:{self.level}:{a}:{b}".encode(), digest_size=8).digest()
        bits = int.from_bytes(digest, "little")
        h = 1
        while (bits & 1) and h < self.height_cap:
            h += 1
            bits >>= 1
        return h

    def _budget(self, t: int) -> int:
        logn = self.logn
        return 8 * logn + -(-8 * t * t // logn)

    def _f(self, v1, v2):
        if v1 is None:
            return v2
        if v2 is None:
            return v1
        q1, t1 = v1
        q2, t2 = v2
        t = max(t1, t2) + 1
        return (combine(q1, q2, self._budget(t)), t)

    # -- structure updates ----------------------------------------------------

    def link_batch(self, edges) -> None:
        """Splice tours together; every edge must join two distinct components."""
        for u, v in edges:
            self._check_vertex(u)
            self._check_vertex(v)
            if u == v or (u, v) in self.edge_nodes:
                raise CycleCreated(f"edge ({u},{v}) would close a cycle")
            su, sv = self.verts[u], self.verts[v]
            if self._same_tour(su, sv):
                raise CycleCreated(f"link ({u},{v}) connects an already connected pair")
            euv = self._new_node(u, v)
            evu = self._new_node(v, u)
            self.edge_nodes[(u, v)] = euv
            self.edge_nodes[(v, u)] = evu
            pu = su.prv[0]
            pv = sv.prv[0]
            # New circular order: su ... pu, e_uv, sv ... pv, e_vu, (back to su)
            self._stitch(pu, euv)
            self._stitch(euv, sv)
            self._stitch(pv, evu)
            self._stitch(evu, su)
        self.version += 1

    def cut_batch(self, edges) -> None:
        """Remove tree edges, splitting their tours."""
        for u, v in edges:
            euv = self.edge_nodes.pop((u, v), None)
            evu = self.edge_nodes.pop((v, u), None)
            if euv is None or evu is None:
                raise NotATreeEdge(f"({u},{v}) is not a tree edge")
            first_x = euv.nxt[0]
            last_x = evu.prv[0]
            first_y = evu.nxt[0]
            last_y = euv.prv[0]
            # Both segments are nonempty: each contains its side's self-loop.
            self._stitch(last_x, first_x)
            self._stitch(last_y, first_y)
        self.version += 1

    @staticmethod
    def _stitch(left, right):
        left.nxt[0] = right
        right.prv[0] = left

    def update_nontree_batch(self, inserts=(), deletes=()) -> None:
        """Insert/delete elements of the per-vertex ordered sets.

        Touched vertices get their base summary rebuilt from scratch at the
        nominal 1/4 error; higher summaries follow lazily.
        """
        touched = set()
        for v, elem in deletes:
            self._check_vertex(v)
            bucket = self.nontree[v]
            i = bisect_left(bucket, elem)
            if i >= len(bucket) or bucket[i] != elem:
                raise EdgeAbsent(f"{elem} not present at vertex {v}")
            bucket.pop(i)
            touched.add(v)
        for v, elem in inserts:
            self._check_vertex(v)
            bucket = self.nontree[v]
            i = bisect_left(bucket, elem)
            if i < len(bucket) and bucket[i] == elem:
                raise EdgeAlreadyPresent(f"{elem} already present at vertex {v}")
            bucket.insert(i, elem)
            touched.add(v)
        for v in touched:
            bucket = self.nontree[v]
            if bucket:
                self.verts[v].base = (from_sorted(bucket, BASE_EPS), 0)
            else:
                self.verts[v].base = (empty_summary(BASE_EPS), 0)
        self.version += 1

    # -- connectivity ----------------------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return True
        return self.find_rep(u) is self.find_rep(v)

    def find_rep(self, v: int) -> TourNode:
        node = self.verts[v]
        self._ensure_links(node)
        return node.rep

    def component_size(self, v: int) -> int:
        return self.find_rep(v).comp_size

    def component_nontree_count(self, v: int) -> int:
        """Total elements (with directional duplicates) in the component."""
        return self.find_rep(v).comp_count

    def component_summary(self, v: int):
        """The component's (QuantileSummary, t) pair, or None when it has no elements."""
        node = self.verts[v]
        self._ensure_vals(node)
        return node.rep.comp_summary

    def component_vertices(self, v: int):
        node = self.verts[v]
        for x in self._cycle(node):
            if x.is_vertex:
                yield x.a

    def component_tree_edges(self, v: int):
        """Each tree edge of v's component once, as a canonical (a, b) pair."""
        node = self.verts[v]
        for x in self._cycle(node):
            if not x.is_vertex and x.a < x.b:
                yield (x.a, x.b)

    def tour_sequence(self, v: int):
        """Debug view of v's tour: ('v', x) and ('e', a, b) entries in order."""
        out = []
        for x in self._cycle(self.verts[v]):
            out.append(("v", x.a) if x.is_vertex else ("e", x.a, x.b))
        return out

    def _same_tour(self, x: TourNode, y: TourNode) -> bool:
        # Interleaved bottom-level walk: O(min of the two tour lengths).
        px, py = x, y
        while True:
            px = px.nxt[0]
            if px is y:
                return True
            if px is x:
                return False
            py = py.nxt[0]
            if py is x:
                return True
            if py is y:
                return False

    def _cycle(self, start: TourNode):
        yield start
        x = start.nxt[0]
        while x is not start:
            yield x
            x = x.nxt[0]

    # -- lazy rebuild -----------------------------------------------------------

    def _ensure_links(self, node: TourNode) -> None:
        if node.ver_links != self.version:
            self._rebuild(node, with_vals=False)

    def _ensure_vals(self, node: TourNode) -> None:
        if node.ver_vals != self.version:
            self._rebuild(node, with_vals=True)

    def _rebuild(self, start: TourNode, with_vals: bool) -> None:
        cycle = list(self._cycle(start))
        size = 0
        count = 0
        top_height = 1
        for x in cycle:
            if x.is_vertex:
                size += 1
                count += len(self.nontree[x.a])
                if with_vals:
                    x.vals[0] = x.base
            elif with_vals:
                x.vals[0] = None
            if x.height > top_height:
                top_height = x.height
        top = top_height - 1
        level_nodes = cycle
        for lvl in range(1, top_height):
            nxt_level = [x for x in level_nodes if x.height > lvl]
            # Rotate so subsequences start at their owning level-lvl node.
            first = level_nodes.index(nxt_level[0])
            rotated = level_nodes[first:] + level_nodes[:first]
            m = len(nxt_level)
            for i in range(m):
                nxt_level[i].nxt[lvl] = nxt_level[(i + 1) % m]
                nxt_level[i].prv[lvl] = nxt_level[(i - 1) % m]
            if with_vals:
                owner = None
                acc = None
                for x in rotated:
                    if x.height > lvl:
                        if owner is not None:
                            owner.vals[lvl] = acc
                        owner = x
                        acc = x.vals[lvl - 1]
                    else:
                        acc = self._f(acc, x.vals[lvl - 1])
                owner.vals[lvl] = acc
            level_nodes = nxt_level
        rep = min(level_nodes, key=TourNode.sort_key)
        if with_vals:
            # Component summary: fold the top cycle starting at the representative.
            i = level_nodes.index(rep)
            acc = None
            for x in level_nodes[i:] + level_nodes[:i]:
                acc = self._f(acc, x.vals[top])
            rep.comp_summary = acc
        rep.comp_size = size
        rep.comp_count = count
        for x in cycle:
            x.rep = rep
            x.ver_links = self.version
            if with_vals:
                x.ver_vals = self.version

    # -- the k(1 +- 1/2) lightest fetch ----------------------------------------

    def k_lightest(self, v: int, k: int) -> list:
        """An exact lightest-prefix of the component's non-tree multiset.

        Length j satisfies ceil(k/2) <= j <= floor(3k/2) unless the multiset is
        smaller, in which case everything is returned.
        """
        if k < 1:
            raise DynMsfError("k must be >= 1")
        node = self.verts[v]
        self._ensure_vals(node)
        rep = node.rep
        total = rep.comp_count
        if total == 0:
            return []
        summary = rep.comp_summary[0]
        r = min(k, total)
        w = summary.query(r)
        out = []
        # rep has maximal height in its component, so its top links exist.
        top_lvl = rep.height - 1
        x = rep
        while True:
            self._descend(x, top_lvl, w, out)
            x = x.nxt[top_lvl]
            if x is rep:
                break
        out.sort()
        return out

    def _descend(self, x: TourNode, lvl: int, w, out: list) -> None:
        if lvl == 0:
            if x.is_vertex:
                bucket = self.nontree[x.a]
                if bucket and bucket[0] <= w:
                    out.extend(bucket[:bisect_right(bucket, w)])
            return
        val = x.vals[lvl]
        if val is None:
            return
        summary = val[0]
        if summary.count == 0 or summary.min_element() > w:
            return
        child = x
        stop = x.nxt[lvl]
        while True:
            self._descend(child, lvl - 1, w, out)
            child = child.nxt[lvl - 1]
            if child is stop:
                break

    def _check_vertex(self, v):
        if not (0 <= v < self.n):
            raise DynMsfError(f"vertex {v} outside [0, {self.n})")

    # -- structural audit (test support) ----------------------------------------

    def check_tours(self) -> None:
        """Verify every tour is a valid Euler tour with v + 2e nodes."""
        seen = set()
        for v in range(self.n):
            node = self.verts[v]
            if id(node) in seen:
                continue
            cycle = list(self._cycle(node))
            verts = [x for x in cycle if x.is_vertex]
            edges = [x for x in cycle if not x.is_vertex]
            if len(cycle) != len(verts) + len(edges):
                raise DynMsfError("tour node mismatch")
            if len(edges) != 2 * (len(verts) - 1):
                raise DynMsfError("tour length is not v + 2e for a tree")
            at = None
            for x in cycle + [cycle[0]]:
                if x.is_vertex:
                    if at is not None and x.a != at:
                        raise DynMsfError("self-loop visited away from its vertex")
                    at = x.a
                else:
                    if at is not None and x.a != at:
                        raise DynMsfError("edge leaves the wrong vertex")
                    at = x.b
            for x in cycle:
                seen.add(id(x))
