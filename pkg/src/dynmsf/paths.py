"""Dynamic weighted forest with heaviest-edge path queries and path compression.

Edges are (key, u, v) records with unique totally ordered keys, as elsewhere.
The structure is deliberately a plain adjacency forest: queries walk the tree,
which meets the module contract (the performant dynamic-trees structure is an
optimization, not part of the interface).

A compressed path tree relative to a set of marked vertices is the union of the
paths between the marked vertices with every unmarked vertex of degree below
three spliced out; each compressed edge carries the heaviest original edge on
the path it represents, and heaviest-edge weights between marked vertices are
preserved exactly. Compressed trees are immutable snapshots tagged with the
forest version that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import DynMsfError, EdgeAbsent

_EMPTY: dict = {}
from .euler import CycleCreated


class NotConnected(DynMsfError):
    pass


@dataclass(frozen=True)
class CompressedEdge:
    a: int
    b: int
    heaviest: tuple       # (key, u, v) record of the heaviest represented edge
    path: tuple           # canonical (u, v) pairs of every represented edge

    @property
    def key(self):
        return self.heaviest[0]

    def __repr__(self):
        return f"C({self.a}-{self.b}, top={self.heaviest[0]})"


@dataclass
class CompressedPathTree:
    vertices: list
    edges: list                       # CompressedEdge
    version: int
    _by_original: dict = field(default_factory=dict, repr=False)

    def resolve_original(self, u, v):
        """Compressed edge whose represented path contains {u, v}, or None."""
        return self._by_original.get((u, v) if u < v else (v, u))


def _pair(u, v):
    return (u, v) if u < v else (v, u)


class PathForest:
    """Forest over n vertices; single writer, naive O(component) queries."""

    def __init__(self, n):
        if n < 1:
            raise DynMsfError("need at least one vertex")
        self.n = n
        # Sparse: vertices appear only once they touch an edge, so dozens of
        # forests over a large universe stay cheap.
        self.adj: dict[int, dict] = {}
        self.version = 0
        self.edge_count = 0

    def _nbrs(self, v):
        return self.adj.get(v, _EMPTY)

    def edge_records(self):
        out = []
        for v, nbrs in self.adj.items():
            for u, rec in nbrs.items():
                if v < u:
                    out.append(rec)
        return out

    def has_edge(self, u, v):
        return v in self._nbrs(u)

    def insert_batch(self, records):
        for key, u, v in records:
            if v in self._nbrs(u):
                raise CycleCreated(f"edge ({u},{v}) already present")
            if self._connected_walk(u, v):
                raise CycleCreated(f"edge ({u},{v}) would close a cycle")
            rec = (key, u, v)
            self.adj.setdefault(u, {})[v] = rec
            self.adj.setdefault(v, {})[u] = rec
            self.edge_count += 1
        self.version += 1

    def delete_batch(self, pairs):
        for u, v in pairs:
            if v not in self._nbrs(u):
                raise EdgeAbsent(f"edge ({u},{v}) not present")
            del self.adj[u][v]
            del self.adj[v][u]
            self.edge_count -= 1
        self.version += 1

    def connected(self, u, v):
        return self._connected_walk(u, v)

    def _connected_walk(self, u, v):
        if u == v:
            return True
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in self._nbrs(x):
                if y == v:
                    return True
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def heaviest_on_path(self, u, v):
        """Maximum edge record on the unique u-v tree path."""
        if u == v:
            raise NotConnected("trivial path has no edges")
        prev = {u: None}
        stack = [u]
        while stack and v not in prev:
            x = stack.pop()
            for y, rec in self._nbrs(x).items():
                if y not in prev:
                    prev[y] = (x, rec)
                    stack.append(y)
        if v not in prev:
            raise NotConnected(f"{u} and {v} are in different trees")
        best = None
        x = v
        while x != u:
            x, rec = prev[x]
            if best is None or rec[0] > best[0]:
                best = rec
        return best

    # -- compression -------------------------------------------------------------

    def compressed_path_tree(self, marked) -> CompressedPathTree:
        marked = set(marked)
        if not marked:
            raise DynMsfError("marked set must be nonempty")
        vertices = []
        edges = []
        by_original = {}
        visited = set()
        for root in sorted(marked):
            if root in visited:
                continue
            self._compress_component(root, marked, visited, vertices, edges, by_original)
        return CompressedPathTree(vertices, edges, self.version, by_original)

    def _compress_component(self, root, marked, visited, vertices, edges, by_original):
        # Iterative DFS from a marked root; chains carry (kept descendant,
        # heaviest record so far, list of represented pairs).
        order = []
        parent = {root: None}
        pedge = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            visited.add(x)
            order.append(x)
            for y, rec in self._nbrs(x).items():
                if y not in parent:
                    parent[y] = x
                    pedge[y] = rec
                    stack.append(y)
        chains = {}   # vertex -> list of chains ending there
        for x in reversed(order):
            mine = chains.pop(x, [])
            keep = x in marked or len(mine) >= 2
            if keep:
                vertices.append(x)
                for kept_desc, heaviest, path in mine:
                    ce = CompressedEdge(kept_desc, x, heaviest, tuple(path))
                    edges.append(ce)
                    for pr in path:
                        by_original[pr] = ce
                mine = [(x, None, [])] if x != root else []
            if x == root:
                break
            rec = pedge[x]
            up = parent[x]
            if keep:
                fresh = mine
            elif len(mine) == 1:
                fresh = mine
            else:
                continue
            for kept_desc, heaviest, path in fresh:
                if heaviest is None or rec[0] > heaviest[0]:
                    heaviest = rec
                path.append(_pair(x, up))
                chains.setdefault(up, []).append((kept_desc, heaviest, path))
