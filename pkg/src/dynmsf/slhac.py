"""Single-linkage graph clustering queries over the dynamic MSF.

Similarities are maintained as negated weights, so the minimum spanning forest
of the weight graph is the maximum spanning forest of the similarity graph.
Clusters at threshold theta are the connected components of the edges with
similarity >= theta (an edge at exactly theta still merges: agglomeration runs
until every remaining similarity is strictly below theta), and those components
coincide with components of the MSF's thresholded edges.

Queries never mutate; the dendrogram itself is never materialized.
"""

from __future__ import annotations

from .fulldyn import DynamicMsf
from .graph import WeightedEdge
from .paths import NotConnected


class SimilarityGraph:
    """Dynamic graph keyed by similarity, answering cluster queries at thresholds."""

    def __init__(self, n: int, seed: int = 0):
        self.inner = DynamicMsf(n, seed=seed)

    @property
    def n(self):
        return self.inner.n

    def insert_batch(self, sims) -> None:
        """Insert (u, v, similarity) edges."""
        self.inner.batch_insert([WeightedEdge(u, v, -s) for u, v, s in sims])

    def delete_batch(self, pairs) -> None:
        self.inner.batch_delete(pairs)

    def similarity(self, u, v):
        e = self.inner.edges.get((u, v) if u < v else (v, u))
        return None if e is None else -e.w

    def same_cluster(self, s: int, t: int, theta) -> bool:
        """Are s and t together once merging stops below threshold theta?"""
        if s == t:
            return True
        try:
            heaviest = self.inner.F.heaviest_on_path(s, t)
        except NotConnected:
            return False
        return -heaviest[0][0] >= theta

    def group_by_cluster(self, vertices, theta) -> list[list[int]]:
        """Partition the query vertices by their cluster at threshold theta."""
        vertices = sorted(set(vertices))
        if not vertices:
            raise ValueError("query vertex set must be nonempty")
        cpt = self.inner.F.compressed_path_tree(vertices)
        parent = {v: v for v in cpt.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ce in cpt.edges:
            if -ce.key[0] >= theta:
                ra, rb = find(ce.a), find(ce.b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for v in vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def num_clusters(self, theta) -> int:
        """Cluster count at theta: n minus the MSF edges at similarity >= theta."""
        hot = sum(1 for e in self.inner.msf_edges() if -e.w >= theta)
        return self.inner.n - hot
