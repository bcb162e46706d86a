"""Constructive lower-bound gadgets and dendrogram-instability counterexamples.

Each generator turns a dynamic source problem (subgraph connectivity, connected
subgraph, subset union, triangle detection) into a weighted clustering instance
plus the update translation and query interpretation that make the clustering
answers decide the source problem, for any lambda-approximate merge policy up
to the stated lambda. All emitted weights are integers when lambda is an
integer; thresholds may be rationals.

Cluster-count interpretations subtract the gadget's fixed overhead (one cluster
per deactivated vertex's star, one per leftover star, one for the big star) so
callers compare induced-subgraph component counts directly.

Counterexample families build graphs where one extra edge changes a linear
number of dendrogram nodes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import DynMsfError
from .hacref import run_hac


@dataclass
class SubConnInstance:
    """Undirected graph with a dynamic active-vertex set and fixed query pair."""
    n: int
    edges: list
    s: int
    t: int
    active: set = field(default_factory=set)


@dataclass
class SubUnionInstance:
    """Collection of sets over universe {0..u-1} with a dynamic subcollection."""
    u: int
    sets: list            # list of frozensets covering the universe
    chosen: set = field(default_factory=set)   # indices into sets

    def __post_init__(self):
        union = set()
        for s in self.sets:
            union |= s
        if union != set(range(self.u)):
            raise DynMsfError("sets must cover the universe exactly")


@dataclass
class TriangleInstance:
    n: int
    edges: list


class GadgetInstance:
    """A clustering instance wired to a source problem.

    `apply(update)` mutates the edge set per the update translation;
    `edge_ops(update)` returns the toggles without applying, for emission;
    `answer(...)` runs the clustering engine on the current graph and
    interprets the result in source-problem terms.
    """

    def __init__(self, n, edges, linkage, theta, lam, special, kind):
        self.n = n
        self.linkage = linkage
        self.theta = theta
        self.lam = lam
        self.special = special
        self.kind = kind                 # "st" or "count"
        self.edges = {}
        for u, v, w in edges:
            pair = (u, v) if u < v else (v, u)
            if pair in self.edges:
                raise DynMsfError(f"duplicate gadget edge {pair}")
            self.edges[pair] = w
        self._count_offset = None        # for kind == "count": callable

    # update plumbing ---------------------------------------------------------

    def edge_ops(self, update):
        raise NotImplementedError

    def apply(self, update):
        for op in self.edge_ops(update):
            if op[0] == "I":
                _, u, v, w = op
                pair = (u, v) if u < v else (v, u)
                if pair in self.edges:
                    raise DynMsfError(f"gadget insert of present edge {pair}")
                self.edges[pair] = w
            else:
                _, u, v = op
                pair = (u, v) if u < v else (v, u)
                if pair not in self.edges:
                    raise DynMsfError(f"gadget delete of absent edge {pair}")
                del self.edges[pair]

    # queries ---------------------------------------------------------------------

    def _run(self, policy, seed):
        edges = [(u, v, w) for (u, v), w in self.edges.items()]
        return run_hac(self.n, edges, self.linkage, self.theta,
                       policy=policy, lam=self.lam, seed=seed)

    def same_cluster_answer(self, policy="exact", seed=0) -> bool:
        res = self._run(policy, seed)
        part = res.partition_map()
        return part[self.special["s"]] == part[self.special["t"]]

    def component_count_answer(self, policy="exact", seed=0) -> int:
        """Source-side component count recovered from the cluster count."""
        res = self._run(policy, seed)
        return len(res.clusters) - self._count_offset()


# -------------------------------------------------------------------------------
# Subgraph connectivity reductions.
# -------------------------------------------------------------------------------


class _SubConnGadget(GadgetInstance):
    """Shared update translation: toggling v's activation toggles {v, v'}."""

    def __init__(self, src, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.src = src
        self.active = set(src.active)
        self._vw = self.special["activation_weight"]

    def edge_ops(self, update):
        op, v = update
        prime = self.special["prime"][v]
        if op == "add":        # v joins S: remove the anchor edge
            return [("D", v, prime)]
        if op == "remove":
            return [("I", v, prime, self._vw)]
        raise DynMsfError(f"unknown update {update!r}")

    def apply(self, update):
        super().apply(update)
        op, v = update
        (self.active.add if op == "add" else self.active.discard)(v)


def subconn_to_complete(src: SubConnInstance, lam: int = 1) -> GadgetInstance:
    """Complete-linkage instance: copies of G at weight lam+1, one shadow vertex
    per source vertex with weight-1 edges to the neighborhood, and a heavy
    anchor edge pinning every inactive vertex to its shadow."""
    lam1 = lam + 1
    n = src.n
    prime = {v: n + v for v in range(n)}
    edges = [(u, v, lam1) for u, v in src.edges]
    for v in range(n):
        for u in _neighbors(src, v):
            edges.append((prime[v], u, 1))
        if v not in src.active:
            edges.append((v, prime[v], lam1 * lam1))
    special = {"s": src.s, "t": src.t, "prime": prime,
               "activation_weight": lam1 * lam1}
    g = _SubConnGadget(src, n + n, edges, "complete", lam1, lam, special, "st")
    g._count_offset = lambda: src.n
    return g


def subconn_to_wpgma(src: SubConnInstance, lam: int = 1) -> GadgetInstance:
    """Weighted-average variant: each shadow is a star whose leaf merges decay
    the neighborhood similarity geometrically below 2."""
    lam1 = lam + 1
    ell = max(1, math.ceil(math.log2(2 * lam)))
    n = src.n
    prime = {}
    edges = [(u, v, 2 * lam) for u, v in src.edges]
    nxt = n
    for v in range(n):
        prime[v] = nxt
        leaves = list(range(nxt + 1, nxt + 1 + ell))
        nxt += 1 + ell
        for leaf in leaves:
            edges.append((prime[v], leaf, 2 * lam1 ** 2))
            for u in _neighbors(src, v):
                edges.append((leaf, u, 1))
        if v not in src.active:
            edges.append((v, prime[v], 2 * lam1 ** 3))
    special = {"s": src.s, "t": src.t, "prime": prime,
               "activation_weight": 2 * lam1 ** 3, "leaves_per_star": ell}
    g = _SubConnGadget(src, nxt, edges, "weighted_average", 2 * lam, lam,
                       special, "st")
    g._count_offset = lambda: src.n
    return g


class _SubConnUpgmaGadget(GadgetInstance):
    def __init__(self, src, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.src = src
        self.active = set(src.active)

    def edge_ops(self, update):
        op, v = update
        x = self.special["center"]
        w = self.special["activation_weight"]
        return [("D", x, v)] if op == "add" else [("I", x, v, w)]

    def apply(self, update):
        super().apply(update)
        op, v = update
        (self.active.add if op == "add" else self.active.discard)(v)


def subconn_to_upgma(src: SubConnInstance, lam: int = 1) -> GadgetInstance:
    """Average-linkage variant: one giant star absorbs the inactive vertices so
    its similarities dilute below theta = 4/n^2. Cubic size; needs n >= 4.

    The pairwise query is decisive only while both query terminals stay active
    (deactivated vertices all join the star's cluster, which would conflate a
    deactivated s,t pair with a connected one); st-SubConn keeps s and t fixed
    members of S."""
    n = src.n
    if n < 4:
        raise DynMsfError("average-linkage gadget needs a source with >= 4 vertices")
    if src.s not in src.active or src.t not in src.active:
        raise DynMsfError("query terminals must start active for this gadget")
    heavy = 2 * lam * lam * n ** 3
    leaves = lam * n ** 3 - 1
    x = n
    edges = [(u, v, 1) for u, v in src.edges]
    for i in range(leaves):
        edges.append((x, x + 1 + i, heavy))
    for v in range(n):
        if v not in src.active:
            edges.append((x, v, heavy))
    special = {"s": src.s, "t": src.t, "center": x, "activation_weight": heavy}
    g = _SubConnUpgmaGadget(src, x + 1 + leaves, edges, "average",
                            Fraction(4, n * n), lam, special, "st")
    g._count_offset = lambda: 1
    return g


def _neighbors(src: SubConnInstance, v):
    for a, b in src.edges:
        if a == v:
            yield b
        elif b == v:
            yield a


# -------------------------------------------------------------------------------
# Subset-union reductions.
# -------------------------------------------------------------------------------


class _SubUnionGadget(GadgetInstance):
    """Updates toggle the chosen-set anchors on the x side (and, when fully
    dynamic, the y side)."""

    def __init__(self, src, partial, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.src = src
        self.partial = partial
        self.chosen = set(src.chosen)

    def edge_ops(self, update):
        op, i = update
        sp = self.special
        xi = sp["set_vertex"][i]
        ops = []
        if op == "add":
            if not self.partial:
                ops.append(("I", sp["y"], xi, sp["wy"]))
            ops.append(("D", sp["x"], xi))
        elif op == "remove":
            if not self.partial:
                ops.append(("D", sp["y"], xi))
            ops.append(("I", sp["x"], xi, sp["wx"]))
        else:
            raise DynMsfError(f"unknown update {update!r}")
        return ops

    def apply(self, update):
        super().apply(update)
        op, i = update
        (self.chosen.add if op == "add" else self.chosen.discard)(i)


def subunion_to_upgma(src: SubUnionInstance, lam: int = 1,
                      variant: str = "fully_dynamic") -> GadgetInstance:
    """Average-linkage covering gadget (theta = 1): s and t cluster together iff
    the chosen sets cover the universe.

    The partially dynamic variant keeps y wired to every set vertex and only
    toggles the x side, at the cost of a much larger x star.
    """
    partial = _variant_is_partial(variant)
    nu, nx = src.u, len(src.sets)
    wt = (lam + 1) * lam
    ly = lam * wt * nu
    big = (lam + 1) ** 2 * lam * (ly + 1 + nx + lam * nu)
    if not partial:
        lx = nx * big // lam
        wy = (ly + nx) * big + 1
        wx = lam * (lx + nx) * big + 1
    else:
        wy = (ly + nx) * big + 1
        lx = -(-2 * nx * wy // (lam + 1))     # ceil keeps the dilution bound
        wx = lam * (lx + nx) * wy + 1

    alloc = _Alloc()
    set_vertex = {i: alloc.take() for i in range(nx)}
    elem_vertex = {e: alloc.take() for e in range(nu)}
    edges = []
    for i, members in enumerate(src.sets):
        for e in members:
            edges.append((set_vertex[i], elem_vertex[e], big))
    for e in range(nu):
        for _ in range(lam - 1):
            edges.append((elem_vertex[e], alloc.take(), wx))
    y = alloc.take()
    for _ in range(ly):
        edges.append((y, alloc.take(), wy))
    x = alloc.take()
    for _ in range(lx):
        edges.append((x, alloc.take(), wx))
    s, t = alloc.take(), alloc.take()
    edges.append((s, t, 1))
    for e in range(nu):
        edges.append((t, elem_vertex[e], wt))
    for i in range(nx):
        if partial or i in src.chosen:
            edges.append((y, set_vertex[i], wy))
        if i not in src.chosen:
            edges.append((x, set_vertex[i], wx))
    special = {"s": s, "t": t, "x": x, "y": y, "wx": wx, "wy": wy,
               "set_vertex": set_vertex, "elem_vertex": elem_vertex,
               "constants": {"w_t": wt, "l_y": ly, "L": big, "l_x": lx,
                             "w_y": wy, "w_x": wx}}
    return _SubUnionGadget(src, partial, alloc.n, edges, "average", 1, lam,
                           special, "st")


def subunion_to_complete(src: SubUnionInstance, lam: int = 1) -> GadgetInstance:
    """Complete-linkage covering gadget with theta = lam + 1."""
    lam1 = lam + 1
    nu, nx = src.u, len(src.sets)
    alloc = _Alloc()
    set_vertex = {i: alloc.take() for i in range(nx)}
    elem_vertex = {e: alloc.take() for e in range(nu)}
    x, s, t = alloc.take(), alloc.take(), alloc.take()
    edges = []
    for i, members in enumerate(src.sets):
        for e in members:
            edges.append((set_vertex[i], elem_vertex[e], lam1 ** 3))
    for e in range(nu):
        edges.append((x, elem_vertex[e], 1))
        edges.append((s, elem_vertex[e], 1))
        edges.append((t, elem_vertex[e], lam1 ** 2))
    edges.append((s, t, lam1))
    for i in range(nx):
        edges.append((t, set_vertex[i], 1))
        if i not in src.chosen:
            edges.append((x, set_vertex[i], lam1 ** 4))
    special = {"s": s, "t": t, "x": x, "wx": lam1 ** 4,
               "set_vertex": set_vertex, "elem_vertex": elem_vertex}
    g = _SubUnionGadget(src, True, alloc.n, edges, "complete", lam1, lam,
                        special, "st")
    # partial=True here only means updates touch the x side alone, which is
    # exactly this construction's update rule.
    return g


def subunion_to_wpgma(src: SubUnionInstance, lam: int = 1) -> GadgetInstance:
    """Weighted-average covering gadget: three decay stars around x, y, and z."""
    lam1 = lam + 1
    ell = math.ceil(math.log2(2 * lam1 ** 7))
    nu, nx = src.u, len(src.sets)
    alloc = _Alloc()
    set_vertex = {i: alloc.take() for i in range(nx)}
    elem_vertex = {e: alloc.take() for e in range(nu)}
    s, t = alloc.take(), alloc.take()
    x, y, z = alloc.take(), alloc.take(), alloc.take()
    xl = [alloc.take() for _ in range(ell)]
    yl = [alloc.take() for _ in range(ell)]
    zl = [alloc.take() for _ in range(ell)]
    edges = []
    for i, members in enumerate(src.sets):
        for e in members:
            edges.append((set_vertex[i], elem_vertex[e], 2 * lam1 ** 7))
    edges.append((s, t, 2 * lam))
    for e in range(nu):
        edges.append((t, elem_vertex[e], 2 * lam1 ** 4))
        edges.append((z, elem_vertex[e], 2 * lam1 ** 3))
    for leaf in xl:
        edges.append((x, leaf, 2 * lam1 ** 8))
        edges.append((leaf, y, 1))
        for e in range(nu):
            edges.append((leaf, elem_vertex[e], 1))
    for leaf in yl:
        edges.append((y, leaf, 2 * lam1 ** 5))
        edges.append((leaf, t, 1))
        edges.append((leaf, z, 1))
    for leaf in zl:
        edges.append((z, leaf, 2 * lam1 ** 2))
        edges.append((leaf, s, 1))
    for i in range(nx):
        edges.append((y, set_vertex[i], 2 * lam1 ** 6))
        if i not in src.chosen:
            edges.append((x, set_vertex[i], 2 * lam1 ** 9))
    special = {"s": s, "t": t, "x": x, "y": y, "z": z,
               "wx": 2 * lam1 ** 9, "leaves_per_star": ell,
               "set_vertex": set_vertex, "elem_vertex": elem_vertex}
    return _SubUnionGadget(src, True, alloc.n, edges, "weighted_average",
                           2 * lam, lam, special, "st")


def subunion_to_upgma_count(src: SubUnionInstance, lam: int = 1,
                            variant: str = "fully_dynamic") -> GadgetInstance:
    """Average-linkage #-query gadget: covered iff exactly two clusters remain."""
    partial = _variant_is_partial(variant)
    nu, nx = src.u, len(src.sets)
    theta = Fraction(1, nx + nu)
    wy = lam * nx + 1
    if not partial:
        lx = lam * nx * (nx + nu)
        wx = lam * (lx + nx) + 1
    else:
        lx = 2 * lam * nx * wy * (nx + nu)
        wx = lam * (lx + nx) * wy + 1
    alloc = _Alloc()
    set_vertex = {i: alloc.take() for i in range(nx)}
    elem_vertex = {e: alloc.take() for e in range(nu)}
    y = alloc.take()
    x = alloc.take()
    edges = []
    for i, members in enumerate(src.sets):
        for e in members:
            edges.append((set_vertex[i], elem_vertex[e], 1))
    for _ in range(lx):
        edges.append((x, alloc.take(), wx))
    for i in range(nx):
        if partial or i in src.chosen:
            edges.append((y, set_vertex[i], wy))
        if i not in src.chosen:
            edges.append((x, set_vertex[i], wx))
    special = {"x": x, "y": y, "wx": wx, "wy": wy,
               "set_vertex": set_vertex, "elem_vertex": elem_vertex}
    g = _SubUnionGadget(src, partial, alloc.n, edges, "average", theta, lam,
                        special, "count")
    g.covered_answer = lambda policy="exact", seed=0: (
        len(g._run(policy, seed).clusters) == 2)
    return g


def _variant_is_partial(variant):
    if variant in ("fully_dynamic", "fully-dynamic"):
        return False
    if variant in ("partially_dynamic", "partially-dynamic"):
        return True
    raise DynMsfError(f"unknown variant {variant!r}")


class _Alloc:
    def __init__(self):
        self.n = 0

    def take(self):
        v = self.n
        self.n += 1
        return v


# -------------------------------------------------------------------------------
# Triangle detection via cluster counting.
# -------------------------------------------------------------------------------


class TriangleGadget(GadgetInstance):
    def __init__(self, src, lam):
        n = src.n
        star = lam + 1
        alloc = _Alloc()
        a_side = {v: alloc.take() for v in range(n)}
        b_side = {v: alloc.take() for v in range(n)}
        anchors = {}
        leaves = {}
        edges = []
        for u, v in src.edges:
            edges.append((a_side[u], b_side[v], 1))
            edges.append((a_side[v], b_side[u], 1))
        for copy in list(a_side.values()) + list(b_side.values()):
            anchors[copy] = alloc.take()
            edges.append((copy, anchors[copy], star * star))
            leaves[copy] = [alloc.take() for _ in range(lam - 1)]
            for leaf in leaves[copy]:
                edges.append((anchors[copy], leaf, star * star))
        special = {"a_side": a_side, "b_side": b_side, "anchor": anchors,
                   "activation_weight": star * star}
        super().__init__(alloc.n, edges, "average", 1, lam, special, "count")
        self.src = src
        self.activated = set()

    def edge_ops(self, update):
        op, copy = update
        anchor = self.special["anchor"][copy]
        w = self.special["activation_weight"]
        return [("D", copy, anchor)] if op == "activate" else \
            [("I", copy, anchor, w)]

    def apply(self, update):
        super().apply(update)
        op, copy = update
        (self.activated.add if op == "activate" else
         self.activated.discard)(copy)

    def edge_between_activated(self, policy="exact", seed=0) -> bool:
        expected = 2 * self.src.n + len(self.activated)
        return len(self._run(policy, seed).clusters) != expected


def triangle_to_upgma_count(src: TriangleInstance, lam: int = 1) -> TriangleGadget:
    return TriangleGadget(src, lam)


def detect_triangle(src: TriangleInstance, lam: int = 1, policy="exact",
                    seed: int = 0) -> bool:
    """Drive the gadget: activate each vertex's neighborhood copies and test for
    an edge between activated vertices."""
    g = triangle_to_upgma_count(src, lam)
    adj = {v: set() for v in range(src.n)}
    for u, v in src.edges:
        adj[u].add(v)
        adj[v].add(u)
    for v in range(src.n):
        copies = [g.special["a_side"][u] for u in sorted(adj[v])] + \
                 [g.special["b_side"][u] for u in sorted(adj[v])]
        for c in copies:
            g.apply(("activate", c))
        hit = g.edge_between_activated(policy=policy, seed=seed + v)
        for c in copies:
            g.apply(("deactivate", c))
        if hit:
            return True
    return False


# -------------------------------------------------------------------------------
# Dendrogram-instability counterexamples.
# -------------------------------------------------------------------------------


def sample_subconn(seed: int, n: int, p=0.45, pin_terminals=False) -> SubConnInstance:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    active = {v for v in range(n) if rng.random() < 0.6}
    s, t = rng.sample(range(n), 2)
    if pin_terminals:
        active |= {s, t}
    return SubConnInstance(n, edges, s, t, active)


def sample_subunion(seed: int, u: int, k: int) -> SubUnionInstance:
    rng = random.Random(seed)
    while True:
        sets = [frozenset(e for e in range(u) if rng.random() < 0.5) for _ in range(k)]
        union = set()
        for s in sets:
            union |= s
        if union == set(range(u)) and all(sets):
            break
    chosen = {i for i in range(k) if rng.random() < 0.5}
    return SubUnionInstance(u, sets, chosen)


def sample_triangle(seed: int, n: int, p=0.35) -> TriangleInstance:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return TriangleInstance(n, edges)


def counterexample(kind: str, k: int):
    """(n, edges, extra_edge) such that adding extra_edge changes a linear
    number of dendrogram nodes under the named linkage family."""
    if k < 2:
        raise DynMsfError("counterexamples need k >= 2")
    if kind == "single":
        n = 2 * k
        half = k
        c1, c2 = half - 1, half
        edges = []
        for i in range(half - 1):
            edges.append((c1, i, 2 * i + 1))
        for i in range(half - 1):
            edges.append((c2, half + 1 + i, n - 2 - 2 * i))
        return n, edges, (c1, c2, n - 1)
    if kind == "wpgma_complete":
        n = 2 * k + 2
        edges = []
        for i in range(1, k + 1):
            edges.append((0, i, 3 * k + i))
            edges.append((i, k + i, 2 * k + i))
            edges.append((i, n - 1, 1))
        return n, edges, (0, n - 1, 4 * k + 1)
    if kind == "upgma":
        n = 4 * k + 1
        edges = []
        for i in range(1, k + 1):
            edges.append((0, i, 2 * k * k + i))
            edges.append((i, k + i, k + i))
        for i in range(2 * k + 1, 4 * k):
            edges.append((i, n - 1, 8 * k ** 3))
        return n, edges, (0, n - 1, 8 * k ** 3)
    raise DynMsfError(f"unknown counterexample kind {kind!r}")


COUNTEREXAMPLE_LINKAGES = {
    "single": ("single",),
    "wpgma_complete": ("complete", "weighted_average"),
    "upgma": ("average",),
}
