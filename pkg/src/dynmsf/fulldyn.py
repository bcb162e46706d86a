r"""Fully dynamic batch MSF: a global tree, scaled decremental sub-instances,
sync forests, and difference buffers.

State per instance on n vertices (L = ceil(log2 n)):

  F          the global tree, always the exact tie-broken MSF of the graph;
  A_0..A_2L  decremental MSF structures over compressed local graphs, where
             A_i holds at most 2^i local non-tree edges and every global
             non-tree edge is a local non-tree edge of exactly one A_i;
  T_0..T_2L  sync forests equal to F at A_i's last initialization;
  B_D,i/B_I,i difference buffers with (T_i \ B_D,i) ∪ B_I,i = F at all times.

Batch insertion compresses F relative to the new endpoints, computes a static
MSF over compressed-tree-plus-new edges, swaps replaced tree edges out of F,
folds the delta into every buffer pair, and re-homes the new non-tree edges.
Batch deletion removes edges from F and from every local structure (translating
through the sync forests' compressed snapshots), gathers the local replacement
edges, and feeds them back through batch insertion, which reconnects F and
restores the invariants.

Local graphs can be non-simple (one compressed tree-path edge plus one parallel
non-tree edge); identity is by key, a compressed edge using its heaviest
represented original edge's key.
"""

from __future__ import annotations

from .euler import ceil_log2
from .graph import (DynMsfError, WeightedEdge, validate_delete_batch,
                    validate_insert_batch)
from .levels import LevelStructure, static_msf
from .paths import PathForest


class _Local:
    """One initialized local instance: structure + frozen compression snapshot."""

    __slots__ = ("structure", "cpt", "key_map")

    def __init__(self, structure, cpt, key_map):
        self.structure = structure
        self.cpt = cpt
        self.key_map = key_map    # key -> ("orig", WeightedEdge) | ("comp", CompressedEdge)

    def live_global_nontree(self):
        """Current local non-tree edges as global WeightedEdges."""
        out = []
        for key, _u, _v in self.structure.nontree_edges():
            kind, obj = self.key_map[key]
            if kind != "orig":
                raise DynMsfError("compressed edge became a local non-tree edge")
            out.append(obj)
        return out


class DynamicMsf:
    """Batch-dynamic MSF over a fixed n-vertex universe; single external writer."""

    def __init__(self, n: int, seed: int = 0):
        if n < 1:
            raise DynMsfError("need at least one vertex")
        self.n = n
        self.seed = seed
        self.num_local = 2 * ceil_log2(n) + 1
        self.F = PathForest(n)
        self.T = [PathForest(n) for _ in range(self.num_local)]
        self.BD = [dict() for _ in range(self.num_local)]   # pair -> record
        self.BI = [dict() for _ in range(self.num_local)]
        self.A: list[_Local | None] = [None] * self.num_local
        self.edges: dict[tuple[int, int], WeightedEdge] = {}
        self.tree_pairs: set[tuple[int, int]] = set()
        self.home: dict[tuple[int, int], int] = {}
        self.peak_m = 0
        self._incarnation = 0

    # -- queries -----------------------------------------------------------------

    def msf_edges(self) -> set[WeightedEdge]:
        return {self.edges[p] for p in self.tree_pairs}

    def msf_weight(self):
        return sum(e.w for e in self.msf_edges())

    def edge_count(self) -> int:
        return len(self.edges)

    # -- public updates -------------------------------------------------------------

    def batch_insert(self, batch) -> None:
        batch = list(batch)
        validate_insert_batch(batch, self.edges.keys(), self.n)
        for e in batch:
            self.edges[e.ends] = e
        self.peak_m = max(self.peak_m, len(self.edges))
        self._insert_flow(batch)

    def batch_delete(self, pairs) -> None:
        replacements = self._delete_phase(pairs)
        self._insert_flow(replacements, internal=True)

    def _delete_phase(self, pairs) -> list[WeightedEdge]:
        """Everything batch deletion does before the reconnecting insertion call."""
        pairs = [(min(u, v), max(u, v)) for u, v in pairs]
        validate_delete_batch(pairs, self.edges.keys(), self.n)
        removed = {p: self.edges.pop(p) for p in pairs}
        tree_hit = {p: e for p, e in removed.items() if p in self.tree_pairs}
        if tree_hit:
            self.F.delete_batch(list(tree_hit))
            self.tree_pairs -= set(tree_hit)
        for i in range(self.num_local):
            bd, bi = self.BD[i], self.BI[i]
            for p, e in tree_hit.items():
                if p not in bi:
                    bd[p] = (e.key, e.u, e.v)
                bi.pop(p, None)
        for p in pairs:
            self.home.pop(p, None)
        # Translate the deletion into every local structure and collect the
        # replacement edges its decremental search promotes.
        replacements: dict[tuple[int, int], WeightedEdge] = {}
        for i in range(self.num_local):
            local = self.A[i]
            if local is None:
                continue
            keys = set()
            for p, e in removed.items():
                ce = local.cpt.resolve_original(*p) if local.cpt is not None else None
                if ce is not None and ce.key in local.structure.edges:
                    keys.add(ce.key)
                if e.key in local.structure.edges:
                    keys.add(e.key)
            if not keys:
                continue
            report = local.structure.delete_batch(sorted(keys))
            for key, _lu, _lv in report.replacements:
                kind, obj = local.key_map[key]
                if kind != "orig":
                    raise DynMsfError("local replacement is a compressed edge")
                replacements.setdefault(obj.ends, obj)
                self.home.pop(obj.ends, None)
        return sorted(replacements.values(), key=lambda e: e.key)

    # -- the insertion flow (external inserts and internal reinsertion) ---------------

    def _insert_flow(self, batch, internal: bool = False) -> None:
        if internal:
            batch = [e for e in batch if e.ends not in self.tree_pairs]
        inserted_keys = set()
        deleted: dict[tuple[int, int], WeightedEdge] = {}
        if batch:
            endpoints = sorted({x for e in batch for x in e.ends})
            cpt = self.F.compressed_path_tree(endpoints)
            verts = sorted(set(cpt.vertices) | set(endpoints))
            vid = {v: i for i, v in enumerate(verts)}
            records = [(ce.key, vid[ce.a], vid[ce.b]) for ce in cpt.edges]
            records += [(e.key, vid[e.u], vid[e.v]) for e in batch]
            chosen = {key for key, _, _ in static_msf(len(verts), records)}
            for ce in cpt.edges:
                if ce.key not in chosen:
                    key, u, v = ce.heaviest
                    deleted[(u, v) if u < v else (v, u)] = self.edges[
                        (u, v) if u < v else (v, u)]
            inserted = [e for e in batch if e.key in chosen]
            inserted_keys = {e.ends for e in inserted}
            if deleted:
                self.F.delete_batch(list(deleted))
                self.tree_pairs -= set(deleted)
            if inserted:
                self.F.insert_batch([(e.key, e.u, e.v) for e in inserted])
                self.tree_pairs |= inserted_keys
            for i in range(self.num_local):
                bd, bi = self.BD[i], self.BI[i]
                for p, e in deleted.items():
                    if p not in bi:
                        bd[p] = (e.key, e.u, e.v)
                for p in deleted:
                    bi.pop(p, None)
                for e in inserted:
                    bi[e.ends] = (e.key, e.u, e.v)
        new_nontree = dict(deleted)
        for e in batch:
            if e.ends not in inserted_keys:
                new_nontree[e.ends] = e
        self._update(new_nontree)

    # -- the re-homing helper ----------------------------------------------------------

    def _update(self, new_nontree: dict) -> None:
        pending = dict(new_nontree)
        for i in range(self.num_local):
            local = self.A[i]
            if local is not None:
                for e in local.live_global_nontree():
                    if e.ends in self.tree_pairs:
                        self.home.pop(e.ends, None)   # absorbed into F since
                        continue
                    pending[e.ends] = e
                self.A[i] = None
            if len(pending) <= (1 << i):
                ti = self.T[i]
                if self.BD[i]:
                    ti.delete_batch(list(self.BD[i]))
                if self.BI[i]:
                    ti.insert_batch(list(self.BI[i].values()))
                self.BD[i] = {}
                self.BI[i] = {}
                self._init_local(i, pending)
                return
        raise DynMsfError("no local slot could absorb the non-tree edges")

    def _init_local(self, i: int, nontree: dict) -> None:
        if not nontree:
            return  # freshly cleared slot stays empty
        endpoints = sorted({x for p in nontree for x in p})
        cpt = self.T[i].compressed_path_tree(endpoints)
        verts = sorted(set(cpt.vertices) | set(endpoints))
        vid = {v: k for k, v in enumerate(verts)}
        key_map = {}
        records = []
        for ce in cpt.edges:
            records.append((ce.key, vid[ce.a], vid[ce.b]))
            key_map[ce.key] = ("comp", ce)
        for p, e in nontree.items():
            records.append((e.key, vid[e.u], vid[e.v]))
            key_map[e.key] = ("orig", e)
            self.home[p] = i
        self._incarnation += 1
        seed = (self.seed * 1_000_003 + i * 10_007 + self._incarnation) & 0x7FFFFFFF
        structure = LevelStructure(len(verts), records, mode="msf", seed=seed)
        self.A[i] = _Local(structure, cpt, key_map)

    # -- invariant audit (test support) ---------------------------------------------------

    def audit(self) -> list[str]:
        issues = []
        # F is the exact tie-broken MSF of the current graph.
        want = {key for key, _, _ in
                static_msf(self.n, [(e.key, e.u, e.v) for e in self.edges.values()])}
        have = {self.edges[p].key for p in self.tree_pairs}
        if want != have:
            issues.append(f"global tree is not the MSF ({len(want ^ have)} edges differ)")
        f_pairs = set(self.tree_pairs)
        # Buffer invariant per slot.
        for i in range(self.num_local):
            t_pairs = {(u, v) for _, u, v in self.T[i].edge_records()}
            synth = (t_pairs - set(self.BD[i])) | set(self.BI[i])
            if synth != f_pairs:
                issues.append(f"buffer invariant broken at slot {i}")
        # Local edge-count bound and non-tree residency.
        nontree_pairs = set(self.edges) - self.tree_pairs
        seen_home = {}
        for i, local in enumerate(self.A):
            if local is None:
                continue
            live = local.live_global_nontree()
            if len(live) > (1 << i):
                issues.append(f"A_{i} holds {len(live)} > 2^{i} local non-tree edges")
            for e in live:
                if e.ends in seen_home:
                    issues.append(f"{e} is a local non-tree edge of two slots")
                seen_home[e.ends] = i
            sub = local.structure.audit()
            issues.extend(f"A_{i}: {msg}" for msg in sub)
        for p in nontree_pairs:
            if seen_home.get(p) is None:
                issues.append(f"global non-tree edge {p} has no local home")
            elif self.home.get(p) != seen_home[p]:
                issues.append(f"home map stale for {p}")
        # Slots above the peak-size scale stay empty.
        cap = ceil_log2(max(1, self.peak_m))
        for i, local in enumerate(self.A):
            if local is not None and local.structure.edges and i > cap:
                issues.append(f"A_{i} nonempty above peak scale {cap}")
        return issues

    # -- introspection for golden tests ------------------------------------------------

    def local_occupancy(self, i: int):
        """(tree, nontree) descriptions of A_i's live edges, or None when empty.

        A local edge is described as ("orig", (u, v)) for an absorbed global edge
        or ("comp", (a, b), (u, v)) for a compressed edge from a to b whose
        heaviest represented original edge is {u, v}.
        """
        local = self.A[i]
        if local is None:
            return None
        tree, nontree = [], []
        for key in sorted(local.structure.edges):
            kind, obj = local.key_map[key]
            if kind == "orig":
                desc = ("orig", obj.ends)
            else:
                hk = obj.heaviest
                desc = ("comp", (obj.a, obj.b) if obj.a < obj.b else (obj.b, obj.a),
                        (hk[1], hk[2]))
            (tree if key in local.structure.tree else nontree).append(desc)
        return (tree, nontree)

    def sync_tree_pairs(self, i: int):
        return {(u, v) for _, u, v in self.T[i].edge_records()}

    def buffer_pairs(self, i: int):
        return (set(self.BD[i]), set(self.BI[i]))
