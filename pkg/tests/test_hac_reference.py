import itertools
import random
from fractions import Fraction

import pytest

from dynmsf.hacref import (Dendrogram, LeafMismatch, dendrogram_diff, run_hac)
from dynmsf.slhac import SimilarityGraph

from oracles import single_linkage_partition


def partition_map(result):
    return result.partition_map()


def random_sim_graph(rng, n, m, lo=1, hi=60):
    seen = set()
    edges = []
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        p = (min(a, b), max(a, b))
        if a == b or p in seen:
            continue
        seen.add(p)
        edges.append((a, b, rng.randrange(lo, hi)))
    return edges


def test_single_linkage_matches_msf_thresholding():
    rng = random.Random(2)
    for trial in range(8):
        n = rng.randrange(6, 20)
        edges = random_sim_graph(rng, n, min(n * 2, n * (n - 1) // 2))
        theta = rng.randrange(1, 60)
        res = run_hac(n, edges, "single", theta)
        assert partition_map(res) == single_linkage_partition(n, edges, theta)
        g = SimilarityGraph(n)
        g.insert_batch(edges)
        assert [sorted(grp) for grp in res.clusters] == g.group_by_cluster(range(n), theta)


def brute_cluster_sim(edges, X, Y, linkage):
    cut = [w for u, v, w in edges
           if (u in X and v in Y) or (u in Y and v in X)]
    if not cut:
        return None
    if linkage == "single":
        return max(cut)
    if linkage == "complete":
        return min(cut)
    return Fraction(sum(cut), len(X) * len(Y))


@pytest.mark.parametrize("linkage", ["single", "complete", "average"])
def test_merge_similarities_match_direct_recomputation(linkage):
    # Replay the engine's merge log against from-scratch cut recomputation.
    rng = random.Random(7)
    for trial in range(6):
        n = rng.randrange(5, 14)
        edges = random_sim_graph(rng, n, min(2 * n, n * (n - 1) // 2))
        res = run_hac(n, edges, linkage, theta=0)
        members = {v: {v} for v in range(n)}
        for sim, a, b in res.merges:
            direct = brute_cluster_sim(edges, members[a], members[b], linkage)
            assert direct == sim
            members[a] = members[a] | members[b]
            del members[b]


def test_weighted_average_recurrence_path_dependence():
    # W(Z,U) = mean of existing edges, never recomputed from raw cut weights.
    edges = [(0, 1, 8), (0, 2, 6), (1, 2, 1), (2, 3, 5)]
    res = run_hac(4, edges, "weighted_average", theta=0)
    sims = [m[0] for m in res.merges]
    # First merge {0,1}@8; then W({01},2) = (6+1)/2 = 7/2 < 5, so {01,2}? no:
    # next is (2,3)@5, then W({01},{23}) = mean over existing = 7/2.
    assert sims == [8, 5, Fraction(7, 2)]


def appendix_pair_gadget(k, with_extra):
    """Two-level star family on n = 2k+2 vertices for complete/wpgma instability."""
    n = 2 * k + 2
    edges = []
    for i in range(1, k + 1):
        edges.append((0, i, 3 * k + i))
        edges.append((i, k + i, 2 * k + i))
        edges.append((i, n - 1, 1))
    if with_extra:
        edges.append((0, n - 1, 4 * k + 1))
    return n, edges


def dendro_shape(d):
    contents = d.contents()
    return {frozenset(c) for c in contents}


def test_pair_gadget_with_extra_edge_pairs_merge_directly():
    for linkage in ("complete", "weighted_average"):
        n, edges = appendix_pair_gadget(2, with_extra=True)
        res = run_hac(n, edges, linkage, theta=0)
        shape = dendro_shape(res.dendrogram)
        for i in (1, 2):
            assert frozenset((i, 2 + i)) in shape, f"{linkage}: pair ({i},{2+i}) not merged"
        assert frozenset((0, n - 1)) in shape


def test_pair_gadget_without_extra_is_a_chain():
    for linkage in ("complete", "weighted_average"):
        n, edges = appendix_pair_gadget(2, with_extra=False)
        res = run_hac(n, edges, linkage, theta=0)
        shape = dendro_shape(res.dendrogram)
        assert frozenset((0, 2)) in shape
        assert frozenset((0, 1, 2)) in shape
        assert not any(frozenset((i, 2 + i)) in shape for i in (1, 2))


def test_wpgma_fig2_exact_structure():
    n, edges = appendix_pair_gadget(2, with_extra=True)
    res = run_hac(n, edges, "weighted_average", theta=0)
    shape = dendro_shape(res.dendrogram)
    assert shape == {
        frozenset((v,)) for v in range(6)
    } | {
        frozenset((0, 5)), frozenset((2, 4)), frozenset((1, 3)),
        frozenset((0, 2, 4, 5)), frozenset(range(6)),
    }


def test_adversarial_lambda_one_degenerates_to_exact():
    rng = random.Random(5)
    for trial in range(5):
        n = rng.randrange(5, 12)
        edges = random_sim_graph(rng, n, 2 * n)
        for linkage in ("single", "complete", "average", "weighted_average"):
            exact = run_hac(n, edges, linkage, theta=3)
            adv = run_hac(n, edges, linkage, theta=3, policy="adversarial",
                          lam=1, seed=trial)
            assert exact.merges == adv.merges
            assert exact.clusters == adv.clusters


def test_adversarial_merges_are_eligible():
    rng = random.Random(9)
    n = 10
    edges = random_sim_graph(rng, n, 20)
    lam = 3
    for seed in range(5):
        res = run_hac(n, edges, "average", theta=1, policy="adversarial",
                      lam=lam, seed=seed)
        members = {v: {v} for v in range(n)}
        for sim, a, b in res.merges:
            wmax = max(
                (brute_cluster_sim(edges, members[x], members[y], "average") or 0)
                for x, y in itertools.combinations(members, 2))
            assert Fraction(sim) * lam >= wmax
            members[a] = members[a] | members[b]
            del members[b]


def test_clusters_at_theta_snapshot():
    edges = [(0, 1, 10), (1, 2, 4), (3, 4, 6)]
    res = run_hac(5, edges, "single", theta=5)
    assert res.clusters == [[0, 1], [2], [3, 4]]
    # Dendrogram still runs to full agglomeration per component.
    assert sorted(map(sorted, map(list, (
        res.dendrogram.contents()[r] for r in res.dendrogram.roots())))) == \
        [[0, 1, 2], [3, 4]]


def test_dendrogram_diff_identical_is_zero():
    n, edges = appendix_pair_gadget(3, with_extra=True)
    a = run_hac(n, edges, "complete", theta=0).dendrogram
    b = run_hac(n, edges, "complete", theta=0).dendrogram
    assert dendrogram_diff(a, b) == 0


def test_dendrogram_diff_leaf_mismatch():
    with pytest.raises(LeafMismatch):
        dendrogram_diff(Dendrogram(3), Dendrogram(4))


def single_star_instability(n):
    """Two stars with odd/even weights; the weight-(n-1) bridge interleaves them."""
    assert n % 2 == 0
    half = n // 2
    c1, c2 = half - 1, half
    edges = []
    for i in range(half - 1):
        edges.append((c1, i, 2 * i + 1))
    for i in range(half - 2, -1, -1):
        edges.append((c2, half + 1 + i, n - 2 - 2 * i))
    return edges, (c1, c2)


def test_single_linkage_instability_fig1():
    n = 6
    edges, (c1, c2) = single_star_instability(n)
    assert sorted(w for _, _, w in edges) == [1, 2, 3, 4]
    before = run_hac(n, edges, "single", theta=0).dendrogram
    after = run_hac(n, edges + [(c1, c2, n - 1)], "single", theta=0).dendrogram
    assert dendro_shape(before) == {
        frozenset((v,)) for v in range(6)
    } | {
        frozenset((1, 2)), frozenset((0, 1, 2)),
        frozenset((3, 4)), frozenset((3, 4, 5)),
    }
    assert dendro_shape(after) == {
        frozenset((v,)) for v in range(6)
    } | {
        frozenset((2, 3)), frozenset((2, 3, 4)), frozenset((1, 2, 3, 4)),
        frozenset((1, 2, 3, 4, 5)), frozenset(range(6)),
    }
    diff = dendrogram_diff(before, after)
    assert diff >= n // 4
