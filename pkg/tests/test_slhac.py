import random

from dynmsf.slhac import SimilarityGraph

from oracles import naive_single_linkage_agglomeration, single_linkage_partition


def build(n, sims, seed=0):
    g = SimilarityGraph(n, seed=seed)
    if sims:
        g.insert_batch(sims)
    return g


def partition_of(g, n, theta):
    groups = g.group_by_cluster(range(n), theta)
    out = {}
    for grp in groups:
        for v in grp:
            out[v] = grp[0]
    return out


def test_path_fixture():
    # a-b-c-d with similarities 5,1,5 at theta=2
    g = build(4, [(0, 1, 5), (1, 2, 1), (2, 3, 5)])
    assert g.same_cluster(0, 1, 2)
    assert not g.same_cluster(1, 2, 2)
    assert g.group_by_cluster([0, 2, 3], 2) == [[0], [2, 3]]
    # Thresholds above every similarity isolate everything.
    assert not g.same_cluster(0, 3, 6)
    assert g.num_clusters(6) == 4
    # At the minimum MSF similarity the whole component is one cluster.
    assert g.same_cluster(0, 3, 1)
    assert g.num_clusters(1) == 1


def test_threshold_equality_merges():
    g = build(2, [(0, 1, 7)])
    assert g.same_cluster(0, 1, 7)      # similarity == theta still merges
    assert not g.same_cluster(0, 1, 8)


def test_group_by_cluster_consistent_with_same_cluster():
    rng = random.Random(3)
    g, sims = random_instance(rng, 24, 60)
    for theta in sorted({s for _, _, s in sims} | {-10**6, 10**6}):
        part = partition_of(g, 24, theta)
        for _ in range(30):
            a, b = rng.randrange(24), rng.randrange(24)
            assert g.same_cluster(a, b, theta) == (part[a] == part[b])


def random_instance(rng, n, m):
    sims = []
    seen = set()
    while len(sims) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        p = (min(a, b), max(a, b))
        if p in seen:
            continue
        seen.add(p)
        sims.append((a, b, rng.randrange(-50, 50)))
    return build(n, sims, seed=rng.randrange(999)), sims


def test_matches_thresholded_union_find_and_naive_agglomeration():
    rng = random.Random(11)
    for trial in range(6):
        n = rng.randrange(8, 33)
        g, sims = random_instance(rng, n, min(n * 2, n * (n - 1) // 2))
        values = sorted({s for _, _, s in sims})
        thetas = values + [v + 1 for v in values] + [values[0] - 1]
        for theta in thetas:
            oracle = single_linkage_partition(n, sims, theta)
            mine = partition_of(g, n, theta)
            assert mine == oracle
            assert g.num_clusters(theta) == len(set(oracle.values()))
        # The O(n^3) direct agglomeration oracle on a few thresholds.
        for theta in rng.sample(thetas, 3):
            slow = naive_single_linkage_agglomeration(n, sims, theta)
            assert partition_of(g, n, theta) == slow


def test_dynamic_updates_keep_query_consistency():
    rng = random.Random(23)
    n = 20
    g = SimilarityGraph(n, seed=5)
    live = {}
    for step in range(40):
        if live and rng.random() < 0.4:
            pair = rng.choice(sorted(live))
            g.delete_batch([pair])
            del live[pair]
        else:
            a, b = rng.randrange(n), rng.randrange(n)
            p = (min(a, b), max(a, b))
            if a == b or p in live:
                continue
            s = rng.randrange(-9, 9)
            live[p] = s
            g.insert_batch([(a, b, s)])
        sims = [(u, v, s) for (u, v), s in live.items()]
        theta = rng.randrange(-9, 10)
        assert partition_of(g, n, theta) == single_linkage_partition(n, sims, theta)


def test_raising_theta_never_merges_groups():
    rng = random.Random(31)
    g, sims = random_instance(rng, 16, 30)
    thetas = sorted({s for _, _, s in sims})
    prev = None
    for theta in thetas:
        part = partition_of(g, 16, theta)
        if prev is not None:
            for a in range(16):
                for b in range(16):
                    if part[a] == part[b]:
                        assert prev[a] == prev[b]
        prev = part
