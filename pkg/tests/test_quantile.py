import random
from fractions import Fraction

import pytest

from dynmsf import quantile as qs
from dynmsf.graph import DynMsfError

from oracles import rank_of


def exact_summary(items, eps):
    s = qs.from_sorted(sorted(items), eps)
    s.check_wellformed()
    return s


def assert_answers_ok(summary, items, note=""):
    """Every integer rank query lands within the summary's error window."""
    items = sorted(items)
    eps = summary.eps
    for r in range(1, len(items) + 1):
        y = summary.query(r)
        tr = rank_of(items, y)
        lo, hi = r * (1 - eps), r * (1 + eps)
        assert lo <= tr <= hi, f"{note}: rank {r} -> {y} true rank {tr} not in [{lo},{hi}]"


def test_build_matches_hand_construction():
    s = exact_summary(range(1, 9), Fraction(1, 2))
    assert s.elems == [1, 2, 3, 4, 6, 8]
    assert s.rmin == [1, 2, 3, 4, 6, 8]
    assert s.rmax == s.rmin
    assert_answers_ok(s, range(1, 9))


def test_build_singleton():
    s = exact_summary([42], Fraction(1, 3))
    assert s.elems == [42]
    assert s.rmin == [1] and s.rmax == [1]
    assert s.min_element() == 42


def test_build_empty_set_rejected():
    with pytest.raises(qs.EmptySet):
        qs.build(lambda r: r, 0, Fraction(1, 2))


def test_build_quarter_error_large():
    items = list(range(1, 1025))
    s = exact_summary(items, Fraction(1, 4))
    for r in range(1, 1025):
        y = s.query(r)
        assert 3 * r / 4 <= y <= 5 * r / 4  # identity set: element == rank


def test_query_examples():
    s = exact_summary(range(1, 9), Fraction(1, 2))
    assert s.query(5) == 6
    assert s.query(s.count) == 8
    single = exact_summary([7], Fraction(1, 2))
    assert single.query(1) == 7


def test_merge_identity_and_minimum():
    s = exact_summary([5, 9], Fraction(1, 2))
    e = qs.empty_summary(Fraction(1, 2))
    assert qs.merge(s, e) is s
    assert qs.merge(e, s) is s
    other = exact_summary([2, 7], Fraction(1, 2))
    m = qs.merge(s, other)
    m.check_wellformed()
    assert m.min_element() == 2
    assert m.max_element() == 9


def test_merge_exact_pair():
    a = exact_summary([1, 3], Fraction(1, 2))
    b = exact_summary([2, 4], Fraction(1, 2))
    m = qs.merge(a, b)
    m.check_wellformed()
    assert m.elems == [1, 2, 3, 4]
    # Hand-applied predecessor/successor rules:
    #   1: no pred in Q2, succ 2      -> rmin 1, rmax 1+1-1 = 1
    #   2: pred 1, no succ... succ 3 in Q1 -> rmin 1+1, rmax 1+2-1 = 2
    #   3: pred 2, succ 4             -> rmin 2+1, rmax 2+2-1 = 3
    #   4: pred 3, no succ            -> rmin 2+2, rmax 2+2 = 4
    assert m.rmin == [1, 2, 3, 4]
    assert m.rmax == [1, 2, 3, 4]


def test_merge_random_splits_queryable():
    rng = random.Random(7)
    universe = list(range(1, 513))
    for trial in range(100):
        rng.shuffle(universe)
        cut = rng.randrange(1, 512)
        s1 = sorted(universe[:cut])
        s2 = sorted(universe[cut:])
        m = qs.merge(exact_summary(s1, Fraction(1, 4)), exact_summary(s2, Fraction(1, 4)))
        m.check_wellformed()
        assert set(m.elems) <= set(universe)
        for r in rng.sample(range(1, 513), 32):
            y = m.query(r)
            tr = rank_of(sorted(universe), y)
            assert r * Fraction(3, 4) <= tr <= r * Fraction(5, 4)


def test_prune_small_returned_verbatim():
    s = exact_summary(range(1, 5), Fraction(1, 2))
    assert qs.prune(s, 64) is s


def test_prune_constraint_and_queries():
    items = list(range(1, 65))
    s = exact_summary(items, Fraction(1, 8))
    p = qs.prune(s, 4)
    p.check_wellformed()
    assert p.eps == Fraction(1, 8) + Fraction(1, 4)
    assert set(p.elems) <= set(items)
    assert len(p.elems) <= len(s.elems)
    assert_answers_ok(p, items, "prune64")

    items = list(range(1, 257))
    s = exact_summary(items, Fraction(1, 8))
    p = qs.prune(s, 8)
    p.check_wellformed()
    assert_answers_ok(p, items, "prune256")


def test_combine_with_empty_is_prune():
    s = exact_summary(range(1, 65), Fraction(1, 8))
    c = qs.combine(qs.empty_summary(Fraction(1, 8)), s, 4)
    p = qs.prune(s, 4)
    assert c.elems == p.elems and c.eps == p.eps


def test_combine_random_split():
    rng = random.Random(11)
    universe = list(range(1, 129))
    for trial in range(50):
        rng.shuffle(universe)
        cut = rng.randrange(1, 128)
        s1, s2 = sorted(universe[:cut]), sorted(universe[cut:])
        c = qs.combine(exact_summary(s1, Fraction(1, 8)), exact_summary(s2, Fraction(1, 8)), 16)
        c.check_wellformed()
        assert c.eps <= Fraction(1, 8) + Fraction(1, 16)
        assert_answers_ok(c, universe, "combine")


def test_repeated_combine_schedule_stays_below_half():
    # Left-fold combine chain with the budget schedule b(t) used by the tour
    # forests: total error must stay below 1/2 regardless of chain length.
    rng = random.Random(3)
    logn = 4
    pool = rng.sample(range(100_000), 40 * 16)
    blocks = [sorted(pool[i * 16:(i + 1) * 16]) for i in range(40)]
    seen = set(pool)
    acc = exact_summary(blocks[0], Fraction(1, 4))
    t = 0
    for blk in blocks[1:]:
        t += 1
        budget = 8 * logn + -(-8 * t * t // logn)
        acc = qs.combine(acc, exact_summary(blk, Fraction(1, 4)), budget)
    assert acc.eps < Fraction(1, 2)
    acc.check_wellformed()
    merged = sorted(seen)
    for r in range(1, len(merged) + 1):
        y = acc.query(r)
        tr = rank_of(merged, y)
        assert r / 2 <= tr <= 3 * r / 2


def test_determinism():
    items = sorted(random.Random(5).sample(range(10**6), 300))
    a = qs.prune(exact_summary(items, Fraction(1, 4)), 8)
    b = qs.prune(exact_summary(items, Fraction(1, 4)), 8)
    assert a.elems == b.elems and a.rmin == b.rmin and a.rmax == b.rmax and a.eps == b.eps


def test_dump_format():
    s = exact_summary([3, 5], Fraction(1, 2))
    lines = s.dump().splitlines()
    assert lines[0] == "1/2 2"
    assert lines[1] == "3 1 1"
