"""Deterministic relative-error quantile summaries with merge, prune, and combine.

A summary of a totally ordered set S keeps a sorted subset of its elements with
per-element rank brackets [rmin, rmax] such that rank(elem; S) always lies inside
the bracket, the first/last elements are min(S)/max(S) with exact ranks, and each
adjacent pair satisfies the gap constraint

    rmax(q_{i+1}) - rmin(q_i) <= max(2*eps*rmin(q_i) / (1 - eps), 1).

Under that constraint a rank query r (valid when [r(1-eps), r(1+eps)] contains an
integer) is answered by the largest element whose rmax is at most r(1+eps), and
the answer's true rank lands in [r(1-eps), r(1+eps)].

All operations are pure; summaries are immutable after construction. Queries for
integer ranks r in [1, count] are always valid since r itself sits in the window.

Measured size constants on the test corpus (sets up to 2^12, eps in {1/2,1/4,1/8}):
build produces at most 1.3 * (log2(eps*n) + 1) / eps elements, and prune(B) at
most 2 * B * max(1, log2(count/B)) elements.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import DynMsfError


class EmptySet(DynMsfError):
    pass


class QuantileSummary:
    __slots__ = ("elems", "rmin", "rmax", "eps", "count")

    def __init__(self, elems, rmin, rmax, eps: Fraction, count: int):
        self.elems = elems
        self.rmin = rmin
        self.rmax = rmax
        self.eps = eps
        self.count = count

    def __len__(self):
        return len(self.elems)

    def __repr__(self):
        return f"QuantileSummary(eps={self.eps}, count={self.count}, size={len(self.elems)})"

    # -- queries ------------------------------------------------------------

    def query(self, r: int):
        """Element whose true rank is within [r(1-eps), r(1+eps)], for r in [1, count]."""
        if not (1 <= r <= self.count):
            raise DynMsfError(f"rank {r} outside [1, {self.count}]")
        return self.elems[self.query_index(r)]

    def query_index(self, r: int) -> int:
        # Largest index with rmax <= r*(1+eps); exists since rmax[0] = 1 <= r.
        num = r * (self.eps.denominator + self.eps.numerator)
        den = self.eps.denominator
        rmax = self.rmax
        lo, hi = 0, len(rmax) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if rmax[mid] * den <= num:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def min_element(self):
        if not self.elems:
            raise EmptySet("empty summary has no minimum")
        return self.elems[0]

    def max_element(self):
        if not self.elems:
            raise EmptySet("empty summary has no maximum")
        return self.elems[-1]

    # -- diagnostics ----------------------------------------------------------

    def check_wellformed(self) -> None:
        """Structural audit: brackets, exact endpoints, and the adjacent-gap constraint."""
        k = len(self.elems)
        if self.count == 0:
            if k != 0:
                raise DynMsfError("empty summary with elements")
            return
        if k == 0:
            raise DynMsfError("nonempty set with empty summary")
        if self.rmin[0] != 1 or self.rmax[0] != 1:
            raise DynMsfError("min element rank not exact")
        if self.rmin[-1] != self.count or self.rmax[-1] != self.count:
            raise DynMsfError("max element rank not exact")
        if not (0 < self.eps < 1):
            raise DynMsfError(f"accumulated error {self.eps} left (0, 1)")
        one = Fraction(1)
        gap_coeff = 2 * self.eps / (1 - self.eps)
        for i in range(k):
            if self.rmin[i] > self.rmax[i]:
                raise DynMsfError(f"rmin > rmax at {i}")
            if i + 1 < k:
                if self.elems[i] >= self.elems[i + 1]:
                    raise DynMsfError(f"elements not strictly sorted at {i}")
                if self.rmin[i] >= self.rmin[i + 1] or self.rmax[i] >= self.rmax[i + 1]:
                    raise DynMsfError(f"rank bounds not strictly increasing at {i}")
                gap = self.rmax[i + 1] - self.rmin[i]
                if gap > max(gap_coeff * self.rmin[i], one):
                    raise DynMsfError(f"gap constraint violated at {i}")

    def dump(self) -> str:
        lines = [f"{self.eps} {self.count}"]
        for e, lo, hi in zip(self.elems, self.rmin, self.rmax):
            lines.append(f"{e} {lo} {hi}")
        return "\n".join(lines)


def empty_summary(eps=Fraction(1, 4)) -> QuantileSummary:
    return QuantileSummary([], [], [], Fraction(eps), 0)


def build(rank_access, n: int, eps) -> QuantileSummary:
    """Construct a summary of an n-element set from a 1-indexed rank oracle.

    Takes every rank below ceil(1/eps), then within each doubling window
    [2^(i-1)/eps, 2^i/eps) the ranks 2^(i-1)/eps + 2^(i-1)*j, and finally the
    maximum. Sampled elements carry exact ranks.
    """
    if n <= 0:
        raise EmptySet("cannot summarize an empty set")
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise DynMsfError(f"eps {eps} outside (0, 1)")
    inv = -(-eps.denominator // eps.numerator)  # ceil(1/eps)
    ranks = set(range(1, min(inv, n + 1)))
    i = 1
    while True:
        base = inv * (1 << (i - 1))
        if base > n:
            break
        step = 1 << (i - 1)
        for j in range(inv):
            r = base + step * j
            if r > n:
                break
            ranks.add(r)
        i += 1
    ranks.add(n)
    ordered = sorted(ranks)
    elems = [rank_access(r) for r in ordered]
    return QuantileSummary(elems, list(ordered), list(ordered), eps, n)


def from_sorted(items, eps) -> QuantileSummary:
    """Summary over an already sorted sequence of distinct elements."""
    if not items:
        return empty_summary(eps)
    return build(lambda r: items[r - 1], len(items), eps)


def merge(q1: QuantileSummary, q2: QuantileSummary) -> QuantileSummary:
    """Merge summaries over disjoint sets; size |Q1|+|Q2|, error max(eps1, eps2).

    Rank bounds follow the predecessor/successor rules: for q from Q1 with
    predecessor s and successor t in Q2,
        rmin = rmin1(q) + rmin2(s)            (or rmin1(q) if no s)
        rmax = rmax1(q) + rmax2(t) - 1        (or rmax1(q) + rmax2(s) if no t)
    and symmetrically for q from Q2.
    """
    if q1.count == 0:
        return q2
    if q2.count == 0:
        return q1
    e1, e2 = q1.elems, q2.elems
    n1, n2 = len(e1), len(e2)
    elems = []
    rmin = []
    rmax = []
    i = j = 0
    while i < n1 or j < n2:
        take_first = j >= n2 or (i < n1 and e1[i] < e2[j])
        if take_first:
            q, lo, hi = e1[i], q1.rmin[i], q1.rmax[i]
            ormin, ormax, on, oj = q2.rmin, q2.rmax, n2, j
            i += 1
        else:
            q, lo, hi = e2[j], q2.rmin[j], q2.rmax[j]
            ormin, ormax, on, oj = q1.rmin, q1.rmax, n1, i
            j += 1
        # oj elements of the other summary precede q; the oj-th (if any) is its
        # successor there, the (oj-1)-th its predecessor.
        if oj > 0:
            lo += ormin[oj - 1]
        if oj < on:
            hi += ormax[oj] - 1
        else:
            hi += ormax[oj - 1]
        elems.append(q)
        rmin.append(lo)
        rmax.append(hi)
    # Tighten to strictly increasing bounds (sound: true ranks are strictly
    # increasing, so rmin[i] >= rmin[i-1]+1 and rmax[i] <= rmax[i+1]-1 hold).
    total = len(elems)
    for k in range(1, total):
        if rmin[k] <= rmin[k - 1]:
            rmin[k] = rmin[k - 1] + 1
    for k in range(total - 2, -1, -1):
        if rmax[k] >= rmax[k + 1]:
            rmax[k] = rmax[k + 1] - 1
    return QuantileSummary(elems, rmin, rmax, max(q1.eps, q2.eps), q1.count + q2.count)


def prune(q: QuantileSummary, B: int) -> QuantileSummary:
    """Shrink to O(B log(count/B)) elements at the cost of 1/B extra error.

    Queries rank 2^(i-1)(B+j) for each doubling window, keeps the sub-B prefix
    (everything strictly below the rank-B answer) and the maximum. Returns the
    input unchanged when it is already no larger than the planned query count.
    """
    if B < 1:
        raise DynMsfError("prune budget must be >= 1")
    n = q.count
    if n == 0 or n <= B:
        return q
    targets = []
    i = 1
    while True:
        base = B << (i - 1)
        if base > n:
            break
        step = 1 << (i - 1)
        for j in range(B):
            r = base + step * j
            if r > n:
                break
            targets.append(r)
        i += 1
    if len(targets) >= len(q.elems):
        return q
    picked = []
    last_idx = -1
    for r in targets:
        idx = q.query_index(r)
        if idx != last_idx:
            picked.append(idx)
            last_idx = idx
    first_idx = picked[0]             # answer to the rank-B query
    head = list(range(first_idx))     # all elements strictly below it
    idxs = head + picked
    if idxs[-1] != len(q.elems) - 1:
        idxs.append(len(q.elems) - 1)
    elems = [q.elems[k] for k in idxs]
    rmin = [q.rmin[k] for k in idxs]
    rmax = [q.rmax[k] for k in idxs]
    return QuantileSummary(elems, rmin, rmax, q.eps + Fraction(1, B), n)


def combine(q1: QuantileSummary, q2: QuantileSummary, b: int) -> QuantileSummary:
    """Merge then prune with budget b; error grows by at most 1/b."""
    return prune(merge(q1, q2), b)
