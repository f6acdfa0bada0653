"""Bottleneck and Wasserstein dissimilarities between (signed) barcodes.

An eps-bijection between two barcodes is a bijection moving every bar
by at most eps in the l-infinity norm; the bottleneck distance is the
least such eps, infinite when the cardinalities differ.  The
p-Wasserstein distance instead minimizes the p-norm of the vector of
bar displacements over all bijections.

For signed barcodes B = (B+, B-) and C = (C+, C-), the signed
dissimilarity compares the unions across signs:

    d(B, C) = d(B+ u C-,  C+ u B-)

computed on the pair as given, without reduction.  The signed
1-Wasserstein version is a true (extended) metric on reduced signed
barcodes; the signed bottleneck version fails the triangle inequality
in general and vanishing does not imply equality of reduced forms.

Bottleneck values are found by binary search over the finite candidate
set of pairwise l-infinity distances, testing each threshold with a
maximum-cardinality bipartite matching (Hopcroft-Karp); minimum-cost
matchings use the shortest-augmenting-path algorithm with potentials
on a dense cost matrix.  Ties in the search always resolve to the
smallest feasible candidate, and the returned value is by construction
one of the pairwise distances.
"""

from __future__ import annotations

import itertools
import math
import sys
from collections import deque
from dataclasses import dataclass

import numpy as np

from .algebra import Presentation
from .grades import Barcode, DimensionMismatch, SignedBarcode, _as_barcode, barcode_union

#: Matchings larger than this are refused by the brute-force oracle.
BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class MatchingResult:
    """Distance value plus an optimal matching realizing it.

    ``matching`` lists index pairs ``(i, j)`` into the canonical
    (lexicographically sorted) order of the two compared barcodes; it
    is ``None`` exactly when the value is infinite, which happens
    exactly when the cardinalities differ.
    """

    value: float
    matching: tuple[tuple[int, int], ...] | None

    def to_text(self) -> str:
        if self.matching is None:
            return "value inf\n"
        from .io import fmt_float

        lines = ["value %s" % fmt_float(self.value)]
        lines.append("match %d" % len(self.matching))
        for i, j in self.matching:
            lines.append("%d %d" % (i, j))
        return "\n".join(lines) + "\n"


def _check_pair(b, c) -> tuple[Barcode, Barcode]:
    b = _as_barcode(b)
    c = _as_barcode(c)
    if b.dim is not None and c.dim is not None and b.dim != c.dim:
        raise DimensionMismatch(
            "cannot match barcodes of dimension %d and %d" % (b.dim, c.dim)
        )
    return b, c


def _check_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError("p must be in [1, inf], got %r" % p)
    return p


def _linf_matrix(b: Barcode, c: Barcode) -> np.ndarray:
    A = np.asarray(b.bars, dtype=np.float64)
    B = np.asarray(c.bars, dtype=np.float64)
    return np.abs(A[:, None, :] - B[None, :, :]).max(axis=2)


def _power_cost_matrix(b: Barcode, c: Barcode, p: float) -> np.ndarray:
    A = np.asarray(b.bars, dtype=np.float64)
    B = np.asarray(c.bars, dtype=np.float64)
    diff = np.abs(A[:, None, :] - B[None, :, :])
    if p == 1.0:
        return diff.sum(axis=2)
    return (diff ** p).sum(axis=2)


# ---------------------------------------------------------------------------
# maximum-cardinality bipartite matching (Hopcroft-Karp), deterministic


def _hopcroft_karp(adj: list[list[int]], match_l: list[int], match_r: list[int]) -> None:
    """Augment ``match_l``/``match_r`` in place to a maximum matching."""
    K = len(adj)
    INF = K + 1
    for i in range(K):
        if match_l[i] >= 0:
            continue
        for j in adj[i]:
            if match_r[j] < 0:
                match_l[i] = j
                match_r[j] = i
                break
    dist = [0] * K

    def dfs(i: int) -> bool:
        for j in adj[i]:
            i2 = match_r[j]
            if i2 < 0 or (dist[i2] == dist[i] + 1 and dfs(i2)):
                match_l[i] = j
                match_r[j] = i
                return True
        dist[i] = INF
        return False

    while True:
        q = deque()
        for i in range(K):
            if match_l[i] < 0:
                dist[i] = 0
                q.append(i)
            else:
                dist[i] = INF
        found_free = False
        while q:
            i = q.popleft()
            for j in adj[i]:
                i2 = match_r[j]
                if i2 < 0:
                    found_free = True
                elif dist[i2] == INF:
                    dist[i2] = dist[i] + 1
                    q.append(i2)
        if not found_free:
            return
        for i in range(K):
            if match_l[i] < 0:
                dfs(i)


def _feasible_at(D: np.ndarray, t: float, match_l: list[int], match_r: list[int]) -> bool:
    """Whether a perfect matching exists among pairs with D <= t.

    The match arrays act as a warm start: surviving edges are kept,
    edges above the threshold are dropped before augmenting.
    """
    K = len(match_l)
    for i in range(K):
        j = match_l[i]
        if j >= 0 and D[i, j] > t:
            match_l[i] = -1
            match_r[j] = -1
    adj = [np.flatnonzero(D[i] <= t).tolist() for i in range(K)]
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * K + 1000))
    try:
        _hopcroft_karp(adj, match_l, match_r)
    finally:
        sys.setrecursionlimit(old_limit)
    return all(j >= 0 for j in match_l)


def eps_bijection_exists(b, c, eps: float) -> bool:
    """Whether some bijection moves every bar by at most ``eps`` (l-inf)."""
    b, c = _check_pair(b, c)
    K = len(b)
    if K != len(c):
        return False
    if K == 0:
        return True
    D = _linf_matrix(b, c)
    match_l = [-1] * K
    match_r = [-1] * K
    return _feasible_at(D, eps, match_l, match_r)


def bottleneck(b, c) -> MatchingResult:
    """Bottleneck distance with an optimal matching.

    Returns the smallest pairwise l-infinity distance at which a perfect
    matching exists, located by galloping plus binary search over the
    sorted candidate values; infinite (with no matching) when the
    barcodes have different cardinalities.
    """
    b, c = _check_pair(b, c)
    K = len(b)
    if K != len(c):
        return MatchingResult(math.inf, None)
    if K == 0:
        return MatchingResult(0.0, ())
    D = _linf_matrix(b, c)
    cands = np.unique(D)
    lo_val = max(D.min(axis=1).max(), D.min(axis=0).max())
    li = int(np.searchsorted(cands, lo_val))
    match_l = [-1] * K
    match_r = [-1] * K

    idx = li
    step = 1
    last_fail = li - 1
    while True:
        if _feasible_at(D, cands[idx], match_l, match_r):
            hi = idx
            break
        last_fail = idx
        if idx == len(cands) - 1:
            raise AssertionError("complete candidate graph must be feasible")
        idx = min(idx + step, len(cands) - 1)
        step *= 2
    lo = last_fail + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible_at(D, cands[mid], match_l, match_r):
            hi = mid
        else:
            lo = mid + 1
    if not _feasible_at(D, cands[hi], match_l, match_r):
        raise AssertionError("binary search lost feasibility")
    matching = tuple((i, match_l[i]) for i in range(K))
    return MatchingResult(float(cands[hi]), matching)


# ---------------------------------------------------------------------------
# minimum-cost perfect matching: shortest augmenting paths with potentials


def _min_cost_assignment(C: np.ndarray) -> np.ndarray:
    """Column assigned to each row of the square cost matrix ``C``."""
    n = C.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    assigned = np.zeros(n + 1, dtype=np.int64)  # row held by column; 0 = free
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        assigned[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = assigned[j0]
            cur = C[i0 - 1, :] - u[i0] - v[1:]
            free = ~used[1:]
            better = free & (cur < minv[1:])
            if better.any():
                minv[1:][better] = cur[better]
                way[np.flatnonzero(better) + 1] = j0
            free_idx = np.flatnonzero(free) + 1
            k = int(np.argmin(minv[free_idx]))
            delta = minv[free_idx[k]]
            j1 = int(free_idx[k])
            used_idx = np.flatnonzero(used)
            u[assigned[used_idx]] += delta
            v[used_idx] -= delta
            minv[free_idx] -= delta
            j0 = j1
            if assigned[j0] == 0:
                break
        while j0:
            j1 = int(way[j0])
            assigned[j0] = assigned[j1]
            j0 = j1
    col_of_row = np.zeros(n, dtype=np.int64)
    for j in range(1, n + 1):
        col_of_row[assigned[j] - 1] = j - 1
    return col_of_row


def wasserstein(b, c, p=1) -> MatchingResult:
    """p-Wasserstein distance with an optimal matching.

    Minimizes the sum of p-th powers of coordinatewise displacements
    over all bijections and takes the p-th root; ``p = inf`` delegates
    to :func:`bottleneck`.  Infinite on cardinality mismatch.
    """
    p = _check_p(p)
    if p == math.inf:
        return bottleneck(b, c)
    b, c = _check_pair(b, c)
    K = len(b)
    if K != len(c):
        return MatchingResult(math.inf, None)
    if K == 0:
        return MatchingResult(0.0, ())
    C = _power_cost_matrix(b, c, p)
    col_of_row = _min_cost_assignment(C)
    total = 0.0
    for i in range(K):
        total += float(C[i, col_of_row[i]])
    value = total if p == 1.0 else total ** (1.0 / p)
    matching = tuple((i, int(col_of_row[i])) for i in range(K))
    return MatchingResult(value, matching)


def bottleneck_signed(s1: SignedBarcode, s2: SignedBarcode) -> MatchingResult:
    """Signed bottleneck dissimilarity d(B+ u C-, C+ u B-), unreduced."""
    left = barcode_union(s1.positive, s2.negative)
    right = barcode_union(s2.positive, s1.negative)
    return bottleneck(left, right)


def wasserstein_signed(s1: SignedBarcode, s2: SignedBarcode, p=1) -> MatchingResult:
    """Signed p-Wasserstein dissimilarity d(B+ u C-, C+ u B-), unreduced."""
    p = _check_p(p)
    left = barcode_union(s1.positive, s2.negative)
    right = barcode_union(s2.positive, s1.negative)
    return wasserstein(left, right, p)


def brute_force_matching(b, c, p=1) -> MatchingResult:
    """Exhaustive oracle over all bijections; refuses more than 8 bars.

    Kept deliberately independent of the optimized solvers so the two
    routes can certify each other.
    """
    p = _check_p(p)
    b, c = _check_pair(b, c)
    K = len(b)
    if K != len(c):
        return MatchingResult(math.inf, None)
    if K > BRUTE_FORCE_CAP:
        raise ValueError(
            "brute-force matching capped at %d bars, got %d" % (BRUTE_FORCE_CAP, K)
        )
    if K == 0:
        return MatchingResult(0.0, ())
    if p == math.inf:
        rows = _linf_matrix(b, c).tolist()
    else:
        rows = _power_cost_matrix(b, c, p).tolist()
    best = None
    best_perm = None
    for perm in itertools.permutations(range(K)):
        if p == math.inf:
            cost = max(rows[i][perm[i]] for i in range(K))
        else:
            cost = 0.0
            for i in range(K):
                cost += rows[i][perm[i]]
        if best is None or cost < best:
            best = cost
            best_perm = perm
    if p not in (math.inf, 1.0):
        best = best ** (1.0 / p)
    matching = tuple((i, best_perm[i]) for i in range(K))
    return MatchingResult(float(best), matching)


def presentation_pair_cost(pm: Presentation, pn: Presentation, p=1) -> float:
    """Label displacement cost between presentations sharing a matrix.

    Both presentations must have identical shape, field, and sparse
    entries; only the grade labels may differ.  For ``p = 1`` the cost
    is the sum of l1 displacements over all row and column labels, for
    ``p = inf`` the maximum l-infinity displacement.  This realizes an
    upper bound for the corresponding interleaving-type distance
    between the presented modules.
    """
    p = _check_p(p)
    if p not in (1.0, math.inf):
        raise ValueError("presentation pair cost supports p = 1 or p = inf")
    if pm.field != pn.field:
        raise ValueError("presentations over different fields")
    if pm.num_gens != pn.num_gens or pm.num_rels != pn.num_rels:
        raise ValueError("presentations have different shapes")
    if pm.rels.entries != pn.rels.entries:
        raise ValueError("presentations have different underlying matrices")
    if pm.dim is not None and pn.dim is not None and pm.dim != pn.dim:
        raise DimensionMismatch("presentations of different grade dimensions")
    pairs = list(zip(pm.gens, pn.gens)) + list(
        zip(pm.rels.col_grades, pn.rels.col_grades)
    )
    if not pairs:
        return 0.0
    if p == 1.0:
        return float(sum(sum(abs(x - y) for x, y in zip(a, b)) for a, b in pairs))
    return float(max(max(abs(x - y) for x, y in zip(a, b)) for a, b in pairs))
