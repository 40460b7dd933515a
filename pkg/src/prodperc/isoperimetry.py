"""Edge expansion of product graphs: exact profiles and analytic bounds.

``exhaustive_profile`` computes f(k), the minimum edge boundary over all
vertex sets of size k, by walking every subset in Gray-code order so
each step updates the boundary in O(d).  The analytic counterpart is

    f*(k) = max( k * (d - (C - 1) * log_C k),  k * (e / C) * ln(n / k) )

with e Euler's constant and C the largest base-graph order; f* extends
to k > n/2 by the symmetry f(k) = f(n - k) and accepts real arguments
because the component-counting bounds evaluate it at real split points.
The module also provides the exact global minimum cut (maximum adjacency
orderings), exact counts of rooted subtrees against the (e*d)**(k-1)
bound, and a search for sets whose boundary does not exceed a budget.
"""

import heapq
import math
from dataclasses import dataclass

from .graph_core import ProductGraph, TooLargeError


@dataclass(frozen=True)
class BoundParams:
    """Constants feeding the analytic bounds for one (graph, p) pair.

    ``s_threshold`` and ``b_threshold`` are the component-size split
    points n / d**(C**3 / p) and n / d**(C**5 / p), evaluated literally
    (at desk scale they are typically far below 1; the obstruction
    module clamps its working threshold separately).
    """

    n: int
    d: int
    C: int
    p: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if self.d < 1:
            raise ValueError(f"d must be at least 1, got {self.d}")
        if self.C < 2:
            raise ValueError(f"C must be at least 2, got {self.C}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")

    @classmethod
    def from_product(cls, pg: ProductGraph, p: float) -> "BoundParams":
        if pg.d is None:
            raise ValueError("bound parameters need a regular product")
        return cls(n=pg.n, d=pg.d, C=pg.C, p=p)

    def _threshold(self, power: int) -> float:
        # computed in log space; d = 1 degenerates to threshold = n
        exponent = math.log(self.n) - (self.C ** power / self.p) * math.log(self.d)
        return math.exp(exponent)

    @property
    def s_threshold(self) -> float:
        return self._threshold(3)

    @property
    def b_threshold(self) -> float:
        return self._threshold(5)


@dataclass(frozen=True)
class IsoperimetricProfile:
    """Exact f(k) for k in [1, n-1]; witnesses are minimising sets."""

    n: int
    f: tuple[int, ...]
    witnesses: tuple[frozenset, ...] | None = None

    def f_of(self, k: int) -> int:
        if not 1 <= k <= self.n - 1:
            raise ValueError(f"profile index must be in [1, {self.n - 1}], got {k}")
        return self.f[k - 1]


def edge_boundary(pg: ProductGraph, subset, mask=None) -> int:
    """Number of (present) edges with exactly one endpoint in ``subset``."""
    inside = set(subset)
    off, flat, eids = pg.adj_off, pg.adj_flat, pg.adj_eid
    total = 0
    for v in inside:
        for k in range(off[v], off[v + 1]):
            if mask is not None and not mask[eids[k]]:
                continue
            if flat[k] not in inside:
                total += 1
    return total


def exhaustive_profile(pg: ProductGraph, keep_witnesses: bool | None = None) -> IsoperimetricProfile:
    """Exact minimum boundary per size by Gray-code subset enumeration.

    Feasible up to 24 vertices.  Witnesses are kept by default up to 16
    vertices.
    """
    n = pg.n
    if n > 24:
        raise TooLargeError(f"exhaustive profile capped at 24 vertices, got {n}")
    if keep_witnesses is None:
        keep_witnesses = n <= 16
    nbr = [0] * n
    for u, v in pg.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    deg = [pg.degree_of(v) for v in range(n)]
    best = [None] * (n + 1)
    wit = [None] * (n + 1) if keep_witnesses else None
    subset = 0
    boundary = 0
    size = 0
    for i in range(1, 1 << n):
        bit = i & -i
        v = bit.bit_length() - 1
        if subset & bit:
            subset ^= bit
            size -= 1
            inside = (nbr[v] & subset).bit_count()
            boundary += 2 * inside - deg[v]
        else:
            inside = (nbr[v] & subset).bit_count()
            boundary += deg[v] - 2 * inside
            subset |= bit
            size += 1
        if 1 <= size <= n - 1:
            if best[size] is None or boundary < best[size]:
                best[size] = boundary
                if keep_witnesses:
                    wit[size] = subset
    f = tuple(best[1:n])
    witnesses = None
    if keep_witnesses:
        witnesses = tuple(frozenset(v for v in range(n) if w >> v & 1) for w in wit[1:n])
    return IsoperimetricProfile(n=n, f=f, witnesses=witnesses)


def f_star(params: BoundParams, k: float) -> float:
    """Analytic lower bound for the boundary of a k-set.

    Defined for real k in (0, n); arguments above n/2 fold onto n - k by
    the boundary symmetry.
    """
    n, d, C = params.n, params.d, params.C
    if not 0 < k < n:
        raise ValueError(f"f_star argument must be in (0, n), got {k}")
    k = min(k, n - k)
    degree_branch = k * (d - (C - 1) * math.log(k, C))
    expansion_branch = k * (math.e / C) * math.log(n / k)
    return max(degree_branch, expansion_branch)


def f_star_s(params: BoundParams, ell2: int, s: float) -> float:
    """Boundary bound for ell2 mid-size components with s vertices total.

    Value: 3 * (d - 1) * (ell2 - 1) + f*(s - 3 * (ell2 - 1)).
    """
    if ell2 < 1:
        raise ValueError(f"ell2 must be at least 1, got {ell2}")
    if s < 3 * ell2:
        raise ValueError(f"need s >= 3 * ell2, got s={s}, ell2={ell2}")
    return 3.0 * (params.d - 1) * (ell2 - 1) + f_star(params, s - 3.0 * (ell2 - 1))


def f_star_b(params: BoundParams, ell3: int, b: float) -> float:
    """Boundary bound for ell3 large components with b vertices total.

    Value: (ell3 - 1) * n * ln(d) / d**(C**3/p)
           + min(n / C, f*(b - (ell3 - 1) * n / d**(C**3/p))).
    """
    if ell3 < 1:
        raise ValueError(f"ell3 must be at least 1, got {ell3}")
    threshold = params.s_threshold
    if b < ell3 * threshold or b <= 0:
        raise ValueError(f"need b >= ell3 * threshold ({ell3 * threshold:.6g}) and b > 0, got {b}")
    lead = (ell3 - 1) * threshold * math.log(params.d)
    rest = b - (ell3 - 1) * threshold
    return lead + min(params.n / params.C, f_star(params, rest))


def edge_connectivity(pg: ProductGraph) -> int:
    """Exact global minimum edge cut via maximum adjacency orderings."""
    n = pg.n
    if n < 2:
        raise ValueError("edge connectivity needs at least 2 vertices")
    # check connectivity first: a disconnected input is a caller error
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    reached = 1
    while stack:
        u = stack.pop()
        for w in pg.neighbors(u):
            if not seen[w]:
                seen[w] = 1
                reached += 1
                stack.append(w)
    if reached != n:
        raise ValueError("edge connectivity is undefined here: graph is disconnected")

    weights: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for u, v in pg.edges:
        weights[u][v] = weights[u].get(v, 0) + 1
        weights[v][u] = weights[v].get(u, 0) + 1
    active = set(range(n))
    best = math.inf
    while len(active) > 1:
        start = next(iter(active))
        in_order = {start}
        attach = {v: w for v, w in weights[start].items()}
        heap = [(-w, v) for v, w in attach.items()]
        heapq.heapify(heap)
        order = [start]
        last_weight = 0
        while len(in_order) < len(active):
            while True:
                negw, v = heapq.heappop(heap)
                if v not in in_order and attach.get(v, 0) == -negw:
                    break
            in_order.add(v)
            order.append(v)
            last_weight = -negw
            for u, w in weights[v].items():
                if u not in in_order:
                    attach[u] = attach.get(u, 0) + w
                    heapq.heappush(heap, (-attach[u], u))
        t = order[-1]
        s = order[-2]
        best = min(best, last_weight)
        # merge t into s
        for u, w in weights[t].items():
            if u == s:
                continue
            weights[s][u] = weights[s].get(u, 0) + w
            weights[u][s] = weights[u].get(s, 0) + w
        for u in weights[t]:
            del weights[u][t]
        del weights[t]
        active.remove(t)
    return int(best)


def _int_det(matrix: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    size = len(matrix)
    if size == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for i in range(size - 1):
        if m[i][i] == 0:
            pivot = next((r for r in range(i + 1, size) if m[r][i] != 0), None)
            if pivot is None:
                return 0
            m[i], m[pivot] = m[pivot], m[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = m[i][i]
    return sign * m[size - 1][size - 1]


def _spanning_tree_count(pg: ProductGraph, vertices: tuple[int, ...]) -> int:
    """Spanning trees of the induced subgraph (matrix-tree theorem)."""
    k = len(vertices)
    if k == 1:
        return 1
    index = {v: i for i, v in enumerate(vertices)}
    lap = [[0] * k for _ in range(k)]
    for i, v in enumerate(vertices):
        for w in pg.neighbors(v):
            j = index.get(w)
            if j is not None:
                lap[i][j] -= 1
                lap[i][i] += 1
    reduced = [row[:-1] for row in lap[:-1]]
    return _int_det(reduced)


def count_rooted_trees(pg: ProductGraph, root: int, k: int) -> int:
    """Exact number of k-vertex subtrees of the graph containing ``root``.

    Sums spanning-tree counts over all connected k-sets containing the
    root.  Feasible for k up to about 7.
    """
    if k < 1:
        raise ValueError(f"tree size must be at least 1, got {k}")
    if k > 7:
        raise ValueError(f"rooted tree counting capped at k = 7, got {k}")
    total = 0
    for subset in _connected_ksets(pg, root, k):
        total += _spanning_tree_count(pg, subset)
    return total


def _connected_ksets(pg: ProductGraph, root: int, k: int):
    """All connected vertex sets of size k containing ``root``.

    Standard growth enumeration: each branch picks one frontier vertex
    and bans it from later branches of the same node, so every set is
    produced exactly once.
    """
    results: list[tuple[int, ...]] = []

    def grow(current: set, banned: set):
        if len(current) == k:
            results.append(tuple(sorted(current)))
            return
        frontier = []
        seen_local = set()
        for v in current:
            for w in pg.neighbors(v):
                if w not in current and w not in banned and w not in seen_local:
                    seen_local.add(w)
                    frontier.append(w)
        local_ban = set()
        for w in sorted(frontier):
            current.add(w)
            grow(current, banned | local_ban)
            current.remove(w)
            local_ban.add(w)

    grow({root}, set())
    return results


def rooted_tree_bound(d: int, k: int) -> float:
    """The analytic ceiling (e * d) ** (k - 1) for rooted subtree counts."""
    return (math.e * d) ** (k - 1)


def find_bad_expansion_sets(pg: ProductGraph, size: int, budget: float) -> list[frozenset]:
    """All vertex sets of the given size whose boundary does not exceed
    the budget (exhaustive; n <= 20)."""
    n = pg.n
    if n > 20:
        raise TooLargeError(f"bad-expansion search capped at 20 vertices, got {n}")
    if not 1 <= size <= n:
        raise ValueError(f"set size must be in [1, {n}], got {size}")
    from itertools import combinations
    nbr = [0] * n
    for u, v in pg.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    out = []
    for combo in combinations(range(n), size):
        chosen = 0
        for v in combo:
            chosen |= 1 << v
        boundary = 0
        for v in combo:
            boundary += (nbr[v] & ~chosen).bit_count()
        if boundary <= budget:
            out.append(frozenset(combo))
    return out
