"""Random subgraph samplers and the random graph process.

Two sampling modes share one generator stack (see rng):

* ``sample_percolation`` keeps each edge independently: edge k is present
  iff the k-th uniform double of the stream is below p, in canonical
  edge-id order.
* ``sample_ordering`` draws a uniform permutation of the edge ids by
  Fisher-Yates shuffle; the process at time i consists of the first i
  edges of the permutation.

Hitting times are indexed from 1: tau = i means the property first holds
after the i-th edge is added.  tau1 is minimum degree one, tau2 is
connectivity, tau3 is a matching of size floor(n / 2).  tau3 is located
by binary search over prefixes with a full matching computation per
probe; an incremental mode re-derives it by augmenting after every edge
and exists to cross-check the binary search.
"""

from dataclasses import dataclass

from .graph_core import ProductGraph
from .matching import _augment_once, _solve
from .rng import Xoshiro256StarStar, split_seeds


@dataclass(frozen=True)
class EdgeOrdering:
    """Uniform random permutation of the edge ids of one product graph."""

    permutation: tuple[int, ...]
    seed: int


@dataclass(frozen=True)
class PercolationSample:
    """Independent bond percolation outcome; mask is indexed by edge id."""

    mask: bytes
    p: float
    seed: int

    @property
    def count(self) -> int:
        return sum(self.mask)

    def edge_ids(self) -> list[int]:
        return [k for k, bit in enumerate(self.mask) if bit]


@dataclass(frozen=True)
class HittingTimes:
    """1-indexed hitting times; tau3 is None when the full graph has no
    matching of the target size."""

    tau1: int
    tau2: int
    tau3: int | None


@dataclass(frozen=True)
class ComponentProfile:
    """Component structure of one percolation sample.

    ``min_isolated_distance`` is the minimum pairwise distance between
    isolated vertices measured in the host graph, capped at 3 (a value
    of 3 means "at least 3"); None when fewer than two vertices are
    isolated.  ``mid_components`` counts components with size in
    [2, giant), i.e. everything that is neither an isolated vertex nor
    as large as the giant.
    """

    sizes: tuple[int, ...]
    giant: int
    isolated: tuple[int, ...]
    min_isolated_distance: int | None
    mid_components: int


class DisjointSet:
    """Union-find with path halving and union by size."""

    __slots__ = ("parent", "size", "components")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


def sample_ordering(pg: ProductGraph, seed: int) -> EdgeOrdering:
    """Uniform edge ordering from the documented generator stack."""
    gen = Xoshiro256StarStar(seed)
    perm = list(range(pg.m))
    gen.shuffle(perm)
    return EdgeOrdering(permutation=tuple(perm), seed=seed)


def sample_percolation(pg: ProductGraph, p: float, seed: int) -> PercolationSample:
    """Keep each edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    gen = Xoshiro256StarStar(seed)
    next_double = gen.next_double
    mask = bytearray(pg.m)
    for k in range(pg.m):
        if next_double() < p:
            mask[k] = 1
    return PercolationSample(mask=bytes(mask), p=p, seed=seed)


def double_exposure(pg: ProductGraph, p: float, seed: int
                    ) -> tuple[PercolationSample, PercolationSample, PercolationSample]:
    """Split G_p into two independent rounds G_p1 and G_p2.

    The second round uses p2 = 1 / d**2 and the first solves
    (1 - p1)(1 - p2) = 1 - p, so the union of the rounds has the law of
    G_p.  Requires p >= p2.  The two round seeds are the first two
    outputs of the splitmix64 sequence started at ``seed``, so each
    round is reproducible on its own.
    """
    if pg.d is None:
        raise ValueError("double exposure needs a regular product")
    p2 = 1.0 / (pg.d * pg.d)
    if p < p2:
        raise ValueError(f"double exposure needs p >= 1/d^2 = {p2}, got {p}")
    p1 = 1.0 - (1.0 - p) / (1.0 - p2)
    seed1, seed2 = split_seeds(seed, 2)
    first = sample_percolation(pg, p1, seed1)
    second = sample_percolation(pg, p2, seed2)
    union_mask = bytes(a | b for a, b in zip(first.mask, second.mask))
    union = PercolationSample(mask=union_mask, p=p, seed=seed)
    return first, second, union


def critical_p(pg: ProductGraph, omega: float = 1.0) -> float:
    """Probability where the expected isolated-vertex count is omega.

    Solves (1 - p)**d = omega / n.  With omega = 1 this is the isolated
    vertex threshold 1 - (1/n)**(1/d).
    """
    if pg.d is None:
        raise ValueError("critical probability needs a regular product")
    if not 0 < omega <= pg.n:
        raise ValueError(f"omega must be in (0, n], got {omega}")
    return 1.0 - (omega / pg.n) ** (1.0 / pg.d)


def _prefix_mask(pg: ProductGraph, permutation, length: int) -> bytearray:
    mask = bytearray(pg.m)
    for i in range(length):
        mask[permutation[i]] = 1
    return mask


def _tau3_bisect(pg: ProductGraph, permutation, target: int) -> int | None:
    """Smallest prefix whose maximum matching reaches ``target``.

    Matchings found at earlier probes are recycled: a matching of a
    shorter prefix is a valid partial matching of any longer prefix, and
    a matching of a longer prefix stays valid after dropping the edges
    beyond the probe.  Feasibility probes stop augmenting at ``target``.
    """
    m = pg.m
    rank = [0] * m
    for pos, eid in enumerate(permutation):
        rank[eid] = pos
    mate_full, size_full = _solve(pg, None, stop_at=target)
    if size_full < target:
        return None
    known: list[tuple[int, list[int]]] = []

    def feasible(length: int) -> bool:
        mask = _prefix_mask(pg, permutation, length)
        best_mate = None
        best_size = -1
        for probed_len, probed_mate in known:
            cand = list(probed_mate)
            if probed_len > length:
                # drop matched edges that lie beyond this prefix
                for v in range(pg.n):
                    w = cand[v]
                    if w > v and rank[pg.edge_id(v, w)] >= length:
                        cand[v] = -1
                        cand[w] = -1
            cand_size = sum(1 for x in cand if x >= 0) // 2
            if cand_size > best_size:
                best_size = cand_size
                best_mate = cand
        mate, size = _solve(pg, mask, mate=best_mate, stop_at=target)
        known.append((length, mate))
        return size >= target

    lo, hi = target, m
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def incremental_matching_sizes(pg: ProductGraph, ordering: EdgeOrdering,
                               stop_at: int | None = None) -> list[int]:
    """Maximum matching size after each prefix of the ordering.

    Maintains a maximum matching and, after each edge arrival, restores
    maximality with at most one augmentation (adding one edge grows the
    maximum by at most one, and any new augmenting path must cross the
    new edge).  Used by the incremental tau3 mode and the monotonicity
    property checks.
    """
    n = pg.n
    mask = bytearray(pg.m)
    mate = [-1] * n
    size = 0
    sizes = []
    for eid in ordering.permutation:
        mask[eid] = 1
        u, v = pg.edges[eid]
        if mate[u] < 0 and mate[v] < 0:
            mate[u] = v
            mate[v] = u
            size += 1
        elif mate[u] < 0 or mate[v] < 0:
            root = u if mate[u] < 0 else v
            if _augment_once(pg, mask, mate, root):
                size += 1
        else:
            for root in range(n):
                if mate[root] < 0 and _augment_once(pg, mask, mate, root):
                    size += 1
                    break
        sizes.append(size)
        if stop_at is not None and size >= stop_at:
            break
    return sizes


def run_process(pg: ProductGraph, ordering: EdgeOrdering,
                tau3_mode: str = "bisect") -> HittingTimes:
    """Hitting times of minimum degree 1, connectivity, and matching."""
    if tau3_mode not in ("bisect", "incremental"):
        raise ValueError(f"unknown tau3 mode: {tau3_mode!r}")
    n = pg.n
    perm = ordering.permutation
    degree = [0] * n
    uncovered = n
    dsu = DisjointSet(n)
    tau1 = None
    tau2 = None
    for i, eid in enumerate(perm, start=1):
        u, v = pg.edges[eid]
        if degree[u] == 0:
            uncovered -= 1
        if degree[v] == 0:
            uncovered -= 1
        degree[u] += 1
        degree[v] += 1
        if tau1 is None and uncovered == 0:
            tau1 = i
        dsu.union(u, v)
        if tau2 is None and dsu.components == 1:
            tau2 = i
        if tau1 is not None and tau2 is not None:
            break
    if tau1 is None or tau2 is None:
        raise AssertionError("process ended before connectivity; ordering incomplete?")

    target = n // 2
    if tau3_mode == "bisect":
        tau3 = _tau3_bisect(pg, perm, target)
    else:
        sizes = incremental_matching_sizes(pg, ordering, stop_at=target)
        tau3 = None
        for i, s in enumerate(sizes, start=1):
            if s >= target:
                tau3 = i
                break
    return HittingTimes(tau1=tau1, tau2=tau2, tau3=tau3)


def component_profile(pg: ProductGraph, sample: PercolationSample) -> ComponentProfile:
    """Component sizes, isolated vertices, and their host-graph spacing."""
    n = pg.n
    dsu = DisjointSet(n)
    for eid, bit in enumerate(sample.mask):
        if bit:
            u, v = pg.edges[eid]
            dsu.union(u, v)
    roots: dict[int, int] = {}
    for v in range(n):
        r = dsu.find(v)
        roots[r] = roots.get(r, 0) + 1
    sizes = tuple(sorted(roots.values(), reverse=True))
    giant = sizes[0]
    isolated = tuple(v for v in range(n) if dsu.size[dsu.find(v)] == 1)
    mid = sum(1 for s in sizes if 2 <= s < giant)
    min_dist = _min_isolated_distance(pg, isolated)
    return ComponentProfile(sizes=sizes, giant=giant, isolated=isolated,
                            min_isolated_distance=min_dist, mid_components=mid)


def _min_isolated_distance(pg: ProductGraph, isolated) -> int | None:
    """Minimum host-graph distance between isolated vertices, capped at 3."""
    if len(isolated) < 2:
        return None
    iso = set(isolated)
    for v in isolated:
        for w in pg.neighbors(v):
            if w in iso:
                return 1
    for v in isolated:
        for u in pg.neighbors(v):
            for w in pg.neighbors(u):
                if w != v and w in iso:
                    return 2
    return 3
