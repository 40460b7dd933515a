"""Tutte-style obstructions to perfect matchings in percolated products.

For a vertex set U, look at the components of the sampled subgraph with
U removed.  U is an obstruction when at least |U| + 1 of those
components have size different from two.  Components are banded by
size: V1 collects the size-1 components, W the size-2 components, S the
components with size in [3, threshold], and B everything larger.  The
default threshold is max(3, floor(n / d**(C**3 / p))): the analytic
split point is far below 3 at desk scale, and sizes below 3 would make
the S band empty by definition.

A minimal obstruction is one of the globally smallest size.  Two
structural checks accompany the enumeration:

* three-component property: for a minimal obstruction with u >= 2,
  every vertex of U has sampled neighbours in at least three distinct
  components of the subgraph induced on V1 + S + B (size-1 obstructions
  are outside the property's scope and reported as skipped);
* determination: grouping minimal obstructions by their W + S + B
  vertex set, no group may contain more than two obstructions (again
  for u >= 2).
"""

import math
from dataclasses import dataclass, replace
from itertools import combinations

from .graph_core import ProductGraph
from .matching import (brute_deficiency, components_from_bitmasks,
                       maximum_matching, _neighbor_bitmasks)
from .process import PercolationSample


@dataclass(frozen=True)
class ObstructionRecord:
    """Classification of one removal set U against one sample."""

    u_set: frozenset
    threshold: float
    components: tuple[frozenset, ...]
    v1: frozenset
    w_set: frozenset
    s_set: frozenset
    b_set: frozenset
    ell1: int
    ell2: int
    ell3: int
    is_obstruction: bool
    is_trivial: bool
    is_minimal: bool | None = None

    @property
    def u(self) -> int:
        return len(self.u_set)

    @property
    def ell(self) -> int:
        return self.ell1 + self.ell2 + self.ell3

    @property
    def w_count(self) -> int:
        return len(self.w_set) // 2

    def wsb_key(self) -> frozenset:
        return self.w_set | self.s_set | self.b_set


@dataclass(frozen=True)
class ThreeComponentReport:
    """Outcome of the three-component check on one record."""

    checked_vertices: int
    skipped_out_of_scope: bool
    counterexamples: tuple[tuple[int, int], ...]  # (vertex, components seen)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


@dataclass(frozen=True)
class DeterminationReport:
    """W+S+B group sizes over the minimal obstructions of one sample."""

    minimal_size: int | None
    group_count: int
    max_group: int
    out_of_scope: bool
    violating_groups: tuple[frozenset, ...]

    @property
    def ok(self) -> bool:
        return not self.violating_groups


@dataclass(frozen=True)
class DeficiencyReport:
    """Cross-checks between the matching solver and subset enumeration."""

    deficiency: int
    brute: int
    isolated_count: int
    giant: int
    non_giant_all_isolated: bool
    obstruction_free: bool | None
    structure_consistent: bool | None

    @property
    def ok(self) -> bool:
        if self.deficiency != self.brute:
            return False
        return self.structure_consistent is not False


def default_threshold(pg: ProductGraph, p: float) -> int:
    """Working S/B split: max(3, floor(n / d**(C**3 / p)))."""
    if pg.d is None:
        raise ValueError("threshold needs a regular product")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    exponent = math.log(pg.n) - (pg.C ** 3 / p) * math.log(pg.d)
    analytic = math.exp(exponent)
    return max(3, math.floor(analytic))


def classify_removal(pg: ProductGraph, sample: PercolationSample, u_set,
                     threshold: float | None = None) -> ObstructionRecord:
    """Band the components of the sample with ``u_set`` removed."""
    u_frozen = frozenset(u_set)
    if not u_frozen:
        raise ValueError("removal set must be nonempty")
    if any(not 0 <= v < pg.n for v in u_frozen):
        raise ValueError("removal set contains an out-of-range vertex")
    if threshold is None:
        threshold = default_threshold(pg, sample.p)
    nbr = _neighbor_bitmasks(pg, sample.mask)
    u_mask = 0
    for v in u_frozen:
        u_mask |= 1 << v
    avail = ((1 << pg.n) - 1) & ~u_mask
    comp_masks = components_from_bitmasks(nbr, avail)
    return _record_from_components(pg, u_frozen, comp_masks, threshold)


def _record_from_components(pg: ProductGraph, u_frozen: frozenset,
                            comp_masks: list[int], threshold: float) -> ObstructionRecord:
    comps = []
    v1_bits = 0
    w_bits = 0
    s_bits = 0
    b_bits = 0
    ell1 = ell2 = ell3 = 0
    for comp in comp_masks:
        size = comp.bit_count()
        comps.append(comp)
        if size == 1:
            ell1 += 1
            v1_bits |= comp
        elif size == 2:
            w_bits |= comp
        elif size <= threshold:
            ell2 += 1
            s_bits |= comp
        else:
            ell3 += 1
            b_bits |= comp
    u = len(u_frozen)
    ell = ell1 + ell2 + ell3
    is_obstruction = ell >= u + 1
    is_trivial = is_obstruction and ell == u + 1 and ell1 == u and ell2 + ell3 == 1

    def unpack(bits: int) -> frozenset:
        return frozenset(i for i in range(pg.n) if bits >> i & 1)

    return ObstructionRecord(
        u_set=u_frozen, threshold=threshold,
        components=tuple(unpack(c) for c in comp_masks),
        v1=unpack(v1_bits), w_set=unpack(w_bits), s_set=unpack(s_bits), b_set=unpack(b_bits),
        ell1=ell1, ell2=ell2, ell3=ell3,
        is_obstruction=is_obstruction, is_trivial=is_trivial)


def find_minimal_obstructions(pg: ProductGraph, sample: PercolationSample,
                              u_max: int = 4,
                              threshold: float | None = None) -> list[ObstructionRecord]:
    """All obstructions of the globally smallest size, by enumeration.

    Scans |U| = 1, 2, ... and stops at the first size admitting any
    obstruction; an empty result means no obstruction exists with size
    up to ``u_max``.  Sizes above (n - 1) / 2 can never obstruct (there
    are not enough remaining vertices for |U| + 1 components), so the
    scan is cut there.  Enumeration cost is sum of C(n, u), hence the
    precondition n <= 16 or u_max <= 3.
    """
    n = pg.n
    if n > 16 and u_max > 3:
        raise ValueError(f"enumeration needs n <= 16 or u_max <= 3 (n={n}, u_max={u_max})")
    if threshold is None:
        threshold = default_threshold(pg, sample.p)
    nbr = _neighbor_bitmasks(pg, sample.mask)
    all_mask = (1 << n) - 1
    effective_max = min(u_max, (n - 1) // 2)
    for u in range(1, effective_max + 1):
        found = []
        for combo in combinations(range(n), u):
            u_bits = 0
            for v in combo:
                u_bits |= 1 << v
            comp_masks = components_from_bitmasks(nbr, all_mask & ~u_bits)
            not_two = sum(1 for c in comp_masks if c.bit_count() != 2)
            if not_two >= u + 1:
                record = _record_from_components(pg, frozenset(combo), comp_masks, threshold)
                found.append(record)
        if found:
            return [replace(record, is_minimal=True) for record in found]
    return []


def verify_three_components(pg: ProductGraph, sample: PercolationSample,
                            record: ObstructionRecord,
                            adjacency: str = "sample") -> ThreeComponentReport:
    """Check that every vertex of a minimal obstruction sees three
    components of the subgraph induced on V1 + S + B.

    ``adjacency`` selects which edges count as seeing a component:
    "sample" (default) uses the sampled edges, "host" uses every edge of
    the product graph.  Minimal obstructions of size 1 are outside the
    property's scope and are reported as skipped, not as failures.
    """
    if adjacency not in ("sample", "host"):
        raise ValueError(f"unknown adjacency mode: {adjacency!r}")
    if not record.is_minimal:
        raise ValueError("three-component check applies to minimal obstructions")
    if record.u < 2:
        return ThreeComponentReport(checked_vertices=0, skipped_out_of_scope=True,
                                    counterexamples=())
    comp_of = {}
    for idx, comp in enumerate(record.components):
        if len(comp) != 2:
            for v in comp:
                comp_of[v] = idx
    counterexamples = []
    for v in sorted(record.u_set):
        seen = set()
        off, flat, eids = pg.adj_off, pg.adj_flat, pg.adj_eid
        for k in range(off[v], off[v + 1]):
            if adjacency == "sample" and not sample.mask[eids[k]]:
                continue
            idx = comp_of.get(flat[k])
            if idx is not None:
                seen.add(idx)
        if len(seen) < 3:
            counterexamples.append((v, len(seen)))
    return ThreeComponentReport(checked_vertices=record.u,
                                skipped_out_of_scope=False,
                                counterexamples=tuple(counterexamples))


def verify_determination(pg: ProductGraph, sample: PercolationSample,
                         u_max: int = 4,
                         threshold: float | None = None,
                         minimal: list[ObstructionRecord] | None = None) -> DeterminationReport:
    """Group minimal obstructions by W+S+B and flag groups above two.

    The bound is only claimed for minimal size u >= 2; with u = 1 the
    report is marked out of scope (size-1 obstructions sharing a W+S+B
    set are unconstrained).
    """
    if minimal is None:
        minimal = find_minimal_obstructions(pg, sample, u_max=u_max, threshold=threshold)
    if not minimal:
        return DeterminationReport(minimal_size=None, group_count=0, max_group=0,
                                   out_of_scope=False, violating_groups=())
    u = minimal[0].u
    groups: dict[frozenset, int] = {}
    for record in minimal:
        key = record.wsb_key()
        groups[key] = groups.get(key, 0) + 1
    max_group = max(groups.values())
    if u < 2:
        return DeterminationReport(minimal_size=u, group_count=len(groups),
                                   max_group=max_group, out_of_scope=True,
                                   violating_groups=())
    violating = tuple(key for key, count in groups.items() if count > 2)
    return DeterminationReport(minimal_size=u, group_count=len(groups),
                               max_group=max_group, out_of_scope=False,
                               violating_groups=violating)


def deficiency_consistency(pg: ProductGraph, sample: PercolationSample,
                           u_max: int | None = None) -> DeficiencyReport:
    """Cross-check the solver deficiency against subset enumeration.

    Always checks solver deficiency == brute maximum of
    odd(G - U) - |U|.  When the sample has no obstruction of any size
    (the scan up to (n - 1) / 2 is exhaustive: an obstruction needs
    u + 1 components on n - u vertices) and every non-giant component
    is an isolated vertex, additionally checks the structural
    prediction deficiency == (non-giant component count) + (giant
    parity): obstruction-freeness forces the giant to carry a
    perfect or near-perfect matching.
    """
    n = pg.n
    if n > 16:
        raise ValueError(f"deficiency consistency capped at 16 vertices, got {n}")
    deficiency = n - 2 * maximum_matching(pg, sample.mask).size
    brute = brute_deficiency(pg, sample.mask)
    nbr = _neighbor_bitmasks(pg, sample.mask)
    comp_masks = components_from_bitmasks(nbr, (1 << n) - 1)
    sizes = sorted((c.bit_count() for c in comp_masks), reverse=True)
    giant = sizes[0]
    isolated_count = sum(1 for s in sizes if s == 1)
    non_giant_all_isolated = all(s == 1 for s in sizes[1:])
    scan_cap = (n - 1) // 2
    obstruction_free: bool | None = None
    structure_consistent: bool | None = None
    if u_max is None or u_max >= scan_cap:
        minimal = find_minimal_obstructions(pg, sample, u_max=scan_cap)
        obstruction_free = not minimal
        if obstruction_free and non_giant_all_isolated:
            structure_consistent = deficiency == (len(sizes) - 1) + giant % 2
    return DeficiencyReport(deficiency=deficiency, brute=brute,
                            isolated_count=isolated_count, giant=giant,
                            non_giant_all_isolated=non_giant_all_isolated,
                            obstruction_free=obstruction_free,
                            structure_consistent=structure_consistent)
