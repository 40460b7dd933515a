"""Regular base graphs and their Cartesian products.

A product graph is assembled from a list of small connected regular base
graphs.  Vertices of the product are encoded in mixed radix: digit i of a
vertex id is its coordinate in base graph i, with digit 0 least
significant.  Two product vertices are adjacent when they differ in
exactly one coordinate and that pair of digits is an edge of the
corresponding base graph.  Edges carry canonical ids: sort all pairs
(u, v) with u < v lexicographically and number them from 0.

The module also hosts the edge-list file parser, the size cap that
protects against accidentally huge products, and a bipartiteness probe
used by the parity checks.
"""

import math
import os
from dataclasses import dataclass, field

DEFAULT_MAX_VERTICES = 1 << 26
MAX_VERTICES_ENV = "PPL_MAX_VERTICES"


class GraphBuildError(ValueError):
    """Base class for graph construction and validation failures."""


class MalformedEdgeListError(GraphBuildError):
    """Edge-list input violates the file format."""


class NonRegularError(GraphBuildError):
    """Base graph is not regular."""


class DisconnectedError(GraphBuildError):
    """Graph is not connected."""


class TooSmallError(GraphBuildError):
    """Base graph order must exceed 1."""


class TooLargeError(GraphBuildError):
    """Requested structure exceeds the configured size cap."""


def max_vertices_cap() -> int:
    """Vertex cap for products: PPL_MAX_VERTICES overrides the default."""
    raw = os.environ.get(MAX_VERTICES_ENV)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        cap = int(raw)
    except ValueError as exc:
        raise TooLargeError(f"{MAX_VERTICES_ENV} must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise TooLargeError(f"{MAX_VERTICES_ENV} must be at least 2, got {cap}")
    return cap


@dataclass(frozen=True)
class BaseGraphSpec:
    """Declarative description of one base graph.

    Kinds: complete(m), cycle(m), complete_bipartite_balanced(r),
    petersen, circulant(m, offsets), edge_list(path).  Circulant offsets
    must be distinct, nonzero modulo m, and closed under negation modulo
    m, so the connection set is symmetric and the graph is
    |offsets|-regular.
    """

    kind: str
    m: int | None = None
    r: int | None = None
    offsets: tuple[int, ...] | None = None
    path: str | None = None

    KINDS = ("complete", "cycle", "complete_bipartite_balanced", "petersen", "circulant", "edge_list")

    @classmethod
    def complete(cls, m: int) -> "BaseGraphSpec":
        return cls(kind="complete", m=m)

    @classmethod
    def cycle(cls, m: int) -> "BaseGraphSpec":
        return cls(kind="cycle", m=m)

    @classmethod
    def complete_bipartite_balanced(cls, r: int) -> "BaseGraphSpec":
        return cls(kind="complete_bipartite_balanced", r=r)

    @classmethod
    def petersen(cls) -> "BaseGraphSpec":
        return cls(kind="petersen")

    @classmethod
    def circulant(cls, m: int, offsets) -> "BaseGraphSpec":
        return cls(kind="circulant", m=m, offsets=tuple(sorted(offsets)))

    @classmethod
    def edge_list(cls, path: str) -> "BaseGraphSpec":
        return cls(kind="edge_list", path=str(path))

    @classmethod
    def from_dict(cls, data: dict) -> "BaseGraphSpec":
        if not isinstance(data, dict):
            raise GraphBuildError(f"base spec must be an object, got {type(data).__name__}")
        kind = data.get("kind")
        if kind not in cls.KINDS:
            raise GraphBuildError(f"unknown base graph kind: {kind!r}")
        allowed = {"complete": {"m"}, "cycle": {"m"}, "complete_bipartite_balanced": {"r"},
                   "petersen": set(), "circulant": {"m", "offsets"}, "edge_list": {"path"}}[kind]
        extra = set(data) - allowed - {"kind"}
        if extra:
            raise GraphBuildError(f"unknown keys for {kind} spec: {sorted(extra)}")
        missing = allowed - set(data)
        if missing:
            raise GraphBuildError(f"missing keys for {kind} spec: {sorted(missing)}")
        out = dict(data)
        if "offsets" in out:
            out["offsets"] = tuple(out["offsets"])
        return cls(**out)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.m is not None:
            out["m"] = self.m
        if self.r is not None:
            out["r"] = self.r
        if self.offsets is not None:
            out["offsets"] = list(self.offsets)
        if self.path is not None:
            out["path"] = self.path
        return out

    def label(self) -> str:
        if self.kind == "complete":
            return f"K{self.m}"
        if self.kind == "cycle":
            return f"C{self.m}"
        if self.kind == "complete_bipartite_balanced":
            return f"K{self.r},{self.r}"
        if self.kind == "petersen":
            return "Petersen"
        if self.kind == "circulant":
            return f"Circ({self.m};{','.join(map(str, self.offsets))})"
        return f"EdgeList({self.path})"


@dataclass(frozen=True)
class BaseGraph:
    """Validated base graph: connected, order above 1, usually regular.

    ``degree`` is the common degree, or None for the deliberately
    irregular graphs (stars) admitted outside the product pipeline.
    """

    order: int
    degree: int | None
    adjacency: tuple[tuple[int, ...], ...]
    label: str = ""

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]


def base_from_edges(order: int, edges, label: str = "",
                    require_regular: bool = True) -> BaseGraph:
    """Build and validate a base graph from an edge collection."""
    if order <= 1:
        raise TooSmallError(f"{label or 'base graph'}: order must exceed 1, got {order}")
    nbrs: list[set[int]] = [set() for _ in range(order)]
    seen = set()
    for u, v in edges:
        if not (0 <= u < order and 0 <= v < order):
            raise MalformedEdgeListError(f"{label}: endpoint out of range in edge ({u}, {v})")
        if u == v:
            raise MalformedEdgeListError(f"{label}: self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise MalformedEdgeListError(f"{label}: duplicate edge ({key[0]}, {key[1]})")
        seen.add(key)
        nbrs[u].add(v)
        nbrs[v].add(u)
    degrees = {len(s) for s in nbrs}
    degree: int | None
    if len(degrees) == 1:
        degree = degrees.pop()
    elif require_regular:
        raise NonRegularError(f"{label}: non-regular, degrees {sorted(degrees)}")
    else:
        degree = None
    # connectivity by breadth-first search from vertex 0
    seen_v = {0}
    queue = [0]
    while queue:
        u = queue.pop()
        for w in nbrs[u]:
            if w not in seen_v:
                seen_v.add(w)
                queue.append(w)
    if len(seen_v) != order:
        raise DisconnectedError(f"{label}: disconnected ({len(seen_v)} of {order} vertices reachable)")
    return BaseGraph(order=order, degree=degree,
                     adjacency=tuple(tuple(sorted(s)) for s in nbrs), label=label)


def read_edge_list(path: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse an edge-list file.

    Format: first significant line ``n m``, then m lines ``u v`` with
    0-indexed endpoints.  Blank lines and lines starting with ``#`` are
    ignored.  Anything else is a format error.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            rows.append((lineno, text))
    if not rows:
        raise MalformedEdgeListError(f"{path}: empty edge list file")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise MalformedEdgeListError(f"{path}:{lineno}: header must be 'n m', got {header!r}")
    try:
        order, count = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise MalformedEdgeListError(f"{path}:{lineno}: header must be two integers") from exc
    edges = []
    for lineno, text in rows[1:]:
        parts = text.split()
        if len(parts) != 2:
            raise MalformedEdgeListError(f"{path}:{lineno}: edge line must be 'u v', got {text!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise MalformedEdgeListError(f"{path}:{lineno}: edge line must be two integers") from exc
        edges.append((u, v))
    if len(edges) != count:
        raise MalformedEdgeListError(f"{path}: header promises {count} edges, file has {len(edges)}")
    return order, edges


def build_base(spec: BaseGraphSpec) -> BaseGraph:
    """Construct a validated base graph from its spec."""
    kind = spec.kind
    if kind == "complete":
        m = spec.m
        edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
        return base_from_edges(m, edges, label=spec.label())
    if kind == "cycle":
        m = spec.m
        if m is not None and m <= 2:
            raise TooSmallError(f"{spec.label()}: cycle needs at least 3 vertices")
        edges = [(i, (i + 1) % m) for i in range(m)]
        return base_from_edges(m, edges, label=spec.label())
    if kind == "complete_bipartite_balanced":
        r = spec.r
        if r is None or r < 1:
            raise TooSmallError(f"{spec.label()}: side size must be at least 1")
        edges = [(i, r + j) for i in range(r) for j in range(r)]
        return base_from_edges(2 * r, edges, label=spec.label())
    if kind == "petersen":
        edges = []
        for i in range(5):
            edges.append((i, (i + 1) % 5))          # outer cycle
            edges.append((i, i + 5))                # spokes
            edges.append((i + 5, ((i + 2) % 5) + 5))  # inner pentagram
        return base_from_edges(10, edges, label=spec.label())
    if kind == "circulant":
        m = spec.m
        offsets = spec.offsets or ()
        if not offsets:
            raise GraphBuildError(f"{spec.label()}: at least one offset required")
        norm = [o % m for o in offsets]
        if len(set(norm)) != len(norm):
            raise GraphBuildError(f"{spec.label()}: offsets must be distinct modulo {m}")
        if any(o == 0 for o in norm):
            raise GraphBuildError(f"{spec.label()}: offsets must be nonzero modulo {m}")
        if any((m - o) % m not in norm for o in norm):
            raise NonRegularError(f"{spec.label()}: offsets must be closed under negation modulo {m}")
        edges = set()
        for i in range(m):
            for o in norm:
                j = (i + o) % m
                edges.add((min(i, j), max(i, j)))
        return base_from_edges(m, sorted(edges), label=spec.label())
    if kind == "edge_list":
        order, edges = read_edge_list(spec.path)
        return base_from_edges(order, edges, label=spec.label())
    raise GraphBuildError(f"unknown base graph kind: {kind!r}")


def star(leaves: int) -> BaseGraph:
    """Star with a centre (vertex 0) and ``leaves`` leaves.

    Stars are not regular, so they live outside the product pipeline
    gate; they exist for the bipartite balance identity checks.
    """
    if leaves < 1:
        raise TooSmallError("star needs at least one leaf")
    edges = [(0, i) for i in range(1, leaves + 1)]
    return base_from_edges(leaves + 1, edges, label=f"Star{leaves}", require_regular=False)


@dataclass
class ProductGraph:
    """Cartesian product of base graphs with flat adjacency arrays.

    ``adj_off``, ``adj_flat`` and ``adj_eid`` form a compressed
    adjacency: the neighbours of v are ``adj_flat[adj_off[v]:adj_off[v+1]]``
    and the incident edge ids sit at the same positions in ``adj_eid``.
    Instances are immutable after construction and safe to share across
    worker processes.
    """

    bases: tuple[BaseGraph, ...]
    n: int
    d: int | None
    C: int
    radices: tuple[int, ...]
    strides: tuple[int, ...]
    adj_off: list[int]
    adj_flat: list[int]
    adj_eid: list[int]
    edges: list[tuple[int, int]]
    _eid_index: dict = field(repr=False, default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.edges)

    def coordinates(self, v: int) -> tuple[int, ...]:
        """Mixed-radix digits of v, digit 0 least significant."""
        out = []
        for r in self.radices:
            v, digit = divmod(v, r)
            out.append(digit)
        return tuple(out)

    def encode(self, coords) -> int:
        if len(coords) != len(self.radices):
            raise GraphBuildError(f"expected {len(self.radices)} coordinates, got {len(coords)}")
        v = 0
        for digit, radix, stride in zip(coords, self.radices, self.strides):
            if not 0 <= digit < radix:
                raise GraphBuildError(f"coordinate {digit} out of range for radix {radix}")
            v += digit * stride
        return v

    def neighbors(self, v: int) -> list[int]:
        return self.adj_flat[self.adj_off[v]:self.adj_off[v + 1]]

    def incident_edges(self, v: int) -> list[int]:
        return self.adj_eid[self.adj_off[v]:self.adj_off[v + 1]]

    def degree_of(self, v: int) -> int:
        return self.adj_off[v + 1] - self.adj_off[v]

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        eid = self._eid_index.get(key)
        if eid is None:
            raise GraphBuildError(f"({u}, {v}) is not an edge of the product")
        return eid

    def label(self) -> str:
        return "x".join(b.label or "?" for b in self.bases)


def cartesian_product(bases, max_vertices: int | None = None,
                      require_regular: bool = True) -> ProductGraph:
    """Assemble the Cartesian product of validated base graphs."""
    bases = tuple(bases)
    if not bases:
        raise GraphBuildError("product needs at least one base graph")
    if require_regular:
        for b in bases:
            if b.degree is None:
                raise NonRegularError(f"{b.label or 'base'}: irregular base in product pipeline")
    cap = max_vertices if max_vertices is not None else max_vertices_cap()
    n = math.prod(b.order for b in bases)
    if n > cap:
        raise TooLargeError(f"product would have {n} vertices, cap is {cap}")
    radices = tuple(b.order for b in bases)
    strides = []
    acc = 1
    for r in radices:
        strides.append(acc)
        acc *= r
    strides = tuple(strides)
    d = None
    if all(b.degree is not None for b in bases):
        d = sum(b.degree for b in bases)

    adj_off = [0] * (n + 1)
    adj_flat: list[int] = []
    neighbor_lists: list[list[int]] = []
    for v in range(n):
        rest = v
        nbrs = []
        for base, stride, radix in zip(bases, strides, radices):
            digit = rest % radix
            rest //= radix
            anchor = v - digit * stride
            for w in base.adjacency[digit]:
                nbrs.append(anchor + w * stride)
        nbrs.sort()
        neighbor_lists.append(nbrs)
        adj_off[v + 1] = adj_off[v] + len(nbrs)

    # canonical edge ids: lexicographic over (u, v) with u < v
    edges: list[tuple[int, int]] = []
    eid_index: dict[tuple[int, int], int] = {}
    for u in range(n):
        for v in neighbor_lists[u]:
            if v > u:
                eid_index[(u, v)] = len(edges)
                edges.append((u, v))

    adj_eid: list[int] = []
    for u in range(n):
        row = neighbor_lists[u]
        adj_flat.extend(row)
        for v in row:
            key = (u, v) if u < v else (v, u)
            adj_eid.append(eid_index[key])

    C = max(radices)
    return ProductGraph(bases=bases, n=n, d=d, C=C, radices=radices, strides=strides,
                        adj_off=adj_off, adj_flat=adj_flat, adj_eid=adj_eid,
                        edges=edges, _eid_index=eid_index)


def build_product(specs, max_vertices: int | None = None) -> ProductGraph:
    """Convenience: build bases from specs, then the product."""
    return cartesian_product([build_base(s) for s in specs], max_vertices=max_vertices)


def bipartition_signature(g) -> tuple[int, int] | None:
    """(|O|, |E|) when the graph is bipartite, else None.

    Any graph with ``order``-like size and a ``neighbors`` method is
    accepted, regular or not.  For a connected graph O is the side of
    vertex 0.  For a disconnected graph the sides are accumulated per
    component, with each component's minimum vertex counted in O.
    """
    n = g.order if hasattr(g, "order") else g.n
    color = [-1] * n
    counts = [0, 0]
    for start in range(n):
        if color[start] != -1:
            continue
        color[start] = 0
        counts[0] += 1
        queue = [start]
        while queue:
            u = queue.pop()
            cu = color[u]
            for w in g.neighbors(u):
                if color[w] == -1:
                    color[w] = 1 - cu
                    counts[1 - cu] += 1
                    queue.append(w)
                elif color[w] == cu:
                    return None
    return counts[0], counts[1]


def full_mask(pg: ProductGraph) -> bytes:
    """Edge mask with every edge present."""
    return b"\x01" * pg.m


def mask_from_edges(pg: ProductGraph, pairs) -> bytes:
    """Edge mask from explicit endpoint pairs."""
    mask = bytearray(pg.m)
    for u, v in pairs:
        mask[pg.edge_id(u, v)] = 1
    return bytes(mask)
