"""Named product instances used by tests, scripts, and experiment configs.

Names follow the factor list: ``K4xK3`` is the product of a complete
graph on 4 vertices and one on 3, ``Q6`` is the 6-dimensional hypercube
(six K2 factors).  ``petersen`` is the Petersen graph as a single-factor
product.
"""

from .graph_core import BaseGraphSpec, ProductGraph, build_product

K2 = BaseGraphSpec.complete(2)
K3 = BaseGraphSpec.complete(3)
K4 = BaseGraphSpec.complete(4)
K5 = BaseGraphSpec.complete(5)
C4 = BaseGraphSpec.cycle(4)
C5 = BaseGraphSpec.cycle(5)
C10 = BaseGraphSpec.cycle(10)
PETERSEN = BaseGraphSpec.petersen()

CATALOG: dict[str, tuple[BaseGraphSpec, ...]] = {
    **{f"Q{t}": (K2,) * t for t in range(2, 11)},
    "K3xK3": (K3, K3),
    "C5xK2": (C5, K2),
    "C4xK3": (C4, K3),
    "K4xK3": (K4, K3),
    "C5xC5": (C5, C5),
    "K3xK3xK2": (K3, K3, K2),
    "C5xK2xK3": (C5, K2, K3),
    "petersen": (PETERSEN,),
    "petersenxK2": (PETERSEN, K2),
    "K5": (K5,),
    "C10xC10": (C10, C10),
    "K4xK4xK4": (K4, K4, K4),
}


def catalog_names() -> list[str]:
    return list(CATALOG)


def catalog_specs(name: str) -> tuple[BaseGraphSpec, ...]:
    try:
        return CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise KeyError(f"unknown catalog product {name!r}; known: {known}") from None


def build_catalog_product(name: str) -> ProductGraph:
    return build_product(catalog_specs(name))


def _spec_order(spec: BaseGraphSpec) -> int:
    if spec.kind in ("complete", "cycle", "circulant"):
        return spec.m
    if spec.kind == "complete_bipartite_balanced":
        return 2 * spec.r
    if spec.kind == "petersen":
        return 10
    raise ValueError(f"no closed-form order for kind {spec.kind!r}")


def _order(specs: tuple[BaseGraphSpec, ...]) -> int:
    n = 1
    for spec in specs:
        n *= _spec_order(spec)
    return n


def even_order_names(max_vertices: int = 4096) -> list[str]:
    """Catalog names with an even vertex count up to ``max_vertices``."""
    return [name for name, specs in CATALOG.items()
            if _order(specs) % 2 == 0 and _order(specs) <= max_vertices]


def tiny_names(max_vertices: int = 12) -> list[str]:
    """Catalog names small enough for exhaustive cross-checks."""
    return [name for name, specs in CATALOG.items()
            if _order(specs) <= max_vertices]
