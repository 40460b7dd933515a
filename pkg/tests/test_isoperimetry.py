"""Boundary profiles, analytic lower bounds, cuts, and tree counts."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from prodperc.catalog import build_catalog_product
from prodperc.graph_core import (BaseGraph, BaseGraphSpec, TooLargeError,
                                 build_product, cartesian_product)
from prodperc.isoperimetry import (BoundParams, count_rooted_trees,
                                   edge_boundary, edge_connectivity,
                                   exhaustive_profile, f_star, f_star_b,
                                   f_star_s, find_bad_expansion_sets,
                                   rooted_tree_bound)


# --- exact profiles ---------------------------------------------------------

def test_cube_profile_values():
    pg = build_catalog_product("Q3")
    profile = exhaustive_profile(pg)
    assert profile.f == (3, 4, 5, 4, 5, 4, 3)
    assert profile.f_of(1) == 3 and profile.f_of(7) == 3
    with pytest.raises(ValueError):
        profile.f_of(0)
    with pytest.raises(ValueError):
        profile.f_of(8)


def test_profile_witnesses_attain_their_value():
    pg = build_catalog_product("Q3")
    profile = exhaustive_profile(pg)
    assert profile.witnesses is not None
    for k in range(1, pg.n):
        witness = profile.witnesses[k - 1]
        assert len(witness) == k
        assert edge_boundary(pg, witness) == profile.f_of(k)


def test_witness_retention_defaults():
    q3 = build_catalog_product("Q3")
    assert exhaustive_profile(q3, keep_witnesses=False).witnesses is None
    big = build_catalog_product("K3xK3xK2")  # 18 vertices: profile ok, no witnesses
    profile = exhaustive_profile(big)
    assert profile.witnesses is None
    assert len(profile.f) == big.n - 1


def test_profile_size_cap():
    with pytest.raises(TooLargeError):
        exhaustive_profile(build_catalog_product("Q5"))


@pytest.mark.parametrize("name", ["Q4", "K3xK3", "C4xK3", "C5xK2"])
def test_profile_dominates_analytic_bound(name):
    pg = build_catalog_product(name)
    profile = exhaustive_profile(pg, keep_witnesses=False)
    params = BoundParams.from_product(pg, 0.5)
    for k in range(1, pg.n):
        assert profile.f_of(k) == profile.f_of(pg.n - k)
        assert profile.f_of(k) >= f_star(params, k) - 1e-9


# --- analytic bounds ----------------------------------------------------------

def test_f_star_spot_values():
    q4 = BoundParams.from_product(build_catalog_product("Q4"), 0.5)
    assert math.isclose(f_star(q4, 1), 4.0)
    q3 = BoundParams.from_product(build_catalog_product("Q3"), 0.5)
    assert math.isclose(f_star(q3, 3), 3 * (3 - math.log2(3)), rel_tol=1e-12)


def test_f_star_folds_above_half():
    params = BoundParams.from_product(build_catalog_product("K3xK3"), 0.3)
    for k in (1, 2, 3, 4):
        assert f_star(params, k) == f_star(params, params.n - k)
    with pytest.raises(ValueError):
        f_star(params, 0)
    with pytest.raises(ValueError):
        f_star(params, params.n)


def test_f_star_s_values_and_preconditions():
    params = BoundParams.from_product(build_catalog_product("Q4"), 0.5)
    # single component degenerates to the plain bound
    assert f_star_s(params, 1, 5.0) == f_star(params, 5.0)
    expected = 3 * (params.d - 1) + f_star(params, 4.0)
    assert math.isclose(f_star_s(params, 2, 7.0), expected, rel_tol=1e-12)
    with pytest.raises(ValueError):
        f_star_s(params, 0, 5.0)
    with pytest.raises(ValueError):
        f_star_s(params, 2, 5.0)


def test_f_star_s_convexity_form():
    params = BoundParams.from_product(build_catalog_product("Q6"), 0.4)
    for ell2, s in ((2, 8.0), (3, 11.0), (4, 20.0)):
        value = f_star_s(params, ell2, s)
        split = (ell2 - 1) * f_star(params, 3) + f_star(params, s - 3 * (ell2 - 1))
        # merging the small components into the analytic term only loses slack
        assert value >= split - 1e-9 or math.isclose(value, split, rel_tol=1e-9)


def test_f_star_b_values_and_preconditions():
    params = BoundParams.from_product(build_catalog_product("Q4"), 0.5)
    thr = params.s_threshold
    assert f_star_b(params, 1, 8.0) == min(params.n / params.C, f_star(params, 8.0))
    lead = thr * math.log(params.d)
    rest = 12.0 - thr
    expected = lead + min(params.n / params.C, f_star(params, rest))
    assert math.isclose(f_star_b(params, 2, 12.0), expected, rel_tol=1e-12)
    with pytest.raises(ValueError):
        f_star_b(params, 0, 8.0)
    with pytest.raises(ValueError):
        f_star_b(params, 2, thr)  # below ell3 * threshold


def test_bound_params_validation():
    with pytest.raises(ValueError):
        BoundParams(n=1, d=3, C=2, p=0.5)
    with pytest.raises(ValueError):
        BoundParams(n=8, d=0, C=2, p=0.5)
    with pytest.raises(ValueError):
        BoundParams(n=8, d=3, C=1, p=0.5)
    with pytest.raises(ValueError):
        BoundParams(n=8, d=3, C=2, p=0.0)
    with pytest.raises(ValueError):
        BoundParams(n=8, d=3, C=2, p=1.0)


def test_component_size_thresholds():
    params = BoundParams.from_product(build_catalog_product("Q3"), 0.5)
    assert math.isclose(params.s_threshold, 8 / 3 ** 16, rel_tol=1e-12)
    assert math.isclose(params.b_threshold, 8 / 3 ** 64, rel_tol=1e-12)
    assert params.b_threshold < params.s_threshold < 1.0


# --- cuts ----------------------------------------------------------------------

@pytest.mark.parametrize("name", ["K3xK3", "Q4", "C5xC5", "K4xK3"])
def test_edge_connectivity_meets_degree(name):
    pg = build_catalog_product(name)
    assert edge_connectivity(pg) == pg.d


def test_edge_connectivity_edge_cases():
    assert edge_connectivity(build_product((BaseGraphSpec.complete(2),))) == 1
    # bypass the builder validation to hit the disconnected-input guard
    two_edges = BaseGraph(order=4, degree=1,
                          adjacency=((1,), (0,), (3,), (2,)), label="2K2")
    with pytest.raises(ValueError):
        edge_connectivity(cartesian_product([two_edges]))


def test_edge_boundary_respects_masks():
    pg = build_catalog_product("Q3")
    assert edge_boundary(pg, {0}) == 3
    assert edge_boundary(pg, {0}, mask=bytes(pg.m)) == 0
    assert edge_boundary(pg, set(range(pg.n))) == 0


# --- rooted subtree counts --------------------------------------------------------

def test_rooted_tree_counts_complete_graphs():
    k4 = build_product((BaseGraphSpec.complete(4),))
    assert count_rooted_trees(k4, 0, 1) == 1
    assert count_rooted_trees(k4, 0, 2) == 3
    assert count_rooted_trees(k4, 0, 3) == 9  # three triangles, three trees each
    k3 = build_product((BaseGraphSpec.complete(3),))
    assert count_rooted_trees(k3, 0, 3) == 3


def test_rooted_tree_counts_respect_analytic_ceiling():
    for name in ("petersen", "Q3", "K5", "K3xK3"):
        pg = build_catalog_product(name)
        for k in range(1, 6):
            count = count_rooted_trees(pg, 0, k)
            assert count <= rooted_tree_bound(pg.d, k)


def test_rooted_tree_count_domain():
    pg = build_catalog_product("Q3")
    with pytest.raises(ValueError):
        count_rooted_trees(pg, 0, 0)
    with pytest.raises(ValueError):
        count_rooted_trees(pg, 0, 8)


@settings(deadline=None, max_examples=20)
@given(st.integers(min_value=0, max_value=15))
def test_rooted_tree_count_is_root_invariant_on_transitive_graph(root):
    # Q4 is vertex transitive, so the count cannot depend on the root
    pg = build_catalog_product("Q4")
    assert count_rooted_trees(pg, root, 4) == count_rooted_trees(pg, 0, 4)


# --- bad expansion search ----------------------------------------------------------

def test_bad_expansion_sets_frozen_counts():
    q4 = build_catalog_product("Q4")
    assert find_bad_expansion_sets(q4, 4, 7.0) == []
    squares = find_bad_expansion_sets(q4, 4, 8.0)
    assert len(squares) == 24
    for subset in squares:
        assert edge_boundary(q4, subset) == 8
    k5 = build_catalog_product("K5")
    assert len(find_bad_expansion_sets(k5, 2, 6.0)) == 10


def test_bad_expansion_sets_cap():
    with pytest.raises(TooLargeError):
        find_bad_expansion_sets(build_catalog_product("Q5"), 3, 10.0)
