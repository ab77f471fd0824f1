"""Exhaustive grid search for transversal-free weighted blow-ups."""

import json
import random
from fractions import Fraction as F
from itertools import product

import pytest

from critdens.blowup import WeightedBlowupGraph, gacs_tree_construction
from critdens.errors import BudgetExhausted, ValidationError
from critdens.graphs import (
    bow_tie_graph,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)
from critdens.oracle import (
    SearchConfig,
    oracle_dcrit_estimate,
    oracle_find_transversal,
    oracle_search_construction,
)


def _uniform_random_blowup(rng, H):
    sizes = [rng.randint(1, 3) for _ in H.vertices()]
    weights = [[F(1, s)] * s for s in sizes]
    keep = rng.uniform(0.2, 0.9)
    cross = [
        ((i, a), (j, b))
        for i, j in H.edges
        for a in range(sizes[i - 1])
        for b in range(sizes[j - 1])
        if rng.random() < keep
    ]
    return WeightedBlowupGraph(H, weights, cross)


# -- configuration -----------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValidationError):
        SearchConfig(weight_grid_denominator=0)
    with pytest.raises(ValidationError):
        SearchConfig(budget=0)
    cfg = SearchConfig(cluster_size_bounds=(1, 2))
    with pytest.raises(ValidationError):
        cfg.resolved_bounds(complete_graph(3))
    with pytest.raises(ValidationError):
        SearchConfig(cluster_size_bounds=(0, 1, 1)).resolved_bounds(
            complete_graph(3))


def test_default_bounds_are_vertex_degrees():
    assert SearchConfig().resolved_bounds(complete_graph(3)) == (2, 2, 2)
    assert SearchConfig().resolved_bounds(path_graph(3)) == (1, 2, 1)
    assert SearchConfig().resolved_bounds(bow_tie_graph()) == (4, 2, 2, 2, 2)


# -- reference transversal search ---------------------------------------------


def test_oracle_matches_pruned_search_on_random_blowups():
    rng = random.Random(90210)
    pool = [path_graph(3), complete_graph(3), star_graph(4), cycle_graph(4)]
    for _ in range(200):
        B = _uniform_random_blowup(rng, rng.choice(pool))
        fast = B.find_transversal()
        slow = oracle_find_transversal(B)
        assert (fast is None) == (slow is None)
        if slow is not None:
            choice = slow.choice
            for i, j in B.pattern.edges:
                assert B.has_cross_edge((i, choice[i]), (j, choice[j]))


def test_oracle_rejects_gacs_constructions():
    for T in [path_graph(3), star_graph(4), star_graph(5)]:
        assert oracle_find_transversal(gacs_tree_construction(T)) is None


# -- grid search ----------------------------------------------------------------


def test_triangle_floor_60_at_q10_finds_construction():
    cfg = SearchConfig(weight_grid_denominator=10, density_floor=[F(3, 5)] * 3)
    B = oracle_search_construction(complete_graph(3), cfg)
    assert B is not None
    assert B.find_transversal() is None
    assert all(d >= F(3, 5) for d in B.densities().values())
    assert all(c.denominator in (1, 2, 5, 10) for w in B.weights for c in w)


def test_triangle_floor_65_at_q10_is_infeasible():
    cfg = SearchConfig(weight_grid_denominator=10, density_floor=[F(13, 20)] * 3)
    assert oracle_search_construction(complete_graph(3), cfg) is None


def test_triangle_floor_61_at_q50_known_result():
    cfg = SearchConfig(weight_grid_denominator=50, density_floor=[F(61, 100)] * 3)
    B = oracle_search_construction(complete_graph(3), cfg)
    assert B is not None
    assert B.cluster_sizes() == (1, 2, 2)
    assert B.densities() == {
        (1, 2): F(31, 50), (1, 3): F(31, 50), (2, 3): F(1539, 2500)}


def test_search_is_deterministic_and_thread_count_invariant():
    cfg = SearchConfig(weight_grid_denominator=10, density_floor=[F(3, 5)] * 3)
    a = oracle_search_construction(complete_graph(3), cfg)
    b = oracle_search_construction(complete_graph(3), cfg)
    c = oracle_search_construction(complete_graph(3), cfg, threads=2)
    d = oracle_search_construction(complete_graph(3), cfg, threads=3)
    assert a.to_json() == b.to_json() == c.to_json() == d.to_json()


def test_search_recovers_bow_tie_reconstruction():
    floor = {e: F(17, 20) for e in bow_tie_graph().edges}
    floor[(2, 3)] = F(51, 100)
    floor[(4, 5)] = F(51, 100)
    cfg = SearchConfig(cluster_size_bounds=(2, 2, 2, 2, 2),
                       weight_grid_denominator=10, density_floor=floor)
    B = oracle_search_construction(bow_tie_graph(), cfg)
    assert B is not None
    assert B.weights == (
        (F(1, 2), F(1, 2)),
        (F(3, 10), F(7, 10)),
        (F(3, 10), F(7, 10)),
        (F(3, 10), F(7, 10)),
        (F(3, 10), F(7, 10)),
    )
    dens = B.densities()
    assert all(dens[e] == F(17, 20) for e in [(1, 2), (1, 3), (1, 4), (1, 5)])
    assert dens[(2, 3)] == dens[(4, 5)] == F(51, 100)
    assert B.find_transversal() is None


def test_budget_exhaustion_is_distinct_from_none():
    cfg = SearchConfig(weight_grid_denominator=10,
                       density_floor=[F(3, 5)] * 3, budget=1)
    with pytest.raises(BudgetExhausted):
        oracle_search_construction(complete_graph(3), cfg)


def test_progress_and_checkpoint(tmp_path):
    progress = tmp_path / "progress.jsonl"
    checkpoint = tmp_path / "checkpoint.json"
    cfg = SearchConfig(weight_grid_denominator=10, density_floor=[F(13, 20)] * 3)
    found = oracle_search_construction(
        complete_graph(3), cfg,
        progress_path=str(progress), checkpoint_path=str(checkpoint))
    assert found is None
    lines = [json.loads(l) for l in progress.read_text().splitlines()]
    assert lines and all(l["record"] == "oracle-progress" for l in lines)
    assert all(l["verdict"] == "none" for l in lines)
    assert [l["config"] for l in lines] == list(range(len(lines)))
    state = json.loads(checkpoint.read_text())
    assert state == {"completed": len(lines) - 1}

    # resuming skips every completed configuration
    again = oracle_search_construction(
        complete_graph(3), cfg,
        progress_path=str(progress), checkpoint_path=str(checkpoint))
    assert again is None
    assert len(progress.read_text().splitlines()) == len(lines)


def test_progress_requires_single_thread(tmp_path):
    cfg = SearchConfig(weight_grid_denominator=10, density_floor=[F(3, 5)] * 3)
    with pytest.raises(ValidationError):
        oracle_search_construction(
            complete_graph(3), cfg, threads=2,
            progress_path=str(tmp_path / "p.jsonl"))


# -- critical density bracketing ----------------------------------------------


def test_dcrit_estimate_brackets():
    lo, hi = oracle_dcrit_estimate(path_graph(3), q=20, tol=F(1, 32))
    assert (lo, hi) == (F(1, 2), F(17, 32))
    lo, hi = oracle_dcrit_estimate(complete_graph(3), q=10, tol=F(1, 16))
    assert (lo, hi) == (F(9, 16), F(5, 8))
    lo, hi = oracle_dcrit_estimate(star_graph(4), q=10, tol=F(1, 16))
    assert (lo, hi) == (F(9, 16), F(5, 8))


def test_dcrit_estimate_lower_end_is_achievable():
    # the bracket's left end never exceeds the true critical density
    from critdens.tree_decision import dcrit_tree

    for T in [path_graph(3), star_graph(4)]:
        lo, hi = oracle_dcrit_estimate(T, q=10, tol=F(1, 16))
        assert hi - lo <= F(1, 16)
        assert dcrit_tree(T).compare_density(lo) >= 0


def test_dcrit_estimate_validation():
    with pytest.raises(ValidationError):
        oracle_dcrit_estimate(path_graph(3), q=10, tol=F(0))
