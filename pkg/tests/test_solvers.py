import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_graphs
from shallowminor.graph import Graph, GraphError, complete_graph, cycle_graph, density, path_graph, petersen_graph
from shallowminor.matching import SD1, STM_HALF, densest_fixed_nails
from shallowminor.models import SHALLOW, SUBDIVISION, verify_model
from shallowminor.solvers import (
    SearchBudgetExceeded,
    SolveLimits,
    brute_force_densest,
    dense_bipartite_subdivision,
    densest_depth1_exact,
    densest_subgraph,
    min_degree_filter,
)


def subset_densest(g):
    best = Fraction(-1)
    vs = sorted(g.vertices)
    for k in range(1, len(vs) + 1):
        for sub in combinations(vs, k):
            best = max(best, density(g.induced(sub)))
    return best


def test_exact_examples():
    s, m = densest_depth1_exact(complete_graph(4), STM_HALF)
    assert s.density == Fraction(3, 2) and m.nails == {0, 1, 2, 3}
    assert densest_depth1_exact(cycle_graph(4), STM_HALF)[0].density == 1
    assert densest_depth1_exact(cycle_graph(6), SD1)[0].density == 1


def test_exact_tie_break_is_lexicographic():
    s, m = densest_depth1_exact(path_graph(4), STM_HALF)
    assert s.density == Fraction(3, 4)
    assert m.nails == {0, 1, 2, 3}
    s, m = densest_depth1_exact(Graph(range(3)), SD1)
    assert s.density == 0 and m.nails == {0}


def test_exact_filter_and_limits():
    g = complete_graph(4)
    with pytest.raises(GraphError, match="no candidate"):
        densest_depth1_exact(g, SD1, min_degree_filter(g, 9))
    with pytest.raises(GraphError, match="limit"):
        densest_depth1_exact(g, SD1, limits=SolveLimits(max_vertices=3))


def test_exact_budget_carries_best():
    g = petersen_graph()
    with pytest.raises(SearchBudgetExceeded, match="search budget exceeded") as info:
        densest_depth1_exact(g, STM_HALF, limits=SolveLimits(max_subsets=100))
    summary, model = info.value.best
    assert verify_model(g, model) == summary


def test_oracle_golden_values():
    # Frozen from the exhaustive oracle; cross-checked by the matching solver below.
    assert brute_force_densest(cycle_graph(5), 1, SUBDIVISION).density == Fraction(2, 3)
    k4e = Graph(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert brute_force_densest(k4e, 1, SHALLOW).density == Fraction(5, 4)
    assert densest_depth1_exact(k4e, STM_HALF)[0].density == Fraction(5, 4)
    assert densest_depth1_exact(cycle_graph(5), SD1)[0].density == Fraction(2, 3)


def test_oracle_k2():
    k2 = path_graph(2)
    for r in (0, 1, 2):
        assert brute_force_densest(k2, r, SHALLOW).density == Fraction(1, 2)
    # A subdivision with at least one interior vertex has nowhere to route the edge.
    assert brute_force_densest(k2, 0, SUBDIVISION).density == Fraction(1, 2)
    assert brute_force_densest(k2, 1, SUBDIVISION).density == 0


def test_oracle_depth_two_beats_depth_one():
    g = cycle_graph(6)
    assert brute_force_densest(g, 2, SHALLOW).density == 1
    assert brute_force_densest(cycle_graph(9), 2, SUBDIVISION, SolveLimits(max_vertices=9)).density == 1


def test_oracle_refuses_large_graphs():
    with pytest.raises(SearchBudgetExceeded):
        brute_force_densest(petersen_graph(), 1, SHALLOW)


@settings(max_examples=120)
@given(small_graphs(max_n=6), st.sampled_from([SD1, STM_HALF]))
def test_exact_matches_oracle(g, mode):
    s, m = densest_depth1_exact(g, mode)
    assert s.density == brute_force_densest(g, 1, mode).density
    assert verify_model(g, m) == s


@settings(max_examples=80)
@given(small_graphs(max_n=7), st.data())
def test_exact_dominates_fixed_nails(g, data):
    nails = data.draw(st.sets(st.sampled_from(sorted(g.vertices)), min_size=1))
    for mode in (SD1, STM_HALF):
        assert densest_depth1_exact(g, mode)[0].density >= densest_fixed_nails(g, nails, mode)[0].density


@settings(max_examples=80)
@given(small_graphs(max_n=7))
def test_mode_dominance(g):
    half = densest_depth1_exact(g, STM_HALF)[0].density
    assert half >= densest_depth1_exact(g, SD1)[0].density
    assert half >= densest_subgraph(g)[1]


def test_densest_subgraph_examples():
    g = Graph(range(5), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    sub, d = densest_subgraph(g)
    assert d == Fraction(3, 2) and sub == complete_graph(4)
    sub, d = densest_subgraph(Graph(range(4)))
    assert d == 0 and len(sub) == 1
    sub, d = densest_subgraph(petersen_graph())
    assert d == Fraction(3, 2) and len(sub) == 10


@settings(max_examples=100)
@given(small_graphs(max_n=9))
def test_densest_subgraph_matches_subsets(g):
    sub, d = densest_subgraph(g)
    assert d == subset_densest(g)
    assert density(sub) == d and sub == g.induced(sub.vertices)


def test_bipartite_sd_examples():
    edges = [("a", 1), ("a", 2), ("b", 2), ("b", 3), ("c", 1), ("c", 3)]
    res = dense_bipartite_subdivision("abc", {1, 2, 3}, edges, Fraction(1))
    assert res.decision and res.x_prime == set("abc") and res.y_prime == {1, 2, 3}
    assert dense_bipartite_subdivision("ab", {1, 2}, [("a", 1), ("a", 2)], 0).decision
    low = dense_bipartite_subdivision("ab", {1, 2}, [("a", 1), ("b", 2)], Fraction(1, 100))
    assert not low.decision


def test_bipartite_sd_rejects_non_bipartite_edges():
    with pytest.raises(GraphError):
        dense_bipartite_subdivision("ab", {1}, [("a", "b")], 1)


def test_bipartite_sd_random_vs_exhaustive():
    rng = random.Random(7)
    for _ in range(40):
        xs = [f"x{i}" for i in range(rng.randint(1, 5))]
        ys = list(range(rng.randint(1, 5)))
        edges = [(x, y) for x in xs for y in ys if rng.random() < 0.5]
        res = dense_bipartite_subdivision(xs, ys, edges, Fraction(1))
        g = Graph([*xs, *ys], edges)
        best = Fraction(0)
        for k in range(1, len(ys) + 1):
            for sub in combinations(ys, k):
                s, _ = densest_fixed_nails(g.induced({*sub, *xs}), sub, SD1)
                best = max(best, s.density)
        assert res.ratio == best
