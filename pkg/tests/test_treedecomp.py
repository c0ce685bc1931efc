import random

import pytest

from shallowminor.graph import Graph, complete_graph, path_graph
from shallowminor.reductions import CnfFormula
from shallowminor.treedecomp import TreeDecomposition, TreeDecompositionError, verify_tree_decomposition
from shallowminor.twreduction import TD_WIDTH_CONSTANT, build_tw_reduction, cop_tree_decomposition, pad_formula


def test_single_bag_k4():
    assert verify_tree_decomposition(complete_graph(4), TreeDecomposition([range(4)])) == 3


def test_sliding_bags_on_path():
    bags = [{i, i + 1} for i in range(4)]
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(3)])
    assert verify_tree_decomposition(path_graph(5), td) == 1


def test_empty_graph():
    assert verify_tree_decomposition(Graph(), TreeDecomposition([])) == -1


@pytest.mark.parametrize(
    "bags, tedges, msg",
    [
        ([{0, 1}, {2}], [(0, 1)], "edge not covered"),
        ([{0, 1}, {1, 2}], [], "not a tree"),
        ([{0, 1}, {1, 2}, {0, 2}], [(0, 1), (1, 2), (0, 2)], "not a tree"),
        ([{0, 1}], [], "vertex not covered"),
        ([{0, 1}, {1, 2}, {0, 2}], [(0, 1), (1, 2)], "disconnected"),
        ([{0, 1, 2, 9}], [], "unknown vertex"),
    ],
)
def test_axiom_violations(bags, tedges, msg):
    g = complete_graph(3)
    with pytest.raises(TreeDecompositionError, match=msg):
        verify_tree_decomposition(g, TreeDecomposition(bags, tedges))


def test_cop_decomposition_small():
    red = build_tw_reduction(CnfFormula(4, [(1, 2, 3), (-1, 4, 2)]))
    td = cop_tree_decomposition(red)
    width = verify_tree_decomposition(red.graph, td)
    assert width <= TD_WIDTH_CONSTANT * red.s - 1


def test_clause_gadget_bags_hold_their_tour_triple():
    red = build_tw_reduction(CnfFormula(4, [(1, -2), (3, 4)]))
    td = cop_tree_decomposition(red)
    for i, tour in red.tours.items():
        for t, d in enumerate(red.clause_gadgets[i]):
            assert any(set(d) | set(tour[t : t + 3]) <= bag for bag in td.bags)


def test_cop_decomposition_random():
    rng = random.Random(11)
    for _ in range(6):
        n = rng.choice([4, 16])
        clauses = [tuple(rng.choice([1, -1]) * v for v in rng.sample(range(1, n + 1), 3)) for _ in range(rng.randint(1, 4))]
        red = build_tw_reduction(pad_formula(CnfFormula(n, clauses)))
        w = verify_tree_decomposition(red.graph, cop_tree_decomposition(red))
        assert w <= TD_WIDTH_CONSTANT * red.s - 1
