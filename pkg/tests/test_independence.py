from fractions import Fraction

import numpy as np
import pytest

from gamebounds.games import (SizeCapError, chsh, independent_set_game,
                              magic_square, parallel_repetition,
                              strategy_value)
from gamebounds.gamegraph import (Graph, build_game_graph, complete_graph,
                                  cycle_graph, empty_graph, to_plain_graph)
from gamebounds.independence import (classical_value, classical_value_brute,
                                     independence_number,
                                     weighted_independence)

from conftest import (alpha_by_enumeration, exhaustive_strategy_value,
                      max_weight_by_enumeration, random_boolean_game,
                      random_graph)


def _check_witness(g: Graph, witness):
    for i in witness:
        for j in witness:
            if i != j:
                assert not g.has_edge(i, j)


def test_c5_alpha_two():
    c5 = cycle_graph(5)
    assert alpha_by_enumeration(c5) == 2
    res = independence_number(c5)
    assert res.value == 2
    _check_witness(c5, res.witness)


def test_edgeless_alpha_is_n():
    res = independence_number(empty_graph(6))
    assert res.value == 6 and len(res.witness) == 6


def test_chsh_graph_alpha_three():
    graph = to_plain_graph(build_game_graph(chsh()))
    assert alpha_by_enumeration(graph) == 3
    res = independence_number(graph)
    assert res.value == 3
    _check_witness(graph, res.witness)


def test_alpha_matches_enumeration_on_random_graphs():
    rng = np.random.default_rng(12)
    for _ in range(40):
        g = random_graph(rng, int(rng.integers(1, 13)), rng.uniform(0.1, 0.9))
        res = independence_number(g)
        assert res.value == alpha_by_enumeration(g)
        _check_witness(g, res.witness)


def test_vertex_deletion_monotonicity():
    rng = np.random.default_rng(13)
    for _ in range(10):
        g = random_graph(rng, 10, 0.4)
        full = independence_number(g).value
        # delete the last vertex
        sub = Graph(9, tuple(r & ((1 << 9) - 1) for r in g.rows[:9]))
        assert independence_number(sub).value <= full


def test_weighted_matches_enumeration():
    rng = np.random.default_rng(14)
    for _ in range(25):
        n = int(rng.integers(1, 13))
        g = random_graph(rng, n, 0.5)
        w = rng.random(n) * 3.0
        res = weighted_independence(g, w)
        assert res.value == pytest.approx(max_weight_by_enumeration(g, w),
                                          abs=1e-10)
        _check_witness(g, res.witness)
        assert res.value == pytest.approx(sum(w[v] for v in res.witness),
                                          abs=1e-12)


def test_weighted_chsh_graph_quarter_weights():
    graph = to_plain_graph(build_game_graph(chsh()))
    res = weighted_independence(graph, np.full(8, 0.25))
    assert res.value == pytest.approx(0.75, abs=1e-12)
    assert len(res.witness) == 3


def test_weighted_all_ones_reduces_to_unweighted():
    rng = np.random.default_rng(15)
    for _ in range(10):
        g = random_graph(rng, 10, 0.5)
        assert weighted_independence(g, np.ones(10)).value == pytest.approx(
            independence_number(g).value)


def test_weighted_single_vertex():
    g = empty_graph(1)
    assert weighted_independence(g, [2.5]).value == 2.5


def test_weighted_rejects_negative():
    with pytest.raises(ValueError, match="non-negative"):
        weighted_independence(empty_graph(2), [1.0, -0.5])


def test_vertex_cap():
    with pytest.raises(SizeCapError):
        independence_number(empty_graph(600))
    with pytest.raises(SizeCapError):
        independence_number(empty_graph(20), vertex_cap=10)


def test_classical_value_chsh():
    res = classical_value(chsh())
    assert res.exact == Fraction(3, 4)
    assert res.value == 0.75
    assert strategy_value(chsh(), res.strategy) == 0.75


def test_classical_value_chsh_rep2():
    g = parallel_repetition(chsh(), 2)
    res = classical_value(g)
    assert res.exact == Fraction(10, 16)
    assert strategy_value(g, res.strategy) == res.value


def test_classical_value_magic_square():
    res = classical_value(magic_square())
    assert res.exact == Fraction(8, 9)
    brute = classical_value_brute(magic_square())
    assert brute.exact == Fraction(8, 9)


def test_brute_force_chsh_and_all_ones():
    assert classical_value_brute(chsh()).exact == Fraction(3, 4)
    from gamebounds.games import all_ones
    assert classical_value_brute(all_ones(2, 2, 2, 2)).value == 1.0


def test_brute_force_cap():
    with pytest.raises(SizeCapError):
        classical_value_brute(magic_square(), cap=100)


def test_brute_matches_nested_loop_reference():
    rng = np.random.default_rng(16)
    for _ in range(10):
        g = random_boolean_game(rng, uniform=False)
        assert classical_value_brute(g).value == pytest.approx(
            exhaustive_strategy_value(g), abs=1e-12)


def _exact_wins(g, strategy) -> int:
    return sum(int(g.predicate[x, y, strategy.fa[x], strategy.fb[y]])
               for x in range(g.nx) for y in range(g.ny))


def test_graph_route_equals_brute_force_uniform():
    rng = np.random.default_rng(17)
    for _ in range(60):
        g = random_boolean_game(rng, uniform=True)
        via_graph = classical_value(g)
        via_brute = classical_value_brute(g)
        assert via_graph.exact == via_brute.exact
        # the witness strategy achieves the reported value exactly
        # (integer win count over k; no floating error)
        assert Fraction(_exact_wins(g, via_graph.strategy), g.k) == via_graph.exact


def test_graph_route_equals_brute_force_weighted():
    rng = np.random.default_rng(18)
    for _ in range(30):
        g = random_boolean_game(rng, uniform=False)
        via_graph = classical_value(g)
        via_brute = classical_value_brute(g)
        assert via_graph.value == pytest.approx(via_brute.value, abs=1e-10)
        assert strategy_value(g, via_graph.strategy) == pytest.approx(
            via_graph.value, abs=1e-12)


def test_independent_set_game_values():
    c5 = cycle_graph(5)
    assert classical_value(independent_set_game(c5, 2)).value == 1.0
    res3 = classical_value(independent_set_game(c5, 3))
    assert res3.value < 1.0
    assert classical_value_brute(independent_set_game(c5, 3)).value < 1.0


def test_complete_graph_alpha_one():
    res = independence_number(complete_graph(7))
    assert res.value == 1
