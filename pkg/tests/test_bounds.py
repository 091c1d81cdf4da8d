import random
from fractions import Fraction

import pytest

from wcspp.bounds import (ATTR1, ATTR2, BoundedSearch, INF, INFEASIBLE, SEARCH,
                          SHORTCUT, budget_factors, init_parallel_bidirectional,
                          init_sequential_bidirectional, init_unidirectional)
from wcspp.graph import BACKWARD, FORWARD, Graph, ProblemInstance, random_graph
from wcspp.oracle import constrained_optimum

from conftest import (EXAMPLE_H_F, EXAMPLE_UB_F, G, S, U1, U2, U3,
                      check_tables_against_paths)


def test_backward_cost2_bounds(example_graph):
    s = BoundedSearch(example_graph, G, BACKWARD, ATTR2).run()
    assert s.dist == [EXAMPLE_H_F[u][1] for u in range(5)]
    assert s.comp == [EXAMPLE_UB_F[u][0] for u in range(5)]


def test_backward_cost1_bounds(example_graph):
    s = BoundedSearch(example_graph, G, BACKWARD, ATTR1).run()
    assert s.dist == [EXAMPLE_H_F[u][0] for u in range(5)]
    assert s.comp == [EXAMPLE_UB_F[u][1] for u in range(5)]


def test_search_from_state_without_edges(example_graph):
    # The start state has no incoming edges, so its backward search stays put.
    s = BoundedSearch(example_graph, S, BACKWARD, ATTR2).run()
    assert s.dist[S] == 0
    assert all(s.dist[u] == INF for u in range(5) if u != S)


def test_bound_stops_expansion(example_graph):
    s = BoundedSearch(example_graph, G, BACKWARD, ATTR2, bound=2).run()
    assert s.settled == [False, False, True, True, True]


def test_lexicographic_tie_breaking_on_companion(example_graph):
    # u3 -> goal directly costs (3,3); via u2 costs (4,2). On cost2 the lex
    # winner is (2,4), keeping the smaller companion out of the tie.
    s = BoundedSearch(example_graph, G, BACKWARD, ATTR2).run()
    assert (s.dist[U3], s.comp[U3]) == (2, 4)


def test_init_unidirectional_example(example_graph):
    init = init_unidirectional(example_graph, ProblemInstance(S, G, 6))
    assert init.status == SEARCH
    assert init.gb.f1_bar == 7
    assert init.gb.f2_sol == INF
    # no state removed: every lower bound fits the limits
    assert all(init.valid_states)
    tables = init.tables
    for u in range(5):
        assert (tables.h[FORWARD][ATTR1][u], tables.h[FORWARD][ATTR2][u]) == EXAMPLE_H_F[u]
        assert (tables.ub[FORWARD][ATTR1][u], tables.ub[FORWARD][ATTR2][u]) == EXAMPLE_UB_F[u]


def test_init_unidirectional_infeasible(example_graph):
    init = init_unidirectional(example_graph, ProblemInstance(S, G, 2))
    assert init.status == INFEASIBLE


def test_init_unidirectional_loose_limit_shortcut(example_graph):
    init = init_unidirectional(example_graph, ProblemInstance(S, G, 8))
    assert init.status == SHORTCUT
    assert init.gb.record.costs == (3, 8)
    assert constrained_optimum(example_graph, S, G, 8) == (3, 8)


def test_init_sequential_example(example_graph):
    init = init_sequential_bidirectional(example_graph, ProblemInstance(S, G, 6))
    # matching during the third bounded search finds the u2 join and closes the
    # gap to the optimum, so the constrained search is skipped entirely
    assert init.gb.f1_bar == 5
    assert init.status == SHORTCUT
    assert init.gb.record.costs == (5, 5)
    # u1 drops out: any path through it weighs more than the limit
    assert init.valid_states[U1] is False or init.valid_states[U1] == False  # noqa: E712
    assert all(init.valid_states[u] for u in (S, U2, U3, G))


def test_init_sequential_infeasible(example_graph):
    init = init_sequential_bidirectional(example_graph, ProblemInstance(S, G, 2))
    assert init.status == INFEASIBLE


def test_init_sequential_reversed_order_same_conclusions(example_graph):
    for w, expected in ((6, (5, 5)), (8, (3, 8)), (100, (3, 8))):
        init = init_sequential_bidirectional(example_graph, ProblemInstance(S, G, w),
                                             reversed_order=True)
        if init.status == SHORTCUT:
            assert init.gb.record.costs == expected
        else:
            assert init.gb.f1_bar >= expected[0]


def test_init_parallel_example_deterministic(example_graph):
    runs = []
    for _ in range(2):
        init = init_parallel_bidirectional(example_graph, ProblemInstance(S, G, 6))
        assert init.status == SEARCH
        runs.append((init.gb.f1_bar, init.gb.f2_sol, tuple(init.valid_states)))
    assert runs[0] == runs[1]
    # round-two matching finds the u3 join (6,4) before any constrained search
    assert runs[0][0] == 6
    assert runs[0][1] == 4


def test_init_parallel_infeasible_aborts_round_one(example_graph):
    init = init_parallel_bidirectional(example_graph, ProblemInstance(S, G, 2))
    assert init.status == INFEASIBLE


def test_init_parallel_feasible_shortest_path_aborts(example_graph):
    init = init_parallel_bidirectional(example_graph, ProblemInstance(S, G, 8))
    assert init.status == SHORTCUT
    assert init.gb.record.costs == (3, 8)


def test_init_parallel_threads_matches_lockstep(example_graph):
    lock = init_parallel_bidirectional(example_graph, ProblemInstance(S, G, 6))
    thr = init_parallel_bidirectional(example_graph, ProblemInstance(S, G, 6),
                                      schedule=("threads", 2))
    assert thr.status == lock.status
    assert thr.gb.f1_bar <= 7 and lock.gb.f1_bar <= 7


def test_budget_factors():
    # equal sums split evenly
    bf = budget_factors([True, True], [50, 50], [50, 50])
    assert (bf.forward, bf.backward) == (Fraction(1, 2), Fraction(1, 2))
    # forward sum 100 vs backward 300: the cheap direction takes the whole budget
    bf = budget_factors([True] * 2, [40, 60], [100, 200])
    assert (bf.forward, bf.backward) == (Fraction(1), Fraction(0))
    # mirrored case clamps the other way
    bf = budget_factors([True] * 2, [100, 100], [40, 60])
    assert (bf.forward, bf.backward) == (Fraction(0), Fraction(1))
    # un-clamped ratio: sums 100 vs 150 give beta = min(1, 75/100) = 3/4
    bf = budget_factors([True] * 2, [50, 50], [75, 75])
    assert (bf.forward, bf.backward) == (Fraction(3, 4), Fraction(1, 4))
    # degenerate all-zero bounds fall back to the even split
    bf = budget_factors([True], [0], [0])
    assert (bf.forward, bf.backward) == (Fraction(1, 2), Fraction(1, 2))
    # exact-rational complement in all cases
    for hf, hb in (([3, 7], [2, 9]), ([1, 1], [1000, 3]), ([0, 5], [5, 0])):
        bf = budget_factors([True, True], hf, hb)
        assert bf.forward + bf.backward == 1


@pytest.mark.parametrize("flavor", ["uni", "seq", "seq-rev", "par"])
def test_admissibility_and_realization_on_random_graphs(flavor):
    rng = random.Random(sum(map(ord, flavor)))
    inits = {
        "uni": init_unidirectional,
        "seq": init_sequential_bidirectional,
        "seq-rev": lambda g, i: init_sequential_bidirectional(g, i, reversed_order=True),
        "par": init_parallel_bidirectional,
    }
    for _ in range(40):
        n = rng.randint(3, 11)
        g = random_graph(rng.randrange(2**30), n, 2 * n)
        start, goal = 0, n - 1
        w = rng.randint(1, 40)
        inst = ProblemInstance(start, goal, w)
        init = inits[flavor](g, inst)
        oracle = constrained_optimum(g, start, goal, w)
        if init.status == INFEASIBLE:
            assert oracle is None
        elif init.status == SHORTCUT:
            # proven optimal during initialisation; a parallel init may have
            # aborted its round mid-flight, leaving tables legitimately partial
            assert init.gb.record.costs == oracle
        else:
            assert oracle is not None
            check_tables_against_paths(g, inst, init)


def test_reduction_soundness():
    # dropping states outside S' never changes the constrained optimum
    rng = random.Random(21)
    for _ in range(50):
        n = rng.randint(4, 14)
        g = random_graph(rng.randrange(2**30), n, 2 * n)
        start, goal = 0, n - 1
        w = rng.randint(1, 30)
        init = init_sequential_bidirectional(g, ProblemInstance(start, goal, w))
        if init.status != SEARCH:
            continue
        keep = init.valid_states
        reduced = Graph(n, [e for e in g.edges() if keep[e[0]] and keep[e[1]]])
        assert constrained_optimum(reduced, start, goal, w) == \
            constrained_optimum(g, start, goal, w)


def test_bounded_sssp_function_surface(example_graph):
    from wcspp.bounds import bounded_sssp
    seen = []
    dist, comp, settled, pred = bounded_sssp(
        example_graph, G, BACKWARD, ATTR2, join_check=lambda u, dp, ds: seen.append(u))
    assert dist == [EXAMPLE_H_F[u][1] for u in range(5)]
    assert comp == [EXAMPLE_UB_F[u][0] for u in range(5)]
    assert all(settled)
    assert sorted(seen) == list(range(5))
    # predecessor walk from the start reaches the goal
    u, hops = S, 0
    while pred[u] is not None:
        u = pred[u]
        hops += 1
    assert u == G and hops <= 4
