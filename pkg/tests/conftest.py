"""Shared fixtures: the worked 5-state example graph, DIMACS file helpers and
the table-admissibility checker used by both the bounds tests and acceptance."""

from __future__ import annotations

import pytest

from wcspp.bounds import ATTR1, ATTR2, INF
from wcspp.graph import BACKWARD, FORWARD, Graph
from wcspp.nodepool import walk_tree
from wcspp.oracle import all_simple_paths

# States: s=0, u1=1, u2=2, u3=3, g=4.
EXAMPLE_EDGES = [
    (0, 1, 1, 4),
    (0, 2, 3, 4),
    (0, 3, 3, 1),
    (1, 2, 1, 2),
    (3, 2, 2, 1),
    (1, 4, 2, 4),
    (2, 4, 2, 1),
    (3, 4, 3, 3),
]

S, U1, U2, U3, G = range(5)

# Forward lower/upper bounds toward the goal, per state.
EXAMPLE_H_F = {S: (3, 3), U1: (2, 3), U2: (2, 1), U3: (3, 2), G: (0, 0)}
EXAMPLE_UB_F = {S: (7, 8), U1: (3, 4), U2: (2, 1), U3: (4, 3), G: (0, 0)}

# Exhaustively confirmed frontier of the example graph (5 simple paths, all
# mutually non-dominated).
EXAMPLE_PARETO = [(3, 8), (4, 7), (5, 5), (6, 4), (7, 3)]


@pytest.fixture
def example_graph() -> Graph:
    return Graph(5, EXAMPLE_EDGES)


def write_dimacs_pair(tmp_path, edges, n, prefix="g"):
    """Write (cost1, cost2) .gr files for an edge list of (u, v, c1, c2), 0-based."""
    p1 = tmp_path / f"{prefix}.d.gr"
    p2 = tmp_path / f"{prefix}.t.gr"
    for path, idx in ((p1, 2), (p2, 3)):
        lines = [f"c test graph\np sp {n} {len(edges)}"]
        for e in edges:
            lines.append(f"a {e[0] + 1} {e[1] + 1} {e[idx]}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(p1), str(p2)


@pytest.fixture
def example_dimacs(tmp_path):
    return write_dimacs_pair(tmp_path, EXAMPLE_EDGES, 5)


def walk_cost(graph, seq):
    c1 = c2 = 0
    for u, v in zip(seq, seq[1:]):
        edge = next(e for e in graph.successors(u, FORWARD) if e[0] == v)
        c1 += edge[1]
        c2 += edge[2]
    return c1, c2


def check_tables_against_paths(graph, inst, init):
    """h values never exceed the matching prefix/suffix cost of any path that is
    weight-feasible and within the final cost1 bound; (h, ub) pairs are realized
    by their shortest-path-tree walks. Only tables whose init phase actually ran
    are checked (an early exit legitimately skips later phases)."""
    produced = {(d, a) for d, a, _ in init.settled_per_phase}
    f1_final = init.gb.f1_bar
    for (c1, c2), seq in all_simple_paths(graph, inst.start, inst.goal):
        if c2 > inst.weight_limit or c1 > f1_final:
            continue
        pc1 = pc2 = 0
        for i, u in enumerate(seq):
            for attr, sval in ((ATTR1, c1 - pc1), (ATTR2, c2 - pc2)):
                if (FORWARD, attr) in produced:
                    assert init.tables.h[FORWARD][attr][u] <= sval
            for attr, pval in ((ATTR1, pc1), (ATTR2, pc2)):
                if (BACKWARD, attr) in produced:
                    assert init.tables.h[BACKWARD][attr][u] <= pval
            if i + 1 < len(seq):
                e = next(x for x in graph.successors(u, FORWARD) if x[0] == seq[i + 1])
                pc1 += e[1]
                pc2 += e[2]
    for direction in (FORWARD, BACKWARD):
        for attr in (ATTR1, ATTR2):
            tree = init.tables.tree[direction][attr]
            if tree is None:
                continue
            h = init.tables.h[direction][attr]
            ub = init.tables.ub[direction][1 - attr]
            for u in range(graph.state_count):
                if h[u] == INF:
                    continue
                walk = walk_tree(tree, u)
                seq = walk if direction == FORWARD else list(reversed(walk))
                w1, w2 = walk_cost(graph, seq)
                pair = (w1, w2) if attr == ATTR1 else (w2, w1)
                assert pair == (h[u], ub[u])
