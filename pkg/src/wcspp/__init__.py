"""Exact A*-based solvers and benchmark harness for the Weight Constrained
Shortest Path Problem: minimize cost1 over start-goal paths subject to
cost2 <= W, on directed graphs with non-negative integer attribute pairs.
"""

from .graph import (BACKWARD, FORWARD, Graph, GraphFormatError, ProblemInstance,
                    load_dimacs, random_graph, randomize_cost2)
from .oracle import constrained_optimum, enumerate_pareto
from .pqueue import (BINARY_HEAP, BUCKET, HYBRID, MonotonicityError, QueueConfig,
                     QueueStats, TIE_NONE_FIFO, TIE_NONE_LIFO, TIE_SECONDARY, new_queue)
from .solvers import (SOLVERS, SolveOptions, SolveOutcome, solve_wc_astar,
                      solve_wc_ba_star, solve_wc_ebba, solve_wc_ebba_par)

__version__ = "0.1.0"

__all__ = [
    "BACKWARD", "FORWARD", "Graph", "GraphFormatError", "ProblemInstance",
    "load_dimacs", "random_graph", "randomize_cost2",
    "constrained_optimum", "enumerate_pareto",
    "BINARY_HEAP", "BUCKET", "HYBRID", "MonotonicityError", "QueueConfig",
    "QueueStats", "TIE_NONE_FIFO", "TIE_NONE_LIFO", "TIE_SECONDARY", "new_queue",
    "SOLVERS", "SolveOptions", "SolveOutcome", "solve_wc_astar",
    "solve_wc_ba_star", "solve_wc_ebba", "solve_wc_ebba_par",
]
