"""Command-line front end: single solves, instance generation with the
tightness formula, batch benchmarking with an instrumentation CSV, the
brute-force cross-check suite, and cost randomization.

Exit codes for `solve`: 0 optimal, 2 infeasible, 3 timeout; conflicting flag
combinations exit 64.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, TextIO

from .bounds import ATTR1, ATTR2, BoundedSearch, INF
from .graph import FORWARD, Graph, ProblemInstance, load_dimacs, random_graph, \
    randomize_cost2, write_gr
from .oracle import constrained_optimum
from .pqueue import (BINARY_HEAP, BUCKET, HYBRID, QueueConfig, TIE_NONE_FIFO,
                     TIE_NONE_LIFO, TIE_SECONDARY)
from .solvers import SOLVERS, STATUS_INFEASIBLE, STATUS_OPTIMAL, SolveOptions, \
    SolveOutcome

EXIT_OPTIMAL = 0
EXIT_INFEASIBLE = 2
EXIT_TIMEOUT = 3
EXIT_USAGE = 64

QUEUE_KINDS = {"bucket": BUCKET, "hybrid": HYBRID, "binary-heap": BINARY_HEAP}
TIE_POLICIES = {"none-lifo": TIE_NONE_LIFO, "none-fifo": TIE_NONE_FIFO,
                "secondary": TIE_SECONDARY}

CSV_VERSION_LINE = "# wcspp-bench-csv v1"
CSV_COLUMNS = [
    "instance", "algorithm", "queue", "tie", "status", "cost1", "cost2",
    "runtime_us", "expansions", "generations", "prunes_dominance",
    "prunes_state_ub", "prunes_global", "queue_ops", "peak_pool_blocks",
]


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def pair_cost2_bounds(graph: Graph, start: int, goal: int) -> Optional[tuple[int, int]]:
    """(h2, ub2) for a pair: cost2 of its cost2-shortest and cost1-shortest paths."""
    on2 = BoundedSearch(graph, start, FORWARD, ATTR2).run()
    if not on2.settled[goal]:
        return None
    on1 = BoundedSearch(graph, start, FORWARD, ATTR1).run()
    return on2.dist[goal], on1.comp[goal]


def weight_from_tightness(h2: int, ub2: int, delta: Fraction) -> int:
    """W = h2 + delta * (ub2 - h2), rounded half-up to an integer."""
    exact = h2 + delta * (ub2 - h2)
    return int(exact + Fraction(1, 2)) if exact >= 0 else -int(-exact + Fraction(1, 2))


@dataclass
class InstanceRow:
    start: int  # 0-based
    goal: int
    marker: str  # "w" or "delta"
    value: str


def write_instances(out: TextIO, cost1_file: str, cost2_file: str,
                    rows: list[tuple[int, int, str, str]]) -> None:
    out.write("# wcspp instance file\n")
    out.write(f"graph {cost1_file} {cost2_file}\n")
    for start, goal, marker, value in rows:
        out.write(f"{start + 1} {goal + 1} {marker} {value}\n")


def read_instances(path: str) -> tuple[Optional[tuple[str, str]], list[InstanceRow]]:
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "graph":
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: malformed graph header")
                header = (parts[1], parts[2])
                continue
            if len(parts) != 4 or parts[2] not in ("w", "delta"):
                raise ValueError(f"{path}:{lineno}: expected '<start> <goal> w|delta <value>'")
            rows.append(InstanceRow(int(parts[0]) - 1, int(parts[1]) - 1, parts[2], parts[3]))
    return header, rows


def resolve_weight(graph: Graph, row: InstanceRow) -> Optional[int]:
    """Turn an instance row into an integer weight limit (None if unreachable)."""
    if row.marker == "w":
        return int(row.value)
    bounds2 = pair_cost2_bounds(graph, row.start, row.goal)
    if bounds2 is None:
        return None
    h2, ub2 = bounds2
    return weight_from_tightness(h2, ub2, Fraction(row.value))


def gen_instances(graph: Graph, pairs: list[tuple[int, int]], deltas: list[Fraction],
                  include_reversed: bool = False) -> list[tuple[int, int, str, str]]:
    """Rows of (start, goal, 'w', W) for each pair x delta; 0-based states."""
    all_pairs = list(pairs)
    if include_reversed:
        all_pairs += [(g, s) for s, g in pairs]
    rows = []
    for start, goal in all_pairs:
        bounds2 = pair_cost2_bounds(graph, start, goal)
        if bounds2 is None:
            _warn(f"pair {start + 1} -> {goal + 1} is unreachable; skipped")
            continue
        h2, ub2 = bounds2
        if ub2 == h2:
            _warn(f"pair {start + 1} -> {goal + 1} has a degenerate corridor "
                  f"(ub2 == h2 == {h2}); emitting W = {h2}")
        for delta in deltas:
            w = h2 if ub2 == h2 else weight_from_tightness(h2, ub2, delta)
            rows.append((start, goal, "w", str(w)))
    return rows


def _queue_config(kind_flag: str, tie_flag: str, delta_f: int) -> QueueConfig:
    kind = QUEUE_KINDS[kind_flag]
    tie = TIE_POLICIES[tie_flag]
    cfg = QueueConfig(kind, 0, 0, delta_f, tie)
    cfg.validate()
    return cfg


def _solve_options(args) -> SolveOptions:
    schedule = ("threads", 2) if args.threads else ("lockstep", args.lockstep)
    return SolveOptions(schedule=schedule, timeout=args.timeout)


def cmd_solve(args) -> int:
    try:
        cfg = _queue_config(args.queue, args.tie, args.delta_f)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    graph = load_dimacs(args.cost1, args.cost2, args.coords)
    start, goal = args.start - 1, args.goal - 1
    if args.weight_limit is not None:
        weight = args.weight_limit
    else:
        bounds2 = pair_cost2_bounds(graph, start, goal)
        if bounds2 is None:
            print("infeasible")
            return EXIT_INFEASIBLE
        weight = weight_from_tightness(bounds2[0], bounds2[1], Fraction(args.delta))
    inst = ProblemInstance(start, goal, weight)
    outcome = SOLVERS[args.algorithm](graph, inst, cfg, _solve_options(args))
    return _print_outcome(outcome, args.print_path)


def _print_outcome(outcome: SolveOutcome, print_path: bool) -> int:
    m = outcome.metrics
    if outcome.status == STATUS_OPTIMAL:
        print(f"optimal {outcome.costs[0]} {outcome.costs[1]}")
    elif outcome.status == STATUS_INFEASIBLE:
        print("infeasible")
    else:
        if outcome.costs:
            print(f"timeout (incumbent {outcome.costs[0]} {outcome.costs[1]}, "
                  f"optimality not proven)")
        else:
            print("timeout (no incumbent)")
    if print_path and outcome.path:
        print("path " + " ".join(str(s + 1) for s in outcome.path))
    print(f"expansions {m.expansions} generations {m.generations} "
          f"prunes {m.prunes_dominance}/{m.prunes_state_ub}/{m.prunes_global} "
          f"queue-ops {m.queue_ops} pool-blocks {m.pool_blocks} "
          f"time {m.wall_time_s * 1e6:.0f}us", file=sys.stderr)
    if outcome.status == STATUS_OPTIMAL:
        return EXIT_OPTIMAL
    if outcome.status == STATUS_INFEASIBLE:
        return EXIT_INFEASIBLE
    return EXIT_TIMEOUT


def cmd_gen_instances(args) -> int:
    graph = load_dimacs(args.cost1, args.cost2, args.coords)
    pairs = []
    for token in args.pairs.split():
        s, g = token.split(",")
        pairs.append((int(s) - 1, int(g) - 1))
    deltas = [Fraction(d) for d in args.deltas.split(",")]
    rows = gen_instances(graph, pairs, deltas, include_reversed=args.include_reversed)
    if args.output == "-":
        write_instances(sys.stdout, args.cost1, args.cost2, rows)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_instances(fh, args.cost1, args.cost2, rows)
    return 0


def run_bench(graph: Graph, rows: list[InstanceRow], algorithms: list[str],
              queue_flags: list[str], tie_flags: list[str], repeats: int,
              delta_f: int, out: TextIO, timeout: Optional[float] = None) -> int:
    """Run the full (instance x algorithm x queue x tie) matrix; one CSV row per
    cell, taken from the repeat with the median runtime."""
    writer = csv.writer(out)
    out.write(CSV_VERSION_LINE + "\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for i, row in enumerate(rows):
        weight = resolve_weight(graph, row)
        instance_id = f"{row.start + 1}-{row.goal + 1}-{row.marker}{row.value}"
        for algorithm in algorithms:
            for queue_flag in queue_flags:
                for tie_flag in tie_flags:
                    try:
                        cfg = _queue_config(queue_flag, tie_flag, delta_f)
                    except ValueError:
                        continue  # unsupported combination, not a cell
                    record = _bench_cell(graph, row, weight, algorithm, cfg, repeats,
                                         timeout)
                    writer.writerow([instance_id, algorithm, queue_flag, tie_flag]
                                    + record)
                    count += 1
    return count


def _bench_cell(graph: Graph, row: InstanceRow, weight: Optional[int], algorithm: str,
                cfg: QueueConfig, repeats: int, timeout: Optional[float]) -> list:
    if weight is None:
        return ["unreachable", "", "", 0, 0, 0, 0, 0, 0, 0, 0]
    runs = []
    for _ in range(max(1, repeats)):
        inst = ProblemInstance(row.start, row.goal, weight)
        try:
            t0 = time.monotonic()
            outcome = SOLVERS[algorithm](graph, inst, cfg, SolveOptions(timeout=timeout))
            elapsed = time.monotonic() - t0
            runs.append((elapsed, outcome))
        except Exception as exc:  # a failing cell must not abort the batch
            _warn(f"{algorithm}/{cfg.kind}: {exc}")
            return ["error", "", "", 0, 0, 0, 0, 0, 0, 0, 0]
    runs.sort(key=lambda r: r[0])
    elapsed, outcome = runs[len(runs) // 2]  # median runtime run
    m = outcome.metrics
    c1 = outcome.costs[0] if outcome.costs else ""
    c2 = outcome.costs[1] if outcome.costs else ""
    return [outcome.status, c1, c2, round(elapsed * 1e6), m.expansions, m.generations,
            m.prunes_dominance, m.prunes_state_ub, m.prunes_global, m.queue_ops,
            m.pool_blocks]


def cmd_bench(args) -> int:
    header, rows = read_instances(args.instances)
    if args.cost1:
        graph = load_dimacs(args.cost1, args.cost2, args.coords)
    elif header:
        graph = load_dimacs(header[0], header[1])
    else:
        print("error: no graph files given and instance file has no header",
              file=sys.stderr)
        return EXIT_USAGE
    algorithms = args.algorithms.split(",")
    for a in algorithms:
        if a not in SOLVERS:
            print(f"error: unknown algorithm {a!r}", file=sys.stderr)
            return EXIT_USAGE
    queues = args.queues.split(",")
    ties = args.ties.split(",")
    if args.output == "-":
        run_bench(graph, rows, algorithms, queues, ties, args.repeats, args.delta_f,
                  sys.stdout, args.timeout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            run_bench(graph, rows, algorithms, queues, ties, args.repeats, args.delta_f,
                      fh, args.timeout)
    return 0


def oracle_check(seed: int, graph_count: int, max_states: int, cost_lo: int,
                 cost_hi: int, solvers_map: Optional[dict] = None,
                 report=print) -> tuple[bool, int]:
    """Cross-check every solver x queue kind against the brute-force optimum on
    seeded random graphs; reports the first counterexample verbosely.

    Returns (all_matched, solves_checked).
    """
    solvers_map = solvers_map or SOLVERS
    if graph_count == 0:
        report("warning: 0 graphs requested; vacuous pass")
        return True, 0
    rng = random.Random(seed)
    configs = [
        QueueConfig(BUCKET, 0, 0, 1, TIE_NONE_LIFO),
        QueueConfig(BUCKET, 0, 0, 1, TIE_NONE_FIFO),
        QueueConfig(HYBRID, 0, 0, 1, TIE_NONE_LIFO),
        QueueConfig(HYBRID, 0, 0, 1, TIE_SECONDARY),
        QueueConfig(BINARY_HEAP, 0, 0, 1, TIE_NONE_LIFO),
        QueueConfig(BINARY_HEAP, 0, 0, 1, TIE_SECONDARY),
    ]
    checked = 0
    for gi in range(graph_count):
        n = rng.randint(4, max_states)
        g = random_graph(rng.randrange(2**30), n, extra_edges=2 * n,
                         cost_min=cost_lo, cost_max=cost_hi)
        start = rng.randrange(n)
        goal = rng.randrange(n)
        while goal == start and n > 1:
            goal = rng.randrange(n)
        weights = _weight_sweep(g, start, goal, rng)
        for w in weights:
            expected = constrained_optimum(g, start, goal, w)
            inst = ProblemInstance(start, goal, w)
            for name, solver in solvers_map.items():
                for cfg in configs:
                    outcome = solver(g, inst, cfg, SolveOptions())
                    got = outcome.costs if outcome.status == STATUS_OPTIMAL else None
                    checked += 1
                    if got != expected:
                        report(f"MISMATCH: graph seed idx {gi} (n={n}) "
                               f"{start + 1}->{goal + 1} W={w} {name}/{cfg.kind}/"
                               f"{cfg.tie_policy}: got {got}, oracle {expected}")
                        report("graph edges:")
                        for u, v, c1, c2 in g.edges():
                            report(f"  a {u + 1} {v + 1} ({c1},{c2})")
                        return False, checked
    return True, checked


def _weight_sweep(g: Graph, start: int, goal: int, rng: random.Random) -> list[int]:
    """Weight limits spanning infeasible, tight, mid and loose constraints."""
    front = constrained_optimum(g, start, goal, 1 << 62)
    if front is None:
        return [rng.randint(1, 20)]  # unreachable: any limit is infeasible
    on2 = BoundedSearch(g, start, FORWARD, ATTR2).run()
    h2 = on2.dist[goal]
    ub2 = front[1]  # cost2 of the lexicographically best unconstrained path
    sweep = {h2 - 1, h2, (h2 + ub2) // 2, ub2}
    return sorted(w for w in sweep if w >= 0)


def cmd_oracle_check(args) -> int:
    ok, checked = oracle_check(args.seed, args.graphs, args.max_states,
                               args.cost_min, args.cost_max)
    print(f"{'pass' if ok else 'FAIL'}: {checked} solver runs checked")
    return 0 if ok else 1


def cmd_randomize(args) -> int:
    graph = load_dimacs(args.cost1, args.cost2)
    shuffled = randomize_cost2(graph, args.seed, args.lo, args.hi)
    # Both attributes are rewritten in canonical arc order so the output files
    # form a loadable pair regardless of the input files' arc ordering.
    out1 = f"{args.output}.cost1.gr"
    out2 = f"{args.output}.cost2.gr"
    write_gr(shuffled, out1, attribute=1, comment="cost1 (canonical arc order)")
    write_gr(shuffled, out2, attribute=2,
             comment=f"cost2 randomized in [{args.lo},{args.hi}] seed={args.seed}")
    print(f"wrote {out1} and {out2}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wcspp",
                                     description="Weight-constrained shortest path solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_args(p, coords=True):
        p.add_argument("--cost1", required=True, help="DIMACS .gr file for cost1")
        p.add_argument("--cost2", required=True, help="DIMACS .gr file for cost2")
        if coords:
            p.add_argument("--coords", help="DIMACS .co coordinate file")

    p = sub.add_parser("solve", help="solve one instance")
    add_graph_args(p)
    p.add_argument("--start", type=int, required=True, help="start state (1-based)")
    p.add_argument("--goal", type=int, required=True, help="goal state (1-based)")
    lim = p.add_mutually_exclusive_group(required=True)
    lim.add_argument("--weight-limit", "-W", type=int)
    lim.add_argument("--delta", help="constraint tightness in (0,1]")
    p.add_argument("--algorithm", choices=sorted(SOLVERS), default="wc-astar")
    p.add_argument("--queue", choices=sorted(QUEUE_KINDS), default="bucket")
    p.add_argument("--tie", choices=sorted(TIE_POLICIES), default="none-lifo")
    p.add_argument("--delta-f", type=int, default=1, help="bucket width")
    p.add_argument("--threads", action="store_true",
                   help="run parallel solvers on real threads")
    p.add_argument("--lockstep", type=int, default=1, metavar="K",
                   help="deterministic schedule: K expansions per side")
    p.add_argument("--timeout", type=float, help="wall-clock limit in seconds")
    p.add_argument("--print-path", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen-instances", help="emit weight limits from tightness levels")
    add_graph_args(p)
    p.add_argument("--pairs", required=True,
                   help="space-separated 'start,goal' pairs (1-based)")
    p.add_argument("--deltas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8")
    p.add_argument("--include-reversed", action="store_true",
                   help="also emit every goal-start pair")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_gen_instances)

    p = sub.add_parser("bench", help="run a benchmark matrix to CSV")
    p.add_argument("--cost1")
    p.add_argument("--cost2")
    p.add_argument("--coords")
    p.add_argument("--instances", required=True)
    p.add_argument("--algorithms", default="wc-astar,wc-ba,wc-ebba,wc-ebba-par")
    p.add_argument("--queues", default="bucket")
    p.add_argument("--ties", default="none-lifo")
    p.add_argument("--delta-f", type=int, default=1)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--timeout", type=float)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle-check", help="cross-check solvers against brute force")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--graphs", type=int, default=100)
    p.add_argument("--max-states", type=int, default=30)
    p.add_argument("--cost-min", type=int, default=1)
    p.add_argument("--cost-max", type=int, default=10)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("randomize", help="redraw cost2 uniformly at random")
    add_graph_args(p, coords=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=10000)
    p.add_argument("--output", "-o", required=True,
                   help="prefix for the <prefix>.cost1.gr/.cost2.gr pair")
    p.set_defaults(func=cmd_randomize)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
