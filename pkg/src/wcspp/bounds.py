"""Bounded heuristic searches producing the h/ub tables, the reduced state set,
initial global upper bounds and budget factors.

Direction convention: tables for direction d bound costs from a state to that
search's target (forward target = goal, backward target = start). The forward
tables are therefore computed by traversing the reversed graph from the goal,
and vice versa. Attribute indices are 0 for cost1 and 1 for cost2.
"""

from __future__ import annotations

import heapq
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .graph import BACKWARD, FORWARD, Graph, ProblemInstance

INF = float("inf")

ATTR1 = 0
ATTR2 = 1

# InitResult.status values
INFEASIBLE = "infeasible"
SHORTCUT = "shortcut"  # optimum proven during initialisation
SEARCH = "search"  # constrained search required

# SolutionRecord.kind values
SOL_NONE = "none"
SOL_SINGLE = "single_node"
SOL_PAIR = "node_pair"
SOL_INITIAL = "initial"


@dataclass
class SolutionRecord:
    """Best known feasible solution and how to rebuild its path.

    data layout per kind:
      single_node -- (direction, state, path_id, join_attr)
      node_pair   -- ((FORWARD, state, path_id), (BACKWARD, state, path_id))
      initial     -- (state, attr_toward_start | None, attr_toward_goal | None)
    """

    kind: str = SOL_NONE
    costs: Optional[tuple[int, int]] = None
    data: tuple = ()


class GlobalBounds:
    """Shared (f1_bar, f2_bar, f2_sol) plus the current solution record.

    All updates happen under one lock and only ever tighten; readers outside
    the lock may see stale (larger) values, which can only delay pruning.
    """

    def __init__(self, weight_limit: int):
        self.f1_bar = INF
        self.f2_bar = weight_limit
        self.f2_sol = INF
        self.record = SolutionRecord()
        self.incumbents: list = []  # accepted (c1, c2, source) updates, in order
        self._lock = threading.Lock()

    def offer(self, c1, c2, record_factory: Callable[[], SolutionRecord],
              tag: str = "") -> bool:
        """Install (c1, c2) if lexicographically smaller than (f1_bar, f2_sol)."""
        with self._lock:
            if c1 < self.f1_bar or (c1 == self.f1_bar and c2 < self.f2_sol):
                self.f1_bar = c1
                self.f2_sol = c2
                self.record = record_factory()
                self.incumbents.append((c1, c2, tag))
                return True
            return False

    def tighten_f1(self, c1) -> bool:
        """Lower f1_bar without nominating a solution node; resets f2_sol."""
        with self._lock:
            if c1 < self.f1_bar:
                self.f1_bar = c1
                self.f2_sol = INF
                return True
            return False

    def seed(self, c1, record: SolutionRecord) -> None:
        """Install the initialisation incumbent: bounds f1 but leaves f2_sol open."""
        with self._lock:
            if c1 < self.f1_bar:
                self.f1_bar = c1
                self.record = record


@dataclass
class BudgetFactors:
    forward: Fraction
    backward: Fraction

    def of(self, direction: int) -> Fraction:
        return self.forward if direction == FORWARD else self.backward


class BoundsTables:
    """Per-direction lower/upper bound arrays, shortest-path trees and the S' mask."""

    def __init__(self, state_count: int):
        n = state_count
        self.state_count = n
        # [direction][attr] -> per-state array (None until that search ran)
        self.h: list[list[Optional[list]]] = [[None, None], [None, None]]
        self.ub: list[list[Optional[list]]] = [[None, None], [None, None]]
        self.tree: list[list[Optional[list]]] = [[None, None], [None, None]]
        self.valid: Optional[list[bool]] = None

    def install(self, direction: int, attr: int, dist: list, comp: list,
                pred: list) -> None:
        other = 1 - attr
        self.h[direction][attr] = dist
        self.ub[direction][other] = comp
        self.tree[direction][attr] = pred

    def ensure_full(self, direction: int) -> None:
        """Fill any table a solver reads that no init search produced (all-infinite)."""
        n = self.state_count
        for attr in (ATTR1, ATTR2):
            if self.h[direction][attr] is None:
                self.h[direction][attr] = [INF] * n
            if self.ub[direction][attr] is None:
                self.ub[direction][attr] = [INF] * n


@dataclass
class InitResult:
    status: str
    tables: BoundsTables
    gb: GlobalBounds
    valid_states: Optional[list[bool]] = None  # S' membership mask
    settled_per_phase: list = field(default_factory=list)  # (direction, attr, mask) per search


class BoundedSearch:
    """Label-setting search on one attribute with lexicographic tie-breaking on the other.

    Stops before expanding any state whose f-value exceeds the bound (which may
    be a callable re-read every pop, for bounds tightened concurrently).
    `steps()` yields one settled (state, dist, companion) at a time so callers
    can interleave two searches deterministically or drive them from threads.
    """

    def __init__(self, graph: Graph, source: int, traverse_dir: int, attr: int,
                 heuristic: Optional[Sequence] = None, bound=INF,
                 allowed: Optional[Sequence[bool]] = None):
        n = graph.state_count
        self.graph = graph
        self.source = source
        self.traverse_dir = traverse_dir
        self.attr = attr
        self.heuristic = heuristic
        self.bound = bound if callable(bound) else (lambda b=bound: b)
        self.allowed = allowed
        self.dist = [INF] * n
        self.comp = [INF] * n
        self.pred: list[Optional[int]] = [None] * n
        self.settled = [False] * n
        self.best: dict[int, tuple] = {source: (0, 0)}
        h0 = heuristic[source] if heuristic is not None else 0
        self.heap: list[tuple] = [(h0, 0, 0, source, -1)]
        self.finished = False

    def steps(self) -> Iterator[tuple[int, int, int]]:
        heap = self.heap
        settled = self.settled
        heuristic = self.heuristic
        graph, tdir = self.graph, self.traverse_dir
        attr_is_1 = self.attr == ATTR1
        while heap:
            f, ds, dp, u, pu = heapq.heappop(heap)
            if settled[u]:
                continue
            if f > self.bound():
                break
            settled[u] = True
            self.dist[u] = dp
            self.comp[u] = ds
            self.pred[u] = pu if pu >= 0 else None
            yield u, dp, ds
            for v, c1, c2 in graph.successors(u, tdir):
                if self.allowed is not None and not self.allowed[v]:
                    continue
                if settled[v]:
                    continue
                if attr_is_1:
                    ndp, nds = dp + c1, ds + c2
                else:
                    ndp, nds = dp + c2, ds + c1
                cur = self.best.get(v)
                if cur is None or (ndp, nds) < cur:
                    self.best[v] = (ndp, nds)
                    hv = heuristic[v] if heuristic is not None else 0
                    heapq.heappush(heap, (ndp + hv, nds, ndp, v, u))
        self.finished = True

    def run(self) -> "BoundedSearch":
        for _ in self.steps():
            pass
        return self


def bounded_sssp(graph: Graph, source: int, traverse_dir: int, attr: int,
                 heuristic: Optional[Sequence] = None, bound=INF,
                 allowed: Optional[Sequence[bool]] = None, join_check=None):
    """Run one bounded label-setting search to completion.

    Returns (dist, companion, settled, pred): optimal cost on `attr` per
    settled state, the other attribute's cost along that same path, the
    settled mask, and the predecessor array of the shortest-path tree.
    `join_check(u, dist, companion)` fires once per settlement.
    """
    search = BoundedSearch(graph, source, traverse_dir, attr, heuristic=heuristic,
                           bound=bound, allowed=allowed)
    _drive(search, on_settle=join_check)
    return search.dist, search.comp, search.settled, search.pred


def haversine_m(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in metres between (lat, lon) points."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    s = (math.sin((lat2 - lat1) / 2) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2)
    return 2 * 6371000.0 * math.asin(min(1.0, math.sqrt(s)))


def geo_heuristic(graph: Graph, target: int, attr: int) -> Optional[list[int]]:
    """Admissible cost1 lower bounds from great-circle distances, when coordinates exist.

    Scaled by the tightest cost1-per-metre ratio over all edges so that
    h(u) <= cost1 of every u-target path; cost2 has no geometric meaning here.
    """
    if attr != ATTR1 or graph.coords is None or graph.state_count == 0:
        return None
    coords = graph.coords
    scale = INF
    for u, v, c1, _ in graph.edges():
        d = haversine_m(coords[u], coords[v])
        if d > 1e-9:
            scale = min(scale, c1 / d)
    if scale is INF or scale <= 0:
        return None
    t = coords[target]
    return [int(haversine_m(coords[u], t) * scale) for u in range(graph.state_count)]


def _initial_record(state: int, attr_to_start: Optional[int], attr_to_goal: Optional[int],
                    costs: tuple) -> SolutionRecord:
    return SolutionRecord(SOL_INITIAL, costs, (state, attr_to_start, attr_to_goal))


def _make_join_check(gb: GlobalBounds, tables: BoundsTables, table_dir: int, attr: int):
    """Per-settlement matching against every opposite-direction tree already built.

    The search being run computes direction `table_dir` tables on `attr`; its
    settled label (dist, companion) is one half of a start-goal path, the
    opposite tree supplies the other half.
    """
    opp = 1 - table_dir
    pairs = []
    for b in (ATTR1, ATTR2):
        h_arr = tables.h[opp][b]
        if h_arr is not None:
            ub_arr = tables.ub[opp][1 - b]
            if b == ATTR1:
                pairs.append((b, h_arr, ub_arr))  # (cost1, cost2) = (h, ub)
            else:
                pairs.append((b, ub_arr, h_arr))  # (cost1, cost2) = (ub, h)

    def check(u: int, dp, ds) -> None:
        if attr == ATTR1:
            g1, g2 = dp, ds
        else:
            g1, g2 = ds, dp
        for b, tc1, tc2 in pairs:
            o1, o2 = tc1[u], tc2[u]
            if o1 == INF or o2 == INF:
                continue
            c1, c2 = g1 + o1, g2 + o2
            if c2 <= gb.f2_bar:
                if table_dir == BACKWARD:
                    record = _initial_record(u, attr, b, (c1, c2))
                else:
                    record = _initial_record(u, b, attr, (c1, c2))
                gb.offer(c1, c2, lambda r=record: r, tag="init-match")

    return check


def _drive(search: BoundedSearch, on_settle=None, stop: Optional[Callable[[], bool]] = None):
    for u, dp, ds in search.steps():
        if on_settle is not None:
            on_settle(u, dp, ds)
        if stop is not None and stop():
            return


def init_unidirectional(graph: Graph, inst: ProblemInstance,
                        use_geo: bool = True) -> InitResult:
    """Two chained backward bounded searches; forward-direction tables only.

    First on cost2 bounded by the weight limit (seeds f1_bar from the
    companion cost of the cost2-optimal path), then on cost1 bounded by f1_bar
    and restricted to the first search's survivors. Detects infeasibility and
    the already-feasible-shortest-path shortcut.
    """
    gb = GlobalBounds(inst.weight_limit)
    tables = BoundsTables(graph.state_count)
    result = InitResult(SEARCH, tables, gb)

    s1 = BoundedSearch(graph, inst.goal, BACKWARD, ATTR2, bound=gb.f2_bar)
    s1.run()
    tables.install(FORWARD, ATTR2, s1.dist, s1.comp, s1.pred)
    result.settled_per_phase.append((FORWARD, ATTR2, s1.settled))
    if not s1.settled[inst.start]:
        result.status = INFEASIBLE
        return result
    seed_costs = (s1.comp[inst.start], s1.dist[inst.start])  # cost2-optimal path
    gb.seed(seed_costs[0], _initial_record(inst.start, None, ATTR2, seed_costs))

    # Backward search from the goal: its f-estimate points at the start side.
    heur = geo_heuristic(graph, inst.start, ATTR1) if use_geo else None
    s2 = BoundedSearch(graph, inst.goal, BACKWARD, ATTR1, heuristic=heur,
                       bound=lambda: gb.f1_bar, allowed=s1.settled)
    s2.run()
    tables.install(FORWARD, ATTR1, s2.dist, s2.comp, s2.pred)
    result.settled_per_phase.append((FORWARD, ATTR1, s2.settled))
    result.valid_states = list(s2.settled)
    tables.valid = result.valid_states
    tables.ensure_full(FORWARD)

    if s2.settled[inst.start] and s2.comp[inst.start] <= gb.f2_bar:
        costs = (s2.dist[inst.start], s2.comp[inst.start])  # cost1-optimal path, feasible
        gb.offer(costs[0], costs[1],
                 lambda: _initial_record(inst.start, None, ATTR1, costs), tag="init-shortcut")
        result.status = SHORTCUT
    return result


def init_sequential_bidirectional(graph: Graph, inst: ProblemInstance,
                                  reversed_order: bool = False,
                                  use_geo: bool = True) -> InitResult:
    """Four chained bounded searches, each restricted to the previous survivors,
    each (after the first) tightening f1_bar by partial-path matching.

    The standard order runs both cost2 searches first; with `reversed_order`
    the cost1 searches run first, seeded by a weight-bounded backward cost2
    search (looser-constraint tuning).
    """
    gb = GlobalBounds(inst.weight_limit)
    tables = BoundsTables(graph.state_count)
    result = InitResult(SEARCH, tables, gb)
    # A search from the start estimates toward the goal and vice versa.
    geo1_goal = geo_heuristic(graph, inst.goal, ATTR1) if use_geo else None

    def run_phase(table_dir: int, attr: int, heuristic, bound, allowed, match: bool):
        source = inst.goal if table_dir == FORWARD else inst.start
        traverse = BACKWARD if table_dir == FORWARD else FORWARD
        search = BoundedSearch(graph, source, traverse, attr, heuristic=heuristic,
                               bound=bound, allowed=allowed)
        check = _make_join_check(gb, tables, table_dir, attr) if match else None
        _drive(search, on_settle=check)
        tables.install(table_dir, attr, search.dist, search.comp, search.pred)
        result.settled_per_phase.append((table_dir, attr, search.settled))
        return search

    if not reversed_order:
        # cost2 backward, cost2 forward, cost1 forward, cost1 backward
        s1 = run_phase(FORWARD, ATTR2, None, gb.f2_bar, None, match=False)
        if not s1.settled[inst.start]:
            result.status = INFEASIBLE
            return result
        gb.seed(s1.comp[inst.start],
                _initial_record(inst.start, None, ATTR2,
                                (s1.comp[inst.start], s1.dist[inst.start])))
        s2 = run_phase(BACKWARD, ATTR2, tables.h[FORWARD][ATTR2], gb.f2_bar,
                       s1.settled, match=True)
        s3 = run_phase(BACKWARD, ATTR1, geo1_goal, lambda: gb.f1_bar,
                       s2.settled, match=True)
        if s3.settled[inst.goal] and s3.comp[inst.goal] <= gb.f2_bar:
            costs = (s3.dist[inst.goal], s3.comp[inst.goal])
            gb.offer(costs[0], costs[1],
                     lambda: _initial_record(inst.goal, ATTR1, None, costs),
                     tag="init-shortcut")
            result.status = SHORTCUT
            result.valid_states = list(s3.settled)
        else:
            s4 = run_phase(FORWARD, ATTR1, tables.h[BACKWARD][ATTR1],
                           lambda: gb.f1_bar, s3.settled, match=True)
            result.valid_states = list(s4.settled)
            if s4.settled[inst.start] and s4.comp[inst.start] <= gb.f2_bar:
                costs = (s4.dist[inst.start], s4.comp[inst.start])
                gb.offer(costs[0], costs[1],
                         lambda: _initial_record(inst.start, None, ATTR1, costs),
                         tag="init-shortcut")
                result.status = SHORTCUT
    else:
        # cost2 backward (seed), cost1 forward, cost1 backward, cost2 forward
        s1 = run_phase(FORWARD, ATTR2, None, gb.f2_bar, None, match=False)
        if not s1.settled[inst.start]:
            result.status = INFEASIBLE
            return result
        gb.seed(s1.comp[inst.start],
                _initial_record(inst.start, None, ATTR2,
                                (s1.comp[inst.start], s1.dist[inst.start])))
        s2 = run_phase(BACKWARD, ATTR1, geo1_goal, lambda: gb.f1_bar, None, match=True)
        if s2.settled[inst.goal] and s2.comp[inst.goal] <= gb.f2_bar:
            costs = (s2.dist[inst.goal], s2.comp[inst.goal])
            gb.offer(costs[0], costs[1],
                     lambda: _initial_record(inst.goal, ATTR1, None, costs),
                     tag="init-shortcut")
            result.status = SHORTCUT
            result.valid_states = list(s2.settled)
        else:
            s3 = run_phase(FORWARD, ATTR1, tables.h[BACKWARD][ATTR1],
                           lambda: gb.f1_bar, s2.settled, match=True)
            if s3.settled[inst.start] and s3.comp[inst.start] <= gb.f2_bar:
                costs = (s3.dist[inst.start], s3.comp[inst.start])
                gb.offer(costs[0], costs[1],
                         lambda: _initial_record(inst.start, None, ATTR1, costs),
                         tag="init-shortcut")
                result.status = SHORTCUT
                result.valid_states = list(s3.settled)
            else:
                s4 = run_phase(BACKWARD, ATTR2, tables.h[FORWARD][ATTR2], gb.f2_bar,
                               s3.settled, match=True)
                result.valid_states = list(s4.settled)

    tables.valid = result.valid_states
    tables.ensure_full(FORWARD)
    tables.ensure_full(BACKWARD)
    return result


def init_parallel_bidirectional(graph: Graph, inst: ProblemInstance,
                                schedule: tuple = ("lockstep", 1),
                                use_geo: bool = True) -> InitResult:
    """Two rounds of two concurrent bounded searches.

    Round one: backward on cost2 (bounded by the weight limit) alongside
    forward on cost1, which turns bounded as soon as the concurrent search
    seeds f1_bar. Round two mirrors the attributes with informed heuristics,
    restricted to round-one survivors, matching partial paths to tighten
    f1_bar. Early exits: no feasible solution, or the cost1-shortest path is
    already feasible.
    """
    gb = GlobalBounds(inst.weight_limit)
    tables = BoundsTables(graph.state_count)
    result = InitResult(SEARCH, tables, gb)
    geo1_goal = geo_heuristic(graph, inst.goal, ATTR1) if use_geo else None

    hit = {"shortcut": None}

    # Round one.
    bwd2 = BoundedSearch(graph, inst.goal, BACKWARD, ATTR2, bound=gb.f2_bar)
    fwd1 = BoundedSearch(graph, inst.start, FORWARD, ATTR1, heuristic=geo1_goal,
                         bound=lambda: gb.f1_bar)

    def bwd2_settle(u, dp, ds):
        if u == inst.start:
            gb.seed(ds, _initial_record(inst.start, None, ATTR2, (ds, dp)))

    def fwd1_settle(u, dp, ds):
        if u == inst.goal and ds <= gb.f2_bar:
            costs = (dp, ds)
            gb.offer(costs[0], costs[1],
                     lambda: _initial_record(inst.goal, ATTR1, None, costs),
                     tag="init-shortcut")
            hit["shortcut"] = costs

    def round_one_done() -> bool:
        # Abort the round on either early-exit condition: optimum proven, or
        # the weight-bounded search exhausted without reaching the start.
        return hit["shortcut"] is not None or \
            (bwd2.finished and not bwd2.settled[inst.start])

    _run_pair(schedule, (bwd2, bwd2_settle), (fwd1, fwd1_settle), stop=round_one_done)
    tables.install(FORWARD, ATTR2, bwd2.dist, bwd2.comp, bwd2.pred)
    tables.install(BACKWARD, ATTR1, fwd1.dist, fwd1.comp, fwd1.pred)
    result.settled_per_phase.append((FORWARD, ATTR2, bwd2.settled))
    result.settled_per_phase.append((BACKWARD, ATTR1, fwd1.settled))

    if hit["shortcut"] is not None:
        result.status = SHORTCUT
        result.valid_states = [a and b for a, b in zip(bwd2.settled, fwd1.settled)]
        tables.valid = result.valid_states
        tables.ensure_full(FORWARD)
        tables.ensure_full(BACKWARD)
        return result
    if not bwd2.settled[inst.start]:
        result.status = INFEASIBLE
        return result

    # Round two, restricted to states settled by both round-one searches.
    allowed = [a and b for a, b in zip(bwd2.settled, fwd1.settled)]
    fwd2 = BoundedSearch(graph, inst.start, FORWARD, ATTR2,
                         heuristic=tables.h[FORWARD][ATTR2], bound=gb.f2_bar,
                         allowed=allowed)
    bwd1 = BoundedSearch(graph, inst.goal, BACKWARD, ATTR1,
                         heuristic=tables.h[BACKWARD][ATTR1],
                         bound=lambda: gb.f1_bar, allowed=allowed)
    _run_pair(schedule,
              (fwd2, _make_join_check(gb, tables, BACKWARD, ATTR2)),
              (bwd1, _make_join_check(gb, tables, FORWARD, ATTR1)))
    tables.install(BACKWARD, ATTR2, fwd2.dist, fwd2.comp, fwd2.pred)
    tables.install(FORWARD, ATTR1, bwd1.dist, bwd1.comp, bwd1.pred)
    result.settled_per_phase.append((BACKWARD, ATTR2, fwd2.settled))
    result.settled_per_phase.append((FORWARD, ATTR1, bwd1.settled))

    result.valid_states = [a or b for a, b in zip(fwd2.settled, bwd1.settled)]
    tables.valid = result.valid_states
    tables.ensure_full(FORWARD)
    tables.ensure_full(BACKWARD)
    return result


def _run_pair(schedule: tuple, a: tuple, b: tuple, stop=None) -> None:
    """Run two BoundedSearches per the schedule: ('lockstep', k) or ('threads', n)."""
    mode = schedule[0]
    if mode == "threads":
        threads = [threading.Thread(target=_drive, args=(s, cb, stop))
                   for s, cb in (a, b)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        return
    k = schedule[1] if len(schedule) > 1 else 1
    gens = [iter(a[0].steps()), iter(b[0].steps())]
    callbacks = [a[1], b[1]]
    done = [False, False]
    while not all(done):
        for side in (0, 1):
            if done[side]:
                continue
            for _ in range(k):
                try:
                    u, dp, ds = next(gens[side])
                except StopIteration:
                    done[side] = True
                    break
                if callbacks[side] is not None:
                    callbacks[side](u, dp, ds)
                if stop is not None and stop():
                    return


def budget_factors(valid_states: Sequence[bool], h_f1: Sequence, h_b1: Sequence) -> BudgetFactors:
    """Split the weight budget per the ratio of summed cost1 lower bounds over S'.

    The direction with the smaller sum gets beta = min(1, (sum_other/2) / sum_own);
    the other direction gets the complement. Exact rational arithmetic so the
    two factors always add to exactly 1.
    """
    sum_f = 0
    sum_b = 0
    for u, ok in enumerate(valid_states):
        if ok and h_f1[u] != INF and h_b1[u] != INF:
            sum_f += h_f1[u]
            sum_b += h_b1[u]
    if sum_f == 0 and sum_b == 0:
        half = Fraction(1, 2)
        return BudgetFactors(half, half)
    if sum_f <= sum_b:
        if sum_f == 0:
            bf = Fraction(1)
        else:
            bf = min(Fraction(1), Fraction(sum_b, 2 * sum_f))
        return BudgetFactors(bf, 1 - bf)
    if sum_b == 0:
        bb = Fraction(1)
    else:
        bb = min(Fraction(1), Fraction(sum_f, 2 * sum_b))
    return BudgetFactors(1 - bb, bb)
