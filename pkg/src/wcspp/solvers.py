"""The four constrained-search algorithms over one shared node-processing core.

All four searches pop lexicographically minimal nodes, prune lazily against
the last expansion per state (g_min), try an early solution update by joining
the node with its precomputed complementary shortest paths, skip terminal
states, and expand survivors with dominance/upper-bound/validity pruning.
They differ in direction count, objective ordering, budget gating and
partial-path matching:

  wc-astar    -- forward only, (f1, f2) order
  wc-ba       -- forward (f1, f2) + backward (f2, f1), shared bounds, HTF tuning
  wc-ebba     -- interleaved bidirectional (f1, f2), budget factors, Match/Store
  wc-ebba-par -- the same two searches as wc-ebba, run concurrently
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .bounds import (ATTR1, ATTR2, INF, INFEASIBLE, SEARCH, BoundsTables, GlobalBounds,
                     InitResult, SOL_NONE, SOL_PAIR, SOL_SINGLE,
                     SolutionRecord, budget_factors, init_parallel_bidirectional,
                     init_sequential_bidirectional, init_unidirectional)
from .graph import BACKWARD, FORWARD, Graph, ProblemInstance
from .nodepool import NodePool, ParentArrays, join_forward, reconstruct, walk_tree
from .pqueue import QueueConfig, TIE_SECONDARY, new_queue

ORDER_12 = (ATTR1, ATTR2)
ORDER_21 = (ATTR2, ATTR1)

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_TIMEOUT = "timeout"

_TIMEOUT_CHECK_MASK = 4095  # wall clock consulted every 4096 loop iterations

_BREAK = 0
_CONTINUE = 1


@dataclass
class SolveOptions:
    schedule: tuple = ("lockstep", 1)
    timeout: Optional[float] = None
    htf: bool = True  # wc-ba heuristic tuning switch
    init_reversed_order: bool = False  # wc-ebba: run the cost1 bounded searches first
    compute_path: bool = True
    use_geo: bool = True
    check_invariants: bool = False
    record_incumbents: bool = False
    record_tuning: bool = False
    record_trace: bool = False


@dataclass
class Metrics:
    expansions: int = 0
    generations: int = 0
    prunes_dominance: int = 0
    prunes_state_ub: int = 0
    prunes_global_f1: int = 0
    prunes_global_f2: int = 0
    stale_reinserts: int = 0
    pushes: int = 0
    pops: int = 0
    queue_ops: int = 0
    queue_peak: int = 0
    pool_slots: int = 0
    pool_blocks: int = 0
    wall_time_s: float = 0.0

    def absorb(self, other: "Metrics") -> None:
        self.expansions += other.expansions
        self.generations += other.generations
        self.prunes_dominance += other.prunes_dominance
        self.prunes_state_ub += other.prunes_state_ub
        self.prunes_global_f1 += other.prunes_global_f1
        self.prunes_global_f2 += other.prunes_global_f2
        self.stale_reinserts += other.stale_reinserts

    @property
    def prunes_global(self) -> int:
        return self.prunes_global_f1 + self.prunes_global_f2

    def memory_estimate_bytes(self) -> int:
        # Allocator-level figure: pool blocks at 64 B/node plus queue high-water.
        from .nodepool import BLOCK_NODES
        return self.pool_blocks * BLOCK_NODES * 64 + self.queue_peak * 24


@dataclass
class SolveOutcome:
    status: str
    costs: Optional[tuple[int, int]] = None
    path: Optional[list[int]] = None
    metrics: Metrics = field(default_factory=Metrics)
    record: SolutionRecord = field(default_factory=SolutionRecord)
    queue_stats: dict = field(default_factory=dict)
    incumbents: Optional[list] = None
    tuned: Optional[list] = None
    trace: Optional[dict] = None
    parents: Optional[dict] = None  # direction -> ParentArrays, with record_trace


# ---------------------------------------------------------------------------
# Shared procedures


def terminal_skip(tables: BoundsTables, direction: int, primary: int, state: int) -> bool:
    """A state whose primary lower bound meets its upper bound needs no expansion."""
    return tables.h[direction][primary][state] == tables.ub[direction][primary][state]


def esu(gb: GlobalBounds, tables: BoundsTables, direction: int, ordering: tuple,
        state: int, g1, g2, f1, f2, path_id: int, tag: str = "esu") -> None:
    """Early solution update: join the node with a complementary shortest path.

    In (f1, f2) order the cost1-optimal complement can nominate a solution and
    the cost2-optimal one may still tighten f1_bar; in (f2, f1) order the roles
    mirror, and only the cost2-optimal complement nominates.
    """
    ub1 = tables.ub[direction][ATTR1][state]
    ub2 = tables.ub[direction][ATTR2][state]
    if ordering == ORDER_12:
        f2p = g2 + ub2
        if f2p <= gb.f2_bar:
            rec = SolutionRecord(SOL_SINGLE, (f1, f2p), (direction, state, path_id, ATTR1))
            gb.offer(f1, f2p, lambda: rec, tag=tag)
        else:
            f1p = g1 + ub1
            if f1p < gb.f1_bar:
                gb.tighten_f1(f1p)
    else:
        f1p = g1 + ub1
        if f1p <= gb.f1_bar:
            rec = SolutionRecord(SOL_SINGLE, (f1p, f2), (direction, state, path_id, ATTR2))
            gb.offer(f1p, f2, lambda: rec, tag=tag)
        else:
            f2p = g2 + ub2
            if f2p <= gb.f2_bar and f1 < gb.f1_bar:
                gb.tighten_f1(f1)


def match_partial(gb: GlobalBounds, chi_opp: Optional[list], direction: int,
                  state: int, g1, g2, path_id: int, tag: str = "match") -> None:
    """Join the node with stored opposite-direction expansions of the same state.

    The list is ordered by non-decreasing g1, so the scan stops at the first
    joined path whose cost1 exceeds f1_bar.
    """
    if not chi_opp:
        return
    for y1, y2, yidx in chi_opp:
        c1 = g1 + y1
        if c1 > gb.f1_bar:
            break
        c2 = g2 + y2
        if c2 <= gb.f2_bar:
            if direction == FORWARD:
                pair = ((FORWARD, state, path_id), (BACKWARD, state, yidx))
            else:
                pair = ((FORWARD, state, yidx), (BACKWARD, state, path_id))
            rec = SolutionRecord(SOL_PAIR, (c1, c2), pair)
            gb.offer(c1, c2, lambda r=rec: r, tag=tag)


def store_partial(chi: dict, state: int, g1, g2, path_id: int, refine: bool) -> None:
    """Append the expansion snapshot to the state's list for future matching.

    Without tie-breaking the previous entry may be a dominated duplicate of
    this one (same g1, larger g2); the refinement drops it so each list keeps
    at most one dominated node.
    """
    lst = chi.get(state)
    if lst is None:
        lst = []
        chi[state] = lst
    if refine and lst and lst[-1][0] == g1:
        lst.pop()
    assert not lst or lst[-1][0] <= g1, "stored expansions must be g1-ordered"
    lst.append((g1, g2, path_id))


class DirectionState:
    """Queue, pool, parent arrays and g_min for one search direction."""

    def __init__(self, graph: Graph, tables: BoundsTables, gb: GlobalBounds,
                 direction: int, ordering: tuple, queue: QueueConfig,
                 initial_state: int):
        n = graph.state_count
        p, s = ordering
        self.direction = direction
        self.ordering = ordering
        self.g_min = [INF] * n
        self.pool = NodePool()
        self.parents = ParentArrays(n)
        h = tables.h[direction]
        f1 = h[ATTR1][initial_state]
        f2 = h[ATTR2][initial_state]
        fp = f1 if p == ATTR1 else f2
        fmax = gb.f1_bar if p == ATTR1 else gb.f2_bar
        self.open = new_queue(replace(queue, f_min=int(fp), f_max=int(fmax)))
        handle = self.pool.allocate(initial_state, 0, 0, f1, f2, None, 0)
        fs = f2 if p == ATTR1 else f1
        self.open.push(int(fp), int(fs), handle)


class SearchContext:
    """Everything one direction's main loop needs, plus the node processor."""

    def __init__(self, graph: Graph, tables: BoundsTables, gb: GlobalBounds,
                 ds: DirectionState, *, bidirectional: bool,
                 budget: Optional[Fraction] = None,
                 budget_opp: Optional[Fraction] = None,
                 chi_mine: Optional[dict] = None, chi_opp: Optional[dict] = None,
                 chi_locks: Optional[list] = None, htf: bool = False,
                 options: Optional[SolveOptions] = None):
        self.graph = graph
        self.tables = tables
        self.gb = gb
        self.ds = ds
        self.bidirectional = bidirectional
        self.budget = budget
        self.budget_opp = budget_opp
        self.chi_mine = chi_mine
        self.chi_opp = chi_opp
        self.chi_locks = chi_locks
        self.htf = htf
        self.options = options or SolveOptions()
        self.metrics = Metrics()
        self.trace: list = []
        self.tuned: list = []
        d = ds.direction
        self.opp = 1 - d
        p, s = ds.ordering
        self.p, self.s = p, s
        self.h_p = tables.h[d][p]
        self.h_1 = tables.h[d][ATTR1]
        self.h_2 = tables.h[d][ATTR2]
        self.ub_p = tables.ub[d][p]
        self.ub_opp_1 = tables.ub[self.opp][ATTR1]
        self.ub_opp_2 = tables.ub[self.opp][ATTR2]
        self.tie_break = self.ds.open.cfg.tie_policy == TIE_SECONDARY
        self.refine_store = not self.tie_break
        self._last_popped_fp = -INF
        self.tag = f"esu:{'f' if d == FORWARD else 'b'}:{p + 1}{s + 1}"

    def _lock_for(self, state: int):
        return self.chi_locks[state & (len(self.chi_locks) - 1)]

    def process(self, item) -> int:
        """One Alg-8-style iteration body for an already-popped queue item."""
        kp, ks, handle = item
        pool = self.ds.pool
        gb = self.gb
        u = pool.state[handle]
        g1 = pool.g1[handle]
        g2 = pool.g2[handle]
        f1 = pool.f1[handle]
        f2 = pool.f2[handle]
        p = self.p
        fp = f1 if p == ATTR1 else f2

        if self.options.check_invariants:
            assert fp >= self._last_popped_fp, "popped primary keys must be non-decreasing"
            self._last_popped_fp = fp

        fp_bar = gb.f1_bar if p == ATTR1 else gb.f2_bar
        if fp > fp_bar:
            pool.recycle(handle)
            return _BREAK

        if self.htf:
            # A concurrent tuning of this direction's secondary heuristic can
            # leave the stored f_s stale; refresh it, re-ordering if ties matter.
            h_s = self.h_2[u] if p == ATTR1 else self.h_1[u]
            g_s_val = g2 if p == ATTR1 else g1
            fresh_fs = g_s_val + h_s
            stored_fs = f2 if p == ATTR1 else f1
            if fresh_fs > stored_fs:
                if p == ATTR1:
                    f2 = pool.f2[handle] = fresh_fs
                else:
                    f1 = pool.f1[handle] = fresh_fs
                if self.tie_break:
                    self.metrics.stale_reinserts += 1
                    self.ds.open.push(kp, fresh_fs, handle)
                    return _CONTINUE

        if p == ATTR2 and f1 > gb.f1_bar:
            # Secondary-cost invalidation; only the (f2, f1) order needs it since
            # nodes there are not ordered by f1.
            self.metrics.prunes_global_f1 += 1
            pool.recycle(handle)
            return _CONTINUE

        gs = g2 if p == ATTR1 else g1
        if gs >= self.ds.g_min[u]:
            self.metrics.prunes_dominance += 1
            pool.recycle(handle)
            return _CONTINUE

        if self.htf and self.ds.g_min[u] == INF:
            # First expansion of u in this ordering: its costs bound every later
            # valid path to u, so the opposite direction may adopt them.
            gp = g1 if p == ATTR1 else g2
            self.tables.h[self.opp][p][u] = gp
            self.tables.ub[self.opp][self.s][u] = gs
            if self.options.record_tuning:
                self.tuned.append((self.opp, p, u, gp, self.s, gs))

        self.ds.g_min[u] = gs
        idx = self.ds.parents.record_expansion(u, pool.parent_state[handle],
                                               pool.parent_path_id[handle])
        if self.options.check_invariants:
            seq = self.ds.parents.backtrack(u, idx)
            assert len(set(seq)) == len(seq), "expanded path revisits a state"
        if self.options.record_trace:
            self.trace.append((u, g1, g2))

        esu(gb, self.tables, self.ds.direction, self.ds.ordering,
            u, g1, g2, f1, f2, idx, tag=self.tag)

        if self.h_p[u] == self.ub_p[u]:
            pool.recycle(handle)
            return _CONTINUE

        gated = False
        if self.budget is None or g2 <= self.budget * gb.f2_bar:
            self.expand_prune(u, g1, g2, idx)
        else:
            gated = True
            if self.options.check_invariants:
                assert self.h_2[u] <= self.budget_opp * gb.f2_bar, \
                    "budget-rejected node outside the coupling area"

        if self.chi_mine is not None:
            if self.h_2[u] <= self.budget_opp * gb.f2_bar or self.chi_opp.get(u):
                lock = self._lock_for(u)
                with lock:
                    match_partial(gb, self.chi_opp.get(u), self.ds.direction,
                                  u, g1, g2, idx, tag="match")
                    store_partial(self.chi_mine, u, g1, g2, idx, self.refine_store)
            elif gated and self.options.check_invariants:
                raise AssertionError("budget-rejected node was not matched/stored")

        pool.recycle(handle)
        return _CONTINUE

    def expand_prune(self, u: int, g1, g2, idx: int) -> None:
        """ExP: generate successors, prune by dominance, state bounds and validity."""
        m = self.metrics
        m.expansions += 1
        gb = self.gb
        pool = self.ds.pool
        open_q = self.ds.open
        p = self.p
        h1 = self.h_1
        h2 = self.h_2
        g_min = self.ds.g_min
        bidir = self.bidirectional
        for v, c1, c2 in self.graph.successors(u, self.ds.direction):
            m.generations += 1
            ng1 = g1 + c1
            ng2 = g2 + c2
            ngs = ng2 if p == ATTR1 else ng1
            if ngs >= g_min[v]:
                m.prunes_dominance += 1
                continue
            if bidir and (ng1 > self.ub_opp_1[v] or ng2 > self.ub_opp_2[v]):
                m.prunes_state_ub += 1
                continue
            nf1 = ng1 + h1[v]
            nf2 = ng2 + h2[v]
            if nf1 > gb.f1_bar:
                m.prunes_global_f1 += 1
                continue
            if nf2 > gb.f2_bar:
                m.prunes_global_f2 += 1
                continue
            handle = pool.allocate(v, ng1, ng2, nf1, nf2, u, idx)
            if p == ATTR1:
                open_q.push(int(nf1), int(nf2), handle)
            else:
                open_q.push(int(nf2), int(nf1), handle)

    def collect(self, metrics: Metrics) -> None:
        metrics.absorb(self.metrics)
        st = self.ds.open.stats()
        metrics.pushes += st.pushes
        metrics.pops += st.pops
        metrics.queue_ops += st.queue_ops
        metrics.queue_peak += st.peak_size
        metrics.pool_slots += self.ds.pool.slots_created
        metrics.pool_blocks += self.ds.pool.blocks_allocated


# ---------------------------------------------------------------------------
# Path reconstruction


def reconstruct_solution(record: SolutionRecord, tables: BoundsTables,
                         parents: dict[int, ParentArrays]) -> Optional[list[int]]:
    """Rebuild the start-goal state sequence described by a solution record."""
    if record.kind == SOL_NONE:
        return None
    if record.kind == SOL_SINGLE:
        direction, state, path_id, join_attr = record.data
        return reconstruct(parents[direction], tables.tree[direction][join_attr],
                           state, path_id, direction)
    if record.kind == SOL_PAIR:
        (fd, fstate, fidx), (bd, bstate, bidx) = record.data
        fpart = parents[FORWARD].backtrack(fstate, fidx)
        bpart = parents[BACKWARD].backtrack(bstate, bidx)
        return join_forward(fpart, list(reversed(bpart)))
    # initial: two tree walks glued at the join state
    state, attr_to_start, attr_to_goal = record.data
    if attr_to_start is not None:
        left = list(reversed(walk_tree(tables.tree[BACKWARD][attr_to_start], state)))
    else:
        left = [state]
    if attr_to_goal is not None:
        right = walk_tree(tables.tree[FORWARD][attr_to_goal], state)
    else:
        right = [state]
    return join_forward(left, right)


def path_cost(graph: Graph, path: list[int]) -> tuple[int, int]:
    """Sum the (cost1, cost2) pair along a state sequence."""
    t1 = t2 = 0
    for u, v in zip(path, path[1:]):
        for w, c1, c2 in graph.successors(u, FORWARD):
            if w == v:
                t1 += c1
                t2 += c2
                break
        else:
            raise ValueError(f"no edge {u} -> {v} on reconstructed path")
    return t1, t2


# ---------------------------------------------------------------------------
# Drivers


class _Clock:
    """Timeout bookkeeping: wall clock consulted every 4096 iterations."""

    def __init__(self, timeout: Optional[float]):
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.counter = 0
        self.timed_out = False

    def expired(self) -> bool:
        if self.deadline is None:
            return False
        if self.counter & _TIMEOUT_CHECK_MASK == 0:
            if time.monotonic() >= self.deadline:
                self.timed_out = True
        self.counter += 1
        return self.timed_out


def _finish(graph: Graph, init: InitResult, contexts: list[SearchContext],
            options: SolveOptions, started: float, timed_out: bool) -> SolveOutcome:
    gb = init.gb
    metrics = Metrics()
    qstats = {}
    parents: dict[int, ParentArrays] = {}
    for ctx in contexts:
        ctx.collect(metrics)
        name = "forward" if ctx.ds.direction == FORWARD else "backward"
        qstats[name] = ctx.ds.open.stats()
        parents[ctx.ds.direction] = ctx.ds.parents
    metrics.wall_time_s = time.monotonic() - started

    record = gb.record
    status = STATUS_TIMEOUT if timed_out else STATUS_OPTIMAL
    if record.kind == SOL_NONE:
        outcome = SolveOutcome(STATUS_INFEASIBLE if not timed_out else STATUS_TIMEOUT,
                               None, None, metrics, record, qstats)
    else:
        path = None
        if options.compute_path:
            path = reconstruct_solution(record, init.tables, parents)
            if options.check_invariants and not timed_out:
                assert tuple(path_cost(graph, path)) == tuple(record.costs)
        outcome = SolveOutcome(status, tuple(record.costs), path, metrics, record, qstats)
    if options.record_incumbents:
        outcome.incumbents = gb.incumbents
    if options.record_tuning:
        outcome.tuned = [t for ctx in contexts for t in ctx.tuned]
    if options.record_trace:
        outcome.trace = {("forward" if c.ds.direction == FORWARD else "backward"): c.trace
                         for c in contexts}
        outcome.parents = parents
    return outcome


def _init_outcome(graph: Graph, init: InitResult, options: SolveOptions,
                  started: float) -> SolveOutcome:
    """Outcome for solves decided entirely during initialisation."""
    gb = init.gb
    metrics = Metrics()
    metrics.wall_time_s = time.monotonic() - started
    if init.status == INFEASIBLE:
        return SolveOutcome(STATUS_INFEASIBLE, None, None, metrics, gb.record)
    record = gb.record
    path = None
    if options.compute_path and record.kind != SOL_NONE:
        path = reconstruct_solution(record, init.tables, {})
    outcome = SolveOutcome(STATUS_OPTIMAL, tuple(record.costs), path, metrics, record)
    if options.record_incumbents:
        outcome.incumbents = gb.incumbents
    if options.record_tuning:
        outcome.tuned = []
    return outcome


def solve_wc_astar(graph: Graph, inst: ProblemInstance, queue: QueueConfig,
                   options: Optional[SolveOptions] = None) -> SolveOutcome:
    """Unidirectional forward search in (f1, f2) order."""
    options = options or SolveOptions()
    started = time.monotonic()
    init = init_unidirectional(graph, inst, use_geo=options.use_geo)
    if init.status != SEARCH:
        return _init_outcome(graph, init, options, started)

    ds = DirectionState(graph, init.tables, init.gb, FORWARD, ORDER_12, queue, inst.start)
    ctx = SearchContext(graph, init.tables, init.gb, ds, bidirectional=False,
                        options=options)
    clock = _Clock(options.timeout)
    while not clock.expired():
        item = ds.open.pop()
        if item is None or ctx.process(item) == _BREAK:
            break
    return _finish(graph, init, [ctx], options, started, clock.timed_out)


def solve_wc_ebba(graph: Graph, inst: ProblemInstance, queue: QueueConfig,
                  options: Optional[SolveOptions] = None) -> SolveOutcome:
    """Sequential biased bidirectional search: one expansion at a time, taken
    from whichever queue holds the globally smallest (f1, f2) node."""
    options = options or SolveOptions()
    started = time.monotonic()
    init = init_sequential_bidirectional(graph, inst,
                                         reversed_order=options.init_reversed_order,
                                         use_geo=options.use_geo)
    if init.status != SEARCH:
        return _init_outcome(graph, init, options, started)

    beta = budget_factors(init.valid_states, init.tables.h[FORWARD][ATTR1],
                          init.tables.h[BACKWARD][ATTR1])
    chi_f: dict = {}
    chi_b: dict = {}
    locks = [threading.Lock() for _ in range(64)]
    contexts = []
    for d, chi_mine, chi_opp, b_own, b_opp in (
            (FORWARD, chi_f, chi_b, beta.forward, beta.backward),
            (BACKWARD, chi_b, chi_f, beta.backward, beta.forward)):
        start_state = inst.start if d == FORWARD else inst.goal
        ds = DirectionState(graph, init.tables, init.gb, d, ORDER_12, queue, start_state)
        contexts.append(SearchContext(graph, init.tables, init.gb, ds,
                                      bidirectional=True, budget=b_own, budget_opp=b_opp,
                                      chi_mine=chi_mine, chi_opp=chi_opp, chi_locks=locks,
                                      options=options))
    tie = queue.tie_policy == TIE_SECONDARY
    clock = _Clock(options.timeout)
    while not clock.expired():
        heads = []
        for ctx in contexts:
            head = ctx.ds.open.peek() if len(ctx.ds.open) else None
            if head is not None:
                key = (head[0], head[1]) if tie else (head[0],)
                heads.append((key, ctx))
        if not heads:
            break
        # Smallest key wins; on an exact tie the forward side goes first.
        heads.sort(key=lambda kc: (kc[0], kc[1].ds.direction))
        ctx = heads[0][1]
        if ctx.process(ctx.ds.open.pop()) == _BREAK:
            break
    return _finish(graph, init, contexts, options, started, clock.timed_out)


def _run_parallel(contexts: list[SearchContext], options: SolveOptions,
                  require_both: bool) -> bool:
    """Drive two SearchContexts per options.schedule; returns True on timeout."""
    mode = options.schedule[0]
    if mode == "threads":
        clock = _Clock(options.timeout)
        stop = threading.Event()

        def work(ctx: SearchContext) -> None:
            while not stop.is_set() and not clock.expired():
                item = ctx.ds.open.pop()
                if item is None or ctx.process(item) == _BREAK:
                    break
            if not require_both:
                stop.set()

        threads = [threading.Thread(target=work, args=(c,)) for c in contexts]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        return clock.timed_out

    k = options.schedule[1] if len(options.schedule) > 1 else 1
    clock = _Clock(options.timeout)
    done = [False] * len(contexts)
    while True:
        for side, ctx in enumerate(contexts):
            if done[side]:
                continue
            for _ in range(k):
                if clock.expired():
                    return True
                item = ctx.ds.open.pop()
                if item is None or ctx.process(item) == _BREAK:
                    done[side] = True
                    break
            if not require_both and done[side]:
                return False
        if all(done):
            return False


def solve_wc_ba_star(graph: Graph, inst: ProblemInstance, queue: QueueConfig,
                     options: Optional[SolveOptions] = None) -> SolveOutcome:
    """Two concurrent searches in opposite directions and objective orderings,
    sharing global bounds; terminates as soon as either search terminates."""
    options = options or SolveOptions()
    started = time.monotonic()
    init = init_parallel_bidirectional(graph, inst, schedule=options.schedule,
                                       use_geo=options.use_geo)
    if init.status != SEARCH:
        return _init_outcome(graph, init, options, started)

    ds_f = DirectionState(graph, init.tables, init.gb, FORWARD, ORDER_12, queue, inst.start)
    ds_b = DirectionState(graph, init.tables, init.gb, BACKWARD, ORDER_21, queue, inst.goal)
    contexts = [
        SearchContext(graph, init.tables, init.gb, ds_f, bidirectional=True,
                      htf=options.htf, options=options),
        SearchContext(graph, init.tables, init.gb, ds_b, bidirectional=True,
                      htf=options.htf, options=options),
    ]
    timed_out = _run_parallel(contexts, options, require_both=False)
    return _finish(graph, init, contexts, options, started, timed_out)


def solve_wc_ebba_par(graph: Graph, inst: ProblemInstance, queue: QueueConfig,
                      options: Optional[SolveOptions] = None) -> SolveOutcome:
    """The biased bidirectional search with both directions running concurrently;
    terminates only when both searches have terminated."""
    options = options or SolveOptions()
    started = time.monotonic()
    init = init_parallel_bidirectional(graph, inst, schedule=options.schedule,
                                       use_geo=options.use_geo)
    if init.status != SEARCH:
        return _init_outcome(graph, init, options, started)

    beta = budget_factors(init.valid_states, init.tables.h[FORWARD][ATTR1],
                          init.tables.h[BACKWARD][ATTR1])
    chi_f: dict = {}
    chi_b: dict = {}
    locks = [threading.Lock() for _ in range(64)]
    contexts = []
    for d, chi_mine, chi_opp, b_own, b_opp in (
            (FORWARD, chi_f, chi_b, beta.forward, beta.backward),
            (BACKWARD, chi_b, chi_f, beta.backward, beta.forward)):
        start_state = inst.start if d == FORWARD else inst.goal
        ds = DirectionState(graph, init.tables, init.gb, d, ORDER_12, queue, start_state)
        contexts.append(SearchContext(graph, init.tables, init.gb, ds,
                                      bidirectional=True, budget=b_own, budget_opp=b_opp,
                                      chi_mine=chi_mine, chi_opp=chi_opp, chi_locks=locks,
                                      options=options))
    timed_out = _run_parallel(contexts, options, require_both=True)
    return _finish(graph, init, contexts, options, started, timed_out)


SOLVERS = {
    "wc-astar": solve_wc_astar,
    "wc-ba": solve_wc_ba_star,
    "wc-ebba": solve_wc_ebba,
    "wc-ebba-par": solve_wc_ebba_par,
}
