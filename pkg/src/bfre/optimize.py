"""Search over pick vectors: candidate construction and branch-and-bound.

A complete assignment of one column to every row (each pick drawn from the
row's support, all chosen-column cell intersections non-empty) carves a
compact box out of the feasible region; the coordinatewise minimum of that
box is the candidate solution, and the global optimum is the cheapest
candidate.  The search builds assignments row by row.  In modified mode a
row that can reuse an already-picked column must reuse the smallest such
column, which prunes equal-cost duplicates without losing any optimum (valid
only after two-point cells have been eliminated).

The tree discipline follows the worked reduction this package reproduces:
after expanding a node, dive into its cheapest viable child; when a branch
ends (complete, pruned, or dead), jump to the cheapest node anywhere in the
live set.  Cost never decreases along a branch, so pruning against the
incumbent is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import tolerance
from .errors import CapExceeded, DeadEnd, InconsistentReduction, NotAdmissible
from .resolution import (
    ProblemInstance, ResolutionTables, admissible_upper_bound, build_tables,
    check_feasibility, FeasibilityStatus, is_feasible_point,
)
from .sets import SetForm
from .simplify import Mode, ReducedProblem, ReductionLedger, simplify


# -- assignment-function primitives ------------------------------------------

def _pick_groups(e) -> dict:
    groups = {}
    for row, col in enumerate(e):
        groups.setdefault(col, []).append(row)
    return groups


def candidate_solution(e, tables: ResolutionTables, eps=None) -> list:
    """Coordinatewise minimum point of the box carved out by a complete
    assignment: picked columns sit at their intersection minimum, the rest at
    their interval lower bound."""
    eps = tolerance.resolve(eps)
    x = [tables.lower_bound(j) for j in range(tables.n)]
    for j, rows in _pick_groups(e).items():
        inter = None
        for i in rows:
            cell = tables.s_prime[i][j]
            inter = cell if inter is None else inter.intersect(cell, eps)
        if inter.is_empty:
            raise NotAdmissible(f"column {j}: picked cells have empty intersection")
        x[j] = inter.minimum()
    return x


def feasible_box(e, tables: ResolutionTables, eps=None) -> list:
    """Per-column sets whose Cartesian product lies in the feasible region."""
    eps = tolerance.resolve(eps)
    box = [tables.col_interval[j] for j in range(tables.n)]
    for j, rows in _pick_groups(e).items():
        inter = None
        for i in rows:
            cell = tables.s_prime[i][j]
            inter = cell if inter is None else inter.intersect(cell, eps)
        if inter.is_empty:
            raise NotAdmissible(f"column {j}: picked cells have empty intersection")
        box[j] = inter
    return box


def admissible_domain(prefix, i, tables: ResolutionTables, eps=None) -> list:
    """Columns row i may pick after the given prefix: its support, minus
    columns whose running intersection the row's cell would annihilate."""
    eps = tolerance.resolve(eps)
    out = []
    for j in tables.row_support[i]:
        inter = tables.s_prime[i][j]
        for k in range(min(i, len(prefix))):
            if prefix[k] == j:
                inter = inter.intersect(tables.s_prime[k][j], eps)
                if inter.is_empty:
                    break
        if not inter.is_empty:
            out.append(j)
    return out


def modified_domain(prefix, i, tables: ResolutionTables, modified=True, eps=None) -> list:
    """Admissible columns for row i, restricted to the forced reuse column
    when one exists.  Raises DeadEnd when the row has no viable column."""
    domain = admissible_domain(prefix, i, tables, eps)
    if modified:
        reusable = [j for j in domain if j in set(prefix[:i])]
        if reusable:
            domain = [min(reusable)]
    if not domain:
        raise DeadEnd(f"row {i} has no viable column after prefix {list(prefix)}")
    return domain


# -- branch-and-bound ----------------------------------------------------------

@dataclass
class _Node:
    uid: int
    picks: tuple
    inter: dict      # column -> running intersection over picking rows
    x: list
    z: float
    depth: int


@dataclass(frozen=True)
class TraceEvent:
    node: int
    picks: tuple
    x: tuple
    z: float
    action: str      # expand | incumbent | prune

    def line(self) -> str:
        e = ", ".join(str(j + 1) for j in self.picks)
        xs = ", ".join(f"{v:g}" for v in self.x)
        return f"node {self.node}: e=[{e}], x=({xs}), z={self.z:g}, action={self.action}"


@dataclass
class SearchStats:
    nodes_created: int = 0
    nodes_expanded: int = 0
    candidates_evaluated: int = 0


@dataclass
class BnbResult:
    x: list | None
    picks: tuple | None
    objective: float | None
    stats: SearchStats
    events: list

    @property
    def found(self) -> bool:
        return self.x is not None


def branch_and_bound(reduced: ReducedProblem, modified=True, record=False, eps=None) -> BnbResult:
    """Best-child dive with jump-to-cheapest backtracking and incumbent
    pruning over the reduced tables.

    Ties among children break by column; jumps break by cost, then deeper
    nodes, then creation order.  ``modified=False`` searches all admissible
    assignments (needed when two-point cells may still be present).
    """
    eps = tolerance.resolve(eps)
    tables = reduced.tables
    costs = reduced.costs
    m, n = tables.m, tables.n
    lows = [tables.lower_bound(j) for j in range(n)]
    base_x = list(lows)
    base_z = sum(c * v for c, v in zip(costs, base_x))
    stats = SearchStats()
    events: list = []

    def emit(node, action):
        if record:
            events.append(TraceEvent(node.uid, node.picks, tuple(node.x), node.z, action))

    if m == 0:
        stats.candidates_evaluated = 1
        return BnbResult(base_x, (), base_z, stats, events)

    incumbent: _Node | None = None
    live: list = []
    counter = 0

    def better_than_incumbent(z):
        return incumbent is None or z < incumbent.z - eps

    def make_child(parent: _Node, j: int):
        nonlocal counter
        prev = parent.inter.get(j)
        cell = tables.s_prime[parent.depth][j]
        inter = cell if prev is None else prev.intersect(cell, eps)
        counter += 1
        stats.nodes_created += 1
        x = list(parent.x)
        z = parent.z
        new_min = inter.minimum()
        if new_min != x[j]:
            z += costs[j] * (new_min - x[j])
            x[j] = new_min
        new_inter = dict(parent.inter)
        new_inter[j] = inter
        return _Node(counter, parent.picks + (j,), new_inter, x, z, parent.depth + 1)

    def sweep_prune():
        nonlocal live
        keep = []
        for node in sorted(live, key=lambda nd: nd.uid):
            if better_than_incumbent(node.z):
                keep.append(node)
            else:
                emit(node, "prune")
        live = keep

    root = _Node(0, (), {}, base_x, base_z, 0)
    current: _Node | None = root

    while current is not None:
        node = current
        current = None
        if node.uid != 0:
            stats.nodes_expanded += 1
            emit(node, "expand")
        try:
            domain = modified_domain(node.picks, node.depth, tables, modified, eps)
        except DeadEnd:
            domain = []
        open_children = []
        for j in domain:
            child = make_child(node, j)
            if child.depth == m:
                stats.candidates_evaluated += 1
                if better_than_incumbent(child.z):
                    incumbent = child
                    emit(child, "incumbent")
                    sweep_prune()
                else:
                    emit(child, "prune")
            elif better_than_incumbent(child.z):
                open_children.append(child)
            else:
                emit(child, "prune")
        # A later sibling may have raised the bar for earlier ones.
        viable = []
        for child in open_children:
            if better_than_incumbent(child.z):
                viable.append(child)
            else:
                emit(child, "prune")
        if viable:
            viable.sort(key=lambda nd: (nd.z, nd.picks[-1]))
            current = viable[0]
            live.extend(viable[1:])
        elif live:
            live.sort(key=lambda nd: (nd.z, -nd.depth, nd.uid))
            current = live.pop(0)

    if incumbent is None:
        return BnbResult(None, None, None, stats, events)
    return BnbResult(incumbent.x, incumbent.picks, incumbent.z, stats, events)


# -- full pipeline --------------------------------------------------------------

class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


class InfeasibleReason(Enum):
    EMPTY_COLUMN = "empty_column"
    UNSATISFIABLE_ROW = "unsatisfiable_row"
    EXHAUSTED_SEARCH = "exhausted_search"


@dataclass
class Solution:
    status: Status
    x: list | None = None
    objective: float | None = None
    reason: InfeasibleReason | None = None
    witness: int | None = None
    ledger: ReductionLedger | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    events: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def trace_lines(self) -> list:
        return [ev.line() for ev in self.events]


def solve(p: ProblemInstance, mode: Mode = Mode.OPTIMALITY_PRESERVING,
          record=False, eps=None) -> Solution:
    """Resolve, check necessary conditions, reduce, search, lift, verify.

    With the optimality-preserving mode (default) the search runs over
    modified assignments; with the feasibility-preserving mode it runs over
    all admissible assignments (the reduction then never discards feasible
    points).
    """
    eps = tolerance.resolve(eps)
    tables = build_tables(p, eps)
    report = check_feasibility(tables)
    if not report.ok:
        reason = (InfeasibleReason.EMPTY_COLUMN
                  if report.status is FeasibilityStatus.EMPTY_COLUMN
                  else InfeasibleReason.UNSATISFIABLE_ROW)
        return Solution(Status.INFEASIBLE, reason=reason, witness=report.witness)
    reduced, ledger = simplify(tables, p.c, mode, eps)
    result = branch_and_bound(reduced, modified=(mode is Mode.OPTIMALITY_PRESERVING),
                              record=record, eps=eps)
    if not result.found:
        return Solution(Status.INFEASIBLE, reason=InfeasibleReason.EXHAUSTED_SEARCH,
                        ledger=ledger, stats=result.stats, events=result.events)
    x = reduced.lift(result.x)
    if not is_feasible_point(p, x, eps, tables=tables):
        raise InconsistentReduction(
            "reduction produced a candidate violating the original system")
    objective = sum(c * v for c, v in zip(p.c, x))
    return Solution(Status.OPTIMAL, x=x, objective=objective, ledger=ledger,
                    stats=result.stats, events=result.events)


def enumerate_feasible_decomposition(p: ProblemInstance, cap: int = 10 ** 6, eps=None):
    """All compact boxes whose union is the feasible region.

    Runs the feasibility-preserving reduction, then enumerates every
    admissible assignment of the reduced problem depth-first.  Returns a list
    of (assignment, boxes) pairs in original indexing: the assignment maps
    original row -> original column, the boxes list one set per original
    variable.  Raises CapExceeded when the support-size product exceeds cap.
    """
    eps = tolerance.resolve(eps)
    tables = build_tables(p, eps)
    if not check_feasibility(tables).ok:
        return []
    reduced, _ = simplify(tables, p.c, Mode.FEASIBILITY_PRESERVING, eps)
    sub = reduced.tables
    bound = admissible_upper_bound(sub)
    if bound > cap:
        raise CapExceeded(bound, cap)

    out = []
    m = sub.m

    def lift_box(box):
        full = [None] * p.n
        for j, v in reduced.fixed.items():
            full[j] = SetForm.point(v)
        for pos, j in enumerate(sub.col_ids):
            full[j] = box[pos]
        return full

    def rec(prefix):
        if len(prefix) == m:
            e = tuple(prefix)
            assignment = {sub.row_ids[i]: sub.col_ids[j] for i, j in enumerate(e)}
            out.append((assignment, lift_box(feasible_box(e, sub, eps))))
            return
        try:
            domain = modified_domain(prefix, len(prefix), sub, modified=False, eps=eps)
        except DeadEnd:
            return
        for j in domain:
            prefix.append(j)
            rec(prefix)
            prefix.pop()

    if m == 0:
        out.append(({}, lift_box([sub.col_interval[j] for j in range(sub.n)])))
    else:
        rec([])
    return out
