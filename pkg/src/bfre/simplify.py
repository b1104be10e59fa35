"""Problem reduction: redundant-equation removal and forced assignments.

Two families of techniques.  The feasibility-preserving ones (zero
right-hand sides, singleton column intervals, dominated rows) never change
the feasible set, so they are safe for pure resolution work.  The
optimality-preserving ones additionally discard feasible points that can
never be optimal (forced assignments, two-point rows, lower-bound and
dominated columns, unsupported columns); the reduced problem then only
promises to retain at least one global optimum.

The reducer makes a single pass over the techniques in a fixed order.  Row
removals (whose premises are redundancy facts that stay valid as the problem
shrinks) are re-applied within their own slot until exhausted; the
column-fixing optimality techniques act once, on the state where they first
became applicable, with each planned fix re-validated just before it is
applied.  Chaining those fixes further would be sound but produces a
different, more aggressive reduction than the one this module documents and
tests pin down.

The set tables are never recomputed: removed rows' bounds stay baked into
the column intervals, which is exactly what makes the removals sound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from . import tolerance
from .errors import InconsistentReduction
from .resolution import ResolutionTables, admissible_upper_bound, restrict
from .sets import SetForm


class Mode(Enum):
    FEASIBILITY_PRESERVING = "feasibility_preserving"
    OPTIMALITY_PRESERVING = "optimality_preserving"


class Rule(Enum):
    ZERO_RHS_ROW = "ZeroRhsRow"
    SINGLETON_COLUMN = "SingletonColumn"
    DOMINATED_ROW = "DominatedRow"
    FORCED_ASSIGNMENT = "ForcedAssignment"
    TWO_POINT_ROW = "TwoPointRow"
    LOWER_BOUND_COLUMN = "LowerBoundColumn"
    FREE_COLUMN = "FreeColumn"
    DOMINATED_COLUMN = "DominatedColumn"


@dataclass(frozen=True)
class Action:
    """One applied reduction: variables fixed plus rows/columns dropped.

    Indices are original instance indices.
    """

    rule: Rule
    fixed: dict
    rows: tuple
    cols: tuple
    detail: str = ""


@dataclass(frozen=True)
class LedgerStep:
    action: Action
    bound_before: int
    bound_after: int

    def describe(self) -> str:
        a = self.action
        bits = [f"applied {a.rule.value}"]
        if a.fixed:
            bits.append("fixed " + ", ".join(f"x{j + 1}={v:g}" for j, v in sorted(a.fixed.items())))
        if a.rows:
            bits.append("removed rows {" + ",".join(str(i + 1) for i in a.rows) + "}")
        if a.cols:
            bits.append("removed cols {" + ",".join(str(j + 1) for j in a.cols) + "}")
        bits.append(f"bound {self.bound_before} -> {self.bound_after}")
        return ": ".join([bits[0], ", ".join(bits[1:])])


@dataclass
class ReductionLedger:
    """Ordered record of every applied simplification."""

    steps: list = field(default_factory=list)
    initial_bound: int = 0

    def bound_sequence(self) -> list:
        """Distinct consecutive bound values, starting from the initial one.

        Steps that only drop unsupported columns leave the bound unchanged
        and therefore add no entry.
        """
        seq = [self.initial_bound]
        for s in self.steps:
            if s.bound_after != seq[-1]:
                seq.append(s.bound_after)
        return seq

    def fixed_assignments(self) -> dict:
        out = {}
        for s in self.steps:
            out.update(s.action.fixed)
        return out

    def describe(self) -> list:
        return [s.describe() for s in self.steps]

    def to_json(self) -> dict:
        return {
            "initial_bound": self.initial_bound,
            "bound_sequence": self.bound_sequence(),
            "steps": [
                {
                    "rule": s.action.rule.value,
                    "fixed": {str(k): v for k, v in s.action.fixed.items()},
                    "removed_rows": list(s.action.rows),
                    "removed_cols": list(s.action.cols),
                    "bound_before": s.bound_before,
                    "bound_after": s.bound_after,
                    "detail": s.action.detail,
                }
                for s in self.steps
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class ReducedProblem:
    """Surviving tables plus everything needed to lift answers back."""

    tables: ResolutionTables
    costs: list        # aligned with tables.col_ids
    fixed: dict        # original column -> value
    n_original: int

    def lift(self, x_reduced) -> list:
        """Map a surviving-column vector back to original indexing."""
        x = [0.0] * self.n_original
        for j, v in self.fixed.items():
            x[j] = v
        for pos, j in enumerate(self.tables.col_ids):
            x[j] = x_reduced[pos]
        return x


# -- individual techniques ---------------------------------------------------
#
# Each takes the current (restricted) tables and reports what it would do,
# in original indices.  They never mutate anything.

def rule_zero_rhs(tables: ResolutionTables, eps=None):
    """Rows whose right-hand side is zero are redundant."""
    eps = tolerance.resolve(eps)
    return [tables.row_ids[i] for i in range(tables.m) if tables.rhs[i] <= eps]


def rule_singleton_column(tables: ResolutionTables, eps=None):
    """First column whose interval is a single value: fix it, drop the rows
    that value satisfies."""
    eps = tolerance.resolve(eps)
    for j in range(tables.n):
        ij = tables.col_interval[j]
        if not ij.is_point:
            continue
        k = ij.minimum()
        rows = tuple(tables.row_ids[i] for i in range(tables.m)
                     if tables.s_prime[i][j].contains(k, eps))
        return Action(Rule.SINGLETON_COLUMN, {tables.col_ids[j]: k}, rows, (tables.col_ids[j],))
    return None


def _dominates(tables, i, i0, eps) -> bool:
    """Row i's restricted cells all sit inside row i0's."""
    return all(tables.s_prime[i][j].issubset(tables.s_prime[i0][j], eps)
               for j in range(tables.n))


def rule_dominated_row(tables: ResolutionTables, eps=None):
    """Rows made redundant by another row, removed one at a time.

    Mutually dominating (identical) rows keep the lower index.  The returned
    list is the fixed point of repeated single removals in ascending order.
    """
    eps = tolerance.resolve(eps)
    alive = list(range(tables.m))
    removed = []
    changed = True
    while changed:
        changed = False
        for i0 in alive:
            for i in alive:
                if i == i0:
                    continue
                if _dominates(tables, i, i0, eps):
                    mutual = _dominates(tables, i0, i, eps)
                    if mutual and i0 < i:
                        continue
                    removed.append(tables.row_ids[i0])
                    alive.remove(i0)
                    changed = True
                    break
            if changed:
                break
    return removed


def rule_forced_assignment(tables: ResolutionTables, eps=None):
    """First row supported by a single column whose restricted cell is a
    single value: fix the column, drop every row that value satisfies."""
    eps = tolerance.resolve(eps)
    for i in range(tables.m):
        if len(tables.row_support[i]) != 1:
            continue
        j = tables.row_support[i][0]
        cell = tables.s_prime[i][j]
        if not cell.is_point:
            continue
        k = cell.minimum()
        rows = tuple(tables.row_ids[r] for r in range(tables.m)
                     if tables.s_prime[r][j].contains(k, eps))
        return Action(Rule.FORCED_ASSIGNMENT, {tables.col_ids[j]: k}, rows, (tables.col_ids[j],))
    return None


def rule_two_point_row(tables: ResolutionTables, eps=None):
    """Rows holding a two-point restricted cell never constrain candidate
    minima; all of them go at once."""
    return [tables.row_ids[i] for i in range(tables.m)
            if any(tables.s_prime[i][j].is_pair for j in tables.row_support[i])]


def _support_intersection(tables, j, eps) -> SetForm:
    inter = None
    for i in tables.col_support[j]:
        cell = tables.s_prime[i][j]
        inter = cell if inter is None else inter.intersect(cell, eps)
    return inter if inter is not None else SetForm.empty()


def rule_lower_bound_column(tables: ResolutionTables, eps=None):
    """Columns whose lower bound satisfies every supporting row: fix at the
    lower bound and drop those rows.

    Matches are collected against the entry state and re-validated one by one
    as they are applied.
    """
    eps = tolerance.resolve(eps)
    matches = []
    for j in range(tables.n):
        sup = tables.col_support[j]
        if not sup:
            continue
        lj = tables.lower_bound(j)
        if all(tables.s_prime[i][j].contains(lj, eps) for i in sup):
            matches.append(j)
    if not matches:
        return None
    fixed, rows, cols = {}, [], []
    gone = set()
    for j in matches:
        sup = [i for i in tables.col_support[j] if i not in gone]
        lj = tables.lower_bound(j)
        if not all(tables.s_prime[i][j].contains(lj, eps) for i in sup):
            continue
        fixed[tables.col_ids[j]] = lj
        cols.append(tables.col_ids[j])
        for i in sup:
            gone.add(i)
            rows.append(tables.row_ids[i])
    if not cols:
        return None
    return Action(Rule.LOWER_BOUND_COLUMN, fixed, tuple(rows), tuple(cols))


def rule_free_column(tables: ResolutionTables, eps=None):
    """Columns no surviving row can use: fix at the lower bound.

    Columns with an empty interval are left alone; they belong to the
    feasibility check, not to the reducer.
    """
    fixed = {}
    cols = []
    for j in range(tables.n):
        if not tables.col_support[j] and not tables.col_interval[j].is_empty:
            fixed[tables.col_ids[j]] = tables.lower_bound(j)
            cols.append(tables.col_ids[j])
    if not cols:
        return None
    return Action(Rule.FREE_COLUMN, fixed, (), tuple(cols))


def rule_dominated_column(tables: ResolutionTables, costs, eps=None):
    """Column-vs-column elimination (requires two-point rows already gone).

    Variant (a): if every row that can use column j1 can also use column j2,
    and column j2's supporting rows all meet exactly at its lower bound, then
    no optimum needs column j1: fix it at its own lower bound.

    Variant (b): same nesting, both columns' support intersections are
    singletons at their upper bounds, and paying column j2's full range is
    cheaper than what column j1's value costs: again drop j1 at its lower
    bound.

    No rows are removed, so applying one match never invalidates another;
    the slot drains every match into a single step.
    """
    eps = tolerance.resolve(eps)
    cost_of = {tables.col_ids[j]: costs[j] for j in range(tables.n)}

    def find(alive_cols):
        support = {j: set(tables.col_support[j]) for j in alive_cols}
        for j1 in alive_cols:
            if not support[j1]:
                continue
            inter1 = _support_intersection(tables, j1, eps)
            for j2 in alive_cols:
                if j2 == j1 or not support[j1] <= support[j2]:
                    continue
                inter2 = _support_intersection(tables, j2, eps)
                l2 = tables.lower_bound(j2)
                if inter2.is_point and abs(inter2.minimum() - l2) <= eps:
                    return ("a", j1, j2)
                if not (inter1.is_point and inter2.is_point):
                    continue
                v = inter1.minimum()
                l1, u1 = tables.lower_bound(j1), tables.upper_bound(j1)
                u2 = tables.upper_bound(j2)
                if not (abs(v - l1) <= eps or abs(v - u1) <= eps):
                    continue
                if abs(inter2.minimum() - u2) > eps:
                    continue
                c1 = cost_of[tables.col_ids[j1]]
                c2 = cost_of[tables.col_ids[j2]]
                if c2 * (u2 - l2) < c1 * (v - l1) - eps:
                    return ("b", j1, j2)
        return None

    alive = list(range(tables.n))
    fixed, cols, parts = {}, [], []
    while True:
        hit = find(alive)
        if hit is None:
            break
        variant, j1, j2 = hit
        fixed[tables.col_ids[j1]] = tables.lower_bound(j1)
        cols.append(tables.col_ids[j1])
        parts.append(f"{variant}:x{tables.col_ids[j1] + 1}<-x{tables.col_ids[j2] + 1}")
        alive.remove(j1)
    if not cols:
        return None
    return Action(Rule.DOMINATED_COLUMN, fixed, (), tuple(cols), detail=";".join(parts))


# -- driver -------------------------------------------------------------------

_FEASIBILITY_RULES = (Rule.ZERO_RHS_ROW, Rule.SINGLETON_COLUMN, Rule.DOMINATED_ROW)
_OPTIMALITY_RULES = _FEASIBILITY_RULES + (
    Rule.FORCED_ASSIGNMENT, Rule.TWO_POINT_ROW, Rule.LOWER_BOUND_COLUMN,
    Rule.FREE_COLUMN, Rule.DOMINATED_COLUMN,
)


def simplify(tables: ResolutionTables, costs, mode: Mode, eps=None):
    """Run the reduction pass; returns (ReducedProblem, ReductionLedger).

    ``costs`` must be aligned with ``tables.col_ids``.  The necessary
    feasibility conditions are assumed to have passed.
    """
    eps = tolerance.resolve(eps)
    rules = _FEASIBILITY_RULES if mode is Mode.FEASIBILITY_PRESERVING else _OPTIMALITY_RULES
    n_original = tables.n
    cur = tables
    cost_by_col = {j: costs[pos] for pos, j in enumerate(tables.col_ids)}
    fixed_all = {}
    ledger = ReductionLedger(initial_bound=admissible_upper_bound(tables))

    def apply(action: Action):
        nonlocal cur
        for j, v in action.fixed.items():
            pos = cur.col_ids.index(j)
            if not cur.col_interval[pos].contains(v, eps):
                raise InconsistentReduction(
                    f"{action.rule.value} fixed x{j + 1}={v} outside {cur.col_interval[pos]}")
        before = admissible_upper_bound(cur)
        drop_rows = set(action.rows)
        drop_cols = set(action.cols)
        keep_rows = [i for i in range(cur.m) if cur.row_ids[i] not in drop_rows]
        keep_cols = [j for j in range(cur.n) if cur.col_ids[j] not in drop_cols]
        cur = restrict(cur, keep_rows, keep_cols)
        fixed_all.update(action.fixed)
        ledger.steps.append(LedgerStep(action, before, admissible_upper_bound(cur)))

    for rule in rules:
        if rule is Rule.ZERO_RHS_ROW:
            rows = rule_zero_rhs(cur, eps)
            if rows:
                apply(Action(rule, {}, tuple(rows), ()))
        elif rule is Rule.SINGLETON_COLUMN:
            while (act := rule_singleton_column(cur, eps)) is not None:
                apply(act)
        elif rule is Rule.DOMINATED_ROW:
            while True:
                rows = rule_dominated_row(cur, eps)
                if not rows:
                    break
                apply(Action(rule, {}, (rows[0],), ()))
        elif rule is Rule.FORCED_ASSIGNMENT:
            while (act := rule_forced_assignment(cur, eps)) is not None:
                apply(act)
        elif rule is Rule.TWO_POINT_ROW:
            rows = rule_two_point_row(cur, eps)
            if rows:
                apply(Action(rule, {}, tuple(rows), ()))
        elif rule is Rule.LOWER_BOUND_COLUMN:
            act = rule_lower_bound_column(cur, eps)
            if act is not None:
                apply(act)
        elif rule is Rule.FREE_COLUMN:
            act = rule_free_column(cur, eps)
            if act is not None:
                apply(act)
        elif rule is Rule.DOMINATED_COLUMN:
            costs_now = [cost_by_col[j] for j in cur.col_ids]
            act = rule_dominated_column(cur, costs_now, eps)
            if act is not None:
                apply(act)

    reduced = ReducedProblem(
        tables=cur,
        costs=[cost_by_col[j] for j in cur.col_ids],
        fixed=dict(fixed_all),
        n_original=n_original,
    )
    return reduced, ledger
