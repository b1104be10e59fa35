"""Resolution of the feasible region into per-cell and per-column sets.

For every equation i and variable j the bipolar term
max(T(a+_ij, x_j), T(a-_ij, 1 - x_j)) induces two sets: the cell solution set
(values of x_j hitting b_i exactly) and the cell relaxation set (values
keeping the term <= b_i).  Intersecting relaxation sets down each column
yields the box constraint every feasible point obeys; restricting each cell
solution set to that box gives the sets the search actually uses.

A restricted view of the tables (rows/columns dropped) deliberately keeps the
original column intervals: redundancy arguments for removed rows rely on the
original bounds, so they are frozen, never recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import tolerance
from .sets import SetForm
from .tnorms import DomainError, TNorm, evaluate, solve_u


@dataclass(frozen=True)
class ProblemInstance:
    """Input data: coefficient matrices, right-hand side, costs, t-norm.

    All matrix/vector entries live in [0, 1]; costs are nonnegative (callers
    with negative costs must substitute variables before building an
    instance).
    """

    a_plus: list
    a_minus: list
    b: list
    c: list
    tnorm: TNorm

    def __post_init__(self):
        m = len(self.b)
        n = len(self.c)
        if len(self.a_plus) != m or len(self.a_minus) != m:
            raise ValueError(f"matrix row count != len(b)={m}")
        for name, mat in (("a_plus", self.a_plus), ("a_minus", self.a_minus)):
            for i, row in enumerate(mat):
                if len(row) != n:
                    raise ValueError(f"{name}[{i}] has {len(row)} entries, expected {n}")
                for j, v in enumerate(row):
                    if not 0.0 <= v <= 1.0:
                        raise ValueError(f"{name}[{i}][{j}] out of [0,1]")
        for i, v in enumerate(self.b):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"b[{i}] out of [0,1]")
        for j, v in enumerate(self.c):
            if v < 0:
                raise ValueError(f"c[{j}] negative")

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def n(self) -> int:
        return len(self.c)


def bipolar_cell(t: TNorm, a_plus: float, a_minus: float, b: float, eps=None):
    """Solution and relaxation sets of one bipolar term.

    Returns (solution_set, relaxation_set).  The five cases split on which of
    a+, a- reach b and on whether b is zero; a crossed interval (the two
    one-sided bounds exclude each other) makes the cell infeasible and both
    sets come back empty.
    """
    eps = tolerance.resolve(eps)
    plus_ge = a_plus >= b - eps
    minus_ge = a_minus >= b - eps
    if not plus_ge and not minus_ge:
        return SetForm.empty(), SetForm.interval(0.0, 1.0, eps)
    if b > eps:
        if plus_ge and not minus_ge:
            u = solve_u(t, a_plus, b, eps)
            return SetForm.point(u), SetForm.interval(0.0, u, eps)
        if minus_ge and not plus_ge:
            u = solve_u(t, a_minus, b, eps)
            return SetForm.point(1.0 - u), SetForm.interval(1.0 - u, 1.0, eps)
        lo = 1.0 - solve_u(t, a_minus, b, eps)
        hi = solve_u(t, a_plus, b, eps)
        if lo > hi + eps:
            return SetForm.empty(), SetForm.empty()
        if hi - lo <= eps:
            return SetForm.point(lo), SetForm.point(lo)
        return SetForm.pair(lo, hi, eps), SetForm.interval(lo, hi, eps)
    # b == 0: both sides always reach b, and solving == relaxing.
    lo = 1.0 - solve_u(t, a_minus, 0.0, eps)
    hi = solve_u(t, a_plus, 0.0, eps)
    if lo > hi + eps:
        return SetForm.empty(), SetForm.empty()
    cell = SetForm.interval(lo, hi, eps)
    return cell, cell


@dataclass(frozen=True)
class ResolutionTables:
    """All per-cell and per-column sets of one instance (or a restriction).

    ``row_ids``/``col_ids`` map positions back to the original instance.  In
    a restricted view ``col_interval`` keeps the values computed from the
    full instance.
    """

    i_cell: list          # relaxation set per (row, col)
    s_cell: list          # solution set per (row, col)
    col_interval: list    # per column, intersection of relaxation sets
    s_prime: list         # solution set restricted to the column interval
    row_support: list     # per row: columns with non-empty restricted set
    col_support: list     # per column: rows with non-empty restricted set
    row_ids: list
    col_ids: list
    rhs: list             # b value per (surviving) row

    @property
    def m(self) -> int:
        return len(self.row_ids)

    @property
    def n(self) -> int:
        return len(self.col_ids)

    def lower_bound(self, j: int) -> float:
        return self.col_interval[j].minimum()

    def upper_bound(self, j: int) -> float:
        return self.col_interval[j].maximum()


def build_tables(p: ProblemInstance, eps=None) -> ResolutionTables:
    """Resolve an instance into its complete set tables."""
    eps = tolerance.resolve(eps)
    m, n = p.m, p.n
    i_cell = [[None] * n for _ in range(m)]
    s_cell = [[None] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            s, rel = bipolar_cell(p.tnorm, p.a_plus[i][j], p.a_minus[i][j], p.b[i], eps)
            s_cell[i][j] = s
            i_cell[i][j] = rel
    col_interval = []
    for j in range(n):
        inter = SetForm.interval(0.0, 1.0, eps)
        for i in range(m):
            inter = inter.intersect(i_cell[i][j], eps)
        col_interval.append(inter)
    s_prime = [[None] * n for _ in range(m)]
    for j in range(n):
        ij = col_interval[j]
        targets = () if ij.is_empty else (ij.minimum(), ij.maximum())
        for i in range(m):
            cell = s_cell[i][j].intersect(ij, eps)
            # pin endpoints exactly onto the column bounds
            s_prime[i][j] = cell.snap(targets, eps)
    row_support = [[j for j in range(n) if not s_prime[i][j].is_empty] for i in range(m)]
    col_support = [[i for i in range(m) if not s_prime[i][j].is_empty] for j in range(n)]
    return ResolutionTables(
        i_cell, s_cell, col_interval, s_prime,
        row_support, col_support,
        list(range(m)), list(range(n)), list(p.b),
    )


def restrict(tables: ResolutionTables, keep_rows, keep_cols) -> ResolutionTables:
    """Drop rows/columns (given as positions) without recomputing any set."""
    keep_rows = list(keep_rows)
    keep_cols = list(keep_cols)
    sub = lambda grid: [[grid[i][j] for j in keep_cols] for i in keep_rows]
    s_prime = sub(tables.s_prime)
    m, n = len(keep_rows), len(keep_cols)
    row_support = [[j for j in range(n) if not s_prime[i][j].is_empty] for i in range(m)]
    col_support = [[i for i in range(m) if not s_prime[i][j].is_empty] for j in range(n)]
    return ResolutionTables(
        sub(tables.i_cell), sub(tables.s_cell),
        [tables.col_interval[j] for j in keep_cols],
        s_prime, row_support, col_support,
        [tables.row_ids[i] for i in keep_rows],
        [tables.col_ids[j] for j in keep_cols],
        [tables.rhs[i] for i in keep_rows],
    )


class FeasibilityStatus(Enum):
    NECESSARY_CONDITIONS_PASS = "necessary_conditions_pass"
    EMPTY_COLUMN = "empty_column"
    UNSATISFIABLE_ROW = "unsatisfiable_row"


@dataclass(frozen=True)
class FeasibilityReport:
    status: FeasibilityStatus
    witness: int | None = None  # original row/column id of the failure

    @property
    def ok(self) -> bool:
        return self.status is FeasibilityStatus.NECESSARY_CONDITIONS_PASS


def check_feasibility(tables: ResolutionTables) -> FeasibilityReport:
    """Two necessary feasibility conditions (not sufficient ones).

    A column whose interval is empty, or a row with no usable cell, rules the
    instance out immediately; passing both only means the search must decide.
    """
    for j in range(tables.n):
        if tables.col_interval[j].is_empty:
            return FeasibilityReport(FeasibilityStatus.EMPTY_COLUMN, tables.col_ids[j])
    for i in range(tables.m):
        if not tables.row_support[i]:
            return FeasibilityReport(FeasibilityStatus.UNSATISFIABLE_ROW, tables.row_ids[i])
    return FeasibilityReport(FeasibilityStatus.NECESSARY_CONDITIONS_PASS)


def row_value(p: ProblemInstance, i: int, x, eps=None) -> float:
    """Left-hand side of equation i at the point x."""
    t = p.tnorm
    return max(
        max(evaluate(t, p.a_plus[i][j], x[j], eps), evaluate(t, p.a_minus[i][j], 1.0 - x[j], eps))
        for j in range(p.n)
    )


def satisfies_by_tables(tables: ResolutionTables, x, eps=None) -> bool:
    """Membership test from the tables: in every column interval, and each
    row witnessed by some restricted cell."""
    eps = tolerance.resolve(eps)
    for j in range(tables.n):
        if not tables.col_interval[j].contains(x[j], eps):
            return False
    for i in range(tables.m):
        if not any(tables.s_prime[i][j].contains(x[j], eps) for j in tables.row_support[i]):
            return False
    return True


def is_feasible_point(p: ProblemInstance, x, eps=None, tables: ResolutionTables | None = None) -> bool:
    """Check every row equality directly at x.

    When freshly built tables are supplied, a debug assertion cross-checks
    the direct evaluation against the table criterion.
    """
    eps = tolerance.resolve(eps)
    if len(x) != p.n:
        raise DomainError(f"point has {len(x)} coordinates, expected {p.n}")
    for j, v in enumerate(x):
        if v < -eps or v > 1.0 + eps:
            raise DomainError(f"x[{j}]={v!r} outside [0, 1]")
    x = [min(1.0, max(0.0, v)) for v in x]
    ok = all(abs(row_value(p, i, x, eps) - p.b[i]) <= eps for i in range(p.m))
    if tables is not None:
        assert ok == satisfies_by_tables(tables, x, eps), \
            f"direct and table feasibility criteria disagree at {x}"
    return ok


def admissible_upper_bound(tables: ResolutionTables) -> int:
    """Product of row support sizes: cap on the number of pick vectors."""
    bound = 1
    for i in range(tables.m):
        bound *= len(tables.row_support[i])
    return bound


# -- export helpers ---------------------------------------------------------

def grid_strings(grid) -> list:
    """Render a grid of SetForms as display strings."""
    return [[str(cell) for cell in row] for row in grid]


def tables_to_json(tables: ResolutionTables) -> dict:
    return {
        "rows": tables.row_ids,
        "cols": tables.col_ids,
        "relaxation": grid_strings(tables.i_cell),
        "solution": grid_strings(tables.s_cell),
        "column_interval": [str(s) for s in tables.col_interval],
        "restricted": grid_strings(tables.s_prime),
    }


def tables_to_csv(tables: ResolutionTables, which: str) -> str:
    """CSV rendering of one table; ``which`` is a key of tables_to_json."""
    data = tables_to_json(tables)[which]
    header = "row," + ",".join(f"x{j + 1}" for j in tables.col_ids)
    if which == "column_interval":
        return header + "\n-," + ",".join(f'"{s}"' for s in data) + "\n"
    lines = [header]
    for rid, row in zip(tables.row_ids, data):
        lines.append(f"{rid + 1}," + ",".join(f'"{s}"' for s in row))
    return "\n".join(lines) + "\n"
