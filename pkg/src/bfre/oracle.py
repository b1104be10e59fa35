"""Brute-force reference implementations for small instances.

Everything here is deliberately dumb: enumerate the full Cartesian product
of row supports and filter by the batch intersection test, rebuild candidate
points from scratch, sweep grids coordinate by coordinate.  None of the
incremental search machinery is reused, so agreement between this module and
the solver is meaningful evidence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import tolerance
from .errors import CapExceeded
from .resolution import (
    ProblemInstance, ResolutionTables, admissible_upper_bound, build_tables,
    row_value, satisfies_by_tables,
)
from .tnorms import validate

DEFAULT_CAP = 10 ** 6


@dataclass
class OracleReport:
    optimum: tuple | None      # (x, objective) or None
    admissible_count: int
    mismatches: list = field(default_factory=list)


def enumerate_all_admissible(tables: ResolutionTables, cap: int = DEFAULT_CAP, eps=None):
    """Every pick vector over the row supports whose chosen-column cells
    intersect; checked in batch, never incrementally.

    An empty column interval empties every box, so nothing is admissible.
    """
    eps = tolerance.resolve(eps)
    if any(s.is_empty for s in tables.col_interval):
        return []
    bound = admissible_upper_bound(tables)
    if bound > cap:
        raise CapExceeded(bound, cap)
    out = []
    for e in itertools.product(*tables.row_support):
        if _batch_admissible(tables, e, eps):
            out.append(e)
    return out


def _batch_admissible(tables, e, eps) -> bool:
    groups = {}
    for i, j in enumerate(e):
        groups.setdefault(j, []).append(i)
    for j, rows in groups.items():
        inter = tables.s_prime[rows[0]][j]
        for i in rows[1:]:
            inter = inter.intersect(tables.s_prime[i][j], eps)
            if inter.is_empty:
                return False
    return True


def _candidate(tables, e, eps):
    x = [tables.lower_bound(j) for j in range(tables.n)]
    groups = {}
    for i, j in enumerate(e):
        groups.setdefault(j, []).append(i)
    for j, rows in groups.items():
        inter = tables.s_prime[rows[0]][j]
        for i in rows[1:]:
            inter = inter.intersect(tables.s_prime[i][j], eps)
        x[j] = inter.minimum()
    return x


def brute_force_optimum(tables: ResolutionTables, costs, cap: int = DEFAULT_CAP, eps=None) -> OracleReport:
    """Minimum-cost candidate over every admissible pick vector."""
    eps = tolerance.resolve(eps)
    admissible = enumerate_all_admissible(tables, cap, eps)
    best = None
    for e in admissible:
        x = _candidate(tables, e, eps)
        z = sum(c * v for c, v in zip(costs, x))
        if best is None or z < best[1]:
            best = (x, z)
    return OracleReport(optimum=best, admissible_count=len(admissible))


@dataclass
class GridCensus:
    step: float
    points: int
    eq_feasible: set        # grid indices feasible by direct evaluation
    table_feasible: set     # grid indices feasible by the table criterion
    box_feasible: set | None  # grid indices inside some enumerated box
    mismatches: list = field(default_factory=list)


def grid_feasibility_census(p: ProblemInstance, step: float = 0.05,
                            cap: int = DEFAULT_CAP, boxes=None, eps=None) -> GridCensus:
    """Classify every grid point of the unit box by direct evaluation.

    Cross-checks the table criterion on each point, and (when the enumerated
    box decomposition is supplied) box-union membership, recording every
    disagreement.  Box membership is tested with eps-inflated boundaries.
    """
    eps = tolerance.resolve(eps)
    k = round(1.0 / step)
    total = (k + 1) ** p.n
    if total > cap:
        raise CapExceeded(total, cap)
    tables = build_tables(p, eps)
    values = [i / k for i in range(k + 1)]

    eq_ok, tab_ok = set(), set()
    box_ok = set() if boxes is not None else None
    mismatches = []
    for idx in itertools.product(range(k + 1), repeat=p.n):
        x = [values[i] for i in idx]
        direct = all(abs(row_value(p, i, x, eps) - p.b[i]) <= eps for i in range(p.m))
        by_tables = satisfies_by_tables(tables, x, eps)
        if direct:
            eq_ok.add(idx)
        if by_tables:
            tab_ok.add(idx)
        if direct != by_tables:
            mismatches.append(("tables", idx, direct, by_tables))
        if boxes is not None:
            inside = any(
                all(box[j].contains(x[j], eps) for j in range(p.n))
                for _, box in boxes
            )
            if inside:
                box_ok.add(idx)
            if direct != inside:
                mismatches.append(("boxes", idx, direct, inside))
    return GridCensus(step, total, eq_ok, tab_ok, box_ok, mismatches)


# -- random instances ---------------------------------------------------------

#: Entries are snapped to this grid so endpoint coincidences (the hard cases
#: of the set algebra) happen often.
VALUE_GRID_STEP = 0.05


def random_instance(rng: random.Random, family, param=None, m=None, n=None,
                    max_rows: int = 5, max_cols: int = 5) -> ProblemInstance:
    """Random instance with all entries on the 0.05 grid, costs on [0, 5]."""
    m = m if m is not None else rng.randint(1, max_rows)
    n = n if n is not None else rng.randint(1, max_cols)
    snap = lambda: rng.randint(0, 20) / 20
    a_plus = [[snap() for _ in range(n)] for _ in range(m)]
    a_minus = [[snap() for _ in range(n)] for _ in range(m)]
    b = [snap() for _ in range(m)]
    c = [rng.randint(0, 100) / 20 for _ in range(n)]
    return ProblemInstance(a_plus, a_minus, b, c, validate(family, param))


def random_feasible_instance(rng: random.Random, family, param=None, m=None, n=None,
                             max_rows: int = 5, max_cols: int = 5) -> ProblemInstance:
    """Like random_instance, but the right-hand side is back-computed from a
    random grid point, which is therefore feasible by construction."""
    m = m if m is not None else rng.randint(1, max_rows)
    n = n if n is not None else rng.randint(1, max_cols)
    snap = lambda: rng.randint(0, 20) / 20
    a_plus = [[snap() for _ in range(n)] for _ in range(m)]
    a_minus = [[snap() for _ in range(n)] for _ in range(m)]
    c = [rng.randint(0, 100) / 20 for _ in range(n)]
    x = [snap() for _ in range(n)]
    probe = ProblemInstance(a_plus, a_minus, [0.0] * m, c, validate(family, param))
    b = [row_value(probe, i, x) for i in range(m)]
    return ProblemInstance(a_plus, a_minus, b, c, probe.tnorm)
