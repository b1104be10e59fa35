import random

import pytest

from bfre import (
    CapExceeded, DeadEnd, InfeasibleReason, Mode, NotAdmissible, Status,
    branch_and_bound, build_tables, candidate_solution, check_feasibility,
    enumerate_feasible_decomposition, feasible_box, is_feasible_point,
    modified_domain, simplify, solve,
)
from bfre.optimize import admissible_domain
from bfre.oracle import (
    brute_force_optimum, enumerate_all_admissible, random_feasible_instance,
    random_instance,
)
from conftest import make_instance

TOL = 1e-9

# Three pick vectors over the full demonstration instance (0-based columns).
E1 = (4, 0, 5, 2, 4, 7, 9, 8, 9, 5)   # inadmissible: rows 1 and 5 clash on column 5
E2 = (0, 7, 5, 1, 2, 7, 9, 8, 9, 5)
E3 = (0, 7, 5, 1, 0, 7, 9, 8, 9, 5)


@pytest.fixture()
def reduced_example(example, example_tables):
    reduced, _ = simplify(example_tables, example.c, Mode.OPTIMALITY_PRESERVING)
    return reduced


class TestCandidateSolution:
    def test_shared_column_intersection(self, example_tables):
        x = candidate_solution(E3, example_tables)
        assert x[0] == pytest.approx(0.4, abs=TOL)

    def test_unpicked_columns_sit_at_lower_bounds(self, example_tables):
        x = candidate_solution(E2, example_tables)
        # columns 4, 5(0-based 3, 4) and 7 are never picked by E2
        assert x[3] == example_tables.lower_bound(3)
        assert x[6] == example_tables.lower_bound(6)

    def test_reduced_example_first_leaf(self, reduced_example):
        x = candidate_solution((0, 1, 0), reduced_example.tables)
        assert x == pytest.approx([0.4, 0.64, 0.0], abs=TOL)
        z = sum(c * v for c, v in zip(reduced_example.costs, x))
        assert z == pytest.approx(0.624, abs=TOL)

    def test_inadmissible_rejected(self, example_tables):
        with pytest.raises(NotAdmissible):
            candidate_solution(E1, example_tables)


class TestFeasibleBox:
    def test_known_product_box(self, example_tables):
        box = feasible_box(E2, example_tables)
        want = ["{0.4}", "{0.64}", "{0.6}", "[0,1]", "[0.3,0.6]",
                "{0,1}", "[0,0.55]", "{0.2}", "{0.8}", "{0.6}"]
        assert [str(s) for s in box] == want

    def test_single_row_instance(self):
        p = make_instance([[0.9, 0.0]], [[0.0, 0.0]], [0.5])
        tb = build_tables(p)
        box = feasible_box((0,), tb)
        assert str(box[0]) == "{0.6}" and box[1].same(tb.col_interval[1])

    def test_sampled_points_are_feasible(self, example, example_tables):
        box = feasible_box(E2, example_tables)
        rng = random.Random(3)
        for _ in range(100):
            x = []
            for s in box:
                if s.is_interval:
                    x.append(s.lo + rng.random() * (s.hi - s.lo))
                elif s.is_pair:
                    x.append(rng.choice(s.values()))
                else:
                    x.append(s.lo)
            assert is_feasible_point(example, x)


class TestDomains:
    def test_clashing_reuse_excluded(self, example_tables):
        # after rows 1-4 of E1, row 5 can reuse neither column 5 (clash with
        # row 1's cell) nor column 1 (clash with row 2's cell)
        dom = admissible_domain(E1[:4], 4, example_tables)
        assert 4 not in dom and dom == [2, 3]

    def test_forced_reuse_is_minimum(self, example_tables):
        assert modified_domain(E2[:4], 4, example_tables) == [0]

    def test_reduced_node_two_domain(self, reduced_example):
        assert modified_domain((1,), 1, reduced_example.tables) == [2]

    def test_dead_end_raises(self):
        p = make_instance([[0.2], [0.8]], [[0.7], [0.2]], [0.5, 0.5])
        tb = build_tables(p)
        with pytest.raises(DeadEnd):
            modified_domain((0,), 1, tb)


class TestBranchAndBound:
    def test_golden_trace(self, reduced_example):
        res = branch_and_bound(reduced_example, record=True)
        assert res.objective == pytest.approx(0.624, abs=TOL)
        assert res.x == pytest.approx([0.4, 0.64, 0.0], abs=TOL)
        assert res.picks == (0, 1, 0)
        got = [(ev.node, list(ev.picks), ev.action) for ev in res.events]
        assert got == [
            (1, [0], "expand"),
            (3, [0, 1], "expand"),
            (5, [0, 1, 0], "incumbent"),
            (4, [0, 2], "prune"),
            (2, [1], "expand"),
            (6, [1, 2], "prune"),
        ]
        assert res.stats.nodes_created == 6
        assert res.stats.nodes_expanded == 3
        assert res.stats.candidates_evaluated == 1
        pruned = {ev.node: ev.z for ev in res.events if ev.action == "prune"}
        assert set(pruned) == {4, 6}
        assert all(z == pytest.approx(1.098, abs=TOL) for z in pruned.values())

    def test_trace_lines_format(self, reduced_example):
        res = branch_and_bound(reduced_example, record=True)
        lines = [ev.line() for ev in res.events]
        assert lines[0] == "node 1: e=[1], x=(0.4, 0.4, 0), z=0.54, action=expand"
        assert lines[2] == "node 5: e=[1, 2, 1], x=(0.4, 0.64, 0), z=0.624, action=incumbent"

    def test_single_row_single_column(self):
        p = make_instance([[1.0, 0.0]], [[0.2, 0.0]], [0.5], c=[1.0, 2.0])
        tb = build_tables(p)
        reduced, _ = simplify(tb, p.c, Mode.FEASIBILITY_PRESERVING)
        res = branch_and_bound(reduced, record=True)
        assert res.found and res.picks == (0,)
        assert reduced.lift(res.x) == pytest.approx([0.5, 0.0], abs=TOL)
        assert res.stats.nodes_created == 1 and res.stats.candidates_evaluated == 1

    def test_zero_row_reduction_returns_lower_bounds(self):
        p = make_instance([[1.0, 0.0], [0.0, 0.9]], [[1.0, 0.0], [0.0, 0.9]],
                          [0.5, 0.4], c=[1.0, 1.0])
        reduced, _ = simplify(build_tables(p), p.c, Mode.OPTIMALITY_PRESERVING)
        assert reduced.tables.m == 0
        res = branch_and_bound(reduced)
        assert res.found and res.picks == ()
        assert reduced.lift(res.x) == pytest.approx([0.5, 0.5], abs=TOL)

    def test_exhausted_search(self):
        p = make_instance([[0.2], [0.8]], [[0.7], [0.2]], [0.5, 0.5])
        tb = build_tables(p)
        reduced, _ = simplify(tb, p.c, Mode.FEASIBILITY_PRESERVING)
        res = branch_and_bound(reduced, modified=False)
        assert not res.found

    def test_admissible_and_modified_searches_agree(self):
        rng = random.Random(9001)
        for _ in range(120):
            fam, param = rng.choice([("lukasiewicz", None), ("yager", 2.0)])
            p = random_feasible_instance(rng, fam, param)
            tb = build_tables(p)
            reduced, _ = simplify(tb, p.c, Mode.OPTIMALITY_PRESERVING)
            a = branch_and_bound(reduced, modified=True)
            b = branch_and_bound(reduced, modified=False)
            assert a.found == b.found
            if a.found:
                assert a.objective == pytest.approx(b.objective, abs=TOL)

    def test_objective_never_decreases_down_a_branch(self):
        rng = random.Random(515)
        for _ in range(80):
            fam, param = rng.choice([("lukasiewicz", None), ("product", None)])
            p = random_feasible_instance(rng, fam, param, m=3, n=3)
            tb = build_tables(p)
            if not check_feasibility(tb).ok:
                continue
            for e in enumerate_all_admissible(tb):
                prev = None
                for k in range(len(e) + 1):
                    z = _prefix_objective(tb, p.c, e[:k])
                    if prev is not None:
                        assert z >= prev - TOL
                    prev = z


def _prefix_objective(tables, costs, prefix):
    x = [tables.lower_bound(j) for j in range(tables.n)]
    groups = {}
    for i, j in enumerate(prefix):
        groups.setdefault(j, []).append(i)
    for j, rows in groups.items():
        inter = tables.s_prime[rows[0]][j]
        for i in rows[1:]:
            inter = inter.intersect(tables.s_prime[i][j])
        x[j] = inter.minimum()
    return sum(c * v for c, v in zip(costs, x))


class TestSolve:
    def test_example_end_to_end(self, example):
        sol = solve(example)
        assert sol.optimal
        assert sol.objective == pytest.approx(10.717, abs=TOL)
        assert sol.x == pytest.approx([0.4, 0.64, 0, 0, 0.3, 0, 0, 0.2, 0.8, 0.6], abs=TOL)
        assert sol.ledger.bound_sequence() == [5184, 864, 288, 144, 72, 36, 8]
        assert is_feasible_point(example, sol.x)

    def test_empty_column_reported(self):
        p = make_instance([[1.0]], [[1.0]], [0.2])
        sol = solve(p)
        assert sol.status is Status.INFEASIBLE
        assert sol.reason is InfeasibleReason.EMPTY_COLUMN and sol.witness == 0

    def test_unsatisfiable_row_reported(self):
        p = make_instance([[0.1]], [[0.1]], [0.9])
        sol = solve(p)
        assert sol.reason is InfeasibleReason.UNSATISFIABLE_ROW and sol.witness == 0

    def test_exhausted_search_reported(self):
        p = make_instance([[0.2], [0.8]], [[0.7], [0.2]], [0.5, 0.5])
        sol = solve(p)
        assert sol.status is Status.INFEASIBLE
        assert sol.reason is InfeasibleReason.EXHAUSTED_SEARCH

    def test_modes_agree_on_randoms(self):
        rng = random.Random(246)
        for _ in range(100):
            fam, param = rng.choice([("lukasiewicz", None), ("product", None),
                                     ("yager", 2.0), ("hamacher", 1.0)])
            gen = random_feasible_instance if rng.random() < 0.5 else random_instance
            p = gen(rng, fam, param)
            a = solve(p)
            b = solve(p, mode=Mode.FEASIBILITY_PRESERVING)
            assert a.optimal == b.optimal
            if a.optimal:
                assert a.objective == pytest.approx(b.objective, abs=TOL)
                assert is_feasible_point(p, a.x) and is_feasible_point(p, b.x)

    def test_oracle_agreement_small_batch(self):
        rng = random.Random(135)
        for _ in range(150):
            fam, param = rng.choice([("lukasiewicz", None), ("yager", 2.0)])
            gen = random_feasible_instance if rng.random() < 0.5 else random_instance
            p = gen(rng, fam, param, m=rng.randint(1, 4), n=rng.randint(1, 4))
            sol = solve(p)
            rep = brute_force_optimum(build_tables(p), p.c)
            assert sol.optimal == (rep.optimum is not None)
            if sol.optimal:
                assert sol.objective == pytest.approx(rep.optimum[1], abs=TOL)

    def test_oracle_agreement_adversarial_shapes(self):
        # zero costs (total ties), duplicated rows/columns, coarse grids
        from bfre import ProblemInstance, validate
        fams = [("lukasiewicz", None), ("einstein_product", None),
                ("hamacher", 0.0), ("frank", 0.5), ("schweizer_sklar", -2.0),
                ("sugeno_weber", 1.0), ("aczel_alsina", 2.0), ("dombi", 1.0)]
        rng = random.Random(60218)
        for k in range(240):
            fam, param = fams[k % len(fams)]
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            style = k % 3
            if style == 0:
                base = random_feasible_instance(rng, fam, param, m=m, n=n)
                p = ProblemInstance(base.a_plus, base.a_minus, base.b,
                                    [0.0] * n, base.tnorm)
            elif style == 1:
                base = random_feasible_instance(rng, fam, param, m=m, n=n)
                ap = [r[:] + [r[0]] for r in base.a_plus] + [base.a_plus[0][:] + [base.a_plus[0][0]]]
                am = [r[:] + [r[0]] for r in base.a_minus] + [base.a_minus[0][:] + [base.a_minus[0][0]]]
                p = ProblemInstance(ap, am, list(base.b) + [base.b[0]],
                                    list(base.c) + [base.c[0]], base.tnorm)
            else:
                snap = lambda: rng.randint(0, 4) / 4
                p = ProblemInstance([[snap() for _ in range(n)] for _ in range(m)],
                                    [[snap() for _ in range(n)] for _ in range(m)],
                                    [snap() for _ in range(m)],
                                    [rng.randint(0, 8) / 4 for _ in range(n)],
                                    validate(fam, param))
            sol = solve(p)
            rep = brute_force_optimum(build_tables(p), p.c)
            assert sol.optimal == (rep.optimum is not None), (fam, param, style)
            if sol.optimal:
                assert sol.objective == pytest.approx(rep.optimum[1], abs=TOL)


class TestDecomposition:
    def test_example_contains_known_assignments(self, example):
        boxes = enumerate_feasible_decomposition(example)
        assignments = [a for a, _ in boxes]
        # restrictions of the two known admissible pick vectors survive
        e2 = {0: 0, 1: 7, 3: 1, 4: 2, 7: 8, 9: 5}
        e3 = {0: 0, 1: 7, 3: 1, 4: 0, 7: 8, 9: 5}
        e1 = {0: 4, 1: 0, 3: 2, 4: 4, 7: 8, 9: 5}
        assert e2 in assignments and e3 in assignments
        assert e1 not in assignments
        got = boxes[assignments.index(e2)][1]
        want = ["{0.4}", "{0.64}", "{0.6}", "[0,1]", "[0.3,0.6]",
                "{0,1}", "[0,0.55]", "{0.2}", "{0.8}", "{0.6}"]
        assert [str(s) for s in got] == want

    def test_infeasible_instance_empty(self):
        p = make_instance([[0.1]], [[0.1]], [0.9])
        assert enumerate_feasible_decomposition(p) == []

    def test_cap_enforced(self, example):
        with pytest.raises(CapExceeded) as err:
            enumerate_feasible_decomposition(example, cap=10)
        assert err.value.bound > 10

    def test_union_matches_direct_evaluation_on_grid(self):
        rng = random.Random(1881)
        for _ in range(40):
            fam, param = rng.choice([("lukasiewicz", None), ("yager", 2.0)])
            gen = random_feasible_instance if rng.random() < 0.5 else random_instance
            p = gen(rng, fam, param, m=2, n=2)
            boxes = enumerate_feasible_decomposition(p)
            from bfre.resolution import row_value
            for xi in range(21):
                for yi in range(21):
                    x = [xi / 20, yi / 20]
                    direct = all(abs(row_value(p, i, x) - p.b[i]) <= TOL
                                 for i in range(p.m))
                    inside = any(all(box[j].contains(x[j]) for j in range(2))
                                 for _, box in boxes)
                    assert direct == inside, (p, x)

    def test_single_cell_instance_single_box(self):
        p = make_instance([[0.9]], [[0.0]], [0.5])
        boxes = enumerate_feasible_decomposition(p)
        assert len(boxes) == 1
        assert str(boxes[0][1][0]) == "{0.6}"


class TestIncrementalVsBatchAdmissibility:
    def test_complete_vectors_agree(self):
        import itertools
        rng = random.Random(2718)
        for _ in range(60):
            fam, param = rng.choice([("lukasiewicz", None), ("yager", 2.0)])
            p = random_feasible_instance(rng, fam, param, m=3, n=3)
            tb = build_tables(p)
            if not check_feasibility(tb).ok:
                continue
            batch = set(enumerate_all_admissible(tb))
            incremental = set()
            for e in itertools.product(*tb.row_support):
                ok = True
                for i in range(tb.m):
                    if e[i] not in admissible_domain(e[:i], i, tb):
                        ok = False
                        break
                if ok:
                    incremental.add(e)
            assert batch == incremental
