"""LP construction, extraction, and the solve pipeline."""

import random
from fractions import Fraction

import pytest

from eqsched import (
    GenParams,
    Instance,
    NormalSchedule,
    build_lp,
    extract,
    generate_instance,
    preemption_counts,
    report_to_dict,
    report_to_text,
    solve,
    solve_lp,
    to_interval_schedule,
    true_completions,
    validate,
)
from eqsched.structure import is_left_adjusted, is_normal

F = Fraction


class TestBuild:
    @pytest.mark.parametrize(
        "n, m, nvars, nrows",
        [(1, 1, 2, 3), (2, 2, 8, 12), (3, 2, 12, 19)],
    )
    def test_shape_examples(self, n, m, nvars, nrows):
        inst = Instance.make(n, m, 1, [0] * n)
        prob, vm = build_lp(inst)
        assert prob.num_vars == nvars == vm.num_vars
        assert len(prob.rows) == nrows

    def test_shape_formula_random(self):
        rng = random.Random(9)
        for _ in range(25):
            n, m = rng.randint(1, 20), rng.randint(1, 20)
            inst = Instance.make(n, m, rng.randint(1, 5), [rng.randint(0, 9) for _ in range(n)])
            prob, _ = build_lp(inst)
            assert prob.num_vars == 2 * n * m
            assert len(prob.rows) == 3 * n * m + n - m

    def test_objective_is_machine_one_ends(self):
        inst = Instance.make(2, 2, 1, [0, 0])
        prob, vm = build_lp(inst)
        hot = {i for i, c in enumerate(prob.objective) if c != 0}
        assert hot == {vm.end_index(1, 1), vm.end_index(2, 1)}


class TestExtract:
    def test_single_job(self):
        inst = Instance.make(1, 1, 5, [2])
        prob, vm = build_lp(inst)
        ns = extract(solve_lp(prob), vm, inst)
        assert ns.starts == ((F(2),),)
        assert ns.ends == ((F(7),),)

    def test_extract_requires_optimal(self):
        from eqsched import LpSolution

        inst = Instance.make(1, 1, 1, [0])
        _, vm = build_lp(inst)
        with pytest.raises(ValueError, match="status"):
            extract(LpSolution("infeasible", None, None, 0), vm, inst)

    def test_symmetric_two_jobs(self):
        inst = Instance.make(2, 2, 3, [0, 0])
        rep = solve(inst)
        assert rep.objective == 6
        assert sorted(true_completions(rep.normal)) == [F(3), F(3)]

    def test_to_interval_drops_empty(self):
        ns = NormalSchedule(
            starts=((F(2), F(1)),),
            ends=((F(2), F(3)),),
        )
        sched = to_interval_schedule(ns)
        assert list(sched.rows()) == [(1, 2, F(1), F(3))]

    def test_true_completion_ignores_empty_machine_one(self):
        ns = NormalSchedule(starts=((F(6), F(1)),), ends=((F(6), F(4)),))
        assert true_completions(ns) == [F(4)]


class TestSolve:
    @pytest.mark.parametrize(
        "n, m, p, releases, expect",
        [
            (1, 1, 5, [2], 7),
            (2, 2, 3, [0, 0], 6),
            (3, 1, 2, [0, 0, 0], 12),
            (3, 2, 2, [0, 0, 1], 8),
        ],
    )
    def test_objectives(self, n, m, p, releases, expect):
        rep = solve(Instance.make(n, m, p, releases))
        assert rep.objective == expect

    def test_chain_keeps_intervals_after_release(self):
        rng = random.Random(21)
        for _ in range(30):
            inst = generate_instance(
                GenParams(n=rng.randint(1, 5), m=rng.randint(1, 3), p_max=3, r_max=5, seed=rng.getrandbits(64))
            )
            rep = solve(inst)
            for j, ivs in enumerate(rep.schedule.by_job, start=1):
                for iv in ivs:
                    assert iv.start >= inst.releases[j - 1]

    def test_report_completions_follow_input_order(self):
        text = "eqsched-instance v1\n3 1\n2\n4 0 0\n"
        from eqsched import parse_instance

        inst = parse_instance(text)
        rep = solve(inst)
        # input job 1 (released 4) is canonical job 3 and completes last
        assert rep.completions[0] == max(rep.completions)
        assert sum(rep.completions) == rep.objective

    def test_true_completions_match_machine_one_at_optimum(self):
        rng = random.Random(31)
        for _ in range(30):
            inst = generate_instance(
                GenParams(n=rng.randint(1, 5), m=rng.randint(1, 3), p_max=3, r_max=5, seed=rng.getrandbits(64))
            )
            rep = solve(inst)
            tc = true_completions(rep.normal)
            for j in range(inst.n):
                assert tc[j] == rep.normal.ends[j][0]
            assert sum(tc) == rep.objective

    def test_extracted_schedules_are_valid_normal_left_adjusted(self):
        rng = random.Random(41)
        for _ in range(30):
            inst = generate_instance(
                GenParams(n=rng.randint(1, 5), m=rng.randint(1, 3), p_max=3, r_max=6, seed=rng.getrandbits(64))
            )
            rep = solve(inst)
            assert validate(rep.schedule, inst).ok
            assert is_normal(rep.normal, inst)
            assert is_normal(rep.schedule, inst)
            assert is_left_adjusted(rep.schedule, inst)
            counts = preemption_counts(rep.schedule)
            assert max(counts) <= inst.m - 1
            assert sum(counts) <= inst.n * (inst.m - 1)

    def test_adding_a_machine_never_hurts(self):
        rng = random.Random(51)
        for _ in range(20):
            n = rng.randint(1, 4)
            releases = [rng.randint(0, 4) for _ in range(n)]
            p = rng.randint(1, 3)
            values = [
                solve(Instance.make(n, m, p, releases)).objective for m in (1, 2, 3)
            ]
            assert values[0] >= values[1] >= values[2]

    def test_rational_instance_solves_exactly(self):
        inst = Instance.make(2, 1, F(3, 2), [0, F(1, 2)])
        rep = solve(inst)
        # single machine: run job 1 then job 2 back to back
        assert rep.objective == F(3, 2) + F(3)


class TestReportRendering:
    def test_dict_shape(self):
        inst = Instance.make(3, 2, 2, [0, 0, 1])
        data = report_to_dict(solve(inst))
        assert data["objective"] == "8"
        assert sorted(data["completions"]) == ["2", "2", "4"]
        assert data["lp_stats"]["vars"] == 12
        assert data["lp_stats"]["constraints"] == 19
        assert all(v == "pass" for v in data["validation"].values())
        for row in data["intervals"]:
            assert set(row) == {"job", "machine", "start", "end"}

    def test_text_contains_key_lines(self):
        inst = Instance.make(1, 1, 5, [2])
        text = report_to_text(solve(inst))
        assert text.startswith("objective: 7\n")
        assert "completions: 7" in text
        assert "validation:" in text
