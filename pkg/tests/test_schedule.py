"""Schedule representation: feasibility checks, completions, preemptions,
halfway vectors, blocks, and the file format."""

import random
from fractions import Fraction

import pytest

from eqsched import (
    Instance,
    IntervalSchedule,
    ScheduleFormatError,
    blocks,
    completions,
    halfway_vector,
    lex_compare,
    migration_counts,
    parse_schedule,
    preemption_counts,
    schedule_from_profiles,
    total_completion,
    validate,
    write_schedule,
)
from eqsched.schedule import profile_pieces

from helpers import random_schedule


def sched_of(n, m, rows):
    return IntervalSchedule.from_rows(n, m, [(j, q, Fraction(s), Fraction(e)) for j, q, s, e in rows])


class TestValidate:
    def test_single_job_passes(self):
        inst = Instance.make(1, 1, 5, [2])
        sched = sched_of(1, 1, [(1, 1, 2, 7)])
        report = validate(sched, inst)
        assert report.ok
        assert completions(sched) == [Fraction(7)]

    def test_release_violation(self):
        inst = Instance.make(1, 1, 5, [2])
        report = validate(sched_of(1, 1, [(1, 1, 0, 5)]), inst)
        check = report.by_name("release")
        assert not check
        assert "job 1" in check.witness and "release" in check.witness

    def test_machine_overlap(self):
        inst = Instance.make(2, 1, 1, [0, 0])
        report = validate(sched_of(2, 1, [(1, 1, 0, 1), (2, 1, 0, 1)]), inst)
        assert not report.by_name("machine-disjointness")

    def test_job_overlap_across_machines(self):
        inst = Instance.make(2, 2, 2, [0, 0])
        sched = sched_of(2, 2, [(1, 1, 0, 1), (1, 2, 0, 1), (2, 1, 1, 3)])
        assert not validate(sched, inst).by_name("job-disjointness")

    def test_capacity_violation(self):
        inst = Instance.make(3, 2, 1, [0, 0, 0])
        sched = sched_of(3, 2, [(1, 1, 0, 1), (2, 2, 0, 1), (3, 3, 0, 1)])
        report = validate(sched, inst)
        # machine index 3 does not exist for m=2
        assert not report.by_name("well-formed")

    def test_work_shortfall(self):
        inst = Instance.make(1, 1, 2, [0])
        report = validate(sched_of(1, 1, [(1, 1, 0, 1)]), inst)
        assert not report.by_name("work")
        assert report.by_name("capacity")

    def test_malformed_interval_reported_not_thrown(self):
        inst = Instance.make(1, 1, 1, [0])
        report = validate(sched_of(1, 1, [(1, 1, 1, 1)]), inst)
        assert not report.ok
        assert not report.by_name("well-formed")

    def test_total_work_is_np_on_valid_schedules(self):
        rng = random.Random(11)
        for _ in range(20):
            inst = Instance.make(3, 2, 2, [rng.randint(0, 3) for _ in range(3)])
            sched = random_schedule(inst, rng)
            assert validate(sched, inst).ok
            run = sum(iv.end - iv.start for ivs in sched.by_job for iv in ivs)
            assert run == inst.n * inst.p


class TestCompletionsAndCounts:
    def test_completion_of_union(self):
        sched = sched_of(1, 1, [(1, 1, 0, 1), (1, 1, 3, 4)])
        assert completions(sched) == [Fraction(4)]

    def test_completions_require_intervals(self):
        sched = IntervalSchedule(n=1, m=1, by_job=((),))
        with pytest.raises(ValueError, match="no intervals"):
            completions(sched)

    def test_total_completion(self):
        sched = sched_of(2, 2, [(1, 1, 0, 3), (2, 2, 0, 3)])
        assert total_completion(sched) == 6

    def test_all_released_zero_many_machines(self):
        n, p = 4, Fraction(3)
        sched = sched_of(n, n, [(j, j, 0, p) for j in range(1, n + 1)])
        assert total_completion(sched) == n * p

    def test_preemption_counting(self):
        assert preemption_counts(sched_of(1, 1, [(1, 1, 0, 5)])) == [0]
        assert preemption_counts(sched_of(1, 1, [(1, 1, 0, 1), (1, 1, 2, 3)])) == [1]

    def test_migration_is_not_preemption(self):
        sched = sched_of(1, 2, [(1, 2, 0, 1), (1, 1, 1, 2)])
        assert preemption_counts(sched) == [0]
        assert migration_counts(sched) == [1]

    def test_completions_invariant_under_splitting(self):
        whole = sched_of(1, 1, [(1, 1, 0, 4)])
        split = sched_of(1, 1, [(1, 1, 0, 2), (1, 1, 2, 4)])
        assert completions(whole) == completions(split)


class TestHalfway:
    def test_direct_integrals(self):
        assert halfway_vector(sched_of(1, 1, [(1, 1, 0, 2)])) == (Fraction(1),)
        assert halfway_vector(sched_of(1, 1, [(1, 1, 1, 3)])) == (Fraction(2),)

    def test_machine_reassignment_invariance(self):
        a = sched_of(2, 2, [(1, 1, 0, 2), (2, 2, 0, 2)])
        b = sched_of(2, 2, [(1, 2, 0, 2), (2, 1, 0, 2)])
        assert halfway_vector(a) == halfway_vector(b)

    def test_lex_compare(self):
        assert lex_compare([Fraction(1), Fraction(5)], [Fraction(1), Fraction(4)]) == 1
        assert lex_compare([Fraction(1), Fraction(4)], [Fraction(1), Fraction(4)]) == 0
        assert lex_compare([Fraction(0), Fraction(9)], [Fraction(1), Fraction(0)]) == -1
        with pytest.raises(ValueError):
            lex_compare([Fraction(1)], [Fraction(1), Fraction(2)])


class TestBlocks:
    def test_single_block(self):
        inst = Instance.make(1, 1, 2, [0])
        segs = blocks(sched_of(1, 1, [(1, 1, 0, 2)]), inst)
        assert len(segs) == 1
        (blk,) = segs[0]
        assert (blk.start, blk.end, blk.jobs) == (0, 2, frozenset({1}))

    def test_partition_with_idle_tail(self):
        inst = Instance.make(2, 1, 1, [0, 1])
        segs = blocks(sched_of(2, 1, [(1, 1, 0, 1), (2, 1, 1, 2)]), inst)
        flat = [b for seg in segs for b in seg]
        assert [(b.start, b.end, set(b.jobs)) for b in flat] == [
            (0, 1, {1}),
            (1, 2, {2}),
            (2, 3, set()),
        ]

    def test_horizon_overrun_rejected(self):
        inst = Instance.make(1, 1, 1, [0])
        with pytest.raises(ValueError, match="horizon"):
            blocks(sched_of(1, 1, [(1, 1, 5, 6)]), inst)

    def test_blocks_cover_and_match_pointwise_profiles(self):
        # Compare against an independent pointwise recomputation at midpoints.
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randint(1, 4)
            m = rng.randint(1, 3)
            inst = Instance.make(n, m, rng.randint(1, 3), [rng.randint(0, 4) for _ in range(n)])
            sched = random_schedule(inst, rng)
            segs = blocks(sched, inst)
            flat = [b for seg in segs for b in seg]
            # coverage: contiguous from r_1 to horizon
            assert flat[0].start == inst.releases[0]
            assert flat[-1].end == inst.horizon()
            for a, b in zip(flat, flat[1:]):
                assert a.end == b.start
            for blk in flat:
                mid = (blk.start + blk.end) / 2
                running = {
                    j
                    for j, ivs in enumerate(sched.by_job, start=1)
                    for iv in ivs
                    if iv.start <= mid < iv.end
                }
                assert running == set(blk.jobs)
                assert len(blk.jobs) <= inst.m
            # maximality within segments; no release strictly inside a block
            release_set = set(inst.releases)
            for seg in segs:
                for a, b in zip(seg, seg[1:]):
                    assert a.jobs != b.jobs
                for blk in seg:
                    assert not any(blk.start < r < blk.end for r in release_set)


class TestScheduleFormat:
    def test_roundtrip(self):
        sched = sched_of(2, 2, [(1, 1, 0, 2), (2, 2, Fraction(1, 2), Fraction(5, 2))])
        text = write_schedule(sched)
        assert parse_schedule(text) == sched
        assert write_schedule(parse_schedule(text)) == text

    def test_canonical_sort_order(self):
        sched = sched_of(2, 2, [(2, 2, 0, 1), (1, 1, 0, 1)])
        lines = write_schedule(sched).splitlines()
        assert lines[2] == "1 1 0 1"
        assert lines[3] == "2 2 0 1"

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("bogus\n", "header"),
            ("eqsched-schedule v1\n", "missing"),
            ("eqsched-schedule v1\n2\n", "<n> <m>"),
            ("eqsched-schedule v1\n1 1\n1 1 0\n", "expected"),
            ("eqsched-schedule v1\n1 1\n2 1 0 1\n", "out of range"),
            ("eqsched-schedule v1\n1 1\n1 1 0 x\n", "rational"),
        ],
    )
    def test_format_errors(self, text, fragment):
        with pytest.raises(ScheduleFormatError) as err:
            parse_schedule(text)
        assert fragment in str(err.value)


def test_schedule_from_profiles_uses_min_index_convention():
    pieces = [(Fraction(0), Fraction(1), frozenset({2, 1})), (Fraction(1), Fraction(2), frozenset({2}))]
    sched = schedule_from_profiles(pieces, 2, 2)
    assert sched.by_job[0] == ((1, Fraction(0), Fraction(1)),)
    # job 2 moves from machine 2 to machine 1 when job 1 leaves
    assert [iv.machine for iv in sched.by_job[1]] == [2, 1]


def test_schedule_from_profiles_merges_abutting():
    pieces = [
        (Fraction(0), Fraction(1), frozenset({1})),
        (Fraction(1), Fraction(2), frozenset({1})),
    ]
    sched = schedule_from_profiles(pieces, 1, 1)
    assert sched.by_job[0] == ((1, Fraction(0), Fraction(2)),)


def test_profile_pieces_segments_split_at_releases():
    inst = Instance.make(2, 2, 1, [0, 1])
    sched = sched_of(2, 2, [(1, 1, 0, 2), (2, 2, 1, 2)])
    # invalid work-wise for job 1 (p=1, runs 2) but pieces don't care
    segs = profile_pieces(sched, inst)
    assert segs[0][0].end == 1  # block cut at the release of job 2
