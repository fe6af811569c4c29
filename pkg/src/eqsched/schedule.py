"""Preemptive schedules as per-job execution intervals, plus the checks
and decompositions everything else is built on.

A schedule is feasible when: at most m jobs run at once, no job runs
before its release, each job runs for exactly p in total, and neither a
machine nor a job is ever in two places at the same instant. `validate`
reports each of these as a named check with a witness instead of raising.

Half-open intervals [start, end) throughout; zero-length intervals are
not representable here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .instance import Instance
from .rational import format_rational, parse_rational

SCHEDULE_HEADER = "eqsched-schedule v1"

HalfwayVector = tuple[Fraction, ...]


class ScheduleFormatError(ValueError):
    """Raised when schedule text does not conform to the v1 format."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message + (f" (line {line})" if line is not None else ""))
        self.line = line


class JobInterval(NamedTuple):
    """One execution piece of a job: machine plus half-open time window."""

    machine: int
    start: Fraction
    end: Fraction


@dataclass(frozen=True)
class IntervalSchedule:
    """Execution intervals grouped by job (by_job[j-1] is job j's pieces).

    Construction does not check feasibility; malformed or infeasible
    schedules are representable so `validate` can report on them. Job
    indices refer to the canonical (release-sorted) instance order.
    """

    n: int
    m: int
    by_job: tuple[tuple[JobInterval, ...], ...]

    def __post_init__(self) -> None:
        if len(self.by_job) != self.n:
            raise ValueError(f"expected {self.n} per-job interval lists, got {len(self.by_job)}")

    @classmethod
    def from_rows(cls, n: int, m: int, rows: Iterable[tuple[int, int, Fraction, Fraction]]) -> "IntervalSchedule":
        """Group flat (job, machine, start, end) rows by job, sorted by time."""
        per_job: list[list[JobInterval]] = [[] for _ in range(n)]
        for job, machine, start, end in rows:
            if not 1 <= job <= n:
                raise ValueError(f"job index {job} out of range 1..{n}")
            per_job[job - 1].append(JobInterval(machine, Fraction(start), Fraction(end)))
        for ivs in per_job:
            ivs.sort(key=lambda iv: (iv.start, iv.machine))
        return cls(n=n, m=m, by_job=tuple(tuple(ivs) for ivs in per_job))

    def rows(self) -> Iterator[tuple[int, int, Fraction, Fraction]]:
        for j, ivs in enumerate(self.by_job, start=1):
            for iv in ivs:
                yield (j, iv.machine, iv.start, iv.end)


@dataclass(frozen=True)
class Block:
    """Maximal interval with a constant set of running jobs and no release inside."""

    start: Fraction
    end: Fraction
    jobs: frozenset[int]

    @property
    def length(self) -> Fraction:
        return self.end - self.start


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check; truthy iff it passed."""

    name: str
    passed: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def by_name(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _fmt_time(t: Fraction) -> str:
    return format_rational(t)


def validate(sched: IntervalSchedule, inst: Instance) -> ValidationReport:
    """Run all feasibility checks and report pass/fail with witnesses."""
    checks: list[CheckResult] = []

    malformed = None
    for j, ivs in enumerate(sched.by_job, start=1):
        for iv in ivs:
            if iv.start >= iv.end:
                malformed = f"job {j} has empty or reversed interval [{_fmt_time(iv.start)}, {_fmt_time(iv.end)})"
                break
            if not 1 <= iv.machine <= inst.m:
                malformed = f"job {j} uses machine {iv.machine}, valid range 1..{inst.m}"
                break
        if malformed:
            break
    checks.append(CheckResult("well-formed", malformed is None, malformed))
    if malformed is not None:
        # Remaining checks assume orderable intervals; stop here.
        return ValidationReport(tuple(checks))

    # capacity (s1): at most m jobs at any instant, by event sweep
    events: list[tuple[Fraction, int]] = []
    for ivs in sched.by_job:
        for iv in ivs:
            events.append((iv.start, 1))
            events.append((iv.end, -1))
    events.sort(key=lambda e: (e[0], e[1]))
    running = 0
    capacity_witness = None
    for t, delta in events:
        running += delta
        if delta == 1 and running > inst.m and capacity_witness is None:
            capacity_witness = f"{running} jobs running at t={_fmt_time(t)} > m={inst.m}"
    checks.append(CheckResult("capacity", capacity_witness is None, capacity_witness))

    # release (s2)
    release_witness = None
    for j, ivs in enumerate(sched.by_job, start=1):
        r = inst.releases[j - 1]
        for iv in ivs:
            if iv.start < r:
                release_witness = f"job {j} starts at t={_fmt_time(iv.start)} before release {_fmt_time(r)}"
                break
        if release_witness:
            break
    checks.append(CheckResult("release", release_witness is None, release_witness))

    # finite-intervals (s3): structural for this representation
    checks.append(CheckResult("finite-intervals", True, None))

    # work (s4): total execution per job equals p
    work_witness = None
    for j, ivs in enumerate(sched.by_job, start=1):
        total = sum((iv.end - iv.start for iv in ivs), Fraction(0))
        if total != inst.p:
            work_witness = f"job {j} runs for {_fmt_time(total)}, expected {_fmt_time(inst.p)}"
            break
    checks.append(CheckResult("work", work_witness is None, work_witness))

    # per-machine disjointness
    by_machine: dict[int, list[tuple[Fraction, Fraction, int]]] = {}
    for j, ivs in enumerate(sched.by_job, start=1):
        for iv in ivs:
            by_machine.setdefault(iv.machine, []).append((iv.start, iv.end, j))
    machine_witness = None
    for q, spans in sorted(by_machine.items()):
        spans.sort()
        for (s1, e1, j1), (s2, e2, j2) in zip(spans, spans[1:]):
            if s2 < e1:
                machine_witness = (
                    f"machine {q} runs jobs {j1} and {j2} simultaneously on "
                    f"[{_fmt_time(s2)}, {_fmt_time(min(e1, e2))})"
                )
                break
        if machine_witness:
            break
    checks.append(CheckResult("machine-disjointness", machine_witness is None, machine_witness))

    # per-job disjointness
    job_witness = None
    for j, ivs in enumerate(sched.by_job, start=1):
        spans = sorted((iv.start, iv.end) for iv in ivs)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            if s2 < e1:
                job_witness = f"job {j} runs on two machines on [{_fmt_time(s2)}, {_fmt_time(min(e1, e2))})"
                break
        if job_witness:
            break
    checks.append(CheckResult("job-disjointness", job_witness is None, job_witness))

    return ValidationReport(tuple(checks))


def completions(sched: IntervalSchedule) -> list[Fraction]:
    """Per-job completion time: latest interval end. Every job needs at least one interval."""
    out = []
    for j, ivs in enumerate(sched.by_job, start=1):
        if not ivs:
            raise ValueError(f"job {j} has no intervals")
        out.append(max(iv.end for iv in ivs))
    return out


def total_completion(sched: IntervalSchedule) -> Fraction:
    return sum(completions(sched), Fraction(0))


def _merged_spans(ivs: Sequence[JobInterval]) -> list[tuple[Fraction, Fraction]]:
    """Merge a job's intervals on the time axis regardless of machine."""
    spans = sorted((iv.start, iv.end) for iv in ivs)
    merged: list[tuple[Fraction, Fraction]] = []
    for s, e in spans:
        if merged and s <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return merged


def preemption_counts(sched: IntervalSchedule) -> list[int]:
    """Per-job preemptions: time gaps in execution. Same-instant machine
    switches are migrations, not preemptions."""
    return [max(0, len(_merged_spans(ivs)) - 1) for ivs in sched.by_job]


def migration_counts(sched: IntervalSchedule) -> list[int]:
    """Per-job count of machine changes without a time gap."""
    out = []
    for ivs in sched.by_job:
        ordered = sorted(ivs, key=lambda iv: iv.start)
        count = 0
        for a, b in zip(ordered, ordered[1:]):
            if a.end == b.start and a.machine != b.machine:
                count += 1
        out.append(count)
    return out


def halfway_vector(sched: IntervalSchedule) -> HalfwayVector:
    """Per-job half of the time integral over execution: sum of (end^2 - start^2)/4.

    Depends only on when each job runs, not on machine assignment.
    """
    return tuple(
        sum(((iv.end * iv.end - iv.start * iv.start) / 4 for iv in ivs), Fraction(0))
        for ivs in sched.by_job
    )


def lex_compare(a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    """Lexicographic order: -1 if a < b, 0 if equal, 1 if a > b."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def segment_bounds(inst: Instance, end: Fraction | None = None) -> list[Fraction]:
    """Boundaries of the release segments: distinct release values up to the
    horizon r_n + n*p (or a later supplied end)."""
    horizon = inst.horizon()
    if end is None or end < horizon:
        end = horizon
    bounds: list[Fraction] = []
    for r in inst.releases:
        if not bounds or r != bounds[-1]:
            bounds.append(r)
    bounds.append(end)
    return bounds


def profile_pieces(
    sched: IntervalSchedule, inst: Instance, end: Fraction | None = None
) -> list[list[Block]]:
    """Segment-grouped maximal constant-profile blocks, idle blocks included.

    Covers [r_1, end) where end defaults to max(horizon, last interval end).
    Adjacent equal profiles merge within a segment; release times always
    break blocks.
    """
    last = max((iv.end for ivs in sched.by_job for iv in ivs), default=inst.releases[0])
    bounds = segment_bounds(inst, end if end is not None else last)

    cuts = set(bounds)
    for ivs in sched.by_job:
        for iv in ivs:
            cuts.add(iv.start)
            cuts.add(iv.end)
    horizon_end = bounds[-1]
    ordered_cuts = sorted(t for t in cuts if bounds[0] <= t <= horizon_end)

    raw: list[Block] = []
    for a, b in zip(ordered_cuts, ordered_cuts[1:]):
        profile = frozenset(
            j
            for j, ivs in enumerate(sched.by_job, start=1)
            for iv in ivs
            if iv.start <= a and b <= iv.end
        )
        raw.append(Block(a, b, profile))

    segments: list[list[Block]] = []
    idx = 0
    for seg_start, seg_end in zip(bounds, bounds[1:]):
        seg: list[Block] = []
        while idx < len(raw) and raw[idx].end <= seg_end:
            blk = raw[idx]
            if seg and seg[-1].jobs == blk.jobs:
                seg[-1] = Block(seg[-1].start, blk.end, blk.jobs)
            else:
                seg.append(blk)
            idx += 1
        segments.append(seg)
    return segments


def blocks(sched: IntervalSchedule, inst: Instance) -> list[list[Block]]:
    """Block decomposition within release segments up to the horizon r_n + n*p.

    Requires all completions at or before the horizon.
    """
    horizon = inst.horizon()
    for j, ivs in enumerate(sched.by_job, start=1):
        for iv in ivs:
            if iv.end > horizon:
                raise ValueError(
                    f"job {j} runs until {_fmt_time(iv.end)}, beyond horizon {_fmt_time(horizon)}"
                )
    return profile_pieces(sched, inst, end=horizon)


def schedule_from_profiles(
    pieces: Iterable[tuple[Fraction, Fraction, frozenset[int]]], n: int, m: int
) -> IntervalSchedule:
    """Build a machine-assigned schedule from (start, end, running-jobs) pieces.

    Within each piece, jobs take machines in increasing index order (the
    smallest job index gets machine 1). Abutting same-machine pieces of a
    job merge into one interval.
    """
    per_job: list[list[JobInterval]] = [[] for _ in range(n)]
    for start, end, jobs in sorted(pieces, key=lambda piece: piece[0]):
        if start >= end or not jobs:
            continue
        if len(jobs) > m:
            raise ValueError(f"{len(jobs)} jobs in one piece with only {m} machines")
        for q, j in enumerate(sorted(jobs), start=1):
            ivs = per_job[j - 1]
            if ivs and ivs[-1].machine == q and ivs[-1].end == start:
                ivs[-1] = JobInterval(q, ivs[-1].start, end)
            else:
                ivs.append(JobInterval(q, start, end))
    return IntervalSchedule(n=n, m=m, by_job=tuple(tuple(ivs) for ivs in per_job))


def parse_schedule(text: str) -> IntervalSchedule:
    """Parse the v1 schedule format (header, counts, one line per interval)."""
    rows: list[tuple[int, int, Fraction, Fraction]] = []
    n = m = None
    stage = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if stage == 0:
            if line != SCHEDULE_HEADER:
                raise ScheduleFormatError(f"bad header {line!r}, expected {SCHEDULE_HEADER!r}", lineno)
            stage = 1
            continue
        if stage == 1:
            fields = line.split()
            if len(fields) != 2:
                raise ScheduleFormatError("expected '<n> <m>'", lineno)
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise ScheduleFormatError("n and m must be decimal integers", lineno) from None
            if n < 1 or m < 1:
                raise ScheduleFormatError(f"n and m must be >= 1, got n={n} m={m}", lineno)
            stage = 2
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ScheduleFormatError("expected '<job> <machine> <start> <end>'", lineno)
        try:
            job, machine = int(fields[0]), int(fields[1])
            start, end = parse_rational(fields[2]), parse_rational(fields[3])
        except ValueError as exc:
            raise ScheduleFormatError(str(exc), lineno) from None
        if not 1 <= job <= n:
            raise ScheduleFormatError(f"job index {job} out of range 1..{n}", lineno)
        rows.append((job, machine, start, end))
    if stage == 0:
        raise ScheduleFormatError("missing header")
    if stage == 1:
        raise ScheduleFormatError("missing '<n> <m>' line")
    return IntervalSchedule.from_rows(n, m, rows)


def write_schedule(sched: IntervalSchedule) -> str:
    """Serialize to canonical v1 text: intervals sorted by (start, machine, job)."""
    lines = [SCHEDULE_HEADER, f"{sched.n} {sched.m}"]
    ordered = sorted(sched.rows(), key=lambda r: (r[2], r[1], r[0]))
    for job, machine, start, end in ordered:
        lines.append(f"{job} {machine} {format_rational(start)} {format_rational(end)}")
    return "\n".join(lines) + "\n"
