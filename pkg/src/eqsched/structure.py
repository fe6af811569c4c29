"""Structural schedule predicates and the transforms behind them.

Predicates (left-adjusted, irreducible, normal, tidy) quantify over all
times; profiles are constant on blocks, so checking block representatives
is exhaustive. Transforms (pairwise exchange, completion reordering, tidy
conversion) operate on the block timeline and rebuild machine assignments
with the smallest-index-first convention.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .instance import Instance
from .rational import format_rational
from .schedule import (
    Block,
    CheckResult,
    IntervalSchedule,
    JobInterval,
    completions,
    profile_pieces,
    schedule_from_profiles,
)


def _fmt(t: Fraction) -> str:
    return format_rational(t)


def _fmt_set(jobs: frozenset[int]) -> str:
    return "{" + ",".join(str(j) for j in sorted(jobs)) + "}"


def _flat_blocks(sched: IntervalSchedule, inst: Instance) -> list[Block]:
    return [b for seg in profile_pieces(sched, inst) for b in seg]


def is_left_adjusted(sched: IntervalSchedule, inst: Instance) -> CheckResult:
    """No machine may sit idle at time s while a job released by s runs later."""
    flat = _flat_blocks(sched, inst)
    for a, early in enumerate(flat):
        if len(early.jobs) >= inst.m:
            continue
        for late in flat[a + 1 :]:
            for j in sorted(late.jobs - early.jobs):
                if inst.releases[j - 1] <= early.start:
                    witness = (
                        f"machine idle on [{_fmt(early.start)}, {_fmt(early.end)}) while job {j} "
                        f"(released {_fmt(inst.releases[j - 1])}) runs on "
                        f"[{_fmt(late.start)}, {_fmt(late.end)})"
                    )
                    return CheckResult("left-adjusted", False, witness)
    return CheckResult("left-adjusted", True)


def is_irreducible(sched: IntervalSchedule, inst: Instance) -> CheckResult:
    """Left-adjusted, and no lower-indexed job ever yields to a higher-indexed
    one across time: max(X(s)-X(t)) < min(X(t)-X(s)) for all s < t."""
    la = is_left_adjusted(sched, inst)
    if not la:
        return CheckResult("irreducible", False, la.witness)
    flat = _flat_blocks(sched, inst)
    for a, early in enumerate(flat):
        for late in flat[a + 1 :]:
            gone = early.jobs - late.jobs
            arrived = late.jobs - early.jobs
            if gone and arrived and max(gone) >= min(arrived):
                witness = (
                    f"job {max(gone)} runs on [{_fmt(early.start)}, {_fmt(early.end)}) "
                    f"profile {_fmt_set(early.jobs)} but job {min(arrived)} <= it runs later on "
                    f"[{_fmt(late.start)}, {_fmt(late.end)}) profile {_fmt_set(late.jobs)}"
                )
                return CheckResult("irreducible", False, witness)
    return CheckResult("irreducible", True)


def _is_normal_matrices(starts: Sequence[Sequence[Fraction]], ends: Sequence[Sequence[Fraction]]) -> CheckResult:
    n = len(starts)
    m = len(starts[0]) if n else 0
    for j in range(n):
        for q in range(m):
            if starts[j][q] > ends[j][q]:
                return CheckResult(
                    "normal", False, f"job {j + 1} machine {q + 1}: start after end"
                )
    for j in range(n):
        for q in range(1, m):
            if ends[j][q] > starts[j][q - 1]:
                return CheckResult(
                    "normal",
                    False,
                    f"job {j + 1}: machine {q + 1} interval ends at {_fmt(ends[j][q])} "
                    f"after its machine {q} interval starts at {_fmt(starts[j][q - 1])}",
                )
    for j in range(n - 1):
        for q in range(m):
            if ends[j][q] > starts[j + 1][q]:
                return CheckResult(
                    "normal",
                    False,
                    f"machine {q + 1}: job {j + 1} ends at {_fmt(ends[j][q])} "
                    f"after job {j + 2} starts at {_fmt(starts[j + 1][q])}",
                )
    return CheckResult("normal", True)


def is_normal(sched, inst: Instance) -> CheckResult:
    """One interval per job and machine, ordered machine m -> 1 within a job
    and by job index within a machine.

    Accepts either the start/end matrix form (empty intervals explicit) or an
    IntervalSchedule; for the latter, empty intervals are implicit and the
    check succeeds iff positions for them exist that satisfy both orderings.
    """
    if hasattr(sched, "starts") and hasattr(sched, "ends"):
        return _is_normal_matrices(sched.starts, sched.ends)

    n, m = sched.n, sched.m
    fixed: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for j, ivs in enumerate(sched.by_job, start=1):
        for iv in ivs:
            if (j, iv.machine) in fixed:
                return CheckResult(
                    "normal", False, f"job {j} has two intervals on machine {iv.machine}"
                )
            fixed[(j, iv.machine)] = (iv.start, iv.end)

    # Greedy earliest placement of the implicit empty intervals, processing
    # pairs in the order all ordering constraints point: job ascending,
    # machine descending.
    placed_end: dict[tuple[int, int], Fraction] = {}
    for j in range(1, n + 1):
        for q in range(m, 0, -1):
            bounds: list[tuple[Fraction, str]] = []
            if j > 1:
                bounds.append(
                    (placed_end[(j - 1, q)], f"job {j - 1} ends on machine {q} at")
                )
            if q < m:
                bounds.append(
                    (placed_end[(j, q + 1)], f"job {j} ends on machine {q + 1} at")
                )
            lower = max((b[0] for b in bounds), default=Fraction(0))
            if (j, q) in fixed:
                start, end = fixed[(j, q)]
                if start < lower:
                    reason = next(desc for val, desc in bounds if val == lower)
                    return CheckResult(
                        "normal",
                        False,
                        f"{reason} {_fmt(lower)}, after job {j} starts on machine {q} at {_fmt(start)}",
                    )
                placed_end[(j, q)] = end
            else:
                placed_end[(j, q)] = lower
    return CheckResult("normal", True)


def _profile_sort_key(jobs: frozenset[int], n: int) -> tuple[int, ...]:
    """Total order matching min(P-Q) <= min(Q-P): sorted members padded with a
    sentinel, so {1,2} sorts before {1} and the empty profile sorts last."""
    ordered = sorted(jobs)
    return tuple(ordered + [n + 1] * (n + 1 - len(ordered)))


def is_tidy(sched: IntervalSchedule, inst: Instance) -> CheckResult:
    """Profiles within each release segment ordered by the profile order,
    and everything completed by the horizon r_n + n*p."""
    horizon = inst.horizon()
    last = max((iv.end for ivs in sched.by_job for iv in ivs), default=inst.releases[0])
    if last > horizon:
        return CheckResult(
            "tidy", False, f"execution until {_fmt(last)} beyond horizon {_fmt(horizon)}"
        )
    for seg in profile_pieces(sched, inst, end=horizon):
        for a, early in enumerate(seg):
            for late in seg[a + 1 :]:
                key_e = _profile_sort_key(early.jobs, sched.n)
                key_l = _profile_sort_key(late.jobs, sched.n)
                if key_e > key_l:
                    witness = (
                        f"profile {_fmt_set(early.jobs)} on [{_fmt(early.start)}, {_fmt(early.end)}) "
                        f"should come after {_fmt_set(late.jobs)} on [{_fmt(late.start)}, {_fmt(late.end)})"
                    )
                    return CheckResult("tidy", False, witness)
    return CheckResult("tidy", True)


def _coverage(ivs: Sequence[JobInterval], lo: Fraction, hi: Fraction) -> Fraction:
    total = Fraction(0)
    for iv in ivs:
        a, b = max(iv.start, lo), min(iv.end, hi)
        if a < b:
            total += b - a
    return total


def _carve(ivs: Sequence[JobInterval], lo: Fraction, hi: Fraction) -> tuple[list[JobInterval], list[JobInterval]]:
    """Split intervals at [lo, hi): (pieces inside, pieces outside)."""
    inside: list[JobInterval] = []
    outside: list[JobInterval] = []
    for iv in ivs:
        a, b = max(iv.start, lo), min(iv.end, hi)
        if a >= b:
            outside.append(iv)
            continue
        if iv.start < a:
            outside.append(JobInterval(iv.machine, iv.start, a))
        inside.append(JobInterval(iv.machine, a, b))
        if b < iv.end:
            outside.append(JobInterval(iv.machine, b, iv.end))
    return inside, outside


def _normalized(ivs: list[JobInterval]) -> tuple[JobInterval, ...]:
    ivs = sorted(ivs, key=lambda iv: (iv.start, iv.machine))
    merged: list[JobInterval] = []
    for iv in ivs:
        if merged and merged[-1].machine == iv.machine and merged[-1].end == iv.start:
            merged[-1] = JobInterval(iv.machine, merged[-1].start, iv.end)
        else:
            merged.append(iv)
    return tuple(merged)


def exchange_step(
    sched: IntervalSchedule,
    inst: Instance,
    i: int,
    j: int,
    s: Fraction,
    t: Fraction,
    eps: Fraction,
) -> IntervalSchedule:
    """Swap jobs i < j between windows [s, s+eps) and [t, t+eps).

    Requires j (but not i) to run throughout [s, s+eps), i (but not j)
    throughout [t, t+eps), with r_j <= s and s+eps <= t. Machine
    assignments are inherited from the displaced job, so feasibility is
    preserved while the halfway vector strictly lexicographically drops
    (the i-th entry by exactly (t-s)*eps/2).
    """
    s, t, eps = Fraction(s), Fraction(t), Fraction(eps)
    if not (1 <= i <= sched.n and 1 <= j <= sched.n):
        raise ValueError(f"job indices out of range: i={i}, j={j}")
    if i >= j:
        raise ValueError(f"need i < j, got i={i}, j={j}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if s + eps > t:
        raise ValueError(f"windows overlap or touch out of order: s+eps={_fmt(s + eps)} > t={_fmt(t)}")
    if inst.releases[j - 1] > s:
        raise ValueError(
            f"job {j} released at {_fmt(inst.releases[j - 1])}, after window start s={_fmt(s)}"
        )
    ivs_i = sched.by_job[i - 1]
    ivs_j = sched.by_job[j - 1]
    if _coverage(ivs_j, s, s + eps) != eps:
        raise ValueError(f"job {j} does not run throughout [{_fmt(s)}, {_fmt(s + eps)})")
    if _coverage(ivs_i, s, s + eps) != 0:
        raise ValueError(f"job {i} runs inside [{_fmt(s)}, {_fmt(s + eps)})")
    if _coverage(ivs_i, t, t + eps) != eps:
        raise ValueError(f"job {i} does not run throughout [{_fmt(t)}, {_fmt(t + eps)})")
    if _coverage(ivs_j, t, t + eps) != 0:
        raise ValueError(f"job {j} runs inside [{_fmt(t)}, {_fmt(t + eps)})")

    take_j, keep_i = _carve(ivs_i, t, t + eps)
    take_i, keep_j = _carve(ivs_j, s, s + eps)
    by_job = list(sched.by_job)
    by_job[i - 1] = _normalized(keep_i + take_i)
    by_job[j - 1] = _normalized(keep_j + take_j)
    return IntervalSchedule(n=sched.n, m=sched.m, by_job=tuple(by_job))


Piece = tuple[Fraction, Fraction, frozenset[int]]


def _timeline(sched: IntervalSchedule, inst: Instance) -> list[Piece]:
    return [(b.start, b.end, b.jobs) for seg in profile_pieces(sched, inst) for b in seg]


def _piece_completions(pieces: list[Piece], n: int) -> list[Fraction | None]:
    comp: list[Fraction | None] = [None] * n
    for start, end, jobs in pieces:
        for j in jobs:
            comp[j - 1] = end
    return comp


def _split_pieces(pieces: list[Piece], cut: Fraction) -> list[Piece]:
    out: list[Piece] = []
    for start, end, jobs in pieces:
        if start < cut < end:
            out.append((start, cut, jobs))
            out.append((cut, end, jobs))
        else:
            out.append((start, end, jobs))
    return out


def _latest_balance_time(pieces: list[Piece], i: int, j: int, end: Fraction) -> Fraction:
    """Largest time x < end at which jobs i and j have equal execution amounts
    inside [x, end). Exact scan over piece boundaries, one linear crossing max."""
    amt_i = amt_j = Fraction(0)
    for start, stop, jobs in reversed(pieces):
        hi = min(stop, end)
        if hi <= start:
            continue
        run_i, run_j = i in jobs, j in jobs
        gap_hi = amt_i - amt_j
        amt_i += (hi - start) if run_i else 0
        amt_j += (hi - start) if run_j else 0
        gap_lo = amt_i - amt_j
        if gap_lo == 0 and hi != end:
            return start
        if gap_lo < 0:
            # linear inside the piece with slope -1 going down: root at hi - gap_hi
            return hi - gap_hi
    raise AssertionError(f"no balance point for jobs {i}, {j} before {_fmt(end)}")


def order_completions(sched: IntervalSchedule, inst: Instance) -> IntervalSchedule:
    """Reorder executions so completion times are nondecreasing in job index.

    Repeatedly takes the lexicographically smallest inverted pair (i, j),
    finds the latest time at which both have run equally much since, and
    swaps their executions from there on; the two completion times trade
    places, so the objective never increases. Machine assignments are
    rebuilt blockwise afterwards (smallest index first).
    """
    pieces = _timeline(sched, inst)
    n = sched.n
    for _ in range(n * n + 1):
        comp = _piece_completions(pieces, n)
        pair = None
        for a in range(n):
            for b in range(a + 1, n):
                ca, cb = comp[a], comp[b]
                if ca is not None and cb is not None and ca > cb:
                    pair = (a + 1, b + 1)
                    break
            if pair:
                break
        if pair is None:
            return schedule_from_profiles(pieces, n, sched.m)
        i, j = pair
        end = comp[i - 1]
        cut = _latest_balance_time(pieces, i, j, end)
        pieces = _split_pieces(pieces, cut)
        swapped: list[Piece] = []
        for start, stop, jobs in pieces:
            if cut <= start and stop <= end:
                if i in jobs and j not in jobs:
                    jobs = (jobs - {i}) | {j}
                elif j in jobs and i not in jobs:
                    jobs = (jobs - {j}) | {i}
            swapped.append((start, stop, jobs))
        pieces = swapped
    raise AssertionError("completion reordering did not converge within n^2 swaps")


def tidify(sched: IntervalSchedule, inst: Instance) -> IntervalSchedule:
    """Sort the blocks of each release segment into the profile order.

    Requires nondecreasing completions (run order_completions first) and
    no execution beyond the horizon. Completions never increase and the
    halfway vector never lexicographically increases.
    """
    comp = completions(sched)
    for a, b in zip(comp, comp[1:]):
        if a > b:
            raise ValueError("completions must be nondecreasing; run order_completions first")
    horizon = inst.horizon()
    if max(comp) > horizon:
        raise ValueError(f"completion {_fmt(max(comp))} beyond horizon {_fmt(horizon)}")

    pieces: list[Piece] = []
    for seg in profile_pieces(sched, inst, end=horizon):
        if not seg:
            continue
        cursor = seg[0].start
        ordered = sorted(
            ((b.jobs, b.length) for b in seg),
            key=lambda entry: _profile_sort_key(entry[0], sched.n),
        )
        merged: list[tuple[frozenset[int], Fraction]] = []
        for jobs, length in ordered:
            if merged and merged[-1][0] == jobs:
                merged[-1] = (jobs, merged[-1][1] + length)
            else:
                merged.append((jobs, length))
        for jobs, length in merged:
            pieces.append((cursor, cursor + length, jobs))
            cursor += length
    return schedule_from_profiles(pieces, sched.n, sched.m)
