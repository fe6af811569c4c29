"""Shared test utilities: random feasible schedules and witness scanning."""

from __future__ import annotations

import random
from fractions import Fraction

from eqsched import Instance, IntervalSchedule, schedule_from_profiles
from eqsched.schedule import profile_pieces


def _finishes_by_horizon(rem: list[int], releases: list[int], m: int, t: int, horizon: int) -> bool:
    """Longest-remaining-first simulation: can everything finish by the horizon?"""
    rem = list(rem)
    for u in range(t, horizon):
        ready = [j for j in range(len(rem)) if rem[j] > 0 and releases[j] <= u]
        ready.sort(key=lambda j: (-rem[j], j))
        for j in ready[:m]:
            rem[j] -= 1
        if not any(rem):
            return True
    return not any(rem)


def random_schedule(inst: Instance, rng: random.Random) -> IntervalSchedule:
    """A random feasible unit-slot schedule finishing by the horizon.

    Picks a random subset of released unfinished jobs each slot, keeping
    only choices that stay completable by r_n + n*p, so outputs may idle
    (not left-adjusted) but always satisfy every feasibility check.
    """
    assert inst.is_integral(), "random schedules are built on the unit grid"
    n, m, p = inst.n, inst.m, int(inst.p)
    releases = [int(r) for r in inst.releases]
    horizon = releases[-1] + n * p
    rem = [p] * n
    pieces = []
    for t in range(horizon):
        eligible = [j for j in range(n) if rem[j] > 0 and releases[j] <= t]
        chosen: list[int] | None = None
        if eligible:
            for _ in range(10):
                k = rng.randint(0, min(m, len(eligible)))
                attempt = sorted(rng.sample(eligible, k))
                trial = list(rem)
                for j in attempt:
                    trial[j] -= 1
                if _finishes_by_horizon(trial, releases, m, t + 1, horizon):
                    chosen = attempt
                    break
            if chosen is None:
                eligible.sort(key=lambda j: (-rem[j], j))
                chosen = sorted(eligible[:m])
            for j in chosen:
                rem[j] -= 1
        if chosen:
            pieces.append((Fraction(t), Fraction(t + 1), frozenset(j + 1 for j in chosen)))
    assert not any(rem)
    return schedule_from_profiles(pieces, n, m)


def find_exchange_witnesses(
    sched: IntervalSchedule, inst: Instance
) -> list[tuple[int, int, Fraction, Fraction, Fraction]]:
    """All (i, j, s, t, eps) tuples valid for an exchange, from block pairs."""
    flat = [b for seg in profile_pieces(sched, inst) for b in seg]
    found = []
    for a, early in enumerate(flat):
        for late in flat[a + 1 :]:
            eps = min(early.length, late.length)
            for j in sorted(early.jobs - late.jobs):
                if inst.releases[j - 1] > early.start:
                    continue
                for i in sorted(late.jobs - early.jobs):
                    if i < j:
                        found.append((i, j, early.start, late.start, eps))
    return found
