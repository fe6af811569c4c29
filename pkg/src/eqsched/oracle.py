"""Independent ground truth: exhaustive dynamic program over unit time slots.

Valid for integer instances, where some optimal schedule is constant on
every [t, t+1). State is (slot, remaining work per job); transitions try
every subset of released unfinished jobs that fits on the machines. Meant
for small instances; work is capped and exceeding the cap is an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .instance import Instance
from .schedule import IntervalSchedule, schedule_from_profiles

DEFAULT_TRANSITION_CAP = 100_000_000


class TransitionCapExceeded(RuntimeError):
    """The state space is too large for the configured transition cap."""


@dataclass(frozen=True)
class SlotSchedule:
    """Jobs running in each unit slot [t, t+1) for t in 0..horizon-1."""

    horizon: int
    slots: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.slots) != self.horizon:
            raise ValueError(f"expected {self.horizon} slots, got {len(self.slots)}")


def dp_optimum(
    inst: Instance,
    nonpreemptive: bool = False,
    *,
    transition_cap: int = DEFAULT_TRANSITION_CAP,
) -> tuple[int, SlotSchedule]:
    """Minimum total completion time over unit-slot schedules, with one
    witness schedule (lexicographically smallest subset sequence).

    With nonpreemptive=True a started job must keep running every slot
    until it finishes.
    """
    if not inst.is_integral():
        raise ValueError("the slot oracle requires integer processing and release times")
    n, m, p = inst.n, inst.m, int(inst.p)
    releases = [int(r) for r in inst.releases]
    horizon = releases[-1] + n * p

    radix = p + 1

    def encode(rem: tuple[int, ...]) -> int:
        code = 0
        for r in reversed(rem):
            code = code * radix + r
        return code

    transitions = 0
    memo: dict[tuple[int, int], int | None] = {}

    def masks_for(t: int, rem: tuple[int, ...]) -> list[int]:
        eligible = 0
        must = 0
        for j in range(n):
            if rem[j] > 0 and releases[j] <= t:
                eligible |= 1 << j
            if nonpreemptive and 0 < rem[j] < p:
                must |= 1 << j
        out = []
        for mask in range(eligible + 1):
            if mask & eligible != mask:
                continue
            if mask.bit_count() > m:
                continue
            if mask & must != must:
                continue
            out.append(mask)
        return out

    def step(t: int, rem: tuple[int, ...], mask: int) -> tuple[tuple[int, ...], int]:
        new_rem = list(rem)
        cost = 0
        for j in range(n):
            if mask >> j & 1:
                new_rem[j] -= 1
                if new_rem[j] == 0:
                    cost += t + 1
        return tuple(new_rem), cost

    def best_cost(t: int, rem: tuple[int, ...]) -> int | None:
        nonlocal transitions
        if not any(rem):
            return 0
        if t >= horizon:
            return None
        key = (t, encode(rem))
        if key in memo:
            return memo[key]
        best: int | None = None
        for mask in masks_for(t, rem):
            transitions += 1
            if transitions > transition_cap:
                raise TransitionCapExceeded(
                    f"exceeded {transition_cap} transitions at n={n}, p={p}, horizon={horizon}"
                )
            new_rem, cost = step(t, rem, mask)
            tail = best_cost(t + 1, new_rem)
            if tail is not None and (best is None or cost + tail < best):
                best = cost + tail
        memo[key] = best
        return best

    full = tuple([p] * n)
    objective = best_cost(0, full)
    if objective is None:
        raise AssertionError("no feasible slot schedule within the horizon")

    # Reconstruct greedily, preferring the numerically smallest job subset.
    slots: list[frozenset[int]] = []
    rem = full
    remaining_cost = objective
    for t in range(horizon):
        chosen = None
        for mask in masks_for(t, rem):
            new_rem, cost = step(t, rem, mask)
            tail = best_cost(t + 1, new_rem)
            if tail is not None and cost + tail == remaining_cost:
                chosen = (mask, new_rem, cost)
                break
        if chosen is None:
            raise AssertionError("reconstruction lost the optimal path")
        mask, rem, cost = chosen
        remaining_cost -= cost
        slots.append(frozenset(j + 1 for j in range(n) if mask >> j & 1))
    return objective, SlotSchedule(horizon=horizon, slots=tuple(slots))


def slot_to_interval(ss: SlotSchedule, inst: Instance) -> IntervalSchedule:
    """Assign machines slot by slot (smallest job index first) and merge
    abutting same-machine slots into intervals."""
    pieces = [
        (Fraction(t), Fraction(t + 1), jobs)
        for t, jobs in enumerate(ss.slots)
        if jobs
    ]
    return schedule_from_profiles(pieces, inst.n, inst.m)
