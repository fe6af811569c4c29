"""From instance to optimal schedule: build the linear program over normal
schedules, solve it exactly, and extract the schedule.

A normal schedule gives each job one (possibly empty) interval per machine,
ordered machine m -> 1 within a job and by job index within a machine. The
program minimizes the sum of the machine-1 interval ends, which equals the
minimum total completion time; the optimal basic solution is itself an
optimal schedule, no post-processing needed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .instance import Instance
from .lp import LpProblem, LpSolution, solve_lp
from .rational import format_rational
from .schedule import CheckResult, IntervalSchedule, validate
from .structure import is_left_adjusted, is_normal


class InternalSolverError(RuntimeError):
    """The LP came back infeasible or unbounded, which cannot happen for a
    well-formed instance; indicates a bug, not a user error."""


@dataclass(frozen=True)
class VarMap:
    """Column layout: per (job, machine) pair, a start and an end variable."""

    n: int
    m: int

    @property
    def num_vars(self) -> int:
        return 2 * self.n * self.m

    def start_index(self, j: int, q: int) -> int:
        return 2 * ((j - 1) * self.m + (q - 1))

    def end_index(self, j: int, q: int) -> int:
        return self.start_index(j, q) + 1


@dataclass(frozen=True)
class NormalSchedule:
    """Start/end matrices of a normal schedule, jobs by machines;
    starts[j-1][q-1] == ends[j-1][q-1] encodes an empty interval."""

    starts: tuple[tuple[Fraction, ...], ...]
    ends: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.starts)

    @property
    def m(self) -> int:
        return len(self.starts[0])


def build_lp(inst: Instance) -> tuple[LpProblem, VarMap]:
    """Emit the five constraint families: release, total work, interval
    ordering, within-job machine order, within-machine job order.

    Exactly 2nm nonnegative variables and 3nm + n - m rows.
    """
    vm = VarMap(inst.n, inst.m)
    nv = vm.num_vars
    zero = Fraction(0)
    one = Fraction(1)

    objective = [zero] * nv
    for j in range(1, inst.n + 1):
        objective[vm.end_index(j, 1)] = one
    prob = LpProblem(num_vars=nv, objective=objective)

    def row(entries: dict[int, Fraction]) -> list[Fraction]:
        coeffs = [zero] * nv
        for idx, c in entries.items():
            coeffs[idx] = c
        return coeffs

    for j in range(1, inst.n + 1):
        prob.add_row(row({vm.start_index(j, inst.m): one}), ">=", inst.releases[j - 1])
    for j in range(1, inst.n + 1):
        entries = {}
        for q in range(1, inst.m + 1):
            entries[vm.end_index(j, q)] = one
            entries[vm.start_index(j, q)] = -one
        prob.add_row(row(entries), "=", inst.p)
    for j in range(1, inst.n + 1):
        for q in range(1, inst.m + 1):
            prob.add_row(
                row({vm.start_index(j, q): one, vm.end_index(j, q): -one}), "<=", zero
            )
    for j in range(1, inst.n + 1):
        for q in range(2, inst.m + 1):
            prob.add_row(
                row({vm.end_index(j, q): one, vm.start_index(j, q - 1): -one}), "<=", zero
            )
    for j in range(1, inst.n):
        for q in range(1, inst.m + 1):
            prob.add_row(
                row({vm.end_index(j, q): one, vm.start_index(j + 1, q): -one}), "<=", zero
            )
    return prob, vm


def extract(sol: LpSolution, vm: VarMap, inst: Instance) -> NormalSchedule:
    """Read the start/end matrices out of an optimal solution."""
    if sol.status != "optimal":
        raise ValueError(f"cannot extract a schedule from status {sol.status!r}")
    starts = tuple(
        tuple(sol.values[vm.start_index(j, q)] for q in range(1, vm.m + 1))
        for j in range(1, vm.n + 1)
    )
    ends = tuple(
        tuple(sol.values[vm.end_index(j, q)] for q in range(1, vm.m + 1))
        for j in range(1, vm.n + 1)
    )
    return NormalSchedule(starts=starts, ends=ends)


def to_interval_schedule(ns: NormalSchedule) -> IntervalSchedule:
    """Drop the empty intervals; each job keeps at most one interval per machine."""
    rows = []
    for j in range(1, ns.n + 1):
        for q in range(1, ns.m + 1):
            s, e = ns.starts[j - 1][q - 1], ns.ends[j - 1][q - 1]
            if s < e:
                rows.append((j, q, s, e))
    return IntervalSchedule.from_rows(ns.n, ns.m, rows)


def true_completions(ns: NormalSchedule) -> list[Fraction]:
    """Actual completion per job: latest end among its nonempty intervals.

    Can be earlier than the machine-1 end when that interval is empty; at
    an optimal solution the two coincide.
    """
    out = []
    for j in range(1, ns.n + 1):
        ends = [
            ns.ends[j - 1][q - 1]
            for q in range(1, ns.m + 1)
            if ns.starts[j - 1][q - 1] < ns.ends[j - 1][q - 1]
        ]
        if not ends:
            raise ValueError(f"job {j} has no nonempty interval")
        out.append(max(ends))
    return out


@dataclass(frozen=True)
class SolveReport:
    """Everything a solve produces. Completions are reported in the
    original input job order; the schedule uses canonical (release-sorted)
    job indices, matching the schedule file format."""

    instance: Instance
    objective: Fraction
    completions: tuple[Fraction, ...]
    normal: NormalSchedule
    schedule: IntervalSchedule
    lp_vars: int
    lp_constraints: int
    pivots: int
    validation: tuple[CheckResult, ...]
    elapsed_seconds: float | None = None


def solve(inst: Instance) -> SolveReport:
    """Build, solve, extract, validate, and report."""
    started = time.perf_counter()
    prob, vm = build_lp(inst)
    sol = solve_lp(prob)
    if sol.status != "optimal":
        raise InternalSolverError(
            f"linear program reported {sol.status} for n={inst.n} m={inst.m}; "
            "the scheduling program is always feasible and bounded"
        )
    ns = extract(sol, vm, inst)
    sched = to_interval_schedule(ns)

    sorted_completions = true_completions(ns)
    by_input_order: list[Fraction | None] = [None] * inst.n
    for k, original in enumerate(inst.original_ids):
        by_input_order[original - 1] = sorted_completions[k]

    checks = list(validate(sched, inst).checks)
    checks.append(is_normal(ns, inst))
    checks.append(is_left_adjusted(sched, inst))

    return SolveReport(
        instance=inst,
        objective=sol.objective_value,
        completions=tuple(by_input_order),
        normal=ns,
        schedule=sched,
        lp_vars=prob.num_vars,
        lp_constraints=len(prob.rows),
        pivots=sol.pivots,
        validation=tuple(checks),
        elapsed_seconds=time.perf_counter() - started,
    )


def report_to_dict(report: SolveReport) -> dict:
    """Machine-readable form; rationals as reduced `a` or `a/b` tokens,
    jobs numbered as in the input file."""
    inst = report.instance
    intervals = []
    for j in range(1, inst.n + 1):
        original = inst.original_ids[j - 1]
        for q in range(1, inst.m + 1):
            s, e = report.normal.starts[j - 1][q - 1], report.normal.ends[j - 1][q - 1]
            if s < e:
                intervals.append(
                    {
                        "job": original,
                        "machine": q,
                        "start": format_rational(s),
                        "end": format_rational(e),
                    }
                )
    intervals.sort(key=lambda row: (row["job"], row["machine"]))
    return {
        "objective": format_rational(report.objective),
        "completions": [format_rational(c) for c in report.completions],
        "intervals": intervals,
        "lp_stats": {
            "vars": report.lp_vars,
            "constraints": report.lp_constraints,
            "pivots": report.pivots,
        },
        "validation": {c.name: "pass" if c.passed else "fail" for c in report.validation},
    }


def report_to_text(report: SolveReport) -> str:
    """Human-readable form of the same report."""
    data = report_to_dict(report)
    lines = [f"objective: {data['objective']}"]
    lines.append("completions: " + " ".join(data["completions"]))
    for row in data["intervals"]:
        lines.append(
            f"job {row['job']}: machine {row['machine']} [{row['start']}, {row['end']})"
        )
    stats = data["lp_stats"]
    lines.append(
        f"lp: vars={stats['vars']} constraints={stats['constraints']} pivots={stats['pivots']}"
    )
    lines.append(
        "validation: " + " ".join(f"{k}={v}" for k, v in data["validation"].items())
    )
    return "\n".join(lines) + "\n"
