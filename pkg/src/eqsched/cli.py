"""Command-line front end: gen, solve, oracle, validate, compare, gantt.

Exit codes: 0 success, 1 a requested check or comparison failed,
2 usage or input error, 3 internal anomaly (solver bug, oracle cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .instance import (
    GenParams,
    Instance,
    InstanceFormatError,
    enumerate_instances,
    generate_instance,
    parse_instance,
    write_instance,
)
from .normal_lp import InternalSolverError, SolveReport, report_to_dict, report_to_text, solve
from .oracle import DEFAULT_TRANSITION_CAP, TransitionCapExceeded, dp_optimum
from .rational import format_rational
from .schedule import (
    IntervalSchedule,
    ScheduleFormatError,
    parse_schedule,
    preemption_counts,
    validate,
    write_schedule,
)
from .structure import is_irreducible, is_left_adjusted, is_normal, is_tidy

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


def _transition_cap() -> int:
    raw = os.environ.get("EQSCHED_TRANSITION_CAP")
    if raw is None:
        return DEFAULT_TRANSITION_CAP
    try:
        cap = int(raw)
        if cap < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"EQSCHED_TRANSITION_CAP must be a positive integer, got {raw!r}")
    return cap


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _write_text(path: str, text: str, out) -> None:
    if path == "-":
        out.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")


def _load_instance(path: str) -> Instance:
    return parse_instance(_read_text(path))


def _load_schedule(path: str) -> IntervalSchedule:
    return parse_schedule(_read_text(path))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def cmd_gen(args, out) -> int:
    params = GenParams(n=args.n, m=args.m, p_max=args.p_max, r_max=args.r_max, seed=args.seed)
    inst = generate_instance(params)
    _write_text(args.out, write_instance(inst), out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    inst = _load_instance(getattr(args, "in"))
    report = solve(inst)
    if args.report == "structured":
        out.write(json.dumps(report_to_dict(report), indent=2) + "\n")
    else:
        out.write(report_to_text(report))
    if args.out_schedule:
        _write_text(args.out_schedule, write_schedule(report.schedule), out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    inst = _load_instance(getattr(args, "in"))
    if not inst.is_integral():
        raise UsageError("the oracle requires integer processing and release times")
    objective, ss = dp_optimum(
        inst, nonpreemptive=args.nonpreemptive, transition_cap=_transition_cap()
    )
    out.write(f"objective: {objective}\n")
    for t, jobs in enumerate(ss.slots):
        listing = " ".join(str(j) for j in sorted(jobs)) if jobs else "-"
        out.write(f"slot {t}: {listing}\n")
    return EXIT_OK


CHECK_NAMES = ("feasible", "normal", "irreducible", "tidy", "left-adjusted")


def cmd_validate(args, out) -> int:
    inst = _load_instance(getattr(args, "in"))
    sched = _load_schedule(args.schedule)
    if sched.n != inst.n or sched.m != inst.m:
        raise UsageError(
            f"schedule is for n={sched.n} m={sched.m}, instance has n={inst.n} m={inst.m}"
        )
    wanted = list(CHECK_NAMES) if args.check == "all" else [args.check]
    all_ok = True
    for name in wanted:
        if name == "feasible":
            for check in validate(sched, inst).checks:
                all_ok &= check.passed
                _print_check(out, f"feasible/{check.name}", check)
            continue
        fn = {
            "normal": is_normal,
            "irreducible": is_irreducible,
            "tidy": is_tidy,
            "left-adjusted": is_left_adjusted,
        }[name]
        check = fn(sched, inst)
        all_ok &= check.passed
        _print_check(out, name, check)
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def _print_check(out, label: str, check) -> None:
    if check.passed:
        out.write(f"{label}: pass\n")
    else:
        out.write(f"{label}: FAIL ({check.witness})\n")


@dataclass
class CompareSummary:
    """Result of sweeping LP against the slot oracle over a family."""

    instances_checked: int = 0
    mismatches: list[tuple[str, Fraction, int]] = field(default_factory=list)
    benefit_violations: list[tuple[str, int, int]] = field(default_factory=list)
    strict_benefit_count: int | None = None
    skipped: int = 0
    max_pivots: int = 0
    preemption_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.benefit_violations


def run_compare(
    instances,
    *,
    nonpreemptive: bool = False,
    transition_cap: int = DEFAULT_TRANSITION_CAP,
) -> CompareSummary:
    """Solve each instance with the LP and the oracle and record exact
    agreement; optionally also compare against the nonpreemptive optimum."""
    summary = CompareSummary()
    if nonpreemptive:
        summary.strict_benefit_count = 0
    for inst in instances:
        key = write_instance(inst).replace("\n", " / ").strip(" /")
        try:
            dp_value, _ = dp_optimum(inst, transition_cap=transition_cap)
            extra = (
                dp_optimum(inst, nonpreemptive=True, transition_cap=transition_cap)[0]
                if nonpreemptive
                else None
            )
        except TransitionCapExceeded:
            summary.skipped += 1
            continue
        report = solve(inst)
        summary.instances_checked += 1
        summary.max_pivots = max(summary.max_pivots, report.pivots)
        for count in preemption_counts(report.schedule):
            summary.preemption_histogram[count] = summary.preemption_histogram.get(count, 0) + 1
        if report.objective != dp_value:
            summary.mismatches.append((key, report.objective, dp_value))
        if extra is not None:
            if dp_value > extra:
                summary.benefit_violations.append((key, dp_value, extra))
            elif dp_value < extra:
                summary.strict_benefit_count += 1
    return summary


def _render_summary(summary: CompareSummary, out) -> None:
    out.write(f"instances checked: {summary.instances_checked}\n")
    if summary.skipped:
        out.write(f"skipped (transition cap): {summary.skipped}\n")
    out.write(f"max pivots: {summary.max_pivots}\n")
    hist = " ".join(f"{k}:{v}" for k, v in sorted(summary.preemption_histogram.items()))
    out.write(f"preemption histogram (per-job count:jobs): {hist or '-'}\n")
    if summary.strict_benefit_count is not None:
        out.write(f"instances where preemption strictly helps: {summary.strict_benefit_count}\n")
    for key, lp_value, dp_value in summary.mismatches:
        out.write(f"MISMATCH {key}: lp={format_rational(lp_value)} dp={dp_value}\n")
    for key, pre, nonpre in summary.benefit_violations:
        out.write(f"VIOLATION {key}: preemptive {pre} > nonpreemptive {nonpre}\n")
    out.write("result: " + ("OK" if summary.ok else "FAILED") + "\n")


def cmd_compare(args, out) -> int:
    cap = _transition_cap()
    if args.exhaustive:
        instances = enumerate_instances(args.n_max, args.m_max, args.p_max, args.r_max)
    else:
        import random

        rng = random.Random(args.seed)
        def _random_family():
            for _ in range(args.count):
                n = rng.randint(1, args.n)
                m = rng.randint(1, args.m)
                yield generate_instance(
                    GenParams(n=n, m=m, p_max=args.p_max, r_max=args.r_max, seed=rng.getrandbits(64))
                )

        instances = _random_family()
    summary = run_compare(instances, nonpreemptive=args.nonpreemptive, transition_cap=cap)
    _render_summary(summary, out)
    return EXIT_OK if summary.ok else EXIT_CHECK_FAILED


# Gantt rendering: 40 px per time unit, 30 px lane height; job colors come
# from the golden-angle hue hash hue = (137 * job) % 360.
SVG_SCALE = 40
SVG_LANE = 30
SVG_LEFT = 70
SVG_TOP = 30


def _svg_x(t: Fraction) -> str:
    return format(SVG_LEFT + SVG_SCALE * float(t), "g")


def render_svg(sched: IntervalSchedule, inst: Instance) -> str:
    """Deterministic SVG: one lane per machine, one rectangle per interval,
    dashed release markers."""
    t_end = max(
        max((iv.end for ivs in sched.by_job for iv in ivs), default=Fraction(0)),
        inst.releases[-1],
    )
    width = SVG_LEFT + SVG_SCALE * float(t_end) + 20
    height = SVG_TOP + SVG_LANE * inst.m + 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{format(width, "g")}" height="{format(height, "g")}" '
        f'font-family="sans-serif" font-size="12">'
    ]
    for q in range(1, inst.m + 1):
        y = SVG_TOP + SVG_LANE * (q - 1)
        parts.append(
            f'<text x="8" y="{y + SVG_LANE / 2 + 4:g}" fill="#000">M{q}</text>'
        )
        parts.append(
            f'<line x1="{SVG_LEFT}" y1="{y + SVG_LANE:g}" x2="{format(width - 10, "g")}" '
            f'y2="{y + SVG_LANE:g}" stroke="#ccc" stroke-width="1"/>'
        )
    tick = 0
    while tick <= t_end:
        parts.append(
            f'<text x="{_svg_x(Fraction(tick))}" y="{SVG_TOP - 8}" fill="#555" '
            f'text-anchor="middle">{tick}</text>'
        )
        tick += 1
    for r in sorted(set(inst.releases)):
        parts.append(
            f'<line x1="{_svg_x(r)}" y1="{SVG_TOP}" x2="{_svg_x(r)}" '
            f'y2="{SVG_TOP + SVG_LANE * inst.m}" stroke="#d33" stroke-width="1" '
            f'stroke-dasharray="4,3"/>'
        )
    for job, machine, start, end in sorted(sched.rows(), key=lambda r: (r[2], r[1], r[0])):
        x = _svg_x(start)
        w = format(SVG_SCALE * float(end - start), "g")
        y = SVG_TOP + SVG_LANE * (machine - 1) + 2
        hue = (137 * job) % 360
        parts.append(
            f'<rect x="{x}" y="{y}" width="{w}" height="{SVG_LANE - 4}" '
            f'fill="hsl({hue},60%,70%)" stroke="#333" stroke-width="1"/>'
        )
        cx = format(SVG_LEFT + SVG_SCALE * float(start + end) / 2, "g")
        parts.append(
            f'<text x="{cx}" y="{y + (SVG_LANE - 4) / 2 + 4:g}" text-anchor="middle" '
            f'fill="#000">{job}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_ascii(sched: IntervalSchedule, inst: Instance) -> str:
    """One text lane per machine, one character column per unit slot.

    Jobs print as 1..9 then a..z; idle slots print as dots. Requires an
    integer-aligned schedule.
    """
    cols = 0
    grid: dict[tuple[int, int], str] = {}
    for job, machine, start, end in sched.rows():
        if start.denominator != 1 or end.denominator != 1:
            raise UsageError("ascii rendering requires an integer-aligned schedule")
        if job <= 9:
            sym = str(job)
        elif job <= 35:
            sym = chr(ord("a") + job - 10)
        else:
            sym = "#"
        for t in range(int(start), int(end)):
            grid[(machine, t)] = sym
            cols = max(cols, t + 1)
    lines = []
    for q in range(1, inst.m + 1):
        row = "".join(grid.get((q, t), ".") for t in range(cols))
        lines.append(f"M{q} |{row}")
    return "\n".join(lines) + "\n"


def cmd_gantt(args, out) -> int:
    inst = _load_instance(getattr(args, "in"))
    sched = _load_schedule(args.schedule)
    if sched.n != inst.n or sched.m != inst.m:
        raise UsageError(
            f"schedule is for n={sched.n} m={sched.m}, instance has n={inst.n} m={inst.m}"
        )
    if all(not ivs for ivs in sched.by_job):
        raise UsageError("schedule file contains no intervals")
    text = render_ascii(sched, inst) if args.ascii else render_svg(sched, inst)
    _write_text(args.out, text, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqsched",
        description="Preemptive scheduling of equal-length jobs: exact LP solver, "
        "slot oracle, and schedule verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--p-max", type=_positive_int, required=True)
    p.add_argument("--r-max", type=_nonneg_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance with the exact LP")
    p.add_argument("--in", required=True)
    p.add_argument("--out-schedule")
    p.add_argument("--report", choices=("text", "structured"), default="text")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("oracle", help="solve a small integer instance by dynamic programming")
    p.add_argument("--in", required=True)
    p.add_argument("--nonpreemptive", action="store_true")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("validate", help="check a schedule file against an instance")
    p.add_argument("--in", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--check", choices=("all",) + CHECK_NAMES, default="all")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("compare", help="sweep LP against the oracle over a family")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", action="store_true")
    p.add_argument("--n-max", type=_positive_int, help="exhaustive: max jobs")
    p.add_argument("--m-max", type=_positive_int, help="exhaustive: max machines")
    p.add_argument("--count", type=_positive_int, help="random: number of instances")
    p.add_argument("--seed", type=_nonneg_int, help="random: master seed")
    p.add_argument("--n", type=_positive_int, help="random: max jobs")
    p.add_argument("--m", type=_positive_int, help="random: max machines")
    p.add_argument("--p-max", type=_positive_int, required=True)
    p.add_argument("--r-max", type=_nonneg_int, required=True)
    p.add_argument("--nonpreemptive", action="store_true",
                   help="also compare against the nonpreemptive oracle")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("gantt", help="render a schedule as SVG or ASCII")
    p.add_argument("--in", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--ascii", action="store_true")
    p.set_defaults(handler=cmd_gantt)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compare":
        missing = []
        if args.exhaustive:
            missing = [k for k in ("n_max", "m_max") if getattr(args, k) is None]
        else:
            missing = [k for k in ("count", "seed", "n", "m") if getattr(args, k) is None]
        if missing:
            parser.error(
                "missing required flags for this mode: "
                + " ".join("--" + k.replace("_", "-") for k in missing)
            )
    try:
        return args.handler(args, out)
    except (UsageError, InstanceFormatError, ScheduleFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TransitionCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InternalSolverError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
