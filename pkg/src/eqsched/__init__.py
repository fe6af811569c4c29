"""Exact toolkit for preemptive scheduling of equal-length jobs with release
times on identical machines, minimizing total completion time.

The solver builds a small linear program over normal schedules and solves
it with an exact rational simplex; an independent unit-slot dynamic
program provides ground truth for integer instances, and structural
predicates and transforms check and normalize schedules.
"""

from .instance import (
    GenParams,
    Instance,
    InstanceFormatError,
    enumerate_instances,
    generate_instance,
    parse_instance,
    write_instance,
)
from .lp import LpProblem, LpSolution, solve_lp
from .normal_lp import (
    InternalSolverError,
    NormalSchedule,
    SolveReport,
    VarMap,
    build_lp,
    extract,
    report_to_dict,
    report_to_text,
    solve,
    to_interval_schedule,
    true_completions,
)
from .oracle import SlotSchedule, TransitionCapExceeded, dp_optimum, slot_to_interval
from .schedule import (
    Block,
    CheckResult,
    IntervalSchedule,
    JobInterval,
    ScheduleFormatError,
    ValidationReport,
    blocks,
    completions,
    halfway_vector,
    lex_compare,
    migration_counts,
    parse_schedule,
    preemption_counts,
    profile_pieces,
    schedule_from_profiles,
    total_completion,
    validate,
    write_schedule,
)
from .structure import (
    exchange_step,
    is_irreducible,
    is_left_adjusted,
    is_normal,
    is_tidy,
    order_completions,
    tidify,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "CheckResult",
    "GenParams",
    "Instance",
    "InstanceFormatError",
    "InternalSolverError",
    "IntervalSchedule",
    "JobInterval",
    "LpProblem",
    "LpSolution",
    "NormalSchedule",
    "ScheduleFormatError",
    "SlotSchedule",
    "SolveReport",
    "TransitionCapExceeded",
    "ValidationReport",
    "VarMap",
    "blocks",
    "build_lp",
    "completions",
    "dp_optimum",
    "enumerate_instances",
    "exchange_step",
    "extract",
    "generate_instance",
    "halfway_vector",
    "is_irreducible",
    "is_left_adjusted",
    "is_normal",
    "is_tidy",
    "lex_compare",
    "migration_counts",
    "order_completions",
    "parse_instance",
    "parse_schedule",
    "preemption_counts",
    "profile_pieces",
    "report_to_dict",
    "report_to_text",
    "schedule_from_profiles",
    "slot_to_interval",
    "solve",
    "solve_lp",
    "tidify",
    "to_interval_schedule",
    "total_completion",
    "true_completions",
    "validate",
    "write_instance",
    "write_schedule",
]
