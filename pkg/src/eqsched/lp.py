"""Dense two-phase simplex over exact rationals with Bland's rule.

Small and self-contained: the target problems have a few dozen variables,
so a dense tableau of Fractions is simple and every result is exact. An
optional float mode (tolerance 1e-9) exists for speed experiments only.

Variable order is creation order and both pivot choices break ties by
smallest index, so results are deterministic and cycling is impossible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

RELATIONS = ("<=", "=", ">=")

Row = tuple[Sequence[Fraction], str, Fraction]


@dataclass
class LpProblem:
    """Minimize objective . x subject to rows; variables are nonnegative
    unless marked free."""

    num_vars: int
    objective: Sequence[Fraction]
    rows: list[Row] = field(default_factory=list)
    free: Sequence[bool] | None = None

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length does not match num_vars")
        if self.free is None:
            self.free = tuple(False for _ in range(self.num_vars))
        if len(self.free) != self.num_vars:
            raise ValueError("free-variable flags length does not match num_vars")
        for coeffs, rel, _rhs in self.rows:
            if len(coeffs) != self.num_vars:
                raise ValueError("row coefficient length does not match num_vars")
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")

    def add_row(self, coeffs: Sequence[Fraction], rel: str, rhs: Fraction) -> None:
        if len(coeffs) != self.num_vars:
            raise ValueError("row coefficient length does not match num_vars")
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        self.rows.append((coeffs, rel, rhs))


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    values: tuple[Fraction, ...] | None
    objective_value: Fraction | None
    pivots: int


class _Tableau:
    """Simplex tableau: constraint rows plus a reduced-cost row."""

    def __init__(self, rows: list[list], rhs: list, basis: list[int], eps):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.eps = eps
        self.zrow: list = []
        self.pivots = 0

    def set_costs(self, costs: list) -> None:
        """Initialize reduced costs c_j - c_B . (B^-1 A)_j for the current basis."""
        zero = costs[0] * 0
        self.zrow = list(costs)
        for r, b in enumerate(self.basis):
            cb = costs[b]
            if cb != zero:
                row = self.rows[r]
                self.zrow = [z - cb * a for z, a in zip(self.zrow, row)]

    def pivot(self, pr: int, pc: int) -> None:
        piv = self.rows[pr][pc]
        inv = 1 / piv
        self.rows[pr] = [a * inv for a in self.rows[pr]]
        self.rhs[pr] = self.rhs[pr] * inv
        prow, prhs = self.rows[pr], self.rhs[pr]
        for r in range(len(self.rows)):
            if r == pr:
                continue
            f = self.rows[r][pc]
            if f != 0:
                self.rows[r] = [a - f * b for a, b in zip(self.rows[r], prow)]
                self.rhs[r] -= f * prhs
        f = self.zrow[pc]
        if f != 0:
            self.zrow = [z - f * b for z, b in zip(self.zrow, prow)]
        self.basis[pr] = pc
        self.pivots += 1

    def run(self, ncols: int) -> str:
        """Minimize until optimal ('optimal') or unbounded ('unbounded')."""
        while True:
            entering = None
            for j in range(ncols):
                if self.zrow[j] < -self.eps:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            leaving = None
            best_ratio = None
            for r in range(len(self.rows)):
                a = self.rows[r][entering]
                if a > self.eps:
                    ratio = self.rhs[r] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[leaving])
                    ):
                        best_ratio = ratio
                        leaving = r
            if leaving is None:
                return "unbounded"
            self.pivot(leaving, entering)


def solve_lp(prob: LpProblem, *, arithmetic: str = "exact") -> LpSolution:
    """Solve with two-phase simplex. Exact by default; 'float' mode trades
    exactness for speed and is not used by any verification path."""
    if arithmetic not in ("exact", "float"):
        raise ValueError(f"unknown arithmetic {arithmetic!r}")
    exact = arithmetic == "exact"
    conv = Fraction if exact else float
    zero = conv(0)
    one = conv(1)
    eps = Fraction(0) if exact else 1e-9

    # Split free variables into positive and negative parts.
    plus_col: list[int] = []
    minus_col: list[int | None] = []
    ncols = 0
    for i in range(prob.num_vars):
        plus_col.append(ncols)
        ncols += 1
        if prob.free[i]:
            minus_col.append(ncols)
            ncols += 1
        else:
            minus_col.append(None)
    nstruct = ncols

    # Standard form with nonnegative right-hand sides.
    norm: list[tuple[list, str, object]] = []
    for coeffs, rel, rhs in prob.rows:
        row = [zero] * nstruct
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            c = conv(c)
            row[plus_col[i]] = row[plus_col[i]] + c
            mc = minus_col[i]
            if mc is not None:
                row[mc] = row[mc] - c
        rhs = conv(rhs)
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        norm.append((row, rel, rhs))

    n_slack = sum(1 for _, rel, _ in norm if rel != "=")
    n_art = sum(1 for _, rel, _ in norm if rel != "<=")
    total = nstruct + n_slack + n_art
    first_art = nstruct + n_slack

    rows: list[list] = []
    rhs_col: list = []
    basis: list[int] = []
    slack_at = nstruct
    art_at = first_art
    for row, rel, rhs in norm:
        full = row + [zero] * (n_slack + n_art)
        if rel == "<=":
            full[slack_at] = one
            basis.append(slack_at)
            slack_at += 1
        elif rel == ">=":
            full[slack_at] = -one
            slack_at += 1
            full[art_at] = one
            basis.append(art_at)
            art_at += 1
        else:
            full[art_at] = one
            basis.append(art_at)
            art_at += 1
        rows.append(full)
        rhs_col.append(rhs)

    tab = _Tableau(rows, rhs_col, basis, eps)

    if n_art:
        phase1_costs = [zero] * first_art + [one] * n_art
        tab.set_costs(phase1_costs)
        tab.run(total)
        residual = sum(
            (tab.rhs[r] for r in range(len(tab.rows)) if tab.basis[r] >= first_art),
            zero,
        )
        if residual > eps:
            return LpSolution("infeasible", None, None, tab.pivots)
        # Drive leftover zero-level artificials out of the basis; drop rows
        # that are redundant over the real columns.
        for r in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[r] < first_art:
                continue
            pivot_col = None
            for j in range(first_art):
                a = tab.rows[r][j]
                if a > eps or a < -eps:
                    pivot_col = j
                    break
            if pivot_col is None:
                del tab.rows[r]
                del tab.rhs[r]
                del tab.basis[r]
            else:
                tab.pivot(r, pivot_col)
        for r in range(len(tab.rows)):
            tab.rows[r] = tab.rows[r][:first_art]

    phase2_costs = [zero] * first_art
    for i in range(prob.num_vars):
        c = conv(prob.objective[i])
        phase2_costs[plus_col[i]] = c
        mc = minus_col[i]
        if mc is not None:
            phase2_costs[mc] = -c
    tab.set_costs(phase2_costs)
    status = tab.run(first_art)
    if status == "unbounded":
        return LpSolution("unbounded", None, None, tab.pivots)

    col_values = [zero] * first_art
    for r, b in enumerate(tab.basis):
        col_values[b] = tab.rhs[r]
    values = []
    for i in range(prob.num_vars):
        v = col_values[plus_col[i]]
        mc = minus_col[i]
        if mc is not None:
            v = v - col_values[mc]
        values.append(v)
    objective_value = sum((conv(c) * v for c, v in zip(prob.objective, values)), zero)
    return LpSolution("optimal", tuple(values), objective_value, tab.pivots)
