"""Problem instances: n equal-length jobs with release times on m machines.

Instances are canonical: releases sorted nondecreasing with ties kept in
input order, and `original_ids` remembering where each sorted job came
from. All numeric data is exact (`Fraction`). Includes the v1 text format,
a seeded random generator, and an exhaustive enumerator for sweep tests.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .rational import format_rational, parse_rational

INSTANCE_HEADER = "eqsched-instance v1"


class InstanceFormatError(ValueError):
    """Raised when instance text does not conform to the v1 format."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Instance:
    """A canonical scheduling instance.

    n: number of jobs, m: number of machines, p: common processing time,
    releases: nondecreasing release times (job j is releases[j-1]),
    original_ids: original_ids[k] = 1-based input position of the job at
    sorted position k+1.
    """

    n: int
    m: int
    p: Fraction
    releases: tuple[Fraction, ...]
    original_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "releases", tuple(Fraction(r) for r in self.releases))
        object.__setattr__(self, "original_ids", tuple(self.original_ids))
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if len(self.releases) != self.n:
            raise ValueError(f"expected {self.n} releases, got {len(self.releases)}")
        if any(r < 0 for r in self.releases):
            raise ValueError("release times must be nonnegative")
        if any(a > b for a, b in zip(self.releases, self.releases[1:])):
            raise ValueError("releases must be nondecreasing")
        if sorted(self.original_ids) != list(range(1, self.n + 1)):
            raise ValueError("original_ids must be a permutation of 1..n")

    @classmethod
    def make(cls, n: int, m: int, p, releases: Sequence) -> "Instance":
        """Build a canonical instance from releases in arbitrary order.

        Sorts releases stably (ties keep input order) and records the
        resulting permutation in original_ids.
        """
        rs = [Fraction(r) for r in releases]
        order = sorted(range(len(rs)), key=lambda k: rs[k])
        return cls(
            n=n,
            m=m,
            p=Fraction(p),
            releases=tuple(rs[k] for k in order),
            original_ids=tuple(k + 1 for k in order),
        )

    def horizon(self) -> Fraction:
        """Upper bound r_n + n*p on the last completion of any optimal schedule."""
        return self.releases[-1] + self.n * self.p

    def is_integral(self) -> bool:
        return self.p.denominator == 1 and all(r.denominator == 1 for r in self.releases)


@dataclass(frozen=True)
class GenParams:
    """Parameters for the seeded random instance generator."""

    n: int
    m: int
    p_max: int
    r_max: int
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.p_max < 1:
            raise ValueError("p_max must be >= 1")
        if self.r_max < 0:
            raise ValueError("r_max must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, line) skipping comments and blank lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_instance(text: str) -> Instance:
    """Parse the v1 instance format into a canonical Instance."""
    lines = _content_lines(text)

    def next_line(what: str) -> tuple[int, str]:
        try:
            return next(lines)
        except StopIteration:
            raise InstanceFormatError(f"unexpected end of input, expected {what}") from None

    lineno, header = next_line("header")
    if header != INSTANCE_HEADER:
        raise InstanceFormatError(f"bad header {header!r}, expected {INSTANCE_HEADER!r}", lineno)

    lineno, counts = next_line("job and machine counts")
    fields = counts.split()
    if len(fields) != 2:
        raise InstanceFormatError("expected '<n> <m>'", lineno)
    try:
        n, m = int(fields[0]), int(fields[1])
    except ValueError:
        raise InstanceFormatError("n and m must be decimal integers", lineno) from None
    if n < 1 or m < 1:
        raise InstanceFormatError(f"n and m must be >= 1, got n={n} m={m}", lineno)

    lineno, ptok = next_line("processing time")
    try:
        p = parse_rational(ptok)
    except ValueError as exc:
        raise InstanceFormatError(str(exc), lineno, column=1) from None
    if p <= 0:
        raise InstanceFormatError(f"processing time must be positive, got {ptok}", lineno)

    lineno, rline = next_line("release times")
    tokens = rline.split()
    if len(tokens) != n:
        raise InstanceFormatError(f"expected {n} release times, got {len(tokens)}", lineno)
    releases = []
    col = 1
    for tok in tokens:
        try:
            r = parse_rational(tok)
        except ValueError as exc:
            raise InstanceFormatError(str(exc), lineno, column=col) from None
        if r < 0:
            raise InstanceFormatError(f"negative release time {tok}", lineno, column=col)
        releases.append(r)
        col += len(tok) + 1

    extra = next(lines, None)
    if extra is not None:
        raise InstanceFormatError(f"trailing content {extra[1]!r}", extra[0])

    return Instance.make(n, m, p, releases)


def write_instance(inst: Instance) -> str:
    """Serialize an Instance to canonical v1 text (sorted releases, reduced tokens)."""
    return "\n".join(
        [
            INSTANCE_HEADER,
            f"{inst.n} {inst.m}",
            format_rational(inst.p),
            " ".join(format_rational(r) for r in inst.releases),
        ]
    ) + "\n"


def generate_instance(params: GenParams) -> Instance:
    """Deterministic seeded random instance: integer p in [1, p_max], releases in [0, r_max]."""
    rng = random.Random(params.seed)
    p = rng.randint(1, params.p_max)
    releases = [rng.randint(0, params.r_max) for _ in range(params.n)]
    return Instance.make(params.n, params.m, p, releases)


def enumerate_instances(n_max: int, m_max: int, p_max: int, r_max: int) -> Iterator[Instance]:
    """Yield every integer instance within the bounds exactly once.

    Order: n ascending, then m ascending, then p ascending, then the
    nondecreasing release vector in lexicographic order.
    """
    if min(n_max, m_max, p_max) < 1 or r_max < 0:
        raise ValueError("bounds must be at least 1 (r_max at least 0)")
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            for p in range(1, p_max + 1):
                for rel in itertools.combinations_with_replacement(range(r_max + 1), n):
                    yield Instance.make(n, m, p, rel)
