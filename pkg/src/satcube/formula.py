"""Literals, strict 3-clauses, formulas and the random instance generator.

Variables are 1-based (DIMACS convention). A clause always holds exactly three
literals over distinct variables, stored in ascending variable order so that
equal literal sets compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Iterable, Iterator, Literal as TypingLiteral, Mapping, NamedTuple

import numpy as np

from .errors import CapacityExceeded, DuplicateVariable, InvalidN

SamplingMode = TypingLiteral["replacement", "unique"]
SAMPLING_MODES = ("replacement", "unique")


class Literal(NamedTuple):
    var: int
    positive: bool

    def __int__(self) -> int:
        return self.var if self.positive else -self.var

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"~x{self.var}"


class Clause(NamedTuple):
    """Three literals over distinct variables, sorted by variable."""

    a: Literal
    b: Literal
    c: Literal

    @property
    def vars(self) -> tuple[int, int, int]:
        return (self.a.var, self.b.var, self.c.var)

    def to_ints(self) -> tuple[int, int, int]:
        return (int(self.a), int(self.b), int(self.c))

    def __str__(self) -> str:
        return "(" + " v ".join(str(lit) for lit in self) + ")"


def _sign(s) -> bool:
    if isinstance(s, str):
        if s in ("+", "pos", "positive"):
            return True
        if s in ("-", "neg", "negative"):
            return False
        raise ValueError(f"unknown sign {s!r}")
    return bool(s)


def make_clause(v1: int, s1, v2: int, s2, v3: int, s3) -> Clause:
    """Build the canonical clause for three (variable, sign) pairs.

    Signs may be booleans (True = positive literal) or the strings "+"/"-".
    """
    lits = [Literal(int(v1), _sign(s1)), Literal(int(v2), _sign(s2)), Literal(int(v3), _sign(s3))]
    for lit in lits:
        if lit.var < 1:
            raise ValueError(f"variable index must be >= 1, got {lit.var}")
    if len({lit.var for lit in lits}) != 3:
        raise DuplicateVariable(f"clause repeats a variable: {[int(l) for l in lits]}")
    lits.sort()
    return Clause(*lits)


def clause_from_ints(lits: Iterable[int]) -> Clause:
    """Clause from signed DIMACS integers, e.g. ``(-1, 2, 3)``."""
    lits = list(lits)
    if len(lits) != 3:
        raise ValueError(f"strict 3-clause needs 3 literals, got {len(lits)}")
    args = []
    for x in lits:
        if x == 0:
            raise ValueError("literal 0 is not a variable")
        args += [abs(x), x > 0]
    return make_clause(*args)


def falsifying_pattern(c: Clause) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Variables of ``c`` and the values that make each of its literals false."""
    return c.vars, (int(not c.a.positive), int(not c.b.positive), int(not c.c.positive))


def clause_from_pattern(vars3: tuple[int, int, int], bits: tuple[int, int, int]) -> Clause:
    """Inverse of :func:`falsifying_pattern`: the clause falsified exactly by ``bits``."""
    (i, j, k), (bi, bj, bk) = vars3, bits
    return make_clause(i, not bi, j, not bj, k, not bk)


@dataclass(frozen=True)
class Formula:
    n_vars: int
    clauses: tuple[Clause, ...] = ()
    meta: Mapping = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.n_vars < 3:
            raise InvalidN(f"strict 3-SAT needs at least 3 variables, got {self.n_vars}")
        object.__setattr__(self, "clauses", tuple(self.clauses))
        for c in self.clauses:
            if c.c.var > self.n_vars:
                raise ValueError(f"clause {c} uses a variable above n_vars={self.n_vars}")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.n_clauses, self.n_vars)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def prefix(self, m: int) -> "Formula":
        return Formula(self.n_vars, self.clauses[:m])

    def extended(self, *clauses: Clause) -> "Formula":
        return Formula(self.n_vars, self.clauses + tuple(clauses), self.meta)


def clause_universe_size(n: int) -> int:
    """Number of distinct strict 3-clauses over ``n`` variables, 8*C(n,3)."""
    if n < 3:
        raise InvalidN(f"n must be >= 3, got {n}")
    return 8 * comb(n, 3)


def all_clauses(n: int) -> Iterator[Clause]:
    """Every canonical clause over ``n`` variables, triples lexicographic then by pattern."""
    if n < 3:
        raise InvalidN(f"n must be >= 3, got {n}")
    for triple in itertools.combinations(range(1, n + 1), 3):
        for pattern in range(8):
            yield clause_from_pattern(triple, pattern_bits(pattern))


def pattern_bits(pattern: int) -> tuple[int, int, int]:
    """Split a 3-bit pattern value; the first variable of the triple is the high bit."""
    return ((pattern >> 2) & 1, (pattern >> 1) & 1, pattern & 1)


def m_for_alpha(alpha, n: int) -> int:
    """Clause count for density ``alpha``: round(alpha*n), halves rounded up."""
    a = alpha if isinstance(alpha, Fraction) else Fraction(str(alpha))
    return floor(a * n + Fraction(1, 2))


@dataclass(frozen=True)
class GenConfig:
    n_vars: int
    n_clauses: int
    mode: SamplingMode = "replacement"
    seed: int = 0

    def __post_init__(self):
        if self.mode not in SAMPLING_MODES:
            raise ValueError(f"mode must be one of {SAMPLING_MODES}, got {self.mode!r}")
        if self.n_clauses < 0:
            raise ValueError("n_clauses must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.n_clauses, self.n_vars)


def _draw_batch(rng: np.random.Generator, n: int, size: int) -> list[Clause]:
    # Rejection on ordered triples keeps every unordered triple equally likely.
    triples = rng.integers(0, n, size=(size, 3))
    while True:
        bad = (triples[:, 0] == triples[:, 1]) | (triples[:, 0] == triples[:, 2]) | (triples[:, 1] == triples[:, 2])
        k = int(bad.sum())
        if k == 0:
            break
        triples[bad] = rng.integers(0, n, size=(k, 3))
    signs = rng.integers(0, 8, size=size)
    out = []
    for (i, j, k), s in zip(triples.tolist(), signs.tolist()):
        lits = sorted(((i + 1, bool(s & 4)), (j + 1, bool(s & 2)), (k + 1, bool(s & 1))))
        out.append(Clause(Literal(*lits[0]), Literal(*lits[1]), Literal(*lits[2])))
    return out


def random_formula(cfg: GenConfig) -> Formula:
    """Sample a random strict 3-CNF formula.

    Each clause picks three distinct variables uniformly and one of the eight
    sign patterns uniformly. In ``unique`` mode a clause equal to an earlier one
    is discarded and redrawn. The stream comes from numpy's PCG64 seeded with
    ``cfg.seed``, so equal configs give equal formulas.
    """
    n, m = cfg.n_vars, cfg.n_clauses
    if n < 3:
        raise InvalidN(f"n_vars must be >= 3, got {n}")
    rng = np.random.default_rng(cfg.seed)
    if cfg.mode == "replacement":
        return Formula(n, _draw_batch(rng, n, m) if m else ())

    universe = clause_universe_size(n)
    if m > universe:
        raise CapacityExceeded(f"{m} unique clauses requested but only {universe} exist for n={n}")
    seen: set[Clause] = set()
    clauses: list[Clause] = []
    while len(clauses) < m:
        for c in _draw_batch(rng, n, m - len(clauses)):
            if c not in seen:
                seen.add(c)
                clauses.append(c)
    return Formula(n, clauses)
