"""Extremal strict 3-SAT instances and the exact counting bounds around them."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb

from .errors import InvalidN, InvalidTriple
from .formula import Clause, Formula, clause_from_pattern, clause_universe_size, pattern_bits

GUARANTEED_SAT_M = 7


@dataclass(frozen=True)
class BoundsSummary:
    n_vars: int
    m_guaranteed_sat: int
    alpha_min_unsat: Fraction
    n_min_cores: int
    m_maxsat: int
    m_max: int
    n_maximal_sat_instances: int

    @property
    def alpha_max_sat(self) -> Fraction:
        return Fraction(self.m_maxsat, self.n_vars)

    def to_json(self) -> dict:
        # big integers as decimal strings, rationals as "p/q"
        out = {}
        for k, v in asdict(self).items():
            out[k] = v if k == "n_vars" else str(v)
        out["alpha_max_sat"] = str(self.alpha_max_sat)
        return out


def _check_n(n: int) -> None:
    if n < 3:
        raise InvalidN(f"n must be >= 3, got {n}")


def count_min_cores(n: int) -> int:
    _check_n(n)
    return comb(n, 3)


def bounds_summary(n: int) -> BoundsSummary:
    _check_n(n)
    cores = comb(n, 3)
    return BoundsSummary(
        n_vars=n,
        m_guaranteed_sat=GUARANTEED_SAT_M,
        alpha_min_unsat=Fraction(8, n),
        n_min_cores=cores,
        m_maxsat=7 * cores,
        m_max=clause_universe_size(n),
        n_maximal_sat_instances=2**n,
    )


def make_unsat_core(n: int, triple: tuple[int, int, int]) -> Formula:
    """The eight clauses over one variable triple, ordered by falsifying pattern."""
    i, j, k = triple
    if n < 3 or not (1 <= i < j < k <= n):
        raise InvalidTriple(f"triple {triple} must satisfy 1 <= i < j < k <= {n}")
    clauses = [clause_from_pattern((i, j, k), pattern_bits(p)) for p in range(8)]
    return Formula(n, clauses, meta={"kind": "unsat_core", "triple": (i, j, k)})


def target_falsifier(triple: tuple[int, int, int], target: int) -> Clause:
    """The one clause on ``triple`` that assignment ``target`` violates."""
    return clause_from_pattern(triple, tuple((target >> (v - 1)) & 1 for v in triple))


def make_max_sat(n: int, target: int) -> Formula:
    """All clauses except the C(n,3) falsifiers of ``target``.

    Clauses are grouped by triple in lexicographic order; the excluded
    falsifiers are kept in ``meta["excluded_clauses"]`` in the same order.
    """
    _check_n(n)
    if not 0 <= target < (1 << n):
        raise ValueError(f"target {target} out of range for n={n}")
    clauses: list[Clause] = []
    excluded: list[Clause] = []
    for triple in itertools.combinations(range(1, n + 1), 3):
        bad = target_falsifier(triple, target)
        excluded.append(bad)
        for p in range(8):
            c = clause_from_pattern(triple, pattern_bits(p))
            if c != bad:
                clauses.append(c)
    return Formula(n, clauses, meta={"kind": "max_sat", "target": target, "excluded_clauses": tuple(excluded)})


def excluded_clauses(f: Formula, target: int) -> tuple[Clause, ...]:
    if "excluded_clauses" in f.meta and f.meta.get("target") == target:
        return f.meta["excluded_clauses"]
    return tuple(target_falsifier(t, target) for t in itertools.combinations(range(1, f.n_vars + 1), 3))


def extend_to_unsat(f: Formula, target: int, clause: Clause | None = None) -> Formula:
    """Append one excluded clause (the first, unless ``clause`` is given).

    The appended clause falsifies ``target``, the only solution left, so the
    result is unsatisfiable.
    """
    excluded = excluded_clauses(f, target)
    if clause is None:
        clause = excluded[0]
    elif clause not in excluded:
        raise ValueError(f"{clause} is not excluded for target {target}")
    return Formula(f.n_vars, f.clauses + (clause,), meta={**f.meta, "kind": "max_sat_plus_one"})


def sidecar(f: Formula) -> dict:
    """JSON sidecar describing an extremal construction."""
    kind = f.meta.get("kind")
    out: dict = {"kind": kind, "n_vars": f.n_vars, "n_clauses": f.n_clauses}
    if kind == "unsat_core":
        out["triple"] = list(f.meta["triple"])
        out["excluded_clauses"] = []
    elif kind == "max_sat":
        out["target"] = str(f.meta["target"])
        out["excluded_clauses"] = [list(c.to_ints()) for c in f.meta["excluded_clauses"]]
    return out
