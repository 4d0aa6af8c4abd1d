"""Instrumented chronological DFS for strict 3-CNF.

No unit propagation, no pure-literal rule, no learning: every variable is a
decision, taken in a fixed order, and a node is a conflict leaf as soon as some
clause has all three literals false. Counting conventions:

* a *node* is one (variable, value) assignment tried below the root, so the
  depth of a node equals the number of assigned variables;
* a *conflict* is a node rejected because a clause became fully falsified;
* a *backtrack* is a return to the parent from a non-root node whose whole
  subtree failed (conflict leaves themselves are not backtracks);
* a *branch* is a root-to-leaf path ending in a conflict or a solution, so
  ``branches_to_first_solution`` is the number of conflicts before the first
  model, plus one.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Literal as TypingLiteral, Mapping

from .formula import Clause, Formula

VarOrder = TypingLiteral["static-ascending", "seeded-random"]
ValueOrder = TypingLiteral["zero-first", "one-first", "seeded-random"]


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class SolverConfig:
    var_order: VarOrder = "static-ascending"
    value_order: ValueOrder = "zero-first"
    seed: int = 0
    node_budget: int | None = None

    def __post_init__(self):
        if self.var_order not in ("static-ascending", "seeded-random"):
            raise ValueError(f"unknown var_order {self.var_order!r}")
        if self.value_order not in ("zero-first", "one-first", "seeded-random"):
            raise ValueError(f"unknown value_order {self.value_order!r}")
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")


@dataclass
class DfsStats:
    nodes_visited: int = 0
    conflicts: int = 0
    backtracks: int = 0
    max_depth: int = 0
    conflict_depth_hist: dict[int, int] = field(default_factory=dict)
    branches_to_first_solution: int | None = None
    depth1_refutation: bool = False
    # nodes where both values of the next variable failed at once, i.e. the
    # variable was removed under the current partial assignment
    removed_var_nodes: int = 0

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["conflict_depth_hist"] = {str(k): v for k, v in sorted(self.conflict_depth_hist.items())}
        return d


@dataclass(frozen=True)
class SolveResult:
    status: Status
    model: int | None
    stats: DfsStats

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT


def _literal_false(lit, partial: Mapping[int, int]) -> bool:
    val = partial.get(lit.var)
    return val is not None and val == int(not lit.positive)


def conflict_check(f: Formula, partial: Mapping[int, int]) -> Clause | None:
    """First clause (in formula order) whose three literals are all false."""
    for c in f.clauses:
        if _literal_false(c.a, partial) and _literal_false(c.b, partial) and _literal_false(c.c, partial):
            return c
    return None


def verify_model(f: Formula, a: int) -> bool:
    """True iff assignment index ``a`` satisfies every clause of ``f``."""
    if not 0 <= a < (1 << f.n_vars):
        raise ValueError(f"assignment {a} out of range for n={f.n_vars}")
    for c in f.clauses:
        if not any(((a >> (lit.var - 1)) & 1) == lit.positive for lit in c):
            return False
    return True


class _BudgetHit(Exception):
    pass


def _orders(n: int, cfg: SolverConfig) -> tuple[list[int], list[tuple[int, int]]]:
    rng = random.Random(cfg.seed)
    order = list(range(1, n + 1))
    if cfg.var_order == "seeded-random":
        rng.shuffle(order)
    if cfg.value_order == "zero-first":
        values = [(0, 1)] * n
    elif cfg.value_order == "one-first":
        values = [(1, 0)] * n
    else:
        # one random phase per decision level, fixed for the whole run
        values = [(0, 1) if rng.random() < 0.5 else (1, 0) for _ in range(n)]
    return order, values


def _completion_tables(f: Formula, order: list[int]) -> list[tuple[tuple[int, frozenset[int]], ...]]:
    # A clause can only become fully falsified at the level that assigns the
    # last of its variables, so each level checks just those clauses.
    pos = {v: p for p, v in enumerate(order)}
    by_level: list[dict[int, set[int]]] = [{} for _ in order]
    for c in f.clauses:
        p = max(pos[lit.var] for lit in c)
        mask = fval = 0
        for lit in c:
            mask |= 1 << (lit.var - 1)
            if not lit.positive:
                fval |= 1 << (lit.var - 1)
        by_level[p].setdefault(mask, set()).add(fval)
    return [tuple((m, frozenset(vals)) for m, vals in lvl.items()) for lvl in by_level]


def solve(f: Formula, cfg: SolverConfig | None = None) -> SolveResult:
    """Run the DFS on ``f``; deterministic for a given (formula, config)."""
    cfg = cfg or SolverConfig()
    n = f.n_vars
    order, values = _orders(n, cfg)
    tables = _completion_tables(f, order)
    bits = [1 << (v - 1) for v in order]
    budget = cfg.node_budget

    stats = DfsStats()
    hist: Counter[int] = Counter()
    found: list[int] = []

    def dfs(p: int, val: int) -> bool:
        if p == n:
            found.append(val)
            return True
        checks = tables[p]
        bit = bits[p]
        depth = p + 1
        failed_now = 0
        for b in values[p]:
            stats.nodes_visited += 1
            if budget is not None and stats.nodes_visited > budget:
                stats.nodes_visited = budget
                raise _BudgetHit
            if depth > stats.max_depth:
                stats.max_depth = depth
            nv = val | bit if b else val
            if any((nv & mask) in fvals for mask, fvals in checks):
                stats.conflicts += 1
                hist[depth] += 1
                failed_now += 1
                continue
            if dfs(depth, nv):
                return True
        if failed_now == 2:
            stats.removed_var_nodes += 1
        if p > 0:
            stats.backtracks += 1
        return False

    try:
        sat = dfs(0, 0)
    except _BudgetHit:
        stats.conflict_depth_hist = dict(sorted(hist.items()))
        return SolveResult(Status.BUDGET_EXHAUSTED, None, stats)

    stats.conflict_depth_hist = dict(sorted(hist.items()))
    if sat:
        stats.branches_to_first_solution = stats.conflicts + 1
        return SolveResult(Status.SAT, found[0], stats)
    stats.depth1_refutation = stats.nodes_visited == 2 and hist.get(1, 0) == 2
    return SolveResult(Status.UNSAT, None, stats)


def model_literals(model: int, n: int) -> list[int]:
    """Signed literal list (DIMACS style) for an assignment index."""
    return [v if (model >> (v - 1)) & 1 else -v for v in range(1, n + 1)]
