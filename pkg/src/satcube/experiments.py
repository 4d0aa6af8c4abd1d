"""Seeded Monte Carlo sweeps over constraint density.

Every instance gets its own seed, mixed from (master_seed, point index, sample
index) with SplitMix64, so results do not depend on execution order or on the
number of worker processes.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from scipy.stats import binomtest

from .formula import SAMPLING_MODES, GenConfig, m_for_alpha, random_formula
from .hypercube import DEFAULT_CAP, count, enumerate_solutions
from .solver import SolverConfig, Status, solve
from .topology import clusters, freeze_report

ALPHA_D = 3.86
ALPHA_S = 4.267
REFERENCE_CONSTANTS = {"alpha_d": ALPHA_D, "alpha_s": ALPHA_S}
LN_8_7 = math.log(8 / 7)
MIN_CLASS_SAMPLES = 10

CSV_COLUMNS = (
    "alpha", "m", "n_samples", "p_sat", "p_sat_lo", "p_sat_hi", "mean_solutions", "sol_stderr",
    "predicted_solutions", "mean_clusters", "global_frozen_frac", "local_frozen_frac",
    "median_nodes_all", "median_nodes_sat", "median_nodes_unsat", "depth1_frac", "predicted_log_effort",
)

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def instance_seed(master_seed: int, point: int, sample: int) -> int:
    """splitmix64(splitmix64(splitmix64(master) ^ point) ^ sample)."""
    return splitmix64(splitmix64(splitmix64(master_seed & _MASK64) ^ point) ^ sample)


def solver_seed(inst_seed: int) -> int:
    return splitmix64(inst_seed ^ 0xD1B54A32D192ED03)


def expected_solutions(n: int, m: int) -> float:
    """Mean solution count over independent random clauses: 2^n (7/8)^m."""
    return math.ldexp((7 / 8) ** m, n)


def expected_search_effort(m: int) -> float:
    return (8 / 7) ** m


def log_effort(n: int, alpha) -> float:
    return n * float(alpha) * LN_8_7


@dataclass(frozen=True)
class SweepConfig:
    n_vars: int
    alpha_grid: tuple[Fraction, ...]
    samples_per_point: int
    gen_mode: str = "replacement"
    solver_cfg: SolverConfig = field(default_factory=SolverConfig)
    topology_cap: int = 16
    master_seed: int = 0
    enum_cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.n_vars < 3:
            raise ValueError("n_vars must be >= 3")
        if self.samples_per_point < 1:
            raise ValueError("samples_per_point must be >= 1")
        if self.gen_mode not in SAMPLING_MODES:
            raise ValueError(f"gen_mode must be one of {SAMPLING_MODES}")
        if not self.alpha_grid:
            raise ValueError("alpha_grid is empty")
        grid = tuple(a if isinstance(a, Fraction) else Fraction(str(a)) for a in self.alpha_grid)
        if any(a < 0 for a in grid):
            raise ValueError("alpha values must be >= 0")
        object.__setattr__(self, "alpha_grid", grid)

    @property
    def runs_topology(self) -> bool:
        return self.n_vars <= self.topology_cap

    def m_at(self, point: int) -> int:
        return m_for_alpha(self.alpha_grid[point], self.n_vars)

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "alpha_grid": [str(a) for a in self.alpha_grid],
            "samples_per_point": self.samples_per_point,
            "gen_mode": self.gen_mode,
            "solver": asdict(self.solver_cfg),
            "topology_cap": self.topology_cap,
            "master_seed": str(self.master_seed),
        }


class InstanceRecord(NamedTuple):
    point: int
    sample: int
    seed: int
    status: str
    nodes: int
    branches: int | None
    depth1: bool
    n_solutions: int | None = None
    n_clusters: int | None = None
    global_frozen_frac: float | None = None
    local_frozen_frac: float | None = None

    @property
    def sat(self) -> bool:
        return self.status == Status.SAT.value

    @property
    def unsat(self) -> bool:
        return self.status == Status.UNSAT.value


@dataclass(frozen=True)
class SweepRow:
    alpha: Fraction
    m: int
    n_samples: int
    p_sat: float | None
    p_sat_lo: float | None
    p_sat_hi: float | None
    mean_solutions: float | None
    sol_stderr: float | None
    predicted_solutions: float
    mean_clusters: float | None
    global_frozen_frac: float | None
    local_frozen_frac: float | None
    median_nodes_all: float
    median_nodes_sat: float | None
    median_nodes_unsat: float | None
    depth1_frac: float
    predicted_log_effort: float
    mean_nodes_all: float = 0.0
    mean_branches_sat: float | None = None
    records: tuple[InstanceRecord, ...] = field(default=(), repr=False, compare=False)

    def csv_values(self) -> list[str]:
        out = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if v is None:
                out.append("")
            elif isinstance(v, Fraction):
                out.append(_fmt_alpha(v))
            else:
                out.append(repr(v) if isinstance(v, float) else str(v))
        return out


def _fmt_alpha(a: Fraction) -> str:
    return repr(float(a)) if a.denominator != 1 else str(a.numerator)


def run_instance(cfg: SweepConfig, point: int, sample: int) -> InstanceRecord:
    n, m = cfg.n_vars, cfg.m_at(point)
    seed = instance_seed(cfg.master_seed, point, sample)
    f = random_formula(GenConfig(n, m, cfg.gen_mode, seed))
    res = solve(f, replace(cfg.solver_cfg, seed=solver_seed(seed)))
    rec = InstanceRecord(
        point, sample, seed, res.status.value, res.stats.nodes_visited,
        res.stats.branches_to_first_solution, res.stats.depth1_refutation,
    )
    if not cfg.runs_topology:
        return rec
    s = enumerate_solutions(f, cfg.enum_cap)
    n_sol = count(s)
    if n_sol == 0:
        return rec._replace(n_solutions=0, n_clusters=0)
    cr = clusters(s)
    fr = freeze_report(s, cr)
    return rec._replace(
        n_solutions=n_sol,
        n_clusters=cr.n_clusters,
        global_frozen_frac=len(fr.global_frozen) / n,
        local_frozen_frac=statistics.fmean(len(d) / n for d in fr.per_cluster),
    )


def _run_point(cfg: SweepConfig, point: int) -> list[InstanceRecord]:
    return [run_instance(cfg, point, k) for k in range(cfg.samples_per_point)]


def _median(xs: Sequence[float]) -> float | None:
    return float(statistics.median(xs)) if xs else None


def _mean(xs: Sequence[float]) -> float | None:
    return statistics.fmean(xs) if xs else None


def wilson_interval(k: int, n: int) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def aggregate(cfg: SweepConfig, point: int, records: Sequence[InstanceRecord]) -> SweepRow:
    records = sorted(records, key=lambda r: r.sample)
    alpha, m, n = cfg.alpha_grid[point], cfg.m_at(point), cfg.n_vars
    decided = [r for r in records if r.sat or r.unsat]
    n_sat = sum(r.sat for r in decided)
    p_sat = lo = hi = None
    if decided:
        p_sat = n_sat / len(decided)
        lo, hi = wilson_interval(n_sat, len(decided))

    mean_sol = stderr = mean_cl = gfrac = lfrac = None
    if cfg.runs_topology:
        sols = [r.n_solutions for r in records]
        mean_sol = statistics.fmean(sols)
        stderr = statistics.stdev(sols) / math.sqrt(len(sols)) if len(sols) > 1 else None
        mean_cl = statistics.fmean(r.n_clusters for r in records)
        gfrac = _mean([r.global_frozen_frac for r in records if r.n_solutions])
        lfrac = _mean([r.local_frozen_frac for r in records if r.n_solutions])

    nodes_all = [r.nodes for r in records]
    return SweepRow(
        alpha=alpha,
        m=m,
        n_samples=len(records),
        p_sat=p_sat,
        p_sat_lo=lo,
        p_sat_hi=hi,
        mean_solutions=mean_sol,
        sol_stderr=stderr,
        predicted_solutions=expected_solutions(n, m),
        mean_clusters=mean_cl,
        global_frozen_frac=gfrac,
        local_frozen_frac=lfrac,
        median_nodes_all=_median(nodes_all),
        median_nodes_sat=_median([r.nodes for r in records if r.sat]),
        median_nodes_unsat=_median([r.nodes for r in records if r.unsat]),
        depth1_frac=sum(r.depth1 for r in records) / len(records),
        predicted_log_effort=log_effort(n, alpha),
        mean_nodes_all=statistics.fmean(nodes_all),
        mean_branches_sat=_mean([r.branches for r in records if r.sat]),
        records=tuple(records),
    )


def run_sweep(
    cfg: SweepConfig,
    workers: int = 1,
    progress: Callable[[int, SweepRow], None] | None = None,
) -> list[SweepRow]:
    """Sample, solve and (when N <= topology_cap) enumerate every grid point.

    Points are farmed out to ``workers`` processes when workers > 1; rows come
    back in grid order either way.
    """
    points = range(len(cfg.alpha_grid))
    rows: list[SweepRow] = []
    if workers <= 1:
        for p in points:
            rows.append(aggregate(cfg, p, _run_point(cfg, p)))
            if progress:
                progress(p, rows[-1])
        return rows
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for p, recs in zip(points, pool.map(_run_point, [cfg] * len(points), points)):
            rows.append(aggregate(cfg, p, recs))
            if progress:
                progress(p, rows[-1])
    return rows


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_values())
    return buf.getvalue()


def sidecar(cfg: SweepConfig, rows: Sequence[SweepRow]) -> dict:
    return {
        "config": cfg.to_json(),
        "seeds": {
            "master_seed": str(cfg.master_seed),
            "instance_seed": "splitmix64(splitmix64(splitmix64(master) ^ point) ^ sample)",
            "solver_seed": "splitmix64(instance_seed ^ 0xD1B54A32D192ED03)",
            "generator": "numpy PCG64 seeded with instance_seed",
        },
        "reference_constants": dict(REFERENCE_CONSTANTS),
        "points": [
            {
                "alpha": str(r.alpha),
                "m": r.m,
                "mean_nodes_all": r.mean_nodes_all,
                "mean_branches_sat": r.mean_branches_sat,
                "predicted_effort": expected_search_effort(r.m),
                "n_budget_exhausted": sum(rec.status == Status.BUDGET_EXHAUSTED.value for rec in r.records),
            }
            for r in rows
        ],
    }


@dataclass(frozen=True)
class HardnessPoint:
    alpha: Fraction
    p_sat: float | None
    n_sat: int
    n_unsat: int
    median_nodes_sat: float | None
    median_nodes_unsat: float | None
    insufficient: tuple[str, ...] = ()  # "sat" / "unsat" classes with < 10 instances


def hardness_decomposition(rows: Sequence[SweepRow], min_samples: int = MIN_CLASS_SAMPLES) -> list[HardnessPoint]:
    """Split per-point search cost by outcome.

    A class with fewer than ``min_samples`` instances gets a None median and is
    listed in ``insufficient`` instead of reporting a noisy value.
    """
    out = []
    for r in rows:
        if not r.records:
            raise ValueError("hardness_decomposition needs rows with per-instance records")
        sat = [x.nodes for x in r.records if x.sat]
        unsat = [x.nodes for x in r.records if x.unsat]
        flags = []
        if len(sat) < min_samples:
            flags.append("sat")
        if len(unsat) < min_samples:
            flags.append("unsat")
        out.append(HardnessPoint(
            alpha=r.alpha,
            p_sat=r.p_sat,
            n_sat=len(sat),
            n_unsat=len(unsat),
            median_nodes_sat=None if "sat" in flags else _median(sat),
            median_nodes_unsat=None if "unsat" in flags else _median(unsat),
            insufficient=tuple(flags),
        ))
    return out


@dataclass(frozen=True)
class ExpectationReport:
    flagged: tuple[tuple[Fraction, int, float, float, float], ...]  # alpha, m, mean, predicted, stderr
    skipped: tuple[tuple[Fraction, str], ...]

    @property
    def ok(self) -> bool:
        return not self.flagged


def validate_expectation(rows: Sequence[SweepRow], n_sigma: float = 3.0) -> ExpectationReport:
    """Flag points whose mean solution count is more than ``n_sigma`` stderr from 2^N (7/8)^M."""
    flagged, skipped = [], []
    for r in rows:
        if r.mean_solutions is None:
            skipped.append((r.alpha, "no enumeration data"))
            continue
        if r.sol_stderr is None:
            skipped.append((r.alpha, "stderr undefined for a single sample"))
            continue
        diff = abs(r.mean_solutions - r.predicted_solutions)
        if r.sol_stderr == 0:
            # every sample equal (e.g. all UNSAT): no scale to compare against
            if diff > 1e-9 * max(1.0, r.predicted_solutions):
                skipped.append((r.alpha, "zero sample variance"))
        elif diff > n_sigma * r.sol_stderr:
            flagged.append((r.alpha, r.m, r.mean_solutions, r.predicted_solutions, r.sol_stderr))
    return ExpectationReport(tuple(flagged), tuple(skipped))


def alpha_grid(start, stop, step) -> tuple[Fraction, ...]:
    """Inclusive arithmetic grid in exact rationals."""
    a, b, d = (Fraction(str(x)) for x in (start, stop, step))
    if d <= 0:
        raise ValueError("step must be positive")
    out = []
    while a <= b:
        out.append(a)
        a += d
    return tuple(out)


def median_ci(values: Sequence[float], z: float = 1.959963984540054) -> tuple[float, float]:
    """Distribution-free ~95% interval for the median from binomial order statistics."""
    xs = sorted(values)
    k = len(xs)
    if k == 0:
        raise ValueError("empty sample")
    half = z * math.sqrt(k) / 2
    lo = max(0, math.floor(k / 2 - half))
    hi = min(k - 1, math.ceil(k / 2 + half))
    return float(xs[lo]), float(xs[hi])


def unimodal_within_noise(medians: Sequence[float], halfwidths: Sequence[float]) -> tuple[bool, int]:
    """Check rise-then-fall around the argmax, ignoring steps smaller than the joint CI.

    Returns (ok, index of the maximum).
    """
    peak = max(range(len(medians)), key=lambda i: medians[i])
    for i in range(len(medians) - 1):
        tol = halfwidths[i] + halfwidths[i + 1]
        step = medians[i + 1] - medians[i]
        if i < peak and step < -tol:
            return False, peak
        if i >= peak and step > tol:
            return False, peak
    return True, peak
