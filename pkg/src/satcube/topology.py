"""Cluster decomposition, frozen variables and removed variables.

Clusters are the connected components of the solution set under Hamming-1
adjacency. Labels are dense and ordered by each cluster's smallest member.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .errors import EmptySolutionSpace
from .formula import Formula
from .hypercube import DEFAULT_CAP, SolutionSet, _clear_clause, count, enumerate_solutions, full_space


@dataclass(frozen=True)
class ClusterReport:
    n_vars: int
    members: np.ndarray  # valid indices, ascending
    labels: np.ndarray  # labels[i] is the cluster of members[i]
    sizes: tuple[int, ...]

    @property
    def n_clusters(self) -> int:
        return len(self.sizes)

    @property
    def cluster_id(self) -> dict[int, int]:
        return dict(zip(self.members.tolist(), self.labels.tolist()))

    def label_of(self, idx: int) -> int:
        pos = int(np.searchsorted(self.members, idx))
        if pos == self.members.size or self.members[pos] != idx:
            raise KeyError(idx)
        return int(self.labels[pos])

    def cluster(self, label: int) -> np.ndarray:
        return self.members[self.labels == label]


@dataclass(frozen=True)
class FreezeReport:
    per_cluster: tuple[dict[int, int], ...]
    global_frozen: dict[int, int]

    @property
    def n_locally_frozen(self) -> list[int]:
        return [len(m) for m in self.per_cluster]


@dataclass(frozen=True)
class RemovalProbe:
    partial: Mapping[int, int]
    removed_vars: frozenset[int] = field(default_factory=frozenset)


class TrajectoryRow(NamedTuple):
    m: int
    n_solutions: int
    n_clusters: int
    n_global_frozen: int | None  # None once the space is empty


def _bfs_roots(valid: np.ndarray, n: int, seeds: np.ndarray, root: np.ndarray) -> None:
    # Level-synchronous flood fill with an explicit frontier; each seed is the
    # smallest unvisited valid index, so it is the minimum of its component.
    for seed in seeds.tolist():
        if root[seed] >= 0:
            continue
        root[seed] = seed
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            nxt = []
            for i in range(n):
                nb = frontier ^ (1 << i)
                nb = nb[valid[nb] & (root[nb] < 0)]
                if nb.size:
                    root[nb] = seed
                    nxt.append(nb)
            if not nxt:
                break
            frontier = np.unique(np.concatenate(nxt))


def clusters(s: SolutionSet) -> ClusterReport:
    """Hamming-1 connected components of ``s``."""
    n, valid = s.n_vars, s.bits
    members = np.flatnonzero(valid)
    if members.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return ClusterReport(n, empty, empty, ())
    root = np.full(valid.size, -1, dtype=np.int32)  # indices < 2**26 fit

    has_nb = np.zeros(members.size, dtype=bool)
    for i in range(n):
        has_nb |= valid[members ^ (1 << i)]
    isolated = members[~has_nb]
    root[isolated] = isolated
    _bfs_roots(valid, n, members[has_nb], root)

    roots = root[members]
    uniq, labels = np.unique(roots, return_inverse=True)
    sizes = np.bincount(labels, minlength=uniq.size)
    return ClusterReport(n, members, labels.astype(np.int64), tuple(int(x) for x in sizes))


def _var_ones(members: np.ndarray, v: int) -> np.ndarray:
    return (members >> (v - 1)) & 1


def globally_frozen(s: SolutionSet) -> dict[int, int]:
    """Variables taking a single value over every solution, mapped to that value."""
    members = s.indices()
    if members.size == 0:
        raise EmptySolutionSpace("freezing is undefined on an empty solution set")
    out = {}
    for v in range(1, s.n_vars + 1):
        ones = int(_var_ones(members, v).sum())
        if ones == 0:
            out[v] = 0
        elif ones == members.size:
            out[v] = 1
    return out


def freeze_report(s: SolutionSet, cr: ClusterReport | None = None) -> FreezeReport:
    if cr is None:
        cr = clusters(s)
    if cr.members.size == 0:
        raise EmptySolutionSpace("freezing is undefined on an empty solution set")
    sizes = np.asarray(cr.sizes)
    per_cluster: list[dict[int, int]] = [{} for _ in cr.sizes]
    for v in range(1, s.n_vars + 1):
        ones = np.bincount(cr.labels, weights=_var_ones(cr.members, v), minlength=sizes.size)
        for lab in np.flatnonzero(ones == 0).tolist():
            per_cluster[lab][v] = 0
        for lab in np.flatnonzero(ones == sizes).tolist():
            per_cluster[lab][v] = 1
    return FreezeReport(tuple(per_cluster), globally_frozen(s))


def immediately_removed_vars(f: Formula, partial: Mapping[int, int]) -> RemovalProbe:
    """Free variables whose both values fully falsify some clause under ``partial``.

    This is a syntactic one-step check; no search is performed. If ``partial``
    already falsifies a clause, every free variable counts as removed.
    """
    partial = {int(v): int(b) for v, b in partial.items()}
    free_vars = [v for v in range(1, f.n_vars + 1) if v not in partial]
    hit: dict[int, set[int]] = {}
    for c in f.clauses:
        free = []
        for lit in c:
            if lit.var not in partial:
                free.append(lit)
            elif partial[lit.var] == int(lit.positive):
                break  # literal satisfied
        else:
            if not free:
                return RemovalProbe(partial, frozenset(free_vars))
            if len(free) == 1:
                lit = free[0]
                hit.setdefault(lit.var, set()).add(int(not lit.positive))
    removed = frozenset(v for v, vals in hit.items() if len(vals) == 2)
    return RemovalProbe(partial, removed)


def replay_topology(f: Formula, cap: int = DEFAULT_CAP) -> list[TrajectoryRow]:
    """Topology after each clause prefix, in formula order.

    With no clauses a single row for m=0 is returned.
    """
    s = full_space(f.n_vars, cap)
    if not f.clauses:
        return [TrajectoryRow(0, count(s), 1, 0)]
    rows = []
    for m, c in enumerate(f.clauses, start=1):
        _clear_clause(s.bits, s.n_vars, c)
        n_sol = count(s)
        if n_sol == 0:
            rows.append(TrajectoryRow(m, 0, 0, None))
        else:
            rows.append(TrajectoryRow(m, n_sol, clusters(s).n_clusters, len(globally_frozen(s))))
    return rows


def topology_report(f: Formula, s: SolutionSet | None = None, cap: int = DEFAULT_CAP) -> dict:
    """JSON-ready topology summary of ``f``."""
    if s is None:
        s = enumerate_solutions(f, cap)
    cr = clusters(s)
    report = {
        "n_vars": f.n_vars,
        "n_clauses": f.n_clauses,
        "n_solutions": count(s),
        "n_clusters": cr.n_clusters,
        "cluster_sizes": sorted(cr.sizes, reverse=True),
    }
    if cr.n_clusters:
        fr = freeze_report(s, cr)
        # keep the same (descending size) order as cluster_sizes
        order = sorted(range(cr.n_clusters), key=lambda k: (-cr.sizes[k], k))
        report["n_locally_frozen_per_cluster"] = [len(fr.per_cluster[k]) for k in order]
        report["global_frozen"] = [v if b else -v for v, b in sorted(fr.global_frozen.items())]
    else:
        # freezing is undefined on an empty solution set
        report["n_locally_frozen_per_cluster"] = None
        report["global_frozen"] = None
    return report
