"""Brute-force reference implementations, deliberately independent of satcube internals."""

from itertools import combinations


def lit_true(lit: int, a: int) -> bool:
    bit = (a >> (abs(lit) - 1)) & 1
    return bit == 1 if lit > 0 else bit == 0


def satisfies(clauses, a: int) -> bool:
    return all(any(lit_true(l, a) for l in c) for c in clauses)


def brute_solutions(n: int, clauses) -> list[int]:
    """clauses: iterables of signed ints."""
    return [a for a in range(1 << n) if satisfies(clauses, a)]


def naive_clusters(sols):
    """Union-find over all pairs at Hamming distance 1, O(|S|^2)."""
    parent = {s: s for s in sols}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(sols, 2):
        if bin(a ^ b).count("1") == 1:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for s in sols:
        groups.setdefault(find(s), []).append(s)
    return [sorted(g) for _, g in sorted(groups.items(), key=lambda kv: min(kv[1]))]


def naive_frozen(members, n: int) -> dict[int, int]:
    out = {}
    for v in range(1, n + 1):
        vals = {(a >> (v - 1)) & 1 for a in members}
        if len(vals) == 1:
            out[v] = vals.pop()
    return out
