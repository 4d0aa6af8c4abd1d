"""Solution sets as bit vectors over the 2^N assignments of the Boolean hypercube.

Assignment index ``a`` encodes variable ``v`` in bit ``v - 1`` (variable 1 is the
least-significant bit). A clause is applied by clearing the 2^(N-3) indices that
match its falsifying pattern on its three variables, using a strided view of the
bit vector; the remaining formula is never re-evaluated.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from .errors import CapExceeded, InvalidN
from .formula import Clause, Formula, falsifying_pattern

DEFAULT_CAP = 22
MAX_CAP = 26


def _check_n(n: int, cap: int) -> None:
    if cap > MAX_CAP:
        raise CapExceeded(f"enumeration cap {cap} is above the hard limit {MAX_CAP}")
    if n < 3:
        raise InvalidN(f"n must be >= 3, got {n}")
    if n > cap:
        raise CapExceeded(f"N={n} exceeds the enumeration cap {cap}")


@dataclass(frozen=True, eq=False)
class SolutionSet:
    n_vars: int
    bits: np.ndarray  # bool, length 2**n_vars

    def __post_init__(self):
        if self.bits.shape != (1 << self.n_vars,) or self.bits.dtype != np.bool_:
            raise ValueError("bits must be a bool vector of length 2**n_vars")

    def __eq__(self, other):
        if not isinstance(other, SolutionSet):
            return NotImplemented
        return self.n_vars == other.n_vars and bool(np.array_equal(self.bits, other.bits))

    def __len__(self) -> int:
        return count(self)

    def __contains__(self, idx: int) -> bool:
        return 0 <= idx < self.bits.size and bool(self.bits[idx])

    def indices(self) -> np.ndarray:
        """Valid assignment indices in ascending order."""
        return np.flatnonzero(self.bits)

    def copy(self) -> "SolutionSet":
        return SolutionSet(self.n_vars, self.bits.copy())


def full_space(n: int, cap: int = DEFAULT_CAP) -> SolutionSet:
    _check_n(n, cap)
    return SolutionSet(n, np.ones(1 << n, dtype=bool))


def _clear_clause(bits: np.ndarray, n: int, c: Clause) -> None:
    # Axis n - v of the (2,)*n view is variable v, since variable 1 is the LSB.
    view = bits.reshape((2,) * n)
    key = [slice(None)] * n
    vars3, vals = falsifying_pattern(c)
    for v, b in zip(vars3, vals):
        key[n - v] = b
    view[tuple(key)] = False


def apply_clause(s: SolutionSet, c: Clause, *, inplace: bool = False) -> SolutionSet:
    """Remove the assignments falsified by ``c``.

    Returns a new set unless ``inplace`` is true, in which case ``s`` (an owned
    accumulator) is modified and returned.
    """
    if c.c.var > s.n_vars:
        raise ValueError(f"clause {c} uses a variable above n_vars={s.n_vars}")
    out = s if inplace else s.copy()
    _clear_clause(out.bits, out.n_vars, c)
    return out


def enumerate_solutions(f: Formula, cap: int = DEFAULT_CAP) -> SolutionSet:
    """All satisfying assignments of ``f`` as a SolutionSet."""
    s = full_space(f.n_vars, cap)
    for c in f.clauses:
        _clear_clause(s.bits, s.n_vars, c)
    return s


def count(s: SolutionSet) -> int:
    return int(np.count_nonzero(s.bits))


def is_empty(s: SolutionSet) -> bool:
    return not s.bits.any()


def hamming_distance(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def neighbors(a: int, n: int) -> list[int]:
    """The ``n`` assignments at Hamming distance one from ``a``."""
    if not 0 <= a < (1 << n):
        raise ValueError(f"index {a} out of range for n={n}")
    return [a ^ (1 << i) for i in range(n)]


def assignment_bits(a: int, n: int) -> tuple[int, ...]:
    """Tuple (x1, ..., xn) for index ``a``."""
    return tuple((a >> i) & 1 for i in range(n))


def assignment_index(values) -> int:
    """Index of the assignment given as a sequence (x1, ..., xn) of 0/1."""
    return sum(int(bool(b)) << i for i, b in enumerate(values))


def dump(s: SolutionSet, out: BinaryIO) -> None:
    """Binary dump: 8-byte little-endian N, then the bits packed LSB-first."""
    out.write(struct.pack("<Q", s.n_vars))
    out.write(np.packbits(s.bits, bitorder="little").tobytes())


def load(inp: BinaryIO) -> SolutionSet:
    (n,) = struct.unpack("<Q", inp.read(8))
    if n > MAX_CAP:
        raise CapExceeded(f"dump declares N={n}, above the hard limit {MAX_CAP}")
    size = 1 << n
    raw = np.frombuffer(inp.read((size + 7) // 8), dtype=np.uint8)
    if raw.size != (size + 7) // 8:
        raise ValueError("truncated solution-set dump")
    bits = np.unpackbits(raw, bitorder="little")[:size].astype(bool)
    return SolutionSet(int(n), bits)
