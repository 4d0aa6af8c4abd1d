"""DIMACS CNF reading and writing for strict 3-CNF formulas."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, TextIO

from .errors import DimacsParseError, InvalidN
from .formula import Clause, Formula, clause_from_ints


def dumps(f: Formula, comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    write(f, buf, comments)
    return buf.getvalue()


def write(f: Formula, out: TextIO, comments: Iterable[str] = ()) -> None:
    for line in comments:
        for part in str(line).splitlines() or [""]:
            out.write(f"c {part}".rstrip() + "\n")
    out.write(f"p cnf {f.n_vars} {f.n_clauses}\n")
    for c in f.clauses:
        out.write(" ".join(str(x) for x in c.to_ints()) + " 0\n")


def save(f: Formula, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        write(f, fh, comments)


def loads(text: str) -> Formula:
    return read(io.StringIO(text))


def load(path) -> Formula:
    with open(Path(path)) as fh:
        return read(fh)


def read(stream: TextIO) -> Formula:
    """Parse DIMACS text with one clause per line.

    Raises DimacsParseError (with the offending line number) for anything that
    is not a strict 3-clause, a missing or repeated header, out-of-range
    variables, or a clause count that disagrees with the header.
    """
    header = None
    clauses: list[Clause] = []
    lineno = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line == "%":  # SATLIB trailer
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsParseError(lineno, "duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(lineno, f"bad problem line {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(lineno, f"bad problem line {line!r}") from None
            if n < 3:
                raise DimacsParseError(lineno, f"strict 3-SAT needs N >= 3, got {n}")
            if m < 0:
                raise DimacsParseError(lineno, "negative clause count")
            header = (n, m)
            continue
        if header is None:
            raise DimacsParseError(lineno, "clause before problem line")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsParseError(lineno, f"non-integer token in {line!r}") from None
        if not nums or nums[-1] != 0:
            raise DimacsParseError(lineno, "clause must end with 0 on the same line")
        lits = nums[:-1]
        if 0 in lits:
            raise DimacsParseError(lineno, "more than one clause on a line")
        if len(lits) != 3:
            raise DimacsParseError(lineno, f"expected 3 literals, got {len(lits)}")
        if len({abs(x) for x in lits}) != 3:
            raise DimacsParseError(lineno, f"repeated variable in clause {lits}")
        if max(abs(x) for x in lits) > header[0]:
            raise DimacsParseError(lineno, f"variable out of range 1..{header[0]}")
        clauses.append(clause_from_ints(lits))
    if header is None:
        raise DimacsParseError(max(lineno, 1), "missing problem line")
    if len(clauses) != header[1]:
        raise DimacsParseError(lineno, f"header declares {header[1]} clauses, found {len(clauses)}")
    try:
        return Formula(header[0], clauses)
    except InvalidN as exc:  # pragma: no cover - guarded above
        raise DimacsParseError(lineno, str(exc)) from exc
