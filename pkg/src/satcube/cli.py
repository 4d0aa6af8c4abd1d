"""satcube command-line interface.

Exit codes: 0 ok, 2 usage/config error, 3 enumeration cap exceeded, 4 DIMACS
parse error, 5 verify mismatch; ``solve`` exits 10 (SAT), 20 (UNSAT) or 0
(node budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, dimacs, extremal
from .errors import CapExceeded, CapacityExceeded, DimacsParseError, InvalidN, InvalidTriple
from .experiments import SweepConfig, alpha_grid, rows_to_csv, run_sweep, sidecar
from .formula import SAMPLING_MODES, GenConfig, m_for_alpha, random_formula
from .hypercube import DEFAULT_CAP, MAX_CAP, count, dump, enumerate_solutions, is_empty
from .solver import SolverConfig, Status, model_literals, solve
from .topology import replay_topology, topology_report

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_PARSE, EXIT_MISMATCH = 0, 2, 3, 4, 5
EXIT_SAT, EXIT_UNSAT = 10, 20


class UsageError(Exception):
    pass


def _provenance(argv) -> dict:
    return {"tool": "satcube", "version": __version__, "invocation": "satcube " + shlex.join(argv)}


def _read_formula(path: str):
    if path == "-":
        return dimacs.read(sys.stdin)
    return dimacs.load(path)


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, path: str | None = None) -> None:
    _emit(json.dumps(obj) + "\n", path)


def _check_cap(cap: int) -> int:
    if not 3 <= cap <= MAX_CAP:
        raise UsageError(f"--cap must be in [3, {MAX_CAP}]")
    return cap


def cmd_gen(args, argv) -> int:
    if (args.clauses is None) == (args.alpha is None):
        raise UsageError("give exactly one of --clauses / --alpha")
    if args.vars < 3:
        raise UsageError("--vars must be >= 3 for strict 3-SAT")
    m = args.clauses if args.clauses is not None else m_for_alpha(Fraction(args.alpha), args.vars)
    if m < 0:
        raise UsageError("clause count must be >= 0")
    try:
        f = random_formula(GenConfig(args.vars, m, args.mode, args.seed))
    except CapacityExceeded as exc:
        raise UsageError(str(exc)) from exc
    prov = _provenance(argv)
    comments = [f"{prov['tool']} {prov['version']}", prov["invocation"], f"mode={args.mode} seed={args.seed}"]
    _emit(dimacs.dumps(f, comments), args.out)
    return EXIT_OK


def cmd_enumerate(args, argv) -> int:
    f = _read_formula(args.input)
    s = enumerate_solutions(f, _check_cap(args.cap))
    out = {
        "n_vars": f.n_vars,
        "n_clauses": f.n_clauses,
        "n_solutions": count(s),
        "is_empty": is_empty(s),
        "provenance": _provenance(argv),
    }
    if args.list:
        out["solutions"] = s.indices().tolist()
    if args.dump:
        with open(args.dump, "wb") as fh:
            dump(s, fh)
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_topology(args, argv) -> int:
    f = _read_formula(args.input)
    cap = _check_cap(args.cap)
    prov = _provenance(argv)
    if args.replay:
        lines = []
        for row in replay_topology(f, cap):
            d = row._asdict()
            d["provenance"] = prov
            lines.append(json.dumps(d))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        report = topology_report(f, cap=cap)
        report["provenance"] = prov
        _emit_json(report, args.out)
    return EXIT_OK


def cmd_solve(args, argv) -> int:
    f = _read_formula(args.input)
    cfg = SolverConfig(args.var_order, args.value_order, args.seed, args.budget)
    res = solve(f, cfg)
    out = {
        "status": res.status.value,
        "model": model_literals(res.model, f.n_vars) if res.model is not None else None,
        "stats": res.stats.to_json(),
        "provenance": _provenance(argv),
    }
    _emit_json(out, args.out)
    return {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT}.get(res.status, EXIT_OK)


def _parse_triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad --triple {text!r}") from None
    if len(parts) != 3:
        raise UsageError("--triple takes i,j,k")
    return parts  # type: ignore[return-value]


def cmd_extremal(args, argv) -> int:
    try:
        if args.kind == "make-core":
            f = extremal.make_unsat_core(args.vars, _parse_triple(args.triple))
        else:
            if not 0 <= args.target < (1 << max(args.vars, 0)):
                raise UsageError(f"--target must be in [0, 2^{args.vars})")
            f = extremal.make_max_sat(args.vars, args.target)
            if args.extend:
                f = extremal.extend_to_unsat(f, args.target)
    except (InvalidTriple, InvalidN) as exc:
        raise UsageError(str(exc)) from exc
    prov = _provenance(argv)
    meta = extremal.sidecar(f)
    meta["provenance"] = prov
    _emit(dimacs.dumps(f, [f"{prov['tool']} {prov['version']}", prov["invocation"]]), args.out)
    if args.sidecar:
        Path(args.sidecar).write_text(json.dumps(meta) + "\n")
    return EXIT_OK


def cmd_bounds(args, argv) -> int:
    try:
        b = extremal.bounds_summary(args.vars)
    except InvalidN as exc:
        raise UsageError(str(exc)) from exc
    out = b.to_json()
    out["provenance"] = _provenance(argv)
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    f = _read_formula(args.input)
    s = enumerate_solutions(f, _check_cap(args.cap))
    expect = args.expect
    n_sol = count(s)
    if expect == "sat":
        ok = n_sol > 0
    elif expect == "unsat":
        ok = n_sol == 0
    elif expect.startswith("unique:"):
        try:
            target = int(expect.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad --expect {expect!r}") from None
        ok = n_sol == 1 and target in s
    else:
        raise UsageError(f"--expect must be sat, unsat or unique:T, got {expect!r}")
    out = {"expect": expect, "n_solutions": n_sol, "match": ok, "provenance": _provenance(argv)}
    _emit_json(out, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


_CONFIG_KEYS = {
    "N": "n_vars", "n_vars": "n_vars",
    "alphas": "alphas", "alpha_grid": "alphas",
    "K": "samples", "samples_per_point": "samples",
    "mode": "mode", "gen_mode": "mode",
    "seed": "seed", "master_seed": "seed",
    "topology_cap": "topology_cap",
    "var_order": "var_order", "value_order": "value_order", "node_budget": "node_budget",
}


def load_sweep_config(text: str) -> SweepConfig:
    """Build a SweepConfig from JSON such as {"N": 12, "alphas": [0], "K": 10}.

    ``alphas`` is either a list or {"start", "stop", "step"} (inclusive).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed sweep config: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("sweep config must be a JSON object")
    cfg = {}
    for k, v in raw.items():
        if k not in _CONFIG_KEYS:
            raise UsageError(f"unknown sweep config key {k!r}")
        cfg[_CONFIG_KEYS[k]] = v
    for req in ("n_vars", "alphas", "samples"):
        if req not in cfg:
            raise UsageError(f"sweep config missing {req}")
    alphas = cfg["alphas"]
    try:
        if isinstance(alphas, dict):
            grid = alpha_grid(alphas["start"], alphas["stop"], alphas["step"])
        elif isinstance(alphas, list):
            grid = tuple(Fraction(str(a)) for a in alphas)
        else:
            raise UsageError("alphas must be a list or {start, stop, step}")
        solver_cfg = SolverConfig(
            cfg.get("var_order", "static-ascending"),
            cfg.get("value_order", "zero-first"),
            0,
            cfg.get("node_budget"),
        )
        return SweepConfig(
            n_vars=int(cfg["n_vars"]),
            alpha_grid=grid,
            samples_per_point=int(cfg["samples"]),
            gen_mode=cfg.get("mode", "replacement"),
            solver_cfg=solver_cfg,
            topology_cap=int(cfg.get("topology_cap", 16)),
            master_seed=int(cfg.get("seed", 0)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid sweep config: {exc}") from exc


def cmd_sweep(args, argv) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    cfg = load_sweep_config(text)
    if cfg.runs_topology and cfg.topology_cap > DEFAULT_CAP:
        raise CapExceeded(f"topology_cap {cfg.topology_cap} exceeds the enumeration cap {DEFAULT_CAP}")

    def progress(p, row):
        print(f"[sweep] alpha={float(row.alpha):g} m={row.m} p_sat={row.p_sat} "
              f"median_nodes={row.median_nodes_all} ({p + 1}/{len(cfg.alpha_grid)})", file=sys.stderr)

    rows = run_sweep(cfg, workers=args.workers, progress=progress)
    _emit(rows_to_csv(rows), args.out)
    meta = sidecar(cfg, rows)
    meta["provenance"] = _provenance(argv)
    side = args.sidecar or (f"{args.out}.json" if args.out and args.out != "-" else None)
    if side:
        Path(side).write_text(json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="satcube", description="Hypercube geometry of random strict 3-SAT.")
    p.add_argument("--version", action="version", version=f"satcube {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_in(sp):
        sp.add_argument("--in", dest="input", default="-", help="DIMACS file (default: stdin)")

    def add_out(sp):
        sp.add_argument("--out", default=None, help="output file (default: stdout)")

    def add_cap(sp):
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"enumeration cap on N (max {MAX_CAP})")

    sp = sub.add_parser("gen", help="random strict 3-CNF in DIMACS")
    sp.add_argument("--vars", type=int, required=True)
    sp.add_argument("--clauses", type=int)
    sp.add_argument("--alpha", type=str, help="density; M = round(alpha*N), halves up")
    sp.add_argument("--mode", choices=SAMPLING_MODES, default="replacement")
    sp.add_argument("--seed", type=int, default=0)
    add_out(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("enumerate", help="count solutions by hypercube filtering")
    add_in(sp), add_out(sp), add_cap(sp)
    sp.add_argument("--list", action="store_true", help="include solution indices")
    sp.add_argument("--dump", help="write the binary solution-set dump here")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("topology", help="clusters and frozen variables as JSON")
    add_in(sp), add_out(sp), add_cap(sp)
    sp.add_argument("--replay", action="store_true", help="one JSON line per clause prefix")
    sp.set_defaults(func=cmd_topology)

    sp = sub.add_parser("replay", help="same as topology --replay")
    add_in(sp), add_out(sp), add_cap(sp)
    sp.set_defaults(func=cmd_topology, replay=True)

    sp = sub.add_parser("solve", help="instrumented DFS")
    add_in(sp), add_out(sp)
    sp.add_argument("--var-order", choices=("static-ascending", "seeded-random"), default="static-ascending")
    sp.add_argument("--value-order", choices=("zero-first", "one-first", "seeded-random"), default="zero-first")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=None, help="node budget")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("extremal", help="extremal constructions")
    ext = sp.add_subparsers(dest="kind", required=True)
    core = ext.add_parser("make-core", help="8-clause UNSAT core on one triple")
    core.add_argument("--vars", type=int, required=True)
    core.add_argument("--triple", required=True, help="i,j,k with i<j<k")
    maxsat = ext.add_parser("make-maxsat", help="7*C(N,3)-clause instance with a unique solution")
    maxsat.add_argument("--vars", type=int, required=True)
    maxsat.add_argument("--target", type=int, required=True, help="assignment index, variable 1 = LSB")
    maxsat.add_argument("--extend", action="store_true", help="append one excluded clause (UNSAT)")
    for e in (core, maxsat):
        add_out(e)
        e.add_argument("--sidecar", help="write the JSON sidecar here")
        e.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("bounds", help="exact structural bounds for N")
    sp.add_argument("--vars", type=int, required=True)
    add_out(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sweep", help="Monte Carlo density sweep")
    sp.add_argument("--config", required=True)
    add_out(sp)
    sp.add_argument("--sidecar", help="JSON sidecar path (default: <out>.json)")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check an expectation by enumeration")
    add_in(sp), add_out(sp), add_cap(sp)
    sp.add_argument("--expect", required=True, help="sat | unsat | unique:T")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on flag errors
    try:
        return args.func(args, argv)
    except UsageError as exc:
        print(f"satcube: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"satcube: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DimacsParseError as exc:
        print(f"satcube: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"satcube: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
