import json
import subprocess
import sys

import pytest

from satcube import dimacs
from satcube.cli import main
from satcube.formula import GenConfig, random_formula

from conftest import ALL8, FACE, SHATTER, formula


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cnf(tmp_path):
    def write(f, name="f.cnf"):
        p = tmp_path / name
        dimacs.save(f, p)
        return str(p)
    return write


def test_gen_unique_universe(capsys):
    code, out, _ = run(capsys, "gen", "--vars", "3", "--clauses", "8", "--mode", "unique", "--seed", "7")
    assert code == 0
    f = dimacs.loads(out)
    assert f.n_clauses == 8 and len(set(f.clauses)) == 8
    assert "p cnf 3 8" in out
    assert out.startswith("c satcube 0.1.0\nc satcube gen --vars 3")


def test_gen_alpha_rounding(capsys):
    code, out, _ = run(capsys, "gen", "--vars", "12", "--alpha", "4.267", "--seed", "1")
    assert code == 0 and dimacs.loads(out).n_clauses == 51


def test_gen_round_trip_matches_library(tmp_path, capsys):
    out = tmp_path / "g.cnf"
    assert main(["gen", "--vars", "10", "--clauses", "40", "--seed", "5", "--out", str(out)]) == 0
    assert dimacs.load(out) == random_formula(GenConfig(10, 40, "replacement", 5))


@pytest.mark.parametrize("argv", [
    ["gen", "--vars", "2", "--clauses", "1"],
    ["gen", "--vars", "5"],
    ["gen", "--vars", "5", "--clauses", "3", "--alpha", "1"],
    ["gen", "--vars", "3", "--clauses", "9", "--mode", "unique"],
    ["gen", "--vars", "5", "--clauses", "3", "--mode", "bogus"],
    ["nosuchcommand"],
])
def test_flag_errors_exit_2(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_topology_reports(capsys, cnf):
    code, out, _ = run(capsys, "topology", "--in", cnf(formula(3, *SHATTER)))
    rep = json.loads(out)
    assert code == 0 and rep["n_clusters"] == 2 and rep["cluster_sizes"] == [4, 1]
    assert rep["provenance"]["version"] == "0.1.0"
    _, out, _ = run(capsys, "topology", "--in", cnf(formula(3, *FACE)))
    assert json.loads(out)["global_frozen"] == [1]
    _, out, _ = run(capsys, "topology", "--in", cnf(formula(3)))
    rep = json.loads(out)
    assert rep["n_clusters"] == 1 and rep["n_solutions"] == 8


def test_topology_replay_lines(capsys, cnf):
    path = cnf(formula(3, *SHATTER))
    for argv in (["topology", "--in", path, "--replay"], ["replay", "--in", path]):
        code, out, _ = run(capsys, *argv)
        rows = [json.loads(l) for l in out.splitlines()]
        assert code == 0
        assert [(r["m"], r["n_solutions"], r["n_clusters"], r["n_global_frozen"]) for r in rows] == [
            (1, 7, 1, 0), (2, 6, 1, 0), (3, 5, 2, 0)]


def test_cap_exceeded_exit_3(capsys, cnf):
    f = random_formula(GenConfig(23, 5, seed=1))
    assert main(["topology", "--in", cnf(f)]) == 3
    assert main(["verify", "--in", cnf(random_formula(GenConfig(12, 5, seed=1))), "--cap", "10", "--expect", "sat"]) == 3


def test_parse_error_exit_4(capsys, tmp_path):
    p = tmp_path / "bad.cnf"
    p.write_text("p cnf 3 1\n1 1 2 0\n")
    assert main(["topology", "--in", str(p)]) == 4
    assert "line 2" in capsys.readouterr().err


def test_solve_exit_codes(capsys, cnf):
    code, out, _ = run(capsys, "solve", "--in", cnf(formula(3, *FACE)))
    res = json.loads(out)
    assert code == 10 and res["status"] == "SAT" and res["model"] == [1, -2, -3]
    assert res["stats"]["branches_to_first_solution"] == 5
    code, out, _ = run(capsys, "solve", "--in", cnf(formula(3, *ALL8)))
    assert code == 20 and json.loads(out)["stats"]["conflict_depth_hist"] == {"3": 8}
    code, out, _ = run(capsys, "solve", "--in", cnf(formula(3, *ALL8)), "--budget", "3")
    assert code == 0 and json.loads(out)["status"] == "BudgetExhausted"


def test_extremal_then_verify(capsys, tmp_path):
    maxsat = tmp_path / "m.cnf"
    side = tmp_path / "m.json"
    assert main(["extremal", "make-maxsat", "--vars", "4", "--target", "0", "--out", str(maxsat),
                 "--sidecar", str(side)]) == 0
    assert json.loads(side.read_text())["excluded_clauses"] == [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
    assert main(["verify", "--in", str(maxsat), "--expect", "unique:0"]) == 0
    assert main(["verify", "--in", str(maxsat), "--expect", "unique:1"]) == 5

    core = tmp_path / "c.cnf"
    assert main(["extremal", "make-core", "--vars", "10", "--triple", "2,5,9", "--out", str(core)]) == 0
    assert main(["verify", "--in", str(core), "--expect", "unsat"]) == 0
    assert main(["verify", "--in", str(core), "--expect", "sat"]) == 5

    plus = tmp_path / "p.cnf"
    assert main(["extremal", "make-maxsat", "--vars", "4", "--target", "0", "--extend", "--out", str(plus)]) == 0
    assert main(["verify", "--in", str(plus), "--expect", "unsat"]) == 0


def test_verify_sat_on_core_fails(capsys, cnf):
    assert main(["verify", "--in", cnf(formula(3, *ALL8)), "--expect", "sat"]) == 5


def test_extremal_bad_triple_exit_2(capsys):
    assert main(["extremal", "make-core", "--vars", "4", "--triple", "1,2,5"]) == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--vars", "10")
    b = json.loads(out)
    assert code == 0 and (b["m_max"], b["m_maxsat"], b["n_min_cores"]) == ("960", "840", "120")


def test_enumerate_and_dump(capsys, cnf, tmp_path):
    dump = tmp_path / "s.bin"
    code, out, _ = run(capsys, "enumerate", "--in", cnf(formula(3, *SHATTER)), "--list", "--dump", str(dump))
    rep = json.loads(out)
    assert code == 0 and rep["n_solutions"] == 5 and rep["solutions"] == [0, 3, 5, 6, 7]
    assert dump.read_bytes() == (3).to_bytes(8, "little") + bytes([0b11101001])


def test_sweep_minimal_config(capsys, tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"N": 12, "alphas": [0], "K": 10}))
    out = tmp_path / "r.csv"
    code, _, err = run(capsys, "sweep", "--config", str(cfg), "--out", str(out))
    assert code == 0 and "[sweep]" in err
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert row["p_sat"] == "1.0" and row["mean_solutions"] == "4096.0"
    side = json.loads((tmp_path / "r.csv.json").read_text())
    assert side["reference_constants"]["alpha_s"] == 4.267
    assert side["provenance"]["invocation"].startswith("satcube sweep")


def test_sweep_range_config(capsys, tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"N": 8, "alphas": {"start": 1, "stop": 3, "step": 0.5}, "K": 3, "seed": 4}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and len(out.splitlines()) == 6


@pytest.mark.parametrize("text", ["{not json", "[1,2]", '{"N": 12}', '{"N": 12, "alphas": [0], "K": 0}',
                                  '{"N": 12, "alphas": [0], "K": 5, "bogus": 1}'])
def test_sweep_config_errors_exit_2(capsys, tmp_path, text):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(text)
    assert main(["sweep", "--config", str(cfg)]) == 2


def test_console_script_stdin():
    text = dimacs.dumps(formula(3, *ALL8))
    proc = subprocess.run([sys.executable, "-m", "satcube.cli", "solve"], input=text, capture_output=True, text=True)
    assert proc.returncode == 20 and json.loads(proc.stdout)["status"] == "UNSAT"
