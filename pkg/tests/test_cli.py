import io
import json
import subprocess
import sys

import jsonschema
import pytest

from hypertile import schemas
from hypertile.cli import run
from hypertile.constructions import h_ab
from hypertile.formats import from_text, to_text


def call(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def check(name, text):
    obj = json.loads(text)
    jsonschema.validate(obj, schemas.load(name))
    return obj


def test_gen_pipes_into_factor():
    gen = subprocess.run([sys.executable, "-m", "hypertile", "gen", "hab:a=6,b=6"], capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "hypertile", "factor"], input=gen.stdout, capture_output=True, text=True)
    assert res.returncode == 0
    assert check("factor_result", res.stdout)["status"] == "FACTOR_FOUND"


def test_no_factor_exit_code(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["factor", "-c", "hl:n=16,l=3"])
    assert code == 3
    assert check("factor_result", out)["status"] == "NO_FACTOR"


def test_budget_exit_code(capsys, monkeypatch):
    code, _, err = call(capsys, monkeypatch, ["factor", "-c", "complete:n=40", "--budget", "1"])
    assert code == 4 and "budget" in err


@pytest.mark.parametrize("argv", [[], ["factor", "--pattern", "k5"], ["gen", "nope:n=3"], ["factor", "--budget", "0"],
                                  ["factor", "-c", "hab:a=4,b=4", "-i", "x"], ["threshold", "--n", "9"]])
def test_usage_errors(capsys, monkeypatch, argv):
    assert call(capsys, monkeypatch, argv)[0] == 2


def test_malformed_stdin(capsys, monkeypatch):
    code, _, err = call(capsys, monkeypatch, ["stats"], stdin="4 1\n0 1 1\n")
    assert code == 2 and err


def test_threshold(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["threshold", "--n", "4"])
    assert code == 0 and out.strip() == "1"
    code, out, _ = call(capsys, monkeypatch, ["threshold", "--n", "4", "--pattern", "k4", "--json"])
    assert check("threshold", out)["threshold"] == 2


def test_input_file_and_json_round_trip(capsys, monkeypatch, tmp_path):
    path = tmp_path / "h.json"
    assert call(capsys, monkeypatch, ["gen", "hab:a=4,b=4", "--json", "--out", str(path)])[0] == 0
    obj = check("hypergraph", path.read_text())
    assert obj["n"] == 8
    code, out, _ = call(capsys, monkeypatch, ["stats", "--json", "-i", str(path), "--labels", "AAAABBBB"])
    stats = check("stats", out)
    assert code == 0 and stats["m"] == 28 and stats["min_codegree"] == 2
    code, out, _ = call(capsys, monkeypatch, ["gen", "hab:a=4,b=4"])
    assert from_text(out) == h_ab(4, 4)


def test_stats_from_stdin(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["stats"], stdin=to_text(h_ab(6, 6)))
    assert code == 0 and check("stats", out)["edge_extension"]["holds"] in (True, False)


def test_stats_rejects_wrong_label_count(capsys, monkeypatch):
    assert call(capsys, monkeypatch, ["stats", "-c", "hab:a=4,b=4", "--labels", "AAB"])[0] == 2


def test_tile_exact_and_local_search(capsys, monkeypatch, tmp_path):
    code, out, _ = call(capsys, monkeypatch, ["tile", "-c", "hab:a=4,b=4"])
    assert code == 0 and len(check("factor_result", out)["tiles"]) == 1
    trace = tmp_path / "trace.json"
    code, out, _ = call(capsys, monkeypatch, ["tile", "--local-search", "-c", "complete:n=21", "--l", "2", "--trace", str(trace)])
    obj = check("local_search", out)
    assert code == 0 and obj["reached"] and obj["copies"] >= 2
    assert check("trace", trace.read_text())["l"] == 2
    assert call(capsys, monkeypatch, ["tile", "--local-search", "--pattern", "k4", "-c", "complete:n=8"])[0] == 2


def test_closeness(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["closeness", "-c", "hab:a=8,b=8", "--gamma", "0.05"])
    obj = check("closeness_report", out)
    assert code == 0 and len(obj["classes"]) == 2
    assert call(capsys, monkeypatch, ["closeness", "-c", "hab:a=8,b=8", "--strict"])[0] == 1
    assert call(capsys, monkeypatch, ["closeness", "-c", "complete:n=8", "--eta", "0.1"])[0] == 2


def test_absorb(capsys, monkeypatch):
    argv = ["absorb", "-c", "complete:n=32", "--demo", "--count", "2", "--probes", "2", "--seed", "1"]
    code, out, _ = call(capsys, monkeypatch, argv)
    fam = check("absorb_report", out)["family"]
    assert code == 0 and fam["members"]
    free = sorted(set(range(32)) - {v for a in fam["members"] for v in a})[:4]
    code, out, _ = call(capsys, monkeypatch, argv + ["--leftover", ",".join(map(str, free))])
    assert code == 0 and len(check("absorb_report", out)["absorbed"]["factor"]) == 4
    code, out, _ = call(capsys, monkeypatch, ["absorb", "-c", "complete:n=48"])
    assert code == 1 and "SampleCountZero" in check("absorb_report", out)["error"]


def test_pipeline_is_reproducible(capsys, monkeypatch):
    argv = ["pipeline", "-c", "complete:n=48", "--demo", "--no-timings", "--seed", "3"]
    code, first, _ = call(capsys, monkeypatch, argv)
    _, second, _ = call(capsys, monkeypatch, argv)
    assert code == 0 and first == second
    assert check("pipeline_report", first)["success"]


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["pipeline", "-c", "rand:n=48,p=0.9", "--demo", "--no-timings"]
    monkeypatch.setenv("HYPERTILE_SEED", "5")
    _, env_out, _ = call(capsys, monkeypatch, argv)
    _, flag_out, _ = call(capsys, monkeypatch, argv + ["--seed", "5"])
    assert json.loads(env_out)["seed"] == 5
    assert env_out == flag_out


def test_selftest_subset(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["selftest", "--only", "1,C1", "--json"])
    obj = check("selftest", out)
    assert code == 0 and obj["total"] == 2 and obj["passed"] == 2


def test_threads_flag(capsys, monkeypatch):
    assert call(capsys, monkeypatch, ["stats", "-c", "complete:n=8", "--threads", "1"])[0] == 0
