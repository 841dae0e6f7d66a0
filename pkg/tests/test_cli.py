import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gaplab import cli
from gaplab.bigarith import LogReal
from gaplab.errors import VerificationError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_thm1(capsys):
    code, out, _ = run(capsys, "verify-thm1")
    assert code == 0
    doc = json.loads(out)
    assert doc["solutions"] == [[3, 4]]
    assert doc["bennett_u_max"] == 35 and doc["min_u"] == 8
    assert doc["min_value_approx"] > 5


def test_search_contains_theorem1_instance(capsys):
    code, out, _ = run(capsys, "search", "--family", "cubic", "--l", "1", "--a", "2..10",
                       "--b-max", "50", "--workers", "1")
    assert code == 0
    rows = json.loads(out)
    assert {"a": 3, "b": 4, "t": 2} in [{k: r[k] for k in "abt"} for r in rows]


def test_pell(capsys):
    code, out, _ = run(capsys, "pell", "--count", "2")
    assert code == 0 and json.loads(out) == [[2, 3], [14, 20]]


@pytest.mark.parametrize("argv", [
    ["reduce", "--family", "cubic", "--a", "1", "--b", "3", "--l", "1"],
    ["reduce", "--family", "quartic", "--a", "2", "--b", "3", "--l", "-1"],
    ["enumerate", "--t", "4", "--limit", "100"],
    ["field-bounds", "--degree", "3", "--m", "10", "--mode", "exact"],
    ["field-bounds", "--degree", "4", "--m", "12"],
    ["measure", "--degree", "3", "--m", "2"],
    ["cutoffs", "--t", "2", "--a", "1000000"],
    ["cutoffs", "--family", "quartic", "--t", "5", "--l", "-1"],
    ["abc", "--triple", "1", "8", "9"],
    ["abc", "--l", "1", "--a", "1..5", "--b-max", "20"],
    ["gap-report", "--family", "quartic", "--l", "1", "--a", "1..20", "--b-max", "200"],
])
def test_every_subcommand_runs_and_round_trips(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert cli.dumps(json.loads(out)) == out


def test_reduce_values(capsys):
    _, out, _ = run(capsys, "reduce", "--family", "cubic", "--a", "1", "--b", "3", "--l", "1")
    doc = json.loads(out)
    assert (doc["D"], doc["u"], doc["v"], doc["s"]) == (2, 1, 2, 2)


def test_field_bounds_quartic_json(capsys):
    _, out, _ = run(capsys, "field-bounds", "--degree", "4", "--m", "12")
    assert json.loads(out)["exact_disc"] == -1728


def test_measure_logreal_encoding(capsys):
    _, out, _ = run(capsys, "measure", "--degree", "3", "--m", "2")
    doc = json.loads(out)
    assert doc["c_log"]["sign"] == -1
    assert set(doc["c_log"]) == {"sign", "log10_magnitude"}


def test_abc_census_triple(capsys):
    _, out, _ = run(capsys, "abc", "--l", "1", "--a", "1..5", "--b-max", "20")
    rows = json.loads(out)
    assert [29, 7, 36] in [r["triple"] for r in rows]


# --- serialization ----------------------------------------------------------

def test_big_integers_become_strings():
    # only magnitudes strictly above 2^53 are quoted
    doc = json.loads(cli.dumps({"edge": 2 ** 53, "big": 2 ** 53 + 1, "neg": -(2 ** 60)}))
    assert doc == {"edge": 2 ** 53, "big": str(2 ** 53 + 1), "neg": str(-(2 ** 60))}


def test_pell_big_values_round_trip(capsys):
    _, out, _ = run(capsys, "pell", "--count", "40")
    pairs = json.loads(out)
    assert isinstance(pairs[-1][0], str)
    a, b = (int(z) for z in pairs[-1])
    assert b * (b + 1) == 2 * a * (a + 1)
    assert cli.dumps(pairs) == out


def test_jsonable_forms():
    assert cli.to_jsonable(Fraction(3, 4)) == "3/4"
    assert cli.to_jsonable(LogReal(1, 0.0)) == {"sign": 1, "log10_magnitude": 0.0}
    assert cli.to_jsonable((1, 2)) == [1, 2]


def test_csv_output(capsys):
    code, out, _ = run(capsys, "pell", "--count", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["a", "b"] and rows[1] == ["2", "3"] and len(rows) == 4


def test_csv_search(capsys):
    code, out, _ = run(capsys, "--format", "csv", "search", "--family", "cubic", "--l", "1",
                       "--a", "2..10", "--b-max", "50")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {"a": "3", "b": "4", "t": "2"}.items() <= next(r for r in rows if r["a"] == "3").items()


# --- exit codes -------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["pell"],
    ["pell", "--count", "2", "--bogus"],
    ["search", "--family", "cubic", "--l", "1", "--a", "5..2", "--b-max", "50"],
    ["search", "--family", "cubic", "--l", "1", "--a", "x", "--b-max", "50"],
    ["search", "--family", "cubic", "--l", "1", "--a", "2..60", "--b-max", "50"],
    ["reduce", "--family", "cubic", "--a", "3", "--b", "5", "--l", "1"],
    ["field-bounds", "--degree", "3", "--m", "27"],
    ["abc", "--triple", "2", "4", "6"],
    ["pell", "--count", "0"],
])
def test_invalid_arguments_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_unknown_flag_prints_usage(capsys):
    _, _, err = run(capsys, "pell", "--count", "2", "--bogus")
    assert "usage:" in err


def test_verification_failure_exit_3(capsys, monkeypatch):
    def broken():
        raise VerificationError("u^2 |u cbrt2 - v| <= 5 at u=8")
    monkeypatch.setattr(cli, "verify_theorem1", broken)
    code, out, err = run(capsys, "verify-thm1")
    assert code == 3 and out == "" and "verification failed" in err


def test_budget_exit_4(capsys):
    code, _, err = run(capsys, "search", "--family", "cubic", "--l", "1", "--a", "1..1000000",
                       "--b-max", "1000001")
    assert code == 4 and "budget" in err


# --- manifests and workers --------------------------------------------------

def test_manifest_digest_stable(tmp_path, capsys):
    path = tmp_path / "runs.jsonl"
    argv = ["--manifest", str(path), "search", "--family", "quartic", "--l", "1",
            "--a", "1..30", "--b-max", "300"]
    outs = [run(capsys, *argv)[1] for _ in range(2)]
    outs.append(run(capsys, *(argv[2:] + ["--manifest", str(path), "--workers", "3"]))[1])
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    assert len(lines) == 3
    assert len({ln["digest"] for ln in lines}) == 1
    assert len(set(outs)) == 1
    first = lines[0]
    assert first["subcommand"] == "search"
    assert first["params"]["l"] == 1 and first["params"]["a"] == [1, 30]
    assert set(first) == {"subcommand", "params", "version", "wall_time", "digest"}


def test_gaplab_workers_env(monkeypatch, capsys):
    seen = {}
    real = cli.search_divisible

    def spy(cfg):
        seen["workers"] = cfg.worker_count
        return real(cfg)
    monkeypatch.setattr(cli, "search_divisible", spy)
    monkeypatch.setenv("GAPLAB_WORKERS", "3")
    run(capsys, "search", "--family", "cubic", "--l", "2", "--a", "1..10", "--b-max", "40")
    assert seen["workers"] == 3
    run(capsys, "search", "--family", "cubic", "--l", "2", "--a", "1..10", "--b-max", "40",
        "--workers", "2")
    assert seen["workers"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gaplab", "pell", "--count", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == [[2, 3]]
