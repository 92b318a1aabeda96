import csv
import io
import json
import subprocess
import sys

import pytest

from qsum.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dist_point_mass(capsys):
    code, out, _ = run(capsys, "dist", "--n", "3", "--k", "3", "--r", "1", "--values", "1,2,0")
    assert code == 0
    d = json.loads(out)
    assert d["true_sum"] == 0
    assert d["distribution"][0] == pytest.approx(1, abs=1e-12)


def test_dist_csv(capsys):
    code, out, _ = run(capsys, "dist", "--n", "2", "--k", "3", "--r", "1", "--values", "1,1", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["y", "prob"]
    assert float(rows[3][1]) == pytest.approx(2 / 3, abs=1e-11)


def test_sweep_twelve_trits(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "12", "--k", "3")
    assert code == 0
    assert "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 13
    assert list(rows[0]) == ["q", "theorem5", "vandam_pq", "vandam_bound"]
    first_one = next(int(r["q"]) for r in rows if float(r["theorem5"]) == 1.0)
    assert first_one == 8


def test_sweep_json_has_exact_fractions(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "3", "--k", "3", "--output", "json")
    rows = json.loads(out)["rows"]
    assert rows[1]["vandam_pq"] == "7/27"
    assert rows[1]["vandam_bound"] == "41/81"


def test_run_degenerate_guess(capsys):
    code, out, _ = run(capsys, "run", "--n", "4", "--k", "3", "--r", "4", "--values", "0,0,0,0", "--seed", "7")
    d = json.loads(out)
    assert code == 0
    assert d["queries_used"] == 0
    assert d["success_prob"] == pytest.approx(1 / 3, abs=1e-12)
    assert d["theorem5"] == "1/3"
    assert "sampled_prediction" in d


def test_run_random_table_is_echoed_and_seeded(capsys):
    _, a, _ = run(capsys, "run", "--n", "5", "--k", "4", "--r", "2", "--seed", "3")
    _, b, _ = run(capsys, "run", "--n", "5", "--k", "4", "--r", "2", "--seed", "3")
    assert a == b
    d = json.loads(a)
    assert len(d["values"]) == 5 and d["values_source"] == "random"


def test_values_file_and_inline_precedence(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 3, "k": 3, "values": [1, 1, 1]}))
    _, out, _ = run(capsys, "dist", "--r", "1", "--values-file", str(p))
    assert json.loads(out)["values"] == [1, 1, 1]
    _, out, _ = run(capsys, "dist", "--r", "1", "--values-file", str(p), "--values", "2,2,0")
    assert json.loads(out)["values"] == [2, 2, 0]


def test_lemma3_csv(capsys):
    code, out, _ = run(capsys, "lemma3", "--k", "3", "--s", "2", "--A", "0")
    assert out == "y,prob\n0,0.666666666667\n1,0.166666666667\n2,0.166666666667\n"


def test_trace_json(capsys):
    code, out, _ = run(capsys, "trace", "--which", "prop2", "--values", "1,2,0")
    d = json.loads(out)
    assert code == 0 and len(d["steps"]) == 7
    final = d["steps"][-1]["amplitudes"]
    assert abs(complex(*final[0])) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--n", "3", "--k", "3"],
        ["run", "--n", "3", "--k", "3", "--r", "9"],
        ["dist", "--n", "3", "--k", "3", "--r", "1", "--values", "1,2"],
        ["dist", "--n", "2", "--k", "3", "--r", "1", "--values", "1,x"],
        ["dist", "--n", "2", "--k", "3", "--r", "1", "--values", "1,5"],
        ["trace", "--which", "prop1", "--values", "1,2,0"],
        ["lemma3", "--k", "3", "--s", "5"],
        ["sweep", "--n", "3"],
        ["bogus"],
        [],
    ],
)
def test_malformed_arguments_exit_two(capsys, argv):
    assert main(argv) == 2


def test_out_path(tmp_path, capsys):
    target = tmp_path / "curve.csv"
    assert main(["sweep", "--n", "4", "--k", "2", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().startswith("q,theorem5")


def test_verify_exit_code_and_module_entry(tmp_path):
    out = tmp_path / "report.json"
    proc = subprocess.run(
        [sys.executable, "-m", "qsum", "verify", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["summary"]["passed"] is True


def test_verify_failure_exit_one(monkeypatch, capsys):
    import qsum.cli as cli
    from qsum.verify import VerificationReport

    def failing(spec):
        rep = VerificationReport()
        rep.add("forced", {}, 1, 0, False)
        return rep

    monkeypatch.setattr(cli, "check_suite", failing)
    assert main(["verify"]) == 1
