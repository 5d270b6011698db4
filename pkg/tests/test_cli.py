import csv
import io
import json

import mpmath
import pytest

from mzvcomplex import cli


def run(capsys, *args):
    code = cli.main(list(args))
    return code, capsys.readouterr()


def test_dim_csv(capsys):
    code, out = run(capsys, "dim", "--w", "2..20", "--m", "2", "--format", "csv", "--workers", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert [int(r["dim"]) for r in rows] == [0 if w % 2 else (w - 2) // 6 for w in range(2, 21)]
    assert all(r["match"] == "1" for r in rows)


def test_dim_is_deterministic_across_workers(capsys):
    a = run(capsys, "dim", "--w", "1..9", "--m", "1..3", "--N", "1,2", "--format", "json",
            "--workers", "1")[1].out
    b = run(capsys, "dim", "--w", "1..9", "--m", "1..3", "--N", "1,2", "--format", "json",
            "--workers", "3")[1].out
    assert a == b
    assert json.loads(a)["schema"] == cli.SCHEMA


def test_empty_cobracket_is_header_only(capsys):
    code, out = run(capsys, "cobracket", "--w", "2", "--m", "2", "--format", "csv")
    assert code == 0
    assert out.out == "N,w,m,basis,term,coefficient\n"


def test_cobracket_weight_eight(capsys):
    code, out = run(capsys, "cobracket", "--w", "8", "--m", "2", "--format", "csv")
    (row,) = csv.DictReader(io.StringIO(out.out))
    assert row["coefficient"] == "-2" and row["term"] == "e3_1[0] ^ e5_1[0]"


def test_tables_write_files(capsys, tmp_path):
    code, _ = run(capsys, "tables", "--w", "2..12", "--m", "2", "--out-dir", str(tmp_path),
                  "--format", "csv", "--workers", "1")
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == {
        "dimensions.csv", "dimensions.json", "cohomology.csv", "cohomology.json"}
    rows = list(csv.DictReader(open(tmp_path / "cohomology.csv")))
    w12 = next(r for r in rows if r["w"] == "12")
    assert w12["euler"] == w12["euler_oracle"] == "-2"


def test_verify_suite_passes(capsys):
    code, out = run(capsys, "verify", "--suite", "euler", "--w-max", "16", "--workers", "1")
    assert code == 0
    assert out.out.count("PASS") == 8 and "FAIL" not in out.out


def test_eval_geometric(capsys, tmp_path):
    target = tmp_path / "v.json"
    code, out = run(capsys, "eval", "--word", "Li(2; 1/2)", "--format", "json",
                    "--out", str(target))
    assert code == 0
    rec = json.loads(target.read_text())["records"][0]
    exact = mpmath.mpf("0.58224052646501250590265632015968")  # pi^2/12 - log(2)^2/2
    assert abs(mpmath.mpf(rec["re"]) - exact) <= mpmath.mpf(rec["tail"]) < 1e-20


def test_eval_failure_exit_code(capsys):
    code, out = run(capsys, "eval", "--word", "zeta(3)", "--tol", "1e-25")
    assert code == 1 and "FAIL" in out.out


@pytest.mark.parametrize("args", [
    ["eval", "--word", "Li(1; 1)"],
    ["eval", "--word", "Li(2; 1/2, 1/3)"],
    ["eval", "--word", "zeta(1,2)"],
    ["eval", "--word", "Li(2; 3/2)"],
    ["eval", "--word", "foo(2)"],
    ["dim", "--w", "5..1", "--m", "2"],
    ["dim", "--w", "5", "--m", "2", "--workers", "0"],
    ["verify", "--bound", "0"],
    ["nonsense"],
])
def test_usage_errors(capsys, args):
    assert cli.main(args) == 2


def test_parse_word_roots():
    w = cli.parse_word("Li(1,2; w{1/4}, -1/2)")
    assert w.exps == (1, 2)
    assert abs(w.args[0] - 1j) < 1e-30
    z = cli.parse_word("zeta(2,1)")
    assert z.exps == (1, 2) and z.args == (1, 1)
