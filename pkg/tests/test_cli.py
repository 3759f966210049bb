import json
import subprocess
import sys
from decimal import Decimal, localcontext

import pytest

from kwise import cli
from kwise.recursion import RecursionReport


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_density_json_document(capsys):
    code, out, err = run_cli(
        capsys, "density", "--s", "2", "--k", "2", "--prime-limit", "100000"
    )
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["command"] == "density"
    assert doc["inputs"]["s"] == 2
    assert doc["inputs"]["prime_limit"] == 100000
    lower = Decimal(doc["result"]["lower"])
    upper = Decimal(doc["result"]["upper"])
    point = Decimal(doc["result"]["point"])
    assert lower <= Decimal("0.6079271019") <= upper
    assert lower <= point <= upper
    with localcontext() as ctx:
        ctx.prec = 200
        assert Decimal(doc["result"]["width"]) == upper - lower


def test_density_constraint_factors_as_rationals(capsys):
    code, out, _ = run_cli(capsys, "density", "--s", "2", "--u", "5,6")
    assert code == 0
    doc = json.loads(out)
    factors = doc["result"]["constraint_factors"]
    assert [f["i"] for f in factors] == [1, 2]
    assert [f["u"] for f in factors] == [5, 6]
    for f in factors:
        value = f["factor"]
        assert isinstance(value["numerator"], str)
        assert isinstance(value["denominator"], str)
        assert int(value["denominator"]) > 0
    # i = 1 at u = 5, k = 3: only tuples avoiding 5 entirely
    assert factors[0]["factor"] == {"numerator": "16", "denominator": "25"}


def test_count_matches_library(capsys):
    code, out, _ = run_cli(capsys, "count", "--s", "2", "--k", "2", "--n", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["count"] == 11
    assert doc["inputs"]["strategy"] == "signature"
    code, out, _ = run_cli(
        capsys, "count", "--s", "2", "--k", "2", "--n", "4", "--strategy", "naive"
    )
    assert json.loads(out)["result"]["count"] == 11


def test_cli_is_byte_deterministic(capsys):
    args = ("density", "--s", "3", "--k", "2", "--prime-limit", "5000")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
    args = ("mc", "--s", "2", "--k", "2", "--range", "1000", "--samples", "5000", "--seed", "9")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_csv_and_json_agree(capsys):
    base = ("density", "--s", "2", "--k", "2", "--prime-limit", "2000")
    _, out_json, _ = run_cli(capsys, *base)
    _, out_csv, _ = run_cli(capsys, *base, "--format", "csv")
    doc = json.loads(out_json)["result"]
    header, row = [line.split(",") for line in out_csv.strip().splitlines()]
    got = dict(zip(header, row))
    assert got["lower"] == doc["lower"]
    assert got["upper"] == doc["upper"]
    assert got["point"] == doc["point"]
    assert int(got["prime_limit"]) == doc["prime_limit"]

    base = ("converge", "--s", "2", "--k", "2", "--grid", "5,10", "--prime-limit", "1000")
    _, out_json, _ = run_cli(capsys, *base)
    _, out_csv, _ = run_cli(capsys, *base, "--format", "csv")
    rows = json.loads(out_json)["result"]["rows"]
    lines = out_csv.strip().splitlines()
    assert lines[0] == "n,count,predicted,abs_error,normalized_error"
    for row, line in zip(rows, lines[1:]):
        n, count, predicted, _, _ = line.split(",")
        assert int(n) == row["n"]
        assert int(count) == row["count"]
        assert float(predicted) == row["predicted"]


def test_output_file_matches_stdout(tmp_path, capsys):
    args = ("count", "--s", "2", "--k", "3", "--n", "6")
    _, out, _ = run_cli(capsys, *args)
    target = tmp_path / "doc.json"
    code, silent, _ = run_cli(capsys, *args, "--output", str(target))
    assert code == 0
    assert silent == ""
    assert target.read_bytes() == out.encode("utf-8")


def test_validation_exit_code_and_message(capsys):
    code, out, err = run_cli(capsys, "count", "--s", "2", "--u", "4,6", "--n", "5")
    assert code == 2
    assert out == ""
    assert err.startswith("error[validation]:")
    assert "gcd(u_1, u_2) = 2" in err

    code, _, err = run_cli(capsys, "count", "--s", "2", "--u", "5,6", "--k", "2", "--n", "5")
    assert code == 2 and "--k 2 conflicts" in err

    code, _, err = run_cli(capsys, "count", "--s", "2", "--n", "5")
    assert code == 2 and "either --k or --u" in err

    code, _, err = run_cli(capsys, "count", "--s", "2", "--u", "5;6", "--n", "5")
    assert code == 2 and "comma-separated" in err


def test_budget_exit_code(capsys):
    code, out, err = run_cli(
        capsys, "count", "--s", "4", "--k", "2", "--n", "1000", "--budget", "1000"
    )
    assert code == 3
    assert out == ""
    assert err.startswith("error[budget]:")


def test_verify_lemma4_passes(capsys):
    code, out, _ = run_cli(capsys, "verify-lemma4", "--s", "4", "--k", "4", "--u-max", "30")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["cells"] == 90
    assert doc["result"]["failures"] == 0
    assert doc["result"]["failed"] == []


def test_verify_recursion_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify-recursion", "--s", "1", "--u", "5,6", "--n-max", "8"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["failures"] == 0
    assert [r["n"] for r in doc["result"]["reports"]] == list(range(1, 9))
    assert all(r["passed"] for r in doc["result"]["reports"])


def test_verification_failure_exit_code(monkeypatch, capsys):
    # force a failing report through the reporting path
    def fake_verify(s, constraint, n, threads=1, budget=0):
        return RecursionReport(
            s=s, k=constraint.k, n=n, moduli=constraint.moduli,
            lhs=10, rhs_reduced=10, rhs_raw=9,
        )

    monkeypatch.setattr(cli, "verify_recursion", fake_verify)
    code, out, _ = run_cli(capsys, "verify-recursion", "--s", "1", "--k", "2", "--n-max", "2")
    assert code == 1
    doc = json.loads(out)
    assert doc["result"]["failures"] == 2
    assert not doc["result"]["reports"][0]["passed"]


def test_mc_document(capsys):
    code, out, _ = run_cli(
        capsys, "mc", "--s", "3", "--k", "3", "--range", "500", "--samples", "2000",
        "--seed", "4", "--streams", "2",
    )
    assert code == 0
    doc = json.loads(out)
    result = doc["result"]
    assert result["samples"] == 2000
    assert result["streams"] == 2
    assert 0 <= result["estimate"] <= 1
    assert result["hits"] == int(round(result["estimate"] * 2000))


def test_primes_formats(capsys):
    code, out, _ = run_cli(capsys, "primes", "--limit", "12")
    assert code == 0
    assert json.loads(out)["result"]["primes"] == [2, 3, 5, 7, 11]
    code, out, _ = run_cli(capsys, "primes", "--limit", "12", "--format", "csv")
    assert out.splitlines() == ["p", "2", "3", "5", "7", "11"]


def test_text_format_readable(capsys):
    code, out, _ = run_cli(
        capsys, "count", "--s", "2", "--k", "2", "--n", "4", "--format", "text"
    )
    assert code == 0
    assert "command: count" in out
    assert "count = 11" in out


def test_module_and_script_entry_points(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "kwise", "primes", "--limit", "10"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["primes"] == [2, 3, 5, 7]
    proc = subprocess.run(
        ["kwise", "count", "--s", "2", "--k", "2", "--n", "4"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 11
