import csv
import io
import json
import subprocess
import sys

import pytest

from eisensign.chars import char_from_discriminant
from eisensign.cli import THREADS_ENV, USAGE_ERROR, VERIFY_FAILED, RunConfig, main, parse_args
from eisensign.decomp import combination
from eisensign.eisen import newform_from_discriminants


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_args_builds_config():
    cfg = parse_args(["sigma", "--d1", "5", "--d2", "8", "--k", "2", "--n", "3"])
    assert isinstance(cfg, RunConfig)
    assert cfg.subcommand == "sigma" and cfg.format == "json" and cfg.threads == 1
    assert cfg.params["chi1"] == char_from_discriminant(5)


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert parse_args(["theta", "--terms", "5"]).threads == 3
    assert parse_args(["theta", "--terms", "5", "--threads", "2"]).threads == 2


def test_sigma_json(capsys):
    code, out, _ = call(capsys, "sigma", "--d1", "5", "--d2", "8", "--k", "2", "--n", "3")
    assert code == 0 and json.loads(out)["sigma"] == "-4"


@pytest.mark.parametrize("argv,code,message", [
    (["sigma", "--d1", "9", "--d2", "8", "--k", "2", "--n", "3"], 12, "--d1: 9 is not a fundamental discriminant"),
    (["sigma", "--d1", "1", "--d2", "1", "--k", "2", "--n", "3"], 23, "excluded"),
    (["sigma", "--d1", "1", "--d2", "-4", "--k", "2", "--n", "3"], 22, ""),
    (["census", "--pattern", "4:1", "--x", "100"], USAGE_ERROR, "--pattern"),
    (["agree", "--f", "1:5:2", "--g", "1:5:4", "--signs"], 30, "weights differ"),
    (["expand", "--f", "nonsense", "--bound", "5"], USAGE_ERROR, "--f"),
])
def test_error_exit_codes(capsys, argv, code, message):
    got, _, err = call(capsys, *argv)
    assert got == code
    assert message in err


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == USAGE_ERROR


def test_census_csv(capsys):
    code, out, _ = call(capsys, "census", "--pattern", "3:-1", "--x", "1000", "5000", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["x", "empirical", "predicted", "abs_error"]
    assert [r[0] for r in rows[1:]] == ["1000", "5000"]


def test_output_is_thread_independent(capsys):
    base = ["eta", "--x", "5000", "--format", "csv"]
    outs = {call(capsys, *base, "--threads", t)[1] for t in ("1", "2", "4")}
    assert len(outs) == 1


def test_agree_reports_twist(capsys):
    code, out, _ = call(capsys, "agree", "--f", "1:5:2", "--g", "8:40:2")
    d = json.loads(out)
    assert code == 0 and d["density"] == "1/2" and d["verdict"] == "twist-related"


def test_basis_and_decompose_via_files(capsys, tmp_path):
    code, out, _ = call(capsys, "basis", "--N", "4", "--k", "4")
    assert json.loads(out)["size"] == 3
    chi = char_from_discriminant(1).induce(4)
    E = newform_from_discriminants(1, 1, 4)
    a = combination([(2, E, 1), (-1, E, 4)], 4, chi, 4).evaluate(20)
    src = tmp_path / "a.json"
    src.write_text(a.to_json())
    code, out, _ = call(capsys, "decompose", "--input", str(src), "--N", "4", "--k", "4")
    assert code == 0
    terms = {(t["d"], t["c"]) for t in json.loads(out)}
    assert terms == {(1, "2"), (4, "-1")}


def test_nonneg_scan_and_hypothesis_violation(capsys, tmp_path):
    chi = char_from_discriminant(40)
    good = combination([(1, newform_from_discriminants(5, 8, 2), 1)], 40, chi, 2)
    bad = combination([(1, newform_from_discriminants(1, 40, 2), 1)], 40, chi, 2)
    code, out, _ = call(capsys, "nonneg", "--comb", good.to_json(), "--T", "100")
    assert code == 0 and json.loads(out)["n"] == 107
    code, _, err = call(capsys, "nonneg", "--comb", bad.to_json())
    assert code == 50 and "hypothesis violated" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "theta.json"
    code, out, _ = call(capsys, "theta", "--terms", "50", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["theta"].startswith("3.97")


def test_verify_all_subset(capsys):
    code, out, _ = call(capsys, "verify-all", "--only", "1,3")
    d = json.loads(out)
    assert code == 0 and d["all_passed"]
    assert [c["number"] for c in d["criteria"]] == [1, 3]


def test_verify_all_reports_failures_with_exit_code(capsys):
    code, out, _ = call(capsys, "verify-all", "--only", "7")
    assert code == VERIFY_FAILED
    assert json.loads(out)["criteria"][0]["status"] == "FAIL"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "eisensign", "sigma", "--d1", "1", "--d2", "1",
                        "--k", "4", "--n", "6"], capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["sigma"] == "252"
