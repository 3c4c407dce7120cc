"""End-to-end CLI contract: output schema and exit codes."""

import csv
import json
import math

import pytest

from zetaseries.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_trivial_zeta(capsys):
    code, out, _ = run(capsys, "eval", "lhs", "order-p", "--s", "2", "--z", "0")
    assert code == 0
    body = json.loads(out)
    assert abs(body["value"][0] - math.pi**2 / 6) <= 1e-12


def test_eval_paper_constant(capsys):
    code, out, _ = run(capsys, "eval", "rhs", "order-p", "--s", "2", "--z", "-0.25")
    assert code == 0
    body = json.loads(out)
    assert abs(body["value"][0] - 2.0) <= 1e-10


def test_eval_cesaro_boundary(capsys):
    code, out, _ = run(
        capsys, "eval", "rhs", "order-p", "--s", "2", "--z", "1",
        "--method", "cesaro:1", "--target", "1e-6",
    )
    assert code == 0
    body = json.loads(out)
    assert abs(body["value"][0] - 1.076674047468581) <= 1e-6
    assert body["method"] == "cesaro(1)"


def test_eval_domain_error_exit_2(capsys):
    code, out, err = run(capsys, "eval", "lhs", "order-p", "--s", "0.5", "--z", "0")
    assert code == 2
    message = json.loads(err)
    assert message["error"] == "DomainError"


def test_eval_pole_error_exit_2(capsys):
    code, _, err = run(
        capsys, "eval", "rhs", "order-p", "--s", "2", "--z", "-1", "--method", "abel"
    )
    assert code == 2
    assert json.loads(err)["error"] == "PoleError"


def test_verify_pass_exit_0(capsys):
    code, out, _ = run(capsys, "verify", "order-p", "--s", "2", "--z", "0.5")
    assert code == 0
    body = json.loads(out)
    assert body["status"] == "pass"


def test_verify_json_roundtrip(capsys):
    code, out, _ = run(capsys, "verify", "compose", "--f", "sin", "--s", "2", "--z", "0.5")
    assert code == 0
    body = json.loads(out)
    assert json.loads(json.dumps(body)) == body


def test_verify_fail_exit_1(capsys, monkeypatch):
    # the evaluators are honest, so a genuine failure needs to be injected
    from zetaseries import corpus
    from zetaseries.core import SumResult

    a = SumResult(1.0, 1e-12, 10, "direct")
    b = SumResult(1.1, 1e-12, 10, "direct")
    fake = corpus.make_report("order-p", a, b, 1e-8)
    assert fake.status == "fail"
    monkeypatch.setattr(corpus, "verify", lambda *args, **kwargs: fake)
    code, out, _ = run(capsys, "verify", "order-p", "--s", "2", "--z", "0.5")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_suite_only_exit_0(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "suite", "--only", "7.12", "--report", str(report))
    assert code == 0
    on_disk = json.loads(report.read_text())
    assert on_disk == json.loads(out)
    assert on_disk["all_pass"]


def test_suite_fail_exit_1(capsys, monkeypatch):
    from zetaseries import corpus

    fake = {"reports": [], "summary": {"pass": 0, "fail": 1, "skipped": 0, "total": 1},
            "all_pass": False}
    monkeypatch.setattr(corpus, "run_suite", lambda **kwargs: fake)
    code, out, _ = run(capsys, "suite")
    assert code == 1
    assert json.loads(out) == fake


def test_poles_csv(capsys):
    code, out, _ = run(capsys, "poles", "--s", "2", "--count", "3")
    assert code == 0
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0] == ["n", "re", "im", "abs", "arg"]
    assert [float(r[1]) for r in rows[1:]] == [-1.0, -4.0, -9.0]
    # full double round-trip formatting
    assert float(rows[1][4]) == math.pi


def test_poles_csv_file(capsys, tmp_path):
    target = tmp_path / "poles.csv"
    code, out, _ = run(
        capsys, "poles", "--s", "2+1i", "--count", "100", "--out", str(target)
    )
    assert code == 0
    rows = list(csv.reader(target.read_text().splitlines()))
    assert len(rows) == 101
    args = [float(r[4]) for r in rows[1:]]
    # principal args; unwrapped growth is checked in the poles unit tests
    assert all(-math.pi <= a <= math.pi for a in args)


def test_poles_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "poles", "--s", "0.5", "--count", "3")
    assert code == 2
    assert json.loads(err)["error"] == "DomainError"


def test_residue_json(capsys):
    code, out, _ = run(capsys, "residue", "--spec", "ones", "--s", "2", "--n", "1")
    assert code == 0
    body = json.loads(out)
    assert body["expected_residue"] == [1.0, 0.0]
    assert abs(body["measured_residue"][0] - 1.0) <= 1e-6


def test_residue_weighted(capsys):
    code, out, _ = run(capsys, "residue", "--s", "4", "--n", "3", "--q", "1", "--m", "0")
    assert code == 0
    body = json.loads(out)
    assert abs(body["measured_residue"][0] - 3.0) <= 3e-5


def test_residue_not_a_pole_exit_2(capsys):
    code, _, err = run(capsys, "residue", "--spec", "mobius", "--s", "2", "--n", "4")
    assert code == 2
    assert json.loads(err)["error"] == "NotAPoleError"


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "sideways", "order-p"])
    assert exc.value.code == 2
