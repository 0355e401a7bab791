import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cube_psatz.bounds import epsilon_one_certificate
from cube_psatz.certificates import GeneratorSet, PreorderCertificate, SosExpression, dumps, loads, verify
from cube_psatz.cli import main
from cube_psatz.enclosures import E5_HI
from cube_psatz.polycore import parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def eps_one(tmp_path):
    path = tmp_path / "eps1.json"
    path.write_text(dumps(epsilon_one_certificate()))
    return str(path)


@pytest.fixture
def worked_preorder(tmp_path):
    gens = GeneratorSet.scaled_cube(2, eta2=2)
    cert = PreorderCertificate(gens, {(1, 2): SosExpression.constant(1, 2)}, 4)
    path = tmp_path / "pre.json"
    path.write_text(dumps(cert))
    return str(path)


def test_verify_pass(capsys, eps_one):
    code, rep = run(capsys, "verify", eps_one, "(1-x1^2)*(1-x2^2)+1")
    assert code == 0 and rep["outcome"] == "pass"
    assert rep["result"]["passed"]


def test_verify_fail_reports_residual(capsys, eps_one):
    code, rep = run(capsys, "verify", eps_one, "(1-x1^2)*(1-x2^2)+2")
    assert code == 1
    assert rep["result"]["residual"] == "-1"


def test_verify_truncated_json(capsys, tmp_path, eps_one):
    bad = tmp_path / "bad.json"
    bad.write_text(open(eps_one).read()[:40])
    code, rep = run(capsys, "verify", str(bad), "1")
    assert code == 2 and rep["outcome"] == "usage-error"


def test_verify_bad_polynomial(capsys, eps_one):
    code, _ = run(capsys, "verify", eps_one, "x1 x2")
    assert code == 2


def test_construct_univariate_shift(capsys, tmp_path):
    out = tmp_path / "u.json"
    code, rep = run(capsys, "construct", "univariate-shift", "--q", "3", "--out", str(out))
    assert code == 0 and rep["artifacts"] == [str(out)]
    cert = loads(out.read_text())
    assert cert.r == 6 and verify(cert, parse("1-x1^2", 1)).passed


def test_construct_lnorm_in_cube(capsys, tmp_path):
    out = tmp_path / "l.json"
    code, _ = run(capsys, "construct", "lnorm-in-cube", "--n", "2", "--q", "2", "--out", str(out))
    cert = loads(out.read_text())
    assert code == 0 and cert.r == 4 and verify(cert, parse("2-x1^4-x2^4", 2)).passed


def test_construct_parameter_error(capsys):
    code, rep = run(capsys, "construct", "box-in-lnorm", "--n", "2", "--q", "1", "--eta", "5/4")
    assert code == 2
    code, _ = run(capsys, "construct", "box-in-lnorm", "--n", "2", "--q", "1", "--eta", "3/2")
    assert code == 0


def test_construct_to_stdout(capsys):
    code, rep = run(capsys, "construct", "pow2", "--m", "3")
    assert code == 0
    assert loads(json.dumps(rep["result"]["certificate"])).r == 8


def test_lift_worked_example(capsys, tmp_path, worked_preorder):
    out, ledger = tmp_path / "cube.json", tmp_path / "ledger.json"
    code, rep = run(capsys, "lift", worked_preorder, "--q", "1", "--out", str(out), "--ledger", str(ledger))
    assert code == 0
    cert = loads(out.read_text())
    assert cert.r == 4 and verify(cert, parse("(2-x1^2)*(2-x2^2)", 2)).passed
    led = json.loads(ledger.read_text())
    assert led["claimed_degree"] == 4 and led["k"] == 4


def test_lift_identity_passthrough(capsys, tmp_path):
    cert = PreorderCertificate(GeneratorSet.scaled_cube(1, 1), {(1,): SosExpression.constant(1, 1)}, 2)
    path = tmp_path / "id.json"
    path.write_text(dumps(cert))
    code, rep = run(capsys, "lift", str(path), "--q", "1")
    assert code == 0
    assert rep["result"]["certificate"]["r"] == 2


def test_lift_mismatched_params(capsys, worked_preorder):
    code, _ = run(capsys, "lift", worked_preorder, "--q", "1", "--eta", "3/2")
    assert code == 2
    code, _ = run(capsys, "lift", worked_preorder, "--q", "1", "--target", "x1")
    assert code == 2


def test_bounds_putinar_first_addend_zero(capsys):
    code, rep = run(capsys, "bounds", "putinar", "--n", "1", "--d", "3", "--fmin", "1", "--fmax", "1", "--C", "1", "--illustrative")
    assert code == 0
    assert rep["result"]["addend_breakdown"]["q_term_upper"] == "0/1"


def test_bounds_lower(capsys):
    code, rep = run(capsys, "bounds", "lower", "--epsilon", "1/4")
    assert code == 0 and rep["result"]["excluded_degree"] == 0


def test_bounds_epsilon(capsys):
    code, rep = run(capsys, "bounds", "epsilon", "--n", "2", "--d", "2", "--fmin", "1", "--fmax", "2")
    eps = 1 / (16 * E5_HI)
    assert code == 0 and rep["result"]["result"] == f"{eps.numerator}/{eps.denominator}"


def test_bounds_requires_flags(capsys):
    assert run(capsys, "bounds", "schmudgen", "--n", "2", "--d", "2", "--fmin", "1", "--fmax", "2")[0] == 2
    assert run(capsys, "bounds", "epsilon", "--n", "2", "--d", "2")[0] == 2
    assert run(capsys, "bounds", "lower")[0] == 2


def test_bounds_estimated_extrema_are_flagged(capsys):
    code, rep = run(capsys, "bounds", "q", "--n", "2", "--d", "4", "--f", "(1-x1^2)*(1-x2^2)+1", "--seed", "1")
    assert code == 0
    assert rep["result"]["inputs"]["extrema_estimated"]


def test_diagnose(capsys, eps_one):
    code, rep = run(capsys, "diagnose", eps_one, "--epsilon", "1")
    assert code == 0 and rep["result"]["all_facts_pass"]


def test_report_is_deterministic(capsys, eps_one, tmp_path):
    _, a = run(capsys, "verify", eps_one, "(1-x1^2)*(1-x2^2)+1")
    _, b = run(capsys, "verify", eps_one, "(1-x1^2)*(1-x2^2)+1")
    a.pop("elapsed_s"), b.pop("elapsed_s")
    assert a == b


def test_report_written_with_out(capsys, eps_one, tmp_path):
    out = tmp_path / "report.json"
    code, rep = run(capsys, "verify", eps_one, "(1-x1^2)*(1-x2^2)+1", "--out", str(out))
    assert json.loads(out.read_text())["outcome"] == "pass"


def test_module_entry_point(eps_one):
    proc = subprocess.run(
        [sys.executable, "-m", "cube_psatz", "verify", eps_one, "(1-x1^2)*(1-x2^2)+1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outcome"] == "pass"
