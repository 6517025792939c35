import json

import pytest

from hml.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symbol(capsys):
    assert run(capsys, "symbol", "--a", "i", "--n", "3+2i")[:2] == (0, "-1\n")
    assert run(capsys, "symbol", "--a", "1+i", "--n", "3+2i", "--oracle")[:2] == (0, "-1\n")


def test_negative_literal_form(capsys):
    code, out, _ = run(capsys, "gauss", "--r", "1", "--n=-1+2i")
    assert code == 0
    assert json.loads(out)["re"] == pytest.approx(-5**0.5)


def test_gauss_brute(capsys):
    code, out, _ = run(capsys, "gauss", "--r", "1", "--n=-7+4i", "--brute")
    assert json.loads(out)["re"] == pytest.approx(65**0.5)


def test_lfun_and_zeta(capsys):
    code, out, _ = run(capsys, "zeta", "--s", "2")
    assert json.loads(out)["re"] == pytest.approx(1.5067030099229850)
    code, out, _ = run(capsys, "lfun", "--s", "0.5", "--d=-1+2i")
    data = json.loads(out)
    assert code == 0 and data["terms_used"] > 0 and abs(data["im"]) < 1e-12
    code, out, _ = run(capsys, "lfun", "--s", "0.6,1", "--tilde-n", "3+2i")
    assert code == 0


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", "--which", "GK", "--s", "0.5")
    assert json.loads(out)["value"]["re"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "euler", "--which", "BK", "--s", "0.7", "--prime-bound", "1000")
    data = json.loads(out)
    assert data["prime_bound"] == 1000 and data["tail_bound"] > 0
    assert run(capsys, "euler", "--which", "PK", "--s", "0.7")[0] == 2


def test_moment_csv(capsys):
    code, out, _ = run(capsys, "moment", "--x", "100,200", "--s-re", "0.7", "--prime-bound", "10000")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[0] == "X,lhs_re,lhs_im,term1,term2,term3,term4,residual,relative_residual,d_count,seconds"


def test_moment_json_debug(capsys):
    code, out, _ = run(
        capsys, "moment", "--x", "150", "--out", "json", "--prime-bound", "10000", "--debug-variants"
    )
    row = json.loads(out)["rows"][0]
    assert {"residual_piOver4", "residual_piOver6"} <= set(row)


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "euler", "--which", "EK", "--s", "1")
    assert code == 2 and err.startswith("error:")


def test_bad_literal():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["symbol", "--a", "1.5", "--n", "3"])


def test_check_suite(capsys):
    code, out, err = run(capsys, "check", "--suite", "residue")
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert "[PASS] criterion  7" in err
