import json

import pytest

from qbundle.catalog import load_example
from qbundle.cli import Command, UsageError, main, run
from qbundle.fileformat import dumps


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_torus(capsys):
    code, out, err = call(capsys, "check", "torus")
    assert code == 0
    assert out.count("\nPASS ") + out.startswith("PASS ") >= 30
    assert "0 failed" in out and err == ""


def test_check_hopf_fibration_with_degree_bound(capsys):
    code, out, _ = call(capsys, "check", "qsu2_hopf", "--max-deg", "3", "--max-len", "3")
    assert code == 0


def test_corrupted_file_fails_naming_the_relation(tmp_path, capsys):
    path = tmp_path / "torus.qb"
    path.write_text(dumps(load_example("torus")).replace("rmul du*u -> u*du;", "rmul du*u -> q*u*du;"))
    code, out, err = call(capsys, "check", str(path), "--max-len", "3")
    assert code == 1
    assert "FAIL bundle/completeness.well-defined[du*u -> q^1*u*du]" in out
    assert err.startswith("first failure: bundle/completeness.well-defined[du*u -> q^1*u*du]")


@pytest.mark.parametrize("argv,expected", [
    (("nf", "torus", "v*u"), "l^1*u*v"),
    (("d", "torus", "u*v"), "u*dv + l^-1*v*du"),
    (("wedge", "group_z", "q^-1*g*d(g)", "d(g)"), "0"),
    (("coact", "torus", "du"), "(u | dt) + (du | t)"),
    (("piver", "qsu2_hopf", "e0"), "(1 | w)"),
    (("base", "torus", "--degree", "0", "--max-len", "2"), None),
])
def test_single_results(capsys, argv, expected):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    if expected is not None:
        assert out.strip() == expected
    else:
        assert out.strip().splitlines()


def test_json_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert call(capsys, "report", "group_z", "--format", "json", "--output", str(a))[0] == 0
    assert call(capsys, "report", "group_z", "--format", "json", "--output", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = json.loads(a.read_text())
    assert all(set(r) == {"check-id", "paper-anchor", "status", "witness"} for r in rows)


def test_json_single_result(capsys):
    code, out, _ = call(capsys, "nf", "torus", "v*u", "--format", "json")
    assert json.loads(out) == {"input": ["v*u"], "result": "l^1*u*v"}


def test_export_round_trips(tmp_path, capsys):
    path = tmp_path / "z.qb"
    assert call(capsys, "export", "group_z", "--output", str(path))[0] == 0
    code, out, _ = call(capsys, "check", str(path), "--max-len", "3")
    assert code == 0


def test_environment_bounds(monkeypatch, capsys):
    monkeypatch.setenv("QBUNDLE_MAX_LEN", "2")
    code, out, _ = call(capsys, "base", "torus", "--degree", "0")
    monkeypatch.setenv("QBUNDLE_MAX_LEN", "4")
    code4, out4, _ = call(capsys, "base", "torus", "--degree", "0")
    assert code == code4 == 0
    assert len(out.splitlines()) < len(out4.splitlines())
    monkeypatch.setenv("QBUNDLE_MAX_LEN", "many")
    assert call(capsys, "base", "torus")[0] == 2


@pytest.mark.parametrize("argv,fragment", [
    (("check", "nowhere"), "neither a catalog example"),
    (("nf", "torus", "u * * v"), "position 4"),
    (("nf", "torus", "u*z"), "unknown generator 'z'"),
    (("wedge", "torus", "du"), "takes 2 expression"),
    (("check", "torus", "--max-len", "0"), "--max-len"),
])
def test_usage_errors_exit_2(capsys, argv, fragment):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert fragment in err


def test_unwritable_output_names_path(tmp_path, capsys):
    bad = tmp_path / "missing" / "out.txt"
    code, _, err = call(capsys, "nf", "torus", "u", "--output", str(bad))
    assert code == 2
    assert str(bad) in err


def test_command_validation_happens_first():
    with pytest.raises(UsageError):
        Command("nf", "torus", [], max_len=4).validate()
    with pytest.raises(UsageError):
        run(Command("check", "no-such-target", max_len=-1))
