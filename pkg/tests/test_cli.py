import subprocess
import sys

import pytest

from ncf4.cli import main
from ncf4.io import parse_poly, parse_problem

XYX = "vars x y\norder deglex\nchar 0\npoly x*y*x - x*y\n"


@pytest.fixture
def problem(tmp_path):
    def write(text, name="problem.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


def test_commutator_complete(problem, capsys):
    assert main(["gb", str(problem("vars x y\npoly y*x - x*y\n"))]) == 0
    assert capsys.readouterr().out == "y*x - x*y\n"


def test_truncated_exit_code_and_lines(problem, tmp_path):
    out = tmp_path / "basis.txt"
    assert main(["gb", str(problem(XYX)), "--degbound", "10", "--output", str(out)]) == 2
    lines = out.read_text().splitlines()
    assert lines == [f"x*y{'' if n == 1 else '^' + str(n)}*x - x*y{'' if n == 1 else '^' + str(n)}"
                     for n in range(1, 8)]


def test_maxiter_truncates(problem, capsys):
    assert main(["gb", str(problem(XYX)), "--maxiter", "1"]) == 2
    assert len(capsys.readouterr().out.splitlines()) == 2


@pytest.mark.parametrize("mode", ["incremental", "full"])
def test_proof_then_verify(problem, tmp_path, capsys, mode):
    src = problem("vars x y\nchar 2147483647\npoly 3*x*y*x - x*y\npoly y*y*x - 2*x\n")
    basis, certs = tmp_path / "b.txt", tmp_path / "c.txt"
    code = main(["gb", str(src), "--degbound", "6", "--proof", mode, "--output", str(basis),
                 "--proof-output", str(certs)])
    assert code in (0, 2)
    capsys.readouterr()
    assert main(["verify", str(src), "--basis", str(basis), str(certs)]) == 0
    report = capsys.readouterr().out.splitlines()
    assert report and all(line.startswith("OK ") for line in report)
    assert len(report) == len(basis.read_text().splitlines())
    if mode == "full":
        assert " * g" not in certs.read_text()


def test_default_certificate_path(problem, tmp_path, capsys):
    out = tmp_path / "basis.out"
    main(["gb", str(problem(XYX)), "--degbound", "5", "--proof", "full", "--output", str(out)])
    assert (tmp_path / "basis.cert").read_text().startswith("g1 := 1 * 1 * f1 * 1\n")
    assert main(["verify", str(problem(XYX)), "--basis", str(out), str(tmp_path / "basis.cert")]) == 0


def test_tampered_certificate_fails(problem, tmp_path, capsys):
    basis, certs = tmp_path / "b.txt", tmp_path / "c.txt"
    main(["gb", str(problem(XYX)), "--degbound", "5", "--proof", "incremental", "--output", str(basis),
          "--proof-output", str(certs)])
    lines = certs.read_text().splitlines()
    lines[1] = lines[1].replace("+ 1 * 1 * g1 * y", "+ 2 * 1 * g1 * y")
    certs.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify", str(problem(XYX)), "--basis", str(basis), str(certs)]) == 1
    assert "FAIL g2" in capsys.readouterr().out


def test_output_round_trip(problem, tmp_path):
    text = "vars a b\nchar 0\npoly 2*a*b - 1/3*b*a + a\npoly b^2 - 3\n"
    out = tmp_path / "basis.txt"
    main(["gb", str(problem(text)), "--degbound", "5", "--output", str(out)])
    pr = parse_problem(text)
    names = {"a": 1, "b": 2}
    key = pr.ordering.key
    for line in out.read_text().splitlines():
        poly = parse_poly(line, names, pr.field)
        words = list(poly)
        assert words == sorted(words, key=key, reverse=True)
        assert poly[words[0]] == 1


@pytest.mark.parametrize("threads", ["1", "2", "4"])
def test_threads_do_not_change_output(problem, capsys, threads):
    src = problem("vars x y z\nchar 7\npoly x*y - y*z + 2*x\npoly z*x - x*y*z\n")
    main(["gb", str(src), "--degbound", "6", "--threads", threads, "--gm", "on", "--tracer", "off"])
    out = capsys.readouterr().out
    main(["gb", str(src), "--degbound", "6"])
    assert capsys.readouterr().out == out


@pytest.mark.parametrize("text", ["vars x\nchar 2147483648\n", "vars x\npoly y\n", "poly x\n"])
def test_errors_exit_one(problem, capsys, text):
    assert main(["gb", str(problem(text))]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file_exits_one(tmp_path, capsys):
    assert main(["gb", str(tmp_path / "nope.txt")]) == 1


def test_module_entry_point(problem):
    proc = subprocess.run([sys.executable, "-m", "ncf4", "gb", str(problem(XYX)), "--degbound", "7"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert len(proc.stdout.splitlines()) == 4
