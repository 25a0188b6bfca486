import json

import pytest

from persexc import cli

from conftest import FIXTURES

E3 = FIXTURES / "e3"
TRIPLE = ["--complex", str(E3 / "X.txt"), "--sub-a", str(E3 / "A.txt"), "--sub-b", str(E3 / "B.txt")]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_e1(capsys):
    code, out, _ = run(capsys, "compute", "--complex", str(FIXTURES / "e1.txt"), "--max-dim", "1")
    assert code == cli.EXIT_OK
    assert out.endswith("degree 1\n2 inf 1\n")


def test_compute_empty(capsys, tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("")
    code, out, _ = run(capsys, "compute", "--complex", str(f), "--max-dim", "1")
    assert code == 0
    assert out == "degree 0\ndegree 1\n"


def test_compute_bad_file(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("0 1\n1 2\n0 1 2\n")
    code, _, err = run(capsys, "compute", "--complex", str(f))
    assert code == cli.EXIT_INPUT
    assert "line 3" in err and "monotonicity" in err


@pytest.mark.parametrize("argv", [
    ["compute", "--complex", "/nonexistent/x.txt"],
    ["compute", "--complex", str(FIXTURES / "e1.txt"), "--field", "4"],
    ["verify", "excision", "--complex", str(E3 / "X.txt")],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_INPUT


def test_compute_relative_structured(capsys):
    code, out, _ = run(capsys, "compute", *TRIPLE[:4], "--max-dim", "1", "--format", "structured")
    doc = json.loads(out)
    assert code == 0 and doc["relative"]
    assert doc["barcodes"][1]["bars"] == [{"birth": 2, "death": None, "multiplicity": 1}]


@pytest.mark.parametrize("claim", ["excision", "mv", "pair", "modules", "derive"])
def test_verify_e3_holds(capsys, claim):
    code, out, _ = run(capsys, "verify", claim, *TRIPLE, "--max-dim", "1")
    assert code == cli.EXIT_OK
    assert out.rstrip().endswith("result holds")


def test_verify_excision_report(capsys):
    _, out, _ = run(capsys, "verify", "excision", *TRIPLE, "--max-dim", "1")
    assert "beta[2,2] (X,A)=1 (B,A∩B)=1 equal=y" in out


def test_verify_modules_all_exact(capsys):
    _, out, _ = run(capsys, "verify", "modules", *TRIPLE, "--max-dim", "1")
    assert "exact=n" not in out
    assert out.count("verdict exact") == 2


def test_noncover_exit_3(capsys):
    argv = ["--complex", str(E3 / "X.txt"), "--sub-a", str(E3 / "A_noncover.txt"), "--sub-b", str(E3 / "B_noncover.txt")]
    code, _, err = run(capsys, "verify", "excision", *argv)
    assert code == cli.EXIT_HYPOTHESIS
    assert err.count("hypothesis not met") == 1
    assert run(capsys, "bench", *argv)[0] == cli.EXIT_HYPOTHESIS


def test_falsified_claim_exit_4(capsys, monkeypatch):
    def broken(*a, **kw):
        raise AssertionError("stage row is not exact")

    monkeypatch.setattr(cli, "mv_stage", broken)
    code, out, _ = run(capsys, "verify", "mv", *TRIPLE)
    assert code == cli.EXIT_FALSIFIED
    assert "claim falsified" in out


def test_bench_e3(capsys):
    code, out, _ = run(capsys, "bench", *TRIPLE, "--repeat", "1", "--format", "structured")
    doc = json.loads(out)
    assert code == 0 and doc["barcodes_equal"]
    assert (doc["sizes"]["direct"], doc["sizes"]["excised"]) == (6, 5)


def test_bench_b_is_x(capsys, tmp_path):
    (tmp_path / "X.txt").write_text((E3 / "X.txt").read_text())
    (tmp_path / "A.txt").write_text((E3 / "A.txt").read_text())
    (tmp_path / "B.txt").write_text("parent: X.txt\n0\n1\n2\n0 1\n1 2\n0 2\n")
    argv = ["--complex", str(tmp_path / "X.txt"), "--sub-a", str(tmp_path / "A.txt"), "--sub-b", str(tmp_path / "B.txt")]
    code, out, _ = run(capsys, "bench", *argv, "--repeat", "1")
    assert code == 0
    assert "saved 0 simplices; barcodes equal" in out


def test_bench_reports_savings(capsys, tmp_path):
    assert run(capsys, "generate", "--seed", "3", "--max-vertices", "10", "--simplex-dim", "3",
               "--min-excised", "5", "--out", str(tmp_path))[0] == 0
    argv = ["--complex", str(tmp_path / "X.txt"), "--sub-a", str(tmp_path / "A.txt"), "--sub-b", str(tmp_path / "B.txt")]
    code, out, _ = run(capsys, "bench", *argv, "--repeat", "1", "--format", "structured")
    sizes = json.loads(out)["sizes"]
    assert code == 0 and sizes["excised"] < sizes["direct"]


def test_generate_matches_golden(capsys, tmp_path):
    assert run(capsys, "generate", "--seed", "42", "--out", str(tmp_path))[0] == 0
    for name in ("X.txt", "A.txt", "B.txt"):
        assert (tmp_path / name).read_text() == (FIXTURES / "gen_seed42" / name).read_text()


def test_search_writes_witness(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--target", "pair", "--sweep", "50", "--out", str(tmp_path))
    assert code == 0 and out.startswith("witness target=pair")
    code, _, _ = run(capsys, "verify", "pair", "--complex", str(tmp_path / "X.txt"), "--sub-a", str(tmp_path / "A.txt"))
    assert code == 0


def test_output_is_deterministic(capsys):
    argv = ["verify", "derive", *TRIPLE, "--format", "structured"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
