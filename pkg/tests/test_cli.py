from pathlib import Path

from endocab import cli
from endocab import cycleset as cs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
X419 = str(FIXTURES / "x4_19.cs")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def result(out, key):
    for line in out.splitlines():
        if line.startswith(f"RESULT {key} "):
            return line[len(f"RESULT {key} "):]
    raise KeyError(key)


def test_analyze_fixture(capsys):
    code, out, _ = run(capsys, "analyze", X419)
    assert code == 0
    assert result(out, "summary") == "T: 4-cycle; irretractable; mpl=INFINITE; |G|=8; 2-type"
    assert result(out, "socle_order") == "1"
    assert out.splitlines()[0] == f"COMMAND endocab analyze {X419}"
    assert out.splitlines()[1].startswith("INPUT sha256:")


def test_analyze_trivial(capsys, tmp_path):
    f = tmp_path / "t3.cs"
    f.write_text(cs.serialize(cs.trivial(3)))
    code, out, _ = run(capsys, "analyze", str(f))
    assert code == 0
    assert "mpl=1; decomposable" in result(out, "summary")


def test_malformed_file(capsys, tmp_path):
    f = tmp_path / "bad.cs"
    f.write_text("2\n0 0\n1 1\n")
    code, _, err = run(capsys, "analyze", str(f))
    assert code == 2
    assert "RowNotBijective" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.cs"))
    assert code == 2


def test_report_is_reproducible(capsys):
    _, a, _ = run(capsys, "analyze", X419)
    _, b, _ = run(capsys, "analyze", X419)
    assert a == b


def test_retract(capsys, tmp_path):
    out_file = tmp_path / "r.cs"
    f = tmp_path / "t3.cs"
    f.write_text(cs.serialize(cs.trivial(3)))
    code, out, _ = run(capsys, "retract", str(f), "-o", str(out_file))
    assert code == 0
    assert result(out, "retract_size") == "1"
    assert cs.load(out_file) == cs.trivial(1)


def test_cable_scalar_one_is_identity(capsys, tmp_path):
    out_file = tmp_path / "c.cs"
    code, out, _ = run(capsys, "cable", X419, "--scalar", "1", "-o", str(out_file))
    assert code == 0
    assert cs.load(out_file) == cs.x4_19()
    assert result(out, "step[1].scalar[1].equals_input") == "yes"


def test_cable_scalar_two(capsys):
    code, out, _ = run(capsys, "cable", X419, "--scalar", "2")
    assert code == 0
    assert "CHECK step[1].scalar[2].diagonal_matches_closed_form PASS" in out
    assert result(out, "step[1].scalar[2].diagonal") == "2 3 0 1"


def test_cable_central_and_phi_z(capsys):
    code, out, _ = run(capsys, "cable", X419, "--central", "0")
    assert code == 0 and result(out, "step[1].lam[0].equals_input") == "yes"
    code, out, _ = run(capsys, "cable", X419, "--phi-z", "0", "--iterate", "2")
    assert code == 0
    assert "step[2]" in out


def test_cable_central_trivial_center_is_identity(capsys, tmp_path):
    # lambda_0 is the identity, so the cabling changes nothing
    f = tmp_path / "t.cs"
    f.write_text(cs.serialize(cs.trivial(2)))
    code, out, _ = run(capsys, "cable", str(f), "--central", "0")
    assert code == 0
    assert result(out, "step[1].lam[0].equals_input") == "yes"


def test_cable_non_central(capsys):
    code, _, err = run(capsys, "cable", X419, "--central", "1")
    assert code == 2 and "NotCentral" in err


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", X419)
    assert code == 0
    assert "FAIL" not in out


def test_verify_theorem(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "theorem", "FULLCYCLE_TWO", "4")
    assert code == 0
    assert result(out, "solutions") == "4"


def test_verify_n16_needs_extended(capsys):
    code, _, err = run(capsys, "verify", "--suite", "theorem", "FULLCYCLE_TWO", "16")
    assert code == 2
    assert "--extended" in err


def test_search_appendix_v3(capsys, tmp_path):
    f = tmp_path / "m.model"
    f.write_text("n=8\ndiagonal=fullcycle\ncentral_symmetry=1\nshift=4\nirretractable=true\n")
    code, out, _ = run(capsys, "search", str(f), "--mode", "decide")
    assert code == 0
    assert result(out, "status") == "UNSAT"


def test_search_writes_solutions(capsys, tmp_path):
    f = tmp_path / "m.model"
    f.write_text("n=4\ndiagonal=fullcycle\nirretractable=true\n")
    out_file = tmp_path / "sols.txt"
    code, out, _ = run(capsys, "search", str(f), "-o", str(out_file))
    assert code == 0
    sols = [cs.parse(c) for c in out_file.read_text().split("---\n")]
    assert len(sols) == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "3", "--up-to-iso")
    assert code == 0 and result(out, "count") == "5"
    code, out, _ = run(capsys, "enumerate", "4", "--diagonal", "fullcycle")
    assert result(out, "count") == "4"


def test_oracles(capsys):
    code, out, _ = run(capsys, "oracle", "hol", "--p", "3", "--v", "2")
    assert code == 0 and result(out, "count") == "2"
    assert "CHECK matches_closed_form PASS" in out
    code, out, _ = run(capsys, "oracle", "t2", "--v", "3")
    assert code == 0 and "CHECK matches_closed_form PASS" in out
    code, _, _ = run(capsys, "oracle", "hol", "--p", "3")
    assert code == 2


def test_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("ENDOCABLE_CAP", "3")
    code, _, err = run(capsys, "analyze", X419)
    assert code == 2 and "CapExceeded" in err
