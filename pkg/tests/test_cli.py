import subprocess
import sys

import pytest

from petricospan.cli import main
from petricospan.modelio import read_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_sir(self, capsys, models):
        code, out, _ = run(capsys, "eval", models["sir"], "F ; G")
        assert code == 0
        assert out.splitlines()[0] == "3 states, 2 transitions, dom [S], cod [R]"
        assert "transition α α: S + I -> 2 I" in out

    def test_named_expression(self, capsys, models):
        _, out, _ = run(capsys, "eval", models["sir"], "sir")
        assert out.startswith("3 states, 2 transitions")
        assert "[generator sir]" in out

    def test_mismatch(self, capsys, models):
        code, _, err = run(capsys, "eval", models["sir"], "G ; F")
        assert code == 1 and "BoundaryMismatch" in err

    def test_identity(self, capsys, models):
        code, out, _ = run(capsys, "eval", models["sir"], "id[I]")
        assert code == 0 and out.startswith("1 state, 0 transitions")

    def test_syntax_error(self, capsys, models):
        code, _, err = run(capsys, "eval", models["sir"], "F ; ")
        assert code == 1 and "ExprSyntaxError" in err and "1:5" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "eval", tmp_path / "none.model", "F")
        assert code == 1


class TestSimulate:
    def test_sir_epidemic(self, capsys, models):
        code, out, err = run(capsys, "simulate", models["sir"], "F ; G",
                             "--rate", "α=1.0", "--rate", "β=0.5",
                             "--init", "S=0.99", "--init", "I=0.01", "--init", "R=0",
                             "--step", "0.01", "--t-end", "40")
        assert code == 0
        traj = read_csv(out)
        assert traj.states == ("S", "I", "R") and traj.steps == 4000
        infected = traj.column("I")
        peak = infected.index(max(infected))
        assert infected[0] < infected[peak] and infected[-1] < infected[peak]
        assert abs(sum(traj.values[-1]) - 1.0) <= 1e-9
        assert "4000 steps" in err and "final S=" in err
        assert not err.startswith("t,")

    def test_zero_rates(self, capsys, models):
        code, out, _ = run(capsys, "simulate", models["sir"], "F ; G", "--rate", "α=0",
                           "--rate", "β=0", "--t-end", "1", "--step", "0.25")
        assert code == 0
        rows = out.splitlines()[1:]
        assert len(rows) == 5 and len({r.split(",", 1)[1] for r in rows}) == 1

    def test_missing_rate(self, capsys, tmp_path, models):
        text = models["sir"].read_text(encoding="utf-8").replace("rates: α=1.0, β=0.5", "rates: α=1.0")
        path = tmp_path / "sir.model"
        path.write_text(text, encoding="utf-8")
        code, out, err = run(capsys, "simulate", path, "F ; G")
        assert code == 1 and "β" in err and out == ""

    def test_blow_up(self, capsys, tmp_path):
        path = tmp_path / "boom.model"
        path.write_text("[generator B]\nstates: A\ntransition t k: 2 A -> 3 A\n", encoding="utf-8")
        code, _, err = run(capsys, "simulate", path, "B", "--rate", "k=1", "--init", "A=10", "--t-end", "10")
        assert code == 1 and "NonFiniteState" in err and "t=" in err

    def test_output_file(self, capsys, tmp_path, models):
        target = tmp_path / "out.csv"
        code, out, _ = run(capsys, "simulate", models["sir"], "sir", "--t-end", "1", "-o", target)
        assert code == 0 and out == ""
        assert target.read_text(encoding="utf-8").startswith("t,S,I,R\n")

    def test_unknown_init_state(self, capsys, models):
        code, _, err = run(capsys, "simulate", models["sir"], "sir", "--init", "Q=1")
        assert code == 1 and "Q" in err

    def test_bad_binding_is_usage_error(self, capsys, models):
        with pytest.raises(SystemExit) as info:
            main(["simulate", str(models["sir"]), "sir", "--rate", "α"])
        assert info.value.code == 2


class TestDiff:
    def test_sir_vs_sird(self, capsys, models):
        code, out, _ = run(capsys, "diff", models["sir"], "F ; G", models["sird"], "F ; H")
        assert code == 0
        lines = out.splitlines()
        assert "shared: F" in lines
        assert "substitution at right: G → H" in lines
        assert "+state D" in lines and "+transition γ" in lines

    def test_identical(self, capsys, models):
        code, out, _ = run(capsys, "diff", models["sir"], "F ; G", models["sir"], "sir")
        assert code == 0 and out == "identical\n"

    def test_left_child_substitution(self, capsys, models):
        code, out, err = run(capsys, "diff", models["sir"], "F ; G", models["sir"], "(F*F) ; G")
        assert "substitution at left: F → F * F" in out.splitlines()
        # (F * F) ; G does not typecheck against these generators
        assert code == 1 and "BoundaryMismatch" in err

    def test_colour_toggle(self, capsys, monkeypatch, models):
        monkeypatch.setenv("PETRICOSPAN_COLOR", "1")
        monkeypatch.delenv("NO_COLOR", raising=False)
        _, out, _ = run(capsys, "diff", models["sir"], "F ; G", models["sird"], "F ; H")
        assert "\x1b[32m+state D\x1b[0m" in out


class TestDot:
    def test_golden(self, capsys, models):
        from pathlib import Path
        code, out, _ = run(capsys, "dot", models["sir"], "F ; G")
        assert code == 0
        assert out == (Path(__file__).parent / "golden" / "sir.dot").read_text(encoding="utf-8")

    def test_empty_identity(self, capsys, models):
        code, out, _ = run(capsys, "dot", models["sir"], "id[]")
        assert code == 0 and "shape=" not in out

    def test_malaria(self, capsys, models):
        code, out, _ = run(capsys, "dot", models["malaria"], "malaria")
        assert code == 0
        for s in ("S_p", "I_p", "S_m", "I_m"):
            assert f'"s:{s}" [shape=circle' in out
        assert out.count("shape=circle") == 4


class TestCheck:
    def test_sir(self, capsys, models):
        code, out, _ = run(capsys, "check", models["sir"])
        assert code == 0 and "FAIL" not in out

    def test_dangling_reference(self, capsys, tmp_path):
        path = tmp_path / "bad.model"
        path.write_text("[generator F]\nstates: S\ntransition a k: S -> X\n[expr e]\nF ; Q\n", encoding="utf-8")
        code, out, _ = run(capsys, "check", path)
        assert code == 1
        fails = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert len(fails) == 2 and "'X'" in fails[0] and "'Q'" in fails[1]

    def test_type_error_listed(self, capsys, tmp_path, models):
        text = models["sir"].read_text(encoding="utf-8") + "\n[expr backwards]\nG ; F\n"
        path = tmp_path / "sir.model"
        path.write_text(text, encoding="utf-8")
        code, out, _ = run(capsys, "check", path)
        assert code == 1 and "FAIL expr backwards" in out and "ok   expr sir" in out

    def test_malaria_conserves(self, capsys, models):
        code, out, _ = run(capsys, "check", models["malaria"])
        assert code == 0
        gens = [line for line in out.splitlines() if "generator" in line]
        assert len(gens) == 4 and all("(conserves tokens)" in line for line in gens)


def test_module_entry_point_usage_error():
    proc = subprocess.run([sys.executable, "-m", "petricospan"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_module_entry_point_runs(models):
    proc = subprocess.run([sys.executable, "-m", "petricospan", "eval", str(models["sir"]), "sir"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("3 states")
