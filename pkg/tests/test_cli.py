import json

import numpy as np
import pytest

from graphsense.cli import main
from graphsense.constructors import line_matrix
from graphsense.formats import read_graph, read_jsonl, read_matrix, write_vector
from graphsense.matrices import apply_matrix


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConstruct:
    def test_line_to_stdout_is_golden(self, capsys):
        code, out, _ = run(capsys, "construct", "--topology", "line",
                           "--n", "11", "--k", "3", "--out", "-")
        assert code == 0
        expected = ["9 11"] + [
            " ".join(["3"] + [str(i), str(i + 1), str(i + 2)])
            for i in range(9)]
        assert out.splitlines() == expected

    def test_plan_sidecar_written(self, tmp_path, capsys):
        out = tmp_path / "m.txt"
        code, _, _ = run(capsys, "construct", "--topology", "g4", "--n", "10",
                         "--k", "1", "--out", str(out))
        assert code == 0
        assert out.exists()
        plan = json.loads((tmp_path / "m.txt.plan.json").read_text())
        assert plan["formatVersion"] == 1

    def test_seed_reproducibility(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            code, _, _ = run(capsys, "construct", "--topology", "markov",
                             "--n", "20", "--k", "1", "--rows", "12",
                             "--seed", "5", "--out", str(path))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_required_option(self, tmp_path, capsys):
        code, _, err = run(capsys, "construct", "--topology", "grid",
                           "--k", "1", "--out", str(tmp_path / "m.txt"))
        assert code == 2
        assert "side" in err

    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["construct", "--nope"])
        assert exc.value.code == 2

    def test_graph_out(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        gout = tmp_path / "g.txt"
        code, _, _ = run(capsys, "construct", "--topology", "ring",
                         "--n", "8", "--k", "2", "--out", str(mat),
                         "--graph-out", str(gout))
        assert code == 0
        assert read_graph(gout.read_text()).n == 8


class TestVerify:
    def test_rank_failure_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 3\n2 0 1\n2 0 1\n")  # duplicate columns 0 and 1
        code, out, _ = run(capsys, "verify", "--matrix", str(bad),
                           "--check", "rank", "--k", "1")
        assert code == 1
        verdict = json.loads(out)
        assert verdict["ok"] is False

    def test_rank_pass_exits_zero(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        run(capsys, "construct", "--topology", "line", "--n", "11", "--k", "3",
            "--out", str(mat))
        code, out, _ = run(capsys, "verify", "--matrix", str(mat),
                           "--check", "rank", "--k", "3")
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_nsp_check(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        run(capsys, "construct", "--topology", "line", "--n", "12", "--k", "2",
            "--out", str(mat))
        code, out, _ = run(capsys, "verify", "--matrix", str(mat),
                           "--check", "nsp", "--k", "2")
        assert code == 0
        assert json.loads(out)["worstRatio"] < 0.5

    def test_feasibility_needs_graph(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        run(capsys, "construct", "--topology", "line", "--n", "6", "--k", "1",
            "--out", str(mat))
        code, _, err = run(capsys, "verify", "--matrix", str(mat),
                           "--check", "feasibility", "--k", "1")
        assert code == 2 and "graph" in err

    def test_feasibility_pass(self, tmp_path, capsys):
        mat, gout = tmp_path / "m.txt", tmp_path / "g.txt"
        run(capsys, "construct", "--topology", "g4", "--n", "9", "--k", "1",
            "--out", str(mat), "--graph-out", str(gout))
        code, out, _ = run(capsys, "verify", "--matrix", str(mat),
                           "--graph", str(gout), "--check", "feasibility")
        assert code == 0 and json.loads(out)["ok"] is True


class TestRecover:
    def test_l1_round_trip(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        run(capsys, "construct", "--topology", "line", "--n", "12", "--k", "2",
            "--seed", "3", "--out", str(mat))
        a = read_matrix(mat.read_text())
        x = np.zeros(12)
        x[[2, 9]] = [1.25, -0.75]
        y = apply_matrix(a, x)
        meas = tmp_path / "y.txt"
        meas.write_text(write_vector(y))
        code, out, _ = run(capsys, "recover", "--matrix", str(mat),
                           "--measurements", str(meas), "--method", "l1")
        assert code == 0
        result = json.loads(out)
        assert result["status"] == "exact-feasible"
        assert np.allclose(result["xHat"], x, atol=1e-6)

    def test_sequential_uses_plan_sidecar(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        run(capsys, "construct", "--topology", "g4", "--n", "12", "--k", "1",
            "--out", str(mat))
        a = read_matrix(mat.read_text())
        x = np.zeros(12)
        x[7] = 2.0
        meas = tmp_path / "y.txt"
        meas.write_text(write_vector(apply_matrix(a, x)))
        code, out, _ = run(capsys, "recover", "--matrix", str(mat),
                           "--measurements", str(meas), "--method", "sequential")
        assert code == 0
        assert np.allclose(json.loads(out)["xHat"], x, atol=1e-6)

    def test_l0_reports_uniqueness(self, tmp_path, capsys):
        mat = tmp_path / "m.txt"
        mat.write_text("1 2\n2 0 1\n")
        meas = tmp_path / "y.txt"
        meas.write_text(write_vector([1.0]))
        code, out, _ = run(capsys, "recover", "--matrix", str(mat),
                           "--measurements", str(meas), "--method", "l0",
                           "--k-max", "1")
        assert code == 0
        result = json.loads(out)
        assert result["unique"] is False and result["supportSize"] == 1


class TestExperimentCommand:
    def test_er_partition_jsonl(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        code, _, _ = run(capsys, "experiment", "--name", "er-partition",
                         "--n", "300", "--beta", "3", "--trials", "3",
                         "--seed", "1", "--out", str(out))
        assert code == 0
        records = read_jsonl(out.read_text())
        assert len(records) == 3
        assert {r["experiment"] for r in records} == {"er-partition"}

    def test_byte_identical_reruns(self, tmp_path, capsys):
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            path = tmp_path / name
            run(capsys, "experiment", "--name", "exp1", "--n", "40",
                "--steps", "1", "--edges-per-step", "5", "--trials", "1",
                "--seed", "2", "--out", str(path))
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]


class TestGraphGen:
    def test_er_graph_file(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        code, _, _ = run(capsys, "graph-gen", "--model", "er", "--n", "30",
                         "--p", "0.2", "--seed", "3", "--out", str(out))
        assert code == 0
        assert read_graph(out.read_text()).n == 30

    def test_env_seed_fallback(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GRAPHSENSE_SEED", "11")
        out1 = tmp_path / "g1.txt"
        code, _, _ = run(capsys, "graph-gen", "--model", "er", "--n", "20",
                         "--p", "0.3", "--out", str(out1))
        assert code == 0
        out2 = tmp_path / "g2.txt"
        run(capsys, "graph-gen", "--model", "er", "--n", "20", "--p", "0.3",
            "--seed", "11", "--out", str(out2))
        assert out1.read_bytes() == out2.read_bytes()
