"""End-to-end CLI behavior, including exit codes."""

import json

import pytest

import perrontree as pt
from perrontree import bounds, cli

FIG_TEXT = "6\n0 1 1 2 3 3\n"

FIG_Q_TEXT = """6 6
6 2 3 1 1 1
2 2 0 1 0 0
3 0 3 0 1 1
1 1 0 1 0 0
1 0 1 0 1 0
1 0 1 0 0 1
"""


@pytest.fixture()
def fig_file(tmp_path):
    fp = tmp_path / "fig.tree"
    fp.write_text(FIG_TEXT)
    return str(fp)


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


class TestGen:
    def test_generators_round_trip(self, tmp_path, capsys):
        out_file = tmp_path / "b.tree"
        assert cli.main(["gen", "bethe", "--p", "3", "--k", "4",
                         "-o", str(out_file)]) == 0
        t = pt.load_tree(out_file)
        assert t.n == 21
        # re-emitting the parsed tree reproduces the file byte-for-byte
        assert pt.tree_to_text(t) == out_file.read_text()

    def test_gen_to_stdout(self, capsys):
        code, out = run(capsys, ["gen", "star", "--n", "4"])
        assert code == 0 and out == "4\n0 1 1 1\n"

    def test_gen_json(self, capsys):
        code, out = run(capsys, ["gen", "path", "--n", "3", "--json"])
        assert code == 0
        assert json.loads(out) == {"n": 3, "parent": [0, 1, 2]}

    def test_gen_compositions(self, tmp_path, capsys):
        a = tmp_path / "a.tree"
        b = tmp_path / "b.tree"
        cli.main(["gen", "star", "--n", "3", "-o", str(a)])
        cli.main(["gen", "path", "--n", "3", "-o", str(b)])
        code, out = run(capsys, ["gen", "sum", str(a), str(b)])
        assert code == 0 and out.split("\n")[0] == "7"
        code, out = run(capsys, ["gen", "product", str(a), str(b)])
        assert code == 0 and out.split("\n")[0] == "9"
        code, out = run(capsys, ["gen", "power", str(a), "--k", "3"])
        assert code == 0 and out.split("\n")[0] == "27"

    def test_gen_random_deterministic(self, capsys):
        code, first = run(capsys, ["gen", "random", "--n", "20", "--seed", "5"])
        assert code == 0
        code, second = run(capsys, ["gen", "random", "--n", "20", "--seed", "5"])
        assert first == second

    def test_missing_required_option(self, capsys):
        code, _ = run(capsys, ["gen", "star"])
        assert code == 2

    def test_capacity_maps_to_usage_error(self, tmp_path, capsys):
        a = tmp_path / "a.tree"
        cli.main(["gen", "path", "--n", "10", "-o", str(a)])
        code, _ = run(capsys, ["gen", "power", str(a), "--k", "7"])
        assert code == 2


class TestMatrix:
    def test_worked_example_grid(self, fig_file, capsys):
        code, out = run(capsys, ["matrix", "--kind", "Q", fig_file])
        assert code == 0 and out == FIG_Q_TEXT

    def test_all_kinds_run(self, fig_file, capsys):
        for kind in ("N", "Ninv", "M", "Minv", "Q", "Qinv"):
            code, out = run(capsys, ["matrix", "--kind", kind, fig_file])
            assert code == 0 and out.startswith("6 6\n")

    def test_missing_file(self, capsys):
        assert cli.main(["matrix", "--kind", "N", "no-such.tree"]) == 2


class TestSpectral:
    def test_json_payload(self, fig_file, capsys):
        code, out = run(capsys, ["spectral", fig_file])
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"rho", "entropy", "iterations", "residual"}
        assert payload["rho"] == pytest.approx(8.91403971186, rel=1e-10)

    def test_neckbottle_route(self, fig_file, capsys):
        code, out = run(capsys, ["spectral", fig_file, "--neckbottle"])
        assert code == 0
        payload = json.loads(out)
        assert payload["rho"] == pytest.approx(8.91403971186, rel=1e-9)
        # entropy always comes from the bottleneck eigenvector
        assert payload["entropy"] == pytest.approx(5.80738749634, rel=1e-9)

    def test_iteration_limit_exit_code(self, fig_file, capsys):
        assert cli.main(["spectral", fig_file, "--max-iter", "1"]) == 3


class TestClassify:
    def test_even_path(self, tmp_path, capsys):
        fp = tmp_path / "p4.tree"
        cli.main(["gen", "path", "--n", "4", "-o", str(fp)])
        code, out = run(capsys, ["classify", str(fp)])
        assert code == 0
        payload = json.loads(out)
        assert payload["type"] == "II"
        assert payload["characteristic"] == [2, 3]  # 1-based labels
        assert payload["beta"] == pytest.approx(0.5, abs=1e-9)
        assert payload["algebraic_connectivity"] == pytest.approx(
            0.585786437627, rel=1e-9)

    def test_star_type_one(self, tmp_path, capsys):
        fp = tmp_path / "s5.tree"
        cli.main(["gen", "star", "--n", "5", "-o", str(fp)])
        code, out = run(capsys, ["classify", str(fp)])
        payload = json.loads(out)
        assert code == 0
        assert payload["type"] == "I" and payload["characteristic"] == [1]
        assert payload["beta"] is None


class TestVerify:
    def test_star_file_shows_gap_equality(self, tmp_path, capsys):
        fp = tmp_path / "s10.tree"
        cli.main(["gen", "star", "--n", "10", "-o", str(fp)])
        code, out = run(capsys, ["verify", "--suite", "tree", str(fp)])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "tree_id,n,bound_id,lhs,rhs,slack,pass,equality"
        gap_rows = [l for l in lines if bounds.MOMENT_GE_RHO_MINUS_GAP in l]
        assert len(gap_rows) == 1 and gap_rows[0].endswith("true,true")

    def test_operand_suites_with_files(self, tmp_path, capsys):
        a = tmp_path / "a.tree"
        b = tmp_path / "b.tree"
        cli.main(["gen", "star", "--n", "4", "-o", str(a)])
        cli.main(["gen", "path", "--n", "5", "-o", str(b)])
        assert cli.main(["verify", "--suite", "sum", str(a), str(b)]) == 0
        capsys.readouterr()
        assert cli.main(["verify", "--suite", "product", str(a), str(b)]) == 0
        capsys.readouterr()
        assert cli.main(["verify", "--suite", "power", str(a),
                         "--k", "3"]) == 0
        capsys.readouterr()
        assert cli.main(["verify", "--suite", "power", str(a)]) == 2
        capsys.readouterr()
        assert cli.main(["verify", "--suite", "bethe", str(a)]) == 2

    def test_committed_sum_suite_passes(self, capsys):
        code, out = run(capsys, ["verify", "--suite", "sum"])
        assert code == 0
        assert len(out.strip().split("\n")) == 241

    def test_failure_exit_code(self, capsys, monkeypatch):
        failing = bounds.BoundReport("x", 2, "demo", 1, 0, -1, False, False)
        monkeypatch.setattr(cli.bounds, "check_tree",
                            lambda *a, **k: [failing])
        def fake_load(_):
            return pt.star(2)
        monkeypatch.setattr(cli.trees, "load_tree", fake_load)
        assert cli.main(["verify", "--suite", "tree", "whatever"]) == 1


class TestRatio:
    def test_csv_output(self, capsys):
        code, out = run(capsys, ["ratio", "--family", "star",
                                 "--params", "10,100"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "family,param,n,mu,rho,ratio,ratio_over_ln_n"
        assert len(lines) == 3

    def test_bad_params(self, capsys):
        assert cli.main(["ratio", "--family", "star", "--params", "1"]) == 2


class TestUsage:
    def test_unknown_subcommand(self, capsys):
        assert cli.main(["frobnicate"]) == 2

    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0
