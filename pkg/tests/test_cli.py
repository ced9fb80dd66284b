import io
import json

import pytest

from inexgames.cli import run_cli
from inexgames.constructions import cnf_to_game
from inexgames.fixtures import DATA
from inexgames.games import format_game, parse_game


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "g.game").write_text(format_game(cnf_to_game([[1], [-1]])))
    (tmp_path / "ab.str").write_text("universe: a b\nP: (a)\nE: (a,b)\n")
    (tmp_path / "x.team").write_text("vars: x\na\n")
    (tmp_path / "p.frm").write_text("P(x)\n")
    (tmp_path / "bad.frm").write_text("E x. (P(x) &\n")
    (tmp_path / "so.frm").write_text("A x. (X(x) -> P(x))\n")
    (tmp_path / "exc.frm").write_text("exc(x; y)\n")
    return tmp_path


class TestEval:
    def test_evil(self):
        code, out, _ = run("eval", "--structure", DATA / "evil_A.str", "--team", DATA / "evil_X.team",
                           "--formula", DATA / "evil_phi.frm")
        assert code == 1 and "not satisfied" in out

    def test_satisfied(self, files):
        code, out, _ = run("eval", "--structure", files / "ab.str", "--team", files / "x.team",
                           "--formula", files / "p.frm")
        assert code == 0

    def test_parse_error_position(self, files):
        code, _, err = run("eval", "--structure", files / "ab.str", "--team", files / "x.team",
                           "--formula", files / "bad.frm")
        assert code == 2 and "bad.frm" in err and "column" in err

    def test_budget(self):
        code, _, err = run("--max-steps", "3", "eval", "--method", "direct", "--structure", DATA / "evil_A.str",
                           "--team", DATA / "evil_X.team", "--formula", DATA / "evil_phi.frm")
        assert code == 3 and "budget" in err

    def test_json(self, files):
        code, out, _ = run("eval", "--json", "--structure", files / "ab.str", "--team", files / "x.team",
                           "--formula", files / "p.frm")
        assert code == 0 and isinstance(json.loads(out), dict)

    def test_eval_so_lists_relations(self, files):
        code, out, _ = run("eval-so", "--structure", files / "ab.str", "--formula", files / "so.frm")
        assert code == 0 and "(a)" in out


class TestGames:
    def test_solve(self, files):
        code, out, _ = run("solve", "--game", files / "g.game", "--target", "c1")
        assert code == 0 and "c1" in out and "x1" in out

    def test_solve_unreachable(self, files):
        assert run("solve", "--game", files / "g.game", "--target", "c1,c2")[0] == 1

    def test_targets(self, files):
        code, out, _ = run("--json", "targets", "--game", files / "g.game")
        assert code == 0 and "c1" in out

    def test_sat2game(self, tmp_path):
        out_path = tmp_path / "o.game"
        code, _, _ = run("sat2game", "--cnf", DATA / "x_and_notx.cnf", "-o", out_path)
        assert code == 0
        assert parse_game(out_path.read_text()) == cnf_to_game([[1], [-1]])

    def test_build_exclusion(self, files):
        code, out, _ = run("build-game", "exclusion", "--structure", files / "ab.str",
                           "--formula", files / "exc.frm", "--domain", "x,y")
        assert code == 0 and "T" in out

    def test_check_union_game(self, files):
        assert run("check", "union-game", "--game", files / "g.game")[0] == 1


class TestMisc:
    def test_transform_companion(self, files):
        code, out, _ = run("transform", "companion-team", "--formula", files / "exc.frm", "--anchor", "x,y")
        assert code == 0 and "__fresh_y1" in out

    def test_check_x_myopic(self):
        code, _, _ = run("check", "x-myopic", "--formula", DATA / "evil_phi.frm", "--anchor", "x")
        assert code == 1

    def test_check_missing_option(self):
        assert run("check", "x-myopic", "--formula", DATA / "evil_phi.frm")[0] == 2

    def test_unknown_suite(self):
        assert run("verify", "--suite", "nope")[0] == 2

    def test_verify_one_suite(self):
        code, out, _ = run("verify", "--suite", "parser")
        assert code == 0 and "PASS" in out

    def test_missing_file(self):
        assert run("eval-so", "--structure", "/nonexistent", "--formula", "/nonexistent")[0] == 2
