import json
import subprocess
import sys

import pytest

from thoma_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestPerm:
    def test_compose(self, capsys):
        assert run(capsys, "perm", "compose", "(1 2 3)", "(1 3)", "(1 3 2)")[:2] == (0, "(1 2)\n")

    def test_json(self, capsys):
        code, out, _ = run(capsys, "perm", "inverse", "(1 2 3)", "--format", "json")
        assert code == 0 and json.loads(out) == {"perm": "(1 3 2)"}

    @pytest.mark.parametrize(
        "op,arg,expected",
        [("cycles", "(3 4 5)(1 2)", "(1 2) (3 4 5)"), ("type", "(1 2)(3 4 5)", "2:1 3:1"),
         ("parity", "(1 2)(3 4 5)", "-1"), ("support", "(5 2 3)", "2 3 5")],
    )
    def test_ops(self, capsys, op, arg, expected):
        code, out, _ = run(capsys, "perm", op, arg)
        assert code == 0 and out.strip() == expected

    @pytest.mark.parametrize("bad", ["(1 1)", "(0 2)", "(1 2"])
    def test_malformed_exit_2(self, capsys, bad):
        code, _, err = run(capsys, "perm", "inverse", bad)
        assert code == 2 and "error" in err

    def test_unknown_flag(self, capsys):
        assert run(capsys, "perm", "inverse", "(1 2)", "--bogus")[0] == 2


class TestRing:
    def test_mul(self, capsys):
        code, out, _ = run(capsys, "ring", "mul", "(1 2 3) - (1 3 2)", "(1 2 4) - (1 4 2)")
        assert code == 0
        assert out.strip() == "(1 3)(2 4) + (1 4)(2 3) - (1 4 3) - (2 4 3)"

    def test_json_element_input(self, capsys):
        payload = json.dumps([{"coeff": {"re": "1/1", "im": "1/1"}, "perm": "(1 2)"}])
        code, out, _ = run(capsys, "ring", "star", payload, "--format", "json")
        assert code == 0
        assert json.loads(out) == [{"coeff": {"re": "1/1", "im": "-1/1"}, "perm": "(1 2)"}]

    def test_trace_and_inner(self, capsys):
        assert run(capsys, "ring", "trace", "2*e + (1 2)")[1].strip() == "2"
        code, out, _ = run(capsys, "ring", "inner", "1/2*(1 4 2) + 1/2*(1 2 4)", "(1 2)(3 4) - (1 4 2)",
                           "--format", "json")
        assert json.loads(out) == {"value": {"re": "-1/2", "im": "0/1"}}


class TestChar:
    def test_regular_eval(self, capsys):
        assert run(capsys, "char", "eval", "--alpha", "", "--beta", "", "--perm", "(1 2 3)")[:2] == (0, "0\n")

    def test_eval_params_json(self, capsys):
        code, out, _ = run(capsys, "char", "eval", "--params", '{"alpha": ["1/2"], "beta": []}',
                           "--perm", "(1 2 3)")
        assert out.strip() == "1/8"

    def test_invalid_params(self, capsys):
        assert run(capsys, "char", "eval", "--alpha", "1/4,1/2", "--perm", "(1 2)")[0] == 2

    def test_gram_csv(self, capsys):
        code, out, _ = run(capsys, "char", "gram", "--alpha", "1/2,1/2",
                           "--perms", "e", "(1 2)", "(1 2 3)", "--format", "csv")
        assert out.splitlines() == ["1,1/2,1/4", "1/2,1,1/2", "1/4,1/2,1"]

    def test_psd(self, capsys):
        assert run(capsys, "char", "psd", "--alpha", "1/3", "--beta", "1/3", "--n", "4")[0] == 0
        code, out, _ = run(capsys, "char", "psd", "--matrix", "[[1, 2], [2, 1]]", "--format", "json")
        doc = json.loads(out)
        assert code == 1 and doc["verdict"] == "not-psd" and doc["recomputed"] and doc["value"] == "-2/1"

    def test_regular_check(self, capsys):
        code, out, _ = run(capsys, "char", "regular-check", "--components", '[{"alpha": ["1/2"]}]')
        assert code == 0 and out.strip() == "not-applicable"
        code, out, _ = run(capsys, "char", "regular-check", "--weights", "1/2,1/2",
                           "--components", '[{"alpha": []}, {"beta": []}]')
        assert code == 0 and out.strip() == "pass"


class TestExpect:
    def test_apply(self, capsys):
        code, out, _ = run(capsys, "expect", "apply", "--subgroup", "alternating", "--elem", "(1 2) + (1 2 3)")
        assert out.strip() == "(1 2 3)"

    def test_trace_and_support(self, capsys):
        assert run(capsys, "expect", "trace", "--subgroup", "alternating", "--perm", "(1 2)")[1].strip() == "0"
        assert run(capsys, "expect", "support-check", "--subgroup", "full", "--perm", "(1 2)(3 4)")[0] == 0

    def test_bad_subgroup(self, capsys):
        assert run(capsys, "expect", "trace", "--subgroup", "klein", "--perm", "(1 2)")[0] == 2

    def test_identity_support_check(self, capsys):
        assert run(capsys, "expect", "support-check", "--subgroup", "full", "--perm", "e")[0] == 2


class TestSn:
    def test_dim(self, capsys):
        assert run(capsys, "sn", "dim", "--partition", "3,2")[1].strip() == "5"

    def test_table_json(self, capsys):
        doc = json.loads(run(capsys, "sn", "table", "--n", "3", "--format", "json")[1])
        assert doc["partitions"] == ["3", "2,1", "1,1,1"]
        assert doc["table"] == [[1, 1, 1], [-1, 0, 2], [1, -1, 1]]

    def test_limit_csv(self, capsys):
        code, out, _ = run(capsys, "sn", "limit", "--alpha", "1", "--k", "3", "--n-values", "8,12")
        assert out.splitlines() == ["n,exact_value,decimal_value,abs_error", "8,1/1,1,0/1", "12,1/1,1,0/1"]


class TestReplay:
    def test_symmetry_minus(self, capsys):
        code, out, _ = run(capsys, "replay", "symmetry", "--case", "minus", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["overall"] == "pass"
        assert doc["steps"][-1]["witness"] == {"re": "-1/2", "im": "0/1"}

    def test_finite_isr_fail_exit_1(self, capsys):
        assert run(capsys, "replay", "finite-isr", "--n", "3")[0] == 1
        assert run(capsys, "replay", "finite-isr", "--n", "2")[0] == 0

    def test_normal_subgroups(self, capsys):
        doc = json.loads(run(capsys, "replay", "normal-subgroups", "--n", "4", "--format", "json")[1])
        assert doc["count"] == 4 and [s["order"] for s in doc["subgroups"]] == [1, 4, 12, 24]

    @pytest.mark.parametrize("op", ["branch", "step1", "step2", "conclusion"])
    def test_sections(self, capsys, op):
        assert run(capsys, "replay", op)[0] == 0

    def test_all_deterministic(self, capsys):
        first = run(capsys, "replay", "all", "--format", "json", "--seed", "5")
        second = run(capsys, "replay", "all", "--format", "json", "--seed", "5")
        assert first[0] == 0 and first[1] == second[1]

    def test_seed_env(self, capsys, monkeypatch):
        monkeypatch.setenv("THOMA_LAB_SEED", "nope")
        assert run(capsys, "replay", "step1")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "thoma_lab", "perm", "compose", "(1 2)", "(2 3)"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "(1 2 3)\n"
