"""End-to-end tests for the command line front end."""
from __future__ import annotations

import json

import pytest

from boundcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


class TestEval:
    def test_plain_value(self, capsys):
        code, out, _ = run(capsys, "eval", "type1(log)", "--n", "16")
        assert (code, out) == (0, "64")

    def test_tower_point(self, capsys):
        code, out, _ = run(capsys, "eval", "exp2", "--n", "tower(5)")
        assert (code, out) == (0, "2^2^65536")

    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "--json", "eval", "type1(log)", "--n", "16")
        doc = json.loads(out)
        assert code == 0
        assert doc["value"] == "64"
        assert doc["exact"] is True
        assert doc["config"]["power_cap"] == 8

    def test_bad_point(self, capsys):
        code, _, err = run(capsys, "eval", "n", "--n", "soon")
        assert code == 3
        assert "tower(K)" in err


class TestCmp:
    def test_strict_power_drop(self, capsys):
        code, out, _ = run(capsys, "cmp", "--rel", "llpow", "log{2}", "log")
        assert code == 0
        assert out.startswith("log{2} <<pow log: HOLDS")

    def test_refuted_comparison(self, capsys):
        code, out, _ = run(capsys, "cmp", "--rel", "it", "exp2", "n^2")
        assert code == 1
        assert "FAILS" in out

    def test_parse_error_is_usage(self, capsys):
        code, _, err = run(capsys, "cmp", "--rel", "ae", "n^", "n")
        assert code == 3
        assert "error" in err

    def test_json_verdict(self, capsys):
        code, out, _ = run(capsys, "--json", "cmp", "--rel", "pow",
                           "log", "log{2}")
        doc = json.loads(out)
        assert code == 1
        assert doc["verdict"]["outcome"] == "fails"


class TestTame:
    def test_polynomial_pair(self, capsys):
        code, out, _ = run(capsys, "tame", "{n, n^2}")
        assert code == 0
        assert "HOLDS" in out

    def test_needs_a_finite_literal(self, capsys):
        code, _, err = run(capsys, "tame", "it(n^2)")
        assert code == 3
        assert "finite set literal" in err


class TestCertify:
    def test_iteration_set_is_o_regular(self, capsys):
        code, out, _ = run(capsys, "certify", "--set", "it(type1(log))",
                           "--prop", "oregular")
        assert code == 0
        assert out == "o-regular: certified-by-lemma(iteration-set-partition-bound)"

    def test_singleton_identity_refuted(self, capsys):
        code, out, _ = run(capsys, "certify", "--set", "{n}",
                           "--prop", "regular")
        assert code == 1
        assert "refuted" in out

    def test_factor_consistency(self, capsys):
        code, out, _ = run(capsys, "certify", "--set", "log", "--prop", "fcons")
        assert code == 0

    def test_case_split_stays_unknown(self, capsys):
        code, out, _ = run(capsys, "certify", "--set", "parity(n,2*n)",
                           "--prop", "fcons")
        assert code == 2
        assert "unknown" in out

    def test_json_carries_the_rule(self, capsys):
        code, out, _ = run(capsys, "--json", "certify", "--set",
                           "it(type1(log))", "--prop", "regular")
        doc = json.loads(out)
        assert code == 0
        assert doc["certificate"]["lemma"] == "iteration-of-constructible-superlinear"


class TestChain:
    def test_table_rows(self, capsys):
        code, out, _ = run(capsys, "chain", "--type", "1", "--depth", "1",
                           "--lo", "2", "--hi", "n")
        lines = out.splitlines()
        assert code == 0
        assert len(lines) == 3
        assert lines[0].startswith("(bottom)")
        assert "type1(mid(2,n))" in lines[1]

    def test_dot_output(self, capsys):
        code, out, _ = run(capsys, "chain", "--dot", "--type", "1",
                           "--depth", "1", "--lo", "2", "--hi", "n")
        assert code == 0
        assert out.startswith("digraph chain {")

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "chain.json"
        code, out, _ = run(capsys, "--json", "chain", "--type", "2",
                           "--depth", "1", "--lo", "2", "--hi", "log",
                           "--out", str(target))
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["chain"]["entries"][1]["expr"] == "type2(mid(2,log))"

    def test_half_gap_is_usage_error(self, capsys):
        code, _, err = run(capsys, "chain", "--lo", "2")
        assert code == 3
        assert "--lo and --hi" in err


class TestLookup:
    def test_entry_line(self, capsys):
        code, out, _ = run(capsys, "lookup", "--type", "1", "--depth", "2",
                           "--lo", "2", "--hi", "n", "11")
        assert code == 0
        assert out == "11  val=3/4  type1(mid(mid(2,n),n))  depth=2"

    def test_missing_address(self, capsys):
        code, _, err = run(capsys, "lookup", "--type", "1", "--depth", "1",
                           "--lo", "2", "--hi", "n", "0110")
        assert code == 1
        assert "0110" in err


class TestDescending:
    def test_log_under_logstar(self, capsys):
        code, out, _ = run(capsys, "desc", "log", "logstar", "--length", "3")
        assert (code, out) == (0, "logstar > log(logstar) > log{2}(logstar)")

    def test_oversized_outer_factor(self, capsys):
        code, _, err = run(capsys, "desc", "n", "log")
        assert code == 1
        assert "outer factor too large" in err


class TestOrderCodec:
    def test_cut_to_sequence(self, capsys):
        code, out, _ = run(capsys, "cut", "incl:101")
        assert (code, out) == (0, "101(0)")

    def test_sequence_to_cut(self, capsys):
        code, out, _ = run(capsys, "cantor", "1010(1)")
        assert (code, out) == (0, "excl:1011")

    def test_real_embedding(self, capsys):
        code, out, _ = run(capsys, "cantor", "--from-real", "3/8")
        assert (code, out) == (0, "011(0)")

    def test_exactly_one_input(self, capsys):
        code, _, err = run(capsys, "cantor", "101(0)", "--from-real", "1/2")
        assert code == 3


class TestExport:
    def test_document_sections(self, capsys):
        code, out, _ = run(capsys, "export", "--type", "1", "--depth", "1",
                           "--lo", "2", "--hi", "n")
        doc = json.loads(out)
        assert code == 0
        assert sorted(doc.keys()) == ["chain", "closures", "cuts", "dot"]
        assert doc["cuts"][0]["cut"] == "bottom"


class TestConfigPlumbing:
    def test_env_budget_echoed(self, capsys, monkeypatch):
        monkeypatch.setenv("BOUNDCALC_BUDGET_BITS", "4096")
        code, out, _ = run(capsys, "--json", "eval", "n", "--n", "7")
        assert code == 0
        assert json.loads(out)["config"]["budget_bits"] == 4096
        monkeypatch.delenv("BOUNDCALC_BUDGET_BITS")
        run(capsys, "eval", "n", "--n", "7")  # restore the default budget

    def test_config_file_override(self, capsys, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"power_cap": 4}))
        code, out, _ = run(capsys, "--json", "--config", str(path),
                           "eval", "n", "--n", "7")
        assert json.loads(out)["config"]["power_cap"] == 4

    def test_unknown_subcommand_exits_three(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 3
