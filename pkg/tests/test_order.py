"""Word order, cuts and the sequence codec."""
from __future__ import annotations

from fractions import Fraction as F

import pytest

from boundcalc.order import (
    bottom_cut,
    cantor_cmp,
    cantor_to_cut,
    cut_cmp,
    cut_contains,
    cut_to_cantor,
    dyadic_str,
    enumerate_words,
    excl_cut,
    export_order,
    finite_cut,
    incl_cut,
    lex_cmp,
    make_cantor,
    parse_cantor,
    parse_cut,
    real_to_cantor,
    seq_value,
    simplest_between,
    top_cut,
    val,
    word_for_value,
)


class TestWords:
    def test_valuation_anchors(self):
        assert val("") == 0
        assert val("1") == F(1, 2)
        assert val("011") == F(3, 8)

    def test_lex_anchors(self):
        assert lex_cmp("", "1") == -1
        assert lex_cmp("011", "1") == -1
        assert lex_cmp("101", "11") == -1
        assert lex_cmp("11", "11") == 0

    def test_rejects_words_outside_the_class(self):
        with pytest.raises(ValueError):
            lex_cmp("10", "1")
        with pytest.raises(ValueError):
            val("abc")

    def test_val_agrees_with_lex_exhaustively(self):
        words = list(enumerate_words(10))
        assert len(words) == 1024
        by_val = sorted(words, key=val)
        assert by_val == sorted(words, key=tuple)
        vals = [val(w) for w in by_val]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_word_value_round_trip(self):
        for w in enumerate_words(8):
            assert word_for_value(val(w)) == w

    def test_simplest_between(self):
        assert simplest_between(F(0), F(1)) == "1"
        assert simplest_between(F(0), F(1, 2)) == "01"
        assert simplest_between(F(1, 2), F(1)) == "11"
        assert simplest_between(F(3, 8), F(5, 8)) == "1"

    def test_simplest_word_lies_strictly_inside(self):
        import random

        rng = random.Random(11)
        for _ in range(200):
            a = F(rng.randrange(0, 1 << 12), 1 << 12)
            b = F(rng.randrange(0, 1 << 12), 1 << 12)
            lo, hi = min(a, b), max(a, b)
            if lo == hi:
                continue
            w = simplest_between(lo, hi)
            assert lo < val(w) < hi

    def test_dyadic_rendering(self):
        assert dyadic_str(F(0)) == "0"
        assert dyadic_str(F(1)) == "1"
        assert dyadic_str(F(3, 8)) == "3/2^3"


class TestCuts:
    def test_membership_semantics(self):
        assert cut_contains(bottom_cut(), "")
        assert not cut_contains(bottom_cut(), "1")
        assert cut_contains(incl_cut("1"), "1")
        assert not cut_contains(excl_cut("1"), "1")
        assert cut_contains(excl_cut("1"), "011")
        assert cut_contains(top_cut(), "111")

    def test_inclusive_of_empty_word_is_bottom(self):
        assert incl_cut("") == bottom_cut()
        with pytest.raises(ValueError):
            excl_cut("")

    def test_containment_order_matches_membership(self):
        # membership horizon exceeds the cut words so distinct cuts separate
        words = list(enumerate_words(5))
        cuts = [bottom_cut(), top_cut()]
        for w in enumerate_words(4):
            if w:
                cuts.append(incl_cut(w))
                cuts.append(excl_cut(w))
        for c1 in cuts:
            for c2 in cuts:
                sub = all(
                    cut_contains(c2, w) for w in words if cut_contains(c1, w)
                )
                sup = all(
                    cut_contains(c1, w) for w in words if cut_contains(c2, w)
                )
                got = cut_cmp(c1, c2)
                if sub and sup:
                    assert got == 0, (c1, c2)
                elif sub:
                    assert got == -1, (c1, c2)
                elif sup:
                    assert got == 1, (c1, c2)

    def test_two_cuts_per_word_with_nothing_between(self):
        for w in enumerate_words(4):
            if not w:
                continue
            assert cut_cmp(excl_cut(w), incl_cut(w)) == -1

    def test_finite_table_requires_downward_closure(self):
        with pytest.raises(ValueError):
            finite_cut(["", "1"], 2)
        c = finite_cut(["", "01", "1"], 2)
        assert cut_cmp(c, incl_cut("1")) == 0

    def test_parse_cut_text_forms(self):
        assert parse_cut("bottom") == bottom_cut()
        assert parse_cut("top") == top_cut()
        assert parse_cut("incl:101") == incl_cut("101")
        assert parse_cut("excl:11") == excl_cut("11")
        with pytest.raises(ValueError):
            parse_cut("between:1")


class TestCodec:
    def test_anchor_translations(self):
        assert cut_to_cantor(bottom_cut()).text() == "(0)"
        assert cut_to_cantor(top_cut()).text() == "(1)"
        assert cut_to_cantor(excl_cut("1")).text() == "0(1)"
        assert cut_to_cantor(incl_cut("1")).text() == "1(0)"
        assert cut_to_cantor(excl_cut("11")).text() == "10(1)"

    def test_round_trip_on_principal_cuts(self):
        seen = 0
        for w in enumerate_words(8):
            for c in [incl_cut(w)] + ([excl_cut(w)] if w else []):
                assert cantor_to_cut(cut_to_cantor(c)) == c
                seen += 1
        assert seen == 511

    def test_round_trip_on_canonical_sequences(self):
        seen = 0
        prefixes = [""] + [
            format(i, f"0{k}b") for k in range(1, 10) for i in range(1 << k)
        ]
        for p in prefixes:
            for t in (0, 1):
                f = make_cantor(p, t)
                if f.prefix != p:
                    continue
                assert cut_to_cantor(cantor_to_cut(f)) == f
                seen += 1
        assert seen == 1024

    def test_codec_is_monotone(self):
        cuts = [bottom_cut(), top_cut()]
        for w in enumerate_words(5):
            if w:
                cuts.append(incl_cut(w))
                cuts.append(excl_cut(w))
        for c1 in cuts:
            for c2 in cuts:
                assert cut_cmp(c1, c2) == cantor_cmp(
                    cut_to_cantor(c1), cut_to_cantor(c2)
                )

    def test_saturated_finite_table_is_rejected(self):
        words = list(enumerate_words(3))
        with pytest.raises(ValueError, match="length bound 3"):
            cut_to_cantor(finite_cut(words, 3))

    def test_sequence_text_forms(self):
        assert parse_cantor("101(0)") == make_cantor("101", 0)
        assert parse_cantor("(1)") == make_cantor("", 1)
        assert make_cantor("100", 0).prefix == "1"
        with pytest.raises(ValueError):
            parse_cantor("101")


class TestRealEmbedding:
    def test_endpoint_and_half_anchors(self):
        assert real_to_cantor(F(0)).text() == "(0)"
        assert real_to_cantor(F(1)).text() == "(1)"
        assert real_to_cantor(F(1, 2)).text() == "1(0)"

    def test_rejects_non_dyadic_and_out_of_range(self):
        with pytest.raises(ValueError):
            real_to_cantor(F(1, 3))
        with pytest.raises(ValueError):
            real_to_cantor(F(3, 2))

    def test_order_embedding_exhaustive(self):
        ds = [F(p, 1 << 10) for p in range((1 << 10) + 1)]
        seqs = [real_to_cantor(d) for d in ds]
        assert all(
            cantor_cmp(a, b) == -1 for a, b in zip(seqs, seqs[1:])
        )

    def test_expansion_value_round_trip(self):
        for p in range(0, 257):
            r = F(p, 256)
            assert seq_value(real_to_cantor(r)) == r


class _Entry:
    def __init__(self, address, v, bound=None):
        self.address = address
        self.val = v
        self.bound = bound


class _Chain:
    def __init__(self, entries):
        self.entries = entries


class TestExport:
    def test_document_shape(self):
        ch = _Chain([
            _Entry("", F(0)),
            _Entry("1", F(1, 2)),
            _Entry("top", F(1)),
        ])
        doc = export_order(ch, [bottom_cut(), incl_cut("1"), top_cut()])
        assert [r["address"] for r in doc["chain"]] == ["", "1", "top"]
        assert doc["cuts"][0]["cut"] == "bottom"
        assert doc["cuts"][1]["cantor"] == "1(0)"
        assert doc["closures"][1]["closure"] == ["", "1"]
        assert '"1" -> "top"' in doc["dot"]
