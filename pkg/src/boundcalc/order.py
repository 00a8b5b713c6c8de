"""Binary words, Dedekind cuts and the Cantor-sequence codec.

Words are finite bit strings that are empty or end in 1, ordered
lexicographically with the initial-piece rule.  The valuation reads a
word left to right, the i-th letter contributing 2^(-i); on this class
of words the valuation order and the lexicographic order agree, which
is checked exhaustively in the tests.

Cuts are lower segments of the word order, described finitely.  Every
cut supported here maps to an eventually constant 0/1 sequence and
back; the pair of translations is a bijection on its range.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator

# cut kinds
BOTTOM = "bottom"
TOP = "top"
INCL = "incl"
EXCL = "excl"
FINITE = "finite"


def is_word(w: str) -> bool:
    """Membership in the canonical class: empty, or bits ending in 1."""
    return w == "" or (set(w) <= {"0", "1"} and w.endswith("1"))


def require_word(w: str) -> str:
    if not is_word(w):
        raise ValueError(f"not a canonical word: {w!r}")
    return w


def lex_cmp(w1: str, w2: str) -> int:
    """Initial pieces sort low; otherwise the first differing bit decides."""
    require_word(w1)
    require_word(w2)
    for a, b in zip(w1, w2):
        if a != b:
            return -1 if a < b else 1
    if len(w1) == len(w2):
        return 0
    return -1 if len(w1) < len(w2) else 1


def val(w: str) -> Fraction:
    """Dyadic position of a word; order-faithful on the canonical class."""
    require_word(w)
    if not w:
        return Fraction(0)
    return Fraction(int(w, 2), 1 << len(w))


def word_for_value(v: Fraction) -> str:
    """Inverse of val on dyadics in [0, 1)."""
    if v == 0:
        return ""
    if not 0 < v < 1:
        raise ValueError(f"value out of range: {v}")
    den = v.denominator
    if den & (den - 1):
        raise ValueError(f"not dyadic: {v}")
    q = den.bit_length() - 1
    return format(v.numerator, f"0{q}b")


def enumerate_words(max_len: int) -> Iterator[str]:
    """All canonical words of length at most max_len, shortest first."""
    yield ""
    for length in range(1, max_len + 1):
        head_w = length - 1
        for head in range(1 << head_w):
            yield (format(head, f"0{head_w}b") if head_w else "") + "1"


def simplest_between(lo: Fraction, hi: Fraction) -> str:
    """Word whose value is the least-depth dyadic strictly inside (lo, hi)."""
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"bad interval ({lo}, {hi})")
    for q in range(1, 128):
        scale = 1 << q
        p = (lo * scale).__floor__() + 1
        if Fraction(p, scale) < hi:
            return format(p, f"0{q}b")
    raise ValueError(f"interval ({lo}, {hi}) too narrow")


def dyadic_str(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/2^{v.denominator.bit_length() - 1}"


# ---------------------------------------------------------------------------
# cuts

@dataclass(frozen=True)
class Cut:
    """Lower segment of the word order, finitely described."""

    kind: str
    word: str = ""
    words: frozenset[str] = frozenset()
    bound: int = 0

    def text(self) -> str:
        if self.kind in (BOTTOM, TOP):
            return self.kind
        if self.kind == FINITE:
            return f"finite(L={self.bound})"
        return f"{self.kind}:{self.word}"


def bottom_cut() -> Cut:
    return Cut(BOTTOM)


def top_cut() -> Cut:
    return Cut(TOP)


def incl_cut(w: str) -> Cut:
    """All words up to and including w; the empty word gives the bottom cut."""
    require_word(w)
    if w == "":
        return bottom_cut()
    return Cut(INCL, word=w)


def excl_cut(w: str) -> Cut:
    """All words strictly below w."""
    require_word(w)
    if w == "":
        raise ValueError("no word lies strictly below the empty word")
    return Cut(EXCL, word=w)


def finite_cut(words: Iterable[str], bound: int) -> Cut:
    """Explicit downward-closed table over words of length <= bound."""
    ws = frozenset(require_word(w) for w in words)
    if not ws:
        raise ValueError("cut table must be nonempty")
    if any(len(w) > bound for w in ws):
        raise ValueError("table word exceeds the length bound")
    for u in enumerate_words(bound):
        below = any(lex_cmp(u, w) <= 0 for w in ws)
        if below and u not in ws:
            raise ValueError(f"table not downward closed: missing {u!r}")
    return Cut(FINITE, words=ws, bound=bound)


def parse_cut(text: str) -> Cut:
    t = text.strip()
    if t == BOTTOM:
        return bottom_cut()
    if t == TOP:
        return top_cut()
    for kind, make in ((INCL, incl_cut), (EXCL, excl_cut)):
        if t.startswith(kind + ":"):
            return make(t[len(kind) + 1:])
    raise ValueError(f"cannot parse cut {text!r}")


def cut_contains(c: Cut, w: str) -> bool:
    require_word(w)
    if c.kind == BOTTOM:
        return w == ""
    if c.kind == TOP:
        return True
    if c.kind == INCL:
        return lex_cmp(w, c.word) <= 0
    if c.kind == EXCL:
        return lex_cmp(w, c.word) < 0
    return w in c.words


def _cut_key(c: Cut) -> tuple[Fraction, int]:
    # side marker: the exclusive cut at w sits just below the inclusive one
    if c.kind == BOTTOM:
        return Fraction(0), 1
    if c.kind == TOP:
        return Fraction(1), 0
    if c.kind == INCL:
        return val(c.word), 1
    if c.kind == EXCL:
        return val(c.word), -1
    m = max(c.words, key=val)
    return val(m), 1


def cut_cmp(c1: Cut, c2: Cut) -> int:
    """Containment order of lower segments."""
    k1, k2 = _cut_key(c1), _cut_key(c2)
    return -1 if k1 < k2 else (0 if k1 == k2 else 1)


# ---------------------------------------------------------------------------
# eventually constant 0/1 sequences

@dataclass(frozen=True)
class CantorSeq:
    """Finite prefix followed by a constant tail."""

    prefix: str
    tail: int

    def text(self) -> str:
        return f"{self.prefix}({self.tail})"

    def bit(self, i: int) -> int:
        return int(self.prefix[i]) if i < len(self.prefix) else self.tail


def make_cantor(prefix: str, tail: int) -> CantorSeq:
    """Canonical form: the prefix never ends with the tail bit."""
    if set(prefix) - {"0", "1"} or tail not in (0, 1):
        raise ValueError(f"bad sequence {prefix!r}/{tail}")
    prefix = prefix.rstrip(str(tail))
    return CantorSeq(prefix, tail)


def parse_cantor(text: str) -> CantorSeq:
    t = text.strip()
    if not (t.endswith("(0)") or t.endswith("(1)")):
        raise ValueError(f"cannot parse sequence {text!r}")
    return make_cantor(t[:-3], int(t[-2]))


def cantor_cmp(f1: CantorSeq, f2: CantorSeq) -> int:
    """Pointwise lexicographic order on the denoted infinite sequences."""
    horizon = max(len(f1.prefix), len(f2.prefix))
    for i in range(horizon):
        a, b = f1.bit(i), f2.bit(i)
        if a != b:
            return -1 if a < b else 1
    if f1.tail == f2.tail:
        return 0
    return -1 if f1.tail < f2.tail else 1


def seq_value(f: CantorSeq) -> Fraction:
    """The real number whose binary expansion the sequence spells."""
    base = Fraction(int(f.prefix, 2), 1 << len(f.prefix)) if f.prefix \
        else Fraction(0)
    if f.tail == 0:
        return base
    return base + Fraction(1, 1 << len(f.prefix))


# ---------------------------------------------------------------------------
# the codec

def cut_to_cantor(c: Cut) -> CantorSeq:
    """The sequence whose finite initial pieces are exactly the segment's
    cofinal words; constant tails cover every finitely describable cut."""
    if c.kind == BOTTOM:
        return make_cantor("", 0)
    if c.kind == TOP:
        return make_cantor("", 1)
    if c.kind == INCL:
        return make_cantor(c.word, 0)
    if c.kind == EXCL:
        return make_cantor(c.word[:-1] + "0", 1)
    m = max(c.words, key=val)
    if m == "1" * c.bound:
        raise ValueError(
            f"table saturated at length bound {c.bound}: the continuation "
            f"is not determined within it")
    return make_cantor(m, 0)


def cantor_to_cut(f: CantorSeq) -> Cut:
    f = make_cantor(f.prefix, f.tail)
    if f.prefix == "":
        return bottom_cut() if f.tail == 0 else top_cut()
    if f.tail == 0:
        return incl_cut(f.prefix)
    return excl_cut(f.prefix[:-1] + "1")


def real_to_cantor(r: Fraction) -> CantorSeq:
    """Binary expansion choosing the all-zero tail below one."""
    if not 0 <= r <= 1:
        raise ValueError(f"value out of range: {r}")
    den = r.denominator
    if den & (den - 1):
        raise ValueError(f"not dyadic: {r}")
    if r == 1:
        return make_cantor("", 1)
    return make_cantor(word_for_value(r), 0)


# ---------------------------------------------------------------------------
# export

def export_order(chain: Any, cuts: list[Cut]) -> dict[str, Any]:
    """Order-theoretic view of a generated chain: positions, downward
    closures, and the Cantor code of each requested cut."""
    entries = sorted(chain.entries, key=lambda e: e.val)
    rows = []
    for e in entries:
        bound = getattr(e, "bound", None)
        rows.append({
            "address": e.address,
            "val": dyadic_str(e.val),
            "expr": bound.render() if bound is not None else None,
        })
    closures = []
    for e in entries:
        below = [x.address for x in entries if x.val <= e.val]
        closures.append({"address": e.address, "closure": below})
    cut_rows = sorted(cuts, key=_cut_key)
    coded = [{"cut": c.text(), "cantor": cut_to_cantor(c).text(),
              "val": dyadic_str(_cut_key(c)[0])} for c in cut_rows]
    lines = ["digraph chain {", "  rankdir=LR;"]
    for a, b in zip(entries, entries[1:]):
        la = a.address or "bottom"
        lb = b.address or "bottom"
        lines.append(f'  "{la}" -> "{lb}";')
    lines.append("}")
    return {"chain": rows, "closures": closures, "cuts": coded,
            "dot": "\n".join(lines)}
