"""Enclosure arithmetic: exactness, soundness, and the rounded primitives.

Oracle values marked [DERIVED] were computed by the brute-force integer
helpers at the bottom of this file (independent reimplementations), then
frozen. Tower identities follow from 2^^k being a power of two at every
level, so each rounded log drops exactly one level.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from boundcalc.numeral import (
    Numeral,
    _align,
    _clog_int,
    _floor_log2,
    _logstar_int,
    _mlog_int,
    hull,
)


# -- independent integer oracles -------------------------------------------


def oracle_clog(n: int) -> int:
    """Least m >= 1 with 2^m >= n (and 1 for n <= 1), by linear search."""
    if n <= 1:
        return 1
    m = 1
    while 2**m < n:
        m += 1
    return m


def oracle_mlog(n: int) -> int:
    if n == 0:
        return 0
    m = 0
    while 2 ** (m + 1) <= n:
        m += 1
    return m


def oracle_logstar(n: int) -> int:
    if n <= 2:
        return 1
    c = 0
    while n > 1:
        n = oracle_clog(n)
        c += 1
    return c


def oracle_tower(k: int) -> int:
    v = 1
    for _ in range(k):
        v = 2**v
    return v


# -- primitive integer helpers ----------------------------------------------


def test_clog_matches_oracle():
    for n in range(0, 5000):
        assert _clog_int(n) == oracle_clog(n), n


def test_mlog_matches_oracle():
    for n in range(0, 5000):
        assert _mlog_int(n) == oracle_mlog(n), n


def test_logstar_matches_oracle():
    for n in range(0, 100000, 37):
        assert _logstar_int(n) == oracle_logstar(n), n


def test_frozen_primitive_values():
    # [DERIVED] via the oracles above.
    assert _clog_int(0) == 1
    assert _clog_int(1) == 1
    assert _clog_int(5) == 3
    assert _clog_int(16) == 4
    assert _clog_int(17) == 5
    assert _mlog_int(0) == 0
    assert _mlog_int(1) == 0
    assert _mlog_int(16) == 4
    assert _mlog_int(17) == 4
    assert _logstar_int(0) == 1
    assert _logstar_int(1) == 1
    assert _logstar_int(2) == 1
    assert _logstar_int(3) == 2
    assert _logstar_int(4) == 2
    assert _logstar_int(5) == 3
    assert _logstar_int(16) == 3
    assert _logstar_int(17) == 4
    assert _logstar_int(65536) == 4
    assert _logstar_int(65537) == 5


def test_floor_log2_exact():
    for e in range(0, 80):
        assert _floor_log2(Fraction(2**e)) == e
        assert _floor_log2(Fraction(2**e + 1)) == (e if e > 0 else 1)
        assert _floor_log2(Fraction(1, 2**e)) == -e
    assert _floor_log2(Fraction(3, 4)) == -1
    assert _floor_log2(Fraction(5)) == 2


# -- construction and canonical form ------------------------------------------


def test_from_int_roundtrip():
    for n in [0, 1, 2, 3, 16, 65535, 65536, 2**64, 2**1000]:
        v = Numeral.from_int(n)
        assert v.is_exact_nat()
        assert v.to_int() == n


def test_tower_small_materialize():
    # T(1)..T(4) fit comfortably; T(5) = 2^65536 still fits the default budget.
    for k in range(1, 6):
        t = Numeral.tower(k)
        assert t.is_exact_nat(), k
        assert t.to_int() == oracle_tower(k), k


def test_tower_six_symbolic():
    t6 = Numeral.tower(6)
    assert t6.h == 1
    assert t6.exact
    assert t6.lo == Fraction(2**65536)


def test_exp2_canon_lowering():
    v = Numeral.from_int(10).exp2()
    assert v.is_exact_nat()
    assert v.to_int() == 1024


# -- add / mul / pow ------------------------------------------------------------


def test_add_exact_small():
    a = Numeral.from_int(100)
    b = Numeral.from_int(28)
    assert a.add(b).to_int() == 128


def test_add_small_onto_tower():
    t6 = Numeral.tower(6)
    bumped = t6.add(Numeral.from_int(1))
    # Enclosure must contain T6 + 1 and stay below T6 * 2. The +1 itself is
    # below resolution at this scale, so comparing back against T6 is
    # honestly ambiguous rather than strictly greater.
    assert t6.le(bumped) is True
    assert bumped.le(t6) is None
    two_t6 = t6.mul(Numeral.from_int(2))
    assert bumped.le(two_t6) is True


def test_add_two_towers():
    t6 = Numeral.tower(6)
    s = t6.add(t6)
    # T6 + T6 = 2^(65536+1) at the top level: enclosure must contain it.
    exact = Numeral(1, Fraction(2**65536 + 1), Fraction(2**65536 + 1))
    assert _contains(s, exact)


def test_mul_exact():
    assert Numeral.from_int(16).mul(Numeral.from_int(4)).to_int() == 64
    assert Numeral.from_int(0).mul(Numeral.tower(6)).to_int() == 0


def test_mul_big_budget_rollover():
    # (2^65536)^2 = 2^131072: exceeds nothing, exact int path if budget allows.
    t5 = Numeral.tower(5)
    sq = t5.mul(t5)
    # 2^131072 has 131073 bits <= default budget (1 Mi bits): exact.
    assert sq.is_exact_nat()
    assert sq.to_int() == 2**131072


def test_pow_int_exact_and_rollover():
    v = Numeral.from_int(2).pow_int(10)
    assert v.to_int() == 1024
    t5 = Numeral.tower(5)
    big = t5.pow_int(65536)  # 2^(65536*65536) = 2^(2^32): beyond budget
    assert big.h >= 1
    expected = Numeral.from_int(2**32).exp2()
    assert _contains(big, expected)
    assert big.exact


def test_pow_zero_and_one():
    t6 = Numeral.tower(6)
    assert t6.pow_int(0).to_int() == 1
    assert t6.pow_int(1) is t6


# -- rounded logs on exact ints ----------------------------------------------------


def test_mlog_log_small_ints():
    for n in range(0, 300):
        v = Numeral.from_int(n)
        assert v.mlog().to_int() == oracle_mlog(n), n
        assert v.log().to_int() == oracle_clog(n), n
        assert v.logstar().to_int() == oracle_logstar(n), n
        assert v.msqrt().to_int() == math.isqrt(n), n


def test_log_tower_drops_level_exactly():
    # log(T(k)) = mlog(T(k)) = T(k-1) exactly, all k.
    for k in range(2, 7):
        t = Numeral.tower(k)
        prev = Numeral.tower(k - 1)
        assert t.log().cmp(prev) == 0, k
        assert t.mlog().cmp(prev) == 0, k


def test_logstar_towers():
    # [PAPER] log*(2^^k) = k.
    for k in range(1, 7):
        assert Numeral.tower(k).logstar().to_int() == k, k


def test_logstar_tower_plus_one():
    t4 = Numeral.tower(4)  # 65536
    assert t4.add(Numeral.from_int(1)).logstar().to_int() == 5


def test_msqrt_exact_even_exponent():
    v = Numeral.from_int(2**16)
    assert v.msqrt().to_int() == 2**8
    t6 = Numeral.tower(6)
    r = t6.msqrt()
    assert r.exact
    expected = Numeral(1, Fraction(2**65535), Fraction(2**65535))
    assert r.cmp(expected) == 0


def test_msqrt_odd_exponent_interval():
    v = Numeral.from_int(2**17)
    assert v.msqrt().to_int() == math.isqrt(2**17)


def test_msqrt_huge_inexact_sound():
    # msqrt(T6 * 2) : exponent 65537 odd, enclosure must contain 2^32768.5-ish
    t6 = Numeral.tower(6)
    v = t6.mul(Numeral.from_int(2))
    r = v.msqrt()
    low = Numeral(1, Fraction(2**65536 // 2), Fraction(2**65536 // 2))
    hi = Numeral(1, Fraction(2**65536 // 2 + 2), Fraction(2**65536 // 2 + 2))
    assert r.le(hi) is True
    assert low.le(r) in (True, None)


# -- comparison --------------------------------------------------------------------


def test_cmp_separated_scales():
    t5 = Numeral.tower(5)
    t6 = Numeral.tower(6)
    assert t5.le(t6) is True
    assert t6.le(t5) is False
    assert t5.cmp(t6) == -1
    assert t6.cmp(t6) == 0


def test_cmp_overlapping_none():
    a = Numeral.interval(10, 20)
    b = Numeral.interval(15, 25)
    assert a.le(b) is None
    assert a.cmp(b) is None


def test_cmp_zero_edges():
    z = Numeral.from_int(0)
    t6 = Numeral.tower(6)
    assert z.le(t6) is True
    assert t6.le(z) is False
    assert z.le(z) is True
    assert z.cmp(z) == 0


def test_align_mixed_heights():
    a = Numeral.from_int(2**40)
    b = Numeral.tower(6)
    x, y = _align(a, b)
    assert x.h == y.h
    assert a.le(b) is True


def test_hull():
    a = Numeral.from_int(5)
    b = Numeral.from_int(9)
    h = hull(a, b)
    assert h.le(Numeral.from_int(9)) is True
    assert Numeral.from_int(5).le(h) is True
    assert h.cmp(Numeral.from_int(4)) == 1
    assert h.cmp(Numeral.from_int(10)) == -1


# -- soundness property sweep -------------------------------------------------------


def test_enclosure_soundness_random():
    """Every op's enclosure must contain the true integer value."""
    rng = random.Random(20260817)
    for _ in range(400):
        n = rng.choice(
            [rng.randrange(0, 10), rng.randrange(0, 2**10), 2 ** rng.randrange(1, 40)]
        )
        m = rng.choice([rng.randrange(1, 100), 2 ** rng.randrange(0, 20)])
        vn, vm = Numeral.from_int(n), Numeral.from_int(m)
        checks = [
            (vn.add(vm), n + m),
            (vn.mul(vm), n * m),
            (vn.mlog(), oracle_mlog(n)),
            (vn.log(), oracle_clog(n)),
            (vn.msqrt(), math.isqrt(n)),
            (vn.logstar(), oracle_logstar(n)),
            (vn.pow_int(3), n**3),
        ]
        for got, true in checks:
            assert _contains(got, Numeral.from_int(true)), (n, m, got.render(), true)


def test_render_forms():
    assert Numeral.from_int(42).render() == "42"
    assert Numeral.tower(6).render() == "2^2^65536"
    assert "2^" in Numeral.tower(5).render()


def _contains(enc: Numeral, point: Numeral) -> bool:
    """point's value certainly lies inside enc's enclosure."""
    a, b = _align(enc, point)
    return a.lo <= b.lo and b.hi <= a.hi


def test_budget_guard():
    with pytest.raises(ValueError):
        Numeral.from_int(2 ** (2**21))
