"""Hybrid exact/enclosure arithmetic for very large naturals.

A Numeral is a height-tagged enclosure (h, lo, hi): the represented value v
satisfies E_h(lo) <= v <= E_h(hi), where E(x) = 2^x over the reals and E_h is
the h-fold iterate. Height 0 is a plain rational interval; a point interval
(lo == hi) is an exact value. Integers are materialized only while they fit
the bit budget; beyond that every operation works on exponents one level
down, rounding outward so enclosures never lie.

Comparisons return None when enclosures overlap: callers must treat that as
"ambiguous", never as an answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import config

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Module-wide materialization budget, in bits. The CLI overrides this once at
# startup; BOUNDCALC_BUDGET_BITS is already folded into config.DEFAULT.
BUDGET_BITS = config.DEFAULT.budget_bits


def set_budget(bits: int) -> None:
    global BUDGET_BITS
    if bits < 64:
        raise ValueError(f"budget too small: {bits}")
    BUDGET_BITS = bits


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _floor_log2(x: Fraction) -> int:
    """Largest e with 2^e <= x, for x > 0. Exact."""
    if x <= 0:
        raise ValueError("log2 of non-positive value")
    p, q = x.numerator, x.denominator
    e = p.bit_length() - q.bit_length()
    while not _pow2_le(e, p, q):
        e -= 1
    while _pow2_le(e + 1, p, q):
        e += 1
    return e


def _pow2_le(e: int, p: int, q: int) -> bool:
    """2^e <= p/q, exactly."""
    if e >= 0:
        return (q << e) <= p
    return q <= (p << -e)


def _is_pow2(x: Fraction) -> bool:
    return x > 0 and x.numerator & (x.numerator - 1) == 0 and (
        x.denominator & (x.denominator - 1) == 0
    )


@dataclass(frozen=True, repr=False)
class Numeral:
    h: int
    lo: Fraction
    hi: Fraction

    def __repr__(self) -> str:
        return f"Numeral({self.render()})"

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Numeral":
        if n < 0:
            raise ValueError("naturals only")
        if n.bit_length() > BUDGET_BITS:
            raise ValueError("integer exceeds bit budget; build it via exp2")
        f = Fraction(n)
        return Numeral(0, f, f)

    @staticmethod
    def tower(k: int) -> "Numeral":
        """T(k) = 2^^k, the k-fold exponential tower; k >= 1."""
        if k < 1:
            raise ValueError("tower height must be >= 1")
        out = Numeral.from_int(1)
        for _ in range(k):
            out = out.exp2()
        return out

    @staticmethod
    def interval(lo: int, hi: int) -> "Numeral":
        if lo > hi or lo < 0:
            raise ValueError("bad interval")
        return Numeral(0, Fraction(lo), Fraction(hi))._canon()

    # -- predicates ----------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def is_exact_nat(self) -> bool:
        return self.h == 0 and self.exact and _is_int(self.lo)

    def to_int(self) -> int:
        if not self.is_exact_nat():
            raise ValueError(f"not an exact natural: {self.render()}")
        return int(self.lo)

    def is_zero(self) -> bool:
        return self.h == 0 and self.exact and self.lo == 0

    def parity(self) -> int | None:
        """0 even, 1 odd, None unknown."""
        if self.is_exact_nat():
            return int(self.lo) & 1
        if self.h >= 1 and self.exact and _is_int(self.lo) and self.lo >= 0:
            return 0  # exact tower with integral top is a power of two >= 2
        return None

    # -- canonical form -------------------------------------------------------

    def _canon(self) -> "Numeral":
        h, lo, hi = self.h, self.lo, self.hi
        while h >= 1 and _is_int(lo) and _is_int(hi) and 0 <= lo and hi <= BUDGET_BITS:
            lo = Fraction(1 << int(lo))
            hi = Fraction(1 << int(hi))
            h -= 1
        if h == self.h:
            return self
        return Numeral(h, lo, hi)

    # -- internal helpers ------------------------------------------------------

    def _lg(self) -> "Numeral":
        """Enclosure of the real log2 of the value (drops one level)."""
        if self.h >= 1:
            return Numeral(self.h - 1, self.lo, self.hi)
        if self.lo <= 0:
            raise ValueError("log2 of enclosure touching 0")
        lo_e = Fraction(_floor_log2(self.lo))
        e2 = _floor_log2(self.hi)
        hi_e = Fraction(e2) if _is_pow2(self.hi) else Fraction(e2 + 1)
        return Numeral(0, lo_e, hi_e)

    def _value_lower(self, cap_bits: int = 64) -> int:
        """Integer lower bound on the value, saturated at 2^cap_bits."""
        if self.h == 0:
            v = math.floor(self.lo)
            return min(max(v, 0), 1 << cap_bits)
        t = self._lg()._value_lower(cap_bits=20)
        if t >= cap_bits:
            return 1 << cap_bits
        return 1 << max(t, 0)

    def _shift_top(self, dlo: Fraction, dhi: Fraction) -> "Numeral":
        """Enclose value + d for d in [dlo, dhi]; dlo <= 0 <= dhi.

        Sound whenever |d| <= value/2; callers only pass counting-sized
        deltas onto large values (or land in the exact level-0 branch).
        """
        if dlo == 0 and dhi == 0:
            return self
        if self.h == 0:
            return Numeral(0, self.lo + dlo, self.hi + dhi)._canon()
        # value = 2^t. 2^(t +- x) covers value +- d once x >= 2d/value.
        v_low = self._value_lower()
        lo, hi = self.lo, self.hi
        exp = self._lg()
        if dhi > 0:
            x = 2 * dhi / v_low
            bumped = exp._shift_top(_ZERO, x)
            if bumped.h != exp.h:
                return bumped.exp2()
            hi = bumped.hi
        if dlo < 0:
            x = 2 * (-dlo) / v_low
            dropped = exp._shift_top(-x, _ZERO)
            if dropped.h != exp.h:
                lo = dropped.lo if dropped.h == exp.h else exp.lo - 1
            else:
                lo = dropped.lo
        return Numeral(self.h, lo, hi)._canon()

    def _try_small(self, cap_bits: int = 64) -> "Numeral | None":
        """Materialize to a level-0 integer interval if comfortably small."""
        if self.h == 0:
            return self
        exp = self._lg()._try_small(cap_bits=16)
        if exp is None or exp.hi > cap_bits:
            return None
        lo_n = Fraction(2) ** math.floor(exp.lo) if exp.lo >= 0 else _ZERO
        hi_n = Fraction(2) ** math.ceil(exp.hi)
        if self.exact and _is_int(self.lo) and self.h == 1:
            v = Fraction(2) ** int(self.lo)
            return Numeral(0, v, v)
        return Numeral(0, lo_n, hi_n)

    # -- arithmetic -------------------------------------------------------------

    def exp2(self) -> "Numeral":
        return Numeral(self.h + 1, self.lo, self.hi)._canon()

    def add(self, other: "Numeral") -> "Numeral":
        a, b = self, other
        if a.h == 0 and b.h == 0:
            return Numeral(0, a.lo + b.lo, a.hi + b.hi)._canon()
        if a.h == 0:
            a, b = b, a
        if b.h >= 1:
            small = b._try_small()
            if small is not None:
                b = small
        if b.h == 0:
            if b.is_zero():
                return a
            if Fraction(a._value_lower()) >= 2 * b.hi:
                return a._shift_top(b.lo, b.hi)
            small = a._try_small()
            if small is not None:
                return small.add(b)
            return a._shift_top(b.lo, b.hi)
        # Two genuinely large towers: v_a + v_b <= 2 * max <= 2^(lg(max)+1).
        a, b = _align(a, b)
        lo = max(a.lo, b.lo)
        top = max(a.hi, b.hi)
        bumped = Numeral(a.h - 1, top, top)._shift_top(_ZERO, _ONE).exp2()
        return _hull(Numeral(a.h, lo, lo), bumped)

    def mul(self, other: "Numeral") -> "Numeral":
        a, b = self, other
        if a.is_zero() or b.is_zero():
            return Numeral.from_int(0)
        if a.h == 0 and b.h == 0:
            if _frac_bits(a.hi) + _frac_bits(b.hi) <= BUDGET_BITS:
                return Numeral(0, a.lo * b.lo, a.hi * b.hi)._canon()
        za = a.h == 0 and a.lo < 1
        zb = b.h == 0 and b.lo < 1
        aa = Numeral(0, _ONE, max(_ONE, a.hi)) if za else a
        bb = Numeral(0, _ONE, max(_ONE, b.hi)) if zb else b
        core = aa._lg().add(bb._lg()).exp2()
        if za or zb:
            floor_lo = a.lo * b.lo if (a.h == 0 and b.h == 0) else _ZERO
            return _hull(Numeral(0, max(floor_lo, _ZERO), max(floor_lo, _ONE)), core)
        return core

    def pow(self, e: "Numeral") -> "Numeral":
        """Natural power with a Numeral exponent: encloses v_self ** v_e."""
        if e.is_zero():
            return Numeral.from_int(1)
        if self.is_zero():
            return Numeral.from_int(0)
        if self.h == 0 and self.exact and self.lo == 1:
            return Numeral.from_int(1)
        if (
            e.is_exact_nat()
            and self.is_exact_nat()
            and _frac_bits(self.lo) * int(e.lo) <= BUDGET_BITS
        ):
            return Numeral.from_int(int(self.lo) ** int(e.lo))
        base = self
        if base.h == 0 and base.lo < 1:
            capped = Numeral(0, _ONE, max(_ONE, base.hi))
            return _hull(Numeral.from_int(0), e.mul(capped._lg()).exp2())
        return e.mul(base._lg()).exp2()

    def pow_int(self, k: int) -> "Numeral":
        if k < 0:
            raise ValueError("natural powers only")
        if k == 0:
            return Numeral.from_int(1)
        if k == 1:
            return self
        if self.h == 0 and _frac_bits(self.hi) * k <= BUDGET_BITS:
            return Numeral(0, self.lo**k, self.hi**k)._canon()
        if self.h == 0 and self.lo < 1:
            if self.hi < 1:
                return Numeral(0, self.lo**k, self.hi**k)
            capped = Numeral(0, _ONE, self.hi)
            return _hull(Numeral.from_int(0), capped.pow_int(k))
        return self._lg().mul(Numeral.from_int(k)).exp2()

    # -- rounded logarithms --------------------------------------------------------

    def mlog(self) -> "Numeral":
        """floor(log2 v); mlog(0) = 0."""
        if self.h == 0:
            lo_n, hi_n = _nat_bounds(self)
            return Numeral.interval(_mlog_int(lo_n), _mlog_int(hi_n))
        if self.exact and _is_int(self.lo):
            return Numeral(self.h - 1, self.lo, self.hi)._canon()
        return self._lg()._shift_top(-_ONE, _ZERO)._canon()

    def log(self) -> "Numeral":
        """ceil(log2 v); log(0) = log(1) = 1."""
        if self.h == 0:
            lo_n, hi_n = _nat_bounds(self)
            return Numeral.interval(_clog_int(lo_n), _clog_int(hi_n))
        if self.exact and _is_int(self.lo):
            return Numeral(self.h - 1, self.lo, self.hi)._canon()
        return self._lg()._shift_top(_ZERO, _ONE)._canon()

    def msqrt(self) -> "Numeral":
        """floor(sqrt v)."""
        if self.h == 0:
            lo_n, hi_n = _nat_bounds(self)
            return Numeral.interval(math.isqrt(lo_n), math.isqrt(hi_n))
        half = _halve_value(self._lg())
        out = half.exp2()
        if half.h == 0 and half.exact and _is_int(half.lo) and half.lo >= 0:
            return out  # exact power of two
        return out._shift_top(-_ONE, _ZERO)._canon()

    def logstar(self) -> "Numeral":
        """log*(v): least m >= 1 with log^(m)(v) = 1; log*(0) = log*(1) = 1."""
        if self.h == 0:
            lo_n, hi_n = _nat_bounds(self)
            return Numeral.interval(_logstar_int(lo_n), _logstar_int(hi_n))
        lo_b = _logstar_tower(self.h, self.lo, lower=True)
        hi_b = _logstar_tower(self.h, self.hi, lower=False)
        return Numeral.interval(lo_b, hi_b)

    # -- comparison -------------------------------------------------------------------

    def le(self, other: "Numeral") -> bool | None:
        """True if certainly v_self <= v_other, False if certainly >, else None."""
        if self.is_zero():
            return True
        if other.is_zero():
            if self.h >= 1 or self.lo > 0:
                return False
            return True if self.hi <= 0 else None
        a, b = _align(self, other)
        if a.hi <= b.lo:
            return True
        if a.lo > b.hi:
            return False
        if a.exact and b.exact and a.lo == b.lo:
            return True
        return None

    def cmp(self, other: "Numeral") -> int | None:
        """-1 / 0 / 1 when decidable, else None."""
        le1 = self.le(other)
        le2 = other.le(self)
        if le1 and le2:
            return 0
        if le1 is True:
            return -1
        if le2 is True:
            return 1
        return None

    # -- rendering ------------------------------------------------------------------------

    def render(self) -> str:
        if self.h == 0:
            if self.exact:
                return _render_frac(self.lo)
            return f"[{_render_frac(self.lo)}..{_render_frac(self.hi)}]"
        inner = Numeral(self.h - 1, self.lo, self.hi)
        if self.exact:
            return "2^" + inner.render()
        return "2^(" + inner.render() + ")"

    def __str__(self) -> str:
        return self.render()


def _render_frac(x: Fraction) -> str:
    if _is_int(x):
        n = int(x)
        if abs(n) > 0 and n.bit_length() > 64:
            e = _floor_log2(Fraction(abs(n)))
            if n > 0 and _is_pow2(Fraction(n)):
                return "2^" + _render_frac(Fraction(e))
            return f"~2^{e}"
        return str(n)
    if x.numerator.bit_length() > 64 or x.denominator.bit_length() > 64:
        if x > 0:
            return f"~2^{_floor_log2(x)}"
        return f"~-2^{_floor_log2(-x)}"
    return f"{x.numerator}/{x.denominator}"


def _frac_bits(x: Fraction) -> int:
    return max(abs(x.numerator).bit_length(), 1)


def _halve_value(x: Numeral) -> Numeral:
    """Enclosure of value/2."""
    if x.h == 0:
        return Numeral(0, x.lo / 2, x.hi / 2)
    return _dec_value(x._lg()).exp2()


def _dec_value(x: Numeral) -> Numeral:
    """Enclosure of value - 1 (exact at level 0)."""
    if x.h == 0:
        return Numeral(0, x.lo - 1, x.hi - 1)._canon()
    return x._shift_top(-_ONE, _ZERO)._canon()


def _hull(a: Numeral, b: Numeral) -> Numeral:
    x, y = _align(a, b)
    return Numeral(x.h, min(x.lo, y.lo), max(x.hi, y.hi))._canon()


def hull(a: Numeral, b: Numeral) -> Numeral:
    """Smallest common enclosure (used for ambiguous-branch evaluation)."""
    return _hull(a, b)


def _align(a: Numeral, b: Numeral) -> tuple[Numeral, Numeral]:
    while a.h < b.h:
        a = _raise_one(a)
    while b.h < a.h:
        b = _raise_one(b)
    return a, b


def _raise_one(a: Numeral) -> Numeral:
    # Log2 bounds on the top pair keep the enclosure: E_{h+1}(floor log2 lo)
    # = E_h(2^floor log2 lo) <= E_h(lo), and the ceiling likewise above.
    # Enclosures touching 0 clamp far down.
    if a.lo > 0:
        lo_e = Fraction(_floor_log2(a.lo))
    else:
        lo_e = Fraction(-BUDGET_BITS)
    if a.hi > 0:
        e2 = _floor_log2(a.hi)
        hi_e = Fraction(e2) if _is_pow2(a.hi) else Fraction(e2 + 1)
    else:
        hi_e = Fraction(-BUDGET_BITS)
    return Numeral(a.h + 1, lo_e, hi_e)


def _nat_bounds(a: Numeral) -> tuple[int, int]:
    """Integer bounds for a natural lying in a level-0 interval."""
    lo_n = max(0, math.ceil(a.lo))
    hi_n = max(lo_n, math.floor(a.hi))
    return lo_n, hi_n


def _mlog_int(n: int) -> int:
    return n.bit_length() - 1 if n >= 1 else 0


def _clog_int(n: int) -> int:
    if n <= 1:
        return 1
    return (n - 1).bit_length()


def _logstar_int(n: int) -> int:
    if n <= 2:
        return 1
    count = 0
    while n > 1:
        n = _clog_int(n)
        count += 1
    return count


def _logstar_tower(h: int, top: Fraction, lower: bool) -> int:
    """Bound log*(E_h(top)) from below (lower=True) or from above."""
    if lower:
        x = math.floor(top)
        if x >= 2:
            return h + _logstar_int(x)
        if x == 1:
            return h
        return max(1, h - 1)  # E_h(anything) exceeds the (h-2)-tower
    x = math.ceil(top)
    if x >= 2:
        return h + _logstar_int(x)
    return h  # E_h(top) <= E_h(1) = T(h)
