"""Symbolic growth classification over a graded alphabet of slow functions.

Every classifiable expression is assigned a sparse exponent vector over the
base functions

    b[(j, m)] = log^(m) after logstar^(j)        (j, m) in N x N,

so b[(0,0)] is n itself, b[(0,1)] is log, b[(0,2)] is log(log), b[(1,0)] is
logstar, b[(1,1)] is log(logstar), b[(2,0)] is logstar(logstar), and so on.
Ascending lexicographic key order is descending growth dominance: each base
crushes every later one, in the strong sense that any constant power of a
later base is below any positive power of an earlier one eventually.

Two classification maps are computed:

  factor_vec(e):  the power-product class of e itself, with rational
                  exponents. Defined for products of powers of the bases
                  (constants tracked as the empty vector); None for
                  expressions that are not such a product (midpoints,
                  exponentials with non-constant exponent, parity splits
                  whose branches differ in class).

  mlog_vec(e):    the power-product class of mlog(e). Defined strictly more
                  often: the floor-log of a midpoint or of n^alpha(n) is a
                  power product even though the function itself is not.

Soundness, used by the relation deciders:

  * equal factor vectors        =>  same order of growth (two-sided constant),
  * strictly smaller factor vec =>  quotient tends to 0,
  * equal mlog vectors          =>  each is bounded by a power of the other,
  * strictly smaller mlog vec   =>  every power of the left stays below the
                                    right eventually (when the right is
                                    unbounded).

Exponents never go negative; vector comparison is total.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .expr import (
    EXP2,
    ID,
    LOG,
    Add,
    Compose,
    Const,
    Exp2,
    Expr,
    Id,
    Iterate,
    Log,
    LogStar,
    MLog,
    MSqrt,
    Mid,
    Mul,
    ParityCase,
    PowConst,
    Type1,
    Type2,
    evaluate_int,
    make_compose,
    make_iterate,
)
from .numeral import Numeral
from . import expr as _expr

Key = tuple[int, int]
Vec = tuple[tuple[Key, Fraction], ...]  # sorted sparse vector, exps nonzero


def _mkvec(d: dict[Key, Fraction]) -> Vec:
    return tuple(sorted((k, v) for k, v in d.items() if v != 0))


EMPTY: Vec = ()


def vadd(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, v in b:
        out[k] = out.get(k, Fraction(0)) + v
    return _mkvec(out)


def vscale(a: Vec, c: Fraction | int) -> Vec:
    c = Fraction(c)
    if c == 0:
        return EMPTY
    return _mkvec({k: v * c for k, v in a})


def vavg(a: Vec, b: Vec) -> Vec:
    return vscale(vadd(a, b), Fraction(1, 2))


def lex_cmp(a: Vec, b: Vec) -> int:
    """-1 when a is the slower class, 0 equal, 1 faster."""
    da, db = dict(a), dict(b)
    for k in sorted(set(da) | set(db)):
        ea, eb = da.get(k, Fraction(0)), db.get(k, Fraction(0))
        if ea != eb:
            return -1 if ea < eb else 1
    return 0


def vmax(a: Vec, b: Vec) -> Vec:
    return b if lex_cmp(a, b) < 0 else a


def dominant(v: Vec) -> Key | None:
    return v[0][0] if v else None


def bump(key: Key, m: int = 1) -> Key:
    """Class of log^(m) applied to the base: (j, m0) -> (j, m0 + m)."""
    return (key[0], key[1] + m)


# -- the two classification maps ------------------------------------------------


def factor_vec(e: Expr) -> Vec | None:
    return _vec(e, ID, "factor")


def mlog_vec(e: Expr) -> Vec | None:
    return _vec(e, ID, "mlog")


def _dom_height(g: Expr) -> int | None:
    """j-grade of the dominant base of g, for logstar composition."""
    v = _vec(g, ID, "factor")
    if v is None:
        v = _vec(g, ID, "mlog")
    if v is None or not v:
        return None
    return v[0][0][0]


def _bumped(g: Expr, m: int) -> Vec | None:
    """Class of log^(m)(g) for m >= 1: the mlog class bumped m-1 times."""
    v = _vec(g, ID, "mlog")
    if v is None:
        return None
    for _ in range(m - 1):
        if not v:
            return EMPTY
        v = _mkvec({bump(v[0][0]): Fraction(1)})
    return v


@lru_cache(maxsize=100_000)
def _vec(f: Expr, g: Expr, kind: str) -> Vec | None:
    """Class vector of f composed with g ('factor') or of mlog(f(g)) ('mlog')."""
    if isinstance(f, Id):
        if g == ID:
            return _mkvec({(0, 0): Fraction(1)}) if kind == "factor" else _mkvec(
                {(0, 1): Fraction(1)}
            )
        return _vec(g, ID, kind)
    if isinstance(f, Const):
        return EMPTY
    if isinstance(f, Add):
        out = EMPTY
        for a in f.args:
            v = _vec(a, g, kind)
            if v is None:
                return None
            out = vmax(out, v)
        return out
    if isinstance(f, Mul):
        if kind == "factor":
            out = EMPTY
            for a in f.args:
                v = _vec(a, g, "factor")
                if v is None:
                    return None
                out = vadd(out, v)
            return out
        out = EMPTY
        for a in f.args:
            v = _vec(a, g, "mlog")
            if v is None:
                return None
            out = vmax(out, v)
        return out
    if isinstance(f, PowConst):
        if f.k == 0:
            return EMPTY
        v = _vec(f.base, g, kind)
        if v is None:
            return None
        return vscale(v, f.k) if kind == "factor" else v
    if isinstance(f, (Log, MLog)):
        return _bumped(g, 1) if kind == "factor" else _bumped(g, 2)
    if isinstance(f, MSqrt):
        if kind == "factor":
            v = _vec(g, ID, "factor")
            return None if v is None else vscale(v, Fraction(1, 2))
        return _vec(g, ID, "mlog")
    if isinstance(f, LogStar):
        j = _dom_height(g)
        if j is None:
            return EMPTY if _is_ev_const(g) else None
        grade = (j + 1, 0) if kind == "factor" else (j + 1, 1)
        return _mkvec({grade: Fraction(1)})
    if isinstance(f, Exp2):
        if kind == "factor":
            return EMPTY if _is_ev_const(g) else None
        return _vec(g, ID, "factor")
    if isinstance(f, Compose):
        return _vec(f.outer, make_compose(f.inner, g), kind)
    if isinstance(f, Iterate):
        if f.m == 1:
            return _vec(f.f, g, kind)
        inner = make_compose(make_iterate(f.f, f.m - 1), g)
        return _vec(f.f, inner, kind)
    if isinstance(f, Type1):
        gv = _vec(g, ID, kind)
        av = _vec(f.alpha, g, kind)
        if gv is None or av is None:
            return None
        return vadd(gv, av) if kind == "factor" else vmax(gv, av)
    if isinstance(f, Type2):
        av = _vec(f.alpha, g, "factor")
        if kind == "factor":
            # n^alpha is a power product only for constant alpha
            if av == EMPTY:
                c = _ev_const_value(make_compose(f.alpha, g))
                if c is None:
                    return None
                gv = _vec(g, ID, "factor")
                return None if gv is None else vscale(gv, c)
            return None
        mg = _vec(g, ID, "mlog")
        if av is None or mg is None:
            return None
        return vadd(av, mg)
    if isinstance(f, Mid):
        if kind == "factor":
            return None
        va = _vec(f.left, g, "mlog")
        vb = _vec(f.right, g, "mlog")
        if va is None or vb is None:
            return None
        return vavg(va, vb)
    if isinstance(f, ParityCase):
        va = _vec(f.even, g, kind)
        vb = _vec(f.odd, g, kind)
        if va is not None and va == vb:
            return va
        return None
    raise TypeError(f"unclassifiable node {f!r}")


# -- eventually-constant detection ------------------------------------------------


_PROBES = (2**40, 2**40 + 1, 2**63, 2**63 + 1)


def _is_ev_const(e: Expr) -> bool:
    return _ev_const_value(e) is not None


@lru_cache(maxsize=10_000)
def _ev_const_value(e: Expr) -> int | None:
    """Value of an eventually-constant expression, or None.

    Only trusted when the class vector is empty; sampled at large probe
    points of both parities to catch case splits.
    """
    if isinstance(e, Const):
        return e.k
    v = _vec(e, ID, "factor")
    if v != EMPTY:
        return None
    vals = set()
    for p in _PROBES:
        x = evaluate_int(e, p)
        if not x.is_exact_nat():
            return None
        vals.add(x.to_int())
    if len(vals) == 1:
        return vals.pop()
    return None


def eventual_const(e: Expr) -> int | None:
    return _ev_const_value(e)


def is_unbounded(e: Expr) -> bool | None:
    """True when e tends to infinity, False when eventually constant."""
    v = factor_vec(e)
    if v:
        return True
    if v == EMPTY:
        return False if _ev_const_value(e) is not None else None
    m = mlog_vec(e)
    if m:
        return True
    if m == EMPTY:
        return False if _ev_const_value(e) is not None else None
    return None


def clear_growth_cache() -> None:
    _vec.cache_clear()
    _ev_const_value.cache_clear()
