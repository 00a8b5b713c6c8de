"""Deciders and semi-deciders for the asymptotic relations between bounds.

Every relation is decided by the same two-stage strategy.  A symbolic
argument over the growth classes of `growth` is tried first; when it
applies, the verdict is definite (Mode.SYMBOLIC).  Otherwise the claim
is probed on the sample grid, with explicit humility rules: a numeric
refutation requires a persistent, non-shrinking violation, and anything
ambiguous degrades to Unknown rather than to a wrong verdict.  This
matters because several true strict separations (log* against iterated
logarithms, most prominently) are invisible, or even inverted, at every
numerically reachable point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Any

from .config import Config, DEFAULT
from .expr import (
    Add,
    Compose,
    Const,
    EXP2,
    Expr,
    ID,
    Id,
    Iterate,
    LOG,
    Mid,
    Mul,
    PowConst,
    Type1,
    Type2,
    contains_parity,
    evaluate,
    make_add,
    make_iterate,
    make_mul,
    render,
)
from .grid import sample_grid
from .growth import (
    EMPTY,
    Vec,
    eventual_const,
    factor_vec,
    is_unbounded,
    lex_cmp,
    mlog_vec,
)
from .numeral import Numeral
from .verdict import Mode, Outcome, Verdict, fails, holds, unknown

_LINEAR_VEC: Vec = (((0, 0), Fraction(1)),)
_LOG_KEY = (0, 1)


class UndecidedComparison(Exception):
    """A set-level operation hit an Unknown pairwise verdict."""


# ---------------------------------------------------------------------------
# grid evaluation helpers

def _label(p: Numeral) -> Any:
    if p.is_exact_nat():
        v = p.to_int()
        if v.bit_length() <= 80:
            return v
    return p.render()


def _exact_value(v: Numeral) -> int | None:
    return v.to_int() if v.is_exact_nat() else None


def _le_points(f: Expr, g: Expr, grid: list[Numeral]) -> list[tuple[Numeral, bool | None]]:
    return [(p, evaluate(f, p).le(evaluate(g, p))) for p in grid]


def _exact_pairs(f: Expr, g: Expr, grid: list[Numeral]) -> list[tuple[int, int, int]]:
    """(n, f(n), g(n)) at the points where everything materializes exactly."""
    out = []
    for p in grid:
        n = _exact_value(p)
        if n is None and not p.is_exact_nat():
            continue
        v1 = _exact_value(evaluate(f, p))
        v2 = _exact_value(evaluate(g, p))
        if v1 is not None and v2 is not None:
            out.append((p.to_int(), v1, v2))
    return out


def _median(xs: list[Fraction]) -> Fraction:
    ys = sorted(xs)
    return ys[len(ys) // 2]


# ---------------------------------------------------------------------------
# almost-everywhere comparison

def _exp_arg(e: Expr) -> Expr | None:
    if e == EXP2:
        return ID
    if isinstance(e, Compose) and e.outer == EXP2:
        return e.inner
    return None


def _sym_ae(f: Expr, g: Expr) -> tuple[Outcome, str] | None:
    """Definite almost-everywhere verdict from growth classes, if any."""
    if f == g:
        return Outcome.HOLDS, "identical expressions"
    cf, cg = eventual_const(f), eventual_const(g)
    if cf is not None and cg is not None:
        if cf <= cg:
            return Outcome.HOLDS, f"eventual constants {cf} <= {cg}"
        return Outcome.FAILS, f"eventual constants {cf} > {cg}"
    if cf is not None and is_unbounded(g) is True:
        return Outcome.HOLDS, "bounded below an unbounded function"
    if cg is not None and is_unbounded(f) is True:
        return Outcome.FAILS, "unbounded above an eventually constant function"
    vf, vg = factor_vec(f), factor_vec(g)
    if vf is not None and vg is not None:
        c = lex_cmp(vf, vg)
        if c < 0:
            return Outcome.HOLDS, "growth class strictly below"
        if c > 0:
            return Outcome.FAILS, "growth class strictly above"
        return None  # same class: the constants decide, numerically
    mf, mg = mlog_vec(f), mlog_vec(g)
    if mf is not None and mg is not None:
        c = lex_cmp(mf, mg)
        if c < 0 and mg != EMPTY:
            return Outcome.HOLDS, "log-scale class strictly below"
        if c > 0 and mf != EMPTY:
            return Outcome.FAILS, "log-scale class strictly above"
    # exponent-monotone shapes: compare the exponents recursively
    if isinstance(f, Type2) and isinstance(g, Type2):
        sub = _sym_ae(f.alpha, g.alpha)
        if sub is not None:
            return sub[0], "exponent comparison: " + sub[1]
    h1, h2 = _exp_arg(f), _exp_arg(g)
    if h1 is not None and h2 is not None:
        sub = _sym_ae(h1, h2)
        if sub is not None:
            return sub[0], "exponent comparison: " + sub[1]
    return None


def _short(n: int) -> int | str:
    """Witness-safe rendering of a possibly astronomical integer."""
    return n if n.bit_length() <= 80 else f"~2^{n.bit_length() - 1}"


def _frac_short(q: Fraction) -> str:
    """Witness-safe rendering of a quotient whose parts may be astronomical."""
    num, den = q.numerator, q.denominator
    if num.bit_length() <= 80 and den.bit_length() <= 80:
        return str(q)
    shift = num.bit_length() - den.bit_length()
    return f"~2^{shift}" if shift >= 0 else f"~2^-{-shift}"


def _violation_scheme(
    decided: list[tuple[int, bool]], cfg: Config
) -> dict[str, Any] | None:
    """Detect a periodic violation family among consecutive sample points."""
    window = [(n, ok) for n, ok in decided if 2 <= n <= cfg.grid_consecutive]
    if len(window) < 12:
        return None
    start = max(8, window[0][0])
    for m in range(2, cfg.osc_modulus_cap + 1):
        bad, good = set(), set()
        counts = [0] * m
        for n, ok in window:
            if n < start:
                continue
            counts[n % m] += 1
            (good if ok else bad).add(n % m)
        pure_bad = [r for r in range(m) if r in bad and r not in good and counts[r] >= 3]
        pure_good = [r for r in range(m) if r in good and r not in bad]
        if pure_bad and pure_good:
            instances = [n for n, ok in window if not ok and n % m == pure_bad[0]][-3:]
            return {"modulus": m, "residues": pure_bad, "instances": instances}
    return None


def cmp_ae(
    f: Expr, g: Expr, cfg: Config = DEFAULT, grid: list[Numeral] | None = None
) -> Verdict:
    """Decide f <=ae g: f(n) <= g(n) for almost all n."""
    rel, lhs, rhs = "<=ae", render(f), render(g)
    sym = _sym_ae(f, g)
    pts = grid if grid is not None else sample_grid(cfg)
    scan = _le_points(f, g, pts)
    decided = [(p, ok) for p, ok in scan if ok is not None]
    if not decided:
        return unknown(rel, lhs, rhs, horizon="no decidable sample points")
    violations = [p for p, ok in decided if not ok]

    if not violations:
        if sym is not None and sym[0] is Outcome.FAILS:
            # the refutation is real but sits beyond every sampled point
            return fails(
                rel, lhs, rhs, Mode.SYMBOLIC, reason=sym[1],
                note="no violation visible within the sampled horizon",
            )
        mode = Mode.SYMBOLIC if sym and sym[0] is Outcome.HOLDS else Mode.NUMERIC
        reason = sym[1] if sym and sym[0] is Outcome.HOLDS else "no violation on the grid"
        return holds(rel, lhs, rhs, mode, threshold=0, reason=reason)

    last_viol = violations[-1]
    after = [p for p, ok in decided if ok and _grid_gt(p, last_viol)]
    if after:
        # violations stop; the least grid-consistent threshold follows them
        n0 = _label(after[0])
        if sym is not None and sym[0] is Outcome.FAILS:
            # growth says Fails but the grid stopped violating: the crossover
            # is real, keep the definite refutation with its witness
            return fails(
                rel, lhs, rhs, Mode.SYMBOLIC,
                reason=sym[1], counterexample=_label(last_viol),
                note="violations reappear beyond the sampled range",
            )
        mode = Mode.SYMBOLIC if sym and sym[0] is Outcome.HOLDS else Mode.NUMERIC
        reason = sym[1] if sym else "violations end on the grid"
        return holds(rel, lhs, rhs, mode, threshold=n0, reason=reason)

    # the top of the grid violates
    if sym is not None:
        if sym[0] is Outcome.FAILS:
            return fails(
                rel, lhs, rhs, Mode.SYMBOLIC,
                reason=sym[1],
                counterexample=[_label(p) for p in violations[-3:]],
            )
        # symbolic Holds with a crossover beyond every sampled point
        return holds(
            rel, lhs, rhs, Mode.SYMBOLIC,
            reason=sym[1],
            threshold=f"beyond {_label(decided[-1][0])}",
            note="grid violations persist to the horizon; the class argument "
                 "places the crossover past the sampled range",
        )

    exact = [(n, v1, v2) for n, v1, v2 in _exact_pairs(f, g, pts) if v1 > v2]
    tail_ok = all(not ok for _, ok in decided[-3:])
    margins = [v1 - v2 for _, v1, v2 in exact[-4:]]
    margin_ok = len(margins) >= 2 and all(
        b >= a for a, b in zip(margins, margins[1:])
    )
    if tail_ok and margin_ok:
        intmap = [(n, ok) for p, ok in decided if (n := _exact_value(p)) is not None]
        scheme = _violation_scheme(intmap, cfg)
        w: dict[str, Any] = {"counterexample": [_short(n) for n, _, _ in exact[-3:]]}
        if scheme:
            w["scheme"] = scheme
        return fails(rel, lhs, rhs, Mode.NUMERIC, **w)

    intmap = [(n, ok) for p, ok in decided if (n := _exact_value(p)) is not None]
    scheme = _violation_scheme(intmap, cfg)
    if scheme is not None:
        return fails(rel, lhs, rhs, Mode.NUMERIC, scheme=scheme)
    return unknown(
        rel, lhs, rhs,
        horizon=_label(decided[-1][0]),
        note="violations present but their margin shrinks; no stable verdict",
    )


def _grid_gt(a: Numeral, b: Numeral) -> bool:
    return b.le(a) is True and a.le(b) is not True


# ---------------------------------------------------------------------------
# order-of-growth classification

class GrowthClass(str, Enum):
    STRICTLY_BELOW = "strictly-below"
    SAME_ORDER = "same-order"
    BELOW = "below"
    ABOVE = "above"
    STRICTLY_ABOVE = "strictly-above"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class GrowthVerdict:
    lhs: str
    rhs: str
    category: GrowthClass
    mode: Mode
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 2 if self.category is GrowthClass.UNKNOWN else 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "category": self.category.value,
            "mode": self.mode.value,
            "witness": self.witness,
        }

    def line(self) -> str:
        extra = ""
        if self.witness:
            parts = ", ".join(f"{k}={v}" for k, v in sorted(self.witness.items()))
            extra = f" ({parts})"
        return f"{self.lhs} vs {self.rhs}: {self.category.value} [{self.mode.value}]{extra}"


def _flip(c: GrowthClass) -> GrowthClass:
    table = {
        GrowthClass.STRICTLY_BELOW: GrowthClass.STRICTLY_ABOVE,
        GrowthClass.STRICTLY_ABOVE: GrowthClass.STRICTLY_BELOW,
        GrowthClass.BELOW: GrowthClass.ABOVE,
        GrowthClass.ABOVE: GrowthClass.BELOW,
    }
    return table.get(c, c)


def _sym_growth(f: Expr, g: Expr) -> tuple[GrowthClass, str] | None:
    """Definite order-of-growth class from the symbolic engine, if any."""
    if f == g:
        return GrowthClass.SAME_ORDER, "identical expressions"
    cf, cg = eventual_const(f), eventual_const(g)
    if cf is not None and cg is not None:
        if cf == cg:
            return GrowthClass.SAME_ORDER, "equal eventual constants"
        if cf == 0:
            return GrowthClass.STRICTLY_BELOW, "zero against a positive constant"
        if cg == 0:
            return GrowthClass.STRICTLY_ABOVE, "positive constant against zero"
        return GrowthClass.SAME_ORDER, f"constant quotient {cf}/{cg}"
    if cf is not None and is_unbounded(g) is True:
        return GrowthClass.STRICTLY_BELOW, "eventually constant against unbounded"
    if cg is not None and is_unbounded(f) is True:
        return GrowthClass.STRICTLY_ABOVE, "unbounded against eventually constant"
    vf, vg = factor_vec(f), factor_vec(g)
    if vf is not None and vg is not None:
        c = lex_cmp(vf, vg)
        if c < 0:
            return GrowthClass.STRICTLY_BELOW, "growth class strictly below"
        if c > 0:
            return GrowthClass.STRICTLY_ABOVE, "growth class strictly above"
        return GrowthClass.SAME_ORDER, "equal growth classes"
    mf, mg = mlog_vec(f), mlog_vec(g)
    if mf is not None and mg is not None and mf != EMPTY and mg != EMPTY:
        c = lex_cmp(mf, mg)
        if c < 0:
            return GrowthClass.STRICTLY_BELOW, "log-scale class strictly below"
        if c > 0:
            return GrowthClass.STRICTLY_ABOVE, "log-scale class strictly above"
    if isinstance(f, Type2) and isinstance(g, Type2):
        sub = _sym_growth(f.alpha, g.alpha)
        if sub is not None:
            if sub[0] is GrowthClass.STRICTLY_BELOW and is_unbounded(g.alpha) is True:
                return GrowthClass.STRICTLY_BELOW, "exponent gap unbounded"
            if sub[0] is GrowthClass.STRICTLY_ABOVE and is_unbounded(f.alpha) is True:
                return GrowthClass.STRICTLY_ABOVE, "exponent gap unbounded"
        if _sym_ae(f.alpha, g.alpha) == (Outcome.HOLDS, "identical expressions"):
            return GrowthClass.SAME_ORDER, "identical exponents"
    h1, h2 = _exp_arg(f), _exp_arg(g)
    if h1 is not None and h2 is not None:
        gap = _diff_unbounded(h1, h2)
        if gap is True:
            return GrowthClass.STRICTLY_BELOW, "exponent difference unbounded"
        if _diff_unbounded(h2, h1) is True:
            return GrowthClass.STRICTLY_ABOVE, "exponent difference unbounded"
        if h1 == h2:
            return GrowthClass.SAME_ORDER, "identical exponents"
    return None


def _diff_unbounded(lo: Expr, hi: Expr) -> bool | None:
    """Is hi(n) - lo(n) unbounded?  Conservative, None when unclear."""
    if isinstance(hi, Add):
        rest = list(hi.args)
        if lo in rest:
            rest.remove(lo)
            if rest and is_unbounded(make_add(tuple(rest))) is True:
                return True
        if isinstance(lo, Add) and all(a in rest for a in lo.args):
            for a in lo.args:
                rest.remove(a)
            if rest and is_unbounded(make_add(tuple(rest))) is True:
                return True
    sub = _sym_growth(lo, hi)
    if sub is not None and sub[0] is GrowthClass.STRICTLY_BELOW:
        if is_unbounded(hi) is True:
            return True
    return None


def _strict_quotient_fall(qs: list[tuple[int, Fraction]], k_max: int) -> bool:
    """The spec of a numeric strict separation: quotients cross successive
    halving thresholds and stay small at the top of the grid."""
    if len(qs) < 4:
        return False
    idx = 0
    for k in range(1, k_max + 1):
        target = Fraction(1, 2**k)
        while idx < len(qs) and qs[idx][1] >= target:
            idx += 1
        if idx == len(qs):
            return False
    floor = Fraction(1, 2**k_max)
    return all(q < floor for _, q in qs[-2:])


def _composed_growth(f: Expr, g: Expr, cfg: Config) -> tuple[GrowthClass, str] | None:
    """One side is a superlinear bound applied to the other, unbounded side.

    s(h(n))/h(n) tends to infinity whenever s(n)/n does and h is unbounded,
    so the composition strictly dominates; iterating a superlinear bound is
    the special case s = h."""
    for a, b, cat in (
        (f, g, GrowthClass.STRICTLY_BELOW),
        (g, f, GrowthClass.STRICTLY_ABOVE),
    ):
        s: Expr | None = None
        if isinstance(b, Compose) and b.inner == a:
            s = b.outer
        elif isinstance(b, Iterate) and b.f == a and b.m >= 2:
            s = a
        if s is None or is_unbounded(a) is not True:
            continue
        if is_superlinear(s, cfg).outcome is Outcome.HOLDS:
            return cat, "superlinear bound composed onto an unbounded one"
    if (
        isinstance(f, Compose)
        and isinstance(g, Compose)
        and f.inner == g.inner
        and not contains_parity(f.inner)
        and is_unbounded(f.inner) is True
    ):
        # the inner bound eventually exceeds any threshold, so a definite
        # outer comparison holds along the composed values as well
        sub = cmp_growth(f.outer, g.outer, cfg)
        if sub.mode is Mode.SYMBOLIC and sub.category in (
            GrowthClass.STRICTLY_BELOW,
            GrowthClass.SAME_ORDER,
            GrowthClass.STRICTLY_ABOVE,
        ):
            return sub.category, "outer comparison transfers along the shared inner bound"
    return None


def cmp_growth(
    f: Expr, g: Expr, cfg: Config = DEFAULT, grid: list[Numeral] | None = None
) -> GrowthVerdict:
    """Classify the order of growth of f against g."""
    lhs, rhs = render(f), render(g)
    pts = grid if grid is not None else sample_grid(cfg)
    sym = _sym_growth(f, g)
    if sym is not None:
        cat, reason = sym
        w: dict[str, Any] = {"reason": reason}
        if cat is GrowthClass.SAME_ORDER:
            c = _mutual_constant(f, g, pts)
            if c is not None:
                w["c"] = c
        return GrowthVerdict(lhs, rhs, cat, Mode.SYMBOLIC, w)
    comp = _composed_growth(f, g, cfg)
    if comp is not None:
        cat, reason = comp
        return GrowthVerdict(lhs, rhs, cat, Mode.SYMBOLIC, {"reason": reason})

    qs = [
        (n, Fraction(v1, v2))
        for n, v1, v2 in _exact_pairs(f, g, pts)
        if v2 > 0 and n >= 2
    ]
    if len(qs) < 12:
        return GrowthVerdict(lhs, rhs, GrowthClass.UNKNOWN, Mode.NUMERIC,
                             {"horizon": "too few exact sample points"})
    if _strict_quotient_fall(qs, cfg.power_cap):
        return GrowthVerdict(lhs, rhs, GrowthClass.STRICTLY_BELOW, Mode.NUMERIC,
                             {"quotient": f"falls below 1/2^{cfg.power_cap}"})
    inv = [(n, 1 / q) for n, q in qs if q > 0]
    if len(inv) == len(qs) and _strict_quotient_fall(inv, cfg.power_cap):
        return GrowthVerdict(lhs, rhs, GrowthClass.STRICTLY_ABOVE, Mode.NUMERIC,
                             {"quotient": f"exceeds 2^{cfg.power_cap}"})
    b1, b2, b3 = qs[-12:-8], qs[-8:-4], qs[-4:]
    hi = [max(q for _, q in b) for b in (b1, b2, b3)]
    lo = [min(q for _, q in b) for b in (b1, b2, b3)]
    c = _mutual_constant(f, g, pts)
    if c is not None:
        # a fitted constant refutes strict domination only when the tail
        # shows no net drift; quotients at iterated-log speed stay under
        # small constants across any feasible grid while still diverging
        drift_up = hi[2] > max(hi[0], hi[1]) * Fraction(4, 3)
        drift_down = lo[0] > 0 and lo[2] < min(lo[0], lo[1]) * Fraction(3, 4)
        if not drift_up and not drift_down:
            return GrowthVerdict(lhs, rhs, GrowthClass.SAME_ORDER,
                                 Mode.NUMERIC, {"c": c})
    hi_bounded = hi[2] <= max(hi[0], hi[1]) * 2 and hi[2] <= 2**10
    lo_shrinks = lo[0] > 0 and lo[1] <= lo[0] / 2 and lo[2] <= lo[1] / 2
    if hi_bounded and lo_shrinks:
        return GrowthVerdict(lhs, rhs, GrowthClass.BELOW, Mode.NUMERIC,
                             {"note": "bounded above, vanishing on a subsequence"})
    lo_bounded = lo[2] * 2**10 >= 1 and lo[2] * 2 >= min(lo[0], lo[1])
    hi_grows = hi[1] >= hi[0] * 2 and hi[2] >= hi[1] * 2
    if lo_bounded and hi_grows:
        return GrowthVerdict(lhs, rhs, GrowthClass.ABOVE, Mode.NUMERIC,
                             {"note": "bounded below, unbounded on a subsequence"})
    return GrowthVerdict(lhs, rhs, GrowthClass.UNKNOWN, Mode.NUMERIC,
                         {"horizon": _short(qs[-1][0])})


def _mutual_constant(f: Expr, g: Expr, pts: list[Numeral]) -> int | None:
    """Least c with f <= c*g and g <= c*f at every decided sample point
    past the small-n noise floor."""
    pairs = [(n, v1, v2) for n, v1, v2 in _exact_pairs(f, g, pts) if n >= 8]
    if len(pairs) < 4:
        return None
    cands = sorted({1, 2, 3, 4, 5, 6, 8, 12, 16, 24, 32} | {1 << k for k in range(5, 11)})
    for c in cands:
        if all(v1 <= c * v2 and v2 <= c * v1 for _, v1, v2 in pairs):
            return c
    return None


def le_O(f: Expr, g: Expr, cfg: Config = DEFAULT) -> Verdict:
    """f <=O g: some constant multiple of g eventually dominates f."""
    gv = cmp_growth(f, g, cfg)
    rel, lhs, rhs = "<=O", gv.lhs, gv.rhs
    if gv.category in (GrowthClass.STRICTLY_BELOW, GrowthClass.SAME_ORDER,
                       GrowthClass.BELOW):
        return holds(rel, lhs, rhs, gv.mode, **gv.witness)
    if gv.category in (GrowthClass.STRICTLY_ABOVE, GrowthClass.ABOVE):
        return fails(rel, lhs, rhs, gv.mode, **gv.witness)
    return unknown(rel, lhs, rhs, **gv.witness)


def lt_o(f: Expr, g: Expr, cfg: Config = DEFAULT) -> Verdict:
    """f <o g: the quotient f/g tends to zero."""
    gv = cmp_growth(f, g, cfg)
    rel, lhs, rhs = "<o", gv.lhs, gv.rhs
    if gv.category is GrowthClass.STRICTLY_BELOW:
        return holds(rel, lhs, rhs, gv.mode, **gv.witness)
    if gv.category is GrowthClass.UNKNOWN:
        return unknown(rel, lhs, rhs, **gv.witness)
    return fails(rel, lhs, rhs, gv.mode, **gv.witness)


def is_superlinear(f: Expr, cfg: Config = DEFAULT) -> Verdict:
    """Superlinearity: f/n tends to infinity."""
    gv = cmp_growth(ID, f, cfg)
    rel, lhs, rhs = "superlinear", render(f), "n"
    if gv.category is GrowthClass.STRICTLY_BELOW:
        return holds(rel, lhs, rhs, gv.mode, **gv.witness)
    if gv.category is GrowthClass.UNKNOWN:
        return unknown(rel, lhs, rhs, **gv.witness)
    return fails(rel, lhs, rhs, gv.mode, **gv.witness)


# ---------------------------------------------------------------------------
# subhomogeneity

def _superpolynomial(f: Expr) -> bool:
    """Definitely above every polynomial (log-scale class above log n)."""
    m = mlog_vec(f)
    if m is not None and m != EMPTY:
        if lex_cmp(m, (( _LOG_KEY, Fraction(1)),)) > 0:
            return True
    if isinstance(f, Type2) and is_unbounded(f.alpha) is True:
        return True
    h = _exp_arg(f)
    if h is not None:
        v = factor_vec(h)
        if v is not None and lex_cmp(v, _LINEAR_VEC) >= 0:
            return True
    return False


def is_subhomogeneous(
    f: Expr, cfg: Config = DEFAULT, c_list: tuple[int, ...] = (2, 3, 4)
) -> Verdict:
    """For every scale factor c, some constant cbar absorbs f(c*n)."""
    rel, lhs, rhs = "subhomogeneous", render(f), f"c in {list(c_list)}"
    if _superpolynomial(f):
        probe = _cbar_trend(f, 2, cfg)
        return fails(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="superpolynomial growth, scaling is unabsorbable",
                     cbar_trend=[_short(t) for t in probe] if probe else None)
    found: dict[int, int] = {}
    for c in c_list:
        cbar = _find_cbar(f, c, cfg)
        if cbar is None:
            trend = _cbar_trend(f, c, cfg)
            if trend is not None and len(trend) >= 3 and all(
                b >= 2 * a for a, b in zip(trend, trend[1:])
            ):
                return fails(rel, lhs, rhs, Mode.NUMERIC, c=c,
                             cbar_trend=[_short(t) for t in trend])
            return unknown(rel, lhs, rhs, c=c, note="no stable cbar on the grid")
        found[c] = cbar
    mode = Mode.SYMBOLIC if factor_vec(f) is not None else Mode.NUMERIC
    return holds(rel, lhs, rhs, mode, cbar={str(c): v for c, v in found.items()})


def _scale_points(cfg: Config, c: int) -> list[int]:
    pts = list(range(1, 129)) + [1 << k for k in range(8, 61, 4)]
    return [p for p in pts if p * c < 1 << 62]


def _find_cbar(f: Expr, c: int, cfg: Config) -> int | None:
    worst = Fraction(0)
    for p in _scale_points(cfg, c):
        v1 = _exact_value(evaluate(f, Numeral.from_int(c * p)))
        v2 = _exact_value(evaluate(f, Numeral.from_int(p)))
        if v1 is None or v2 is None or v2 == 0:
            continue
        worst = max(worst, Fraction(v1, v2))
    if worst == 0:
        return None
    cbar = -(-worst.numerator // worst.denominator)
    return cbar if cbar <= 1 << 24 else None


def _cbar_trend(f: Expr, c: int, cfg: Config) -> list[int] | None:
    """Per-scale-band maxima of f(c*n)/f(n), to witness a blowup."""
    bands = [(1, 32), (32, 1 << 10), (1 << 10, 1 << 20), (1 << 20, 1 << 40)]
    out = []
    for a, b in bands:
        worst = Fraction(0)
        for p in _scale_points(cfg, c):
            if not (a <= p < b):
                continue
            v1 = _exact_value(evaluate(f, Numeral.from_int(c * p)))
            v2 = _exact_value(evaluate(f, Numeral.from_int(p)))
            if v1 is None or v2 is None or v2 == 0:
                continue
            worst = max(worst, Fraction(v1, v2))
        if worst > 0:
            out.append(-(-worst.numerator // worst.denominator))
    return out or None


# ---------------------------------------------------------------------------
# power-closure relations on factors

def le_pow(a1: Expr, a2: Expr, cfg: Config = DEFAULT) -> Verdict:
    """a1 <=pow a2: every power of a1 is eventually below some power of a2."""
    rel, lhs, rhs = "<=pow", render(a1), render(a2)
    c1, c2 = eventual_const(a1), eventual_const(a2)
    u2 = is_unbounded(a2)
    if c1 is not None:
        if u2 is True or (c2 is not None and c2 >= 2):
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="bounded base against a growing power family")
        if c2 is not None:
            ok = c1 <= max(c2, 1) if c2 >= 1 else c1 == 0
            reason = f"eventual constants {c1} vs {c2}"
            return (holds if ok else fails)(rel, lhs, rhs, Mode.SYMBOLIC, reason=reason)
    if is_unbounded(a1) is True and u2 is False:
        return fails(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="unbounded against a bounded power family")
    m1, m2 = mlog_vec(a1), mlog_vec(a2)
    if m1 is not None and m2 is not None and m1 != EMPTY and m2 != EMPTY:
        c = lex_cmp(m1, m2)
        if c <= 0:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="log-scale class below or equal")
        return fails(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="log-scale class strictly above")
    return _le_pow_numeric(a1, a2, cfg)


def _le_pow_numeric(a1: Expr, a2: Expr, cfg: Config) -> Verdict:
    rel, lhs, rhs = "<=pow", render(a1), render(a2)
    pts = sample_grid(cfg)
    pairs = [(n, v1, v2) for n, v1, v2 in _exact_pairs(a1, a2, pts) if n >= 16]
    if len(pairs) < 6:
        return unknown(rel, lhs, rhs, horizon="too few exact sample points")
    table: dict[int, int] = {}
    for k in range(1, cfg.power_cap + 1):
        found = None
        for l in range(1, cfg.power_cap * max(k, 2) + 1):
            if all(v1**k <= v2**l for _, v1, v2 in pairs[-8:]):
                found = l
                break
        if found is None:
            if k == 1 and all(v1 > v2 ** (cfg.power_cap * 2) for _, v1, v2 in pairs[-4:]):
                return fails(rel, lhs, rhs, Mode.NUMERIC,
                             note="first power already clears every tested power")
            return unknown(rel, lhs, rhs, k=k, horizon=_short(pairs[-1][0]))
        table[k] = found
    return holds(rel, lhs, rhs, Mode.NUMERIC, exponents=table)


def ll_pow(a1: Expr, a2: Expr, cfg: Config = DEFAULT) -> Verdict:
    """a1 <<pow a2: every fixed power of a1 is eventually below a2 itself."""
    rel, lhs, rhs = "<<pow", render(a1), render(a2)
    # a separated gap keeps its geometric midpoint strictly inside; this
    # grounds generated chains whose separations sit beyond any feasible grid
    if isinstance(a2, Mid) and a1 == a2.left:
        gap = ll_pow(a2.left, a2.right, cfg)
        if gap.outcome is Outcome.HOLDS:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="midpoint splits a separated gap",
                         gap=gap.line())
    if isinstance(a1, Mid) and a2 == a1.right:
        gap = ll_pow(a1.left, a1.right, cfg)
        if gap.outcome is Outcome.HOLDS:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="midpoint splits a separated gap",
                         gap=gap.line())
    c1 = eventual_const(a1)
    u1, u2 = is_unbounded(a1), is_unbounded(a2)
    if c1 is not None:
        if c1 <= 1:
            v = cmp_ae(Const(max(c1, 0)), a2, cfg)
            if v.outcome is Outcome.HOLDS:
                return holds(rel, lhs, rhs, v.mode, reason="powers stay constant")
            return unknown(rel, lhs, rhs, note="small-constant base, unclear tail")
        if u2 is True:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="constant powers against unbounded growth")
        if u2 is False:
            return fails(rel, lhs, rhs, Mode.SYMBOLIC, k=2,
                         reason="constant powers exceed a bounded function")
    if u1 is True and u2 is False:
        return fails(rel, lhs, rhs, Mode.SYMBOLIC, k=1,
                     reason="unbounded against bounded")
    m1, m2 = mlog_vec(a1), mlog_vec(a2)
    if m1 is not None and m2 is not None and m1 != EMPTY and m2 != EMPTY:
        c = lex_cmp(m1, m2)
        if c < 0:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason="log-scale class strictly below")
        k, pt = _ll_refutation(a1, a2, cfg)
        reason = ("equal log-scale classes, squaring escapes" if c == 0
                  else "log-scale class strictly above")
        w: dict[str, Any] = {"reason": reason, "k": k if k else 2}
        if pt is not None:
            w["point"] = pt
        return fails(rel, lhs, rhs, Mode.SYMBOLIC, **w)
    return _ll_pow_numeric(a1, a2, cfg)


def _ll_refutation(a1: Expr, a2: Expr, cfg: Config) -> tuple[int | None, Any]:
    """A concrete (k, point) with a1(point)^k > a2(point), if visible."""
    pairs = _exact_pairs(a1, a2, sample_grid(cfg))[-6:]
    for k in range(1, cfg.power_cap + 1):
        for n, v1, v2 in pairs:
            if v1**k > v2:
                return k, _short(n)
    return None, None


def _ll_pow_numeric(a1: Expr, a2: Expr, cfg: Config) -> Verdict:
    rel, lhs, rhs = "<<pow", render(a1), render(a2)
    pairs = [(n, v1, v2) for n, v1, v2 in _exact_pairs(a1, a2, sample_grid(cfg)) if n >= 16]
    if len(pairs) < 6:
        return unknown(rel, lhs, rhs, horizon="too few exact sample points")
    for k in range(1, cfg.power_cap + 1):
        bad = [(n, v1**k - v2) for n, v1, v2 in pairs[-5:] if v1**k > v2]
        if len(bad) == 5 and all(b >= a for (_, a), (_, b) in zip(bad, bad[1:])):
            return fails(rel, lhs, rhs, Mode.NUMERIC, k=k, point=_short(bad[-1][0]))
    return unknown(rel, lhs, rhs, horizon=_short(pairs[-1][0]),
                   note="all tested powers stay below; the full family is unverified")


# ---------------------------------------------------------------------------
# shape checks shared with the certification layer

def nondecreasing_on_grid(e: Expr, cfg: Config = DEFAULT) -> bool:
    prev: int | None = None
    for n in range(0, cfg.grid_consecutive + 1):
        v = _exact_value(evaluate(e, Numeral.from_int(n)))
        if v is None:
            return False
        if prev is not None and v < prev:
            return False
        prev = v
    return True


def range_ok(a: Expr, upper: Expr, cfg: Config = DEFAULT) -> bool:
    """1 <=ae a <=ae upper, on the sampled tail."""
    pts = sample_grid(cfg)
    tail = pts[-12:]
    for p in tail:
        va = evaluate(a, p)
        if va.le(evaluate(upper, p)) is False:
            return False
        if evaluate(Const(1), p).le(va) is False:
            return False
    return True


def f_consistency_exponent(a: Expr, cfg: Config = DEFAULT) -> tuple[int, Any] | None:
    """Least l with a(n^2) <= a(n)^l on the grid tail (needs a nondecreasing)."""
    if not nondecreasing_on_grid(a, cfg):
        return None
    pts = [Numeral.from_int(n) for n in list(range(2, 65)) + [1 << k for k in range(7, 33, 5)]]
    pts.append(Numeral.tower(5))
    rows = []
    for p in pts:
        v = _exact_value(evaluate(a, p))
        vsq = _exact_value(evaluate(a, p.mul(p)))
        if v is not None and vsq is not None:
            rows.append((_label(p), v, vsq))
    if len(rows) < 8:
        return None
    for l in range(1, cfg.power_cap + 1):
        bad_idx = [i for i, (n, v, vsq) in enumerate(rows) if vsq > v**l]
        if not bad_idx:
            return l, 0
        if bad_idx[-1] <= len(rows) - 4:
            # violations end on the grid with a clean run above them,
            # including the top symbolic point; report the first clean point
            return l, rows[bad_idx[-1] + 1][0]
    return None


def e_consistency_exponent(a: Expr, cfg: Config = DEFAULT) -> tuple[int, Any] | None:
    """Least uniform l with a(n^(log n)^k) <= a(n)^l for k <= 2 on the grid."""
    if not nondecreasing_on_grid(a, cfg):
        return None
    base = [Numeral.from_int(n) for n in [4, 6, 8, 12, 16, 24, 32, 48, 64]]
    base += [Numeral.from_int(1 << k) for k in (7, 8, 10, 12, 14)]
    for l in range(1, cfg.power_cap + 1):
        ok = True
        for k in (1, 2):
            exp = PowConst(LOG, k)
            for p in base:
                q = p.pow(evaluate(exp, p))
                v = _exact_value(evaluate(a, p))
                vq = _exact_value(evaluate(a, q))
                if v is None or vq is None:
                    continue
                n = p.to_int()
                if n >= 8 and vq > v**l:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return l, 8
    return None


# ---------------------------------------------------------------------------
# iteration-set comparison

_NEARID, _LINEAR, _TYPE1, _POLY, _TYPE2, _EXP = 1, 2, 3, 4, 5, 6


def _it_base(b: Expr) -> Expr:
    while isinstance(b, Iterate):
        b = b.f
    return b


def _linear_parts(b: Expr) -> tuple[str, Any] | None:
    """Shape of a linear-class bound: ('slope', c) or ('nearid', remainder)."""
    if isinstance(b, Type1) and eventual_const(b.alpha) is not None:
        return "slope", eventual_const(b.alpha)
    if isinstance(b, Mul):
        ids = [a for a in b.args if isinstance(a, Id)]
        consts = [a for a in b.args if isinstance(a, Const)]
        if len(ids) == 1 and len(consts) + 1 == len(b.args):
            c = 1
            for a in consts:
                c *= a.k
            return "slope", c
    if isinstance(b, Add):
        ids = [a for a in b.args if isinstance(a, Id)]
        rest = [a for a in b.args if not isinstance(a, Id)]
        if len(ids) == 1 and rest:
            gamma = make_add(tuple(rest))
            v = factor_vec(gamma)
            if v is not None and lex_cmp(v, _LINEAR_VEC) < 0:
                return "nearid", gamma
    return None


def _type1_factor(b: Expr) -> Expr | None:
    if isinstance(b, Type1):
        return b.alpha
    if isinstance(b, Mul):
        ids = [a for a in b.args if isinstance(a, Id)]
        rest = tuple(a for a in b.args if not isinstance(a, Id))
        if len(ids) == 1 and rest:
            return make_mul(rest)
    return None


def _family(b: Expr) -> tuple[int | None, Any]:
    """Coarse iteration-family rank; data refines ties within a rank."""
    fv = factor_vec(b)
    if fv is not None:
        if fv == EMPTY:
            return None, None
        if fv == _LINEAR_VEC:
            parts = _linear_parts(b)
            if parts is not None and parts[0] == "nearid":
                return _NEARID, parts[1]
            if parts is not None and parts[0] == "slope" and parts[1] == 1:
                return None, None  # identity-order but not the identity node
            return _LINEAR, parts[1] if parts else None
        p = dict(fv).get((0, 0), Fraction(0))
        if p == 1:
            return _TYPE1, _type1_factor(b)
        if p > 1:
            return _POLY, None
        return None, None
    # geometric-mean factors fall outside the factor grammar; the explicit
    # shape still ranks once its parameter is unbounded yet subpolynomial
    if isinstance(b, Type1):
        ma = mlog_vec(b.alpha)
        if ma is not None and ma != EMPTY and lex_cmp(ma, ((_LOG_KEY, Fraction(1)),)) < 0:
            return _TYPE1, b.alpha
    m = mlog_vec(b)
    if m is not None and m != EMPTY:
        dom = m[0][0]
        if dom == (0, 0):
            return _EXP, None
        if dom == _LOG_KEY and dict(m)[_LOG_KEY] > 1:
            return _TYPE2, b.alpha if isinstance(b, Type2) else None
        return None, None
    if isinstance(b, Type2) and is_unbounded(b.alpha) is True:
        return _TYPE2, b.alpha
    h = _exp_arg(b)
    if h is not None:
        v = factor_vec(h)
        if v is not None and lex_cmp(v, _LINEAR_VEC) >= 0:
            return _EXP, None
    return None, None


_FAMILY_NAMES = {
    _NEARID: "near-identity",
    _LINEAR: "linear",
    _TYPE1: "factor-linear",
    _POLY: "polynomial",
    _TYPE2: "power-exponent",
    _EXP: "exponential",
}


def le_it(b1: Expr, b2: Expr, cfg: Config = DEFAULT) -> Verdict:
    """Every iterate of b1 is eventually below some iterate of b2."""
    rel = "<=it"
    lhs, rhs = render(b1), render(b2)
    s1, s2 = _it_base(b1), _it_base(b2)
    if s1 == s2:
        return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="same base bound, iteration sets coincide")
    # identity floor: the iteration set of n is just {n}
    if s1 == ID:
        return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="identity is below every bound")
    if s2 == ID:
        v = cmp_ae(s1, ID, cfg)
        if v.outcome is Outcome.HOLDS:
            return holds(rel, lhs, rhs, v.mode, reason="left side collapses to n")
        if v.outcome is Outcome.FAILS:
            w = {k: x for k, x in v.witness.items() if k != "reason"}
            return fails(rel, lhs, rhs, v.mode,
                         reason="identity iterates never grow", **w)
        return unknown(rel, lhs, rhs, **v.witness)
    r1, d1 = _family(s1)
    r2, d2 = _family(s2)
    if r1 is not None and r2 is not None:
        if r1 < r2:
            return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason=f"{_FAMILY_NAMES[r1]} family below {_FAMILY_NAMES[r2]}")
        if r1 > r2:
            return fails(rel, lhs, rhs, Mode.SYMBOLIC,
                         reason=f"{_FAMILY_NAMES[r1]} family above {_FAMILY_NAMES[r2]}")
        v = _le_it_tie(s1, s2, r1, d1, d2, cfg)
        if v is not None:
            return Verdict(rel, lhs, rhs, v.outcome, v.mode, v.witness)
    return _le_it_generic(s1, s2, lhs, rhs, cfg)


def _le_it_tie(
    s1: Expr, s2: Expr, rank: int, d1: Any, d2: Any, cfg: Config
) -> Verdict | None:
    rel, lhs, rhs = "<=it", render(s1), render(s2)
    if rank in (_POLY, _EXP):
        reason = ("iterates of any polynomial dominate every fixed polynomial"
                  if rank is _POLY else
                  "iterated exponentials tower past each other")
        return holds(rel, lhs, rhs, Mode.SYMBOLIC, reason=reason)
    if rank is _LINEAR and d1 is not None and d2 is not None and d1 >= 2 and d2 >= 2:
        return holds(rel, lhs, rhs, Mode.SYMBOLIC,
                     reason="geometric iterates absorb any fixed slope")
    if rank is _NEARID and d1 is not None and d2 is not None:
        gv = cmp_growth(d1, d2, cfg)
        note = "additive remainders steer near-identity iteration sets"
        if gv.category in (GrowthClass.STRICTLY_BELOW, GrowthClass.SAME_ORDER,
                           GrowthClass.BELOW):
            return holds(rel, lhs, rhs, Mode.NUMERIC, reason=note,
                         remainders=gv.category.value)
        if gv.category in (GrowthClass.STRICTLY_ABOVE, GrowthClass.ABOVE):
            return fails(rel, lhs, rhs, Mode.NUMERIC, reason=note,
                         remainders=gv.category.value)
        return None
    if rank is _TYPE1 and d1 is not None and d2 is not None:
        return _le_it_factors(s1, s2, d1, d2, ID, "factor", cfg)
    if rank is _TYPE2 and d1 is not None and d2 is not None:
        # poly-log exponents keep iterate exponents inside the power
        # closure (that is what e-consistency certifies), so the upper
        # range may sit above log itself
        return _le_it_factors(s1, s2, d1, d2, PowConst(LOG, 4), "exponent", cfg)
    return None


def _le_it_factors(
    s1: Expr, s2: Expr, a1: Expr, a2: Expr, upper: Expr, kind: str, cfg: Config
) -> Verdict | None:
    """Reduce the iteration-set order to the power order of the factors."""
    rel, lhs, rhs = "<=it", render(s1), render(s2)
    checker = f_consistency_exponent if kind == "factor" else e_consistency_exponent
    pre = []
    for a in (a1, a2):
        if not range_ok(a, upper, cfg):
            return None
        got = checker(a, cfg)
        if got is None:
            return None
        pre.append(got[0])
    v = le_pow(a1, a2, cfg)
    w: dict[str, Any] = {
        "reason": f"{kind}-power reduction",
        "consistency_exponents": pre,
        "power_verdict": v.outcome.value,
    }
    if v.outcome is Outcome.HOLDS:
        s = ll_pow(a1, a2, cfg)
        lo = eventual_const(a1)
        big = lo >= 2 if lo is not None else is_unbounded(a1) is True
        if s.outcome is Outcome.HOLDS and big:
            w["strict"] = True
        return holds(rel, lhs, rhs, v.mode, **w)
    if v.outcome is Outcome.FAILS:
        return fails(rel, lhs, rhs, v.mode, **w)
    return None


def _le_it_generic(s1: Expr, s2: Expr, lhs: str, rhs: str, cfg: Config) -> Verdict:
    rel = "<=it"
    # a nondecreasing pointwise majorant dominates iterate by iterate
    va = cmp_ae(s1, s2, cfg)
    if va.outcome is Outcome.HOLDS and nondecreasing_on_grid(s2, cfg) \
            and cmp_ae(ID, s2, cfg).outcome is Outcome.HOLDS:
        return holds(rel, lhs, rhs, va.mode, reason="nondecreasing pointwise majorant")
    gv = cmp_growth(s1, s2, cfg)
    if gv.category in (GrowthClass.STRICTLY_BELOW, GrowthClass.SAME_ORDER,
                       GrowthClass.BELOW):
        sup = is_superlinear(s2, cfg)
        if sup.outcome is Outcome.HOLDS:
            mode = Mode.SYMBOLIC if (gv.mode is Mode.SYMBOLIC
                                     and sup.mode is Mode.SYMBOLIC) else Mode.NUMERIC
            return holds(rel, lhs, rhs, mode,
                         reason="order dominance under a superlinear majorant")
    # capped search for per-iterate embeddings
    cap = cfg.it_depth_cap
    mapping: dict[int, int] = {}
    for m in range(1, cap + 1):
        lhs_m = make_iterate(s1, m) if m > 1 else s1
        found = None
        for mm in range(1, cap + 1):
            rhs_m = make_iterate(s2, mm) if mm > 1 else s2
            if cmp_ae(lhs_m, rhs_m, cfg).outcome is Outcome.HOLDS:
                found = mm
                break
        if found is None:
            if m == 1 and _iterates_saturate(s2, cfg):
                return fails(rel, lhs, rhs, Mode.NUMERIC,
                             reason="right side saturates before reaching the left",
                             unembeddable_power=1, depth=cap)
            return unknown(rel, lhs, rhs, depth=cap, stuck_at=m,
                           note="no embedding within the iterate depth cap")
        mapping[m] = found
    return holds(rel, lhs, rhs, Mode.NUMERIC, embedding=mapping, depth=cap)


def _iterates_saturate(s: Expr, cfg: Config) -> bool:
    """Do the iterates of s stop growing in order of magnitude?"""
    cap = cfg.it_depth_cap
    hi = make_iterate(s, cap)
    lo = make_iterate(s, cap - 1)
    return cmp_growth(lo, hi, cfg).category is GrowthClass.SAME_ORDER


def lt_it(b1: Expr, b2: Expr, cfg: Config = DEFAULT) -> Verdict:
    """Strict iteration-set order: <=it one way, refuted the other."""
    rel, lhs, rhs = "<it", render(b1), render(b2)
    fwd = le_it(b1, b2, cfg)
    if fwd.outcome is not Outcome.HOLDS:
        if fwd.outcome is Outcome.FAILS:
            return fails(rel, lhs, rhs, fwd.mode, **fwd.witness)
        return unknown(rel, lhs, rhs, **fwd.witness)
    bwd = le_it(b2, b1, cfg)
    if bwd.outcome is Outcome.FAILS:
        mode = Mode.SYMBOLIC if (fwd.mode is Mode.SYMBOLIC
                                 and bwd.mode is Mode.SYMBOLIC) else Mode.NUMERIC
        return holds(rel, lhs, rhs, mode, forward=fwd.witness.get("reason"),
                     reverse=bwd.witness.get("reason"))
    if bwd.outcome is Outcome.HOLDS:
        return fails(rel, lhs, rhs, bwd.mode, reason="iteration sets are equivalent")
    return unknown(rel, lhs, rhs, **bwd.witness)


# ---------------------------------------------------------------------------
# tameness of finite sets

def _tame_pair_symbolic(e1: Expr, e2: Expr) -> tuple[bool, str] | None:
    if e1 == e2:
        return True, "identical"
    if contains_parity(e1) or contains_parity(e2):
        return None
    sym = _sym_growth(e1, e2)
    if sym is None:
        return None
    cat, reason = sym
    if cat in (GrowthClass.STRICTLY_BELOW, GrowthClass.STRICTLY_ABOVE):
        return True, f"quotient limit {'0' if cat is GrowthClass.STRICTLY_BELOW else 'infinite'}"
    if cat is GrowthClass.SAME_ORDER:
        # same class without case splits: the rounding primitives all
        # converge against their real-valued models, so the quotient does
        return True, "constant quotient converges"
    return None


def _class_trend(meds: list[Fraction]) -> str:
    """Trend of a residue class across the narrow consecutive window.

    The window spans barely a factor of four, so growth shows up as a
    modest net drift, not a doubling per band."""
    if any(m <= 0 for m in meds):
        return "wobble"
    net = meds[-1] / meds[0]
    spread = max(meds) / min(meds)
    if spread <= Fraction(4, 3):
        return "stable"
    if net >= Fraction(3, 2):
        return "grow"
    if net <= Fraction(2, 3):
        return "shrink"
    return "wobble"


def _geo_trend(meds: list[Fraction]) -> str:
    """Trend across geometric scales (powers of two up to the towers)."""
    if any(m <= 0 for m in meds):
        return "wobble"
    net = meds[-1] / meds[0]
    spread = max(meds) / min(meds)
    if net >= 4:
        return "grow"
    if net <= Fraction(1, 4):
        return "shrink"
    if spread <= Fraction(3, 2):
        return "stable"
    return "wobble"


def _quotient_series(
    e1: Expr, e2: Expr, points: list[Numeral]
) -> list[tuple[int, Fraction]]:
    out = []
    for p in points:
        if not p.is_exact_nat():
            continue
        v1 = _exact_value(evaluate(e1, p))
        v2 = _exact_value(evaluate(e2, p))
        if v1 is None or v2 is None or v2 == 0:
            continue
        out.append((p.to_int(), Fraction(v1, v2)))
    return out


def _tame_pair_numeric(
    e1: Expr, e2: Expr, cfg: Config
) -> tuple[bool | None, dict[str, Any]]:
    lo_n, hi_n = 64, cfg.grid_consecutive
    window = _quotient_series(
        e1, e2, [Numeral.from_int(n) for n in range(lo_n, hi_n + 1)]
    )
    if len(window) < 24:
        return None, {"note": "too few exact quotients"}
    width = (hi_n - lo_n + 1) // cfg.osc_scales
    bands = [
        [(n, q) for n, q in window if lo_n + i * width <= n < lo_n + (i + 1) * width]
        for i in range(cfg.osc_scales)
    ]
    if any(len(b) < 4 for b in bands):
        return None, {"note": "bands too sparse"}

    # oscillation: residue classes that settle at separated values, or
    # that diverge while others settle, refute the limit
    for p in range(2, cfg.osc_modulus_cap + 1):
        trends: dict[int, str] = {}
        meds: dict[int, list[Fraction]] = {}
        complete = True
        for r in range(p):
            series = [[q for n, q in b if n % p == r] for b in bands]
            if any(len(s) < 2 for s in series):
                complete = False
                break
            meds[r] = [_median(s) for s in series]
            trends[r] = _class_trend(meds[r])
        if not complete:
            continue
        kinds = set(trends.values())
        if "wobble" in kinds:
            continue
        if kinds == {"stable"}:
            last = [meds[r][-1] for r in range(p)]
            top, bot = max(last), min(last)
            if bot > 0 and top >= cfg.osc_gap_num * bot:
                return False, {
                    "modulus": p,
                    "accumulation": [_frac_short(bot), _frac_short(top)],
                    "gap": _frac_short(top / bot),
                }
        elif len(kinds) > 1:
            return False, {
                "modulus": p,
                "accumulation": sorted(kinds),
                "note": "residue classes drift apart",
            }

    # limit trend on geometric scales
    geo = _quotient_series(
        e1, e2,
        [Numeral.from_int(1 << k) for k in range(6, cfg.grid_pow_max + 1, 2)]
        + [Numeral.tower(k) for k in range(4, cfg.grid_tower_max + 1)],
    )
    geo = sorted(dict(geo).items())
    if len(geo) < 9:
        return None, {"note": "too few geometric sample points"}
    third = len(geo) // 3
    gmeds = [
        _median([q for _, q in geo[i * third:(i + 1) * third if i < 2 else len(geo)]])
        for i in range(3)
    ]
    trend = _geo_trend(gmeds)
    if trend == "wobble":
        return None, {"note": "no stable quotient trend"}
    label = {"grow": "infinite limit", "shrink": "limit zero", "stable": "finite limit"}
    tail = [q for _, q in geo[-third:]]
    return True, {
        "trend": label[trend],
        "liminf": _frac_short(min(tail)),
        "limsup": _frac_short(max(tail)),
    }


def is_tame(exprs: list[Expr], cfg: Config = DEFAULT) -> Verdict:
    """Does every pairwise quotient in the set converge (possibly to infinity)?"""
    rel = "tame"
    uniq: list[Expr] = []
    for e in exprs:
        if e not in uniq:
            uniq.append(e)
    lhs = "{" + ", ".join(render(e) for e in uniq) + "}"
    rhs = "pairwise quotient limits"
    pair_info: dict[str, Any] = {}
    pending_unknown: dict[str, Any] | None = None
    for e1, e2 in combinations(uniq, 2):
        key = f"{render(e1)} / {render(e2)}"
        sym = _tame_pair_symbolic(e1, e2)
        if sym is not None:
            pair_info[key] = sym[1]
            continue
        ok, info = _tame_pair_numeric(e1, e2, cfg)
        if ok is False:
            return fails(rel, lhs, rhs, Mode.NUMERIC, pair=key, **info)
        if ok is None:
            pending_unknown = {"pair": key, **info}
            continue
        pair_info[key] = info
    if pending_unknown is not None:
        return unknown(rel, lhs, rhs, **pending_unknown)
    return holds(rel, lhs, rhs, Mode.NUMERIC, pairs=pair_info)


# ---------------------------------------------------------------------------
# iteration-set utilities over finite lists

def it_equiv(b1: Expr, b2: Expr, cfg: Config = DEFAULT) -> Verdict:
    rel, lhs, rhs = "=it", render(b1), render(b2)
    fwd = le_it(b1, b2, cfg)
    if fwd.outcome is Outcome.UNKNOWN:
        return unknown(rel, lhs, rhs, **fwd.witness)
    if fwd.outcome is Outcome.FAILS:
        return fails(rel, lhs, rhs, fwd.mode, direction="forward", **fwd.witness)
    bwd = le_it(b2, b1, cfg)
    if bwd.outcome is Outcome.UNKNOWN:
        return unknown(rel, lhs, rhs, **bwd.witness)
    if bwd.outcome is Outcome.FAILS:
        return fails(rel, lhs, rhs, bwd.mode, direction="reverse", **bwd.witness)
    mode = Mode.SYMBOLIC if (fwd.mode is Mode.SYMBOLIC
                             and bwd.mode is Mode.SYMBOLIC) else Mode.NUMERIC
    return holds(rel, lhs, rhs, mode)


def it_embed(u1: list[Expr], u2: list[Expr], cfg: Config = DEFAULT) -> Verdict:
    """Map every element of u1 onto an iteration-equivalent element of u2."""
    rel = "it-embed"
    lhs = "{" + ", ".join(render(b) for b in u1) + "}"
    rhs = "{" + ", ".join(render(b) for b in u2) + "}"
    mapping: dict[str, str] = {}
    saw_unknown: dict[str, Any] | None = None
    for b1 in u1:
        partner = None
        for b2 in u2:
            v = it_equiv(b1, b2, cfg)
            if v.outcome is Outcome.HOLDS:
                partner = b2
                break
            if v.outcome is Outcome.UNKNOWN:
                saw_unknown = {"pair": f"{render(b1)} vs {render(b2)}"}
        if partner is None:
            if saw_unknown is not None:
                return unknown(rel, lhs, rhs, **saw_unknown)
            return fails(rel, lhs, rhs, Mode.NUMERIC, unembeddable=render(b1))
        mapping[render(b1)] = render(partner)
    return holds(rel, lhs, rhs, Mode.NUMERIC, mapping=mapping)


def dedupe_it(u: list[Expr], cfg: Config = DEFAULT) -> list[Expr]:
    """One representative per iteration-equivalence class, in ascending order.

    Raises UndecidedComparison when a needed pairwise verdict is Unknown.
    """
    reps: list[Expr] = []
    for b in u:
        dup = False
        for r in reps:
            v = it_equiv(b, r, cfg)
            if v.outcome is Outcome.UNKNOWN:
                raise UndecidedComparison(v.line())
            if v.outcome is Outcome.HOLDS:
                dup = True
                break
        if not dup:
            reps.append(b)
    order: list[Expr] = []
    for b in reps:
        lo = 0
        while lo < len(order):
            v = le_it(b, order[lo], cfg)
            if v.outcome is Outcome.UNKNOWN:
                raise UndecidedComparison(v.line())
            if v.outcome is Outcome.HOLDS:
                break
            lo += 1
        order.insert(lo, b)
    return order
