"""Expression trees for time-bound functions, with parser and evaluator.

Every expression denotes a function of n. Bare primitives are functions
(log is n |-> ceil(log2 n)); application syntax composes: log(e) is
log after e. Canonicalization is limited to flattening nested sums and
products, dropping identity compositions, and merging repeated
compositions of one base into an iterate node. Nothing is otherwise
rewritten, so parse and render are mutually inverse.

Grammar (whitespace insignificant):

    e := e+e | e*e | e^INT | (e) | INT | n
       | log | mlog | msqrt | logstar | exp2          bare primitives
       | log(e) | mlog(e) | msqrt(e) | logstar(e) | exp2(e)
       | log{m} | log{m}(e)                            m-fold log, m >= 1
       | comp(e,e) | iter(e,m) | mid(e,e) | type1(e) | type2(e)
       | parity(e,e)                                   even/odd case split
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .numeral import Numeral, hull


class Expr:
    """Base class; all nodes are frozen, hashable, and comparable."""

    def render(self, prec: int = 0) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


# precedence levels for rendering: sum < product < power < atom
_P_ADD, _P_MUL, _P_POW, _P_ATOM = 1, 2, 3, 4


def _wrap(s: str, inner_prec: int, outer_prec: int) -> str:
    return f"({s})" if inner_prec < outer_prec else s


@dataclass(frozen=True)
class Id(Expr):
    def render(self, prec: int = 0) -> str:
        return "n"


@dataclass(frozen=True)
class Const(Expr):
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("constants are naturals")

    def render(self, prec: int = 0) -> str:
        return str(self.k)


@dataclass(frozen=True)
class Add(Expr):
    args: tuple[Expr, ...]

    def render(self, prec: int = 0) -> str:
        s = "+".join(a.render(_P_ADD) for a in self.args)
        return _wrap(s, _P_ADD, prec)


@dataclass(frozen=True)
class Mul(Expr):
    args: tuple[Expr, ...]

    def render(self, prec: int = 0) -> str:
        s = "*".join(a.render(_P_MUL) for a in self.args)
        return _wrap(s, _P_MUL, prec)


@dataclass(frozen=True)
class PowConst(Expr):
    base: Expr
    k: int

    def render(self, prec: int = 0) -> str:
        s = f"{self.base.render(_P_ATOM)}^{self.k}"
        return _wrap(s, _P_POW, prec)


@dataclass(frozen=True)
class Log(Expr):
    def render(self, prec: int = 0) -> str:
        return "log"


@dataclass(frozen=True)
class MLog(Expr):
    def render(self, prec: int = 0) -> str:
        return "mlog"


@dataclass(frozen=True)
class MSqrt(Expr):
    def render(self, prec: int = 0) -> str:
        return "msqrt"


@dataclass(frozen=True)
class LogStar(Expr):
    def render(self, prec: int = 0) -> str:
        return "logstar"


@dataclass(frozen=True)
class Exp2(Expr):
    def render(self, prec: int = 0) -> str:
        return "exp2"


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr

    def render(self, prec: int = 0) -> str:
        head = _apply_name(self.outer)
        if head is not None:
            return f"{head}({self.inner.render()})"
        return f"comp({self.outer.render()},{self.inner.render()})"


@dataclass(frozen=True)
class Iterate(Expr):
    f: Expr
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("iteration count must be >= 1")

    def render(self, prec: int = 0) -> str:
        if self.f == LOG:
            return "log{%d}" % self.m
        return f"iter({self.f.render()},{self.m})"


@dataclass(frozen=True)
class Type1(Expr):
    alpha: Expr

    def render(self, prec: int = 0) -> str:
        return f"type1({self.alpha.render()})"


@dataclass(frozen=True)
class Type2(Expr):
    alpha: Expr

    def render(self, prec: int = 0) -> str:
        return f"type2({self.alpha.render()})"


@dataclass(frozen=True)
class Mid(Expr):
    left: Expr
    right: Expr

    def render(self, prec: int = 0) -> str:
        return f"mid({self.left.render()},{self.right.render()})"


@dataclass(frozen=True)
class ParityCase(Expr):
    even: Expr
    odd: Expr

    def render(self, prec: int = 0) -> str:
        return f"parity({self.even.render()},{self.odd.render()})"


ID = Id()
LOG = Log()
MLOG = MLog()
MSQRT = MSqrt()
LOGSTAR = LogStar()
EXP2 = Exp2()

_PRIMS = {"log": LOG, "mlog": MLOG, "msqrt": MSQRT, "logstar": LOGSTAR, "exp2": EXP2}


def _apply_name(outer: Expr) -> str | None:
    """Function-application spelling for an outer composition head."""
    for name, prim in _PRIMS.items():
        if outer == prim:
            return name
    if isinstance(outer, Iterate) and outer.f == LOG:
        return "log{%d}" % outer.m
    return None


# -- smart constructors ------------------------------------------------------


def make_add(args: list[Expr]) -> Expr:
    flat: list[Expr] = []
    for a in args:
        flat.extend(a.args) if isinstance(a, Add) else flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def make_mul(args: list[Expr]) -> Expr:
    flat: list[Expr] = []
    for a in args:
        flat.extend(a.args) if isinstance(a, Mul) else flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def make_iterate(f: Expr, m: int) -> Expr:
    if m < 1:
        raise ValueError("iteration count must be >= 1")
    if isinstance(f, Iterate):
        return make_iterate(f.f, f.m * m)
    if m == 1:
        return f
    return Iterate(f, m)


def _comp_chain(e: Expr) -> list[Expr]:
    if isinstance(e, Compose):
        return _comp_chain(e.outer) + _comp_chain(e.inner)
    return [e]


def make_compose(f: Expr, g: Expr) -> Expr:
    """Composition f after g, canonical: Id dropped, equal bases merged."""
    items = [x for x in _comp_chain(f) + _comp_chain(g) if x != ID]
    if not items:
        return ID
    merged: list[list] = []
    for x in items:
        base, m = (x.f, x.m) if isinstance(x, Iterate) else (x, 1)
        if merged and merged[-1][0] == base:
            merged[-1][1] += m
        else:
            merged.append([base, m])
    nodes = [make_iterate(b, m) for b, m in merged]
    out = nodes[-1]
    for nd in reversed(nodes[:-1]):
        out = Compose(nd, out)
    return out


# -- parser ---------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|([+*^(){},]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                if text[pos:].strip():
                    raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
                break
            if m.group(1):
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            else:
                self.toks.append(("sym", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        if self.i < len(self.toks):
            return self.toks[self.i]
        return ("eof", "", len(self.text))

    def next(self) -> tuple[str, str, int]:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, sym: str) -> None:
        kind, val, pos = self.next()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        e = self.sum()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing input {val!r}", pos)
        return e

    def sum(self) -> Expr:
        args = [self.product()]
        while self.peek()[:2] == ("sym", "+"):
            self.next()
            args.append(self.product())
        return make_add(args)

    def product(self) -> Expr:
        args = [self.power()]
        while self.peek()[:2] == ("sym", "*"):
            self.next()
            args.append(self.power())
        return make_mul(args)

    def power(self) -> Expr:
        e = self.atom()
        while self.peek()[:2] == ("sym", "^"):
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise ParseError("exponent must be an integer constant", pos)
            e = PowConst(e, int(val))
        return e

    def atom(self) -> Expr:
        kind, val, pos = self.next()
        if kind == "int":
            return Const(int(val))
        if kind == "sym" and val == "(":
            e = self.sum()
            self.expect(")")
            return e
        if kind == "name":
            return self.named(val, pos)
        raise ParseError(f"expected an expression, found {val or 'end of input'!r}", pos)

    def args(self, count: int, name: str, pos: int) -> list[Expr]:
        self.expect("(")
        out = [self.sum()]
        while self.peek()[:2] == ("sym", ","):
            self.next()
            out.append(self.sum())
        self.expect(")")
        if len(out) != count:
            raise ParseError(f"{name} takes {count} argument(s), got {len(out)}", pos)
        return out

    def int_arg(self, pos: int) -> int:
        kind, val, p = self.next()
        if kind != "int":
            raise ParseError("expected an integer", p)
        return int(val)

    def named(self, name: str, pos: int) -> Expr:
        if name == "n":
            return ID
        if name in _PRIMS:
            prim: Expr = _PRIMS[name]
            if name == "log" and self.peek()[:2] == ("sym", "{"):
                self.next()
                m = self.int_arg(pos)
                self.expect("}")
                if m < 1:
                    raise ParseError("log{m} needs m >= 1", pos)
                prim = make_iterate(LOG, m)
            if self.peek()[:2] == ("sym", "("):
                (inner,) = self.args(1, name, pos)
                return make_compose(prim, inner)
            return prim
        if name == "comp":
            f, g = self.args(2, name, pos)
            return make_compose(f, g)
        if name == "iter":
            self.expect("(")
            f = self.sum()
            self.expect(",")
            m = self.int_arg(pos)
            self.expect(")")
            if m < 1:
                raise ParseError("iter(e,m) needs m >= 1", pos)
            return make_iterate(f, m)
        if name == "mid":
            a, b = self.args(2, name, pos)
            return Mid(a, b)
        if name == "type1":
            (a,) = self.args(1, name, pos)
            return Type1(a)
        if name == "type2":
            (a,) = self.args(1, name, pos)
            return Type2(a)
        if name == "parity":
            a, b = self.args(2, name, pos)
            return ParityCase(a, b)
        raise ParseError(f"unknown name {name!r}", pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def render(e: Expr) -> str:
    return e.render()


# -- evaluation -------------------------------------------------------------------


@lru_cache(maxsize=200_000)
def _eval(e: Expr, n: Numeral) -> Numeral:
    if isinstance(e, Id):
        return n
    if isinstance(e, Const):
        return Numeral.from_int(e.k)
    if isinstance(e, Add):
        out = _eval(e.args[0], n)
        for a in e.args[1:]:
            out = out.add(_eval(a, n))
        return out
    if isinstance(e, Mul):
        out = _eval(e.args[0], n)
        for a in e.args[1:]:
            out = out.mul(_eval(a, n))
        return out
    if isinstance(e, PowConst):
        return _eval(e.base, n).pow_int(e.k)
    if isinstance(e, Log):
        return n.log()
    if isinstance(e, MLog):
        return n.mlog()
    if isinstance(e, MSqrt):
        return n.msqrt()
    if isinstance(e, LogStar):
        return n.logstar()
    if isinstance(e, Exp2):
        return n.exp2()
    if isinstance(e, Compose):
        return _eval(e.outer, _eval(e.inner, n))
    if isinstance(e, Iterate):
        out = n
        for _ in range(e.m):
            out = _eval(e.f, out)
        return out
    if isinstance(e, Type1):
        return n.mul(_eval(e.alpha, n))
    if isinstance(e, Type2):
        return n.pow(_eval(e.alpha, n))
    if isinstance(e, Mid):
        x = _eval(e.left, n).mlog()
        y = _eval(e.right, n).mlog()
        return x.mul(y).msqrt().exp2()
    if isinstance(e, ParityCase):
        p = n.parity()
        if p == 0:
            return _eval(e.even, n)
        if p == 1:
            return _eval(e.odd, n)
        return hull(_eval(e.even, n), _eval(e.odd, n))
    raise TypeError(f"cannot evaluate {e!r}")


def evaluate(e: Expr, n: Numeral) -> Numeral:
    """Value of e at n: exact when feasible, sound enclosure otherwise."""
    return _eval(e, n)


def evaluate_int(e: Expr, n: int) -> Numeral:
    return _eval(e, Numeral.from_int(n))


def clear_eval_cache() -> None:
    """Required after changing the bit budget; cached values assume it."""
    _eval.cache_clear()


# -- structural helpers -----------------------------------------------------------


def is_constant(e: Expr) -> bool:
    """Syntactically constant (no dependence on n)."""
    if isinstance(e, Const):
        return True
    if isinstance(e, (Add, Mul)):
        return all(is_constant(a) for a in e.args)
    if isinstance(e, PowConst):
        return is_constant(e.base)
    return False


def const_value(e: Expr) -> int | None:
    if not is_constant(e):
        return None
    return evaluate(e, Numeral.from_int(0)).to_int()


def contains_parity(e: Expr) -> bool:
    if isinstance(e, ParityCase):
        return True
    kids: tuple[Expr, ...] = ()
    if isinstance(e, (Add, Mul)):
        kids = e.args
    elif isinstance(e, PowConst):
        kids = (e.base,)
    elif isinstance(e, Compose):
        kids = (e.outer, e.inner)
    elif isinstance(e, Iterate):
        kids = (e.f,)
    elif isinstance(e, (Type1, Type2)):
        kids = (e.alpha,)
    elif isinstance(e, Mid):
        kids = (e.left, e.right)
    return any(contains_parity(k) for k in kids)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Add, Mul)):
        return e.args
    if isinstance(e, PowConst):
        return (e.base,)
    if isinstance(e, Compose):
        return (e.outer, e.inner)
    if isinstance(e, Iterate):
        return (e.f,)
    if isinstance(e, (Type1, Type2)):
        return (e.alpha,)
    if isinstance(e, Mid):
        return (e.left, e.right)
    if isinstance(e, ParityCase):
        return (e.even, e.odd)
    return ()
