"""Catalog of named bound sets and dense chain generation.

The generator starts from a base chain of Type 1 factors or Type 2
exponents and repeatedly inserts the geometric midpoint into every
adjacent gap.  Every insertion is validated: the new factor must be
monotone, consistent, and strictly between its parents in the power
order.  Addresses are binary words; their dyadic values reproduce the
chain order, so lookups and closures reduce to word arithmetic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

from .certify import e_consistent, f_consistent, it_of
from .config import DEFAULT, Config
from .expr import (
    ID,
    LOG,
    LOGSTAR,
    Const,
    Expr,
    Mid,
    Type1,
    Type2,
    evaluate_int,
    make_compose,
    make_iterate,
    parse,
    render,
)
from .growth import is_unbounded
from .order import dyadic_str, simplest_between
from .order import val as word_val
from .relations import ll_pow, lt_it, nondecreasing_on_grid
from .verdict import Mode, Outcome, Verdict

TOP_ADDRESS = "top"  # the right endpoint has no binary word; val is 1


# ---------------------------------------------------------------------------
# named-set catalog

@dataclass(frozen=True)
class CatalogEntry:
    tag: str
    representative: Expr
    alternates: tuple[Expr, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def schema(self):
        return it_of(self.representative)


def catalog() -> list[CatalogEntry]:
    """The nine named sets, ordered by growth."""
    return [
        CatalogEntry(
            "Blin", parse("2*n"),
            notes=("splits into two iteration-equivalence classes: the "
                   "identity alone, and every other linear bound",)),
        CatalogEntry("Blogs", parse("type1(logstar)")),
        CatalogEntry("Bqmlin(4)", parse("type1(log{4})")),
        CatalogEntry("Bqmlin(3)", parse("type1(log{3})")),
        CatalogEntry("Bqmlin(2)", parse("type1(log{2})")),
        CatalogEntry(
            "Bqlin", parse("type1(log)"),
            notes=("equal to Bqmlin(1)",)),
        CatalogEntry("Bpol", parse("n^2")),
        CatalogEntry(
            "Bqpol", parse("type2(log)"),
            alternates=(parse("type2(log^2)"),),
            notes=("alternate representatives are iteration-equivalent",)),
        CatalogEntry("Bhex", parse("exp2")),
    ]


def verify_catalog_chain(cfg: Config = DEFAULT) -> list[Verdict]:
    """Strict comparison verdicts for each adjacent catalog pair."""
    entries = catalog()
    return [
        lt_it(a.representative, b.representative, cfg)
        for a, b in zip(entries, entries[1:])
    ]


# ---------------------------------------------------------------------------
# chains

@dataclass
class ChainEntry:
    address: str
    val: Fraction
    bound: Expr
    shape: int
    factor: Expr
    depth: int
    parents: tuple[str, str] | None = None
    t1: Expr | None = None
    t2: Expr | None = None


@dataclass
class UniverseChain:
    params: dict[str, Any]
    entries: list[ChainEntry] = field(default_factory=list)

    def lookup(self, address: str) -> ChainEntry:
        for e in self.entries:
            if e.address == address:
                return e
        raise KeyError(f"no entry at address {address!r}")

    def adjacent_pairs(self) -> Iterator[tuple[ChainEntry, ChainEntry]]:
        yield from zip(self.entries, self.entries[1:])

    def to_doc(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "entries": [
                {
                    "address": e.address,
                    "val": dyadic_str(e.val),
                    "expr": render(e.bound),
                    "depth": e.depth,
                    "parents": list(e.parents) if e.parents else None,
                }
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2)

    def to_dot(self) -> str:
        lines = ["digraph chain {", "  rankdir=LR;", "  node [shape=box];"]
        for e in self.entries:
            name = e.address or "bottom"
            lines.append(
                f'  "{name}" [label="{name}\\n{render(e.bound)}"];')
        for a, b in self.adjacent_pairs():
            lines.append(
                f'  "{a.address or "bottom"}" -> "{b.address or "bottom"}";')
        lines.append("}")
        return "\n".join(lines)


def _bound_for(shape: int, factor: Expr) -> Expr:
    if shape == 1:
        if isinstance(factor, Const) and factor.k == 2:
            return parse("2*n")
        if factor is ID or factor == ID:
            return parse("n^2")
        return Type1(factor)
    if isinstance(factor, Const) and factor.k == 2:
        return parse("n^2")
    return Type2(factor)


_PROBE_POINTS = [
    16, 256, 1 << 16, 1 << 32, 1 << 64, 1 << 256, 1 << 4096, 1 << 65536,
]


def _fingerprint(factor: Expr) -> tuple[int | None, ...]:
    out = []
    for n in _PROBE_POINTS:
        v = evaluate_int(factor, n)
        out.append(v.to_int() if v.is_exact_nat() else None)
    return tuple(out)


def _validate_factor(factor: Expr, cfg: Config) -> None:
    if not nondecreasing_on_grid(factor, cfg):
        raise ValueError(f"factor not monotone on the grid: {render(factor)}")
    one = evaluate_int(factor, 2)
    if not one.is_exact_nat() or one.to_int() < 1:
        raise ValueError(f"factor drops below one: {render(factor)}")


def _base_entries(kind: str, cap: int,
                  gap: tuple[Expr, Expr] | None,
                  cfg: Config) -> tuple[list[tuple[int, Expr]], list[str]]:
    """The base row as (shape, factor) pairs plus flags for the output."""
    flags: list[str] = []
    if gap is not None:
        lo, hi = gap
        shape = 2 if kind == "2" else 1
        v = ll_pow(lo, hi, cfg)
        if v.outcome is not Outcome.HOLDS:
            raise ValueError(f"gap endpoints not separated: {v.line()}")
        return [(shape, lo), (shape, hi)], flags
    t1_row: list[tuple[int, Expr]] = [(1, Const(2)), (1, LOGSTAR)]
    for m in range(cap, 0, -1):
        t1_row.append((1, make_iterate(LOG, m) if m > 1 else LOG))
    t1_row.append((1, ID))
    t2_row: list[tuple[int, Expr]] = [(2, Const(2)), (2, LOG)]
    if kind == "1":
        flags.append(
            f"gap logstar..log{{{cap}}} truncates an infinite family")
        return t1_row, flags
    if kind == "2":
        return t2_row, flags
    flags.append(
        f"gap logstar..log{{{cap}}} truncates an infinite family")
    flags.append("n^2 carries both shapes: top Type 1 factor, exponent 2")
    return t1_row + t2_row[1:], flags


def generate(
    kind: int | str = 1,
    depth: int = 0,
    cap: int = 4,
    gap: tuple[Expr, Expr] | None = None,
    cfg: Config = DEFAULT,
) -> UniverseChain:
    """Dense chain from the base row by repeated midpoint insertion."""
    kind = str(kind)
    if kind not in ("1", "2", "combined"):
        raise ValueError(f"unknown chain type {kind!r}")
    if depth > cfg.max_depth:
        raise ValueError(f"depth {depth} exceeds the maximum {cfg.max_depth}")
    base, flags = _base_entries(kind, cap, gap, cfg)
    chain = UniverseChain(params={
        "type": kind, "depth": depth, "cap": cap,
        "gap": [render(g) for g in gap] if gap else None,
        "flags": flags,
    })
    for shape, factor in base:
        _validate_factor(factor, cfg)
    addresses = _balanced_addresses(len(base))
    seen: dict[tuple[int | None, ...], str] = {}
    for (shape, factor), (addr, v) in zip(base, addresses):
        t1 = factor if shape == 1 else None
        t2 = factor if shape == 2 else None
        if kind == "combined" and shape == 1 and factor == ID:
            t2 = Const(2)  # the identified entry
        if kind != "combined" and shape == 2 and isinstance(factor, Const):
            t1 = ID
        e = ChainEntry(addr, v, _bound_for(shape, factor), shape, factor,
                       depth=0, t1=t1, t2=t2)
        chain.entries.append(e)
        seen[_fingerprint(factor)] = addr
    for round_no in range(1, depth + 1):
        _insert_round(chain, round_no, seen, cfg)
    return chain


def _balanced_addresses(count: int) -> list[tuple[str, Fraction]]:
    """First element at the empty word, last at the synthetic top, the
    rest placed like a balanced search tree over the unit interval."""
    if count < 2:
        raise ValueError("base row needs at least two elements")
    slots: list[tuple[str, Fraction] | None] = [None] * count
    slots[0] = ("", Fraction(0))
    slots[-1] = (TOP_ADDRESS, Fraction(1))

    def place(i: int, j: int, lo: Fraction, hi: Fraction) -> None:
        if i > j:
            return
        m = (i + j) // 2
        w = simplest_between(lo, hi)
        slots[m] = (w, word_val(w))
        place(i, m - 1, lo, word_val(w))
        place(m + 1, j, word_val(w), hi)

    place(1, count - 2, Fraction(0), Fraction(1))
    return [s for s in slots if s is not None]


def _gap_shape(left: ChainEntry, right: ChainEntry) -> tuple[int, Expr, Expr]:
    if left.t1 is not None and right.t1 is not None:
        return 1, left.t1, right.t1
    if left.t2 is not None and right.t2 is not None:
        return 2, left.t2, right.t2
    raise ValueError(
        f"gap {left.address!r}..{right.address!r} has no common shape")


def _insert_round(chain: UniverseChain, round_no: int,
                  seen: dict[tuple[int | None, ...], str],
                  cfg: Config) -> None:
    new_entries: list[ChainEntry] = []
    for left, right in chain.adjacent_pairs():
        shape, a1, a2 = _gap_shape(left, right)
        mid = Mid(a1, a2)
        _validate_factor(mid, cfg)
        cert = (f_consistent(mid, cfg) if shape == 1
                else e_consistent(mid, cfg))
        if not cert.ok:
            raise ValueError(
                f"midpoint of {left.address!r}..{right.address!r} failed "
                f"consistency: {cert.line()}")
        below = ll_pow(a1, mid, cfg)
        above = ll_pow(mid, a2, cfg)
        if below.outcome is not Outcome.HOLDS \
                or above.outcome is not Outcome.HOLDS:
            bad = below if below.outcome is not Outcome.HOLDS else above
            raise ValueError(
                f"betweenness failed in gap {left.address!r}.."
                f"{right.address!r}: {bad.line()}")
        if render(mid) in {render(e.factor) for e in chain.entries}:
            raise RuntimeError(
                f"midpoint of {left.address!r}..{right.address!r} "
                f"normalizes to an existing entry; separation bug")
        fp = _fingerprint(mid)
        if fp in seen:
            # slow factors can agree with a neighbor at every feasible
            # point; that is only contradictory when the separation
            # evidence was itself numeric
            if below.mode is Mode.NUMERIC and above.mode is Mode.NUMERIC:
                raise RuntimeError(
                    f"midpoint of {left.address!r}..{right.address!r} "
                    f"collides with entry {seen[fp]!r} on the whole grid "
                    f"despite numeric separation; inconsistent evidence")
            chain.params.setdefault("grid_coincidences", []).append(
                [render(mid), seen[fp]])
        addr = simplest_between(left.val, right.val)
        e = ChainEntry(
            addr, word_val(addr), _bound_for(shape, mid), shape, mid,
            depth=round_no, parents=(left.address, right.address),
            t1=mid if shape == 1 else None,
            t2=mid if shape == 2 else None,
        )
        seen.setdefault(fp, addr)
        new_entries.append(e)
    chain.entries.extend(new_entries)
    chain.entries.sort(key=lambda e: e.val)


# ---------------------------------------------------------------------------
# descending chains

def descending_chain(
    a1: Expr, a2: Expr, length: int, cfg: Config = DEFAULT
) -> list[Expr]:
    """a2, a1(a2), a1(a1(a2)), ...: each strictly below its predecessor
    in the power order."""
    if length < 1:
        raise ValueError("length must be positive")
    if is_unbounded(a2) is not True:
        raise ValueError(f"{render(a2)} is not a verified unbounded factor")
    sep = ll_pow(a1, ID, cfg)
    if sep.outcome is not Outcome.HOLDS:
        raise ValueError(f"outer factor too large: {sep.line()}")
    out = [a2]
    for _ in range(length - 1):
        nxt = make_compose(a1, out[-1])
        drop = ll_pow(nxt, out[-1], cfg)
        if drop.outcome is not Outcome.HOLDS:
            raise ValueError(f"chain stalled: {drop.line()}")
        out.append(nxt)
    return out
