"""Certificates for structural properties of bound sets.

A certificate records how a property claim was settled: by a general
closure rule applied to already-certified pieces, by a direct numeric
search over the sample grid, by declaration (asserted input we cannot
re-derive), or refuted with a concrete witness.  Certificates carry the
precondition verdicts they consumed, so a reader can audit the chain.

The desk-scale oracle at the bottom is deliberately brute force: it
exhaustively maximizes partition sums and sweeps superadditivity at
small sizes, which is the regime where an implementation bug would
show up as a clean counterexample.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .config import DEFAULT, Config
from .expr import (
    Compose,
    Const,
    Expr,
    Mid,
    Type1,
    Type2,
    evaluate_int,
    make_add,
    make_compose,
    make_iterate,
    parse,
    render,
)
from .relations import (
    cmp_ae,
    e_consistency_exponent,
    f_consistency_exponent,
    is_superlinear,
    nondecreasing_on_grid,
)
from .verdict import Outcome

# statuses
BY_LEMMA = "certified-by-lemma"
NUMERIC = "numeric"
DECLARED = "declared"
REFUTED = "refuted"
UNKNOWN = "unknown"

# rule identifiers for the by-lemma routes
RULE_MID_F = "midpoint-inherits-factor-consistency"
RULE_MID_E = "midpoint-inherits-exponent-consistency"
RULE_COMPOSE = "composition-of-consistent-factors"
RULE_IT_REGULAR = "iteration-of-constructible-superlinear"
RULE_NAMED = "confinal-iteration-representative"
RULE_DOWNCLOSET = "downward-closed-in-tame-universe"
RULE_PARTITION = "iteration-set-partition-bound"


@dataclass(frozen=True)
class Certificate:
    prop: str
    status: str
    rule: str | None = None
    parameters: dict[str, Any] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    consumed: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status not in (REFUTED, UNKNOWN)

    @property
    def exit_code(self) -> int:
        if self.ok:
            return 0
        return 1 if self.status == REFUTED else 2

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.prop,
            "status": self.status,
            "lemma": self.rule,
            "parameters": self.parameters,
            "witnesses": self.witnesses,
            "consumed": list(self.consumed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def line(self) -> str:
        tag = f"{BY_LEMMA}({self.rule})" if self.rule else self.status
        extra = ""
        if "l" in self.parameters:
            extra = f", l={self.parameters['l']}"
        return f"{self.prop}: {tag}{extra}"


# ---------------------------------------------------------------------------
# bound-set schemas

_NAMED_REPS: dict[str, str] = {
    "Blin": "2*n",
    "Blogs": "type1(logstar)",
    "Bqmlin(4)": "type1(log{4})",
    "Bqmlin(3)": "type1(log{3})",
    "Bqmlin(2)": "type1(log{2})",
    "Bqmlin(1)": "type1(log)",
    "Bqlin": "type1(log)",
    "Bpol": "n^2",
    "Bqpol": "type2(log)",
    "Bhex": "exp2",
}


@dataclass(frozen=True)
class BoundSetSchema:
    """Finite description of a (possibly infinite) set of bounds."""

    kind: str
    bound: Expr | None = None
    members: tuple[Expr, ...] = ()
    parts: tuple["BoundSetSchema", ...] = ()
    tag: str | None = None
    factor: Expr | None = None
    shape: int | None = None
    chain: Any = None
    addresses: tuple[str, ...] = ()
    declared: bool = True

    def describe(self) -> str:
        if self.kind == "it":
            return f"it({render(self.bound)})"
        if self.kind == "finite":
            return "{" + ", ".join(render(m) for m in self.members) + "}"
        if self.kind == "union":
            return " u ".join(p.describe() for p in self.parts)
        if self.kind == "named":
            return self.tag or "?"
        if self.kind == "powfam":
            return f"pow{self.shape}({render(self.factor)})"
        if self.kind == "downcloset":
            return "downcloset{" + ",".join(self.addresses) + "}"
        return self.kind


def it_of(b: Expr, declared: bool = True) -> BoundSetSchema:
    return BoundSetSchema(kind="it", bound=b, declared=declared)


def finite_set(members: Iterable[Expr], declared: bool = False) -> BoundSetSchema:
    return BoundSetSchema(kind="finite", members=tuple(members), declared=declared)


def named_set(tag: str) -> BoundSetSchema:
    if tag not in _NAMED_REPS:
        raise ValueError(f"unknown named set {tag!r}")
    return BoundSetSchema(kind="named", tag=tag)


def union_of(parts: Iterable[BoundSetSchema]) -> BoundSetSchema:
    return BoundSetSchema(kind="union", parts=tuple(parts))


def pow_family(factor: Expr, shape: int) -> BoundSetSchema:
    if shape not in (1, 2):
        raise ValueError("shape must be 1 or 2")
    return BoundSetSchema(kind="powfam", factor=factor, shape=shape)


def downcloset(chain: Any, addresses: Iterable[str]) -> BoundSetSchema:
    return BoundSetSchema(
        kind="downcloset", chain=chain, addresses=tuple(addresses)
    )


def parse_schema(text: str) -> BoundSetSchema:
    """Schema syntax for the command line: it(EXPR), {e1, e2}, or a set name."""
    t = text.strip()
    if t.startswith("it(") and t.endswith(")"):
        return it_of(parse(t[3:-1]))
    if t.startswith("{") and t.endswith("}"):
        inner = t[1:-1].strip()
        members = [parse(p) for p in _split_members(inner)] if inner else []
        return finite_set(members)
    if t in _NAMED_REPS:
        return named_set(t)
    raise ValueError(f"cannot parse set schema {text!r}")


def _split_members(inner: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch in "({["
        depth -= ch in ")}]"
        cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


# ---------------------------------------------------------------------------
# factor-consistency certificates

def f_consistent(a: Expr, cfg: Config = DEFAULT) -> Certificate:
    """Squaring the argument raises the factor by at most a fixed power."""
    return _consistency(a, cfg, "f-consistent")


def e_consistent(a: Expr, cfg: Config = DEFAULT) -> Certificate:
    """Quasi-polynomial argument growth raises the exponent factor by at
    most a fixed power."""
    return _consistency(a, cfg, "e-consistent")


def _consistency(a: Expr, cfg: Config, prop: str) -> Certificate:
    mid_rule = RULE_MID_F if prop == "f-consistent" else RULE_MID_E
    if isinstance(a, Const):
        return Certificate(prop, NUMERIC, parameters={"l": 1},
                           witnesses={"note": "constant factor"})
    if isinstance(a, Mid):
        left = _consistency(a.left, cfg, prop)
        right = _consistency(a.right, cfg, prop)
        if left.ok and right.ok:
            return Certificate(
                prop, BY_LEMMA, rule=mid_rule,
                parameters={"parents": [render(a.left), render(a.right)]},
                consumed=(left.line(), right.line()),
            )
        bad = left if not left.ok else right
        return Certificate(prop, UNKNOWN,
                           witnesses={"blocked_on": bad.line()})
    if isinstance(a, Compose):
        outer, inner = a.outer, a.inner
        co = _consistency(outer, cfg, "f-consistent")
        ci = _consistency(inner, cfg, prop)
        if co.ok and ci.ok:
            lo = co.parameters.get("l")
            li = ci.parameters.get("l")
            combined = None
            if isinstance(lo, int) and isinstance(li, int):
                combined = lo ** max(1, (li - 1).bit_length())
            return Certificate(
                prop, BY_LEMMA, rule=RULE_COMPOSE,
                parameters={"l": combined, "outer": render(outer),
                            "inner": render(inner)},
                consumed=(co.line(), ci.line()),
            )
    checker = (f_consistency_exponent if prop == "f-consistent"
               else e_consistency_exponent)
    got = checker(a, cfg)
    if got is None:
        note = ("factor is not nondecreasing on the grid"
                if not nondecreasing_on_grid(a, cfg)
                else "no uniform exponent within the power cap")
        return Certificate(prop, UNKNOWN, witnesses={"note": note})
    l, threshold = got
    return Certificate(prop, NUMERIC, parameters={"l": l},
                       witnesses={"threshold": threshold})


# ---------------------------------------------------------------------------
# regularity

def regular_check(schema: BoundSetSchema, cfg: Config = DEFAULT) -> Certificate:
    """A set is regular when sums of members composed with members stay
    dominated inside the set (and members have constructible majorants)."""
    if schema.kind == "it":
        return _regular_it(schema.bound, schema.declared, RULE_IT_REGULAR, cfg)
    if schema.kind == "named":
        rep = parse(_NAMED_REPS[schema.tag])
        cert = _regular_it(rep, True, RULE_NAMED, cfg)
        return Certificate(
            cert.prop, cert.status, rule=cert.rule,
            parameters={**cert.parameters, "set": schema.tag,
                        "representative": render(rep)},
            witnesses=cert.witnesses, consumed=cert.consumed,
        )
    if schema.kind == "finite":
        return _regular_finite(schema.members, schema.declared, cfg)
    if schema.kind == "union":
        if all(p.kind == "finite" for p in schema.parts):
            merged = tuple(m for p in schema.parts for m in p.members)
            declared = all(p.declared for p in schema.parts)
            return _regular_finite(merged, declared, cfg)
        return Certificate("regular", UNKNOWN,
                           witnesses={"note": "union has unbounded parts"})
    if schema.kind == "downcloset":
        return _regular_downcloset(schema, cfg)
    if schema.kind == "powfam":
        return _regular_powfam(schema, cfg)
    raise ValueError(f"unknown schema kind {schema.kind!r}")


def _regular_it(b: Expr, declared: bool, rule: str, cfg: Config) -> Certificate:
    sup = is_superlinear(b, cfg)
    if sup.outcome is Outcome.HOLDS:
        return Certificate(
            "regular", BY_LEMMA, rule=rule,
            parameters={"route": "superlinear",
                        "constructible": "declared" if declared else "unknown"},
            consumed=(sup.line(),),
        )
    slope = _ultimately_linear_slope(b, cfg)
    if slope is not None and slope >= 2:
        return Certificate(
            "regular", BY_LEMMA, rule=rule,
            parameters={"route": "ultimately-linear", "slope": slope,
                        "constructible": "declared" if declared else "unknown"},
            consumed=(sup.line(),),
        )
    if slope == 1:
        # iterates of an eventually-identity bound collapse to the bound
        # itself, so the direct sum-of-compositions check is decisive
        return _regular_finite((b,), declared, cfg)
    return Certificate("regular", UNKNOWN,
                       witnesses={"note": "base bound is neither superlinear "
                                          "nor ultimately linear on the grid"})


def _ultimately_linear_slope(b: Expr, cfg: Config) -> int | None:
    """Constant c with b(n) = c*n exactly at every sampled point of a tail."""
    probes = list(range(97, 257)) + [1 << 20, (1 << 30) + 7]
    ratios = set()
    for n in probes:
        v = evaluate_int(b, n)
        if not v.is_exact_nat():
            return None
        val = v.to_int()
        if val % n:
            return None
        ratios.add(val // n)
        if len(ratios) > 1:
            return None
    return ratios.pop()


def _regular_finite(
    members: tuple[Expr, ...], declared: bool, cfg: Config
) -> Certificate:
    ms: list[Expr] = []
    seen = set()
    for m in members:
        if render(m) not in seen:
            seen.add(render(m))
            ms.append(m)
    if not ms:
        return Certificate("regular", UNKNOWN, witnesses={"note": "empty set"})
    checked = 0
    for b in ms:
        for bp in ms:
            need = make_add([b, make_compose(bp, b)])
            if not any(
                cmp_ae(need, cand, cfg).outcome is Outcome.HOLDS for cand in ms
            ):
                return Certificate(
                    "regular", REFUTED,
                    witnesses={"pair": [render(b), render(bp)],
                               "needed": render(need),
                               "note": "no member dominates the sum"},
                )
            checked += 1
    return Certificate(
        "regular", NUMERIC,
        parameters={"condition_i": "declared" if declared else "unknown"},
        witnesses={"pairs_checked": checked},
    )


def _regular_downcloset(schema: BoundSetSchema, cfg: Config) -> Certificate:
    if schema.chain is None or not schema.addresses:
        return Certificate("regular", UNKNOWN,
                           witnesses={"note": "empty address set"})
    by_addr = {e.address: e for e in schema.chain.entries}
    missing = [a for a in schema.addresses if a not in by_addr]
    if missing:
        return Certificate("regular", UNKNOWN,
                           witnesses={"note": "unknown addresses",
                                      "addresses": missing})
    bottom = min((by_addr[a] for a in schema.addresses), key=lambda e: e.val)
    grow = cmp_ae(parse("2*n"), bottom.bound, cfg)
    if grow.outcome is not Outcome.HOLDS:
        return Certificate("regular", UNKNOWN,
                           witnesses={"note": "smallest member does not "
                                              "dominate doubling",
                                      "bottom": render(bottom.bound)})
    return Certificate(
        "regular", BY_LEMMA, rule=RULE_DOWNCLOSET,
        parameters={"bottom": render(bottom.bound),
                    "size": len(schema.addresses)},
        consumed=(grow.line(),),
    )


def _regular_powfam(schema: BoundSetSchema, cfg: Config) -> Certificate:
    prop = "f-consistent" if schema.shape == 1 else "e-consistent"
    cert = _consistency(schema.factor, cfg, prop)
    base = (Type1(schema.factor) if schema.shape == 1
            else Type2(schema.factor))
    if not cert.ok:
        return Certificate("regular", UNKNOWN,
                           witnesses={"blocked_on": cert.line()})
    inner = _regular_it(base, schema.declared, RULE_IT_REGULAR, cfg)
    if not inner.ok:
        return inner
    return Certificate(
        "regular", BY_LEMMA, rule=inner.rule,
        parameters={**inner.parameters, "family_shape": schema.shape},
        consumed=inner.consumed + (cert.line(),),
    )


def iteration_definition_probe(
    b: Expr, depth: int = 4, cfg: Config = DEFAULT
) -> dict[str, Any]:
    """Check the sum-of-compositions condition directly on a truncated
    iteration set: for iterates i, j with i+j+1 <= depth, some iterate
    dominates beta_i + beta_j o beta_i.  Agreement with the certified
    route is an invariant, not a substitute for it."""
    its = [make_iterate(b, k) if k > 1 else b for k in range(1, depth + 1)]
    checked, failures = 0, []
    for i in range(1, depth + 1):
        for j in range(1, depth + 1):
            if i + j + 1 > depth:
                continue
            need = make_add([its[i - 1], make_compose(its[j - 1], its[i - 1])])
            if not any(
                cmp_ae(need, cand, cfg).outcome is Outcome.HOLDS
                for cand in its
            ):
                failures.append((i, j))
            checked += 1
    return {"ok": not failures, "pairs_checked": checked,
            "failures": failures}


# ---------------------------------------------------------------------------
# o-regularity and the desk-scale partition oracle

def o_regular_check(
    schema: BoundSetSchema,
    cfg: Config = DEFAULT,
    n_max: int | None = None,
    s_max: int | None = None,
) -> Certificate:
    """Partition sums over a budget never beat spending the whole budget
    on one block; checked exhaustively at desk scale."""
    n_max = n_max if n_max is not None else cfg.n_max
    s_max = s_max if s_max is not None else cfg.s_max
    if schema.kind == "named" and schema.tag == "Bhex":
        oracle = _desk_oracle(parse(_NAMED_REPS["Bhex"]), n_max, s_max)
        if oracle.get("refuted"):
            return Certificate("o-regular", REFUTED, witnesses=oracle)
        return Certificate(
            "o-regular", DECLARED,
            parameters={"set": "Bhex"},
            witnesses={"note": "asserted without a partition-rule derivation",
                       **oracle},
        )
    if schema.kind == "named":
        rep = parse(_NAMED_REPS[schema.tag])
        cert = _o_regular_it(rep, cfg, n_max, s_max)
        return Certificate(
            cert.prop, cert.status, rule=cert.rule,
            parameters={**cert.parameters, "set": schema.tag},
            witnesses=cert.witnesses, consumed=cert.consumed,
        )
    if schema.kind == "it":
        return _o_regular_it(schema.bound, cfg, n_max, s_max)
    if schema.kind == "finite":
        reg = regular_check(schema, cfg)
        if reg.status == REFUTED:
            return Certificate("o-regular", REFUTED,
                               witnesses={"regularity": reg.witnesses})
        results = {}
        for m in schema.members:
            oracle = _desk_oracle(m, n_max, s_max)
            if oracle.get("refuted"):
                return Certificate("o-regular", REFUTED,
                                   witnesses={"member": render(m), **oracle})
            results[render(m)] = "checked"
        return Certificate(
            "o-regular", NUMERIC,
            parameters={"n_max": n_max, "s_max": s_max},
            witnesses={"members": results},
            consumed=(reg.line(),),
        )
    return Certificate("o-regular", UNKNOWN,
                       witnesses={"note": f"no rule for {schema.kind} sets"})


def _o_regular_it(
    b: Expr, cfg: Config, n_max: int, s_max: int
) -> Certificate:
    oracle = _desk_oracle(b, n_max, s_max)
    if oracle.get("refuted"):
        return Certificate("o-regular", REFUTED, witnesses=oracle)
    from .relations import _family

    rank, _ = _family(b)
    if rank is not None and rank <= 5:
        return Certificate(
            "o-regular", BY_LEMMA, rule=RULE_PARTITION,
            parameters={"n_max": n_max, "s_max": s_max},
            witnesses=oracle,
        )
    return Certificate(
        "o-regular", NUMERIC,
        parameters={"n_max": n_max, "s_max": s_max},
        witnesses=oracle,
    )


def _values_upto(b: Expr, top: int) -> list[int] | None:
    vals = [0] * (top + 1)
    for m in range(1, top + 1):
        v = evaluate_int(b, m)
        if not v.is_exact_nat():
            return None
        vals[m] = v.to_int()
    return vals


def _desk_oracle(b: Expr, n_max: int, s_max: int) -> dict[str, Any]:
    """Superadditivity sweep plus exhaustive partition maximization."""
    f = _values_upto(b, s_max)
    if f is None:
        return {"refuted": False, "note": "values exceed the exact budget"}
    for total in range(2, s_max + 1):
        ft = f[total]
        for a in range(1, total // 2 + 1):
            if f[a] + f[total - a] > ft:
                return {"refuted": True, "kind": "superadditivity",
                        "a": a, "b": total - a,
                        "lhs": f[a] + f[total - a], "rhs": ft}
    partition_rows = []
    dp_cap = 4 * s_max  # the DP is quadratic in the budget
    for n in range(1, n_max + 1):
        budget = f[n]
        if budget > dp_cap:
            partition_rows.append({"n": n, "budget": budget, "skipped": True})
            continue
        vals = f if budget <= s_max else _values_upto(b, budget)
        if vals is None:
            return {"refuted": False,
                    "note": f"partition budget at n={n} exceeds the budget"}
        best = [0] * (budget + 1)
        for t in range(1, budget + 1):
            best[t] = max(vals[m] + best[t - m] for m in range(1, t + 1))
        got = best[budget]
        expect = vals[budget]
        if got != expect:
            return {"refuted": True, "kind": "partition", "n": n,
                    "budget": budget, "best": got, "single_block": expect,
                    "partition": _best_partition(vals, best, budget)}
        second = evaluate_int(make_iterate(b, 2), n)
        if second.is_exact_nat() and expect > second.to_int():
            return {"refuted": True, "kind": "iterate-bound", "n": n,
                    "value": expect, "iterate": second.to_int()}
        if budget <= 24 and _enumerate_partitions_max(vals, budget) != got:
            return {"refuted": True, "kind": "enumeration-mismatch", "n": n}
        partition_rows.append({"n": n, "budget": budget, "max": got})
    return {"refuted": False, "superadditive_upto": s_max,
            "partitions": partition_rows}


def _best_partition(vals: list[int], best: list[int], budget: int) -> list[int]:
    out, t = [], budget
    while t > 0:
        for m in range(1, t + 1):
            if vals[m] + best[t - m] == best[t]:
                out.append(m)
                t -= m
                break
        else:
            break
    return out


def _enumerate_partitions_max(vals: list[int], budget: int) -> int:
    """Literal recursion over all partitions, for tiny budgets only."""
    best = 0
    stack = [(budget, 1, 0)]
    while stack:
        left, lo, acc = stack.pop()
        best = max(best, acc)
        for m in range(lo, left + 1):
            stack.append((left - m, m, acc + vals[m]))
    return best


# ---------------------------------------------------------------------------
# closure in a generated chain

def closure(addresses: Iterable[str], chain: Any) -> tuple[str, ...]:
    """Downward closure of an address set under the chain order."""
    wanted = set(addresses)
    if not wanted:
        return ()
    by_addr = {e.address: e for e in chain.entries}
    unknown = wanted - set(by_addr)
    if unknown:
        raise KeyError(f"unknown addresses: {sorted(unknown)}")
    hi = max(by_addr[a].val for a in wanted)
    ordered = sorted(chain.entries, key=lambda e: e.val)
    return tuple(e.address for e in ordered if e.val <= hi)
