"""Command line front end.

One verb per operation family: eval, cmp, tame, certify, chain, lookup,
desc, cut, cantor, export. Exit codes: 0 when the verdict holds or the
certificate is granted, 1 when refuted or failed, 2 when unknown, 3 on
usage errors. `--json` switches every payload to a machine-readable form
that echoes the effective configuration.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any

from . import numeral as numeral_mod
from .certify import (Certificate, e_consistent, f_consistent,
                      o_regular_check, parse_schema, regular_check)
from .config import Config, load_config
from .expr import ParseError, clear_eval_cache, evaluate, parse, render
from .growth import clear_growth_cache
from .numeral import Numeral, set_budget
from .order import (bottom_cut, cantor_to_cut, cut_to_cantor, dyadic_str,
                    export_order, incl_cut, parse_cantor, parse_cut,
                    real_to_cantor, seq_value)
from .relations import cmp_ae, is_tame, le_O, le_it, le_pow, ll_pow, lt_o
from .universe import TOP_ADDRESS, descending_chain, generate
from .verdict import Verdict

_RELATIONS = {
    "ae": cmp_ae,
    "O": le_O,
    "o": lt_o,
    "pow": le_pow,
    "llpow": ll_pow,
    "it": le_it,
}

_PROPS = {"fcons", "econs", "regular", "oregular"}


class UsageError(Exception):
    """Malformed command input, distinct from a negative verdict."""


class _Parser(argparse.ArgumentParser):
    # usage problems exit 3, leaving 2 free for unknown verdicts
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    top = _Parser(prog="boundcalc",
                  description="calculator for time-bound growth orders")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output with the effective config")
    top.add_argument("--config", metavar="PATH",
                     help="JSON file overriding configuration defaults")
    top.add_argument("--budget-bits", type=int, metavar="BITS",
                     help="largest exact integer the evaluator materializes")
    top.add_argument("--power-cap", type=int, metavar="K",
                     help="exponent search cap for the power relations")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a bound expression at a point")
    p.add_argument("expr")
    p.add_argument("--n", required=True, metavar="N",
                   help="argument: a natural number or tower(K)")

    p = sub.add_parser("cmp", help="compare two bounds under a relation")
    p.add_argument("--rel", required=True, choices=sorted(_RELATIONS))
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = sub.add_parser("tame", help="test a finite set for quotient limits")
    p.add_argument("set", help="finite set literal, e.g. '{n, n^2}'")

    p = sub.add_parser("certify", help="certify a structural property")
    p.add_argument("--set", required=True, dest="subject",
                   help="factor expression (fcons/econs) or set schema")
    p.add_argument("--prop", required=True, choices=sorted(_PROPS))

    for name, doc in (("chain", "generate a dense chain of bounds"),
                      ("lookup", "find one entry of a generated chain"),
                      ("export", "emit a chain with its cut encodings")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--type", default="1", choices=("1", "2", "combined"))
        p.add_argument("--depth", type=int, default=0)
        p.add_argument("--cap", type=int, default=4,
                       help="log-iterate cutoff for full base rows")
        p.add_argument("--lo", help="lower gap factor (with --hi)")
        p.add_argument("--hi", help="upper gap factor (with --lo)")
        if name == "chain":
            p.add_argument("--dot", action="store_true",
                           help="render the chain as a DOT graph")
            p.add_argument("--out", metavar="PATH",
                           help="write the payload to a file")
        if name == "lookup":
            p.add_argument("address")
        if name == "export":
            p.add_argument("--cuts", metavar="LIST",
                           help="comma-separated cut forms; default: one "
                                "inclusive cut per word address")
            p.add_argument("--out", metavar="PATH",
                           help="write the payload to a file")

    p = sub.add_parser("desc", help="strictly descending factor chain")
    p.add_argument("outer")
    p.add_argument("seed")
    p.add_argument("--length", type=int, default=3)

    p = sub.add_parser("cut", help="encode a cut as a binary sequence")
    p.add_argument("cut", help="bottom, top, incl:WORD, or excl:WORD")

    p = sub.add_parser("cantor", help="decode a binary sequence to a cut")
    p.add_argument("seq", nargs="?", help="sequence text, e.g. '101(0)'")
    p.add_argument("--from-real", metavar="P/2^K", dest="from_real",
                   help="embed a dyadic rational instead of decoding")

    return top


def _parse_point(text: str) -> Numeral:
    m = re.fullmatch(r"tower\((\d+)\)", text.strip())
    if m:
        return Numeral.tower(int(m.group(1)))
    try:
        return Numeral.from_int(int(text))
    except ValueError:
        raise UsageError(f"point must be a natural number or tower(K), got {text!r}")


def _parse_real(text: str) -> Fraction:
    t = text.strip()
    m = re.fullmatch(r"(\d+)/2\^(\d+)", t)
    if m:
        return Fraction(int(m.group(1)), 2 ** int(m.group(2)))
    return Fraction(t)


def _gap(args) -> tuple:
    if (args.lo is None) != (args.hi is None):
        raise UsageError("--lo and --hi must be given together")
    if args.lo is None:
        return None
    return (parse(args.lo), parse(args.hi))


def _emit(args, cfg: Config, plain: str, payload: dict[str, Any],
          out: str | None = None) -> None:
    text = plain
    if args.json:
        doc = {"command": args.command, "config": cfg.to_json()}
        doc.update(payload)
        text = json.dumps(doc, indent=2, sort_keys=True)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return
    print(text)


def _run_eval(args, cfg: Config) -> int:
    e = parse(args.expr)
    v = evaluate(e, _parse_point(args.n))
    _emit(args, cfg, str(v), {
        "expr": render(e), "n": args.n, "value": str(v),
        "exact": v.is_exact_nat(),
    })
    return 0


def _run_cmp(args, cfg: Config) -> int:
    v: Verdict = _RELATIONS[args.rel](parse(args.lhs), parse(args.rhs), cfg)
    _emit(args, cfg, v.line(), {"verdict": v.to_dict()})
    return v.exit_code


def _run_tame(args, cfg: Config) -> int:
    schema = parse_schema(args.set)
    if schema.kind != "finite" or not schema.members:
        raise UsageError("tame needs a nonempty finite set literal like '{n, n^2}'")
    v = is_tame(list(schema.members), cfg)
    _emit(args, cfg, v.line(), {"verdict": v.to_dict()})
    return v.exit_code


def _run_certify(args, cfg: Config) -> int:
    if args.prop in ("fcons", "econs"):
        factor = parse(args.subject)
        check = f_consistent if args.prop == "fcons" else e_consistent
        cert: Certificate = check(factor, cfg)
    else:
        schema = parse_schema(args.subject)
        check = regular_check if args.prop == "regular" else o_regular_check
        cert = check(schema, cfg)
    _emit(args, cfg, cert.line(), {"certificate": cert.to_dict()})
    return cert.exit_code


def _run_chain(args, cfg: Config) -> int:
    ch = generate(args.type, depth=args.depth, cap=args.cap,
                  gap=_gap(args), cfg=cfg)
    if args.dot:
        plain = ch.to_dot()
        payload: dict[str, Any] = {"dot": plain}
    else:
        names = [e.address or "(bottom)" for e in ch.entries]
        width = max(len(n) for n in names)
        plain = "\n".join(
            f"{name:<{width + 2}}{str(e.val):<8}{render(e.bound)}"
            for name, e in zip(names, ch.entries))
        payload = {"chain": ch.to_doc()}
    _emit(args, cfg, plain, payload, out=args.out)
    return 0


def _run_lookup(args, cfg: Config) -> int:
    ch = generate(args.type, depth=args.depth, cap=args.cap,
                  gap=_gap(args), cfg=cfg)
    e = ch.lookup(args.address)
    plain = f"{e.address or '(bottom)'}  val={e.val}  {render(e.bound)}  " \
            f"depth={e.depth}"
    _emit(args, cfg, plain, {"entry": {
        "address": e.address, "val": str(e.val), "expr": render(e.bound),
        "depth": e.depth, "parents": list(e.parents), "shape": e.shape,
    }})
    return 0


def _run_export(args, cfg: Config) -> int:
    ch = generate(args.type, depth=args.depth, cap=args.cap,
                  gap=_gap(args), cfg=cfg)
    if args.cuts:
        cuts = [parse_cut(t.strip()) for t in args.cuts.split(",")]
    else:
        cuts = [bottom_cut()] + [
            incl_cut(e.address) for e in ch.entries
            if e.address not in ("", TOP_ADDRESS)
        ]
    doc = export_order(ch, cuts)
    plain = json.dumps(doc, indent=2, sort_keys=True)
    _emit(args, cfg, plain, {"export": doc}, out=args.out)
    return 0


def _run_desc(args, cfg: Config) -> int:
    chain = descending_chain(parse(args.outer), parse(args.seed),
                             args.length, cfg)
    names = [render(b) for b in chain]
    _emit(args, cfg, " > ".join(names), {"chain": names})
    return 0


def _run_cut(args, cfg: Config) -> int:
    c = parse_cut(args.cut)
    f = cut_to_cantor(c)
    _emit(args, cfg, f.text(), {
        "cut": c.text(), "cantor": f.text(),
        "value": dyadic_str(seq_value(f)),
    })
    return 0


def _run_cantor(args, cfg: Config) -> int:
    if (args.seq is None) == (args.from_real is None):
        raise UsageError("give either a sequence or --from-real, not both")
    if args.from_real is not None:
        f = real_to_cantor(_parse_real(args.from_real))
        _emit(args, cfg, f.text(), {
            "real": args.from_real, "cantor": f.text(),
            "value": dyadic_str(seq_value(f)),
        })
        return 0
    f = parse_cantor(args.seq)
    c = cantor_to_cut(f)
    _emit(args, cfg, c.text(), {
        "cantor": f.text(), "cut": c.text(),
        "value": dyadic_str(seq_value(f)),
    })
    return 0


_HANDLERS = {
    "eval": _run_eval,
    "cmp": _run_cmp,
    "tame": _run_tame,
    "certify": _run_certify,
    "chain": _run_chain,
    "lookup": _run_lookup,
    "export": _run_export,
    "desc": _run_desc,
    "cut": _run_cut,
    "cantor": _run_cantor,
}


def _apply_budget(cfg: Config) -> None:
    if numeral_mod.BUDGET_BITS != cfg.budget_bits:
        set_budget(cfg.budget_bits)
        clear_eval_cache()
        clear_growth_cache()


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, budget_bits=args.budget_bits,
                          power_cap=args.power_cap)
        _apply_budget(cfg)
        return _HANDLERS[args.command](args, cfg)
    except (ParseError, UsageError) as exc:
        print(f"boundcalc: error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"boundcalc: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
