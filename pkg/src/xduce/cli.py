"""xduce command-line interface.

Exit codes: 0 success, 1 parse or validation error, 2 alphabet mismatch or
unsupported request, 3 pebble-transducer step budget exhausted, 4 a check
ran and failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import build_triple_table, check_dichotomy, enumerate_r_splits, has_producing_r_split
from .cfp import CfpExpr, Cbs, Pipeline, Reg, evaluate, growth_degree, rank_bound
from .cfpt import BudgetExhausted, Cfpt, cbs_compose_cfpt, validate_cfpt
from .core import AlphabetError, ValidationError, show, word
from .documents import dumps, from_doc, read_document, to_doc
from .hdt0l import (
    Hdt0lSystem,
    hdt0l_layering_violations,
    hdt0l_to_sst,
    infer_layering_hdt0l,
    layered_hdt0l_to_sst,
    layered_sst_blocks,
    sst_to_hdt0l,
)
from .sequences import SelfCheckError, extract_cfp_family, extract_pumping_family
from .sst import SequentialTransducer, Sst, copyless_violations, infer_layering, sequential_to_sst

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_FAIL = 0, 1, 2, 3, 4
SMOKE_LEN = 4


class Unsupported(Exception):
    pass


def _load(path):
    return from_doc(read_document(path))


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _as_sst(m) -> Sst:
    if isinstance(m, SequentialTransducer):
        return sequential_to_sst(m)
    if isinstance(m, Sst):
        return m
    if isinstance(m, Reg):
        return m.machine
    raise Unsupported(f"expected an SST document, got {type(m).__name__}")


def _as_expr(m) -> CfpExpr:
    if isinstance(m, CfpExpr):
        return m
    if isinstance(m, (Sst, SequentialTransducer)):
        return Reg(m)
    raise Unsupported(f"{type(m).__name__} documents cannot be used in an expression")


def _smoke(a, b, alphabet, budget=None):
    for w in alphabet.words(SMOKE_LEN):
        if evaluate(a, w, budget) != evaluate(b, w, budget):
            return w
    return None


def cmd_run(args):
    m = _load(args.file)
    out = evaluate(m, word(args.input), args.budget)
    _emit(args, {"output": list(out)}, show(out))
    return EXIT_OK


def cmd_check(args):
    m = _load(args.file)
    prop = args.property
    if prop == "copyless":
        if isinstance(m, Hdt0lSystem):
            bad = hdt0l_layering_violations(m, [tuple(m.working_alphabet)])
        else:
            bad = copyless_violations(_as_sst(m))
        ok, detail = not bad, bad
    elif prop.startswith("layered:"):
        try:
            k = int(prop.split(":", 1)[1])
        except ValueError:
            raise Unsupported(f"bad layer count in {prop!r}") from None
        if isinstance(m, Hdt0lSystem):
            blocks = infer_layering_hdt0l(m, k)
        else:
            blocks = infer_layering(_as_sst(m), k)
        ok = blocks is not None
        detail = ["|".join("{" + ",".join(b) + "}" for b in blocks)] if ok else \
            [f"no partition into {k + 1} layers works"]
    elif prop == "cfpt-legal":
        if not isinstance(m, Cfpt):
            raise Unsupported("cfpt-legal applies to pebble transducers only")
        bad = validate_cfpt(m)
        ok = not bad
        detail = [f"height {p}, state {q}, letters {','.join(ls)}: illegal {act}" for p, q, ls, act in bad]
    else:
        raise Unsupported(f"unknown property {prop!r}")
    status = "PASS" if ok else "FAIL"
    _emit(args, {"property": prop, "status": status, "details": detail},
          "\n".join([f"{status} {prop}"] + [f"  {d}" for d in detail]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_translate(args):
    m = _load(args.file)
    layers = None
    if isinstance(m, SequentialTransducer):
        m = sequential_to_sst(m)
        if args.to == "sst":
            out = m
    if args.to == "hdt0l":
        if not isinstance(m, Sst):
            raise Unsupported(f"cannot translate {type(m).__name__} to hdt0l")
        out = sst_to_hdt0l(m, args.layers)
    elif args.to == "sst":
        if isinstance(m, Hdt0lSystem):
            if args.layers is None:
                out = hdt0l_to_sst(m)
            else:
                blocks = m.layers if m.layers is not None and len(m.layers) == args.layers + 2 \
                    else infer_layering_hdt0l(m, args.layers + 1)
                if blocks is None:
                    raise ValidationError(f"system is not {args.layers + 1}-layered")
                out = layered_hdt0l_to_sst(m, blocks)
                layers = layered_sst_blocks(m, blocks, out)
        elif not isinstance(m, Sst):
            raise Unsupported(f"cannot translate {type(m).__name__} to sst")
    else:
        raise Unsupported(f"unknown target {args.to!r}")
    bad = _smoke(m, out, m.input_alphabet)
    if bad is not None:
        print(f"translation disagrees on {show(bad)!r}", file=sys.stderr)
        return EXIT_FAIL
    doc = to_doc(out)
    if layers is not None:
        doc["layers"] = [list(b) for b in layers]
    print(dumps(doc))
    return EXIT_OK


def _parse_subs(items):
    subs = {}
    for item in items or []:
        if "=" not in item:
            raise ValidationError(f"substitution {item!r} must look like LETTER=FILE")
        letter, path = item.split("=", 1)
        subs[letter] = _load(path)
    return subs


def cmd_cbs(args):
    outer = _load(args.outer)
    subs = _parse_subs(args.sub)
    if args.target == "cfpt":
        if not isinstance(outer, Cfpt) or not all(isinstance(g, Cfpt) for g in subs.values()):
            raise Unsupported("--as cfpt needs pebble transducers for the outer function and all substitutions")
        out = cbs_compose_cfpt(outer, subs)
        for w in outer.input_alphabet.words(3):
            direct = tuple(x for i in evaluate(outer, w) for x in evaluate(subs[i], w))
            if evaluate(out, w) != direct:
                print(f"composition disagrees on {show(w)!r}", file=sys.stderr)
                return EXIT_FAIL
    else:
        outer_e = _as_expr(outer)
        out = Cbs(outer_e, {i: _as_expr(g) for i, g in subs.items()})
    print(dumps(to_doc(out)))
    return EXIT_OK


def cmd_seq_extract(args):
    m = _load(args.file)
    try:
        if isinstance(m, CfpExpr):
            fam = extract_cfp_family(m, check_n=args.max_check)
        else:
            fam = extract_pumping_family(_as_sst(m), check_n=args.max_check)
    except SelfCheckError as exc:
        print(json.dumps({"status": "FAIL", "reason": str(exc)}))
        return EXIT_FAIL
    payload = {"status": "PASS", "verified_up_to": args.max_check,
               "star_height": fam.star_height(), "family": to_doc(fam)}
    print(dumps(payload))
    return EXIT_OK


def cmd_growth(args):
    m = _load(args.file)
    rep = growth_degree(m, max_n=args.max_n)
    _emit(args, {"degree": rep.degree, "period": rep.period, "dmax": rep.dmax,
                 "lengths": rep.lengths}, str(rep))
    return EXIT_OK


def cmd_triples(args):
    t = _as_sst(_load(args.file))
    table = build_triple_table(t)
    rep = check_dichotomy(t, args.letter, args.max_len, table=table)
    payload = {
        "status": "PASS" if rep.passed else "FAIL",
        "letter": rep.letter,
        "elements": len(table.elements),
        "words": rep.words,
        "splits": rep.splits,
        "producing": rep.producing,
        "counterexample": None if rep.counterexample is None else [list(x) for x in rep.counterexample],
    }
    _emit(args, payload, f"monoid elements: {len(table.elements)}\n{rep}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_rank(args):
    m = _load(args.file)
    if isinstance(m, CfpExpr):
        rb = rank_bound(m)
    elif isinstance(m, (Sst, SequentialTransducer)):
        rb = rank_bound(Reg(m))
    else:
        raise Unsupported(f"rank bounds are defined for expressions, not {type(m).__name__}")
    _emit(args, {"rank_bound": rb}, f"rank bound {rb}")
    return EXIT_OK


def cmd_split_scan(args):
    t = _as_sst(_load(args.file))
    s = t.input_alphabet.check_word(word(args.word))
    letters = args.letters.split() if args.letters else list(t.output_alphabet)
    table = build_triple_table(t)
    splits = enumerate_r_splits(s, table.nu, args.r)
    found = has_producing_r_split(t, s, letters, args.r, table=table)
    payload = {"word": list(s), "r": args.r, "letters": letters,
               "splits": [list(c) for c in splits], "producing": found}
    text = [f"{len(splits)} {args.r}-splits of {show(s)!r}"]
    text += [f"  cuts {list(c)}" for c in splits]
    text.append(f"producing {args.r}-split for {letters}: {'yes' if found else 'no'}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xduce", description="String transducer toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a machine, expression or pipeline on a word")
    r.add_argument("file")
    r.add_argument("--input", required=True, help="space-separated symbols")
    r.add_argument("--budget", type=int, default=None, help="pebble transducer step budget")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="check copyless / layered / pebble legality")
    c.add_argument("file")
    c.add_argument("--property", required=True, help="copyless | layered:K | cfpt-legal")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("translate", help="translate between SSTs and HDT0L systems")
    t.add_argument("file")
    t.add_argument("--to", required=True, choices=["sst", "hdt0l"])
    t.add_argument("--layers", type=int, default=None, help="layer count K of the SST side")
    t.set_defaults(func=cmd_translate)

    b = sub.add_parser("cbs", help="compose by substitution")
    b.add_argument("outer")
    b.add_argument("--sub", action="append", metavar="LETTER=FILE")
    b.add_argument("--as", dest="target", choices=["expr", "cfpt"], default="expr")
    b.set_defaults(func=cmd_cbs)

    s = sub.add_parser("seq-extract", help="pumping family of a unary transduction")
    s.add_argument("file")
    s.add_argument("--max-check", type=int, default=8)
    s.set_defaults(func=cmd_seq_extract)

    g = sub.add_parser("growth", help="output growth degree on a^n")
    g.add_argument("file")
    g.add_argument("--max-n", type=int, default=16)
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_growth)

    tr = sub.add_parser("triples", help="producing-triple dichotomy check")
    tr.add_argument("file")
    tr.add_argument("--letter", required=True)
    tr.add_argument("--max-len", type=int, default=6)
    tr.add_argument("--json", action="store_true")
    tr.set_defaults(func=cmd_triples)

    k = sub.add_parser("rank", help="rank upper bound of an expression")
    k.add_argument("file")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_rank)

    sp = sub.add_parser("split-scan", help="r-splits of a word and producing-split search")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--letters", default=None, help="space-separated output letters")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_split_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AlphabetError, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
