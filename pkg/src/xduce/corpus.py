"""Named example machines and expressions.

The JSON files shipped in ``xduce/corpus`` are generated from the builders
below (``python -m xduce.corpus``); the tests check that both agree.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .core import Alphabet, Dfa, underline
from .cfp import (
    Cbs,
    Concat,
    Cond,
    Reg,
    build_cfpow,
    build_cfpow_pipeline,
    build_cfsquaring,
    build_squaring_pipeline,
    constant,
    identity,
    letterwise,
    prefixes_sst,
    strip_transducer,
    unfold_sst,
)
from .cfpt import (
    cbs_compose_cfpt,
    constant_cfpt,
    identity_cfpt,
    letterwise_cfpt,
    looping_cfpt,
    reverse_cfpt,
)
from .hdt0l import Hdt0lSystem, map_hdt0l
from .sequences import Cat, Lit, Star
from .sst import SequentialTransducer, Sst, concat_combine, conditional_combine, sequential_to_sst

AB = Alphabet(["a", "b"])
UNARY = Alphabet(["a"])


def iterated_reverse(letters) -> Sst:
    """Reverses every #-separated block: ab#cd -> ba#dc."""
    gamma = Alphabet(list(letters) + ["#"])
    trans = {("q", "#"): ("q", {"X": ("X", "Y", "#"), "Y": ()})}
    for c in letters:
        trans["q", c] = ("q", {"X": ("X",), "Y": (c, "Y")})
    return Sst(gamma, gamma, ["q"], "q", ["X", "Y"], trans, {}, {"q": ("X", "Y")})


def fill_c_transducer() -> SequentialTransducer:
    """Replaces each c by the closest non-c letter on its left (a if none)."""
    trans = {
        ("1", "a"): ("1", ("a",)), ("1", "b"): ("2", ("b",)), ("1", "c"): ("1", ("a",)),
        ("2", "a"): ("1", ("a",)), ("2", "b"): ("2", ("b",)), ("2", "c"): ("2", ("b",)),
    }
    return SequentialTransducer(["a", "b", "c"], ["a", "b"], ["1", "2"], "1", trans)


def identity_sst(gamma) -> Sst:
    return sequential_to_sst(identity(gamma))


def reverse_sst(gamma) -> Sst:
    gamma = Alphabet(gamma)
    trans = {("q", c): ("q", {"X": (c, "X")}) for c in gamma}
    return Sst(gamma, gamma, ["q"], "q", ["X"], trans, {}, {"q": ("X",)})


def constant_sst(gamma, out) -> Sst:
    gamma = Alphabet(gamma)
    trans = {("q", c): ("q", {"X": ("X",)}) for c in gamma}
    return Sst(gamma, Alphabet(dict.fromkeys(out)), ["q"], "q", ["X"], trans, {}, {"q": tuple(out)})


def doubling_sst() -> Sst:
    return Sst(UNARY, UNARY, ["q"], "q", ["X"], {("q", "a"): ("q", {"X": ("X", "X")})},
               {"X": ("a",)}, {"q": ("X",)})


def even_length(gamma) -> Dfa:
    gamma = Alphabet(gamma)
    return Dfa(gamma, ["e", "o"], "e", ["e"],
               {"e": {c: "o" for c in gamma}, "o": {c: "e" for c in gamma}})


def late_constant_unary() -> Sst:
    """a^n -> c^(n-2) b for n >= 2; a dead register changes value after one step."""
    trans = {
        ("q0", "a"): ("q1", {"X": ("b",), "Y": ("Y",)}),
        ("q1", "a"): ("q1", {"X": ("c",), "Y": ("X", "Y")}),
    }
    return Sst(UNARY, ["b", "c"], ["q0", "q1"], "q0", ["X", "Y"], trans, {},
               {"q0": ("Y",), "q1": ("Y",)})


def wrap_unary() -> Sst:
    """a^n -> a^n b^n with one register growing on each side."""
    trans = {("q", "a"): ("q", {"X": ("a", "X", "b")})}
    return Sst(UNARY, AB, ["q"], "q", ["X"], trans, {}, {"q": ("X",)})


def mod3_unary() -> SequentialTransducer:
    trans = {("0", "a"): ("1", ("a",)), ("1", "a"): ("2", ("b",)), ("2", "a"): ("0", ("a", "b"))}
    return SequentialTransducer(UNARY, AB, ["0", "1", "2"], "0", trans, {"1": ("b",)})


def doubling_hdt0l() -> Hdt0lSystem:
    return Hdt0lSystem(UNARY, UNARY, ["x"], ["x"], {"a": {"x": ("x", "x")}}, {"x": ("a",)})


def identity_hdt0l(gamma) -> Hdt0lSystem:
    gamma = Alphabet(gamma)
    letters = ["x"] + [f"L{c}" for c in gamma]
    rules = {}
    for c in gamma:
        img = {f"L{d}": (f"L{d}",) for d in gamma}
        img["x"] = ("x", f"L{c}")
        rules[c] = img
    final = {f"L{c}": (c,) for c in gamma}
    final["x"] = ()
    return Hdt0lSystem(gamma, gamma, letters, ["x"], rules, final,
                       [[f"L{c}" for c in gamma], ["x"]])


def reverse_hdt0l(gamma) -> Hdt0lSystem:
    gamma = Alphabet(gamma)
    s = identity_hdt0l(gamma)
    rules = {c: dict(h.image) for c, h in s.rules.items()}
    for c in gamma:
        rules[c]["x"] = (f"L{c}", "x")
    return Hdt0lSystem(gamma, gamma, s.working_alphabet, ["x"], rules, s.final, s.layers)


def prefixes_unary_hdt0l() -> Hdt0lSystem:
    """a^n -> _a a^(n-1) _a a^(n-2) ... _a a _a."""
    rules = {"a": {"A": ("A",), "B": ("B",), "X": ("A", "X"), "Y": ("B", "X", "Y")}}
    final = {"A": ("a",), "B": ("_a",), "X": (), "Y": ()}
    return Hdt0lSystem(UNARY, ["a", "_a"], ["A", "B", "X", "Y"], ["Y"], rules, final,
                       [["A", "B"], ["X"], ["Y"]])


def square_unary_hdt0l() -> Hdt0lSystem:
    """a^n -> a^(n*n)."""
    rules = {"a": {"e": ("e",), "x": ("x", "e"), "y": ("y", "x", "x", "e")}}
    final = {"e": ("a",), "x": (), "y": ()}
    return Hdt0lSystem(UNARY, UNARY, ["e", "x", "y"], ["y"], rules, final, [["e"], ["x"], ["y"]])


def map_square_hdt0l() -> Hdt0lSystem:
    s = square_unary_hdt0l()
    return map_hdt0l(s, "#", s.layers)


def power_of_length(gamma) -> Cbs:
    """w -> w^|w|."""
    gamma = Alphabet(gamma)
    hole = "[]"
    outer = letterwise(gamma, {c: (hole,) for c in gamma}, [hole])
    return Cbs(Reg(outer), {hole: Reg(identity(gamma))})


def an_to_anb_power() -> Cbs:
    """a^n -> (a^n b)^(n+1)."""
    outer = SequentialTransducer(UNARY, UNARY, ["s"], "s", {("s", "a"): ("s", ("a",))}, {"s": ("a",)})
    inner = SequentialTransducer(UNARY, AB, ["s"], "s", {("s", "a"): ("s", ("a",))}, {"s": ("b",)})
    return Cbs(Reg(outer), {"a": Reg(inner)})


def repeat_after_prefix() -> Cbs:
    """a^n # w -> (w #)^n on inputs of that form."""
    gamma = Alphabet(["a", "b", "#"])
    count = SequentialTransducer(gamma, ["a"], ["0", "1"], "0", {
        ("0", "a"): ("0", ("a",)), ("0", "b"): ("1", ()), ("0", "#"): ("1", ()),
        ("1", "a"): ("1", ()), ("1", "b"): ("1", ()), ("1", "#"): ("1", ()),
    })
    tail = SequentialTransducer(gamma, gamma, ["0", "1"], "0", {
        ("0", "a"): ("0", ()), ("0", "b"): ("0", ()), ("0", "#"): ("1", ()),
        ("1", "a"): ("1", ("a",)), ("1", "b"): ("1", ("b",)), ("1", "#"): ("1", ("#",)),
    }, {"1": ("#",)})
    return Cbs(Reg(count), {"a": Reg(tail)})


def parity_switch_unary() -> Cond:
    """Even n: n -> a^n b^n; odd n: n -> b."""
    return Cond(even_length(UNARY), Reg(wrap_unary()), Reg(constant(UNARY, ("b",), AB)))


def squaring_then_suffix_unary() -> Concat:
    return Concat(build_cfsquaring(UNARY), Reg(constant(UNARY, ("_a", "a"))))


def cfsquaring_cfpt_parts(gamma):
    """The 1-pebble pieces of cfsquaring: w -> w1 # ... wn #, identity, constants."""
    gamma = Alphabet(gamma)
    outer = letterwise_cfpt(gamma, {c: (c, "#") for c in gamma}, gamma.union(["#"]))
    subs = {"#": identity_cfpt(gamma)}
    for c in gamma:
        subs[c] = constant_cfpt(gamma, (underline(c),))
    return outer, subs


def cfsquaring_cfpt(gamma):
    return cbs_compose_cfpt(*cfsquaring_cfpt_parts(gamma))


PWES = {
    "pwe_square": (Star(Star(Lit(["a"]))), "n -> a^(n*n)"),
    "pwe_mixed": (Cat(Lit(["a", "b"]), Star(Cat(Lit(["a"]), Star(Lit(["b", "a"]))))),
                  "ab (a (ba)^n)^n"),
    "pwe_blocks": (Star(Cat(Lit(["a", "b", "a"]), Star(Lit(["a"])))), "(aba a^n)^n"),
}


CORPUS = {
    "prefixes": (lambda: prefixes_sst(["1", "2", "3", "4"]),
                 "w1...wn -> _wn wn-1 ... w1 _wn-1 ... _w1 (1-layered, copyful)"),
    "prefixes_ab": (lambda: prefixes_sst(AB), "prefixes encoding over {a,b}"),
    "prefixes_unary": (lambda: prefixes_sst(UNARY), "prefixes encoding over {a}"),
    "squaring_second": (lambda: unfold_sst(["1", "2", "3", "4"]),
                        "second stage of the squaring pipeline"),
    "idreverse": (lambda: iterated_reverse("abcd"), "reverse every #-separated block"),
    "idreverse_ab": (lambda: iterated_reverse("ab"), "reverse every #-separated block over {a,b}"),
    "idreverse_a": (lambda: iterated_reverse("a"), "reverse every #-separated block over {a}"),
    "fill_c": (fill_c_transducer, "replace each c by the closest non-c letter on its left (default a)"),
    "fill_c_sst": (lambda: sequential_to_sst(fill_c_transducer()), "fill_c as a one-register SST"),
    "identity_ab": (lambda: identity_sst(AB), "identity over {a,b}"),
    "identity_unary": (lambda: identity_sst(UNARY), "identity over {a}"),
    "reverse_ab": (lambda: reverse_sst(AB), "mirror image over {a,b}"),
    "constant_ab": (lambda: constant_sst(AB, ["b", "a"]), "constant output ba"),
    "constant_unary": (lambda: constant_sst(UNARY, ["b"]), "constant output b over {a}"),
    "doubling_sst": (doubling_sst, "a^n -> a^(2^n) with X -> XX (copyful, not layered)"),
    "cond_rev_id": (lambda: conditional_combine(reverse_sst(AB), identity_sst(AB), even_length(AB)),
                    "mirror image on even lengths, identity otherwise"),
    "concat_id_rev": (lambda: concat_combine(identity_sst(AB), reverse_sst(AB)), "w -> w w^R"),
    "late_constant_unary": (late_constant_unary, "a^n -> c^(n-2) b"),
    "wrap_unary": (wrap_unary, "a^n -> a^n b^n"),
    "mod3_unary": (mod3_unary, "sequential transducer counting modulo 3"),
    "doubling_hdt0l": (doubling_hdt0l, "a^n -> a^(2^n)"),
    "identity_hdt0l": (lambda: identity_hdt0l(AB), "identity over {a,b} as a 1-layered system"),
    "reverse_hdt0l": (lambda: reverse_hdt0l(AB), "mirror image over {a,b} as a 1-layered system"),
    "prefixes_unary_hdt0l": (prefixes_unary_hdt0l, "a^n -> _a a^(n-1) _a ... _a a _a"),
    "square_unary_hdt0l": (square_unary_hdt0l, "a^n -> a^(n*n), 2-layered"),
    "map_square_hdt0l": (map_square_hdt0l, "a^n1 # ... # a^nk -> a^(n1*n1) # ... # a^(nk*nk)"),
    "cfsquaring": (lambda: build_cfsquaring(["1", "2", "3"]), "w -> _w1 w _w2 w ... _wn w"),
    "cfsquaring_ab": (lambda: build_cfsquaring(AB), "cfsquaring over {a,b}"),
    "cfsquaring_unary": (lambda: build_cfsquaring(UNARY), "cfsquaring over {a}"),
    "cfpow3_ab": (lambda: build_cfpow(3, AB), "cfpow of order 3 over {a,b}"),
    "cfpow3_unary": (lambda: build_cfpow(3, UNARY), "cfpow of order 3 over {a}"),
    "power_of_length": (lambda: power_of_length(AB), "w -> w^|w|"),
    "an_to_anb_power": (an_to_anb_power, "a^n -> (a^n b)^(n+1)"),
    "repeat_after_prefix": (repeat_after_prefix, "a^n # w -> (w #)^n"),
    "parity_switch_unary": (parity_switch_unary, "a^n b^n for even n, b for odd n"),
    "squaring_then_suffix_unary": (squaring_then_suffix_unary, "cfsquaring followed by _a a"),
    "squaring_pipeline": (lambda: build_squaring_pipeline(["1", "2", "3", "4"]),
                          "squaring with underlining as two SSTs"),
    "squaring_pipeline_ab": (lambda: build_squaring_pipeline(AB), "squaring pipeline over {a,b}"),
    "cfpow3_pipeline_ab": (lambda: build_cfpow_pipeline(3, AB),
                           "cfpow of order 3 as sequential and cfsquaring stages"),
    "strip_1_ab": (lambda: strip_transducer(1, AB), "two-state stripping transducer, level 1"),
    "identity_cfpt": (lambda: identity_cfpt(AB), "1-pebble identity"),
    "reverse_cfpt": (lambda: reverse_cfpt(AB), "1-pebble mirror image"),
    "looping_cfpt": (lambda: looping_cfpt(AB), "never pops"),
    "cfsquaring_outer_cfpt": (lambda: cfsquaring_cfpt_parts(AB)[0], "w -> w1 # ... wn #"),
    "cfsquaring_cfpt": (lambda: cfsquaring_cfpt(AB), "cfsquaring over {a,b} as a 2-pebble transducer"),
    **{name: ((lambda e=e: e), desc) for name, (e, desc) in PWES.items()},
}


def build(name: str):
    return CORPUS[name][0]()


def write_corpus(directory=None) -> list:
    from .documents import dumps, to_doc

    directory = Path(directory) if directory else Path(__file__).parent / "corpus"
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (builder, desc) in CORPUS.items():
        path = directory / f"{name}.json"
        path.write_text(dumps(to_doc(builder(), name=name, description=desc)) + "\n", encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_corpus(sys.argv[1] if len(sys.argv) > 1 else None):
        print(p)
