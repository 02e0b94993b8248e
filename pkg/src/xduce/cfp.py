"""Comparison-free polyregular expressions and pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import Alphabet, AlphabetError, Dfa, ValidationError, as_alphabet, fresh, underline, tag
from .cfpt import Cfpt, run_cfpt
from .hdt0l import Hdt0lSystem, run_hdt0l
from .sst import (
    SequentialTransducer,
    Sst,
    check_copyless,
    copyless_violations,
    run_sequential,
    run_sst,
    sequential_to_sst,
)


class CfpExpr:
    input_alphabet: Alphabet
    output_alphabet: Alphabet

    def __call__(self, w):
        return eval_cfp(self, w)


@dataclass(frozen=True, eq=False)
class Reg(CfpExpr):
    machine: Sst

    def __init__(self, machine):
        if isinstance(machine, SequentialTransducer):
            machine = sequential_to_sst(machine)
        if not isinstance(machine, Sst):
            raise ValidationError("a regular leaf must be an SST or a sequential transducer")
        if not check_copyless(machine):
            raise ValidationError(f"regular leaf is not copyless: {copyless_violations(machine)[0]}")
        object.__setattr__(self, "machine", machine)

    @property
    def input_alphabet(self):
        return self.machine.input_alphabet

    @property
    def output_alphabet(self):
        return self.machine.output_alphabet


def _union(alphabets, declared=None) -> Alphabet:
    acc = Alphabet(())
    for a in alphabets:
        acc = acc.union(a)
    if declared is None:
        return acc
    declared = as_alphabet(declared)
    missing = [s for s in acc if s not in declared]
    if missing:
        raise AlphabetError(f"declared output alphabet lacks {missing}")
    return declared


def _same_inputs(*exprs):
    first = set(exprs[0].input_alphabet)
    for e in exprs[1:]:
        if set(e.input_alphabet) != first:
            raise AlphabetError("subexpressions have different input alphabets")


@dataclass(frozen=True, eq=False)
class Cbs(CfpExpr):
    outer: CfpExpr
    subs: dict
    output_alphabet: Alphabet = None

    def __init__(self, outer: CfpExpr, subs: Mapping, output_alphabet=None):
        missing = [i for i in outer.output_alphabet if i not in subs]
        if missing:
            raise AlphabetError(f"no substitution for letters {missing}")
        subs = {i: subs[i] for i in outer.output_alphabet}
        _same_inputs(outer, *subs.values())
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "subs", subs)
        object.__setattr__(self, "output_alphabet",
                           _union((g.output_alphabet for g in subs.values()), output_alphabet))

    @property
    def input_alphabet(self):
        return self.outer.input_alphabet


@dataclass(frozen=True, eq=False)
class Cond(CfpExpr):
    lang: Dfa
    then: CfpExpr
    orelse: CfpExpr
    output_alphabet: Alphabet = None

    def __init__(self, lang: Dfa, then: CfpExpr, orelse: CfpExpr, output_alphabet=None):
        _same_inputs(then, orelse)
        if set(lang.alphabet) != set(then.input_alphabet):
            raise AlphabetError("condition language is over a different alphabet")
        object.__setattr__(self, "lang", lang)
        object.__setattr__(self, "then", then)
        object.__setattr__(self, "orelse", orelse)
        object.__setattr__(self, "output_alphabet",
                           _union([then.output_alphabet, orelse.output_alphabet], output_alphabet))

    @property
    def input_alphabet(self):
        return self.then.input_alphabet


@dataclass(frozen=True, eq=False)
class Concat(CfpExpr):
    left: CfpExpr
    right: CfpExpr
    output_alphabet: Alphabet = None

    def __init__(self, left: CfpExpr, right: CfpExpr, output_alphabet=None):
        _same_inputs(left, right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "output_alphabet",
                           _union([left.output_alphabet, right.output_alphabet], output_alphabet))

    @property
    def input_alphabet(self):
        return self.left.input_alphabet


def _eval(e: CfpExpr, w: tuple) -> tuple:
    if isinstance(e, Reg):
        return run_sst(e.machine, w)
    if isinstance(e, Cbs):
        cache = {}
        out = []
        for i in _eval(e.outer, w):
            if i not in cache:
                cache[i] = _eval(e.subs[i], w)
            out.extend(cache[i])
        return tuple(out)
    if isinstance(e, Cond):
        return _eval(e.then if e.lang.accepts(w) else e.orelse, w)
    if isinstance(e, Concat):
        return _eval(e.left, w) + _eval(e.right, w)
    raise TypeError(f"not an expression: {e!r}")


def eval_cfp(e: CfpExpr, w) -> tuple:
    return _eval(e, e.input_alphabet.check_word(w))


def rank_bound(e: CfpExpr) -> int:
    if isinstance(e, Reg):
        return 0
    if isinstance(e, Cbs):
        return 1 + rank_bound(e.outer) + max((rank_bound(g) for g in e.subs.values()), default=0)
    if isinstance(e, Cond):
        return max(rank_bound(e.then), rank_bound(e.orelse))
    if isinstance(e, Concat):
        return max(rank_bound(e.left), rank_bound(e.right))
    raise TypeError(f"not an expression: {e!r}")


def subexpressions(e: CfpExpr):
    yield e
    if isinstance(e, Cbs):
        yield from subexpressions(e.outer)
        for g in e.subs.values():
            yield from subexpressions(g)
    elif isinstance(e, Cond):
        yield from subexpressions(e.then)
        yield from subexpressions(e.orelse)
    elif isinstance(e, Concat):
        yield from subexpressions(e.left)
        yield from subexpressions(e.right)


@dataclass(frozen=True, eq=False)
class Pipeline:
    stages: tuple

    def __init__(self, stages: Sequence):
        stages = tuple(stages)
        if not stages:
            raise ValidationError("a pipeline needs at least one stage")
        for a, b in zip(stages, stages[1:]):
            out, inp = output_alphabet_of(a), input_alphabet_of(b)
            extra = [s for s in out if s not in inp]
            if extra:
                raise AlphabetError(f"stage output letters {extra} are not inputs of the next stage")
        object.__setattr__(self, "stages", stages)

    @property
    def input_alphabet(self):
        return input_alphabet_of(self.stages[0])

    @property
    def output_alphabet(self):
        return output_alphabet_of(self.stages[-1])

    def __call__(self, w):
        return evaluate(self, w)


def input_alphabet_of(m) -> Alphabet:
    return m.input_alphabet


def output_alphabet_of(m) -> Alphabet:
    return m.output_alphabet


def evaluate(m, w, budget=None) -> tuple:
    """Run any machine, expression or pipeline on a word."""
    w = tuple(w)
    if isinstance(m, Sst):
        return run_sst(m, w)
    if isinstance(m, SequentialTransducer):
        return run_sequential(m, w)
    if isinstance(m, Hdt0lSystem):
        return run_hdt0l(m, w)
    if isinstance(m, Cfpt):
        return run_cfpt(m, w, budget)
    if isinstance(m, CfpExpr):
        return eval_cfp(m, w)
    if isinstance(m, Pipeline):
        for stage in m.stages:
            w = evaluate(stage, w, budget)
        return w
    raise TypeError(f"cannot evaluate {type(m).__name__}")


# named constructions

def letterwise(gamma, images: Mapping, output_alphabet) -> SequentialTransducer:
    """One-state sequential transducer emitting images[c] for each letter c."""
    gamma = as_alphabet(gamma)
    return SequentialTransducer(gamma, output_alphabet, ["s"], "s",
                                {("s", c): ("s", tuple(images[c])) for c in gamma})


def constant(gamma, out, output_alphabet=None) -> SequentialTransducer:
    gamma = as_alphabet(gamma)
    out = tuple(out)
    sigma = output_alphabet if output_alphabet is not None else Alphabet(dict.fromkeys(out))
    return SequentialTransducer(gamma, sigma, ["s"], "s", {("s", c): ("s", ()) for c in gamma},
                                {"s": out})


def identity(gamma) -> SequentialTransducer:
    gamma = as_alphabet(gamma)
    return letterwise(gamma, {c: (c,) for c in gamma}, gamma)


def build_cfsquaring(gamma, sep: str = "#") -> Cbs:
    """w -> _w1 w _w2 w ... _wn w."""
    gamma = as_alphabet(gamma)
    sep = fresh(sep, set(gamma) | set(gamma.underlined()))
    outer = letterwise(gamma, {c: (c, sep) for c in gamma}, gamma.union([sep]))
    subs = {sep: Reg(identity(gamma))}
    for c in gamma:
        subs[c] = Reg(constant(gamma, (underline(c),)))
    return Cbs(Reg(outer), subs, gamma.with_underlined())


def build_cfpow(k: int, gamma) -> CfpExpr:
    gamma = as_alphabet(gamma)
    if k < 0:
        raise ValidationError("cfpow needs k >= 0")
    sigma = gamma.tagged(range(k))
    if k == 0:
        return Reg(constant(gamma, (), sigma))
    if k == 1:
        return Reg(letterwise(gamma, {c: (tag(0, c),) for c in gamma}, sigma))
    hole = fresh("[]", set(sigma))
    outer = letterwise(gamma, {c: (tag(k - 1, c), hole) for c in gamma},
                       gamma.tagged([k - 1]).union([hole]))
    subs = {hole: build_cfpow(k - 1, gamma)}
    for c in gamma:
        subs[tag(k - 1, c)] = Reg(constant(gamma, (tag(k - 1, c),)))
    return Cbs(Reg(outer), subs, sigma)


def strip_transducer(j: int, gamma) -> SequentialTransducer:
    """Keeps the block after each underlined level-j letter, relabelled one level up,
    and drops the blocks after underlined lower-level letters."""
    gamma = as_alphabet(gamma)
    low = gamma.tagged(range(j + 1))
    inputs = low.union(low.underlined())
    outputs = gamma.tagged(range(j + 2))
    trans = {}
    for c in gamma:
        top, up = tag(j, c), tag(j + 1, c)
        trans["o", underline(top)] = ("o", (up,))
        trans["o", top] = ("o", (top,))
        trans["i", underline(top)] = ("o", (up,))
        trans["i", top] = ("i", ())
        for m in range(j):
            x = tag(m, c)
            trans["o", x] = ("o", (x,))
            trans["o", underline(x)] = ("i", ())
            trans["i", x] = ("i", ())
            trans["i", underline(x)] = ("i", ())
    return SequentialTransducer(inputs, outputs, ["o", "i"], "o", trans)


def build_cfpow_pipeline(k: int, gamma) -> Pipeline:
    gamma = as_alphabet(gamma)
    if k < 0:
        raise ValidationError("cfpow needs k >= 0")
    if k == 0:
        return Pipeline([constant(gamma, (), Alphabet(()))])
    stages = [letterwise(gamma, {c: (tag(0, c),) for c in gamma}, gamma.tagged([0]))]
    for j in range(k - 1):
        stages.append(build_cfsquaring(gamma.tagged(range(j + 1))))
        stages.append(strip_transducer(j, gamma))
    return Pipeline(stages)


def prefixes_sst(gamma) -> Sst:
    """w1...wn -> _wn wn-1...w1 _wn-1 ... _w1 (copyful, 1-layered)."""
    gamma = as_alphabet(gamma)
    sigma = gamma.with_underlined()
    x = fresh("X", set(sigma))
    y = fresh("Y", set(sigma) | {x})
    trans = {("q", c): ("q", {x: (c, x), y: (underline(c), x, y)}) for c in gamma}
    return Sst(gamma, sigma, ["q"], "q", [x, y], trans, {}, {"q": (y,)})


def unfold_sst(gamma) -> Sst:
    """Second stage of the squaring pipeline: reads the prefixes encoding."""
    gamma = as_alphabet(gamma)
    sigma = gamma.with_underlined()
    x = fresh("X", set(sigma))
    y = fresh("Y", set(sigma) | {x})
    trans = {}
    for c in gamma:
        trans["q", c] = ("q", {x: (x,), y: (c, y)})
        trans["q", underline(c)] = ("q", {x: (c, x), y: (underline(c), x, y)})
    return Sst(sigma, sigma, ["q"], "q", [x, y], trans, {}, {"q": (y,)})


def build_squaring_pipeline(gamma) -> Pipeline:
    return Pipeline([prefixes_sst(gamma), unfold_sst(gamma)])


@dataclass
class GrowthReport:
    degree: int
    lengths: list
    dmax: int
    period: int = 1
    differences: list = field(default_factory=list)

    def __str__(self):
        deg = str(self.degree) if self.degree is not None else f">= {self.dmax}"
        per = f" (period {self.period})" if self.period > 1 else ""
        return f"degree {deg}{per}; lengths {self.lengths}"


def finite_differences(seq, d):
    for _ in range(d):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


def _poly_degree(seq, dmax):
    for d in range(dmax + 1):
        diffs = finite_differences(seq, d)
        tail = diffs[-max(3, len(diffs) // 2):]
        if len(diffs) >= 3 and len(set(tail)) == 1:
            return d, tail
    return None, []


def growth_degree(m, samples=None, max_n: int = 16, dmax: int = 8, max_period: int = 4) -> GrowthReport:
    """Least d whose d-th difference of output lengths is eventually constant.

    The default sample family is a^n for n = 1..max_n with a the first input
    letter.  "Eventually constant" means constant on the last half of the
    difference sequence (and on at least three values).  Lengths that only
    become polynomial on residue classes (period p <= max_period) get the
    largest degree among the classes.
    """
    if samples is None:
        a = input_alphabet_of(m).symbols[0]
        samples = [(a,) * n for n in range(1, max_n + 1)]
    lengths = [len(evaluate(m, s)) for s in samples]
    for p in range(1, max_period + 1):
        found = [_poly_degree(lengths[r::p], dmax) for r in range(p)]
        if all(d is not None for d, _ in found):
            d, tail = max(found, key=lambda x: x[0])
            return GrowthReport(d, lengths, dmax, p, tail)
    return GrowthReport(None, lengths, dmax)
