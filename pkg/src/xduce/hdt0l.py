"""HDT0L systems and their translations to and from SSTs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .core import (
    Alphabet,
    AlphabetError,
    BoundError,
    FreeMorphism,
    ValidationError,
    apply_morphism,
    as_alphabet,
    fresh,
)
from .monoid import RegAssignment, compose_assignments
from .sst import Sst, infer_layering, shape_key

SHAPE_STATE_CAP = 100_000


@dataclass(frozen=True, eq=False)
class Hdt0lSystem:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    working_alphabet: Alphabet
    initial_word: tuple
    rules: dict
    final: FreeMorphism
    layers: tuple = field(default=None, compare=False)

    def __init__(self, input_alphabet, output_alphabet, working_alphabet, initial_word,
                 rules: Mapping, final: Mapping, layers=None):
        gamma, sigma = as_alphabet(input_alphabet), as_alphabet(output_alphabet)
        delta = as_alphabet(working_alphabet)
        d = delta.check_word(initial_word, "initial word")
        hs = {}
        for c in gamma:
            if c not in rules:
                raise ValidationError(f"no morphism for input letter {c!r}")
            h = rules[c]
            hs[c] = h if isinstance(h, FreeMorphism) else FreeMorphism(delta, delta, h)
        extra = [c for c in rules if c not in gamma]
        if extra:
            raise ValidationError(f"morphisms given for unknown input letters {extra}")
        fin = final if isinstance(final, FreeMorphism) else FreeMorphism(delta, sigma, final)
        object.__setattr__(self, "input_alphabet", gamma)
        object.__setattr__(self, "output_alphabet", sigma)
        object.__setattr__(self, "working_alphabet", delta)
        object.__setattr__(self, "initial_word", d)
        object.__setattr__(self, "rules", hs)
        object.__setattr__(self, "final", fin)
        object.__setattr__(self, "layers", None if layers is None else tuple(tuple(b) for b in layers))

    def __call__(self, w):
        return run_hdt0l(self, w)


def run_hdt0l(s: Hdt0lSystem, w) -> tuple:
    x = s.initial_word
    for c in reversed(s.input_alphabet.check_word(w)):
        x = apply_morphism(s.rules[c], x)
    return apply_morphism(s.final, x)


def _blocks(letters, blocks) -> dict:
    layer = {}
    for i, block in enumerate(blocks):
        for x in block:
            if x in layer:
                raise ValidationError(f"letter {x!r} appears in two blocks")
            layer[x] = i
    if set(layer) != set(letters):
        raise ValidationError("blocks do not partition the working alphabet")
    return layer


def hdt0l_layering_violations(s: Hdt0lSystem, blocks) -> list:
    layer = _blocks(s.working_alphabet, blocks)
    problems = []
    for c, h in s.rules.items():
        counts = {}
        for x in s.working_alphabet:
            i = layer[x]
            for y in h.image[x]:
                if layer[y] > i:
                    problems.append(f"h_{c}({x}) uses higher-layer letter {y}")
                elif layer[y] == i:
                    counts[y] = counts.get(y, 0) + 1
        for y, n in counts.items():
            if n > 1:
                problems.append(f"h_{c}: letter {y} occurs {n} times within its layer")
    return problems


def check_layered_hdt0l(s: Hdt0lSystem, blocks) -> bool:
    return not hdt0l_layering_violations(s, blocks)


def infer_layering_hdt0l(s: Hdt0lSystem, k: int, bound: int = 10):
    letters = tuple(s.working_alphabet)
    if len(letters) > bound:
        raise BoundError(f"{len(letters)} letters exceed the layering search bound {bound}")
    for layers in product(range(k + 1), repeat=len(letters)):
        blocks = [tuple(x for x, i in zip(letters, layers) if i == b) for b in range(k + 1)]
        if check_layered_hdt0l(s, blocks):
            return tuple(blocks)
    return None


def hdt0l_to_sst(s: Hdt0lSystem) -> Sst:
    """Single-state SST whose registers are (renamed) working letters."""
    taken = set(s.output_alphabet)
    ren = {}
    for x in s.working_alphabet:
        ren[x] = fresh(x, taken | set(ren.values()))

    def rn(w):
        return tuple(ren[x] for x in w)

    q = "q"
    trans = {(q, c): (q, {ren[x]: rn(h.image[x]) for x in s.working_alphabet})
             for c, h in s.rules.items()}
    init = {ren[x]: s.final.image[x] for x in s.working_alphabet}
    return Sst(s.input_alphabet, s.output_alphabet, [q], q, list(ren.values()), trans, init,
               {q: rn(s.initial_word)})


def sst_to_hdt0l(t: Sst, k: int = None, blocks=None) -> Hdt0lSystem:
    """A (k+1)-layered HDT0L system computing the same function as ``t``.

    Registers are extended with a copy u:a of every output letter a (the
    bottom layer), then every extended register is paired with every state.
    """
    if blocks is None:
        if k is None:
            for k in range(len(t.registers) + 1):
                blocks = infer_layering(t, k)
                if blocks is not None:
                    break
        else:
            blocks = infer_layering(t, k)
        if blocks is None:
            raise ValidationError(f"no {k}-layering of the SST exists")
    blocks = [tuple(b) for b in blocks]
    sigma = t.output_alphabet
    taken = set(t.registers) | set(sigma)
    und = {}
    for a in sigma:
        und[a] = fresh("u:" + a, taken)
        taken.add(und[a])

    def underline_word(w):
        return tuple(und.get(x, x) for x in w)

    layers_r = [tuple(und[a] for a in sigma)] + blocks
    rprime = [x for b in layers_r for x in b]
    init_prime = {und[a]: (a,) for a in sigma}
    init_prime.update(t.initial_values)

    def assign_prime(q, c):
        a = t.transitions[q, c][1]
        img = {und[x]: (und[x],) for x in sigma}
        for r, w in zip(a.registers, a.images):
            img[r] = underline_word(w)
        return img

    order = [t.initial] + [q for q in t.states if q != t.initial]
    taken = set(sigma)
    pair = {}
    for x in rprime:
        for q in order:
            pair[x, q] = fresh(f"{x}@{q}", taken)
            taken.add(pair[x, q])

    def paired(q, w):
        return tuple(pair[x, q] for x in w)

    d = ()
    for q in order:
        d += paired(q, underline_word(t.output[q]))
    final = {}
    for x in rprime:
        for q in order:
            final[pair[x, q]] = init_prime[x] if q == t.initial else ()
    rules = {}
    for c in t.input_alphabet:
        primes = {q: assign_prime(q, c) for q in order}
        h = {}
        for x in rprime:
            for q in order:
                img = ()
                for p in order:
                    if t.transitions[p, c][0] == q:
                        img += paired(p, primes[p][x])
                h[pair[x, q]] = img
        rules[c] = h
    layers = [tuple(pair[x, q] for x in b for q in order) for b in layers_r]
    working = [pair[x, q] for x in rprime for q in order]
    s = Hdt0lSystem(t.input_alphabet, sigma, working, d, rules, final, layers)
    bad = hdt0l_layering_violations(s, layers)
    if bad:
        raise ValidationError(f"translated system is not layered as expected: {bad[0]}")
    return s


def layered_hdt0l_to_sst(s: Hdt0lSystem, blocks, bound: int = 16,
                         max_states: int = SHAPE_STATE_CAP) -> Sst:
    """SST whose states are shapes over the bottom layer and whose registers
    are the remaining working letters."""
    blocks = [tuple(b) for b in blocks]
    bad = hdt0l_layering_violations(s, blocks)
    if bad:
        raise ValidationError(f"system is not layered by the given blocks: {bad[0]}")
    base = blocks[0]
    if len(base) > bound:
        raise BoundError(f"bottom layer has {len(base)} letters, bound is {bound}")
    base_set = set(base)
    upper = [x for b in blocks[1:] for x in b]
    taken = set(s.output_alphabet)
    ren = {}
    for x in upper:
        ren[x] = fresh(x, taken)
        taken.add(ren[x])
    hfin = s.final.image
    bottom = {c: RegAssignment(base, {x: h.image[x] for x in base}, (), check=False)
              for c, h in s.rules.items()}

    def realize(a, w):
        # (h' o a) on bottom letters, registers elsewhere
        out = []
        for x in w:
            if x in base_set:
                for y in a[x]:
                    out.extend(hfin[y])
            else:
                out.append(ren[x])
        return tuple(out)

    start = RegAssignment.identity(base)
    seen, order, todo = {start}, [start], deque([start])
    trans = {}
    while todo:
        a = todo.popleft()
        for c in s.input_alphabet:
            b = compose_assignments(a, bottom[c])
            image = {ren[x]: realize(a, s.rules[c].image[x]) for x in upper}
            trans[shape_key(a), c] = (shape_key(b), image)
            if b not in seen:
                if len(seen) >= max_states:
                    raise BoundError(f"more than {max_states} reachable shapes")
                seen.add(b)
                order.append(b)
                todo.append(b)
    output = {shape_key(a): realize(a, s.initial_word) for a in order}
    init = {ren[x]: hfin[x] for x in upper}
    return Sst(s.input_alphabet, s.output_alphabet, [shape_key(a) for a in order],
               shape_key(start), [ren[x] for x in upper], trans, init, output)


def layered_sst_blocks(s: Hdt0lSystem, blocks, t: Sst) -> list:
    """The register layering of ``layered_hdt0l_to_sst(s, blocks)`` as blocks of ``t``."""
    regs = list(t.registers)
    upper = [x for b in blocks[1:] for x in b]
    ren = dict(zip(upper, regs))
    return [tuple(ren[x] for x in b) for b in blocks[1:]]


def disjointify(s: Hdt0lSystem) -> Hdt0lSystem:
    """Equivalent system whose initial word has no repeated letter."""
    n = len(s.initial_word)
    taken = set()
    names = {}
    for x in s.working_alphabet:
        for i in range(1, n + 1):
            names[x, i] = fresh(f"{x}.{i}", taken)
            taken.add(names[x, i])
    working = list(names.values())
    d = tuple(names[x, i] for i, x in enumerate(s.initial_word, 1))
    rules = {c: {names[x, i]: tuple(names[y, i] for y in h.image[x]) for (x, i) in names}
             for c, h in s.rules.items()}
    final = {names[x, i]: s.final.image[x] for (x, i) in names}
    layers = None
    if s.layers is not None:
        layers = [tuple(names[x, i] for x in b for i in range(1, n + 1)) for b in s.layers]
    return Hdt0lSystem(s.input_alphabet, s.output_alphabet, working, d, rules, final, layers)


def map_hdt0l(s: Hdt0lSystem, sep: str = "#", blocks=None) -> Hdt0lSystem:
    """System for w1 # ... # wn -> f(w1) # ... # f(wn).

    When ``blocks`` (a layering of ``s``) is given, the initial word is made
    repetition-free first and the layering of the result is recorded.  The
    output letters and the separator must sit strictly below the working
    letters, so the result has one more layer than ``s``.
    """
    if sep in s.input_alphabet or sep in s.output_alphabet:
        raise AlphabetError(f"separator {sep!r} collides with the alphabets")
    if blocks is not None:
        s = disjointify(Hdt0lSystem(s.input_alphabet, s.output_alphabet, s.working_alphabet,
                                    s.initial_word, s.rules, s.final, blocks))
    sigma = list(s.output_alphabet)
    taken = set(sigma) | {sep}
    ren = {}
    for x in s.working_alphabet:
        ren[x] = fresh(x, taken)
        taken.add(ren[x])
    big_x = fresh("X", taken)

    def rn(w):
        return tuple(ren[x] for x in w)

    fixed = {a: (a,) for a in sigma + [sep]}
    rules = {}
    for c, h in s.rules.items():
        img = {ren[x]: rn(h.image[x]) for x in s.working_alphabet}
        img.update(fixed)
        img[big_x] = (big_x,)
        rules[c] = img
    hash_rule = {ren[x]: s.final.image[x] for x in s.working_alphabet}
    hash_rule.update(fixed)
    hash_rule[big_x] = (big_x,) + rn(s.initial_word) + (sep,)
    rules[sep] = hash_rule
    final = {ren[x]: s.final.image[x] for x in s.working_alphabet}
    final.update(fixed)
    final[big_x] = ()
    working = sigma + [sep] + [ren[x] for x in s.working_alphabet] + [big_x]
    layers = None
    if s.layers is not None:
        layers = [tuple(sigma) + (sep,)] + [rn(b) for b in s.layers]
        layers[-1] = layers[-1] + (big_x,)
    return Hdt0lSystem(s.input_alphabet.union([sep]), s.output_alphabet.union([sep]), working,
                       (big_x,) + rn(s.initial_word), rules, final, layers)
