"""Streaming string transducers and sequential transducers."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .core import Alphabet, AlphabetError, BoundError, Dfa, ValidationError, as_alphabet, fresh
from .monoid import (
    MonoidMorphism,
    RegAssignment,
    assignment_monoid,
    compose_assignments,
    dagger_apply,
    erase,
    register_counts,
    wreath_element,
    wreath_monoid,
)

LAYER_BOUND = 6


@dataclass(frozen=True, eq=False)
class Sst:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: tuple
    initial: str
    registers: tuple
    transitions: dict
    initial_values: dict
    output: dict

    def __init__(self, input_alphabet, output_alphabet, states, initial, registers,
                 transitions: Mapping, initial_values: Mapping = None, output: Mapping = None):
        gamma, sigma = as_alphabet(input_alphabet), as_alphabet(output_alphabet)
        states = tuple(states)
        registers = tuple(as_alphabet(registers))
        if len(set(states)) != len(states):
            raise ValidationError("duplicate states")
        if initial not in states:
            raise ValidationError(f"initial state {initial!r} is not a state")
        clash = set(registers) & set(sigma)
        if clash:
            raise ValidationError(f"registers overlap the output alphabet: {sorted(clash)}")
        known = set(sigma) | set(registers)
        table = {}
        for q in states:
            for c in gamma:
                if (q, c) not in transitions:
                    raise ValidationError(f"transition missing for ({q!r}, {c!r})")
                nxt, assign = transitions[q, c]
                if nxt not in states:
                    raise ValidationError(f"transition ({q!r}, {c!r}) leads to unknown state {nxt!r}")
                if not isinstance(assign, RegAssignment):
                    assign = RegAssignment(registers, assign, sigma)
                elif assign.registers != registers:
                    raise ValidationError(f"transition ({q!r}, {c!r}) has the wrong register set")
                else:
                    for img in assign.images:
                        if any(s not in known for s in img):
                            raise AlphabetError(f"transition ({q!r}, {c!r}) uses unknown symbols")
                    assign = RegAssignment(registers, assign.as_dict(), sigma, check=False)
                table[q, c] = (nxt, assign)
        extra = [k for k in transitions if k not in table]
        if extra:
            raise ValidationError(f"transitions for unknown (state, letter) pairs: {extra[:3]}")
        initial_values = dict(initial_values or {})
        vals = {}
        for r in registers:
            vals[r] = sigma.check_word(initial_values.get(r, ()), f"initial value of {r!r}")
        if set(initial_values) - set(registers):
            raise ValidationError("initial values given for unknown registers")
        if output is None:
            raise ValidationError("output function is required")
        out = {}
        for q in states:
            if q not in output:
                raise ValidationError(f"output undefined on state {q!r}")
            w = tuple(output[q])
            bad = [s for s in w if s not in known]
            if bad:
                raise AlphabetError(f"output at {q!r} uses unknown symbols {bad}")
            out[q] = w
        object.__setattr__(self, "input_alphabet", gamma)
        object.__setattr__(self, "output_alphabet", sigma)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "registers", registers)
        object.__setattr__(self, "transitions", table)
        object.__setattr__(self, "initial_values", vals)
        object.__setattr__(self, "output", out)

    def __call__(self, w):
        return run_sst(self, w)

    def delta(self, q, c):
        return self.transitions[q, c]

    def assignments(self) -> Iterable:
        for q in self.states:
            for c in self.input_alphabet:
                yield (q, c), self.transitions[q, c][1]

    def run_state(self, w):
        q = self.initial
        for c in w:
            q = self.transitions[q, c][0]
        return q

    def register_values(self, w):
        """State and register valuation after reading ``w``."""
        q, vals = self.initial, self.initial_values
        for c in self.input_alphabet.check_word(w):
            q, a = self.transitions[q, c]
            vals = dagger_apply(a, vals)
        return q, vals


def evaluate_output(t: Sst, q, vals) -> tuple:
    out = []
    for s in t.output[q]:
        if s in vals:
            out.extend(vals[s])
        else:
            out.append(s)
    return tuple(out)


def run_sst(t: Sst, w) -> tuple:
    q, vals = t.register_values(w)
    return evaluate_output(t, q, vals)


def _partition(registers, blocks) -> dict:
    layer = {}
    for i, block in enumerate(blocks):
        for r in block:
            if r in layer:
                raise ValidationError(f"register {r!r} appears in two blocks")
            layer[r] = i
    if set(layer) != set(registers):
        raise ValidationError("blocks do not partition the register set")
    return layer


def layering_violations(t: Sst, blocks) -> list:
    """Human-readable reasons why ``blocks`` is not a valid layering of ``t``."""
    layer = _partition(t.registers, blocks)
    problems = []
    for (q, c), a in t.assignments():
        counts = {}
        for r, img in zip(a.registers, a.images):
            i = layer[r]
            for s in img:
                if s in layer:
                    if layer[s] > i:
                        problems.append(f"on ({q}, {c}) register {r} reads higher-layer register {s}")
                    elif layer[s] == i:
                        counts[s] = counts.get(s, 0) + 1
        for s, n in counts.items():
            if n > 1:
                problems.append(f"on ({q}, {c}) register {s} is used {n} times within its layer")
    return problems


def check_layered(t: Sst, blocks) -> bool:
    return not layering_violations(t, blocks)


def check_copyless(t: Sst) -> bool:
    return check_layered(t, [t.registers])


def copyless_violations(t: Sst) -> list:
    return layering_violations(t, [t.registers])


def infer_layering(t: Sst, k: int, bound: int = LAYER_BOUND):
    """Some partition into k+1 layers that makes ``t`` k-layered, or None."""
    n = len(t.registers)
    if n > bound:
        raise BoundError(f"{n} registers exceed the layering search bound {bound}")
    for layers in product(range(k + 1), repeat=n):
        blocks = [tuple(r for r, i in zip(t.registers, layers) if i == b) for b in range(k + 1)]
        if check_layered(t, blocks):
            return tuple(blocks)
    return None


@dataclass(frozen=True, eq=False)
class SequentialTransducer:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: tuple
    initial: str
    transitions: dict
    final: dict

    def __init__(self, input_alphabet, output_alphabet, states, initial, transitions: Mapping,
                 final: Mapping = None):
        gamma, sigma = as_alphabet(input_alphabet), as_alphabet(output_alphabet)
        states = tuple(states)
        if initial not in states:
            raise ValidationError(f"initial state {initial!r} is not a state")
        table = {}
        for q in states:
            for c in gamma:
                if (q, c) not in transitions:
                    raise ValidationError(f"transition missing for ({q!r}, {c!r})")
                nxt, emit = transitions[q, c]
                if nxt not in states:
                    raise ValidationError(f"transition ({q!r}, {c!r}) leads to unknown state")
                table[q, c] = (nxt, sigma.check_word(emit, f"emission on ({q}, {c})"))
        final = dict(final or {})
        fin = {q: sigma.check_word(final.get(q, ()), f"final output of {q!r}") for q in states}
        object.__setattr__(self, "input_alphabet", gamma)
        object.__setattr__(self, "output_alphabet", sigma)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "transitions", table)
        object.__setattr__(self, "final", fin)

    def __call__(self, w):
        return run_sequential(self, w)


def run_sequential(s: SequentialTransducer, w) -> tuple:
    q, out = s.initial, []
    for c in s.input_alphabet.check_word(w):
        q, emit = s.transitions[q, c]
        out.extend(emit)
    out.extend(s.final[q])
    return tuple(out)


def sequential_to_sst(s: SequentialTransducer) -> Sst:
    x = fresh("X", set(s.output_alphabet))
    trans = {(q, c): (nxt, {x: (x,) + emit}) for (q, c), (nxt, emit) in s.transitions.items()}
    return Sst(s.input_alphabet, s.output_alphabet, s.states, s.initial, [x], trans,
               {x: ()}, {q: (x,) + s.final[q] for q in s.states})


def _require_copyless(*machines):
    for t in machines:
        if not check_copyless(t):
            raise ValidationError("construction requires copyless SSTs")


def _same_input(*alphabets):
    first = set(alphabets[0])
    for a in alphabets[1:]:
        if set(a) != first:
            raise AlphabetError("input alphabets differ")


def _product(machines, output_alphabet, out_fn, extra=None):
    """Reachable product of copyless SSTs with disjoint register banks.

    ``extra`` is an optional DFA run alongside; ``out_fn`` builds the output
    word of a product state from its components and the renamings.
    """
    gamma = machines[0].input_alphabet
    tags = ["L", "R"] if len(machines) == 2 else [str(i) for i in range(len(machines))]
    renames = [{r: f"{tg}:{r}" for r in t.registers} for tg, t in zip(tags, machines)]
    registers = [name for ren in renames for name in ren.values()]
    clash = set(registers) & set(output_alphabet)
    if clash:
        raise ValidationError(f"renamed registers clash with output letters {sorted(clash)}")

    def rename(ren, w):
        return tuple(ren.get(s, s) for s in w)

    def name(key):
        return "(" + ",".join(key) + ")"

    start = tuple(t.initial for t in machines) + ((extra.initial,) if extra else ())
    seen, order, todo = {start}, [start], deque([start])
    trans = {}
    while todo:
        key = todo.popleft()
        for c in gamma:
            nxt, image = [], {}
            for t, ren, q in zip(machines, renames, key):
                q2, a = t.transitions[q, c]
                nxt.append(q2)
                for r, img in zip(a.registers, a.images):
                    image[ren[r]] = rename(ren, img)
            if extra:
                nxt.append(extra.step(key[-1], c))
            nxt = tuple(nxt)
            trans[name(key), c] = (name(nxt), image)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                todo.append(nxt)
    init = {}
    for t, ren in zip(machines, renames):
        for r, v in t.initial_values.items():
            init[ren[r]] = v
    output = {name(key): out_fn(key, lambda i, w: rename(renames[i], w)) for key in order}
    return Sst(gamma, output_alphabet, [name(k) for k in order], name(start), registers,
               trans, init, output)


def conditional_combine(f: Sst, g: Sst, lang: Dfa) -> Sst:
    """The function that agrees with f on ``lang`` and with g elsewhere."""
    _require_copyless(f, g)
    _same_input(f.input_alphabet, g.input_alphabet, lang.alphabet)
    sigma = f.output_alphabet.union(g.output_alphabet)

    def out(key, rename):
        qf, qg, ql = key
        if ql in lang.accepting:
            return rename(0, f.output[qf])
        return rename(1, g.output[qg])

    return _product([f, g], sigma, out, extra=lang)


def concat_combine(f: Sst, g: Sst) -> Sst:
    """w -> f(w) g(w)."""
    _require_copyless(f, g)
    _same_input(f.input_alphabet, g.input_alphabet)
    sigma = f.output_alphabet.union(g.output_alphabet)

    def out(key, rename):
        return rename(0, f.output[key[0]]) + rename(1, g.output[key[1]])

    return _product([f, g], sigma, out)


def transition_morphism(t: Sst, erased: bool = False) -> MonoidMorphism:
    """The morphism c -> delta(-, c) into M wr Q (erased: shapes only)."""
    payload = assignment_monoid(t.registers, () if erased else t.output_alphabet)
    images = {}
    for c in t.input_alphabet:
        mapping = {}
        for q in t.states:
            q2, a = t.transitions[q, c]
            mapping[q] = (q2, erase(a) if erased else a)
        images[c] = wreath_element(t.states, mapping)
    return MonoidMorphism(images, wreath_monoid(t.states, payload))


def transition_image(t: Sst, w, erased: bool = False):
    return transition_morphism(t, erased)(t.input_alphabet.check_word(w))


def shape_key(a: RegAssignment) -> str:
    return "{" + ";".join(f"{r}={' '.join(img)}" for r, img in zip(a.registers, a.images)) + "}"


def shape_label_extractor(t: Sst, q, r, alpha: RegAssignment, j: int) -> Sst:
    """Copyless SST for s -> j-th label of psi(s)(q) at r, when its shape is alpha.

    States are pairs (state, shape) reachable from (q, id).  Each shape a
    owns a register block {(r', i) : i <= |a(r')|} holding the labels of
    the current assignment; blocks of other shapes are kept empty.
    """
    _require_copyless(t)
    if q not in t.states:
        raise ValidationError(f"unknown state {q!r}")
    if r not in t.registers:
        raise ValidationError(f"unknown register {r!r}")
    if alpha.registers != t.registers:
        raise ValidationError("target shape has the wrong register set")
    if not 0 <= j <= len(alpha[r]):
        raise ValidationError(f"label index {j} out of range 0..{len(alpha[r])}")
    alpha = erase(alpha)
    ident = RegAssignment.identity(t.registers)
    start = (q, ident)
    seen, order, todo = {start}, [start], deque([start])
    moves = {}
    while todo:
        p, a = todo.popleft()
        for c in t.input_alphabet:
            p2, b = t.transitions[p, c]
            nxt = (p2, compose_assignments(a, erase(b)))
            moves[(p, a), c] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                todo.append(nxt)
    shapes = list(dict.fromkeys(a for _, a in order))
    sid = {a: i for i, a in enumerate(shapes)}
    taken = set(t.output_alphabet)
    regname = {}
    for a in shapes:
        for x, img in zip(a.registers, a.images):
            for i in range(len(img) + 1):
                regname[sid[a], x, i] = fresh(f"{x}.{i}@s{sid[a]}", taken)
                taken.add(regname[sid[a], x, i])
    registers = list(regname.values())

    def state_name(key):
        return f"({key[0]},{shape_key(key[1])})"

    def symbolic(a):
        # labels as placeholders interleaved with the shape's registers
        out = {}
        for x, img in zip(a.registers, a.images):
            toks = [("ph", regname[sid[a], x, 0])]
            for i, y in enumerate(img, 1):
                toks.append(("reg", y))
                toks.append(("ph", regname[sid[a], x, i]))
            out[x] = toks
        return out

    trans = {}
    for (src, c), dst in moves.items():
        p, a = src
        _, b = t.transitions[p, c]
        sym = symbolic(a)
        image = dict.fromkeys(registers, ())
        for x, img in zip(b.registers, b.images):
            toks = []
            for s in img:
                if s in sym:
                    toks.extend(sym[s])
                else:
                    toks.append(("lit", s))
            seg, i = [], 0
            for kind, s in toks + [("reg", None)]:
                if kind == "reg":
                    image[regname[sid[dst[1]], x, i]] = tuple(seg)
                    seg, i = [], i + 1
                else:
                    seg.append(s)
        trans[state_name(src), c] = (state_name(dst), image)
    target = regname.get((sid[alpha], r, j)) if alpha in sid else None
    output = {state_name(key): ((target,) if key[1] == alpha else ()) for key in order}
    return Sst(t.input_alphabet, t.output_alphabet, [state_name(k) for k in order],
               state_name(start), registers, trans, {}, output)
