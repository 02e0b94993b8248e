"""Comparison-free pebble transducers.

The input is read as ``< w >``; pebble positions run over 1..|w|+2.  A
machine with k pebbles has one transition table per stack height p, keyed by
(state, letters under the p pebbles, bottom first).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

from .core import Alphabet, AlphabetError, ValidationError, as_alphabet, fresh

LEFT_END, RIGHT_END = "<", ">"
ACTIONS = ("stay", "left", "right", "push", "pop")
DEFAULT_BUDGET = 10 ** 6


class BudgetExhausted(RuntimeError):
    """The step budget ran out before the pebble stack emptied."""

    def __init__(self, budget, partial=()):
        super().__init__(f"no termination within {budget} steps")
        self.budget = budget
        self.partial = tuple(partial)


class CfptStuck(ValidationError):
    """The transition table has no entry for the current configuration."""


def default_budget() -> int:
    env = os.environ.get("XDUCE_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValidationError(f"XDUCE_BUDGET must be an integer, got {env!r}") from None
        if value < 0:
            raise ValidationError("XDUCE_BUDGET must be nonnegative")
        return value
    return DEFAULT_BUDGET


@dataclass(frozen=True, eq=False)
class Cfpt:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    k: int
    states: tuple
    initial: str
    tables: dict
    _violations: list = field(default=None, init=False, repr=False, compare=False)

    def __init__(self, input_alphabet, output_alphabet, k: int, states, initial, tables: Mapping):
        gamma, sigma = as_alphabet(input_alphabet), as_alphabet(output_alphabet)
        for s in (LEFT_END, RIGHT_END):
            if s in gamma:
                raise ValidationError(f"end marker {s!r} cannot be an input letter")
        if any("," in s for s in gamma):
            raise ValidationError("input symbols of a pebble transducer cannot contain ','")
        if k < 1:
            raise ValidationError("a pebble transducer needs at least one pebble")
        states = tuple(states)
        sset = set(states)
        if initial not in sset:
            raise ValidationError(f"initial state {initial!r} is not a state")
        tape = set(gamma) | {LEFT_END, RIGHT_END}
        table = {}
        for key, entry in tables.items():
            p, q, letters = key
            letters = tuple(letters)
            if not 1 <= p <= k:
                raise ValidationError(f"table height {p} outside 1..{k}")
            if q not in sset:
                raise ValidationError(f"unknown state {q!r} in table")
            if len(letters) != p or any(c not in tape for c in letters):
                raise ValidationError(f"bad letter tuple {letters} at height {p}")
            nxt, action, emit = entry
            if nxt not in sset:
                raise ValidationError(f"unknown target state {nxt!r}")
            if action not in ACTIONS:
                raise ValidationError(f"unknown stack action {action!r}")
            table[p, q, letters] = (nxt, action, sigma.check_word(emit, "emission"))
        object.__setattr__(self, "input_alphabet", gamma)
        object.__setattr__(self, "output_alphabet", sigma)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "tables", table)
        object.__setattr__(self, "_violations", None)

    def __call__(self, w, budget=None):
        return run_cfpt(self, w, budget)


def validate_cfpt(t: Cfpt) -> list:
    """Table entries whose stack action is not allowed, as (p, state, letters, action)."""
    bad = []
    for (p, q, letters), (_, action, _) in t.tables.items():
        top = letters[-1]
        if (action == "left" and top == LEFT_END) or (action == "right" and top == RIGHT_END) \
                or (action == "push" and p == t.k):
            bad.append((p, q, letters, action))
    return bad


def run_cfpt(t: Cfpt, w, budget: int = None) -> tuple:
    if t._violations is None:
        object.__setattr__(t, "_violations", validate_cfpt(t))
    if t._violations:
        raise ValidationError(f"illegal pebble transducer: {t._violations[0]}")
    if budget is None:
        budget = default_budget()
    tape = (LEFT_END,) + t.input_alphabet.check_word(w) + (RIGHT_END,)
    last = len(tape)
    stack = [1]
    q = t.initial
    out = []
    steps = 0
    tables = t.tables
    while stack:
        if steps >= budget:
            raise BudgetExhausted(budget, out)
        steps += 1
        letters = tuple(tape[i - 1] for i in stack)
        entry = tables.get((len(stack), q, letters))
        if entry is None:
            raise CfptStuck(f"no transition for state {q!r} reading {letters}")
        q, action, emit = entry
        out.extend(emit)
        if action == "left":
            stack[-1] -= 1
        elif action == "right":
            stack[-1] += 1
        elif action == "push":
            stack.append(1)
        elif action == "pop":
            stack.pop()
        assert len(stack) <= t.k and all(1 <= i <= last for i in stack)
    return tuple(out)


def normalize_emissions(t: Cfpt) -> Cfpt:
    """Equivalent machine whose emitting transitions emit one letter and stay."""
    tables = {}
    states = list(t.states)
    taken = set(states)
    for (p, q, letters), (nxt, action, emit) in t.tables.items():
        if not emit or (len(emit) == 1 and action == "stay"):
            tables[p, q, letters] = (nxt, action, emit)
            continue
        steps = [("stay", (e,)) for e in emit]
        if action != "stay":
            steps.append((action, ()))
        cur = q
        for i, (act, e) in enumerate(steps):
            if i == len(steps) - 1:
                target = nxt
            else:
                target = fresh(f"{q}~{p}~{','.join(letters)}~{i}", taken)
                taken.add(target)
                states.append(target)
            tables[p, cur, letters] = (target, act, e)
            cur = target
    return Cfpt(t.input_alphabet, t.output_alphabet, t.k, states, t.initial, tables)


def cbs_compose_cfpt(f: Cfpt, gs: Mapping) -> Cfpt:
    """A pebble transducer for w -> g_{i1}(w) ... g_{in}(w) where i1...in = f(w).

    Each letter i emitted by f becomes a push into g_i's initial state; the
    call state remembers f's return state and f's stack height, so that g_i's
    own bottom pebble can be recognized and its final pop returns to f.
    """
    missing = [i for i in f.output_alphabet if i not in gs]
    if missing:
        raise AlphabetError(f"no substitution for letters {missing}")
    for i, g in gs.items():
        if set(g.input_alphabet) != set(f.input_alphabet):
            raise AlphabetError(f"substitution for {i!r} has a different input alphabet")
    f = normalize_emissions(f)
    sigma = Alphabet(())
    for i in f.output_alphabet:
        sigma = sigma.union(gs[i].output_alphabet)
    k = f.k + max((gs[i].k for i in f.output_alphabet), default=0)
    states = {}

    def top(q):
        return states.setdefault(("F", q), f"F|{q}")

    def call(q, p, i, r):
        return states.setdefault(("G", q, p, i, r), f"G|{q}|{p}|{i}|{r}")

    top(f.initial)
    tables = {}
    contexts = {}
    for (p, q, letters), (nxt, action, emit) in f.tables.items():
        if not emit:
            tables[p, top(q), letters] = (top(nxt), action, ())
        else:
            (i,) = emit
            g = gs[i]
            tables[p, top(q), letters] = (call(nxt, p, i, g.initial), "push", ())
            contexts.setdefault((nxt, p, i), set()).add(letters)
        top(nxt)
    for (nxt, p, i), below in contexts.items():
        g = gs[i]
        for (h, r, gl), (r2, action, emit) in g.tables.items():
            for letters in below:
                key = (p + h, call(nxt, p, i, r), letters + gl)
                if action == "pop" and h == 1:
                    tables[key] = (top(nxt), "pop", emit)
                else:
                    tables[key] = (call(nxt, p, i, r2), action, emit)
    return Cfpt(f.input_alphabet, sigma, k, list(states.values()), top(f.initial), tables)


def _one_pebble(gamma, rows) -> dict:
    return {(1, q, (c,)): v for (q, c), v in rows.items()}


def identity_cfpt(gamma) -> Cfpt:
    gamma = as_alphabet(gamma)
    rows = {("s", LEFT_END): ("s", "right", ()), ("s", RIGHT_END): ("s", "pop", ())}
    for c in gamma:
        rows["s", c] = ("s", "right", (c,))
    return Cfpt(gamma, gamma, 1, ["s"], "s", _one_pebble(gamma, rows))


def reverse_cfpt(gamma) -> Cfpt:
    gamma = as_alphabet(gamma)
    rows = {
        ("go", LEFT_END): ("go", "right", ()),
        ("go", RIGHT_END): ("back", "left", ()),
        ("back", LEFT_END): ("back", "pop", ()),
    }
    for c in gamma:
        rows["go", c] = ("go", "right", ())
        rows["back", c] = ("back", "left", (c,))
    return Cfpt(gamma, gamma, 1, ["go", "back"], "go", _one_pebble(gamma, rows))


def constant_cfpt(gamma, out, output_alphabet=None) -> Cfpt:
    gamma = as_alphabet(gamma)
    out = tuple(out)
    sigma = as_alphabet(output_alphabet) if output_alphabet is not None else Alphabet(dict.fromkeys(out))
    rows = {("s", c): ("s", "pop", out) for c in (LEFT_END, RIGHT_END, *gamma)}
    return Cfpt(gamma, sigma, 1, ["s"], "s", _one_pebble(gamma, rows))


def letterwise_cfpt(gamma, images: Mapping, output_alphabet) -> Cfpt:
    """Left-to-right sweep emitting images[c] for each letter c."""
    gamma = as_alphabet(gamma)
    rows = {("s", LEFT_END): ("s", "right", ()), ("s", RIGHT_END): ("s", "pop", ())}
    for c in gamma:
        rows["s", c] = ("s", "right", tuple(images[c]))
    return Cfpt(gamma, output_alphabet, 1, ["s"], "s", _one_pebble(gamma, rows))


def looping_cfpt(gamma) -> Cfpt:
    """Walks to the right end marker and then stays there forever."""
    gamma = as_alphabet(gamma)
    rows = {("s", LEFT_END): ("s", "right", ()), ("s", RIGHT_END): ("s", "stay", ())}
    for c in gamma:
        rows["s", c] = ("s", "right", (c,))
    return Cfpt(gamma, gamma, 1, ["s"], "s", _one_pebble(gamma, rows))
