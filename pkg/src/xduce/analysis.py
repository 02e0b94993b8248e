"""Producing triples and splits for copyless SSTs.

An assignment is abstracted to its shape plus, for every register, the set
of output letters its image contains.  Both parts compose exactly, so this
abstraction is a finite quotient monoid of the copyless assignments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .core import BoundError, ValidationError
from .monoid import (
    Monoid,
    MonoidMorphism,
    RegAssignment,
    compose_assignments,
    erase,
    wreath_element,
    wreath_monoid,
)
from .sst import Sst, check_copyless, run_sst

SPLIT_BOUND = 14
ELEMENT_CAP = 50_000


@dataclass(frozen=True)
class Cl01Element:
    shape: RegAssignment
    presence: tuple

    def letters(self, r) -> frozenset:
        return self.presence[self.shape._pos[r]]


def cl01_of(a: RegAssignment) -> Cl01Element:
    presence = tuple(frozenset(s for s in img if not a.is_register(s)) for img in a.images)
    return Cl01Element(erase(a), presence)


def cl01_mul(x: Cl01Element, y: Cl01Element) -> Cl01Element:
    pos = x.shape._pos
    presence = []
    for img, own in zip(y.shape.images, y.presence):
        acc = set(own)
        for r in img:
            acc |= x.presence[pos[r]]
        presence.append(frozenset(acc))
    return Cl01Element(compose_assignments(x.shape, y.shape), tuple(presence))


def cl01_monoid(registers) -> Monoid:
    ident = RegAssignment.identity(registers)
    return Monoid(Cl01Element(ident, tuple(frozenset() for _ in ident.registers)), cl01_mul)


def nu_morphism(t: Sst) -> MonoidMorphism:
    images = {}
    for c in t.input_alphabet:
        mapping = {}
        for q in t.states:
            q2, a = t.transitions[q, c]
            mapping[q] = (q2, cl01_of(a))
        images[c] = wreath_element(t.states, mapping)
    return MonoidMorphism(images, wreath_monoid(t.states, cl01_monoid(t.registers)))


@dataclass
class TripleTable:
    machine: Sst
    nu: MonoidMorphism
    elements: list
    _cache: dict = field(default_factory=dict, repr=False)

    def producing(self, mu, mv, mw, c) -> bool:
        t = self.machine
        q1 = mu(t.initial)[0]
        qv, beta = mv(q1)
        q2, gamma = mw(qv)
        used = set()
        for s in t.output[q2]:
            if gamma.shape.is_register(s):
                used.update(gamma.shape[s])
        return any(c in beta.letters(r) for r in used)

    def producing_word(self, u, v, w, c) -> bool:
        return self.producing(self.nu(u), self.nu(v), self.nu(w), c)

    def triples(self, c) -> set:
        """P(f, c) restricted to 1-split-shaped triples of reachable elements."""
        if c in self._cache:
            return self._cache[c]
        mul = self.nu.monoid.mul
        out = set()
        for mu in self.elements:
            for mv in self.elements:
                if mul(mu, mv) != mu:
                    continue
                for mw in self.elements:
                    if mul(mv, mw) == mw and self.producing(mu, mv, mw, c):
                        out.add((mu, mv, mw))
        self._cache[c] = out
        return out


def build_triple_table(t: Sst, cap: int = ELEMENT_CAP) -> TripleTable:
    if not check_copyless(t):
        raise ValidationError("producing triples are defined for copyless SSTs")
    nu = nu_morphism(t)
    mul = nu.monoid.mul
    start = nu.monoid.identity
    seen, order, todo = {start}, [start], deque([start])
    while todo:
        x = todo.popleft()
        for c in t.input_alphabet:
            y = mul(x, nu.images[c])
            if y not in seen:
                if len(seen) >= cap:
                    raise BoundError(f"more than {cap} reachable monoid elements")
                seen.add(y)
                order.append(y)
                todo.append(y)
    return TripleTable(t, nu, order)


def _check_cuts(s, cuts):
    cuts = tuple(cuts)
    if not cuts or any(not 0 <= i <= len(s) for i in cuts):
        raise ValidationError(f"cut positions {cuts} do not fit a word of length {len(s)}")
    if any(b < a for a, b in zip(cuts, cuts[1:])):
        raise ValidationError(f"cut positions {cuts} are not sorted")
    return cuts


def is_r_split(s, cuts, phi) -> bool:
    """Whether u v1 ... vr w (with v_i = s[cuts[i-1]:cuts[i]]) is an r-split."""
    s = tuple(s)
    cuts = _check_cuts(s, cuts)
    if any(a == b for a, b in zip(cuts, cuts[1:])) or len(cuts) < 2:
        return False
    pre = {phi(s[:i]) for i in cuts}
    if len(pre) != 1:
        return False
    post = {phi(s[i:]) for i in cuts}
    return len(post) == 1


def enumerate_r_splits(s, phi, r: int, bound: int = SPLIT_BOUND) -> list:
    s = tuple(s)
    if len(s) > bound:
        raise BoundError(f"word of length {len(s)} exceeds the split search bound {bound}")
    if r < 1:
        raise ValidationError("r must be at least 1")
    return [cuts for cuts in combinations(range(len(s) + 1), r + 1) if is_r_split(s, cuts, phi)]


@dataclass
class DichotomyReport:
    letter: str
    words: int = 0
    splits: int = 0
    producing: int = 0
    counterexample: tuple = None
    pumped: int = 0
    pump_failure: tuple = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None and self.pump_failure is None

    def __str__(self):
        head = "PASS" if self.passed else "FAIL"
        lines = [f"{head} letter={self.letter} words={self.words} splits={self.splits} "
                 f"producing={self.producing} pumped={self.pumped}"]
        if self.counterexample:
            lines.append(f"counterexample (u, v, w) = {self.counterexample}")
        if self.pump_failure:
            lines.append(f"pumping failure (u, v, w, n) = {self.pump_failure}")
        return "\n".join(lines)


def check_dichotomy(t: Sst, c, max_len: int, pump: int = 6, pump_samples: int = 200,
                    table: TripleTable = None) -> DichotomyReport:
    """Compare producing-triple predictions with actual letter counts."""
    table = table or build_triple_table(t)
    nu = table.nu
    report = DichotomyReport(c)

    def count(w):
        return sum(1 for x in run_sst(t, w) if x == c)

    for s in t.input_alphabet.words(max_len):
        report.words += 1
        n = len(s)
        for i in range(n):
            for j in range(i + 1, n + 1):
                u, v, w = s[:i], s[i:j], s[j:]
                if nu(u + v) != nu(u) or nu(v + w) != nu(w):
                    continue
                report.splits += 1
                predicted = table.producing(nu(u), nu(v), nu(w), c)
                big, small = count(s), count(u + w)
                if (predicted and not big > small) or (not predicted and big != small):
                    if report.counterexample is None:
                        report.counterexample = (u, v, w)
                if predicted:
                    report.producing += 1
                    if report.pumped < pump_samples:
                        report.pumped += 1
                        for k in range(pump + 1):
                            if count(u + v * k + w) < k and report.pump_failure is None:
                                report.pump_failure = (u, v, w, k)
    return report


def has_producing_r_split(t: Sst, s, pi, r: int, table: TripleTable = None,
                          bound: int = SPLIT_BOUND) -> bool:
    """Whether s has an r-split all of whose triples are producing for some letter of pi."""
    table = table or build_triple_table(t)
    s = t.input_alphabet.check_word(s)
    pi = list(pi)
    nu = table.nu
    for cuts in enumerate_r_splits(s, nu, r, bound):
        ok = True
        for a, b in zip(cuts, cuts[1:]):
            mu, mv, mw = nu(s[:a]), nu(s[a:b]), nu(s[b:])
            if not any(table.producing(mu, mv, mw, c) for c in pi):
                ok = False
                break
        if ok:
            return True
    return False
