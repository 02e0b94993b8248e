"""Register assignments, copyless shapes and wreath products.

An assignment maps each register to a word over registers and output
letters.  Any symbol of an image that is not a register is an output letter,
so the same class covers both M_{R,S} and the erased shapes M_{R,0}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterable, Mapping

from .core import Alphabet, BoundError, ValidationError, as_alphabet

SHAPE_BOUND = 4
POWER_CAP = 10 ** 6


@dataclass(frozen=True)
class RegAssignment:
    registers: tuple
    images: tuple
    output_alphabet: frozenset = field(default=frozenset(), compare=False)
    _pos: dict = field(init=False, repr=False, compare=False)

    def __init__(self, registers, image: Mapping, output_alphabet=None, check=True):
        registers = tuple(as_alphabet(registers))
        pos = {r: i for i, r in enumerate(registers)}
        if check:
            missing = [r for r in registers if r not in image]
            if missing:
                raise ValidationError(f"assignment has no image for registers {missing}")
            extra = [r for r in image if r not in pos]
            if extra:
                raise ValidationError(f"assignment images given for unknown registers {extra}")
        images = tuple(tuple(image[r]) for r in registers)
        if output_alphabet is None:
            output_alphabet = frozenset(s for img in images for s in img if s not in pos)
        else:
            output_alphabet = frozenset(output_alphabet)
            if check:
                clash = output_alphabet & pos.keys()
                if clash:
                    raise ValidationError(f"registers and output letters overlap: {sorted(clash)}")
                for r, img in zip(registers, images):
                    bad = [s for s in img if s not in pos and s not in output_alphabet]
                    if bad:
                        raise ValidationError(f"image of {r!r} uses unknown symbols {bad}")
        object.__setattr__(self, "registers", registers)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "output_alphabet", output_alphabet)
        object.__setattr__(self, "_pos", pos)

    @classmethod
    def _raw(cls, registers, images, output_alphabet, pos):
        a = object.__new__(cls)
        object.__setattr__(a, "registers", registers)
        object.__setattr__(a, "images", images)
        object.__setattr__(a, "output_alphabet", output_alphabet)
        object.__setattr__(a, "_pos", pos)
        return a

    @classmethod
    def identity(cls, registers, output_alphabet=()) -> "RegAssignment":
        registers = tuple(registers)
        return cls(registers, {r: (r,) for r in registers}, output_alphabet)

    def __getitem__(self, r) -> tuple:
        return self.images[self._pos[r]]

    def is_register(self, s) -> bool:
        return s in self._pos

    def as_dict(self) -> dict:
        return dict(zip(self.registers, self.images))

    def __repr__(self):
        body = ", ".join(f"{r}->{' '.join(img) or 'eps'}" for r, img in zip(self.registers, self.images))
        return f"RegAssignment({body})"


Shape = RegAssignment


def _check_same(a: RegAssignment, b: RegAssignment):
    if a.registers != b.registers:
        raise ValidationError(f"register mismatch: {a.registers} vs {b.registers}")


def substitute(a: RegAssignment, w) -> tuple:
    """a^(.) applied to a word: registers are replaced by their images."""
    out = []
    pos, images = a._pos, a.images
    for s in w:
        i = pos.get(s)
        if i is None:
            out.append(s)
        else:
            out.extend(images[i])
    return tuple(out)


def compose_assignments(a: RegAssignment, b: RegAssignment) -> RegAssignment:
    """a . b, i.e. substitute a's images into b's images."""
    _check_same(a, b)
    images = tuple(substitute(a, img) for img in b.images)
    return RegAssignment._raw(a.registers, images, a.output_alphabet | b.output_alphabet, a._pos)


def dagger_apply(a: RegAssignment, vals: Mapping) -> dict:
    missing = [r for r in a.registers if r not in vals]
    if missing:
        raise ValidationError(f"no value for registers {missing}")
    out = {}
    for r, img in zip(a.registers, a.images):
        new = []
        for s in img:
            if s in a._pos:
                new.extend(vals[s])
            else:
                new.append(s)
        out[r] = tuple(new)
    return out


def register_counts(a: RegAssignment) -> dict:
    counts = dict.fromkeys(a.registers, 0)
    for img in a.images:
        for s in img:
            if s in counts:
                counts[s] += 1
    return counts


def is_copyless(a: RegAssignment) -> bool:
    return all(n <= 1 for n in register_counts(a).values())


def erase(a: RegAssignment) -> Shape:
    pos = a._pos
    images = tuple(tuple(s for s in img if s in pos) for img in a.images)
    return RegAssignment._raw(a.registers, images, frozenset(), pos)


def enumerate_copyless_shapes(registers, bound: int = SHAPE_BOUND) -> list:
    """All copyless shapes over ``registers``.

    Every register is sent to at most one image, so a shape is a choice of
    destination (an image or nowhere) per register plus an ordering inside
    each image.
    """
    registers = tuple(registers)
    n = len(registers)
    if n > bound:
        raise BoundError(f"{n} registers exceed the shape enumeration bound {bound}")
    shapes = []
    seen = set()
    for dest in product(range(n + 1), repeat=n):
        bins = [[registers[j] for j in range(n) if dest[j] == i] for i in range(n)]
        for orders in product(*(permutations(b) for b in bins)):
            s = RegAssignment(registers, dict(zip(registers, orders)), ())
            if s not in seen:
                seen.add(s)
                shapes.append(s)
    return shapes


@dataclass(frozen=True)
class ShapeLabels:
    shape: Shape
    labels: tuple

    def __post_init__(self):
        for r, img, lab in zip(self.shape.registers, self.shape.images, self.labels):
            if len(lab) != len(img) + 1:
                raise ValidationError(f"register {r!r} needs {len(img) + 1} labels, got {len(lab)}")

    def label(self, r, j) -> tuple:
        return self.labels[self.shape._pos[r]][j]


def shape_label_split(a: RegAssignment) -> ShapeLabels:
    if not is_copyless(a):
        raise ValidationError("shape/label decomposition needs a copyless assignment")
    labels = []
    for img in a.images:
        parts, cur = [], []
        for s in img:
            if a.is_register(s):
                parts.append(tuple(cur))
                cur = []
            else:
                cur.append(s)
        parts.append(tuple(cur))
        labels.append(tuple(parts))
    return ShapeLabels(erase(a), tuple(labels))


def shape_label_join(sl: ShapeLabels, output_alphabet=None) -> RegAssignment:
    image = {}
    for r, img, lab in zip(sl.shape.registers, sl.shape.images, sl.labels):
        out = list(lab[0])
        for x, w in zip(img, lab[1:]):
            out.append(x)
            out.extend(w)
        image[r] = tuple(out)
    return RegAssignment(sl.shape.registers, image, output_alphabet)


class Monoid:
    """A monoid given by its identity and multiplication."""

    def __init__(self, identity, mul: Callable):
        self.identity = identity
        self.mul = mul

    def power(self, x, n: int):
        acc = self.identity
        for _ in range(n):
            acc = self.mul(acc, x)
        return acc


def assignment_monoid(registers, output_alphabet=()) -> Monoid:
    return Monoid(RegAssignment.identity(registers, output_alphabet), compose_assignments)


@dataclass(frozen=True)
class WreathElement:
    """An element of M wr Q: a total map q -> (q', m)."""

    states: tuple
    table: tuple

    def __call__(self, q):
        return self.table[self.states.index(q)]

    def as_dict(self) -> dict:
        return dict(zip(self.states, self.table))


def wreath_element(states, mapping: Mapping) -> WreathElement:
    states = tuple(states)
    missing = [q for q in states if q not in mapping]
    if missing:
        raise ValidationError(f"wreath element undefined on states {missing}")
    for q in states:
        if mapping[q][0] not in states:
            raise ValidationError(f"wreath element sends {q!r} outside the state set")
    return WreathElement(states, tuple((mapping[q][0], mapping[q][1]) for q in states))


def wreath_compose(u: WreathElement, v: WreathElement, mul: Callable) -> WreathElement:
    """(u . v)(q) = (pi1 v(pi1 u q), pi2 u(q) * pi2 v(pi1 u q))."""
    if u.states != v.states:
        raise ValidationError("wreath elements over different state sets")
    idx = {q: i for i, q in enumerate(u.states)}
    table = []
    for q1, m1 in u.table:
        q2, m2 = v.table[idx[q1]]
        table.append((q2, mul(m1, m2)))
    return WreathElement(u.states, tuple(table))


def wreath_monoid(states, payload: Monoid) -> Monoid:
    states = tuple(states)
    ident = WreathElement(states, tuple((q, payload.identity) for q in states))
    return Monoid(ident, lambda u, v: wreath_compose(u, v, payload.mul))


def idempotent_power(m, mul: Callable, cap: int = POWER_CAP) -> int:
    """Least n >= 1 such that m^n . m^n = m^n."""
    powers = [None, m]

    def pw(i):
        while len(powers) <= i:
            powers.append(mul(powers[-1], m))
        return powers[i]

    for n in range(1, cap + 1):
        p = pw(n)
        if pw(2 * n) == p:
            return n
    raise BoundError(f"no idempotent power found below {cap}; is the payload monoid finite?")


class MonoidMorphism:
    """A morphism from a free monoid, given on letters, with memoized evaluation."""

    def __init__(self, images: Mapping, monoid: Monoid):
        self.images = dict(images)
        self.monoid = monoid
        self._memo = {(): monoid.identity}

    def __call__(self, w) -> object:
        w = tuple(w)
        memo = self._memo
        if w in memo:
            return memo[w]
        k = len(w)
        while w[:k] not in memo:
            k -= 1
        acc = memo[w[:k]]
        for i in range(k, len(w)):
            acc = self.monoid.mul(acc, self.images[w[i]])
            memo[w[: i + 1]] = acc
        return acc
