"""Alphabets, words, free-monoid morphisms and DFAs.

Symbols are arbitrary nonempty strings, so product and underlined alphabets
can be encoded by name mangling:

* underlined copy:  ``a`` -> ``_a``
* disjoint union:   ``x`` -> ``L:x`` / ``R:x``
* product {i}xG:    ``(i, a)`` -> ``i:a``

A word is a plain tuple of symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple


class ValidationError(ValueError):
    """A document or machine violates a structural invariant."""


class AlphabetError(ValidationError):
    """A word or machine uses symbols outside the expected alphabet."""


class BoundError(ValidationError):
    """An exhaustive procedure was asked to go past its configured bound."""


def word(text) -> Word:
    """Build a word from a space-separated string or any iterable of symbols.

    >>> word("_4 3 2")
    ('_4', '3', '2')
    """
    if isinstance(text, str):
        return tuple(text.split())
    return tuple(text)


def show(w: Sequence[str]) -> str:
    return " ".join(w)


def underline(sym: str) -> str:
    return "_" + sym


def tag(i, sym: str) -> str:
    return f"{i}:{sym}"


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, symbols: Iterable[str] = ()):
        symbols = tuple(symbols)
        seen = set()
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise ValidationError(f"symbols must be nonempty strings, got {s!r}")
            if s in seen:
                raise ValidationError(f"duplicate symbol {s!r}")
            seen.add(s)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, sym) -> bool:
        return sym in self._index

    def index(self, sym: str) -> int:
        return self._index[sym]

    def check_word(self, w: Iterable[str], what: str = "word") -> Word:
        w = tuple(w)
        for s in w:
            if s not in self._index:
                raise AlphabetError(f"{what} uses symbol {s!r} outside alphabet {list(self.symbols)}")
        return w

    def underlined(self) -> "Alphabet":
        return Alphabet(underline(s) for s in self.symbols)

    def with_underlined(self) -> "Alphabet":
        return Alphabet(self.symbols + tuple(underline(s) for s in self.symbols))

    def disjoint_union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(tuple("L:" + s for s in self) + tuple("R:" + s for s in other))

    def tagged(self, indices: Iterable) -> "Alphabet":
        """The product alphabet ``indices x self`` with ``i:a`` names."""
        return Alphabet(tag(i, s) for i in indices for s in self.symbols)

    def union(self, other: Iterable[str]) -> "Alphabet":
        extra = tuple(s for s in other if s not in self._index)
        return Alphabet(self.symbols + tuple(dict.fromkeys(extra)))

    def words(self, max_len: int, min_len: int = 0) -> Iterator[Word]:
        """All words of length in [min_len, max_len], shortest first."""
        for n in range(min_len, max_len + 1):
            yield from product(self.symbols, repeat=n)


def as_alphabet(a) -> Alphabet:
    return a if isinstance(a, Alphabet) else Alphabet(a)


def fresh(base: str, taken) -> str:
    """Return ``base`` or a primed variant of it that is not in ``taken``."""
    name = base
    while name in taken:
        name += "'"
    return name


def count_occurrences(w: Sequence[str], pi, alphabet=None) -> int:
    """Number of letters of ``w`` that belong to ``pi``."""
    pi = set(pi)
    if alphabet is not None:
        alphabet = as_alphabet(alphabet)
        alphabet.check_word(w)
        bad = [s for s in pi if s not in alphabet]
        if bad:
            raise AlphabetError(f"symbols {bad} are not in the alphabet")
    return sum(1 for s in w if s in pi)


@dataclass(frozen=True)
class FreeMorphism:
    """A monoid morphism between free monoids, given on letters."""

    source: Alphabet
    target: Alphabet
    image: Mapping[str, Word]

    def __init__(self, source, target, image: Mapping[str, Iterable[str]]):
        source, target = as_alphabet(source), as_alphabet(target)
        missing = [s for s in source if s not in image]
        if missing:
            raise ValidationError(f"morphism has no image for {missing}")
        extra = [s for s in image if s not in source]
        if extra:
            raise ValidationError(f"morphism defines images for unknown letters {extra}")
        img = {s: target.check_word(image[s], f"image of {s!r}") for s in source}
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "image", img)

    def __call__(self, w: Iterable[str]) -> Word:
        return apply_morphism(self, w)

    def __hash__(self):
        return hash((self.source, self.target, tuple(self.image[s] for s in self.source)))

    @classmethod
    def identity(cls, alphabet) -> "FreeMorphism":
        alphabet = as_alphabet(alphabet)
        return cls(alphabet, alphabet, {s: (s,) for s in alphabet})


def apply_morphism(h: FreeMorphism, w: Iterable[str]) -> Word:
    out = []
    img = h.image
    for s in w:
        try:
            out.extend(img[s])
        except KeyError:
            raise AlphabetError(f"letter {s!r} has no image under the morphism") from None
    return tuple(out)


@dataclass(frozen=True)
class Dfa:
    alphabet: Alphabet
    states: tuple
    initial: str
    accepting: frozenset
    delta: Mapping

    def __init__(self, alphabet, states, initial, accepting, delta):
        alphabet = as_alphabet(alphabet)
        states = tuple(states)
        if len(set(states)) != len(states):
            raise ValidationError("duplicate DFA states")
        if initial not in states:
            raise ValidationError(f"initial state {initial!r} is not a state")
        accepting = frozenset(accepting)
        if not accepting <= set(states):
            raise ValidationError("accepting states must be states")
        table = {}
        for q in states:
            row = delta.get(q, {})
            for a in alphabet:
                if a not in row:
                    raise ValidationError(f"DFA transition missing for ({q!r}, {a!r})")
                if row[a] not in states:
                    raise ValidationError(f"DFA transition ({q!r}, {a!r}) leads to unknown state")
                table[q, a] = row[a]
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "accepting", accepting)
        object.__setattr__(self, "delta", table)

    def step(self, q, a):
        return self.delta[q, a]

    def run(self, w: Iterable[str]):
        q = self.initial
        for a in self.alphabet.check_word(w):
            q = self.delta[q, a]
        return q

    def accepts(self, w: Iterable[str]) -> bool:
        return self.run(w) in self.accepting

    @classmethod
    def universal(cls, alphabet) -> "Dfa":
        alphabet = as_alphabet(alphabet)
        return cls(alphabet, ["0"], "0", ["0"], {"0": {a: "0" for a in alphabet}})


def dfa_accepts(d: Dfa, w: Iterable[str]) -> bool:
    return d.accepts(w)
