import pytest
from hypothesis import given, strategies as st

from xduce.core import (
    Alphabet,
    AlphabetError,
    Dfa,
    FreeMorphism,
    ValidationError,
    apply_morphism,
    count_occurrences,
    dfa_accepts,
    fresh,
    word,
)

from strategies import words

AB = Alphabet("ab")


def ends_with_a():
    return Dfa(AB, ["0", "1"], "0", ["1"], {"0": {"a": "1", "b": "0"}, "1": {"a": "1", "b": "0"}})


@pytest.mark.parametrize("w, pi, expected", [("abab", {"a"}, 2), ("", {"a", "b"}, 0), ("baab", {"a", "b"}, 4)])
def test_count_occurrences(w, pi, expected):
    assert count_occurrences(tuple(w), pi, AB) == expected


def test_count_rejects_foreign_symbol():
    with pytest.raises(ValidationError):
        count_occurrences(tuple("ab"), {"z"}, AB)
    with pytest.raises(ValidationError):
        count_occurrences(tuple("az"), {"a"}, AB)


def test_apply_morphism_examples():
    h = FreeMorphism("ab", "b", {"a": "bb", "b": ""})
    assert apply_morphism(h, tuple("ab")) == ("b", "b")
    assert apply_morphism(FreeMorphism.identity("abc"), tuple("abc")) == tuple("abc")
    g = FreeMorphism("a", "ab", {"a": "ab"})
    assert apply_morphism(g, tuple("aa")) == tuple("abab")


def test_morphism_validation():
    with pytest.raises(ValidationError):
        FreeMorphism("ab", "b", {"a": "b"})
    h = FreeMorphism("a", "a", {"a": "a"})
    with pytest.raises(ValidationError):
        apply_morphism(h, ("b",))


@pytest.mark.parametrize("w, expected", [("ba", True), ("", False), ("ab", False)])
def test_dfa_accepts(w, expected):
    assert dfa_accepts(ends_with_a(), tuple(w)) is expected


def test_dfa_must_be_total():
    with pytest.raises(ValidationError):
        Dfa(AB, ["0"], "0", [], {"0": {"a": "0"}})


def test_alphabet_rules():
    with pytest.raises(ValidationError):
        Alphabet(["a", "a"])
    with pytest.raises(ValidationError):
        Alphabet(["a", ""])
    assert list(AB.underlined()) == ["_a", "_b"]
    assert list(AB.disjoint_union(Alphabet("a"))) == ["L:a", "L:b", "R:a"]
    assert list(Alphabet("a").tagged([0, 1])) == ["0:a", "1:a"]
    with pytest.raises(AlphabetError):
        AB.check_word(("c",))


def test_word_and_fresh():
    assert word("1 2 3") == ("1", "2", "3")
    assert word("") == ()
    assert fresh("X", {"X", "X'"}) == "X''"


H = FreeMorphism("abc", "ab", {"a": "ab", "b": "", "c": "bba"})


@given(words(max_size=6), words(max_size=6))
def test_morphism_distributes(u, v):
    assert apply_morphism(H, u + v) == apply_morphism(H, u) + apply_morphism(H, v)


@given(words(max_size=8), st.sets(st.sampled_from("abc")))
def test_count_additive_on_disjoint_sets(w, p1):
    p2 = set("abc") - p1
    abc = Alphabet("abc")
    assert count_occurrences(w, p1 | p2, abc) == count_occurrences(w, p1, abc) + count_occurrences(w, p2, abc)
