import pytest
from hypothesis import given, settings

from xduce.cfp import build_cfsquaring, eval_cfp
from xduce.cfpt import (
    BudgetExhausted,
    Cfpt,
    CfptStuck,
    cbs_compose_cfpt,
    constant_cfpt,
    default_budget,
    identity_cfpt,
    letterwise_cfpt,
    looping_cfpt,
    normalize_emissions,
    reverse_cfpt,
    run_cfpt,
    validate_cfpt,
)
from xduce.core import Alphabet, AlphabetError, ValidationError, underline
from xduce.corpus import cfsquaring_cfpt

from strategies import words

AB = Alphabet("ab")


def recursive_cbs(f, gs, w):
    return tuple(x for i in run_cfpt(f, w) for x in run_cfpt(gs[i], w))


def test_one_pebble_examples():
    assert run_cfpt(identity_cfpt(AB), tuple("ab")) == tuple("ab")
    assert run_cfpt(reverse_cfpt("abc"), tuple("abc")) == tuple("cba")
    assert run_cfpt(constant_cfpt(AB, "ba"), tuple("aab")) == tuple("ba")


def test_looping_exhausts_any_budget():
    t = looping_cfpt(AB)
    for budget in (4, 10, 1000):
        with pytest.raises(BudgetExhausted) as exc:
            run_cfpt(t, tuple("ab"), budget)
        assert exc.value.partial == tuple("ab")


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("XDUCE_BUDGET", "7")
    assert default_budget() == 7
    with pytest.raises(BudgetExhausted):
        run_cfpt(identity_cfpt(AB), tuple("aaaaaaaa"))
    monkeypatch.setenv("XDUCE_BUDGET", "lots")
    with pytest.raises(ValidationError):
        default_budget()
    monkeypatch.delenv("XDUCE_BUDGET")
    assert default_budget() == 10 ** 6


def test_validate_legal_and_illegal():
    assert validate_cfpt(identity_cfpt(AB)) == []
    assert validate_cfpt(cfsquaring_cfpt(AB)) == []
    t = identity_cfpt(AB)
    tables = {(p, q, ls): v for (p, q, ls), v in t.tables.items()}
    tables[1, "s", ("<",)] = ("s", "left", ())
    bad = Cfpt(AB, AB, 1, ["s"], "s", tables)
    assert validate_cfpt(bad) == [(1, "s", ("<",), "left")]
    tables[1, "s", ("<",)] = ("s", "push", ())
    bad = Cfpt(AB, AB, 1, ["s"], "s", tables)
    assert validate_cfpt(bad) == [(1, "s", ("<",), "push")]
    with pytest.raises(ValidationError):
        run_cfpt(bad, ())


def test_structural_validation():
    with pytest.raises(ValidationError):
        Cfpt(AB, AB, 0, ["s"], "s", {})
    with pytest.raises(ValidationError):
        Cfpt(["<"], AB, 1, ["s"], "s", {})
    with pytest.raises(ValidationError):
        Cfpt(AB, AB, 1, ["s"], "s", {(1, "s", ("<", "a")): ("s", "stay", ())})


def test_missing_entry_is_stuck():
    t = Cfpt(AB, AB, 1, ["s"], "s", {(1, "s", ("<",)): ("s", "right", ())})
    with pytest.raises(CfptStuck):
        run_cfpt(t, ("a",))


def test_normalize_emissions_preserves_semantics():
    f = letterwise_cfpt(AB, {"a": "ab", "b": ""}, AB)
    n = normalize_emissions(f)
    for (_, _, _), (_, action, emit) in n.tables.items():
        assert not emit or (len(emit) == 1 and action == "stay")
    for w in AB.words(4):
        assert run_cfpt(n, w) == run_cfpt(f, w)


def test_cfsquaring_as_pebble_transducer():
    t = cfsquaring_cfpt("123")
    assert t.k == 2
    want = ("_1", "1", "2", "3", "_2", "1", "2", "3", "_3", "1", "2", "3")
    assert run_cfpt(t, tuple("123")) == want
    e = build_cfsquaring("123")
    for w in Alphabet("123").words(3):
        assert run_cfpt(t, w) == eval_cfp(e, w)


def test_constant_empty_outer():
    f = constant_cfpt(AB, (), ["i"])
    h = cbs_compose_cfpt(f, {"i": identity_cfpt(AB)})
    for w in AB.words(3):
        assert run_cfpt(h, w) == ()


def test_cbs_requires_all_substitutions():
    f = letterwise_cfpt(AB, {"a": "i", "b": "j"}, ["i", "j"])
    with pytest.raises(AlphabetError):
        cbs_compose_cfpt(f, {"i": identity_cfpt(AB)})
    with pytest.raises(AlphabetError):
        cbs_compose_cfpt(f, {"i": identity_cfpt(AB), "j": identity_cfpt("abc")})


def cbs_cases():
    f1 = letterwise_cfpt(AB, {"a": "i", "b": "j"}, ["i", "j"])
    yield f1, {"i": identity_cfpt(AB), "j": reverse_cfpt(AB)}
    yield reverse_cfpt(AB), {"a": cfsquaring_cfpt(AB), "b": constant_cfpt(AB, ["_a"], AB.with_underlined())}
    sq = cfsquaring_cfpt(AB)
    subs = {c: letterwise_cfpt(AB, {"a": (c,), "b": ()}, AB.with_underlined()) for c in sq.output_alphabet}
    yield sq, subs


@pytest.mark.parametrize("case", range(3))
def test_cbs_matches_recursive(case):
    f, gs = list(cbs_cases())[case]
    h = cbs_compose_cfpt(f, gs)
    assert validate_cfpt(h) == []
    assert h.k == f.k + max(g.k for g in gs.values())
    for w in AB.words(4):
        assert run_cfpt(h, w) == recursive_cbs(f, gs, w)


@settings(max_examples=100, deadline=None)
@given(words(("a", "b"), max_size=7))
def test_stack_height_bounded(w):
    # run_cfpt asserts positions and height on every step
    t = cbs_compose_cfpt(reverse_cfpt(AB), {"a": cfsquaring_cfpt(AB), "b": identity_cfpt(AB)})
    assert len(run_cfpt(t, w)) >= 0


def test_one_pebble_only_terminal_pop():
    for t in (identity_cfpt(AB), reverse_cfpt(AB), constant_cfpt(AB, "a"), looping_cfpt(AB)):
        assert all(a != "push" for (_, a, _) in t.tables.values())
        assert all(p == 1 for (p, _, _) in t.tables)


def test_underline_helper_used_in_cases():
    assert underline("a") in cfsquaring_cfpt(AB).output_alphabet
