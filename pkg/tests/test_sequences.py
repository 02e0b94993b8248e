from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from xduce.cfp import Cbs, Reg, constant, eval_cfp, rank_bound
from xduce.core import AlphabetError, ValidationError
from xduce.corpus import PWES, build
from xduce.hdt0l import run_hdt0l
from xduce.sequences import (
    EPS,
    Cat,
    Lit,
    PumpingFamily,
    SelfCheckError,
    Star,
    _self_check,
    beta_blocks,
    cat,
    eval_pwe,
    extract_cfp_family,
    extract_pumping_family,
    normalize_literals,
    poly_uniform_sets,
    star,
    star_height,
    stretch_pwe,
    substitute_pwe,
)
from xduce.sst import run_sst

A = ("a",)


def lit(s):
    return Lit(tuple(s))


@st.composite
def pwes(draw, letters="ab", depth=3):
    if depth == 0 or draw(st.booleans()):
        return Lit(tuple(draw(st.lists(st.sampled_from(letters), max_size=3))))
    if draw(st.booleans()):
        return Cat(draw(pwes(letters, depth - 1)), draw(pwes(letters, depth - 1)))
    return Star(draw(pwes(letters, depth - 1)))


def test_eval_examples():
    assert eval_pwe(Star(lit("ab")), 3) == tuple("ababab")
    assert eval_pwe(lit("x"), 7) == ("x",)
    assert eval_pwe(Cat(lit("u"), Star(lit("v"))), 2) == tuple("uvv")


def test_star_height_examples():
    assert star_height(lit("ab")) == 0
    assert star_height(Star(Star(lit("a")))) == 2


def test_substitute_examples():
    fam = {"i": lit("ab"), "j": Star(lit("c"))}
    assert substitute_pwe(lit("j"), fam) == fam["j"]
    assert substitute_pwe(EPS, fam) == EPS
    assert eval_pwe(substitute_pwe(Star(lit("i")), fam), 2) == tuple("abab")
    with pytest.raises(AlphabetError):
        substitute_pwe(lit("k"), fam)


def test_stretch_examples():
    e = Star(lit("a"))
    for n in range(5):
        assert eval_pwe(stretch_pwe(e, 1, 0), n) == eval_pwe(e, n)
        assert eval_pwe(stretch_pwe(e, 2, 1), n) == ("a",) * (2 * n + 1)
    assert stretch_pwe(lit("xy"), 3, 2) == lit("xy")
    with pytest.raises(ValidationError):
        stretch_pwe(e, 0, 0)


def cbs_at(e, fam, n):
    return tuple(x for i in eval_pwe(e, n) for x in eval_pwe(fam[i], n))


@settings(max_examples=150, deadline=None)
@given(pwes("ij"), pwes("ab"), pwes("ab"))
def test_substitute_semantics(e, x, y):
    fam = {"i": x, "j": y}
    s = substitute_pwe(e, fam)
    assert star_height(s) <= star_height(e) + max(star_height(x), star_height(y))
    for n in range(6):
        assert eval_pwe(s, n) == cbs_at(e, fam, n)


@settings(max_examples=150, deadline=None)
@given(pwes(), st.integers(1, 3), st.integers(0, 3))
def test_stretch_contract(e, c, d):
    s = stretch_pwe(e, c, d)
    assert star_height(s) <= star_height(e)
    for n in range(6):
        assert eval_pwe(s, n) == eval_pwe(e, c * n + d)


@given(pwes())
def test_smart_constructors_and_normalization(e):
    for n in range(4):
        assert eval_pwe(normalize_literals(e), n) == eval_pwe(e, n)
    assert eval_pwe(cat(e, EPS), 2) == eval_pwe(e, 2)
    assert eval_pwe(star(e), 2) == eval_pwe(e, 2) * 2


def test_family_validation():
    with pytest.raises(ValidationError):
        PumpingFamily(0, (), ())
    with pytest.raises(ValidationError):
        PumpingFamily(2, ((),), (EPS,))


def test_identity_family():
    fam = extract_pumping_family(build("identity_unary"))
    assert fam.period == 1
    assert fam.exprs[0] == Cat(Lit(A), Star(Lit(A)))
    assert fam.star_height() <= 1


def test_constant_family_is_literal():
    fam = extract_pumping_family(build("constant_unary"))
    assert fam.star_height() == 0


@pytest.mark.parametrize("name", ["identity_unary", "constant_unary", "late_constant_unary",
                                  "wrap_unary", "mod3_unary"])
def test_base_families_match(name):
    t = build(name)
    if not hasattr(t, "registers"):
        from xduce.sst import sequential_to_sst
        t = sequential_to_sst(t)
    fam = extract_pumping_family(t, check_n=8)
    assert fam.star_height() <= 1
    for i in range(4 * fam.period + 8):
        assert fam.at(i) == run_sst(t, A * i)


def test_mod3_period():
    from xduce.sst import sequential_to_sst
    assert extract_pumping_family(sequential_to_sst(build("mod3_unary"))).period == 3


def test_late_constant_needs_doubled_period():
    t = build("late_constant_unary")
    fam = extract_pumping_family(t)
    assert fam.period == 2
    # closed form c^n . Y(a^1) with the idempotent period 1 is off at a^2
    naive = PumpingFamily(1, (run_sst(t, ()),), (cat(star(lit("c")), EPS),))
    with pytest.raises(SelfCheckError):
        _self_check(naive, lambda i: run_sst(t, A * i), 4)
    assert run_sst(t, A * 2) == ("b",)


def test_copyful_machine_rejected():
    with pytest.raises(ValidationError):
        extract_pumping_family(build("prefixes_unary"))
    with pytest.raises(AlphabetError):
        extract_pumping_family(build("identity_ab"))


CFP_UNARY = ["cfsquaring_unary", "cfpow3_unary", "an_to_anb_power", "parity_switch_unary",
             "squaring_then_suffix_unary", "identity_unary", "late_constant_unary"]


@pytest.mark.parametrize("name", CFP_UNARY)
def test_cfp_families(name):
    e = build(name)
    if not hasattr(e, "outer") and not hasattr(e, "lang") and not hasattr(e, "left"):
        e = Reg(e)
    fam = extract_cfp_family(e)
    assert fam.star_height() <= rank_bound(e) + 1
    for i in range(3 * fam.period + 7):
        assert fam.at(i) == eval_cfp(e, A * i)


def test_cfsquaring_family():
    fam = extract_cfp_family(build("cfsquaring_unary"))
    assert fam.star_height() == 2
    for n in range(8):
        assert fam.at(n) == (("_a",) + A * n) * n


def test_constant_expression_family():
    e = Cbs(Reg(constant(A, ("i",))), {"i": Reg(constant(A, ("b", "b")))})
    assert extract_cfp_family(e).star_height() == 0


def test_beta_examples():
    assert beta_blocks(tuple("baab"), "a") == {0, 2}
    assert beta_blocks((), "a") == {0}
    assert beta_blocks(tuple("aa"), "a") == {2}


def beta_oracle(w, c):
    # k is a block length iff w = x c^k y with x not ending and y not starting in c
    out = set()
    for i in range(len(w) + 1):
        for j in range(i, len(w) + 1):
            if all(x == c for x in w[i:j]) and (i == 0 or w[i - 1] != c) and (j == len(w) or w[j] != c):
                out.add(j - i)
    return out


@given(st.lists(st.sampled_from("ab"), max_size=10))
def test_beta_matches_definition(w):
    assert beta_blocks(tuple(w), "a") == beta_oracle(tuple(w), "a")


def test_poly_examples():
    ps = poly_uniform_sets(Star(lit("a")), "a")
    assert ps.sorted() == [(), (Fraction(1),), (Fraction(0), Fraction(1))]
    assert poly_uniform_sets(lit("b"), "a").sorted() == [()]


def test_poly_needs_normalized_literals():
    # the value at n = 3 is (aba)^3 = ab aa b aa ba: a block of length 2 appears
    e = Star(lit("aba"))
    ps = poly_uniform_sets(e, "a")
    assert 2 in beta_blocks(eval_pwe(e, 3), "a")
    assert ps.covers(beta_blocks(eval_pwe(e, 3), "a"), 3)


@settings(max_examples=150, deadline=None)
@given(pwes(depth=4))
def test_poly_containment(e):
    if star_height(e) > 2:
        return
    ps = poly_uniform_sets(e, "a")
    assert 0 in ps.at(0) and all(0 in ps.at(n) for n in range(3))
    for n in range(11):
        assert ps.covers(beta_blocks(eval_pwe(e, n), "a"), n)


@pytest.mark.parametrize("name", sorted(PWES))
def test_poly_containment_corpus(name):
    e = build(name)
    ps = poly_uniform_sets(e, "a")
    for n in range(11):
        assert ps.covers(beta_blocks(eval_pwe(e, n), "a"), n)


def test_prefixes_witness_is_not_poly_uniform():
    s = build("prefixes_unary_hdt0l")
    for n in range(2, 11):
        assert len(beta_blocks(run_hdt0l(s, A * n), "a")) >= n - 1
