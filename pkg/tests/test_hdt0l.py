import pytest
from hypothesis import given, settings, strategies as st

from xduce.core import Alphabet, AlphabetError, ValidationError, show, word
from xduce.corpus import build, doubling_hdt0l, identity_hdt0l, reverse_hdt0l, square_unary_hdt0l
from xduce.hdt0l import (
    Hdt0lSystem,
    check_layered_hdt0l,
    disjointify,
    hdt0l_to_sst,
    infer_layering_hdt0l,
    layered_hdt0l_to_sst,
    layered_sst_blocks,
    map_hdt0l,
    run_hdt0l,
    sst_to_hdt0l,
)
from xduce.sst import check_copyless, check_layered, infer_layering, run_sst

AB = Alphabet("ab")


def blockwise(f, w, sep="#"):
    blocks, cur = [], []
    for c in w:
        if c == sep:
            blocks.append(tuple(cur))
            cur = []
        else:
            cur.append(c)
    blocks.append(tuple(cur))
    out = []
    for i, b in enumerate(blocks):
        if i:
            out.append(sep)
        out.extend(f(b))
    return tuple(out)


def test_run_examples():
    s = doubling_hdt0l()
    assert run_hdt0l(s, ()) == ("a",)
    assert run_hdt0l(s, tuple("aaa")) == ("a",) * 8
    h = sst_to_hdt0l(build("prefixes"))
    assert show(run_hdt0l(h, word("1 2 3 4"))) == "_4 3 2 1 _3 2 1 _2 1 _1"


def test_application_order():
    # h_{w_n} is applied to the initial word first: h_a(h_b(x)) = h_a(B x) = B A x
    s = Hdt0lSystem(AB, AB, ["x", "A", "B"], ["x"],
                    {"a": {"x": ("A", "x"), "A": ("A",), "B": ("B",)},
                     "b": {"x": ("B", "x"), "A": ("A",), "B": ("B",)}},
                    {"x": (), "A": ("a",), "B": ("b",)})
    assert run_hdt0l(s, tuple("ab")) == tuple("ba")


def test_exponential_growth():
    s = doubling_hdt0l()
    for n in range(13):
        assert len(run_hdt0l(s, ("a",) * n)) == 2 ** n


def test_layered_examples():
    d = doubling_hdt0l()
    assert infer_layering_hdt0l(d, 4) is None
    assert not check_layered_hdt0l(d, [("x",)])
    single = Hdt0lSystem(AB, AB, ["x", "y"], ["x"], {"a": {"x": ("y",), "y": ("x",)},
                                                     "b": {"x": ("x",), "y": ("y",)}},
                         {"x": ("a",), "y": ("b",)})
    assert check_layered_hdt0l(single, [("x", "y")])
    h = sst_to_hdt0l(build("idreverse_ab"))
    assert check_layered_hdt0l(h, h.layers) and len(h.layers) == 2


def test_layered_rejects_bad_partition():
    with pytest.raises(ValidationError):
        check_layered_hdt0l(doubling_hdt0l(), [()])


@pytest.mark.parametrize("name", ["doubling_hdt0l", "identity_hdt0l", "reverse_hdt0l",
                                  "prefixes_unary_hdt0l", "square_unary_hdt0l", "map_square_hdt0l"])
def test_natural_translation(name):
    s = build(name)
    t = hdt0l_to_sst(s)
    assert len(t.states) == 1
    for w in s.input_alphabet.words(5 if len(s.input_alphabet) <= 2 else 3):
        assert run_sst(t, w) == run_hdt0l(s, w)


def test_natural_translation_keeps_one_layer():
    s = identity_hdt0l(AB)
    t = hdt0l_to_sst(s)
    assert infer_layering(t, 1) is not None


@pytest.mark.parametrize("name, k", [("idreverse_ab", 0), ("identity_ab", 0), ("reverse_ab", 0),
                                     ("prefixes_ab", 1), ("fill_c_sst", 0), ("constant_ab", 0)])
def test_sst_to_hdt0l_round_trip(name, k):
    t = build(name)
    h = sst_to_hdt0l(t, k)
    assert len(h.layers) == k + 2 and check_layered_hdt0l(h, h.layers)
    back = layered_hdt0l_to_sst(h, h.layers)
    assert check_layered(back, layered_sst_blocks(h, h.layers, back))
    for w in t.input_alphabet.words(5 if len(t.input_alphabet) <= 2 else 3):
        assert run_hdt0l(h, w) == run_sst(t, w)
        assert run_sst(back, w) == run_sst(t, w)


def test_one_layered_system_gives_copyless_sst():
    s = identity_hdt0l(AB)
    t = layered_hdt0l_to_sst(s, s.layers)
    assert check_copyless(t)
    for w in AB.words(5):
        assert run_sst(t, w) == w


def test_sst_to_hdt0l_needs_layering():
    with pytest.raises(ValidationError):
        sst_to_hdt0l(build("doubling_sst"))
    with pytest.raises(ValidationError):
        sst_to_hdt0l(build("prefixes_ab"), 0)


def test_disjointify():
    s = build("prefixes_unary_hdt0l")
    s2 = Hdt0lSystem(s.input_alphabet, s.output_alphabet, s.working_alphabet, ["Y", "Y"],
                     {c: h.image for c, h in s.rules.items()}, s.final.image, s.layers)
    d = disjointify(s2)
    assert len(set(d.initial_word)) == len(d.initial_word) == 2
    assert check_layered_hdt0l(d, d.layers)
    for n in range(6):
        assert run_hdt0l(d, ("a",) * n) == run_hdt0l(s2, ("a",) * n)


def test_map_examples():
    m = map_hdt0l(identity_hdt0l("abc"))
    assert run_hdt0l(m, tuple("ab#c")) == tuple("ab#c")
    m = map_hdt0l(reverse_hdt0l("abcd"))
    assert run_hdt0l(m, tuple("ab#cd")) == tuple("ba#dc")
    m = map_hdt0l(doubling_hdt0l())
    assert run_hdt0l(m, tuple("aa#a")) == tuple("aaaa#aa")
    with pytest.raises(AlphabetError):
        map_hdt0l(identity_hdt0l("a#"))


def test_map_blockwise_exhaustive():
    for base in [reverse_hdt0l(AB), square_unary_hdt0l(), build("prefixes_unary_hdt0l")]:
        m = map_hdt0l(base, "#", base.layers)
        assert check_layered_hdt0l(m, m.layers)
        gamma = list(base.input_alphabet)
        for w in Alphabet(gamma + ["#"]).words(11):
            if w.count("#") > 2 or any(len(b) > 3 for b in "".join(w).split("#")):
                continue
            assert run_hdt0l(m, w) == blockwise(lambda b: run_hdt0l(base, b), w)


def test_map_adds_a_layer():
    base = square_unary_hdt0l()
    m = map_hdt0l(base, "#", base.layers)
    assert len(m.layers) == len(base.layers) + 1
    assert infer_layering_hdt0l(m, len(base.layers) - 1) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("ab#"), max_size=9))
def test_map_reverse_property(w):
    m = map_hdt0l(reverse_hdt0l(AB))
    assert run_hdt0l(m, tuple(w)) == blockwise(lambda b: b[::-1], tuple(w))
