from itertools import product

import pytest
from hypothesis import given, settings

from xduce.core import BoundError, ValidationError
from xduce.monoid import (
    Monoid,
    RegAssignment,
    ShapeLabels,
    compose_assignments,
    dagger_apply,
    enumerate_copyless_shapes,
    erase,
    idempotent_power,
    is_copyless,
    shape_label_join,
    shape_label_split,
    wreath_compose,
    wreath_element,
    wreath_monoid,
)

from strategies import assignments, valuations

XY = ("X", "Y")


def ra(image, sigma=("a", "b", "c", "d", "_c", "#")):
    return RegAssignment(tuple(image), {r: tuple(w.split()) for r, w in image.items()}, sigma)


def test_compose_examples():
    beta = ra({"X": "X d"})
    assert compose_assignments(RegAssignment.identity(("X",)), beta) == beta
    assert compose_assignments(ra({"X": "c X"}), beta) == ra({"X": "c X d"})
    assert compose_assignments(ra({"X": ""}), ra({"X": "a X a"})) == ra({"X": "a a"})


def test_compose_rejects_register_mismatch():
    with pytest.raises(ValidationError):
        compose_assignments(ra({"X": "X"}), ra({"Y": "Y"}))


def test_dagger_examples():
    ex = ra({"X": "c X", "Y": "_c X Y"})
    assert dagger_apply(ex, {"X": (), "Y": ()}) == {"X": ("c",), "Y": ("_c",)}
    vals = {"X": ("a",), "Y": ("b", "b")}
    assert dagger_apply(RegAssignment.identity(XY), vals) == vals
    assert dagger_apply(ra({"X": "X X"}), {"X": ("a", "b")}) == {"X": tuple("abab")}
    with pytest.raises(ValidationError):
        dagger_apply(ex, {"X": ()})


def test_copyless_examples():
    assert not is_copyless(ra({"X": "c X", "Y": "_c X Y"}))
    assert is_copyless(ra({"X": "X Y #", "Y": ""}))
    assert is_copyless(RegAssignment.identity(XY))


def test_erase_examples():
    assert erase(ra({"X": "c X", "Y": "_c X Y"})) == RegAssignment(XY, {"X": ("X",), "Y": ("X", "Y")})
    assert erase(ra({"X": "a b", "Y": "c"})) == RegAssignment(XY, {"X": (), "Y": ()})


def test_registers_and_letters_disjoint():
    with pytest.raises(ValidationError):
        RegAssignment(("X",), {"X": ("X",)}, ("X",))
    with pytest.raises(ValidationError):
        RegAssignment(("X",), {})


def test_wreath_identity_and_trivial_payload():
    trivial = Monoid((), lambda x, y: ())
    wm = wreath_monoid("pq", trivial)
    v = wreath_element("pq", {"p": ("q", ()), "q": ("q", ())})
    assert wm.mul(wm.identity, v) == v
    f = wreath_element("pq", {"p": ("q", ()), "q": ("p", ())})
    g = wreath_element("pq", {"p": ("p", ()), "q": ("p", ())})
    fg = wm.mul(f, g)
    for q in "pq":
        assert fg(q)[0] == g(f(q)[0])[0]


def test_wreath_two_state_hand_expansion():
    mul = compose_assignments
    a1, a2 = ra({"X": "a X"}), ra({"X": "X b"})
    u = wreath_element("pq", {"p": ("q", a1), "q": ("q", a2)})
    v = wreath_element("pq", {"p": ("p", a2), "q": ("p", a1)})
    uv = wreath_compose(u, v, mul)
    # p -u-> q with a X, then q -v-> p with a X: payload a a X
    assert uv("p") == ("p", ra({"X": "a a X"}))
    # q -u-> q with X b, then q -v-> p with a X: payload a X b
    assert uv("q") == ("p", ra({"X": "a X b"}))


def test_wreath_element_must_be_total():
    with pytest.raises(ValidationError):
        wreath_element("pq", {"p": ("p", None)})
    with pytest.raises(ValidationError):
        wreath_element("p", {"p": ("z", None)})


def test_enumerate_copyless_shapes_sizes():
    one = enumerate_copyless_shapes(("X",))
    assert set(one) == {RegAssignment(("X",), {"X": ()}), RegAssignment(("X",), {"X": ("X",)})}
    assert len(enumerate_copyless_shapes(())) == 1
    with pytest.raises(BoundError):
        enumerate_copyless_shapes("ABCDE")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shapes_closed_and_bounded(n):
    regs = tuple("WXYZ"[:n])
    shapes = enumerate_copyless_shapes(regs)
    found = set(shapes)
    assert len(found) == len(shapes)
    assert all(is_copyless(s) and all(len(img) <= n for img in s.images) for s in shapes)
    sample = shapes if n <= 3 else shapes[::7]
    for s, t in product(sample, sample):
        assert compose_assignments(s, t) in found


def test_shape_counts_small():
    # both in one image (2 images x 2 orders), one in each (2), one dropped (2 x 2), none (1)
    assert len(enumerate_copyless_shapes(XY)) == 11


def test_shape_label_examples():
    sl = shape_label_split(ra({"X": "a X b"}))
    assert sl.shape == RegAssignment(("X",), {"X": ("X",)})
    assert sl.labels == ((("a",), ("b",)),)
    sl = shape_label_split(ra({"X": "a b"}))
    assert sl.shape == RegAssignment(("X",), {"X": ()})
    assert sl.labels == ((("a", "b"),),)
    with pytest.raises(ValidationError):
        shape_label_split(ra({"X": "X X"}))
    with pytest.raises(ValidationError):
        ShapeLabels(RegAssignment(("X",), {"X": ("X",)}), (((),),))


def test_idempotent_power_examples():
    mul = compose_assignments
    assert idempotent_power(RegAssignment.identity(XY), mul) == 1
    assert idempotent_power(RegAssignment(XY, {"X": ("Y",), "Y": ("X",)}), mul) == 2
    for s in enumerate_copyless_shapes("XYZ"):
        n = idempotent_power(s, mul)
        p = s
        for _ in range(n - 1):
            p = mul(p, s)
        assert mul(p, p) == p


def test_idempotent_power_cap():
    with pytest.raises(BoundError):
        idempotent_power(ra({"X": "a X"}), compose_assignments, cap=50)


@settings(max_examples=300)
@given(assignments(), assignments(), valuations())
def test_dagger_reverses_composition(a, b, vals):
    assert dagger_apply(compose_assignments(a, b), vals) == dagger_apply(b, dagger_apply(a, vals))


@settings(max_examples=200)
@given(assignments(), assignments(), assignments())
def test_composition_associative(a, b, c):
    assert compose_assignments(compose_assignments(a, b), c) == compose_assignments(a, compose_assignments(b, c))


@settings(max_examples=200)
@given(assignments(), assignments())
def test_erase_is_morphism(a, b):
    assert erase(compose_assignments(a, b)) == compose_assignments(erase(a), erase(b))


@given(assignments(copyless=True))
def test_erase_keeps_copyless(a):
    assert is_copyless(erase(a))


@settings(max_examples=200)
@given(assignments(copyless=True))
def test_shape_label_round_trip(a):
    sl = shape_label_split(a)
    back = shape_label_join(sl, a.output_alphabet)
    assert back == a
    assert shape_label_split(back) == sl
    assert erase(back) == sl.shape


def test_copyless_closed_exhaustive():
    sigma = ("a",)
    symbols = list(XY) + list(sigma)
    imgs = [()] + [(s,) for s in symbols] + list(product(symbols, repeat=2))
    cl = []
    for ix, iy in product(imgs, repeat=2):
        a = RegAssignment(XY, {"X": ix, "Y": iy}, sigma)
        if is_copyless(a):
            cl.append(a)
    for a, b in product(cl, cl):
        assert is_copyless(compose_assignments(a, b))
