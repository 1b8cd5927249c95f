from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancalc.channel import (
    Channel,
    cap,
    channels_equal,
    classify,
    comparator,
    compose,
    copy,
    deterministic,
    discard,
    dom,
    from_json,
    generator,
    identity,
    make_channel,
    nrm,
    pushforward,
    state,
    swap,
    tensor,
    wiring,
)
from chancalc.errors import ValidationError
from chancalc.kernel import BOOL, flip, make_space, make_subdist, point
from chancalc.netmodel import AND, OR, child_channels
from strategies import channels, spaces

AB = make_space("AB", ["a", "b"])
half, third = F(1, 2), F(1, 3)


def coin_or():
    # oc ∘ (flip(1/2) ⊗ id)
    return compose(tensor(state(flip(half)), identity(BOOL)), OR)


def test_gate_tables():
    assert OR.entry(("0", "1"), "1") == 1 and OR.entry(("0", "0"), "0") == 1
    assert AND.entry(("1", "1"), "1") == 1 and AND.entry(("1", "0"), "0") == 1


def test_child_d_channel():
    d = child_channels()["d"]
    row = d.row("ba")
    assert row["pfc"] == F(2, 10) and row["tga"] == F(3, 10) and row["lng"] == F(5, 100)
    assert row.is_proper()


def test_make_channel_rejects_overfull_row():
    with pytest.raises(ValidationError):
        make_channel([AB], [AB], {"a": [("a", F(3, 4)), ("b", F(1, 2))]})
    with pytest.raises(ValidationError):
        make_channel([AB], [AB], {"c": [("a", F(1, 2))]})


def test_generators():
    nab = comparator(AB)
    assert nab.row(("a", "a")) == point(AB, "a")
    assert nab.row(("a", "b")).weight() == 0
    assert copy(BOOL).row("0")[("0", "0")] == 1
    c = cap(AB)
    assert c.entry(("a", "b"), ()) == 0 and c.entry(("b", "b"), ()) == 1
    assert generator("cap", AB) == compose(comparator(AB), discard(AB))
    assert generator("project", BOOL, AB, k=1) == wiring((BOOL, AB), [1])
    assert generator("swap", BOOL, AB).row(("1", "a"))[("a", "1")] == 1
    assert generator("truth", AB) == discard(AB)
    with pytest.raises(ValidationError):
        generator("comparator", AB, AB)
    with pytest.raises(ValidationError):
        generator("project", AB, k=3)


def test_compose_examples():
    one = state(point(BOOL, "1"))
    assert compose(tensor(one, identity(BOOL)), AND) == identity(BOOL)
    f = coin_or()
    assert f.row("0") == flip(half)
    assert f.row("1") == point(BOOL, "1")
    with pytest.raises(ValidationError):
        compose(identity(AB), identity(BOOL))


def test_pushforward_examples():
    f = coin_or()
    assert pushforward(flip(third), f) == flip(F(2, 3))
    assert pushforward(point(BOOL, "0"), f) == f.row("0")


def test_tensor_of_states_matches_tensor_states():
    from chancalc.kernel import tensor_states

    a, b = flip(F(1, 4)), flip(F(19, 20))
    assert tensor(state(a), state(b)).as_subdist() == tensor_states(a, b)


def test_dom():
    assert dom(OR) == discard((BOOL, BOOL))
    w = make_subdist(AB, {"a": F(1, 3), "b": F(1, 2)})
    scaled = make_channel([AB], [AB], {"a": [("a", F(1, 3))], "b": [("b", F(1, 2))]})
    assert dom(scaled).entry("a", ()) == w["a"]
    zero = Channel([AB], [AB], [{}, {}])
    assert dom(zero).row_masses() == [0, 0]


def test_nrm_examples():
    scaled = make_channel([AB], [AB], {"a": [("a", F(1, 3))], "b": [("b", F(1, 2))]})
    assert nrm(scaled) == identity(AB)
    assert nrm(OR) == OR


def test_classify():
    assert classify(OR) == (True, True, False)
    assert not classify(identity(AB)).full_support
    assert classify(state(flip(half))) == (True, False, True)
    assert not classify(state(flip(1))).full_support


def test_channels_equal_signature():
    assert channels_equal(OR, OR)
    with pytest.raises(ValidationError):
        channels_equal(OR, identity(BOOL))


def test_json_roundtrip():
    d = child_channels()["hd"]
    spaces_ = {s.name: s for s in d.inputs + d.outputs}
    text = d.to_json()
    assert from_json(text, spaces_) == d
    assert text == d.to_json()
    assert '"rt,mi": {"eq": "1/2", "~eq": "1/2"}' in text


def test_wiring_is_built_from_generators():
    X, Y = AB, BOOL
    # (x, y) -> (y, x, x)
    w = wiring((X, Y), [1, 0, 0])
    built = compose(swap(X, Y), tensor(identity(Y), copy(X)))
    assert w == built
    assert wiring((X, Y), [0]) == compose(identity((X, Y)), tensor(identity(X), discard(Y)))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_determinism_characterisation(data):
    X, Y = data.draw(spaces()), data.draw(spaces())
    f = data.draw(channels((X,), (Y,), kind="total"))
    copy_law = compose(f, copy(Y)) == compose(copy(X), tensor(f, f))
    dirac = all(len(r) == 1 for r in f.rows)
    assert classify(f).deterministic == dirac == copy_law
    g = deterministic(X, Y, lambda x: Y.elements[X.index(x) % len(Y)])
    assert classify(g).deterministic


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_row_mass_preserved(data):
    X, Y, Z = (data.draw(spaces()) for _ in range(3))
    f = data.draw(channels((X,), (Y,)))
    g = data.draw(channels((Y,), (Z,)))
    for h in (compose(f, g), tensor(f, g), nrm(f)):
        assert all(m <= 1 for m in h.row_masses())
    ft = data.draw(channels((X,), (Y,), kind="total"))
    gt = data.draw(channels((Y,), (Z,), kind="total"))
    assert classify(compose(ft, gt)).total and classify(tensor(ft, gt)).total
