"""Group element construction, composition, and cocycle arithmetic."""

import pytest
from hypothesis import given, settings, strategies as st

from fullgroups.clopen import cylinder, empty, full
from fullgroups.errors import NotPartitionError, PreconditionError
from fullgroups.group import (
    agree_on,
    apply,
    cocycle_at,
    cocycle_bound,
    cocycle_table,
    cocycle_values_on,
    commutator,
    compose,
    disjoint_cylinder_block,
    embed_symmetric,
    equals,
    identity,
    image,
    invert,
    is_identity,
    make_element,
    order,
    shift,
    support,
)
from fullgroups.systems import base_point, make_system

ODO2 = make_system({"kind": "odometer", "bases": [2]})
ODO23 = make_system({"kind": "odometer", "bases": [2, 3]})
FIB = make_system({"kind": "substitution", "alphabet": "ab", "rule": {"a": "ab", "b": "a"}})


def test_shift_composition():
    t = shift(ODO2, 1)
    assert equals(compose(t, t), shift(ODO2, 2))
    assert equals(invert(shift(ODO2, 3)), shift(ODO2, -3))
    assert is_identity(compose(t, invert(t)))


def test_identity_element():
    e = identity(FIB)
    assert is_identity(e)
    assert support(e).is_empty()
    assert cocycle_bound(e) == 0


def test_make_element_rejects_overlap():
    a = cylinder(ODO2, (0,))
    with pytest.raises(NotPartitionError):
        make_element(ODO2, [(a, 0), (a, 1)])


def test_make_element_rejects_gap():
    a = cylinder(ODO2, (0, 0))
    b = cylinder(ODO2, (1, 0))
    with pytest.raises(NotPartitionError):
        make_element(ODO2, [(a, 1), (b, -1)])


def test_make_element_rejects_noninjective_images():
    # domains partition X but both pieces land in [0]
    a = cylinder(ODO2, (0,))
    b = cylinder(ODO2, (1,))
    with pytest.raises(NotPartitionError):
        make_element(ODO2, [(a, 0), (b, 1)])


def test_translate_cylinder_exactly():
    # adding 1 to the full block wraps: T[11] = [00]
    top = cylinder(ODO2, (1, 1))
    assert top.translate(1) == cylinder(ODO2, (0, 0))
    assert image(shift(ODO2, 1), cylinder(ODO2, (1,))) == cylinder(ODO2, (0,))


def test_embed_symmetric_involution():
    u = cylinder(ODO2, (0, 0))
    s = embed_symmetric(ODO2, 2, (1, 0), u)
    assert order(s, 8) == 2
    assert support(s) == u.union(u.translate(1))
    assert cocycle_values_on(s, u) == {1}
    assert cocycle_values_on(s, u.translate(1)) == {-1}
    x, _ = base_point(ODO2, "primary")
    y = apply(s, x)
    assert y.window(0, 2) == (1, 0, 0)


def test_embed_symmetric_three_cycle():
    u = cylinder(ODO2, (0, 0, 0))
    s = embed_symmetric(ODO2, 3, (1, 2, 0), u)
    assert order(s, 8) == 3
    assert is_identity(compose(s, compose(s, s)))


def test_embed_symmetric_rejects_overlap():
    # translating [0] twice wraps back onto itself in the 2-odometer
    u = cylinder(ODO2, (0,))
    with pytest.raises(PreconditionError):
        embed_symmetric(ODO2, 3, (1, 2, 0), u)


def test_cocycle_table_hull():
    u = cylinder(ODO2, (0, 0))
    s = embed_symmetric(ODO2, 2, (1, 0), u)
    win, table = cocycle_table(s)
    assert win == (0, 1)
    assert table == {(0, 0): 1, (1, 0): -1, (0, 1): 0, (1, 1): 0}


def test_cocycle_at_point():
    x, _ = base_point(ODO2, "primary")
    t = shift(ODO2, 1)
    assert cocycle_at(t, x) == 1
    assert cocycle_at(invert(t), x) == -1


def test_order_of_shift_is_infinite():
    assert order(shift(ODO2, 1), 32) is None


def test_commutator_of_commuting_is_identity():
    u = cylinder(ODO2, (0, 0, 0))
    s = embed_symmetric(ODO2, 2, (1, 0), u)
    t = embed_symmetric(ODO2, 2, (1, 0), u.translate(4))
    assert support(s).disjoint(support(t))
    assert is_identity(commutator(s, t))


def test_agree_on():
    t = shift(ODO2, 1)
    assert agree_on(t, t, full(ODO2))
    assert not agree_on(t, identity(ODO2), cylinder(ODO2, (0,)))
    u = cylinder(ODO2, (0, 0))
    s = embed_symmetric(ODO2, 2, (1, 0), u)
    assert agree_on(s, identity(ODO2), cylinder(ODO2, (0, 1)))


def test_disjoint_cylinder_block():
    for spec, m in [(ODO2, 4), (FIB, 3)]:
        u = disjoint_cylinder_block(spec, m)
        assert not u.is_empty()
        blocks = [u.translate(i) for i in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                assert blocks[i].disjoint(blocks[j])


def test_subshift_shift_cocycle():
    t = shift(FIB, 1)
    a = cylinder(FIB, ("a", "b"))
    assert image(t, a) == cylinder(FIB, ("a", "b"), -1)
    assert cocycle_values_on(t, full(FIB)) == {1}


def _sample_pool(spec):
    u = disjoint_cylinder_block(spec, 3)
    return [
        shift(spec, 1),
        shift(spec, -1),
        embed_symmetric(spec, 2, (1, 0), u),
        embed_symmetric(spec, 3, (1, 2, 0), u),
    ]


def _product(spec, picks):
    pool = _sample_pool(spec)
    out = identity(spec)
    for i in picks:
        out = compose(out, pool[i])
    return out


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(0, 3), max_size=3),
    st.lists(st.integers(0, 3), max_size=3),
    st.lists(st.integers(0, 3), max_size=3),
)
def test_associativity(p1, p2, p3):
    a = _product(ODO2, p1)
    b = _product(ODO2, p2)
    c = _product(ODO2, p3)
    assert equals(compose(compose(a, b), c), compose(a, compose(b, c)))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=4))
def test_inverse_law(picks):
    s = _product(ODO23, picks)
    assert is_identity(compose(s, invert(s)))
    assert is_identity(compose(invert(s), s))
    assert equals(invert(invert(s)), s)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=3), st.lists(st.integers(0, 3), max_size=3))
def test_cocycle_law(p1, p2):
    s1 = _product(FIB, p1)
    s2 = _product(FIB, p2)
    x, _ = base_point(FIB, "primary")
    for n in range(-2, 3):
        p = x.shifted(n)
        assert cocycle_at(compose(s1, s2), p) == cocycle_at(s2, p) + cocycle_at(
            s1, apply(s2, p)
        )
        q = apply(invert(s1), p)
        assert cocycle_at(invert(s1), p) == -cocycle_at(s1, q)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=4))
def test_apply_matches_cocycle(picks):
    s = _product(ODO23, picks)
    x, _ = base_point(ODO23, "primary")
    for n in range(3):
        p = x.shifted(n)
        assert apply(s, p) == p.shifted(cocycle_at(s, p))
