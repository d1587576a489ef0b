"""Round-trips for every emitted text artifact."""

import pytest

from fullgroups.canon import factorize
from fullgroups.clopen import cylinder, empty, full
from fullgroups.errors import ParseError
from fullgroups.formats import (
    parse_clopen,
    parse_element,
    parse_factorization,
    parse_lef_witness,
    parse_system_config,
    parse_towers,
    render_clopen,
    render_element,
    render_factorization,
    render_lef_witness,
    render_system_config,
    render_towers,
)
from fullgroups.group import (
    disjoint_cylinder_block,
    embed_symmetric,
    equals,
    identity,
    invert,
    shift,
)
from fullgroups.lef import lef_map
from fullgroups.systems import make_system
from fullgroups.towers import tower_sequence

ODO2 = make_system({"kind": "odometer", "bases": [2]})
FIB = make_system({"kind": "substitution", "rule": {"a": "ab", "b": "a"}})
SYSTEMS = {"odo2": ODO2, "fib": FIB}


def test_clopen_round_trip():
    c = cylinder(ODO2, (0, 1)).union(cylinder(ODO2, (1, 1)))
    text = render_clopen(c)
    assert text == "01@0 + 11@0"
    assert parse_clopen(text, ODO2) == c
    assert render_clopen(parse_clopen(text, ODO2)) == text


def test_clopen_literals():
    assert render_clopen(empty(FIB)) == "EMPTY"
    assert render_clopen(full(FIB)) == "FULL"
    assert parse_clopen("EMPTY", FIB) == empty(FIB)
    assert parse_clopen("FULL", FIB) == full(FIB)


def test_clopen_subshift_offsets():
    c = cylinder(FIB, ("a", "b", "a"), -1)
    text = render_clopen(c)
    assert parse_clopen(text, FIB) == c


def test_clopen_parse_errors():
    with pytest.raises(ParseError):
        parse_clopen("01", ODO2)
    with pytest.raises(ParseError):
        parse_clopen("01@x", ODO2)
    with pytest.raises(ParseError):
        parse_clopen("02@0", ODO2)
    with pytest.raises(ParseError):
        parse_clopen("01@1", ODO2)
    with pytest.raises(ParseError):
        parse_clopen("ac@0", FIB)


def test_element_round_trip():
    s = embed_symmetric(ODO2, 2, (1, 0), cylinder(ODO2, (0, 0)))
    text = render_element(s, "odo2")
    name, back = parse_element(text, SYSTEMS)
    assert name == "odo2"
    assert equals(back, s)
    assert render_element(back, name) == text


def test_element_identity_renders_full():
    text = render_element(identity(FIB), "fib")
    assert text.splitlines()[1] == "FULL -> 0"
    assert equals(parse_element(text, SYSTEMS)[1], identity(FIB))


def test_element_parse_errors():
    with pytest.raises(ParseError):
        parse_element("00@0 -> 1", SYSTEMS)
    with pytest.raises(ParseError):
        parse_element("system nope\nFULL -> 0", SYSTEMS)
    with pytest.raises(ParseError):
        parse_element("system odo2\nFULL 0", SYSTEMS)
    with pytest.raises(ParseError):
        parse_element("system odo2\nFULL -> x", SYSTEMS)


def test_towers_round_trip():
    for spec in (ODO2, FIB):
        xi = tower_sequence(spec).level(2)
        text = render_towers(xi)
        back = parse_towers(text, spec)
        assert back.towers == xi.towers
        assert render_towers(back) == text


def test_factorization_report_round_trip():
    fac = factorize(shift(ODO2, 1))
    text = render_factorization(fac)
    assert text.splitlines()[0] == "level n=1 n0=1"
    assert "U(0)^1" in text
    n, n0, perms, u_levels, d_levels = parse_factorization(text)
    assert (n, n0) == (fac.level, fac.n0)
    assert perms == fac.permutation.perms
    assert u_levels == fac.rotation.u_levels
    assert d_levels == fac.rotation.d_levels


def test_factorization_report_inverse_shift():
    fac = factorize(invert(shift(FIB, 1)))
    text = render_factorization(fac)
    _, _, _, u_levels, d_levels = parse_factorization(text)
    assert u_levels == ()
    assert d_levels == ((0, -1),)


def test_lef_witness_round_trip():
    g = embed_symmetric(ODO2, 3, (1, 2, 0), disjoint_cylinder_block(ODO2, 3))
    w = lef_map([shift(ODO2, 1), g])
    text = render_lef_witness(w)
    level, entries = parse_lef_witness(text)
    assert level == w.level
    assert len(entries) == len(w.table)
    assert render_lef_witness(w) == text
    images = {h for _, h in entries}
    assert len(images) == len(entries)


def test_lef_witness_parse_errors():
    with pytest.raises(ParseError):
        parse_lef_witness("level=3\nabc -> 0 1")
    with pytest.raises(ParseError):
        parse_lef_witness("lef level=3\nabc 0 1")


def test_system_config_round_trip():
    for spec in (ODO2, FIB, make_system({"kind": "odometer", "bases": [3, 2]})):
        text = render_system_config(spec)
        assert parse_system_config(text) == spec


def test_system_config_parse_errors():
    with pytest.raises(ParseError):
        parse_system_config("kind = banana")
    with pytest.raises(ParseError):
        parse_system_config("kind = odometer")
    with pytest.raises(ParseError):
        parse_system_config("kind = odometer\nbases = a,b")
    with pytest.raises(ParseError):
        parse_system_config("kind = substitution\nalphabet = a,b")
