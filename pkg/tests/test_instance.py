import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorsos.instance import InstanceError, RotorInstance, dump_instance, load_instance, parse_instance


def test_parse_basic():
    inst = parse_instance('{"k": 3, "a": 1, "b": 0.5, "edges": [[0, 1], [1, 2, 2.5]]}')
    assert inst.k == 3 and inst.n == 3 and inst.c_pot == 2.0
    assert inst.edges == ((0, 1, 1.0), (1, 2, 2.5))
    assert inst.total_weight == pytest.approx(3.5)


def test_explicit_n_allows_isolated_vertices():
    inst = parse_instance('{"k": 2, "a": 1, "b": 1, "n": 4, "edges": [[0, 1, 1]]}')
    assert inst.n == 4


def test_single_vertex_without_edges():
    assert parse_instance('{"k": 2, "a": 1, "b": 1, "edges": []}').n == 1


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ('{"k": 2,\n "a": 1,\n "b": 1,\n "edges": [[0, 0, 1]]}', 4, "self-loop"),
        ('{"k": 2,\n "a": 1,\n "b": 1,\n "edges": [\n  [0, 1],\n  [1, "x"]\n ]}', 6, "integers"),
        ('{"k": 1,\n "a": 1,\n "b": 1,\n "edges": []}', 1, "k must"),
        ('{"k": 2,\n "a": -1,\n "b": 1,\n "edges": []}', 2, "nonnegative"),
        ('{"k": 2,\n "a": 1,\n "b": 1,\n "colour": 3,\n "edges": []}', 4, "unknown field"),
        ('{"k": 2,\n "a": 1,\n "b": 1\n "edges": []}', 4, "malformed"),
        ('{"k": 2,\n "a": 1,\n "edges": []}', 1, "missing"),
        ('{"k": 2,\n "a": 1,\n "b": 1,\n "n": 2,\n "edges": [\n  [0, 5]\n ]}', 6, "n=2"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(InstanceError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_validation_in_constructor():
    with pytest.raises(InstanceError):
        RotorInstance(2, 1.0, 1.0, edges=((0, 0, 1.0),))
    with pytest.raises(InstanceError):
        RotorInstance(2, float("nan"), 1.0)
    with pytest.raises(InstanceError):
        RotorInstance(2, 1.0, 1.0, edges=((0, 3, 1.0),), n=2)


def test_negative_weights_flag():
    assert RotorInstance(2, 1.0, 1.0, edges=((0, 1, -1.0),)).has_negative_weights
    assert not RotorInstance(2, 1.0, 1.0, edges=((0, 1, 1.0),)).has_negative_weights


def test_relabel_and_with_k():
    inst = RotorInstance(2, 1.0, 1.0, edges=((0, 1, 1.0), (1, 2, 2.0)))
    r = inst.relabel([2, 0, 1])
    assert r.edges == ((2, 0, 1.0), (0, 1, 2.0))
    assert inst.with_k(5).k == 5
    with pytest.raises(InstanceError):
        inst.relabel([0, 0, 1])


@settings(max_examples=30, deadline=None)
@given(
    st.integers(2, 6),
    st.floats(0, 10),
    st.floats(0, 10),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.floats(-3, 3)), max_size=6),
)
def test_dump_parse_roundtrip(k, a, b, raw):
    edges = [(u, v, w) for u, v, w in raw if u != v]
    inst = RotorInstance(k, a, b, edges=edges, n=5)
    assert parse_instance(dump_instance(inst)) == inst
    assert parse_instance(json.dumps(inst.to_dict())) == inst


def test_load_instance(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text('{"k": 2, "a": 1, "b": 1, "c_pot": 1.5, "edges": [[0, 1, 1]]}')
    inst = load_instance(str(path))
    assert inst.c_pot == 1.5
