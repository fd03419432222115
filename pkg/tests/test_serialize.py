import json

import pytest
from hypothesis import given, settings, strategies as st

from cocat import corpus
from cocat import serialize as ser
from cocat.abelian import AbelianGroup
from cocat.errors import InputError, NonAssociative, SchemaViolation
from cocat.extension import aut_two_groupoid
from cocat.groupoid import delooping, indiscrete, make_map
from cocat.groups import cyclic, quaternion, symmetric
from cocat.site import circle_site, constant_presheaf, point_site
from cocat.torsor import constant_group_sheaf, regular_action


@pytest.mark.parametrize("g", [cyclic(1), cyclic(5), symmetric(3), quaternion()],
                         ids=lambda g: g.name)
def test_group_round_trip(g):
    h = ser.group_from_json(ser.group_to_json(g))
    assert h == g


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_groupoid_round_trip(seed):
    g, _ = corpus.random_groupoid(corpus.make_rng(seed))
    data = ser.groupoid_to_json(g)
    assert ser.groupoid_to_json(ser.groupoid_from_json(data)) == data


def test_groupoid_map_round_trip():
    x, y = indiscrete(2), delooping(cyclic(2))
    f = make_map(x, y, [0, 0], [0, 1, 1, 0])
    data = ser.groupoid_map_to_json(f)
    assert ser.groupoid_map_to_json(ser.groupoid_map_from_json(data)) == data


def test_two_groupoid_round_trip():
    t = aut_two_groupoid(cyclic(3)).two_groupoid
    data = ser.two_groupoid_to_json(t)
    assert ser.two_groupoid_to_json(ser.two_groupoid_from_json(data)) == data


@pytest.mark.parametrize("site", [point_site(), circle_site()], ids=["point", "circle"])
def test_site_round_trip(site):
    data = ser.site_to_json(site)
    again = ser.site_from_json(data)
    assert ser.site_to_json(again) == data
    assert again.objects == site.objects and len(again.arrows) == len(site.arrows)


@pytest.mark.parametrize("kind,value", [("group", cyclic(2)), ("groupoid", indiscrete(2))])
def test_presheaf_round_trip(kind, value):
    s = circle_site()
    p = constant_presheaf(s, kind, value)
    data = ser.presheaf_to_json(p)
    assert ser.presheaf_to_json(ser.presheaf_from_json(s, data)) == data


def test_set_presheaf_round_trip():
    s = circle_site()
    p = regular_action(constant_group_sheaf(s, cyclic(2))).space
    assert p.kind == "set"
    data = ser.presheaf_to_json(p)
    assert ser.presheaf_to_json(ser.presheaf_from_json(s, data)) == data


def test_dumps_is_canonical():
    a = ser.dumps({"b": 1, "a": [1, 2]})
    b = ser.dumps(json.loads(a))
    assert a == b and a.endswith("\n") and a.index('"a"') < a.index('"b"')


def test_wrong_table_entry_type_reports_its_path():
    with pytest.raises(SchemaViolation) as err:
        ser.group_from_json({"elements": ["e"], "table": [["x"]]})
    assert err.value.witness == "/table/0/0"


def test_unknown_key_is_a_schema_violation():
    with pytest.raises(SchemaViolation):
        ser.group_from_json({"elements": ["e"], "table": [[0]], "extra": 1})


def test_bad_table_is_algebraic_not_schema():
    with pytest.raises(NonAssociative):
        ser.group_from_json({"elements": ["e", "a", "b"],
                             "table": [[0, 1, 2], [1, 0, 0], [2, 0, 0]]})


def test_map_misnaming_a_cell():
    data = ser.groupoid_map_to_json(make_map(indiscrete(2), delooping(cyclic(2)),
                                             [0, 0], [0, 1, 1, 0]))
    data["objects"] = {"nope": "*"}
    with pytest.raises(InputError):
        ser.groupoid_map_from_json(data)


def test_missing_presheaf_value():
    s = point_site()
    with pytest.raises(SchemaViolation) as err:
        ser.presheaf_from_json(s, {"kind": "set", "values": {}, "restrictions": {}})
    assert err.value.witness.startswith("/values/")


def test_coefficients_both_forms():
    assert ser.coefficients_from_json({"abelian": [0, 1, 2]}) == AbelianGroup((0, 2))
    assert ser.coefficients_from_json(ser.group_to_json(cyclic(3))) == cyclic(3)
    with pytest.raises(SchemaViolation):
        ser.coefficients_from_json({"abelian": [-1]})


def test_load_reports_bad_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{ nope")
    with pytest.raises(SchemaViolation):
        ser.load(p)
    with pytest.raises(InputError):
        ser.load(tmp_path / "missing.json")
