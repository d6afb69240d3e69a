import json
from fractions import Fraction

import pytest

import fuzzing
from conftest import FIXTURES, random_instance
from nocmap import formats
from nocmap.formats import ParseError, ValidationError
from nocmap.model import Mesh, NocParams


def app_text(**override):
    doc = formats.application_doc(formats.bundled_application("figure1"))
    doc.update(override)
    return formats.dumps(doc)


@pytest.mark.parametrize("seed", range(10))
def test_application_round_trip_is_byte_identical(tmp_path, seed):
    app, mesh, _, _ = random_instance(seed)
    path = tmp_path / "a.json"
    formats.store_application(app, path, (mesh.width, mesh.height))
    first = path.read_bytes()
    back, back_mesh = formats.load_application_with_mesh(path)
    assert (back.cores, back.packets, set(back.deps)) == (app.cores, app.packets, set(app.deps))
    assert back_mesh == (mesh.width, mesh.height)
    formats.store_application(back, path, back_mesh)
    assert path.read_bytes() == first


def test_platform_round_trip(tmp_path):
    params = NocParams(erbit=4.3e-13, elbit=1.7e-13, ps_router=1.16e-3, clock_period=1e-9, tr=2, tl=1,
                       flit_width=16, ecbit=1e-14, name="x")
    path = tmp_path / "p.json"
    formats.store_platform(Mesh(3, 2), params, path)
    assert formats.load_platform(path) == (Mesh(3, 2), params)
    formats.store_platform(None, params, path)
    assert formats.load_platform(path) == (None, params)


def test_mapping_round_trip(tmp_path, mapping_c):
    path = tmp_path / "m.json"
    formats.store_mapping(mapping_c, path, Mesh(2, 2))
    assert formats.load_mapping(path) == mapping_c
    assert path.read_bytes() == formats.dumps(formats.mapping_doc(mapping_c, Mesh(2, 2))).encode()


@pytest.mark.parametrize("text, error", [
    ("", ParseError),
    ("[]", ParseError),
    ("{", ParseError),
    ('{"format": "nocmap.platform", "format_version": 1}', ParseError),
    ('{"format": "nocmap.application", "format_version": 2}', ParseError),
    (app_text(cores="abc"), ParseError),
    (app_text(deps=[[1]]), ParseError),
    (app_text(deps=[["Start", "Middle"]]), ParseError),
    (app_text(name=3), ParseError),
    (app_text(deps=[]), ValidationError),
    (app_text(mesh={"width": 0, "height": 2}), ValidationError),
    (app_text(mesh={"width": 2}), ParseError),
])
def test_application_errors_are_classified(text, error):
    with pytest.raises(error):
        formats.parse_application(text)


def test_validation_error_names_the_packet_line():
    doc = formats.application_doc(formats.bundled_application("figure1"))
    doc["packets"][1]["dst"] = doc["packets"][1]["src"]
    text = formats.dumps(doc)
    with pytest.raises(ValidationError) as err:
        formats.parse_application(text, "app.json")
    pid = doc["packets"][1]["id"]
    lines = text.splitlines()
    # packets are written as 7-line objects right after the "packets" key
    line = lines.index('  "packets": [') + 1 + 7 + 1
    assert lines[line - 1].strip() == "{" and f'"id": {pid},' in lines[line + 3]
    assert f"app.json:{line}: packet {pid}: source equals destination" in str(err.value)


def test_empty_application_only_when_allowed():
    doc = formats.application_doc(formats.bundled_application("figure1"))
    doc["packets"], doc["deps"] = [], []
    text = formats.dumps(doc)
    app, _ = formats.parse_application_with_mesh(text, allow_empty=True)
    assert app.packets == ()
    with pytest.raises(ValidationError):
        formats.parse_application(text)


@pytest.mark.parametrize("key, value", [("tr_cycles", 0), ("tl_cycles", -1), ("flit_width_bits", 0),
                                        ("erbit_j_per_bit", -1e-12), ("clock_period_s", 0),
                                        ("ps_router_w", 10**400)])
def test_platform_values_validated(key, value):
    doc = json.loads((FIXTURES.parent.parent / "src/nocmap/data/t007.json").read_text())
    doc["params"][key] = value
    with pytest.raises(ValidationError):
        formats.parse_platform(json.dumps(doc))


@pytest.mark.parametrize("key, value", [("tr_cycles", 1.5), ("erbit_j_per_bit", "1e-12"), ("tl_cycles", True)])
def test_platform_types_checked(key, value):
    doc = json.loads(formats.dumps(formats.platform_doc(None, formats.resolve_platform("t007")[1])))
    doc["params"][key] = value
    with pytest.raises(ParseError):
        formats.parse_platform(json.dumps(doc))


@pytest.mark.parametrize("assignment, mesh, error", [
    ([{"core": 1, "tile": 1}, {"core": 1, "tile": 2}], None, ValidationError),
    ([{"core": 1, "tile": 1}, {"core": 2, "tile": 1}], None, ValidationError),
    ([{"core": 1, "tile": 0}], None, ValidationError),
    ([{"core": 1, "tile": 5}], {"width": 2, "height": 2}, ValidationError),
    ([{"core": 1}], None, ParseError),
    ([{"core": "a", "tile": 1}], None, ParseError),
])
def test_mapping_errors(assignment, mesh, error):
    doc = {"format": "nocmap.mapping", "format_version": 1, "assignment": assignment}
    if mesh:
        doc["mesh"] = mesh
    with pytest.raises(error):
        formats.parse_mapping(json.dumps(doc))


def test_unreadable_files_are_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        formats.load_application(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_bytes(b"\xff\xfe{}")
    with pytest.raises(ParseError):
        formats.load_mapping(bad)


def test_platform_lookup_order(tmp_path, monkeypatch):
    assert formats.resolve_platform("t007")[1].name == "t007"
    assert {"t007", "t035", "figure1"} <= set(formats.preset_platform_names())
    custom = NocParams(erbit=1e-12, elbit=1e-12, ps_router=0.0, clock_period=1e-9, tr=1, tl=1, flit_width=1,
                       name="mine")
    formats.store_platform(None, custom, tmp_path / "t007.json")
    monkeypatch.setenv(formats.PLATFORM_DIR_ENV, str(tmp_path))
    assert formats.resolve_platform("t007")[1] == custom
    assert formats.resolve_platform(str(tmp_path / "t007.json"))[1] == custom
    with pytest.raises(ParseError):
        formats.resolve_platform("no-such-profile")


def test_energy_and_ratio_values():
    assert formats.energy_value(Fraction(390, 10**12)) == 390_000_000
    assert formats.energy_value(Fraction(1, 3 * 10**18)) == "0.3333333333333333333333333333333333333333"
    assert formats.ratio_value(Fraction(-2, 4)) == "-1/2"


def test_reports_append_one_line_each(tmp_path):
    path = tmp_path / "r.jsonl"
    formats.store_report({"b": 1, "a": "τ"}, path)
    formats.store_report({"c": [1, 2]}, path)
    assert path.read_text(encoding="utf-8") == '{"a":"τ","b":1}\n{"c":[1,2]}\n'
    assert formats.load_reports(path) == [{"a": "τ", "b": 1}, {"c": [1, 2]}]
    path.write_text('{"a":1}\n{oops\n')
    with pytest.raises(ParseError, match=":2:"):
        formats.load_reports(path)


def test_fuzz_smoke():
    counts = fuzzing.run(4000, seed=11)
    for kind, c in counts.items():
        assert sum(c.values()) == 1000
        assert c[fuzzing.PARSE] > 0, kind
