import xml.etree.ElementTree as ET
from dataclasses import replace

import pytest

from conftest import random_instance
from nocmap import trace
from nocmap.formats import ParseError, ValidationError
from nocmap.sim import simulate


@pytest.fixture(scope="module")
def fig1_report(fig1_app, fig1_platform, mapping_c):
    mesh, params = fig1_platform
    return simulate(fig1_app, mapping_c, mesh, params)


def test_router_lane_of_the_e_to_a_chain(fig1_report, fig1_app):
    text = trace.render_text(fig1_report, fig1_app)
    lane = next(line for line in text.splitlines() if line.startswith("τ4: "))
    assert "20(E→A):[11,32]" in lane
    assert "15(E→A):[57,73]" in lane


def test_text_header(fig1_report, fig1_app):
    first = trace.render_text(fig1_report, fig1_app).splitlines()[0]
    assert first == f"# texec={fig1_report.texec} cycles  contention={fig1_report.contention} cycles"


def test_contended_intervals_are_starred(fig1_report, fig1_app):
    starred = [iv for ivs in fig1_report.timelines.values() for iv in ivs if iv.contended]
    assert starred
    assert all(trace.interval_label(iv, fig1_app).endswith("*") for iv in starred)


@pytest.mark.parametrize("seed", range(8))
def test_csv_round_trip_is_exact(seed):
    app, mesh, params, mapping = random_instance(seed)
    report = simulate(app, mapping, mesh, params)
    back = trace.load_csv(trace.render_csv(report, app))
    assert back == {r: list(ivs) for r, ivs in report.timelines.items() if ivs}


def test_svg_is_well_formed(fig1_report, fig1_app):
    root = ET.fromstring(trace.render_svg(fig1_report, fig1_app))
    assert root.tag.endswith("svg")
    titles = [t.text for t in root.iter("{http://www.w3.org/2000/svg}title")]
    assert "20(E→A):[11,32]" in titles


def test_empty_application_renders_everywhere(fig1_platform, fig1_app):
    _, params = fig1_platform
    report = trace.empty_report(params)
    fig1_app = replace(fig1_app, packets=(), deps=())
    assert trace.render(report, fig1_app, "text").startswith("# texec=0 cycles")
    ET.fromstring(trace.render(report, fig1_app, "svg"))
    assert trace.render(report, fig1_app, "csv") == ",".join(trace.CSV_FIELDS) + "\n"
    with pytest.raises(ValueError):
        trace.render(report, fig1_app, "png")


@pytest.mark.parametrize("text, error", [
    ("", ParseError),
    ("a,b\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nR:1,3,5,1,8,a,b\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nX:1,3,5,1,8,a,b,0\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nL:1,3,5,1,8,a,b,0\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nR:1,3,x,1,8,a,b,0\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nR:1,3,5,1,8,a,b,2\n", ParseError),
    (",".join(trace.CSV_FIELDS) + "\nR:1,5,5,1,8,a,b,0\n", ValidationError),
    (",".join(trace.CSV_FIELDS) + "\nR:1,3,6,1,8,a,b,0\nR:1,5,9,2,8,a,b,0\n", ValidationError),
])
def test_bad_csv_is_classified(text, error):
    with pytest.raises(error):
        trace.load_csv(text)
