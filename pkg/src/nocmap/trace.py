"""Timing diagrams of a simulation: text lanes, SVG Gantt chart, CSV rows."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Dict, List, Tuple

from .energy import Resource, resource_label
from .formats import ParseError, ValidationError
from .model import Cdcg, NocParams
from .sim import Interval, SimReport

FORMATS = ("text", "svg", "csv")
CSV_FIELDS = ["resource", "start", "end", "packet", "bits", "src", "dst", "contended"]


def empty_report(params: NocParams) -> SimReport:
    """Report of an application without packets: nothing runs, nothing is busy."""
    return SimReport(texec=0, deliveries={}, injections={}, ready={}, timelines={}, waits=[],
                     edy_noc=Fraction(0), est_noc=Fraction(0), clock_period=params.exact("clock_period"))


def _resource_key(res: Resource) -> Tuple:
    order = {"R": 0, "L": 1, "Cin": 2, "Cout": 2}
    return (order[res[0]], res[1:], res[0])


def interval_label(iv: Interval, cdcg: Cdcg) -> str:
    """``bits(src→dst):[first,last]`` with inclusive cycle bounds; ``*`` flags contention."""
    p = cdcg.packet(iv.packet)
    src, dst = cdcg.core(p.src).label, cdcg.core(p.dst).label
    star = "*" if iv.contended else ""
    return f"{iv.bits}({src}→{dst}):[{iv.start},{iv.end - 1}]{star}"


def core_lanes(report: SimReport, cdcg: Cdcg) -> Dict[str, List[Tuple[int, int, str]]]:
    """Computation window of every packet on its source core, and its delivery on the target."""
    lanes: Dict[str, List[Tuple[int, int, str]]] = {c.label: [] for c in sorted(cdcg.cores, key=lambda c: c.id)}
    for p in sorted(cdcg.packets, key=lambda p: p.id):
        src, dst = cdcg.core(p.src).label, cdcg.core(p.dst).label
        start = report.ready[p.id]
        lanes[src].append((start, report.injections[p.id], f"comp→{dst}"))
        lanes[dst].append((report.deliveries[p.id], report.deliveries[p.id], f"recv {p.bits}({src}→{dst})"))
    for lane in lanes.values():
        lane.sort()
    return lanes


def render_text(report: SimReport, cdcg: Cdcg) -> str:
    lines = [f"# texec={report.texec} cycles  contention={report.contention} cycles"]
    for core, items in core_lanes(report, cdcg).items():
        parts = [f"{label}:[{a},{b - 1}]" if b > a else f"{label}@{a}" for a, b, label in items]
        lines.append(f"core {core}: " + " ".join(parts))
    for res in sorted(report.timelines, key=_resource_key):
        parts = [interval_label(iv, cdcg) for iv in report.timelines[res]]
        lines.append(f"{resource_label(res)}: " + " ".join(parts))
    return "\n".join(lines) + "\n"


def render_csv(report: SimReport, cdcg: Cdcg) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for res in sorted(report.timelines, key=_resource_key):
        for iv in report.timelines[res]:
            p = cdcg.packet(iv.packet)
            w.writerow([":".join(map(str, res)), iv.start, iv.end, iv.packet, iv.bits,
                        cdcg.core(p.src).label, cdcg.core(p.dst).label, int(iv.contended)])
    return buf.getvalue()


_ARITY = {"R": 1, "L": 2, "Cin": 1, "Cout": 1}


def load_csv(text: str) -> Dict[Resource, List[Interval]]:
    """Timelines back from :func:`render_csv` output; raises ``ParseError``/``ValidationError``."""
    reader = csv.reader(io.StringIO(text))
    try:
        head = next(reader, None)
        if head != CSV_FIELDS:
            raise ParseError(f"line 1: expected header {','.join(CSV_FIELDS)}")
        lanes: Dict[Resource, List[Interval]] = {}
        for row in reader:
            line = reader.line_num
            if len(row) != len(CSV_FIELDS):
                raise ParseError(f"line {line}: expected {len(CSV_FIELDS)} fields, got {len(row)}")
            kind, *rest = row[0].split(":")
            if kind not in _ARITY or len(rest) != _ARITY[kind]:
                raise ParseError(f"line {line}: bad resource {row[0]!r}")
            try:
                res = (kind, *map(_natural, rest))
                start, end, packet, bits = map(_natural, row[1:5])
            except ValueError:
                raise ParseError(f"line {line}: expected non-negative integers") from None
            if row[7] not in ("0", "1"):
                raise ParseError(f"line {line}: contended must be 0 or 1")
            if end <= start:
                raise ValidationError(f"line {line}: empty interval [{start},{end})")
            lanes.setdefault(res, []).append(Interval(start, end, packet, bits, row[7] == "1"))
    except csv.Error as exc:
        raise ParseError(f"line {reader.line_num}: {exc}") from None
    for res, ivs in lanes.items():
        ivs.sort(key=lambda iv: (iv.start, iv.packet))
        for a, b in zip(ivs, ivs[1:]):
            if b.start < a.end:
                raise ValidationError(f"{resource_label(res)}: packets {a.packet} and {b.packet} overlap")
    return lanes


def _natural(s: str) -> int:
    if not s.isascii() or not s.isdigit():
        raise ValueError(s)
    return int(s)


def render_svg(report: SimReport, cdcg: Cdcg, scale: float = 6.0) -> str:
    cores = core_lanes(report, cdcg)
    resources = sorted(report.timelines, key=_resource_key)
    rows = [(f"core {c}", [(a, b, lbl, False) for a, b, lbl in items]) for c, items in cores.items()]
    rows += [(resource_label(r), [(iv.start, iv.end, interval_label(iv, cdcg), iv.contended)
                                  for iv in report.timelines[r]]) for r in resources]
    lane_h, left = 26, 110
    width = left + int(max(report.texec, 1) * scale) + 40
    height = lane_h * (len(rows) + 1) + 20
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="monospace" font-size="9">',
           f'<text x="4" y="14">texec = {report.texec} cycles</text>']
    for k, (name, items) in enumerate(rows):
        y = 24 + k * lane_h
        out.append(f'<text x="4" y="{y + 15}">{_esc(name)}</text>')
        out.append(f'<line x1="{left}" y1="{y + lane_h - 2}" x2="{width - 20}" y2="{y + lane_h - 2}" stroke="#ddd"/>')
        for a, b, label, hot in items:
            x = left + a * scale
            w = max((b - a) * scale, 1.5)
            fill = "#e4572e" if hot else "#4c8bf5"
            out.append(f'<rect x="{x:.1f}" y="{y + 4}" width="{w:.1f}" height="{lane_h - 10}" '
                       f'fill="{fill}" opacity="0.7"><title>{_esc(label)}</title></rect>')
            out.append(f'<text x="{x + 2:.1f}" y="{y + 14}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render(report: SimReport, cdcg: Cdcg, fmt: str) -> str:
    if fmt == "text":
        return render_text(report, cdcg)
    if fmt == "csv":
        return render_csv(report, cdcg)
    if fmt == "svg":
        return render_svg(report, cdcg)
    raise ValueError(f"unknown trace format {fmt!r}; choose from {', '.join(FORMATS)}")
