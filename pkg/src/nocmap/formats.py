"""Versioned JSON documents for applications, platforms, mappings and reports.

Canonical output is byte-stable: sorted keys, sorted lists, two-space
indentation and a trailing newline.  Loaders raise :class:`ParseError` for
anything that is not a well-formed document of the expected shape and
:class:`ValidationError` when the content breaks a model invariant.
"""

from __future__ import annotations

import json
import os
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .model import END, START, Cdcg, Core, Mapping, Mesh, ModelError, NocParams, Packet, validate_cdcg

FORMAT_VERSION = 1
PLATFORM_DIR_ENV = "NOCMAP_PLATFORM_DIR"

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    pass


class ParseError(FormatError):
    pass


class ValidationError(FormatError):
    pass


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write(path: PathLike, doc: Dict[str, Any]) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def _read_text(path: PathLike) -> str:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 (byte {exc.start})") from None


def _parse(text: str, kind: str, where: str = "<input>") -> Dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except RecursionError:
        raise ParseError(f"{where}: nesting too deep") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{where}:1: expected a JSON object")
    if doc.get("format") != f"nocmap.{kind}":
        raise ParseError(f"{where}: not a nocmap {kind} document (format={doc.get('format')!r})")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"{where}: unsupported format_version {version!r}")
    return doc


def _item_lines(text: str, key: str) -> List[int]:
    """Line numbers of the elements of the top-level array ``key`` (best effort)."""
    m = re.search(r'"%s"\s*:\s*\[' % re.escape(key), text)
    if not m:
        return []
    dec = json.JSONDecoder()
    pos, lines = m.end(), []
    try:
        while True:
            while pos < len(text) and text[pos] in " \t\r\n,":
                pos += 1
            if pos >= len(text) or text[pos] == "]":
                return lines
            lines.append(text.count("\n", 0, pos) + 1)
            _, pos = dec.raw_decode(text, pos)
    except (ValueError, RecursionError):
        return lines


def _field(obj: Any, name: str, typ, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if name not in obj:
        raise ParseError(f"{where}: missing field {name!r}")
    value = obj[name]
    ok = isinstance(value, typ) and not (typ in (int, (int, float)) and isinstance(value, bool))
    if not ok:
        raise ParseError(f"{where}.{name}: wrong type {type(value).__name__}")
    return value


def _list(doc: Dict[str, Any], name: str, where: str) -> list:
    return _field(doc, name, list, where)


# -- applications -----------------------------------------------------------

def application_doc(cdcg: Cdcg, mesh: Optional[Tuple[int, int]] = None) -> Dict[str, Any]:
    def vkey(v):
        return (0, v) if isinstance(v, int) else ((-1, 0) if v == START else (1, 0))

    doc = {
        "format": "nocmap.application",
        "format_version": FORMAT_VERSION,
        "name": cdcg.name,
        "cores": [{"id": c.id, "name": c.name} for c in sorted(cdcg.cores, key=lambda c: c.id)],
        "packets": [{"id": p.id, "src": p.src, "dst": p.dst, "comp_time": p.comp_time, "bits": p.bits}
                    for p in sorted(cdcg.packets, key=lambda p: p.id)],
        "deps": [[a, b] for a, b in sorted(cdcg.deps, key=lambda e: (vkey(e[0]), vkey(e[1])))],
    }
    if mesh is not None:
        doc["mesh"] = {"width": mesh[0], "height": mesh[1]}
    return doc


def store_application(cdcg: Cdcg, path: PathLike, mesh: Optional[Tuple[int, int]] = None) -> None:
    _write(path, application_doc(cdcg, mesh))


def parse_application(text: str, where: str = "<input>") -> Cdcg:
    cdcg, _ = parse_application_with_mesh(text, where)
    return cdcg


def parse_application_with_mesh(text: str, where: str = "<input>",
                                allow_empty: bool = False) -> Tuple[Cdcg, Optional[Tuple[int, int]]]:
    """Application plus its optional mesh; ``allow_empty`` accepts a document without packets."""
    doc = _parse(text, "application", where)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{where}.name: wrong type")
    cores = []
    for i, c in enumerate(_list(doc, "cores", where)):
        w = f"{where}: cores[{i}]"
        label = c.get("name", "") if isinstance(c, dict) else ""
        if not isinstance(label, str):
            raise ParseError(f"{w}.name: wrong type")
        cores.append(Core(_field(c, "id", int, w), label))
    packets = []
    for i, p in enumerate(_list(doc, "packets", where)):
        w = f"{where}: packets[{i}]"
        packets.append(Packet(*(_field(p, k, int, w) for k in ("id", "src", "dst", "comp_time", "bits"))))
    deps = []
    for i, e in enumerate(_list(doc, "deps", where)):
        if not (isinstance(e, list) and len(e) == 2):
            raise ParseError(f"{where}: deps[{i}]: expected a [from, to] pair")
        for v in e:
            if not ((isinstance(v, int) and not isinstance(v, bool)) or v in (START, END)):
                raise ParseError(f"{where}: deps[{i}]: bad vertex {v!r}")
        deps.append((e[0], e[1]))
    mesh = None
    if "mesh" in doc:
        mesh = (_field(doc["mesh"], "width", int, f"{where}.mesh"),
                _field(doc["mesh"], "height", int, f"{where}.mesh"))
        if min(mesh) < 1:
            raise ValidationError(f"{where}.mesh: dimensions must be positive")
    cdcg = Cdcg(tuple(cores), tuple(packets), tuple(deps), name)
    problems = validate_cdcg(cdcg)
    if allow_empty and not packets:
        problems = [p for p in problems if not p.startswith("End unreachable")]
    if problems:
        lines = dict(enumerate(_item_lines(text, "packets")))
        by_id = {p.id: i for i, p in enumerate(packets)}
        msgs = []
        for prob in problems:
            m = re.match(r"packet (-?\d+)", prob)
            line = lines.get(by_id.get(int(m.group(1)), -1)) if m else None
            msgs.append(f"{where}:{line}: {prob}" if line else f"{where}: {prob}")
        raise ValidationError("\n".join(msgs))
    return cdcg, mesh


def load_application(path: PathLike) -> Cdcg:
    return parse_application(_read_text(path), str(path))


def load_application_with_mesh(path: PathLike, allow_empty: bool = False):
    return parse_application_with_mesh(_read_text(path), str(path), allow_empty)


# -- platforms ---------------------------------------------------------------

_PARAM_FIELDS = [
    ("erbit", "erbit_j_per_bit", (int, float)),
    ("elbit", "elbit_j_per_bit", (int, float)),
    ("ecbit", "ecbit_j_per_bit", (int, float)),
    ("ps_router", "ps_router_w", (int, float)),
    ("clock_period", "clock_period_s", (int, float)),
    ("tr", "tr_cycles", int),
    ("tl", "tl_cycles", int),
    ("flit_width", "flit_width_bits", int),
]


def platform_doc(mesh: Optional[Mesh], params: NocParams) -> Dict[str, Any]:
    doc = {
        "format": "nocmap.platform",
        "format_version": FORMAT_VERSION,
        "name": params.name,
        "params": {key: getattr(params, attr) for attr, key, _ in _PARAM_FIELDS},
    }
    if mesh is not None:
        doc["mesh"] = {"width": mesh.width, "height": mesh.height}
    return doc


def store_platform(mesh: Optional[Mesh], params: NocParams, path: PathLike) -> None:
    _write(path, platform_doc(mesh, params))


def parse_platform(text: str, where: str = "<input>") -> Tuple[Optional[Mesh], NocParams]:
    doc = _parse(text, "platform", where)
    raw = _field(doc, "params", dict, where)
    values = {attr: _field(raw, key, typ, f"{where}.params") for attr, key, typ in _PARAM_FIELDS}
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{where}.name: wrong type")
    try:
        params = NocParams(name=name, **values)
        mesh = None
        if "mesh" in doc:
            mesh = Mesh(_field(doc["mesh"], "width", int, f"{where}.mesh"),
                        _field(doc["mesh"], "height", int, f"{where}.mesh"))
    except ModelError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    return mesh, params


def load_platform(path: PathLike) -> Tuple[Optional[Mesh], NocParams]:
    return parse_platform(_read_text(path), str(path))


def preset_platform_names() -> List[str]:
    return sorted(p.name[:-5] for p in resources.files("nocmap.data").iterdir()
                  if p.name.endswith(".json") and not p.name.startswith("app_"))


def resolve_platform(name: str) -> Tuple[Optional[Mesh], NocParams]:
    """A platform file path, or a profile name looked up in ``$NOCMAP_PLATFORM_DIR`` then the bundled presets."""
    if os.path.exists(name):
        return load_platform(name)
    env = os.environ.get(PLATFORM_DIR_ENV)
    if env:
        candidate = Path(env) / f"{name}.json"
        if candidate.exists():
            return load_platform(candidate)
    bundled = resources.files("nocmap.data") / f"{name}.json"
    if bundled.is_file():
        return parse_platform(bundled.read_text(encoding="utf-8"), name)
    raise ParseError(f"no platform file or preset named {name!r}")


def bundled_application(name: str) -> Cdcg:
    res = resources.files("nocmap.data") / f"app_{name}.json"
    return parse_application(res.read_text(encoding="utf-8"), name)


# -- mappings ----------------------------------------------------------------

def mapping_doc(mapping: Mapping, mesh: Optional[Mesh] = None) -> Dict[str, Any]:
    doc = {
        "format": "nocmap.mapping",
        "format_version": FORMAT_VERSION,
        "assignment": [{"core": c, "tile": t} for c, t in mapping.assignment],
    }
    if mesh is not None:
        doc["mesh"] = {"width": mesh.width, "height": mesh.height}
    return doc


def store_mapping(mapping: Mapping, path: PathLike, mesh: Optional[Mesh] = None) -> None:
    _write(path, mapping_doc(mapping, mesh))


def parse_mapping(text: str, where: str = "<input>") -> Mapping:
    doc = _parse(text, "mapping", where)
    pairs = []
    for i, item in enumerate(_list(doc, "assignment", where)):
        w = f"{where}: assignment[{i}]"
        pairs.append((_field(item, "core", int, w), _field(item, "tile", int, w)))
    cores = [c for c, _ in pairs]
    tiles = [t for _, t in pairs]
    if len(set(cores)) != len(cores):
        raise ValidationError(f"{where}: a core is assigned twice")
    if len(set(tiles)) != len(tiles):
        raise ValidationError(f"{where}: duplicate tile assignment")
    if any(t < 1 for t in tiles):
        raise ValidationError(f"{where}: tile indices start at 1")
    if "mesh" in doc:
        try:
            mesh = Mesh(_field(doc["mesh"], "width", int, f"{where}.mesh"),
                        _field(doc["mesh"], "height", int, f"{where}.mesh"))
        except ModelError as exc:
            raise ValidationError(f"{where}: {exc}") from None
        bad = [t for t in tiles if t > mesh.n]
        if bad:
            raise ValidationError(f"{where}: tiles {bad} outside a {mesh} mesh")
    return Mapping.from_dict(dict(pairs))


def load_mapping(path: PathLike) -> Mapping:
    return parse_mapping(_read_text(path), str(path))


# -- reports -----------------------------------------------------------------

def energy_value(joules: Fraction) -> Union[int, str]:
    """Attojoules: an integer when exact, else a decimal string."""
    aj = Fraction(joules) * 10**18
    if aj.denominator == 1:
        return aj.numerator
    with localcontext() as ctx:
        ctx.prec = 40
        return str(Decimal(aj.numerator) / Decimal(aj.denominator))


def ratio_value(x: Fraction) -> str:
    """Exact rational as ``"p/q"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def store_report(report: Dict[str, Any], path: PathLike) -> None:
    """Append one report as a single JSON line."""
    line = json.dumps(report, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    with open(path, "a", encoding="utf-8") as f:
        f.write(line + "\n")


def load_reports(path: PathLike) -> List[Dict[str, Any]]:
    out = []
    for i, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{i}: {exc.msg}") from None
    return out
