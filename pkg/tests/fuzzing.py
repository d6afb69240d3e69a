"""Malformed-input generator shared by the format tests and the acceptance run."""

import copy
import json
import random

from nocmap import formats, trace
from nocmap.benchgen import BenchConfig, generate
from nocmap.model import Mesh, Mapping, NocParams
from nocmap.sim import simulate

OK, PARSE, VALIDATION = "ok", "parse-error", "validation-error"

LOADERS = {
    "application": lambda text: formats.parse_application_with_mesh(text, "<fuzz>"),
    "platform": lambda text: formats.parse_platform(text, "<fuzz>"),
    "mapping": lambda text: formats.parse_mapping(text, "<fuzz>"),
    "trace-csv": trace.load_csv,
}

ODD_VALUES = [None, True, False, 0, -1, 1, 2, 7, 2**63, -(2**70), 10**400, 0.5, -0.0, 1e308, float("nan"),
              float("inf"), "", "x", "Start", "End", "é", [], [1], [1, 2], ["Start", 1], {}, {"id": 1}]


def seed_documents():
    """Valid documents of every kind, as text."""
    app = generate(BenchConfig(n_cores=4, n_packets=7, seed=3, name="fuzz", volume_range=(1, 40)))
    mesh = Mesh(2, 2)
    params = NocParams(erbit=1e-12, elbit=5e-13, ps_router=1e-3, clock_period=1e-9, tr=2, tl=1, flit_width=8,
                       name="p")
    mapping = Mapping.from_vector([0, 1, 2, 3], [4, 2, 1, 3])
    report = simulate(app, mapping, mesh, params)
    return {
        "application": [formats.dumps(formats.application_doc(app, (2, 2))),
                        formats.dumps(formats.application_doc(formats.bundled_application("figure1")))],
        "platform": [formats.dumps(formats.platform_doc(mesh, params)),
                     formats.dumps(formats.platform_doc(None, params))],
        "mapping": [formats.dumps(formats.mapping_doc(mapping, mesh)), formats.dumps(formats.mapping_doc(mapping))],
        "trace-csv": [trace.render_csv(report, app)],
    }


def classify(kind: str, text) -> str:
    """Outcome of one load; any exception other than the two format errors propagates."""
    try:
        LOADERS[kind](text)
    except formats.ValidationError:
        return VALIDATION
    except formats.ParseError:
        return PARSE
    return OK


def _nodes(doc, path=()):
    yield path, doc
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _nodes(v, path + (k,))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from _nodes(v, path + (i,))


def _set(doc, path, value):
    if not path:
        return value
    node = doc
    for k in path[:-1]:
        node = node[k]
    node[path[-1]] = value
    return doc


def _structural(rng: random.Random, text: str) -> str:
    doc = json.loads(text)
    for _ in range(rng.randint(1, 3)):
        nodes = list(_nodes(doc))
        path, node = rng.choice(nodes)
        op = rng.random()
        if op < 0.5:
            doc = _set(doc, path, copy.deepcopy(rng.choice(ODD_VALUES)))
        elif op < 0.65 and isinstance(node, dict) and node:
            del node[rng.choice(list(node))]
        elif op < 0.8 and isinstance(node, list) and node:
            if rng.random() < 0.5:
                node.append(json.loads(json.dumps(rng.choice(node))))
            else:
                node.pop(rng.randrange(len(node)))
        elif isinstance(node, int) and not isinstance(node, bool):
            doc = _set(doc, path, node + rng.choice([-2, -1, 1, 2, 1000]))
        elif isinstance(node, dict):
            node[rng.choice(["extra", "id", "format", "mesh", "name"])] = copy.deepcopy(rng.choice(ODD_VALUES))
    return json.dumps(doc, allow_nan=True)


def _textual(rng: random.Random, text: str):
    data = bytearray(text.encode("utf-8"))
    for _ in range(rng.randint(1, 4)):
        op = rng.random()
        pos = rng.randrange(len(data) + 1)
        if op < 0.3 and data:
            data[min(pos, len(data) - 1)] = rng.randrange(256)
        elif op < 0.5:
            del data[pos:pos + rng.randint(1, 20)]
        elif op < 0.7:
            data[pos:pos] = bytes(rng.choice(b'{}[]",:-0123456789eE.\\ \nntfa') for _ in range(rng.randint(1, 6)))
        elif op < 0.85:
            data = data[:pos]
        else:
            a = rng.randrange(len(data) + 1)
            data[pos:pos] = data[a:a + rng.randint(1, 40)]
    raw = bytes(data)
    return raw.decode("utf-8", errors="replace") if rng.random() < 0.8 else raw.decode("latin-1")


def mutate(rng: random.Random, kind: str, text: str) -> str:
    if kind != "trace-csv" and rng.random() < 0.6:
        return _structural(rng, text)
    return _textual(rng, text)


def run(iterations: int, seed: int = 0):
    """Fuzz every loader; returns outcome counts per kind.  Crashes raise."""
    rng = random.Random(seed)
    seeds = seed_documents()
    kinds = sorted(seeds)
    counts = {k: {OK: 0, PARSE: 0, VALIDATION: 0} for k in kinds}
    for i in range(iterations):
        kind = kinds[i % len(kinds)]
        text = mutate(rng, kind, rng.choice(seeds[kind]))
        try:
            counts[kind][classify(kind, text)] += 1
        except Exception as exc:
            raise AssertionError(f"{kind} loader crashed on iteration {i}: {type(exc).__name__}: {exc}\n"
                                 f"{text[:2000]}") from exc
    return counts
