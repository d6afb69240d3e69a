from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from nocmap import formats
from nocmap.benchgen import (BenchConfig, InfeasibleConfig, _rescale, generate, preset, small_presets,
                             table1_presets)
from nocmap.model import END, START, cwg_from_cdcg, topological_packets, validate_cdcg

# (name, cores, packets, total bits) per benchmark row; 3x4-3 is clamped from 14 to 12 cores
TABLE1 = [
    ("3x2-1", 5, 43, 78817), ("3x2-2", 6, 17, 174), ("3x2-3", 6, 43, 49003),
    ("2x4-1", 5, 16, 1600), ("2x4-2", 7, 33, 23235), ("2x4-3", 8, 18, 5930),
    ("3x3-1", 7, 16, 1600), ("3x3-2", 9, 18, 1860), ("3x3-3", 9, 32, 43120),
    ("2x5-1", 8, 24, 2215), ("2x5-2", 9, 51, 23244), ("2x5-3", 10, 22, 322221),
    ("3x4-1", 10, 15, 3100), ("3x4-2", 12, 25, 2578920), ("3x4-3", 12, 88, 115778),
    ("8x8", 62, 344, 9799200), ("10x10", 93, 415, 562565990), ("12x10", 99, 446, 680006120),
]


@pytest.mark.parametrize("name, cores, packets, bits", TABLE1)
def test_presets_reproduce_table_sizes(name, cores, packets, bits):
    cfg = preset(name)
    app = generate(cfg)
    assert (len(app.cores), len(app.packets), app.total_bits) == (cores, packets, bits)
    assert validate_cdcg(app) == []
    assert cfg.mesh[0] * cfg.mesh[1] >= cores
    assert app.name == name


def test_preset_lookup():
    assert [c.name for c in table1_presets()] == [t[0] for t in TABLE1]
    assert len(small_presets()) == 15
    assert preset("3x2") == preset("3x2-1")
    assert preset("3x3-2", seed=99).seed == 99
    with pytest.raises(KeyError):
        preset("4x4")


@pytest.mark.parametrize("seed", range(25))
def test_generated_graphs_are_valid_and_cover_every_core(seed):
    cfg = BenchConfig(n_cores=2 + seed % 9, n_packets=1 + seed * 3 // 2 + seed % 9, max_fanout=1 + seed % 4,
                      seed=seed, comp_range=(0, 50))
    app = generate(cfg)
    assert validate_cdcg(app) == []
    used = {p.src for p in app.packets} | {p.dst for p in app.packets}
    assert used == {c.id for c in app.cores}
    preds = Counter(b for a, b in app.deps if a != START and b != END)
    assert max(preds.values(), default=0) <= cfg.max_fanout
    for p in app.packets:
        assert cfg.volume_range[0] <= p.bits <= cfg.volume_range[1]
        assert cfg.comp_range[0] <= p.comp_time <= cfg.comp_range[1]
    # independent acyclicity check: Kahn's algorithm over the packet edges
    order = topological_packets(app)
    pos = {p: i for i, p in enumerate(order)}
    assert sorted(order) == sorted(p.id for p in app.packets)
    assert all(pos[a] < pos[b] for a, b in app.deps if a != START and b != END)


def test_fifty_packet_graph_is_acyclic():
    app = generate(BenchConfig(n_cores=12, n_packets=50, max_fanout=3, seed=5))
    assert validate_cdcg(app) == []
    indeg = Counter(b for a, b in app.deps if a != START and b != END)
    succ = {}
    for a, b in app.deps:
        if a != START and b != END:
            succ.setdefault(a, []).append(b)
    ready = [p.id for p in app.packets if indeg[p.id] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in succ.get(v, []):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    assert seen == 50


def test_generation_is_deterministic():
    cfg = preset("3x3-3")
    a = formats.dumps(formats.application_doc(generate(cfg)))
    b = formats.dumps(formats.application_doc(generate(cfg)))
    c = formats.dumps(formats.application_doc(generate(preset("3x3-3", seed=7))))
    assert a == b != c


def test_cwg_of_preset_carries_all_bits():
    app = generate(preset("2x5-2"))
    assert cwg_from_cdcg(app).total_bits == 23244


@pytest.mark.parametrize("kw", [
    dict(n_cores=1, n_packets=3), dict(n_cores=3, n_packets=0), dict(n_cores=7, n_packets=3),
    dict(n_cores=3, n_packets=3, volume_range=(0, 4)), dict(n_cores=3, n_packets=3, volume_range=(5, 4)),
    dict(n_cores=3, n_packets=3, comp_range=(-1, 4)), dict(n_cores=3, n_packets=3, max_fanout=0),
    dict(n_cores=3, n_packets=3, total_bits=2), dict(n_cores=5, n_packets=3, mesh=(2, 2)),
])
def test_infeasible_configs(kw):
    with pytest.raises(InfeasibleConfig):
        generate(BenchConfig(**kw))


def test_smallest_feasible_config():
    app = generate(BenchConfig(n_cores=2, n_packets=1, seed=1))
    assert len(app.packets) == 1 and validate_cdcg(app) == []
    app = generate(BenchConfig(n_cores=6, n_packets=3, seed=2))
    assert {p.src for p in app.packets} | {p.dst for p in app.packets} == set(range(6))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.1, 1e6), min_size=1, max_size=60), st.integers(0, 10**7))
def test_rescale_hits_the_total_exactly(raw, extra):
    total = len(raw) + extra
    out = _rescale(raw, total)
    assert sum(out) == total
    assert min(out) >= 1
