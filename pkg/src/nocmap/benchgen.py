"""Seeded random CDCG benchmarks shaped like TGFF task graphs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from .model import END, START, Cdcg, Core, ModelError, Packet


class InfeasibleConfig(ModelError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    """Generator settings.

    ``volume_range`` and ``comp_range`` bound per-packet bits and computation
    cycles.  With ``total_bits`` set the drawn volumes are rescaled so their
    sum is exactly that value.
    """

    n_cores: int
    n_packets: int
    volume_range: Tuple[int, int] = (8, 512)
    comp_range: Tuple[int, int] = (1, 100)
    max_fanout: int = 2
    seed: int = 0
    total_bits: Optional[int] = None
    name: str = ""
    mesh: Optional[Tuple[int, int]] = None

    def check(self) -> None:
        if self.n_cores < 2:
            raise InfeasibleConfig("n_cores must be >= 2")
        if self.n_packets < 1:
            raise InfeasibleConfig("n_packets must be >= 1")
        if self.n_cores > 2 * self.n_packets:
            raise InfeasibleConfig(
                f"{self.n_cores} cores cannot all be endpoints of {self.n_packets} packets")
        lo, hi = self.volume_range
        if not 1 <= lo <= hi:
            raise InfeasibleConfig(f"bad volume range {self.volume_range}")
        lo, hi = self.comp_range
        if not 0 <= lo <= hi:
            raise InfeasibleConfig(f"bad computation range {self.comp_range}")
        if self.max_fanout < 1:
            raise InfeasibleConfig("max_fanout must be >= 1")
        if self.total_bits is not None and self.total_bits < self.n_packets:
            raise InfeasibleConfig("total_bits must allow at least one bit per packet")
        if self.mesh is not None and self.mesh[0] * self.mesh[1] < self.n_cores:
            raise InfeasibleConfig(f"{self.n_cores} cores do not fit a {self.mesh[0]}x{self.mesh[1]} mesh")


def _log_uniform(rng: random.Random, lo: int, hi: int) -> float:
    if lo == hi:
        return float(lo)
    a, b = math.log(max(lo, 0.5)), math.log(hi + 1)
    return math.exp(rng.uniform(a, b))


def _rescale(raw: List[float], total: int) -> List[int]:
    """Integers >= 1 proportional to ``raw`` summing exactly to ``total``."""
    s = sum(raw)
    target = [r * total / s for r in raw]
    out = [max(1, int(t)) for t in target]
    diff = total - sum(out)
    order = sorted(range(len(raw)), key=lambda i: (-(target[i] - int(target[i])), i))
    k = 0
    while diff > 0:
        out[order[k % len(out)]] += 1
        diff -= 1
        k += 1
    while diff < 0:
        i = max(range(len(out)), key=lambda j: (out[j], -j))
        out[i] -= 1
        diff += 1
    return out


def generate(config: BenchConfig) -> Cdcg:
    """Ranked random DAG of packets; edges only go from lower to higher ranks."""
    config.check()
    rng = random.Random(config.seed)
    n_p, n_c = config.n_packets, config.n_cores

    n_ranks = max(1, min(n_p, round(math.sqrt(n_p))))
    ranks = list(range(n_ranks)) + [rng.randrange(n_ranks) for _ in range(n_p - n_ranks)]
    ranks.sort()
    by_rank: List[List[int]] = [[] for _ in range(n_ranks)]
    for i, r in enumerate(ranks):
        by_rank[r].append(i)

    preds: List[List[int]] = []
    for i, r in enumerate(ranks):
        if r == 0:
            preds.append([])
            continue
        lower = [j for j in range(i) if ranks[j] < r]
        k = min(len(lower), rng.randint(1, config.max_fanout))
        first = rng.choice(by_rank[r - 1])
        rest = rng.sample([j for j in lower if j != first], k - 1)
        preds.append(sorted([first] + rest))

    uncovered = list(range(n_c))
    src: List[int] = []
    dst: List[int] = []
    for i in range(n_p):
        remaining = n_p - i
        slack = 2 * (remaining - 1)
        if len(uncovered) > slack + 1:
            s = rng.choice(uncovered)
        elif preds[i]:
            s = dst[preds[i][0]]
        else:
            s = rng.randrange(n_c)
        if s in uncovered:
            uncovered.remove(s)
        open_ = [c for c in uncovered if c != s]
        if open_ and (len(uncovered) > slack or rng.random() < 0.5):
            d = rng.choice(open_)
        else:
            d = rng.choice([c for c in range(n_c) if c != s])
        if d in uncovered:
            uncovered.remove(d)
        src.append(s)
        dst.append(d)
    assert not uncovered

    vols = [_log_uniform(rng, *config.volume_range) for _ in range(n_p)]
    if config.total_bits is not None:
        bits = _rescale(vols, config.total_bits)
    else:
        lo, hi = config.volume_range
        bits = [min(hi, max(lo, int(v))) for v in vols]
    comps = [min(config.comp_range[1], int(_log_uniform(rng, *config.comp_range)))
             if config.comp_range[1] > 0 else 0 for _ in range(n_p)]

    packets = tuple(Packet(i + 1, src[i], dst[i], comps[i], bits[i]) for i in range(n_p))
    has_succ = set()
    deps = []
    for i, ps in enumerate(preds):
        if not ps:
            deps.append((START, i + 1))
        for j in ps:
            deps.append((j + 1, i + 1))
            has_succ.add(j)
    deps += [(i + 1, END) for i in range(n_p) if i not in has_succ]
    cores = tuple(Core(c, f"c{c}") for c in range(n_c))
    return Cdcg(cores=cores, packets=packets, deps=tuple(deps), name=config.name)


# (mesh, cores, packets, total bits); the 14-core 3x4 entry is clamped to 12 tiles
_TABLE1 = [
    ((3, 2), [(5, 43, 78817), (6, 17, 174), (6, 43, 49003)]),
    ((2, 4), [(5, 16, 1600), (7, 33, 23235), (8, 18, 5930)]),
    ((3, 3), [(7, 16, 1600), (9, 18, 1860), (9, 32, 43120)]),
    ((2, 5), [(8, 24, 2215), (9, 51, 23244), (10, 22, 322221)]),
    ((3, 4), [(10, 15, 3100), (12, 25, 2578920), (14, 88, 115778)]),
    ((8, 8), [(62, 344, 9799200)]),
    ((10, 10), [(93, 415, 562565990)]),
    ((12, 10), [(99, 446, 680006120)]),
]

REFERENCE_FLIT = 32


def _preset(mesh, cores, packets, total, variant, count) -> BenchConfig:
    w, h = mesh
    name = f"{w}x{h}" if count == 1 else f"{w}x{h}-{variant}"
    cores = min(cores, w * h)
    mean = max(1, total // packets)
    vol = (max(1, mean // 8), max(1, mean * 8))
    flits = max(1, mean // REFERENCE_FLIT)
    comp = (flits // 4 + 1, 2 * flits + 1)
    return BenchConfig(n_cores=cores, n_packets=packets, volume_range=vol, comp_range=comp,
                       max_fanout=2, seed=variant, total_bits=total, name=name, mesh=mesh)


def table1_presets() -> List[BenchConfig]:
    """One generator config per application row of the published benchmark table."""
    out = []
    for mesh, apps in _TABLE1:
        for k, (c, p, v) in enumerate(apps, start=1):
            out.append(_preset(mesh, c, p, v, k, len(apps)))
    return out


def preset(name: str, seed: Optional[int] = None) -> BenchConfig:
    """Look up a preset by name (``"8x8"``, ``"3x2-1"``; a bare small size means variant 1)."""
    table = {c.name: c for c in table1_presets()}
    cfg = table.get(name) or table.get(f"{name}-1")
    if cfg is None:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(table)}")
    return cfg if seed is None else replace(cfg, seed=seed)


def small_presets() -> List[BenchConfig]:
    return [c for c in table1_presets() if c.mesh[0] * c.mesh[1] <= 12]
