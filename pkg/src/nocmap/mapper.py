"""Mapping search: exact enumeration and simulated annealing under the CWM or CDCM objective."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernel
from .energy import edynoc_cwm, pstnoc
from .model import Cdcg, Mapping, Mesh, ModelError, NocParams, cwg_from_cdcg, require_valid
from .routing import hop_count
from .sim import CompiledApp, _topo, simulate

log = logging.getLogger(__name__)

CWM = "cwm"
CDCM = "cdcm"

DEFAULT_ENUMERATION_LIMIT = 10**9


class InstanceTooLarge(ModelError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"exhaustive search needs {count} candidate mappings, limit is {limit}")
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class Objective:
    kind: str
    params: NocParams

    def __post_init__(self):
        if self.kind not in (CWM, CDCM):
            raise ValueError(f"unknown objective {self.kind!r}")


@dataclass(frozen=True)
class Evaluation:
    cost: Fraction
    texec: Optional[int] = None  # cycles, CDCM only


def evaluate(objective: Objective, app: Cdcg, mapping: Mapping, mesh: Mesh) -> Evaluation:
    """Cost of ``mapping`` straight from the energy model / simulator."""
    if objective.kind == CWM:
        mapping.check(app.cores, mesh)
        return Evaluation(edynoc_cwm(cwg_from_cdcg(app), mapping, mesh, objective.params).edy_noc)
    report = simulate(app, mapping, mesh, objective.params)
    return Evaluation(report.enoc, report.texec)


class Evaluator:
    """Integer-scaled objective over 0-based tile vectors, for the search loops.

    Every cost is an integer multiple of ``1 / scale`` joules, so comparisons
    are exact and cheap.
    """

    def __init__(self, objective: Objective, app: Cdcg, mesh: Mesh):
        require_valid(app)
        self.objective = objective
        self.app = app
        self.mesh = mesh
        p = objective.params
        er, el, ec = p.exact("erbit"), p.exact("elbit"), p.exact("ecbit")
        per_cycle = pstnoc(mesh, p) * p.exact("clock_period") if objective.kind == CDCM else Fraction(0)
        self.scale = reduce(_lcm, (f.denominator for f in (er, el, ec, per_cycle)), 1)
        self.er, self.el, self.ec = (int(f * self.scale) for f in (er, el, ec))
        self.static_per_cycle = int(per_cycle * self.scale)
        self.core_ids = sorted(c.id for c in app.cores)
        idx = {c: i for i, c in enumerate(self.core_ids)}
        cwg = cwg_from_cdcg(app)
        self.edges = [(idx[a], idx[b], w) for a, b, w in cwg.edges]
        n = mesh.n
        self.hops = [[hop_count(mesh, a + 1, b + 1) - 1 for b in range(n)] for a in range(n)]
        self.compiled = CompiledApp(app, mesh, p) if objective.kind == CDCM else None
        self.cache: Dict[Tuple[int, ...], int] = {}
        self.calls = 0

    @property
    def m(self) -> int:
        return len(self.core_ids)

    def dynamic(self, tiles: Sequence[int]) -> int:
        hops = self.hops
        er, erl, ec2 = self.er, self.er + self.el, 2 * self.ec
        total = 0
        for a, b, w in self.edges:
            total += w * (er + ec2 + erl * hops[tiles[a]][tiles[b]])
        return total

    def cost(self, tiles: Sequence[int]) -> int:
        self.calls += 1
        if self.compiled is None:
            return self.dynamic(tiles)
        key = tuple(tiles)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.dynamic(tiles) + self.static_per_cycle * self.compiled.texec(tiles)
            self.cache[key] = hit
        return hit

    def joules(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.scale)

    def mapping(self, tiles: Sequence[int]) -> Mapping:
        return Mapping.from_vector(self.core_ids, (t + 1 for t in tiles))

    def texec(self, tiles: Sequence[int]) -> Optional[int]:
        return None if self.compiled is None else self.compiled.texec(tiles)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass
class SearchResult:
    best_mapping: Mapping
    best_cost: Fraction
    evaluations: int
    wall_time: float
    texec: Optional[int] = None
    method: str = ""
    objective: str = ""
    history: List[Tuple[int, int, float]] = field(default_factory=list)


def candidate_count(m: int, n: int) -> int:
    return math.perm(n, m) if m <= n else 0


def tile_symmetries(mesh: Mesh, kind: str) -> List[Tuple[int, ...]]:
    """Tile permutations (0-based) leaving the objective unchanged.

    Mirrors and the half turn keep XY routes XY; transposes turn them into YX
    routes and are only safe for the hop-count-only CWM cost.
    """
    w, h = mesh.width, mesh.height
    maps = [lambda x, y: (x, y), lambda x, y: (w - 1 - x, y),
            lambda x, y: (x, h - 1 - y), lambda x, y: (w - 1 - x, h - 1 - y)]
    if kind == CWM and w == h:
        maps += [lambda x, y: (y, x), lambda x, y: (w - 1 - y, x),
                 lambda x, y: (y, h - 1 - x), lambda x, y: (w - 1 - y, h - 1 - x)]
    perms = set()
    for f in maps:
        perm = []
        for t in range(mesh.n):
            x, y = t % w, t // w
            nx, ny = f(x, y)
            perm.append(ny * w + nx)
        perms.add(tuple(perm))
    return sorted(perms)


def exhaustive_search(app: Cdcg, mesh: Mesh, objective: Objective,
                      limit: int = DEFAULT_ENUMERATION_LIMIT,
                      upper_bound: Optional[Mapping] = None) -> SearchResult:
    """Global optimum over all injective mappings; ties go to the smallest tile vector.

    The candidate space is enumerated implicitly: subtrees whose lower bound
    exceeds the incumbent are skipped.  Strongly connected cores are placed
    first, every optimal leaf is kept, and the smallest tile vector among
    those and their mesh-symmetric images wins.  ``upper_bound`` only seeds
    the incumbent cost.
    """
    t0 = time.perf_counter()
    ev = Evaluator(objective, app, mesh)
    m, n = ev.m, mesh.n
    if m > n:
        raise ModelError(f"{m} cores do not fit on {n} tiles")
    count = candidate_count(m, n)
    if count > limit:
        raise InstanceTooLarge(count, limit)
    if m == 0:
        return SearchResult(best_mapping=Mapping(()), best_cost=Fraction(0), evaluations=0,
                            wall_time=time.perf_counter() - t0, texec=ev.texec([]) if ev.compiled else None,
                            method="exhaustive", objective=objective.kind)

    bb = _BranchAndBound(ev)
    ceiling = math.inf
    if upper_bound is not None:
        ceiling = ev.cost([upper_bound.as_dict()[c] - 1 for c in ev.core_ids])
    strength = [sum(row) for row in bb.weights]
    order = _connectivity_order(bb.weights, strength)
    if _fits_int64(ev):
        cost, ties = bb.run_native(order, ceiling)
    else:
        cost, ties = bb.run(order, ceiling)
    # every optimum is a symmetric image of one found with the first core on a canonical tile
    tiles = min(tuple(g[t] for t in tie) for tie in ties for g in bb.syms)
    return SearchResult(best_mapping=ev.mapping(tiles), best_cost=ev.joules(cost),
                        evaluations=bb.leaves, wall_time=time.perf_counter() - t0,
                        texec=ev.texec(tiles), method="exhaustive", objective=objective.kind)


def _fits_int64(ev: Evaluator) -> bool:
    """Whether every scaled cost the search can meet stays far below 2**63."""
    far = max(max(row) for row in ev.hops) + 1
    dyn = sum(w for _, _, w in ev.edges) * (ev.er + 2 * ev.ec + (ev.er + ev.el) * far)
    slow = 0
    if ev.compiled is not None:
        c, p = ev.compiled, ev.compiled.params
        slow = sum(c.comp) + sum((b + p.tr + p.tl) * (far + 1) for b in c.busy) + p.tl * len(c.busy)
    return 4 * (dyn + ev.static_per_cycle * slow) < 2**62


def _connectivity_order(weights, strength) -> List[int]:
    m = len(weights)
    left = set(range(m))
    order = [max(left, key=lambda u: (strength[u], -u))]
    left.discard(order[0])
    while left:
        u = max(left, key=lambda u: (sum(weights[u][j] for j in order), strength[u], -u))
        order.append(u)
        left.discard(u)
    return order


class _BranchAndBound:
    """Depth-first implicit enumeration with an incremental placement-cost matrix.

    ``extra[u, t]`` is the weighted number of hops beyond one that core ``u``
    would add towards the already placed cores if put on tile ``t``.
    """

    def __init__(self, ev: Evaluator):
        self.ev = ev
        m = ev.m
        w = np.zeros((m, m), dtype=np.int64)
        for a, b, x in ev.edges:
            w[a, b] += x
            w[b, a] += x
        self.weights = w.tolist()
        self.w = w
        self.h1 = np.array(ev.hops, dtype=np.int64) - 1
        self.erl = ev.er + ev.el
        self.base = sum(x for _, _, x in ev.edges) * (ev.er + 2 * ev.ec + self.erl)
        self.timing = _TimingBound(ev) if ev.compiled is not None else None
        self.syms = tile_symmetries(ev.mesh, ev.objective.kind)
        self.leaves = 0

    def run(self, order: List[int], ceiling) -> Tuple[int, List[List[int]]]:
        """Optimal cost and all optimal placements with the first core of ``order`` on a canonical tile."""
        ev, m, n = self.ev, self.ev.m, self.ev.mesh.n
        extra = np.zeros((m, n), dtype=np.int64)
        tiles = [-1] * m
        free = np.ones(n, dtype=bool)
        unplaced = np.ones(m, dtype=bool)
        first_tiles = [t for t in range(n) if all(t <= g[t] for g in self.syms)]
        timing, base, erl = self.timing, self.base, self.erl
        w, h1 = self.w, self.h1
        best = [ceiling, []]

        def dfs(depth: int, spent: int) -> None:
            if depth == m:
                self.leaves += 1
                c = ev.cost(tiles)
                if c < best[0]:
                    best[0], best[1] = c, [list(tiles)]
                elif c == best[0]:
                    best[1].append(list(tiles))
                return
            k = order[depth]
            row = extra[k]
            if depth == 0:
                cands = first_tiles
            else:
                cands = np.flatnonzero(free)
                cands = cands[np.argsort(row[cands], kind="stable")].tolist()
            unplaced[k] = False
            for t in cands:
                e = spent + int(row[t])
                lb = base + erl * e
                if lb > best[0]:
                    if depth == 0:
                        continue
                    break  # candidates sorted by extra
                tiles[k] = t
                free[t] = False
                delta = np.outer(w[:, k], h1[t])
                np.add(extra, delta, out=extra)
                ok = True
                if depth + 1 < m:
                    rest = extra[unplaced][:, free]
                    if rest.size:
                        lb += erl * int(rest.min(axis=1).sum())
                        ok = lb <= best[0]
                    if ok and timing is not None:
                        ok = lb + timing.cheap <= best[0] and lb + timing.bound(tiles) <= best[0]
                if ok:
                    dfs(depth + 1, e)
                np.subtract(extra, delta, out=extra)
                free[t] = True
                tiles[k] = -1
            unplaced[k] = True

        dfs(0, 0)
        return best[0], best[1]


    def run_native(self, order: List[int], ceiling) -> Tuple[int, List[List[int]]]:
        """:meth:`run` in compiled code; costs must fit in int64."""

        ev = self.ev
        first = np.array([t for t in range(ev.mesh.n) if all(t <= g[t] for g in self.syms)], dtype=np.int64)
        hops = np.array(ev.hops, dtype=np.int64)
        limit = 2**62 if ceiling == math.inf else int(ceiling)
        if self.timing is not None:
            tb = self.timing
            timing = (np.array(tb.order, dtype=np.int64), np.array(tb.fixed, dtype=np.int64), tb.per_router)
            sim = ev.compiled._kernel_args()
        else:
            empty = np.zeros(0, dtype=np.int64)
            timing = (empty, empty, 0)
            sim = (empty, empty, empty, empty, empty, empty, np.zeros(1, dtype=np.int64), empty,
                   np.zeros((1, 1, 1), dtype=np.int64), np.zeros((1, 1), dtype=np.int64), 1, 0, 0)
        cost, ties, leaves = _kernel.branch_and_bound(
            np.array(order, dtype=np.int64), first, self.w, self.h1, hops, self.base, self.erl, limit,
            ev.static_per_cycle, self.timing is not None, *timing, *sim)
        self.leaves += int(leaves)
        if len(ties) == 0:
            return ceiling, []
        return int(cost), [list(map(int, t)) for t in ties]


class _TimingBound:
    """Static-energy lower bound from the contention-free longest path.

    Unplaced endpoints count as adjacent tiles, the shortest possible route
    between two distinct tiles.
    """

    def __init__(self, ev: Evaluator):
        app = ev.compiled
        self.ev = ev
        self.app = app
        p = app.params
        self.per_router = p.tr + p.tl
        self.fixed = [c + p.tl * f for c, f in zip(app.comp, app.flits)]
        self.order = _topo(app.npred, app.succ)
        self.cheap = ev.static_per_cycle * self._longest(lambda i: 2)

    def _longest(self, eta) -> int:
        succ, fixed, pr = self.app.succ, self.fixed, self.per_router
        ready = [0] * len(fixed)
        best = 0
        for i in self.order:
            done = ready[i] + fixed[i] + pr * eta(i)
            if done > best:
                best = done
            for j in succ[i]:
                if done > ready[j]:
                    ready[j] = done
        return best

    def bound(self, tiles: Sequence[int]) -> int:
        """Bound for a partial placement; unplaced cores have tile -1."""
        src, dst, hops = self.app.src, self.app.dst, self.ev.hops

        def eta(i):
            a, b = tiles[src[i]], tiles[dst[i]]
            if a >= 0 and b >= 0:
                return hops[a][b] + 1
            return 2

        return self.ev.static_per_cycle * self._longest(eta)


@dataclass(frozen=True)
class SaParams:
    """Annealing schedule; ``initial_temp='auto'`` calibrates from 100 sampled moves.

    A run stops once ``plateau`` consecutive temperatures leave the current
    cost unchanged, or the temperature drops below ``min_temp_fraction`` of
    the start.  Every run ends with a steepest-descent polish.
    """

    seed: int = 0
    initial_temp: Union[str, float] = "auto"
    cooling: float = 0.95
    moves_per_temp: Optional[int] = None  # default 50 * tiles
    min_temp_fraction: float = 1e-4
    plateau: int = 10
    restarts: int = 8
    workers: int = 1
    record_history: bool = False
    accept_start: float = 0.8  # target uphill acceptance for the automatic start temperature

    def __post_init__(self):
        if not 0 < self.cooling < 1:
            raise ValueError("cooling factor must lie in (0, 1)")
        if not 0 < self.accept_start < 1:
            raise ValueError("accept_start must lie in (0, 1)")
        for f in ("plateau", "restarts", "workers"):
            if getattr(self, f) < 1:
                raise ValueError(f"{f} must be positive")
        if self.moves_per_temp is not None and self.moves_per_temp < 1:
            raise ValueError("moves_per_temp must be positive")
        if self.initial_temp != "auto" and float(self.initial_temp) < 0:
            raise ValueError("initial temperature must be non-negative")

    def moves(self, n_tiles: int) -> int:
        return self.moves_per_temp or 50 * n_tiles


def restart_seed(seed: int, restart: int) -> int:
    """64-bit generator seed of one restart."""
    return random.Random(f"{seed}:{restart}").getrandbits(64)


_M64 = (1 << 64) - 1


class _SplitMix:
    """Same stream as the compiled annealer's generator."""

    def __init__(self, seed: int):
        self.state = seed & _M64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _M64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return float(self.next() >> 11) * (1.0 / 9007199254740992.0)

    def below(self, k: int) -> int:
        return (self.next() >> 11) % k


class _Annealer:
    """Pure Python twin of the compiled annealer, used when costs overflow int64."""

    def __init__(self, ev: Evaluator):
        self.ev = ev
        m = ev.m
        self.w = [[0] * m for _ in range(m)]
        for a, b, wt in ev.edges:
            self.w[a][b] += wt
            self.w[b][a] += wt
        self.const = sum(wt for _, _, wt in ev.edges) * (ev.er + 2 * ev.ec)
        self.erl = ev.er + ev.el

    def _propose(self, rng: _SplitMix, m: int, nfree: int) -> Tuple[int, int, int]:
        if nfree > 0 and (m < 2 or rng.uniform() < 0.5):
            return 1, rng.below(m), rng.below(nfree)
        i = rng.below(m)
        j = rng.below(m - 1)
        if j >= i:
            j += 1
        return 0, i, j

    def _delta(self, kind, i, j, tiles, free) -> int:
        w, dist = self.w, self.ev.hops
        d = 0
        if kind == 0:
            ti, tj = tiles[i], tiles[j]
            for u, tu in enumerate(tiles):
                if u != i and u != j:
                    d += w[i][u] * (dist[tj][tu] - dist[ti][tu]) + w[j][u] * (dist[ti][tu] - dist[tj][tu])
        else:
            ti, tn = tiles[i], free[j]
            for u, tu in enumerate(tiles):
                if u != i:
                    d += w[i][u] * (dist[tn][tu] - dist[ti][tu])
        return d

    @staticmethod
    def _apply(kind, i, j, tiles, free) -> None:
        if kind == 0:
            tiles[i], tiles[j] = tiles[j], tiles[i]
        else:
            tiles[i], free[j] = free[j], tiles[i]

    def _hops(self, tiles) -> int:
        dist, m = self.ev.hops, len(tiles)
        return sum(self.w[a][b] * dist[tiles[a]][tiles[b]] for a in range(m) for b in range(a + 1, m))

    def _cost(self, hops: int, tiles) -> int:
        c = self.const + self.erl * hops
        if self.ev.compiled is not None:
            c += self.ev.static_per_cycle * self.ev.compiled.texec(tiles)
        return c

    def run(self, seed: int, sa: SaParams):
        rng = _SplitMix(seed)
        n, m = self.ev.mesh.n, self.ev.m
        perm = list(range(n))
        for k in range(n - 1, 0, -1):
            r = rng.below(k + 1)
            perm[k], perm[r] = perm[r], perm[k]
        tiles, free = perm[:m], perm[m:]
        nfree = n - m
        hops = self._hops(tiles)
        cur = self._cost(hops, tiles)
        evals = 1
        best, best_tiles, best_free = cur, list(tiles), list(free)
        history: List[int] = []
        if m == 0 or (m == 1 and nfree == 0):
            return best, best_tiles, evals, history

        if sa.initial_temp == "auto":
            total, ups = 0.0, 0
            for _ in range(100):
                kind, i, j = self._propose(rng, m, nfree)
                dh = self._delta(kind, i, j, tiles, free)
                self._apply(kind, i, j, tiles, free)
                new = self._cost(hops + dh, tiles)
                evals += 1
                self._apply(kind, i, j, tiles, free)
                if new > cur:
                    total += new - cur
                    ups += 1
            t0 = (total / ups) / -math.log(sa.accept_start) if ups else 0.0
        else:
            t0 = float(sa.initial_temp)

        moves = sa.moves(n)
        temp, stale = t0, 0
        while stale < sa.plateau and (t0 == 0.0 or temp >= sa.min_temp_fraction * t0):
            changed = False
            for _ in range(moves):
                kind, i, j = self._propose(rng, m, nfree)
                dh = self._delta(kind, i, j, tiles, free)
                self._apply(kind, i, j, tiles, free)
                new = self._cost(hops + dh, tiles)
                evals += 1
                d = new - cur
                if d <= 0 or (temp > 0.0 and rng.uniform() < math.exp(-d / temp)):
                    changed = changed or d != 0
                    cur = new
                    hops += dh
                    if cur < best:
                        best, best_tiles, best_free = cur, list(tiles), list(free)
                else:
                    self._apply(kind, i, j, tiles, free)
            stale = 0 if changed else stale + 1
            history.append(best)
            temp *= sa.cooling

        tiles, free = list(best_tiles), list(best_free)
        hops = self._hops(tiles)
        cur = self._cost(hops, tiles)
        while True:
            top, pick = cur, None
            for kind in (0, 1):
                for i in range(m):
                    for j in (range(i + 1, m) if kind == 0 else range(nfree)):
                        dh = self._delta(kind, i, j, tiles, free)
                        self._apply(kind, i, j, tiles, free)
                        new = self._cost(hops + dh, tiles)
                        self._apply(kind, i, j, tiles, free)
                        evals += 1
                        if new < top:
                            top, pick = new, (kind, i, j, dh)
            if pick is None:
                break
            kind, i, j, dh = pick
            self._apply(kind, i, j, tiles, free)
            cur, hops = top, hops + dh
        if cur < best:
            best, best_tiles = cur, tiles
        return best, best_tiles, evals, history


def _anneal(ev: Evaluator, sa: SaParams, restart: int, native: Optional[bool] = None):
    """One restart: (best scaled cost, best tiles, evaluations, best cost per temperature)."""
    seed = restart_seed(sa.seed, restart)
    if native is None:
        native = _fits_int64(ev)
    if not native:
        return _Annealer(ev).run(seed, sa)
    ann = _Annealer(ev)
    m, n = ev.m, ev.mesh.n
    w = np.array(ann.w, dtype=np.int64).reshape(m, m)
    dist = np.array(ev.hops, dtype=np.int64).reshape(n, n)
    if ev.compiled is not None and ev.compiled.src:
        sim_args = ev.compiled._kernel_args()
        timed = True
    else:
        sim_args = _dummy_sim_args()
        timed = False
    t0 = -1.0 if sa.initial_temp == "auto" else float(sa.initial_temp)
    radix = n if timed and n ** m < 2**63 else 0
    best, tiles, evals, history = _kernel.anneal(
        np.uint64(seed), m, w, dist, ann.erl, ann.const, ev.static_per_cycle, timed, t0, sa.cooling,
        sa.moves(n), sa.min_temp_fraction, sa.plateau, sa.accept_start, radix, *sim_args)
    return int(best), [int(t) for t in tiles], int(evals), [int(h) for h in history]


def _dummy_sim_args():
    z = np.zeros(0, np.int64)
    return (z, z, z, z, z, z, np.zeros(1, np.int64), z, np.zeros((0, 0, 1), np.int64),
            np.zeros((0, 0), np.int64), 0, 0, 0)


def _restart_job(args):
    objective, app, mesh, sa, restart = args
    return _anneal(Evaluator(objective, app, mesh), sa, restart)


def simulated_annealing(app: Cdcg, mesh: Mesh, objective: Objective,
                        sa: SaParams = SaParams()) -> SearchResult:
    """Best mapping over ``sa.restarts`` independent annealing runs.

    The winner is the lowest cost, then the lowest restart index, so the
    result does not depend on how restarts are scheduled.
    """
    t0 = time.perf_counter()
    ev = Evaluator(objective, app, mesh)
    if ev.m > mesh.n:
        raise ModelError(f"{ev.m} cores do not fit on {mesh.n} tiles")
    if sa.workers > 1:
        jobs = [(objective, app, mesh, sa, r) for r in range(sa.restarts)]
        with ProcessPoolExecutor(max_workers=sa.workers) as pool:
            outcomes = list(pool.map(_restart_job, jobs))
    else:
        outcomes = [_anneal(ev, sa, r) for r in range(sa.restarts)]
    winner = min(range(sa.restarts), key=lambda r: (outcomes[r][0], r))
    best, tiles, _, _ = outcomes[winner]
    calls = sum(o[2] for o in outcomes)
    history = []
    if sa.record_history:
        history = [(r, step, float(ev.joules(b))) for r, o in enumerate(outcomes) for step, b in enumerate(o[3])]
    return SearchResult(best_mapping=ev.mapping(tiles), best_cost=ev.joules(best), evaluations=calls,
                        wall_time=time.perf_counter() - t0, texec=ev.texec(tiles), method="sa",
                        objective=objective.kind, history=history)


def search(app: Cdcg, mesh: Mesh, objective: Objective, method: str = "sa",
           sa: SaParams = SaParams(), limit: int = DEFAULT_ENUMERATION_LIMIT) -> SearchResult:
    if method == "exhaustive":
        return exhaustive_search(app, mesh, objective, limit=limit)
    if method == "sa":
        return simulated_annealing(app, mesh, objective, sa)
    raise ValueError(f"unknown search method {method!r}")
