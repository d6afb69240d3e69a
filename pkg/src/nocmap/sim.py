"""Event-driven wormhole execution of a CDCG on a mapped mesh.

Time is counted in integer clock cycles; multiply by ``params.clock_period``
for seconds.  Semantics:

* a packet becomes ready when every predecessor packet is fully delivered,
  then its source core computes for ``comp_time`` cycles before injecting;
* the header needs ``tl`` to reach the first router; each router serves one
  packet at a time for ``tr + flits * tl`` cycles, first come first served
  (ties by packet id), and forwards the header after ``tr + tl``;
* waiting packets sit in unbounded input buffers, so a wait delays only the
  downstream part of the route.

With no waiting a packet is delivered exactly ``total_delay`` after injection.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernel
from .energy import Resource, pstnoc, route_resources
from .model import START, Cdcg, Mapping, Mesh, ModelError, NocParams, require_valid
from .routing import xy_route


def flit_count(bits: int, params: NocParams) -> int:
    return max(1, -(-bits // params.flit_width))


def routing_cycles(eta: int, params: NocParams) -> int:
    return eta * (params.tr + params.tl) + params.tl


def packet_cycles(flits: int, params: NocParams) -> int:
    return params.tl * (flits - 1)


def total_cycles(eta: int, flits: int, params: NocParams) -> int:
    return eta * (params.tr + params.tl) + params.tl * flits


def routing_delay(eta: int, params: NocParams) -> Fraction:
    """Header latency in seconds over ``eta`` routers, core links included."""
    return routing_cycles(eta, params) * params.exact("clock_period")


def packet_delay(flits: int, params: NocParams) -> Fraction:
    """Latency in seconds of the body flits trailing the header."""
    return packet_cycles(flits, params) * params.exact("clock_period")


def total_delay(eta: int, flits: int, params: NocParams) -> Fraction:
    return total_cycles(eta, flits, params) * params.exact("clock_period")


@dataclass(frozen=True)
class Interval:
    """Half-open busy window ``[start, end)`` in cycles."""

    start: int
    end: int
    packet: int
    bits: int
    contended: bool = False


@dataclass(frozen=True)
class Wait:
    resource: Resource
    packet: int
    arrival: int
    start: int

    @property
    def cycles(self) -> int:
        return self.start - self.arrival


@dataclass
class SimReport:
    texec: int
    deliveries: Dict[int, int]
    injections: Dict[int, int]
    ready: Dict[int, int]
    timelines: Dict[Resource, List[Interval]]
    waits: List[Wait]
    edy_noc: Fraction
    est_noc: Fraction
    clock_period: Fraction
    resource_bits: Dict[Resource, int] = field(default_factory=dict)

    @property
    def enoc(self) -> Fraction:
        return self.edy_noc + self.est_noc

    @property
    def contention(self) -> int:
        """Total waiting cycles over all packets and routers."""
        return sum(w.cycles for w in self.waits)

    @property
    def texec_seconds(self) -> Fraction:
        return self.texec * self.clock_period

    @property
    def contention_ns(self) -> Fraction:
        return self.contention * self.clock_period * 10**9


class CompiledApp:
    """A CDCG flattened to index arrays for repeated simulation on one mesh."""

    def __init__(self, cdcg: Cdcg, mesh: Mesh, params: NocParams):
        require_valid(cdcg)
        self.cdcg = cdcg
        self.mesh = mesh
        self.params = params
        self.core_ids = sorted(c.id for c in cdcg.cores)
        core_index = {c: i for i, c in enumerate(self.core_ids)}
        packets = sorted(cdcg.packets, key=lambda p: p.id)
        self.packet_ids = [p.id for p in packets]
        pindex = {p.id: i for i, p in enumerate(packets)}
        self.src = [core_index[p.src] for p in packets]
        self.dst = [core_index[p.dst] for p in packets]
        self.bits = [p.bits for p in packets]
        self.comp = [p.comp_time for p in packets]
        self.flits = [flit_count(p.bits, params) for p in packets]
        self.busy = [params.tr + f * params.tl for f in self.flits]
        self.tail = [params.tr + params.tl + (f - 1) * params.tl for f in self.flits]
        npred = [0] * len(packets)
        succ: List[List[int]] = [[] for _ in packets]
        for a, b in cdcg.deps:
            if a == START or not isinstance(b, int):
                continue
            succ[pindex[a]].append(pindex[b])
            npred[pindex[b]] += 1
        self.npred = npred
        self.succ = [sorted(s) for s in succ]
        self.roots = [i for i, k in enumerate(npred) if k == 0]
        # routes as 0-based router indices, for every ordered tile pair
        n = mesh.n
        self.routes = [[tuple(t - 1 for t in xy_route(mesh, a + 1, b + 1).routers) for b in range(n)]
                       for a in range(n)]

        self._arrays = None

    def _kernel_args(self):
        if self._arrays is None:
            n = self.mesh.n
            width = max(len(r) for row in self.routes for r in row)
            route = np.zeros((n, n, width), dtype=np.int64)
            route_len = np.zeros((n, n), dtype=np.int64)
            for a in range(n):
                for b in range(n):
                    r = self.routes[a][b]
                    route[a, b, :len(r)] = r
                    route_len[a, b] = len(r)
            ptr = np.zeros(len(self.succ) + 1, dtype=np.int64)
            ptr[1:] = np.cumsum([len(s) for s in self.succ])
            idx = np.array([j for s in self.succ for j in s], dtype=np.int64)
            arr = lambda xs: np.array(xs, dtype=np.int64)
            self._arrays = (arr(self.src), arr(self.dst), arr(self.comp), arr(self.busy), arr(self.tail),
                            arr(self.npred), ptr, idx, route, route_len, n,
                            self.params.tl, self.params.tr + self.params.tl)
        return self._arrays

    def texec(self, tiles: Sequence[int]) -> int:
        """Execution time in cycles; ``tiles[k]`` is the 0-based tile of the k-th core (by id)."""
        if not self.src:
            return 0
        return int(_kernel.texec(np.asarray(tiles, dtype=np.int64), *self._kernel_args()))

    def texec_reference(self, tiles: Sequence[int]) -> int:
        """Same as :meth:`texec` through the plain Python event loop."""
        return self._run(tiles, None)

    def _run(self, tiles: Sequence[int], rec: Optional[dict]) -> int:
        tl = self.params.tl
        hop = self.params.tr + tl
        routes = self.routes
        src, dst, comp, busy, tail = self.src, self.dst, self.comp, self.busy, self.tail
        succ = self.succ
        remaining = list(self.npred)
        ready = [0] * len(remaining)
        free = [0] * self.mesh.n
        paths = [routes[tiles[s]][tiles[d]] for s, d in zip(src, dst)]
        heap = [(comp[i] + tl, i, 0) for i in self.roots]
        heapq.heapify(heap)
        texec = 0
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            a, i, h = pop(heap)
            path = paths[i]
            r = path[h]
            f = free[r]
            s = a if a >= f else f
            free[r] = s + busy[i]
            if rec is not None:
                rec["visits"].append((i, h, r, a, s))
            if h + 1 < len(path):
                push(heap, (s + hop, i, h + 1))
                continue
            done = s + tail[i]
            if rec is not None:
                rec["delivered"][i] = done
            if done > texec:
                texec = done
            for j in succ[i]:
                if done > ready[j]:
                    ready[j] = done
                remaining[j] -= 1
                if remaining[j] == 0:
                    push(heap, (ready[j] + comp[j] + tl, j, 0))
        if rec is not None:
            rec["ready"] = ready
        return texec

    def no_contention_texec(self, tiles: Sequence[int]) -> int:
        """Longest Start-to-End path of computation plus contention-free packet delay."""
        tl, tr = self.params.tl, self.params.tr
        order = _topo(self.npred, self.succ)
        ready = [0] * len(order)
        texec = 0
        for i in order:
            eta = len(self.routes[tiles[self.src[i]]][tiles[self.dst[i]]])
            done = ready[i] + self.comp[i] + eta * (tr + tl) + tl * self.flits[i]
            texec = max(texec, done)
            for j in self.succ[i]:
                ready[j] = max(ready[j], done)
        return texec

    def tiles_for(self, mapping: Mapping) -> List[int]:
        mapping.check(self.cdcg.cores, self.mesh)
        d = mapping.as_dict()
        return [d[c] - 1 for c in self.core_ids]


def _topo(npred: List[int], succ: List[List[int]]) -> List[int]:
    remaining = list(npred)
    stack = [i for i, k in enumerate(remaining) if k == 0]
    order = []
    while stack:
        i = stack.pop()
        order.append(i)
        for j in succ[i]:
            remaining[j] -= 1
            if remaining[j] == 0:
                stack.append(j)
    return order


def simulate(cdcg: Cdcg, mapping: Mapping, mesh: Mesh, params: NocParams) -> SimReport:
    """Run the application and collect timelines, waits and energy."""
    app = CompiledApp(cdcg, mesh, params)
    return simulate_compiled(app, app.tiles_for(mapping))


def simulate_compiled(app: CompiledApp, tiles: Sequence[int]) -> SimReport:
    params = app.params
    rec = {"visits": [], "delivered": {}}
    texec = app._run(tiles, rec)
    if len(rec["delivered"]) != len(app.packet_ids):
        raise ModelError("simulation stalled before delivering every packet")

    pid = app.packet_ids
    timelines: Dict[Resource, List[Interval]] = defaultdict(list)
    waits: List[Wait] = []
    waited = set()
    for i, h, r, a, s in rec["visits"]:
        if s > a:
            waits.append(Wait(("R", r + 1), pid[i], a, s))
            waited.add(i)
        path = app.routes[tiles[app.src[i]]][tiles[app.dst[i]]]
        end = s + app.busy[i]
        timelines[("R", r + 1)].append(Interval(s, end, pid[i], app.bits[i], s > a))
        last = h + 1 == len(path)
        out = ("Cout", r + 1) if last else ("L", r + 1, path[h + 1] + 1)
        timelines[out].append(Interval(s + params.tr, end, pid[i], app.bits[i], last and i in waited))
    for lane in timelines.values():
        lane.sort(key=lambda iv: (iv.start, iv.packet))

    bits: Dict[Resource, int] = defaultdict(int)
    for i in range(len(pid)):
        ts, td = tiles[app.src[i]] + 1, tiles[app.dst[i]] + 1
        routers, links, cores = route_resources(app.mesh, ts, td)
        for res in routers + links + cores:
            bits[res] += app.bits[i]
    rate = {"R": params.exact("erbit"), "L": params.exact("elbit"),
            "Cin": params.exact("ecbit"), "Cout": params.exact("ecbit")}
    edy = sum((b * rate[res[0]] for res, b in bits.items()), Fraction(0))
    lam = params.exact("clock_period")
    est = pstnoc(app.mesh, params) * texec * lam

    deliveries = {pid[i]: t for i, t in rec["delivered"].items()}
    ready = {pid[i]: t for i, t in enumerate(rec["ready"])}
    injections = {pid[i]: ready[pid[i]] + app.comp[i] for i in range(len(pid))}
    return SimReport(texec=texec, deliveries=dict(sorted(deliveries.items())), injections=injections,
                     ready=ready, timelines=dict(timelines), waits=waits, edy_noc=edy, est_noc=est,
                     clock_period=lam, resource_bits=dict(bits))


def no_contention_texec(cdcg: Cdcg, mapping: Mapping, mesh: Mesh, params: NocParams) -> int:
    app = CompiledApp(cdcg, mesh, params)
    return app.no_contention_texec(app.tiles_for(mapping))


@dataclass
class ContentionStats:
    total_wait: int
    per_resource: Dict[Resource, int]
    contended_pairs: int
    max_queue_bits: int

    @property
    def contended_resources(self) -> List[Resource]:
        return sorted(r for r, w in self.per_resource.items() if w > 0)


def contention_stats(report: SimReport) -> ContentionStats:
    per: Dict[Resource, int] = defaultdict(int)
    pairs = set()
    queue_events: Dict[Resource, List[Tuple[int, int]]] = defaultdict(list)
    bits_of = {}
    for lane in report.timelines.values():
        for iv in lane:
            bits_of[iv.packet] = iv.bits
    for w in report.waits:
        per[w.resource] += w.cycles
        for iv in report.timelines.get(w.resource, ()):
            if iv.packet != w.packet and iv.start < w.start and iv.end > w.arrival:
                pairs.add(tuple(sorted((iv.packet, w.packet))))
        queue_events[w.resource].append((w.arrival, bits_of[w.packet]))
        queue_events[w.resource].append((w.start, -bits_of[w.packet]))
    max_q = 0
    for events in queue_events.values():
        level = 0
        # departures before arrivals at equal times: [arrival, start) is half-open
        for _, delta in sorted(events, key=lambda e: (e[0], e[1] > 0)):
            level += delta
            max_q = max(max_q, level)
    return ContentionStats(total_wait=sum(per.values()), per_resource=dict(per),
                           contended_pairs=len(pairs), max_queue_bits=max_q)
