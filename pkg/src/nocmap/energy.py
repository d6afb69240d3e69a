"""Bit-energy model: dynamic NoC energy under both application models, static power/energy.

All results are exact rationals (``Fraction``) in joules/watts; callers
convert with ``float()`` for display.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from .model import Cdcg, Cwg, Mapping, Mesh, ModelError, NocParams, exact
from .routing import xy_route

Resource = Tuple  # ("R", tile) | ("L", a, b) | ("Cin", tile) | ("Cout", tile)


def resource_label(res: Resource) -> str:
    kind = res[0]
    if kind == "R":
        return f"τ{res[1]}"
    if kind == "L":
        return f"τ{res[1]}→τ{res[2]}"
    if kind == "Cin":
        return f"core→τ{res[1]}"
    if kind == "Cout":
        return f"τ{res[1]}→core"
    raise ValueError(res)


def route_resources(mesh: Mesh, src_tile: int, dst_tile: int):
    """Routers, inter-tile links and the two core attachments of an XY route."""
    path = xy_route(mesh, src_tile, dst_tile)
    routers = [("R", t) for t in path.routers]
    links = [("L", a, b) for a, b in path.links]
    return routers, links, [("Cin", src_tile), ("Cout", dst_tile)]


@dataclass
class EnergyBreakdown:
    edy_noc: Fraction
    est_noc: Fraction = Fraction(0)
    per_resource_bits: Dict[Resource, int] = field(default_factory=dict)
    per_resource: Dict[Resource, Fraction] = field(default_factory=dict)

    @property
    def enoc(self) -> Fraction:
        return self.edy_noc + self.est_noc


def ebit_per_hop_path(eta: int, params: NocParams) -> Fraction:
    """Energy of one bit crossing ``eta`` routers, ``eta - 1`` links and both core attachments."""
    if eta < 1:
        raise ValueError("eta must be >= 1")
    return eta * params.exact("erbit") + (eta - 1) * params.exact("elbit") + 2 * params.exact("ecbit")


def _accumulate(flows, mapping: Mapping, mesh: Mesh, params: NocParams) -> EnergyBreakdown:
    tiles = mapping.as_dict()
    bits: Dict[Resource, int] = defaultdict(int)
    for src, dst, w in flows:
        try:
            ts, td = tiles[src], tiles[dst]
        except KeyError as exc:
            raise ModelError(f"core {exc.args[0]} is not mapped") from None
        routers, links, cores = route_resources(mesh, ts, td)
        for r in routers + links + cores:
            bits[r] += w
    rate = {"R": params.exact("erbit"), "L": params.exact("elbit"),
            "Cin": params.exact("ecbit"), "Cout": params.exact("ecbit")}
    per = {r: b * rate[r[0]] for r, b in bits.items()}
    return EnergyBreakdown(edy_noc=sum(per.values(), Fraction(0)),
                           per_resource_bits=dict(bits), per_resource=per)


def edynoc_cwm(cwg: Cwg, mapping: Mapping, mesh: Mesh, params: NocParams) -> EnergyBreakdown:
    """Dynamic energy with each core-pair volume charged to every resource on its XY route."""
    return _accumulate(cwg.edges, mapping, mesh, params)


def edynoc_cdcm_breakdown(cdcg: Cdcg, mapping: Mapping, mesh: Mesh, params: NocParams) -> EnergyBreakdown:
    return _accumulate(((p.src, p.dst, p.bits) for p in cdcg.packets), mapping, mesh, params)


def edynoc_cdcm(cdcg: Cdcg, mapping: Mapping, mesh: Mesh, params: NocParams) -> Fraction:
    """Dynamic energy summed packet by packet."""
    return edynoc_cdcm_breakdown(cdcg, mapping, mesh, params).edy_noc


def pstnoc(mesh: Mesh, params: NocParams) -> Fraction:
    """Static NoC power: every router leaks ``ps_router``."""
    return mesh.n * params.exact("ps_router")


def estnoc(pst: Fraction, texec: Fraction) -> Fraction:
    if texec < 0:
        raise ValueError("texec must be non-negative")
    return exact(pst) * exact(texec)


def enoc(est: Fraction, edy: Fraction) -> Fraction:
    return exact(est) + exact(edy)
