"""Deterministic XY routing on the mesh."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from .model import Mesh

CORE = "core"


@dataclass(frozen=True)
class Path:
    routers: Tuple[int, ...]
    links: Tuple[Tuple[int, int], ...]

    @property
    def eta(self) -> int:
        return len(self.routers)

    @property
    def core_links(self) -> Tuple[Tuple[str, int], Tuple[int, str]]:
        """Injection (core -> first router) and ejection (last router -> core) attachments."""
        return (CORE, self.routers[0]), (self.routers[-1], CORE)


def xy_route(mesh: Mesh, src_tile: int, dst_tile: int) -> Path:
    """Route resolving the X displacement before any Y displacement."""
    return _route(mesh.width, mesh.height, src_tile, dst_tile)


@lru_cache(maxsize=4096)
def _route(width: int, height: int, src: int, dst: int) -> Path:
    mesh = Mesh(width, height)
    x, y = mesh.coords(src)
    dx, dy = mesh.coords(dst)
    routers: List[int] = [src]
    while x != dx:
        x += 1 if dx > x else -1
        routers.append(mesh.tile_at(x, y))
    while y != dy:
        y += 1 if dy > y else -1
        routers.append(mesh.tile_at(x, y))
    links = tuple(zip(routers, routers[1:]))
    return Path(tuple(routers), links)


def hop_count(mesh: Mesh, src_tile: int, dst_tile: int) -> int:
    """Router count eta of the XY route."""
    x0, y0 = mesh.coords(src_tile)
    x1, y1 = mesh.coords(dst_tile)
    return abs(x0 - x1) + abs(y0 - y1) + 1
