"""Application and platform graphs: CWG, CDCG, mesh, mappings, technology parameters."""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping as MappingT, Tuple, Union

START = "Start"
END = "End"

Vertex = Union[int, str]


class ModelError(ValueError):
    """Raised when a graph, mesh or mapping violates its invariants."""


@dataclass(frozen=True)
class Core:
    id: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or str(self.id)


@dataclass(frozen=True)
class Packet:
    """One message ``src -> dst`` sent after ``comp_time`` cycles of computation on ``src``."""

    id: int
    src: int
    dst: int
    comp_time: int
    bits: int


@dataclass(frozen=True)
class Cwg:
    cores: Tuple[Core, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (src core id, dst core id, weight bits)

    def weight(self, src: int, dst: int) -> int:
        for a, b, w in self.edges:
            if a == src and b == dst:
                return w
        return 0

    @property
    def total_bits(self) -> int:
        return sum(w for _, _, w in self.edges)


@dataclass(frozen=True)
class Cdcg:
    """Packet dependence graph with ``START``/``END`` pseudo-vertices.

    ``deps`` holds ordered pairs of vertices; a vertex is a packet id or one
    of the two sentinels.  Nothing is validated at construction time, use
    :func:`validate_cdcg`.
    """

    cores: Tuple[Core, ...]
    packets: Tuple[Packet, ...]
    deps: Tuple[Tuple[Vertex, Vertex], ...]
    name: str = ""

    def packet(self, pid: int) -> Packet:
        for p in self.packets:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def core(self, cid: int) -> Core:
        for c in self.cores:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def core_by_label(self, label: str) -> Core:
        for c in self.cores:
            if c.label == label:
                return c
        raise KeyError(label)

    def predecessors(self) -> Dict[Vertex, List[Vertex]]:
        preds: Dict[Vertex, List[Vertex]] = defaultdict(list)
        for a, b in self.deps:
            preds[b].append(a)
        return preds

    def successors(self) -> Dict[Vertex, List[Vertex]]:
        succs: Dict[Vertex, List[Vertex]] = defaultdict(list)
        for a, b in self.deps:
            succs[a].append(b)
        return succs

    @property
    def total_bits(self) -> int:
        return sum(p.bits for p in self.packets)


def validate_cdcg(cdcg: Cdcg) -> List[str]:
    """Return the list of invariant violations of ``cdcg`` (empty when valid)."""
    problems: List[str] = []
    core_ids = [c.id for c in cdcg.cores]
    if len(set(core_ids)) != len(core_ids):
        problems.append("duplicate core ids")
    known_cores = set(core_ids)

    pids = [p.id for p in cdcg.packets]
    seen = set()
    for p in cdcg.packets:
        if p.id in seen:
            problems.append(f"packet {p.id}: duplicate id")
        seen.add(p.id)
        if p.src not in known_cores:
            problems.append(f"packet {p.id}: unknown source core {p.src}")
        if p.dst not in known_cores:
            problems.append(f"packet {p.id}: unknown destination core {p.dst}")
        if p.src == p.dst:
            problems.append(f"packet {p.id}: source equals destination")
        if p.bits < 1:
            problems.append(f"packet {p.id}: bits must be >= 1")
        if p.comp_time < 0:
            problems.append(f"packet {p.id}: negative computation time")

    vertices = set(pids) | {START, END}
    edges = set()
    for a, b in cdcg.deps:
        if a not in vertices or b not in vertices:
            problems.append(f"edge ({a}, {b}): unknown vertex")
            continue
        if (a, b) in edges:
            problems.append(f"edge ({a}, {b}): duplicate")
        edges.add((a, b))
        if b == START:
            problems.append(f"edge ({a}, {b}): Start has a predecessor")
        if a == END:
            problems.append(f"edge ({a}, {b}): End has a successor")
        if a == START and b == END:
            problems.append("edge (Start, End): bypasses every packet")

    succ: Dict[Vertex, List[Vertex]] = defaultdict(list)
    pred: Dict[Vertex, List[Vertex]] = defaultdict(list)
    for a, b in edges:
        succ[a].append(b)
        pred[b].append(a)

    # Kahn's algorithm; leftovers sit on (or behind) a cycle
    indeg = {v: len(pred[v]) for v in vertices}
    queue = deque(sorted((v for v in vertices if indeg[v] == 0), key=str))
    done = set()
    while queue:
        v = queue.popleft()
        done.add(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    for v in sorted(vertices - done, key=str):
        if any(a == b for a, b in edges if a == v):
            problems.append(f"vertex {v}: self-loop cycle")
        else:
            problems.append(f"vertex {v}: on or behind a dependence cycle")

    if not cdcg.packets:
        problems.append("End unreachable: no packets")
    fwd = _reach(START, succ)
    bwd = _reach(END, pred)
    for pid in pids:
        if pid not in fwd:
            problems.append(f"packet {pid}: unreachable from Start")
        if pid not in bwd:
            problems.append(f"packet {pid}: End unreachable")
    return problems


def _reach(root: Vertex, adj: MappingT[Vertex, List[Vertex]]) -> set:
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def require_valid(cdcg: Cdcg) -> None:
    problems = validate_cdcg(cdcg)
    if problems:
        raise ModelError("invalid CDCG: " + "; ".join(problems))


def cwg_from_cdcg(cdcg: Cdcg) -> Cwg:
    """Aggregate packet volumes per ordered core pair."""
    require_valid(cdcg)
    weights: Dict[Tuple[int, int], int] = defaultdict(int)
    for p in cdcg.packets:
        weights[(p.src, p.dst)] += p.bits
    edges = tuple((a, b, w) for (a, b), w in sorted(weights.items()))
    return Cwg(cores=cdcg.cores, edges=edges)


def topological_packets(cdcg: Cdcg) -> List[int]:
    """Packet ids in a deterministic topological order (smallest id first among ready)."""
    import heapq

    succ = cdcg.successors()
    indeg = {p.id: 0 for p in cdcg.packets}
    for a, b in cdcg.deps:
        if b != END and a != START:
            indeg[b] += 1
    heap = [pid for pid, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ.get(v, ()):
            if w == END:
                continue
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(indeg):
        raise ModelError("CDCG has a dependence cycle")
    return order


@dataclass(frozen=True)
class Mesh:
    """A ``width`` x ``height`` mesh; tiles are numbered 1..n row-major from the origin."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ModelError(f"mesh dimensions must be >= 1, got {self.width}x{self.height}")

    @property
    def n(self) -> int:
        return self.width * self.height

    @property
    def tiles(self) -> range:
        return range(1, self.n + 1)

    def coords(self, tile: int) -> Tuple[int, int]:
        if not 1 <= tile <= self.n:
            raise ModelError(f"tile {tile} outside 1..{self.n}")
        return (tile - 1) % self.width, (tile - 1) // self.width

    def tile_at(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise ModelError(f"coordinates ({x}, {y}) outside {self.width}x{self.height} mesh")
        return y * self.width + x + 1

    def links(self) -> List[Tuple[int, int]]:
        """Directed links between 4-neighbour tiles, both directions."""
        out = []
        for t in self.tiles:
            x, y = self.coords(t)
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                nx, ny = x + dx, y + dy
                if 0 <= nx < self.width and 0 <= ny < self.height:
                    out.append((t, self.tile_at(nx, ny)))
        return out

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


def mesh_coords(i: int, mesh: Mesh) -> Tuple[int, int]:
    return mesh.coords(i)


def tile_at(x: int, y: int, mesh: Mesh) -> int:
    return mesh.tile_at(x, y)


@dataclass(frozen=True)
class Mapping:
    """Injective core id -> tile index (1-based) assignment."""

    assignment: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_dict(cls, d: MappingT[int, int]) -> "Mapping":
        return cls(tuple(sorted((int(c), int(t)) for c, t in d.items())))

    @classmethod
    def from_vector(cls, core_ids: Iterable[int], tiles: Iterable[int]) -> "Mapping":
        return cls.from_dict(dict(zip(core_ids, tiles)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.assignment)

    def tile_of(self, core: int) -> int:
        for c, t in self.assignment:
            if c == core:
                return t
        raise ModelError(f"core {core} is not mapped")

    def vector(self) -> Tuple[int, ...]:
        """Tiles ordered by core id; the order used for lexicographic tie-breaks."""
        return tuple(t for _, t in self.assignment)

    def check(self, cores: Iterable[Core], mesh: Mesh) -> None:
        d = self.as_dict()
        if len(d) != len(self.assignment):
            raise ModelError("mapping lists a core twice")
        ids = {c.id for c in cores}
        missing = sorted(ids - d.keys())
        if missing:
            raise ModelError(f"unmapped cores: {missing}")
        extra = sorted(d.keys() - ids)
        if extra:
            raise ModelError(f"mapping names unknown cores: {extra}")
        tiles = list(d.values())
        if len(set(tiles)) != len(tiles):
            raise ModelError("two cores share a tile")
        bad = [t for t in tiles if not 1 <= t <= mesh.n]
        if bad:
            raise ModelError(f"tiles outside 1..{mesh.n}: {bad}")


def exact(x) -> Fraction:
    """Exact rational for a parameter value; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class NocParams:
    """Technology profile.

    Energies in J/bit, ``ps_router`` in W, ``clock_period`` (lambda) in s,
    ``tr``/``tl`` in clock cycles, ``flit_width`` in bits.  Router buffers
    are unbounded.
    """

    erbit: float
    elbit: float
    ps_router: float
    clock_period: float
    tr: int
    tl: int
    flit_width: int
    ecbit: float = 0.0
    name: str = ""

    def __post_init__(self):
        for f in ("erbit", "elbit", "ecbit", "ps_router", "clock_period"):
            try:
                finite = math.isfinite(getattr(self, f))
            except OverflowError:
                finite = False
            if not finite:
                raise ModelError(f"{f} must be finite and within float range")
        for f in ("erbit", "elbit", "ecbit", "ps_router"):
            if getattr(self, f) < 0:
                raise ModelError(f"{f} must be non-negative")
        for f in ("clock_period", "tr", "tl", "flit_width"):
            if getattr(self, f) <= 0:
                raise ModelError(f"{f} must be positive")
        for f in ("tr", "tl", "flit_width"):
            if int(getattr(self, f)) != getattr(self, f):
                raise ModelError(f"{f} must be an integer")

    def exact(self, name: str) -> Fraction:
        return exact(getattr(self, name))
