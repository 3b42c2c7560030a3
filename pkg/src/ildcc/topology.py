"""3-D grid geometry, node roles and link feasibility.

Vertices of an ``nx x ny x nz`` grid are addressed by a linear id
``(i * ny + j) * nz + k``.  All positions (base station, cluster heads,
relays, candidate sites) live on grid vertices.
"""

from __future__ import annotations

import enum
import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InfeasibleError

# relative slack on the inclusive range test, so r == cell_edge is in range
_RANGE_RTOL = 1e-9


class NodeRole(str, enum.Enum):
    BASE_STATION = "BS"
    CLUSTER_HEAD = "CH"
    FIRST_PHASE_RELAY = "FPRN"
    SECOND_PHASE_RELAY = "SPRN"


@dataclass(frozen=True)
class GridSpec:
    dims: tuple[int, int, int]
    cell_edge: float = 100.0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DomainError(f"grid dims must be three integers >= 1, got {self.dims!r}")
        if not self.cell_edge > 0:
            raise DomainError(f"cell_edge must be positive, got {self.cell_edge!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "cell_edge", float(self.cell_edge))

    @property
    def n_vertices(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    def contains(self, vid: int) -> bool:
        return 0 <= vid < self.n_vertices

    def check(self, vid: int) -> int:
        if not isinstance(vid, (int, np.integer)) or not self.contains(int(vid)):
            raise DomainError(f"vertex id {vid!r} is not on a grid of dims {self.dims}")
        return int(vid)

    def vertex_id(self, coords: Sequence[int]) -> int:
        i, j, k = (int(c) for c in coords)
        nx, ny, nz = self.dims
        if not (0 <= i < nx and 0 <= j < ny and 0 <= k < nz):
            raise DomainError(f"coordinates {tuple(coords)} outside grid {self.dims}")
        return (i * ny + j) * nz + k

    def coords(self, vid: int) -> tuple[int, int, int]:
        vid = self.check(vid)
        _, ny, nz = self.dims
        return vid // (ny * nz), (vid // nz) % ny, vid % nz

    def all_coords(self) -> np.ndarray:
        """Integer coordinates of every vertex, row ``v`` for vertex id ``v``."""
        nx, ny, nz = self.dims
        grid = np.indices((nx, ny, nz)).reshape(3, -1).T
        return grid.astype(np.int64)

    def distance(self, a: int, b: int) -> float:
        ca, cb = self.coords(a), self.coords(b)
        return self.cell_edge * math.sqrt(sum((x - y) ** 2 for x, y in zip(ca, cb)))


def euclidean_distance(grid: GridSpec, a: int, b: int) -> float:
    """Distance in meters between two grid vertices."""
    return grid.distance(a, b)


def in_range(d: float, range_r: float) -> bool:
    return d <= range_r * (1.0 + _RANGE_RTOL)


@dataclass(frozen=True)
class GridInstance:
    """A deployment problem: grid, placed devices, radio range, candidate sites."""

    spec: GridSpec
    nodes: tuple[tuple[int, NodeRole], ...]
    range_r: float
    candidates: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        nodes = tuple((self.spec.check(v), NodeRole(role)) for v, role in self.nodes)
        candidates = tuple(self.spec.check(v) for v in self.candidates)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "range_r", float(self.range_r))
        if not self.range_r > 0:
            raise DomainError("range_r must be positive")
        n_bs = sum(role is NodeRole.BASE_STATION for _, role in nodes)
        if n_bs != 1:
            raise DomainError(f"an instance needs exactly one base station, found {n_bs}")
        occupied = [v for v, _ in nodes]
        if len(set(occupied)) != len(occupied):
            raise DomainError("two nodes share a grid vertex")
        if len(set(candidates)) != len(candidates):
            raise DomainError("duplicate candidate vertex")
        clash = set(occupied) & set(candidates)
        if clash:
            raise DomainError(f"candidate vertices already occupied: {sorted(clash)}")

    @property
    def n_candidates(self) -> int:
        return len(self.candidates)

    @property
    def occupied(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.nodes)

    def vertices_with(self, *roles: NodeRole) -> list[int]:
        return [v for v, role in self.nodes if role in roles]

    @property
    def base_station(self) -> int:
        return self.vertices_with(NodeRole.BASE_STATION)[0]

    @property
    def cluster_heads(self) -> list[int]:
        return self.vertices_with(NodeRole.CLUSTER_HEAD)

    def with_nodes(self, nodes: Iterable[tuple[int, NodeRole]], candidates: Iterable[int] | None = None) -> "GridInstance":
        return GridInstance(
            self.spec,
            tuple(nodes),
            self.range_r,
            self.candidates if candidates is None else tuple(candidates),
        )


def pairwise_distances(grid: GridSpec, vertices: Sequence[int]) -> np.ndarray:
    pts = grid.all_coords()[np.asarray(vertices, dtype=np.int64)].astype(float)
    diff = pts[:, None, :] - pts[None, :, :]
    return grid.cell_edge * np.sqrt((diff**2).sum(-1))


def adjacency_matrix(grid: GridSpec, vertices: Sequence[int], range_r: float) -> np.ndarray:
    """0/1 adjacency among ``vertices`` (in the given order) under the range rule."""
    d = pairwise_distances(grid, vertices)
    adj = (d <= range_r * (1.0 + _RANGE_RTOL)).astype(np.int8)
    np.fill_diagonal(adj, 0)
    return adj


def feasible_links(inst: GridInstance) -> list[tuple[int, int]]:
    """All unordered vertex pairs among nodes and candidates within radio range.

    Pairs are returned as ``(u, v)`` with ``u < v``, sorted.
    """
    verts = sorted(set(inst.occupied) | set(inst.candidates))
    if len(verts) < 2:
        return []
    adj = adjacency_matrix(inst.spec, verts, inst.range_r)
    iu, ju = np.nonzero(np.triu(adj, 1))
    return [(verts[a], verts[b]) for a, b in zip(iu.tolist(), ju.tolist())]


def lattice_steps(grid: GridSpec, range_r: float) -> list[tuple[int, int, int]]:
    """Integer displacements whose length fits in one radio hop."""
    reach = int(math.floor(range_r / grid.cell_edge + 1e-9))
    steps = []
    for di in range(-reach, reach + 1):
        for dj in range(-reach, reach + 1):
            for dk in range(-reach, reach + 1):
                if (di, dj, dk) == (0, 0, 0):
                    continue
                if in_range(grid.cell_edge * math.sqrt(di * di + dj * dj + dk * dk), range_r):
                    steps.append((di, dj, dk))
    return steps


def _neighbours(grid: GridSpec, steps, vid: int) -> list[int]:
    i, j, k = grid.coords(vid)
    nx, ny, nz = grid.dims
    out = []
    for di, dj, dk in steps:
        a, b, c = i + di, j + dj, k + dk
        if 0 <= a < nx and 0 <= b < ny and 0 <= c < nz:
            out.append((a * ny + b) * nz + c)
    out.sort()
    return out


def shortest_relay_path(
    grid: GridSpec,
    range_r: float,
    source: int,
    targets: Iterable[int],
    blocked: Iterable[int] = (),
) -> list[int] | None:
    """Fewest-hop lattice path from ``source`` to the nearest of ``targets``.

    Intermediate vertices (the relays) avoid ``blocked``.  Among minimum-hop
    paths the shortest in Euclidean length wins, then the lexicographically
    smallest vertex sequence.  Returns the full path ``[source, ..., target]``
    or ``None`` if no target is reachable.
    """
    targets = {grid.check(t) for t in targets}
    source = grid.check(source)
    if source in targets:
        return [source]
    blocked = set(blocked) - targets - {source}
    steps = lattice_steps(grid, range_r)

    # multi-source BFS outward from the targets
    dist = {t: 0 for t in targets}
    queue = deque(sorted(targets))
    while queue:
        u = queue.popleft()
        if u == source:
            break
        for v in _neighbours(grid, steps, u):
            if v in dist or v in blocked:
                continue
            dist[v] = dist[u] + 1
            queue.append(v)
    if source not in dist:
        return None

    # remaining Euclidean length to a target along hop-decreasing edges
    layers: dict[int, list[int]] = {}
    for v, d in dist.items():
        if d <= dist[source]:
            layers.setdefault(d, []).append(v)
    best = {t: 0.0 for t in targets}
    for d in range(1, dist[source] + 1):
        for v in layers.get(d, ()):
            options = [
                grid.distance(v, w) + best[w]
                for w in _neighbours(grid, steps, v)
                if dist.get(w) == d - 1 and w in best
            ]
            best[v] = min(options)

    path = [source]
    u = source
    while dist[u] > 0:
        nxt = [
            (grid.distance(u, w) + best[w], w)
            for w in _neighbours(grid, steps, u)
            if dist.get(w) == dist[u] - 1 and w in best
        ]
        lowest = min(c for c, _ in nxt)
        u = min(w for c, w in nxt if c <= lowest * (1 + 1e-12) + 1e-12)
        path.append(u)
    return path


def grid_path_relays(a: int, b: int, inst: GridInstance) -> list[int]:
    """Minimum set of relay vertices linking ``a`` and ``b`` hop by hop.

    Relays may not sit on vertices already occupied by other nodes.

    Raises:
        DomainError: if ``a == b``.
        InfeasibleError: if no relay chain fits inside the grid.
    """
    if a == b:
        raise DomainError("grid_path_relays needs two distinct vertices")
    blocked = set(inst.occupied) - {a, b}
    path = shortest_relay_path(inst.spec, inst.range_r, a, [b], blocked)
    if path is None:
        raise InfeasibleError(f"no relay path between vertices {a} and {b} inside the grid")
    return path[1:-1]


def _role_name(role: NodeRole) -> str:
    return role.value


def instance_to_dict(inst: GridInstance) -> dict:
    g = inst.spec
    return {
        "dims": list(g.dims),
        "cell_edge": g.cell_edge,
        "range_r": inst.range_r,
        "nodes": [{"vertex": list(g.coords(v)), "role": _role_name(r)} for v, r in inst.nodes],
        "candidates": [list(g.coords(v)) for v in inst.candidates],
    }


def instance_from_dict(doc: dict) -> GridInstance:
    try:
        spec = GridSpec(tuple(doc["dims"]), float(doc.get("cell_edge", doc.get("range_r", 100.0))))
        nodes = tuple((spec.vertex_id(n["vertex"]), NodeRole(n["role"])) for n in doc["nodes"])
        candidates = tuple(spec.vertex_id(c) for c in doc.get("candidates", []))
        return GridInstance(spec, nodes, float(doc["range_r"]), candidates)
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed instance document: {exc}") from exc


def save_instance(inst: GridInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")


def load_instance(path: str | Path) -> GridInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_dict(doc)
