"""Phase one: connect the base station and cluster heads with the fewest grid relays.

The construction is greedy in the style of Prim's algorithm.  Start from the
closest pair of required nodes joined by a minimum relay chain, then keep
attaching whichever remaining node needs the fewest relays to reach any
vertex already in the connected component.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InfeasibleError
from .spectral import NetworkGraph, fiedler_value
from .topology import GridInstance, NodeRole, adjacency_matrix, shortest_relay_path

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Backbone:
    instance: GridInstance
    vertices: tuple[int, ...]  # graph node i sits on grid vertex vertices[i]
    roles: tuple[NodeRole, ...]
    graph: NetworkGraph
    fprn_positions: tuple[int, ...]

    @property
    def cc(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> np.ndarray:
        return self.graph.adjacency()

    def as_instance(self) -> GridInstance:
        """The instance with first-phase relays placed (candidates under them dropped)."""
        taken = set(self.vertices)
        return self.instance.with_nodes(
            zip(self.vertices, self.roles),
            [c for c in self.instance.candidates if c not in taken],
        )


def _path_length(inst: GridInstance, path: list[int]) -> float:
    return sum(inst.spec.distance(a, b) for a, b in zip(path, path[1:]))


def build_backbone(inst: GridInstance) -> Backbone:
    """Connect BS and all CHs through first-phase relays on grid vertices.

    Raises:
        InfeasibleError: some required node cannot be reached inside the grid.
    """
    required = sorted(inst.vertices_with(NodeRole.BASE_STATION, NodeRole.CLUSTER_HEAD))
    if len(required) < 2:
        raise InfeasibleError("need a base station and at least one cluster head")
    g = inst.spec
    occupied = set(inst.occupied)

    # seed: closest pair, ties by smallest id pair
    a, b = min(combinations(required, 2), key=lambda ab: (g.distance(*ab), ab))
    path = shortest_relay_path(g, inst.range_r, a, [b], occupied - {a, b})
    if path is None:
        raise InfeasibleError(f"cannot connect vertices {a} and {b} inside the grid")
    cc = list(path)
    relays = list(path[1:-1])
    remaining = [v for v in required if v not in (a, b)]

    while remaining:
        best = None
        for v in remaining:
            blocked = occupied - {v} - set(cc)
            p = shortest_relay_path(g, inst.range_r, v, cc, blocked)
            if p is None:
                continue
            key = (len(p) - 2, _path_length(inst, p), v)
            if best is None or key < best[0]:
                best = (key, v, p)
        if best is None:
            raise InfeasibleError(f"cannot reach node(s) {remaining} from the backbone inside the grid")
        _, v, p = best
        new_relays = p[1:-1]
        cc.extend([v, *new_relays])
        relays.extend(new_relays)
        remaining.remove(v)
        log.debug("attached %d with %d relay(s)", v, len(new_relays))

    roles = {v: r for v, r in inst.nodes}
    bs = inst.base_station
    chs = sorted(inst.cluster_heads)
    vertices = [bs, *chs, *relays]
    node_roles = [roles[bs], *(roles[c] for c in chs), *([NodeRole.FIRST_PHASE_RELAY] * len(relays))]
    graph = NetworkGraph.from_adjacency(adjacency_matrix(g, vertices, inst.range_r))
    bb = Backbone(inst, tuple(vertices), tuple(node_roles), graph, tuple(relays))
    if bb.n >= 2 and fiedler_value(graph) <= 0:
        raise InfeasibleError("backbone construction produced a disconnected graph")
    return bb


def fprn_count(b: Backbone) -> int:
    return len(b.fprn_positions)
