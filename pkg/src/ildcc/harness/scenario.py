"""Default deployment scenario and candidate-site generation.

Cluster head and base station coordinates are not part of any published
data set, so the layout here is a choice: nine cluster heads on a 3 x 3 plate
one layer above the floor of a 5 x 5 x 5 grid, and the base station centred
two layers above the plate.  Candidate sites are the free vertices closest
to the backbone.
"""

from __future__ import annotations

import numpy as np

from ..backbone import Backbone, build_backbone
from ..errors import DomainError
from ..topology import GridInstance, GridSpec, NodeRole


def nearest_free_vertices(grid: GridSpec, anchors: list[int], exclude: set[int], count: int) -> list[int]:
    """``count`` free vertices ordered by distance to the nearest anchor, ties by id."""
    pts = grid.all_coords().astype(float)
    anc = pts[np.asarray(anchors, dtype=np.int64)]
    d = np.sqrt(((pts[:, None, :] - anc[None, :, :]) ** 2).sum(-1)).min(axis=1)
    free = [v for v in range(grid.n_vertices) if v not in exclude]
    if count > len(free):
        raise DomainError(f"asked for {count} candidate sites but only {len(free)} vertices are free")
    free.sort(key=lambda v: (round(d[v], 9), v))
    return sorted(free[:count])


def plate_layout(dims=(5, 5, 5), cell_edge=100.0, range_r=100.0) -> GridInstance:
    """BS and nine CHs, no candidates yet."""
    grid = GridSpec(tuple(dims), cell_edge)
    nx, ny, nz = grid.dims
    if min(nx, ny) < 3 or nz < 3:
        raise DomainError("plate layout needs at least 3 x 3 x 3 vertices")
    ci, cj = (nx - 3) // 2, (ny - 3) // 2
    z0 = 1 if nz >= 4 else 0
    chs = [grid.vertex_id((ci + a, cj + b, z0)) for a in range(3) for b in range(3)]
    bs = grid.vertex_id((ci + 1, cj + 1, min(z0 + 2, nz - 1)))
    nodes = [(bs, NodeRole.BASE_STATION)] + [(c, NodeRole.CLUSTER_HEAD) for c in chs]
    return GridInstance(grid, tuple(nodes), range_r, ())


def with_candidates(inst: GridInstance, n_candidates: int) -> tuple[GridInstance, Backbone]:
    """Build the backbone, then add the ``n_candidates`` free vertices nearest to it."""
    bb = build_backbone(inst)
    cands = nearest_free_vertices(inst.spec, list(bb.vertices), set(bb.vertices), n_candidates)
    full = inst.with_nodes(inst.nodes, cands)
    return full, build_backbone(full)


def default_instance(
    dims=(5, 5, 5), cell_edge: float = 100.0, range_r: float = 100.0, n_candidates: int = 110
) -> GridInstance:
    inst, _ = with_candidates(plate_layout(dims, cell_edge, range_r), n_candidates)
    return inst


def toy_instance(seed: int, dims=(3, 3, 3), n_ch: int = 3, n_candidates: int = 8, range_r: float = 100.0) -> GridInstance:
    """Small random layout for exhaustive cross-checks (``2**n_candidates`` placements)."""
    grid = GridSpec(tuple(dims), 100.0)
    rng = np.random.default_rng(seed)
    verts = [int(v) for v in rng.choice(grid.n_vertices, n_ch + 1, replace=False)]
    nodes = [(verts[0], NodeRole.BASE_STATION)] + [(v, NodeRole.CLUSTER_HEAD) for v in verts[1:]]
    inst, _ = with_candidates(GridInstance(grid, tuple(nodes), range_r, ()), n_candidates)
    return inst
