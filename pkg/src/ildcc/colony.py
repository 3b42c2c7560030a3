"""Phase two: Artificial Bee Colony search over second-phase relay placements.

Food sources are real vectors in ``[0, 1]^D`` (one coordinate per candidate
vertex).  A decoder turns a source into a binary placement ``alpha``; the
placement's Laplacian spectrum gives the objective ``n * sum_{i>=2} 1/lambda_i``
and the algebraic connectivity that must stay inside a window.

Two decoders are provided:

``topk``
    activate the ``budget`` largest coordinates above 0.5.
``grow``
    grow the relay set outward from the backbone, one vertex at a time, each
    step taking the reachable candidate with the largest
    ``key * (links into the current network)``.  Every placement it produces
    is connected, and any connected placement is reachable by some key vector.

Infeasible placements get an infinite fitness.  Greedy selection inside the
colony compares ``(violation, wiener)`` so that a colony that starts entirely
outside the connectivity window can still climb towards it.  Equal placements
are further ranked by the slack of unselected keys above 0.5; without it the
search cannot walk across the plateau that separates a full placement from a
smaller, better one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .backbone import Backbone
from .errors import ConfigError, DomainError
from .spectral import CONNECTED_TOL, NetworkGraph, laplacian_from_adjacency, wiener_spectral_batch
from .topology import GridInstance, adjacency_matrix

log = logging.getLogger(__name__)

DECODERS = ("grow", "topk")


@dataclass(frozen=True)
class ColonyConfig:
    colony_size: int = 40  # food sources = colony_size // 2
    generations: int = 200
    budget: int = 10
    lambda2_min: float = 0.4
    lambda2_max: float = 0.6
    seed: int = 0
    abandonment_limit: int | None = None  # None -> colony_size * D / 2
    dims: int | None = None  # filled from the problem when None
    u_range: tuple[float, float] = (-1.0, 1.0)
    decoder: str = "grow"
    exact_count: bool = False  # place exactly `budget` relays instead of at most

    def __post_init__(self):
        if self.colony_size < 4 or self.colony_size % 2:
            raise ConfigError(f"colony_size must be an even integer >= 4, got {self.colony_size}")
        if self.generations < 0:
            raise ConfigError("generations must be >= 0")
        if self.budget < 0:
            raise ConfigError("budget must be >= 0")
        if not 0 < self.lambda2_min < self.lambda2_max:
            raise ConfigError(f"need 0 < lambda2_min < lambda2_max, got {self.lambda2_min}, {self.lambda2_max}")
        if self.dims is not None and self.budget > self.dims:
            raise ConfigError(f"budget {self.budget} exceeds dims {self.dims}")
        if self.decoder not in DECODERS:
            raise ConfigError(f"decoder must be one of {DECODERS}, got {self.decoder!r}")
        lo, hi = self.u_range
        if lo > hi:
            raise ConfigError(f"u_range must be (low, high), got {self.u_range}")
        object.__setattr__(self, "u_range", (float(lo), float(hi)))

    @property
    def n_sources(self) -> int:
        return self.colony_size // 2

    def limit_for(self, dims: int) -> int:
        if self.abandonment_limit is not None:
            return int(self.abandonment_limit)
        return self.colony_size * dims // 2


@dataclass(frozen=True)
class Evaluation:
    fitness: float  # wiener when feasible, +inf otherwise
    wiener: float  # spectral Wiener of the augmented graph (inf if disconnected)
    lambda2: float
    violation: float
    n_relays: int

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0

    @property
    def key(self) -> tuple[float, float]:
        return (self.violation, self.wiener)


def decode(position: np.ndarray, budget: int) -> np.ndarray:
    """Activate the ``budget`` largest coordinates that exceed 0.5 (ties by index)."""
    x = np.asarray(position, dtype=float)
    out = decode_topk(x, budget, exact=False)
    return out[0] if x.ndim == 1 else out


def decode_topk(positions: np.ndarray, budget: int, exact: bool = False) -> np.ndarray:
    x = np.atleast_2d(np.asarray(positions, dtype=float))
    out = np.zeros(x.shape, dtype=bool)
    if budget <= 0:
        return out
    order = np.argsort(-x, axis=1, kind="stable")[:, :budget]
    rows = np.arange(x.shape[0])[:, None]
    take = np.ones(order.shape, bool) if exact else x[rows, order] > 0.5
    out[np.broadcast_to(rows, order.shape)[take], order[take]] = True
    return out


def decode_grow(
    positions: np.ndarray,
    budget: int,
    base_links: np.ndarray,
    cand_adj: np.ndarray,
    exact: bool = False,
) -> np.ndarray:
    """Connected growth decoder, vectorized over rows of ``positions``.

    Args:
        positions: ``(B, D)`` keys in [0, 1].
        budget: maximum relays to activate.
        base_links: ``(D,)`` number of backbone nodes within range of each candidate.
        cand_adj: ``(D, D)`` 0/1 candidate-to-candidate adjacency.
        exact: if False only keys above 0.5 are eligible.
    """
    x = np.atleast_2d(np.asarray(positions, dtype=float))
    b, d = x.shape
    inn = np.zeros((b, d), dtype=bool)
    links = np.broadcast_to(np.asarray(base_links, dtype=np.int32), (b, d)).copy()
    eligible = np.ones((b, d), bool) if exact else x > 0.5
    rows = np.arange(b)
    adj = np.asarray(cand_adj, dtype=np.int32)
    for _ in range(budget):
        avail = (links > 0) & ~inn & eligible
        prio = np.where(avail, x * links, -1.0)
        c = prio.argmax(axis=1)
        ok = avail[rows, c]
        if not ok.any():
            break
        r = rows[ok]
        inn[r, c[ok]] = True
        links[r] += adj[c[ok]]
    return inn


class PlacementProblem:
    """Backbone plus candidate sites, with cached evaluation of placements."""

    def __init__(self, backbone: Backbone, lambda2_min: float, lambda2_max: float, budget: int):
        self.backbone = backbone
        inst = backbone.instance
        taken = set(backbone.vertices)
        self.candidates = tuple(c for c in inst.candidates if c not in taken)
        self.lambda2_min = float(lambda2_min)
        self.lambda2_max = float(lambda2_max)
        self.budget = int(budget)
        self.n0 = backbone.n
        self.vertices = tuple(backbone.vertices) + self.candidates
        self.adj = adjacency_matrix(inst.spec, self.vertices, inst.range_r)
        self.base_links = self.adj[self.n0 :, : self.n0].sum(axis=1).astype(np.int32)
        self.cand_adj = self.adj[self.n0 :, self.n0 :]
        self._cache: dict[bytes, Evaluation] = {}
        self.n_calls = 0

        bb_vals = np.linalg.eigvalsh(laplacian_from_adjacency(self.adj[: self.n0, : self.n0]).astype(float))
        self.lambda2_backbone = float(bb_vals[1]) if self.n0 >= 2 else 0.0
        self.wiener_backbone = float(wiener_spectral_batch(bb_vals[None])[0])

    @property
    def dims(self) -> int:
        return len(self.candidates)

    def node_indices(self, alpha: np.ndarray) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=bool)
        return np.concatenate([np.arange(self.n0), self.n0 + np.flatnonzero(alpha)])

    def adjacency(self, alpha: np.ndarray) -> np.ndarray:
        idx = self.node_indices(alpha)
        return self.adj[np.ix_(idx, idx)].astype(np.int64)

    def laplacian(self, alpha: np.ndarray) -> np.ndarray:
        return laplacian_from_adjacency(self.adjacency(alpha))

    def laplacian_incremental(self, alpha: np.ndarray) -> np.ndarray:
        """``L_backbone + sum_i alpha_i A_i A_i^T`` with ``A_i`` the incidence of links added by relay i.

        Relays are added in index order; each contributes links to the backbone
        and to relays added before it.  Equals :meth:`laplacian`.
        """
        idx = self.node_indices(alpha)
        n = idx.size
        lap = np.zeros((n, n), dtype=np.int64)
        lap[: self.n0, : self.n0] = laplacian_from_adjacency(self.adj[: self.n0, : self.n0])
        for pos in range(self.n0, n):
            nbrs = [q for q in range(pos) if self.adj[idx[pos], idx[q]]]
            inc = np.zeros((n, len(nbrs)), dtype=np.int64)
            for e, q in enumerate(nbrs):
                inc[pos, e] = 1
                inc[q, e] = -1
            lap += inc @ inc.T
        return lap

    def graph(self, alpha: np.ndarray) -> NetworkGraph:
        return NetworkGraph.from_adjacency(self.adjacency(alpha))

    def relay_vertices(self, alpha: np.ndarray) -> list[int]:
        return [self.candidates[i] for i in np.flatnonzero(alpha)]

    def _score(self, vals: np.ndarray, counts: np.ndarray) -> list[Evaluation]:
        wiener = wiener_spectral_batch(vals)
        out = []
        for row, w, cnt in zip(vals, wiener, counts):
            lam2 = float(row[1]) if row.size > 1 else 0.0
            comps = int(np.count_nonzero(row <= CONNECTED_TOL))
            violation = (
                max(0, comps - 1)
                + max(0.0, self.lambda2_min - lam2)
                + max(0.0, lam2 - self.lambda2_max)
                + max(0.0, self.lambda2_backbone - lam2 - 1e-12)
                + max(0, int(cnt) - self.budget)
            )
            violation = float(violation)
            fit = float(w) if violation == 0.0 else np.inf
            out.append(Evaluation(fit, float(w), lam2, violation, int(cnt)))
        return out

    def evaluate_many(self, masks: np.ndarray) -> list[Evaluation]:
        masks = np.atleast_2d(np.asarray(masks, dtype=bool))
        self.n_calls += masks.shape[0]
        keys = [np.packbits(m).tobytes() + bytes([m.size % 8]) for m in masks]
        todo: dict[bytes, int] = {}
        for i, k in enumerate(keys):
            if k not in self._cache and k not in todo:
                todo[k] = i
        by_size: dict[int, list[bytes]] = {}
        for k, i in todo.items():
            by_size.setdefault(int(masks[i].sum()), []).append(k)
        for size, ks in by_size.items():
            idx = np.stack([self.node_indices(masks[todo[k]]) for k in ks])
            sub = self.adj[idx[:, :, None], idx[:, None, :]].astype(float)
            vals = np.linalg.eigvalsh(_batch_laplacian(sub))
            for k, ev in zip(ks, self._score(vals, np.full(len(ks), size))):
                self._cache[k] = ev
        return [self._cache[k] for k in keys]

    def evaluate(self, alpha: np.ndarray) -> Evaluation:
        return self.evaluate_many(np.asarray(alpha, dtype=bool)[None])[0]

    def fitness(self, alpha: np.ndarray) -> float:
        return self.evaluate(alpha).fitness

    @property
    def n_unique(self) -> int:
        return len(self._cache)


def _batch_laplacian(adj: np.ndarray) -> np.ndarray:
    deg = adj.sum(axis=-1)
    lap = -adj.copy()
    n = adj.shape[-1]
    lap[:, np.arange(n), np.arange(n)] += deg
    return lap


def fitness(
    alpha: np.ndarray,
    backbone: Backbone,
    inst: GridInstance | None = None,
    lambda2_min: float = 0.4,
    lambda2_max: float = 0.6,
    budget: int | None = None,
) -> float:
    """Spectral Wiener index of backbone plus activated relays; +inf outside the window."""
    alpha = np.asarray(alpha, dtype=bool)
    if inst is not None and inst is not backbone.instance:
        backbone = replace(backbone, instance=inst)
    prob = PlacementProblem(backbone, lambda2_min, lambda2_max, alpha.size if budget is None else budget)
    if alpha.size != prob.dims:
        raise DomainError(f"placement has {alpha.size} entries, problem has {prob.dims} candidates")
    return prob.fitness(alpha)


@dataclass
class Colony:
    problem: PlacementProblem
    cfg: ColonyConfig
    positions: np.ndarray
    trials: np.ndarray
    evals: list[Evaluation]
    limit: int
    slack: np.ndarray = field(default=None)
    best_position: np.ndarray = field(default=None)
    best_eval: Evaluation = field(default=None)

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def decode(self, positions: np.ndarray) -> np.ndarray:
        budget = self.cfg.budget
        if self.cfg.decoder == "topk":
            return decode_topk(positions, budget, exact=self.cfg.exact_count)
        return decode_grow(positions, budget, self.problem.base_links, self.problem.cand_adj, exact=self.cfg.exact_count)

    def evaluate(self, positions: np.ndarray) -> tuple[list[Evaluation], np.ndarray]:
        masks = self.decode(positions)
        return self.problem.evaluate_many(masks), self._slack(positions, masks)

    def _slack(self, positions: np.ndarray, masks: np.ndarray) -> np.ndarray:
        if self.cfg.exact_count:
            return np.zeros(masks.shape[0])
        x = np.atleast_2d(positions)
        return np.where(masks, 0.0, np.maximum(x - 0.5, 0.0)).sum(axis=1)

    def rank(self, i: int) -> tuple[float, float, float]:
        return (*self.evals[i].key, float(self.slack[i]))

    def memorize(self) -> None:
        i = min(range(self.size), key=lambda s: self.evals[s].key)
        if self.best_eval is None or self.evals[i].key < self.best_eval.key:
            self.best_eval = self.evals[i]
            self.best_position = self.positions[i].copy()

    @property
    def feasible_count(self) -> int:
        return sum(e.feasible for e in self.evals)


def init_colony(problem: PlacementProblem, cfg: ColonyConfig, rng: np.random.Generator) -> Colony:
    d = problem.dims
    if cfg.n_sources < 2:
        raise ConfigError("need at least two food sources")
    positions = rng.random((cfg.n_sources, d))
    col = Colony(
        problem=problem,
        cfg=cfg,
        positions=positions,
        trials=np.zeros(cfg.n_sources, dtype=np.int64),
        evals=[],
        limit=cfg.limit_for(d),
    )
    col.evals, col.slack = col.evaluate(positions)
    col.memorize()
    return col


def neighbour(x: np.ndarray, partner: np.ndarray, j: int, u: float) -> np.ndarray:
    """Move coordinate ``j`` of ``x`` by ``u * (x_j - partner_j)``, clipped to [0, 1]."""
    v = np.array(x, dtype=float, copy=True)
    v[j] = min(1.0, max(0.0, v[j] + u * (v[j] - partner[j])))
    return v


def _explore(colony: Colony, sources: np.ndarray, rng: np.random.Generator) -> None:
    """Neighbour moves for each entry of ``sources`` then greedy selection, in order."""
    m = sources.size
    if m == 0:
        return
    e, d = colony.positions.shape
    # all random draws happen here, before any evaluation
    dims = rng.integers(d, size=m)
    partners = rng.integers(e - 1, size=m)
    partners += partners >= sources
    lo, hi = colony.cfg.u_range
    u = rng.uniform(lo, hi, size=m) if hi > lo else np.full(m, lo)

    snap = colony.positions.copy()
    cand = snap[sources].copy()
    rows = np.arange(m)
    cand[rows, dims] = np.clip(cand[rows, dims] + u * (cand[rows, dims] - snap[partners, dims]), 0.0, 1.0)
    results, slack = colony.evaluate(cand)
    for t, i in enumerate(sources):
        if (*results[t].key, slack[t]) < colony.rank(i):
            colony.positions[i] = cand[t]
            colony.evals[i] = results[t]
            colony.slack[i] = slack[t]
            colony.trials[i] = 0
        else:
            colony.trials[i] += 1


def employed_phase(colony: Colony, rng: np.random.Generator) -> Colony:
    _explore(colony, np.arange(colony.size), rng)
    return colony


def selection_weights(evals: list[Evaluation]) -> np.ndarray:
    """Onlooker weights: ``1 / (1 + fit)`` for feasible sources, a tiny weight otherwise.

    If no source is feasible every source gets the same weight.
    """
    fit = np.array([e.fitness for e in evals], dtype=float)
    finite = np.isfinite(fit)
    if not finite.any():
        return np.ones(fit.size)
    w = np.zeros(fit.size)
    w[finite] = 1.0 / (1.0 + np.maximum(fit[finite], 0.0))
    w[~finite] = 1e-9 * w[finite].min()
    return w


def roulette(weights: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    return rng.choice(w.size, size=size, p=w / w.sum())


def onlooker_phase(colony: Colony, rng: np.random.Generator) -> Colony:
    picks = roulette(selection_weights(colony.evals), rng, colony.size)
    _explore(colony, picks, rng)
    return colony


def scout_phase(colony: Colony, rng: np.random.Generator) -> Colony:
    """Re-seed the most exhausted source (if past the limit); at most one per generation."""
    over = np.flatnonzero(colony.trials > colony.limit)
    if over.size == 0:
        return colony
    i = int(over[np.argmax(colony.trials[over])])
    colony.positions[i] = rng.random(colony.positions.shape[1])
    colony.trials[i] = 0
    evals, slack = colony.evaluate(colony.positions[i][None])
    colony.evals[i], colony.slack[i] = evals[0], slack[0]
    return colony


@dataclass(frozen=True)
class HistoryRow:
    generation: int
    best_fitness: float
    lambda2: float
    feasible_count: int


@dataclass
class AbcResult:
    best_alpha: np.ndarray
    best_fitness: float
    best: Evaluation
    history: list[HistoryRow]
    updated_laplacian: np.ndarray
    relay_vertices: list[int]
    evaluations: int
    unique_evaluations: int

    @property
    def feasible(self) -> bool:
        return self.best.feasible

    @property
    def lambda2(self) -> float:
        return self.best.lambda2

    @property
    def n_relays(self) -> int:
        return int(self.best_alpha.sum())


def _result(problem: PlacementProblem, alpha: np.ndarray, history: list[HistoryRow]) -> AbcResult:
    ev = problem.evaluate(alpha)
    return AbcResult(
        best_alpha=alpha.copy(),
        best_fitness=ev.fitness,
        best=ev,
        history=history,
        updated_laplacian=problem.laplacian(alpha),
        relay_vertices=problem.relay_vertices(alpha),
        evaluations=problem.n_calls,
        unique_evaluations=problem.n_unique,
    )


def optimize(
    backbone: Backbone,
    inst: GridInstance | None = None,
    cfg: ColonyConfig = ColonyConfig(),
    problem: PlacementProblem | None = None,
) -> AbcResult:
    """Run employed / onlooker / scout generations and return the best placement found.

    When no feasible placement turns up the result carries the least-violating
    one with ``feasible == False``; with ``budget == 0`` it is the bare backbone.
    """
    if inst is not None and inst is not backbone.instance:
        backbone = replace(backbone, instance=inst)
    if problem is None:
        problem = PlacementProblem(backbone, cfg.lambda2_min, cfg.lambda2_max, cfg.budget)
    if cfg.dims is not None and cfg.dims != problem.dims:
        raise ConfigError(f"config dims {cfg.dims} != {problem.dims} candidates")
    if cfg.budget > problem.dims:
        raise ConfigError(f"budget {cfg.budget} exceeds {problem.dims} candidates")
    empty = np.zeros(problem.dims, dtype=bool)
    if cfg.budget == 0:
        ev = problem.evaluate(empty)
        return _result(problem, empty, [HistoryRow(0, ev.fitness, ev.lambda2, int(ev.feasible))])

    rng = np.random.default_rng(cfg.seed)
    col = init_colony(problem, cfg, rng)
    history = [HistoryRow(0, col.best_eval.fitness, col.best_eval.lambda2, col.feasible_count)]
    for gen in range(1, cfg.generations + 1):
        employed_phase(col, rng)
        onlooker_phase(col, rng)
        scout_phase(col, rng)
        col.memorize()
        history.append(HistoryRow(gen, col.best_eval.fitness, col.best_eval.lambda2, col.feasible_count))
    alpha = col.decode(col.best_position[None])[0]
    log.debug(
        "abc done: fitness=%s lambda2=%.4f unique=%d/%d",
        col.best_eval.fitness,
        col.best_eval.lambda2,
        problem.n_unique,
        problem.n_calls,
    )
    return _result(problem, alpha, history)
