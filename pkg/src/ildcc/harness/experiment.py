"""Trial runners for the two-phase deployment and the random-densification baseline."""

from __future__ import annotations

import logging
import math
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

import numpy as np

from ..backbone import Backbone, build_backbone, fprn_count
from ..colony import HistoryRow, PlacementProblem, decode_grow, optimize
from ..energy import lifetime_report, lifetime_rounds, node_energy_per_round
from ..errors import IldccError
from ..spectral import average_distance
from ..topology import GridInstance, load_instance
from .config import ExperimentConfig
from .scenario import default_instance

log = logging.getLogger(__name__)

ILDCC, BASELINE = "ildcc", "sp3d"
_METHOD_CODE = {ILDCC: 0, BASELINE: 1}
METRICS = ("wiener", "mu", "mu_w", "mu_w_m", "e_p", "t_r", "i_r", "e_extra", "lambda2", "sprn_count")


@dataclass(frozen=True)
class TrialResult:
    method: str
    n: int
    trial: int
    seed: int
    status: str  # "ok" or "failed"
    reason: str = ""
    budget: int | None = None
    fprn_count: int | None = None
    sprn_count: int | None = None
    wiener: float | None = None
    mu: float | None = None
    mu_w: float | None = None  # hops, the normalized distance
    mu_w_m: float | None = None  # meters
    e_p: float | None = None
    i_r: float | None = None
    t_r: float | None = None
    e_extra: float | None = None
    lambda2: float | None = None
    lambda2_backbone: float | None = None
    laplacian_params: int | None = None  # N(N-1)/2 off-diagonal Laplacian entries
    wallclock: float = field(default=0.0, compare=False)
    history: tuple[HistoryRow, ...] = field(default=(), compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class AggregateRow:
    method: str
    n: int
    metric: str
    trials: int
    mean: float
    std: float  # sample standard deviation, 0 for a single trial
    min: float
    max: float


@dataclass(frozen=True)
class TrafficRow:
    n: int
    traffic: float
    mu_w: float
    e_p: float
    t_r: float


def trial_seed(master: int, n: int, trial: int, method: str = ILDCC) -> int:
    """Independent 64-bit seed per (master seed, network size, trial, method)."""
    ss = np.random.SeedSequence([master, n, trial, _METHOD_CODE[method]])
    return int(ss.generate_state(1, np.uint64)[0])


def build_scenario(cfg: ExperimentConfig) -> tuple[GridInstance, Backbone]:
    s = cfg.instance
    inst = load_instance(s.file) if s.file else default_instance(s.dims, s.cell_edge, s.range_r, s.n_candidates)
    return inst, build_backbone(inst)


def _metrics(cfg: ExperimentConfig, problem: PlacementProblem, alpha: np.ndarray) -> dict:
    ev = problem.evaluate(alpha)
    n0 = problem.n0
    k = int(alpha.sum())
    n = n0 + k
    bb = average_distance(problem.wiener_backbone, n0, cfg.delta_mu)
    out = {"sprn_count": k, "lambda2": ev.lambda2, "lambda2_backbone": problem.lambda2_backbone}
    if not math.isfinite(ev.wiener):
        return out
    dist = average_distance(ev.wiener, n, cfg.delta_mu)
    life = lifetime_report(cfg.energy, n0, k, bb.mu_w, dist.mu_w, cfg.hop_meters)
    out.update(
        wiener=ev.wiener,
        mu=dist.mu,
        mu_w=dist.mu_w,
        mu_w_m=dist.mu_w * cfg.hop_meters,
        e_p=node_energy_per_round(cfg.energy, dist.mu_w, cfg.hop_meters),
        i_r=life.i_r,
        t_r=life.t_r,
        e_extra=life.e_extra,
    )
    return out


def _run(
    cfg: ExperimentConfig,
    method: str,
    place: Callable[[PlacementProblem, int, int, int], tuple[np.ndarray | None, str, tuple]],
    scenario: tuple[GridInstance, Backbone] | None,
    on_trial: Callable[[TrialResult], None] | None,
) -> list[TrialResult]:
    _, backbone = scenario if scenario is not None else build_scenario(cfg)
    n0 = backbone.n
    out = []
    for n in cfg.network_sizes:
        budget = n - n0
        problem = None
        if 0 <= budget <= len(backbone.instance.candidates):
            problem = PlacementProblem(backbone, cfg.colony.lambda2_min, cfg.colony.lambda2_max, budget)
        for trial in range(cfg.trials):
            seed = trial_seed(cfg.seed, n, trial, method)
            base = dict(
                method=method,
                n=n,
                trial=trial,
                seed=seed,
                budget=budget,
                fprn_count=fprn_count(backbone),
                laplacian_params=n * (n - 1) // 2,
            )
            t0 = time.perf_counter()
            if problem is None:
                reason = f"network size {n} is outside [{n0}, {n0 + len(backbone.instance.candidates)}]"
                row = TrialResult(status="failed", reason=reason, **base)
            else:
                try:
                    alpha, reason, history = place(problem, n, budget, seed)
                except IldccError as exc:
                    alpha, reason, history = None, f"{type(exc).__name__}: {exc}", ()
                status = "ok" if alpha is not None and not reason else "failed"
                metrics = _metrics(cfg, problem, alpha) if alpha is not None else {}
                row = TrialResult(status=status, reason=reason, history=tuple(history), **base, **metrics)
            row = replace(row, wallclock=time.perf_counter() - t0)
            log.info("%s N=%d trial=%d %s %s", method, n, trial, row.status, row.reason)
            out.append(row)
            if on_trial is not None:
                on_trial(row)
    return out


def run_ildcc(cfg: ExperimentConfig, scenario=None, on_trial=None) -> list[TrialResult]:
    """Backbone then colony search, for every network size and trial."""

    def place(problem, n, budget, seed):
        r = optimize(problem.backbone, cfg=cfg.colony.for_network(n, budget, seed), problem=problem)
        reason = "" if r.feasible else "no placement inside the connectivity window"
        return r.best_alpha, reason, r.history

    return _run(cfg, ILDCC, place, scenario, on_trial)


def random_densification(
    problem: PlacementProblem,
    budget: int,
    lambda2_min: float,
    rng: np.random.Generator,
    max_attempts: int,
    batch: int = 250,
) -> tuple[np.ndarray | None, int]:
    """Grow random relay clusters around the backbone until one reaches ``lambda2_min``.

    Each attempt draws uniform keys and grows ``budget`` relays outward, each
    step favouring sites with more links into the current network, which
    packs relays densely next to the backbone.  Returns the first accepted
    placement (or None) and the number of attempts used.
    """
    tried = 0
    while tried < max_attempts:
        m = min(batch, max_attempts - tried)
        keys = rng.random((m, problem.dims))
        masks = decode_grow(keys, budget, problem.base_links, problem.cand_adj, exact=True)
        for i, ev in enumerate(problem.evaluate_many(masks)):
            if ev.lambda2 >= lambda2_min and math.isfinite(ev.wiener):
                return masks[i], tried + i + 1
        tried += m
    return None, tried


def run_baseline_sp3d(cfg: ExperimentConfig, scenario=None, on_trial=None) -> list[TrialResult]:
    """Same backbone, then random dense relays until the connectivity floor is met."""

    def place(problem, n, budget, seed):
        if budget == 0:
            return np.zeros(problem.dims, bool), "", ()
        rng = np.random.default_rng(seed)
        alpha, tried = random_densification(
            problem, budget, cfg.colony.lambda2_min, rng, cfg.baseline.max_attempts, cfg.baseline.batch
        )
        if alpha is None:
            return None, f"no random placement reached lambda2 >= {cfg.colony.lambda2_min} in {tried} attempts", ()
        return alpha, "", ()

    return _run(cfg, BASELINE, place, scenario, on_trial)


def _mean_std(values: list[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    if not all(map(math.isfinite, values)):
        return mean, math.nan
    return mean, statistics.stdev(values) if len(values) > 1 else 0.0


def aggregate(results: Iterable[TrialResult], metrics: tuple[str, ...] = METRICS) -> list[AggregateRow]:
    """Mean and sample standard deviation per metric, grouped by (N, method); failed trials skipped."""
    groups: dict[tuple[str, int], list[TrialResult]] = {}
    for r in results:
        if r.ok:
            groups.setdefault((r.method, r.n), []).append(r)
    out = []
    for (method, n), rows in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for metric in metrics:
            vals = [float(getattr(r, metric)) for r in rows if getattr(r, metric) is not None]
            if not vals:
                continue
            mean, std = _mean_std(vals)
            out.append(AggregateRow(method, n, metric, len(vals), mean, std, min(vals), max(vals)))
    return out


def traffic_sweep(cfg: ExperimentConfig, results: list[TrialResult] | None = None) -> list[TrafficRow]:
    """Lifetime per (N, transmitted packets per round), reusing each N's mean placement distance."""
    if results is None:
        results = run_ildcc(cfg)
    rows = []
    for n in cfg.network_sizes:
        mus = [r.mu_w for r in results if r.ok and r.method == ILDCC and r.n == n]
        if not mus:
            continue
        mu_w = statistics.fmean(mus)
        for t in cfg.traffic_levels:
            p = replace(cfg.energy, t_rate=t)
            e_p = node_energy_per_round(p, mu_w, cfg.hop_meters)
            t_r = lifetime_rounds(n * p.e_init, [e_p] * n)
            rows.append(TrafficRow(n, t, mu_w, e_p, t_r))
    return rows


def load_requirement(rows: list[TrafficRow], traffic: float = 600.0, min_rounds: float = 10.0) -> int | None:
    """Smallest N whose lifetime at ``traffic`` reaches ``min_rounds``; None if no N does."""
    ok = sorted(r.n for r in rows if r.traffic == traffic and r.t_r >= min_rounds)
    return ok[0] if ok else None
