"""CSV and figure output for an experiment run.

Files written by :func:`emit_outputs`:

``results.csv``
    one row per trial, columns as :class:`TrialResult` (floats in round-trip form,
    empty cell for a missing value).
``aggregate.csv``
    method, n, metric, trials, mean, std, min, max over successful trials.
``convergence_<N>_<trial>.csv``
    generation, best_fitness, lambda2, feasible_count for every colony run.
``plotdata_<metric>_vs_n.csv``
    method, n, trials, mean, std for mu_w, t_r, e_p and lambda2.
``plotdata_t_r_vs_load.csv``
    n, traffic, mu_w, e_p, t_r from the traffic sweep.
``timing.csv``
    method, n, trial, wallclock seconds.  Kept apart so that ``results.csv``
    is byte-identical between runs with the same seed.
``fig_*.png``
    the matching figures.
"""

from __future__ import annotations

import csv
from dataclasses import astuple, fields
from pathlib import Path
from typing import Iterable, Sequence

from ..colony import HistoryRow
from .experiment import ILDCC, AggregateRow, TrafficRow, TrialResult, aggregate

RESULT_COLUMNS = tuple(f.name for f in fields(TrialResult) if f.name not in ("wallclock", "history"))
_INT = {"n", "trial", "seed", "budget", "fprn_count", "sprn_count", "laplacian_params"}
_STR = {"method", "status", "reason"}
VS_N = ("mu_w", "t_r", "e_p", "lambda2")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return path


def _parse(name: str, text: str):
    if name in _STR:
        return text
    if text == "":
        return None
    return int(text) if name in _INT else float(text)


def write_results(results: Sequence[TrialResult], path: Path) -> Path:
    return _write(path, RESULT_COLUMNS, ([getattr(r, c) for c in RESULT_COLUMNS] for r in results))


def read_results(path: str | Path) -> list[TrialResult]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [TrialResult(**{k: _parse(k, v) for k, v in row.items()}) for row in reader]


def write_aggregate(rows: Sequence[AggregateRow], path: Path) -> Path:
    return _write(path, [f.name for f in fields(AggregateRow)], (astuple(r) for r in rows))


def write_convergence(history: Sequence[HistoryRow], path: Path) -> Path:
    return _write(path, [f.name for f in fields(HistoryRow)], (astuple(h) for h in history))


def write_traffic(rows: Sequence[TrafficRow], path: Path) -> Path:
    return _write(path, [f.name for f in fields(TrafficRow)], (astuple(r) for r in rows))


def emit_outputs(
    results: Sequence[TrialResult],
    out_dir: str | Path,
    traffic: Sequence[TrafficRow] = (),
    figures: bool = True,
) -> list[Path]:
    """Write every output file into ``out_dir`` (created if needed) and return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    agg = aggregate(results)
    written = [write_results(results, out / "results.csv"), write_aggregate(agg, out / "aggregate.csv")]
    for r in results:
        if r.method == ILDCC and r.history:
            written.append(write_convergence(r.history, out / f"convergence_{r.n}_{r.trial}.csv"))
    for metric in VS_N:
        rows = [(a.method, a.n, a.trials, a.mean, a.std) for a in agg if a.metric == metric]
        written.append(_write(out / f"plotdata_{metric}_vs_n.csv", ("method", "n", "trials", "mean", "std"), rows))
    written.append(write_traffic(traffic, out / "plotdata_t_r_vs_load.csv"))
    written.append(
        _write(out / "timing.csv", ("method", "n", "trial", "wallclock"), ((r.method, r.n, r.trial, r.wallclock) for r in results))
    )
    if figures:
        from .plotting import render_figures

        written.extend(render_figures(agg, traffic, results, out))
    return written
