"""Tabular datasets behind the four reference figures.

Each builder returns a mapping ``table name -> (headers, rows)`` so the CLI
and the HTTP service can serialize the same data as CSV or JSON.  CSV headers
are schema-stable and numbers are written with 12 significant digits.

Tables produced:

* ``figure1``: long-form dual-envelope curves lam*K + V_lam(x) at zero
  transaction cost, one row per (x, lam), with the pointwise envelope and its
  argmin repeated per x.
* ``figure2``: constrained value V(x, K) and multiplier surfaces on an
  (x, K) grid, with the solution status per cell.
* ``figure3``: barrier slope curves x -> zeta_lam(x) for lam = 1..9 plus a
  thresholds table (a_lam, c1, c2) at transaction cost delta.
* ``figure4``: figure1 analogue with transaction cost, plus a comparison of
  the optimal multipliers with and without the cost.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import constrained as cs
from . import dividends as dv
from .errors import DomainError
from .scale import ScaleEngine

Table = tuple[list[str], list[list[float]]]
Dataset = dict[str, Table]

DEFAULT_K = 2.7
DEFAULT_DELTA = 0.05


def _default_x_grid() -> np.ndarray:
    return np.round(np.arange(0.0, 10.0 + 1e-9, 0.1), 10)


def figure1_dataset(engine: ScaleEngine, K: float = DEFAULT_K,
                    x_grid: Iterable[float] | None = None,
                    lambda_grid: Iterable[float] | None = None,
                    delta: float = 0.0) -> Dataset:
    """Dual-envelope curves; ``delta > 0`` gives the figure4 analogue."""
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K}")
    xs = _default_x_grid() if x_grid is None else np.asarray(list(x_grid), float)
    lams = cs.paper_lambda_grid() if lambda_grid is None else list(lambda_grid)
    table = cs.dual_envelope(engine, xs, K, lams, delta=delta)
    rows = []
    for i, lam in enumerate(table.lambdas):
        for j, x in enumerate(table.x):
            rows.append([x, lam, table.curves[i, j],
                         table.envelope[j], table.argmin_lambda[j]])
    headers = ["x", "lambda", "curve_value", "envelope", "argmin_lambda"]
    return {"envelope": (headers, rows)}


def figure2_dataset(engine: ScaleEngine,
                    x_grid: Iterable[float] | None = None,
                    K_grid: Iterable[float] | None = None,
                    delta: float = 0.0) -> Dataset:
    """Constrained value and multiplier surfaces over (x, K)."""
    xs = (np.round(np.arange(0.5, 6.0 + 1e-9, 0.25), 10)
          if x_grid is None else np.asarray(list(x_grid), float))
    Ks = (np.round(np.arange(1.0, 5.0 + 1e-9, 0.25), 10)
          if K_grid is None else np.asarray(list(K_grid), float))
    rows = []
    for x in xs:
        for K in Ks:
            sol = cs.solve(engine, float(x), float(K), delta=delta)
            lam = sol.lambda_star if sol.lambda_star is not None else math.nan
            rows.append([float(x), float(K), sol.value, lam, sol.status.value])
    headers = ["x", "K", "value", "lambda_star", "status"]
    return {"surface": (headers, rows)}


def figure3_dataset(engine: ScaleEngine, delta: float = DEFAULT_DELTA,
                    lambdas: Sequence[float] = tuple(range(1, 10)),
                    x_grid: Iterable[float] | None = None) -> Dataset:
    """Slope curves zeta_lam and the optimal threshold triple per lam."""
    xs = (np.round(np.arange(0.05, 10.0 + 1e-9, 0.05), 10)
          if x_grid is None else np.asarray(list(x_grid), float))
    if np.any(xs <= 0):
        raise DomainError("zeta curves require x > 0 (the limit at 0 can be -inf)")
    zeta_rows = []
    for lam in lambdas:
        for x in xs:
            zeta_rows.append([float(x), float(lam), dv.zeta(engine, float(lam), float(x))])
    th_rows = []
    for lam in lambdas:
        lam = float(lam)
        a = dv.optimal_barrier(engine, lam)
        th = dv.optimal_thresholds(engine, lam, delta)
        th_rows.append([lam, a, th.c1, th.c2, th.g_max])
    return {
        "zeta": (["x", "lambda", "zeta"], zeta_rows),
        "thresholds": (["lambda", "a_lambda", "c1", "c2", "g_max"], th_rows),
    }


def figure4_dataset(engine: ScaleEngine, K: float = DEFAULT_K,
                    delta: float = DEFAULT_DELTA,
                    x_grid: Iterable[float] | None = None,
                    lambda_grid: Iterable[float] | None = None,
                    comparison_x: Sequence[float] = (2.0, 3.0, 4.0, 5.0, 6.0)) -> Dataset:
    """Figure1 analogue with transaction cost plus multiplier comparison."""
    if delta <= 0:
        raise DomainError(f"figure4 requires delta > 0, got {delta}")
    out = figure1_dataset(engine, K=K, x_grid=x_grid,
                          lambda_grid=lambda_grid, delta=delta)
    cmp_rows = []
    for x in comparison_x:
        s0 = cs.solve(engine, float(x), K, delta=0.0)
        sd = cs.solve(engine, float(x), K, delta=delta)
        cmp_rows.append([float(x),
                         s0.lambda_star if s0.lambda_star is not None else math.nan,
                         sd.lambda_star if sd.lambda_star is not None else math.nan])
    out["lambda_comparison"] = (
        ["x", "lambda_star_no_cost", "lambda_star_with_cost"], cmp_rows)
    return out


def build_figure(engine: ScaleEngine, figure_id: int, *, K: float = DEFAULT_K,
                 delta: float | None = None,
                 x_grid: Iterable[float] | None = None,
                 lambda_grid: Iterable[float] | None = None) -> Dataset:
    """Dispatch by figure number with the documented defaults."""
    if figure_id == 1:
        return figure1_dataset(engine, K=K, x_grid=x_grid, lambda_grid=lambda_grid,
                               delta=0.0 if delta is None else delta)
    if figure_id == 2:
        return figure2_dataset(engine, x_grid=x_grid,
                               delta=0.0 if delta is None else delta)
    if figure_id == 3:
        return figure3_dataset(engine, delta=DEFAULT_DELTA if delta is None else delta,
                               x_grid=x_grid)
    if figure_id == 4:
        return figure4_dataset(engine, K=K,
                               delta=DEFAULT_DELTA if delta is None else delta,
                               x_grid=x_grid, lambda_grid=lambda_grid)
    raise DomainError(f"figure_id must be 1..4, got {figure_id}")


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{v:.12g}"


def write_dataset(dataset: Dataset, out: str | Path, fmt: str = "csv",
                  stem: str = "figure") -> list[Path]:
    """Write every table of a dataset under ``out``.

    A single-table dataset with an ``out`` path ending in .csv/.json is
    written to that exact file; otherwise ``out`` is treated as a directory
    and files are named ``<stem>_<table>.<fmt>``.
    """
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    out = Path(out)
    written: list[Path] = []
    single_file = out.suffix.lower() in (".csv", ".json") and len(dataset) == 1
    if not single_file:
        out.mkdir(parents=True, exist_ok=True)
    for name, (headers, rows) in dataset.items():
        path = out if single_file else out / f"{stem}_{name}.{fmt}"
        if fmt == "csv":
            with open(path, "w", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(headers)
                for row in rows:
                    writer.writerow([_fmt(v) for v in row])
        else:
            payload = {"headers": headers,
                       "rows": [[v if isinstance(v, str) else float(v) for v in row]
                                for row in rows]}
            with open(path, "w") as f:
                json.dump(payload, f, indent=2)
                f.write("\n")
        written.append(path)
    return written
