"""Theta sweeps: sample repeated graphs along a parameter grid and aggregate r.

Repetition ``k`` uses the same seed at every theta (common random numbers),
so each row equals ``sample_batch(graphon(theta), n, base_seed, reps)`` and
neighbouring rows differ only through theta.
"""

from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedError, UsageError
from .graphons import GraphonTemplate, parse_template
from .metrics import clustering_coefficient, empirical_assortativity, subgraph_counts
from .sampler import derive_seed, sample

CSV_FIELDS = ("theta", "mean_r", "min_r", "max_r", "mean_C", "reps", "undefined", "lag")


@dataclass(frozen=True)
class SweepConfig:
    graphon_template: GraphonTemplate
    theta_grid: tuple[float, ...]
    n: int = 1000
    reps: int = 10
    base_seed: int = 0
    lag: float = 0.0

    def __post_init__(self):
        if isinstance(self.graphon_template, str):
            object.__setattr__(self, "graphon_template", parse_template(self.graphon_template))
        object.__setattr__(self, "theta_grid", tuple(float(t) for t in self.theta_grid))
        if self.graphon_template.free_slots == 0:
            raise UsageError("sweep template needs a free parameter '?'")
        if self.reps < 1:
            raise UsageError(f"reps must be at least 1, got {self.reps}")
        if self.n < 1:
            raise UsageError(f"n must be positive, got {self.n}")
        if not self.theta_grid:
            raise UsageError("empty theta grid")
        for th in self.theta_grid:
            self.graphon_template.bind(th, self.lag)  # raises DomainError if outside


@dataclass(frozen=True)
class SweepRow:
    theta: float
    mean_r: float | None
    min_r: float | None
    max_r: float | None
    mean_C: float | None
    reps: int
    undefined: int
    lag: float

    def values(self):
        return tuple(getattr(self, f) for f in CSV_FIELDS)


def _cell(graphon, n: int, seed: int):
    g = sample(graphon, n, seed)
    counts = subgraph_counts(g)
    try:
        r = empirical_assortativity(g)
    except UndefinedError:
        r = None
    try:
        c = clustering_coefficient(counts)
    except UndefinedError:
        c = None
    return r, c


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[SweepRow]:
    """One aggregate row per theta; output is independent of ``jobs``."""
    cells = []
    for t_idx, th in enumerate(config.theta_grid):
        graphon = config.graphon_template.bind(th, config.lag)
        for k in range(config.reps):
            cells.append((graphon, config.n, derive_seed(config.base_seed, k)))

    if jobs > 1:
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell, *zip(*cells)))
    else:
        results = [_cell(*c) for c in cells]

    rows = []
    for t_idx, th in enumerate(config.theta_grid):
        chunk = results[t_idx * config.reps:(t_idx + 1) * config.reps]
        rs = [r for r, _ in chunk if r is not None]
        cs = [c for _, c in chunk if c is not None]
        rows.append(SweepRow(
            theta=th,
            mean_r=float(np.mean(rs)) if rs else None,
            min_r=float(min(rs)) if rs else None,
            max_r=float(max(rs)) if rs else None,
            mean_C=float(np.mean(cs)) if cs else None,
            reps=config.reps,
            undefined=config.reps - len(rs),
            lag=config.lag,
        ))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_FIELDS)]
    lines += [",".join(_fmt(v) for v in row.values()) for row in rows]
    return "\n".join(lines) + "\n"


def parse_theta_grid(text: str) -> tuple[float, ...]:
    """``start:stop:count`` (inclusive, evenly spaced) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return tuple(float(x) for x in np.linspace(start, stop, count))
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad theta grid {text!r}; use start:stop:count or a,b,c") from None
