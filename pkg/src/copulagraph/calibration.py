"""Choosing theta so a graphon hits a target assortativity or motif density.

The objective is deterministic: r_W (or a motif density) evaluated by
quadrature.  A coarse scan brackets the target; a bracket is refined by
bisection, otherwise the absolute residual is minimised by golden-section
search around the best scan point.  Sampling only enters in
:func:`verify_by_sampling`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .copulas import Family
from .densities import DEFAULT_ORDER, density_report, theoretical_assortativity
from .errors import UndefinedError, UsageError
from .graphons import Graphon, GraphonTemplate, parse_template
from .metrics import empirical_assortativity
from .sampler import sample_batch

# Keep this far away from open parameter boundaries.
BOUNDARY_PAD = 1e-6

DEFAULT_BOUNDS = {
    Family.CLAYTON: (-1.0, 10.0),
    Family.FRANK: (-10.0, 10.0),
    Family.GUMBEL: (1.0, 10.0),
    Family.JOE: (1.0, 10.0),
}

ASSORTATIVITY = "assortativity"
MOTIF_DENSITY = "motif_density"

CONVERGED = "converged"
BOUNDARY = "boundary"
UNREACHABLE = "unreachable"


def _in_domain(fam: Family, theta: float) -> bool:
    if fam is Family.CLAYTON:
        return theta >= -1.0
    if fam is Family.FRANK:
        return math.isfinite(theta)
    return theta >= 1.0


@dataclass(frozen=True)
class CalibrationProblem:
    template: GraphonTemplate
    target_value: float
    target_kind: str = ASSORTATIVITY
    motif: str | None = None
    n: int = 1000
    theta_bounds: tuple[float, float] | None = None
    lag: float = 0.0
    grid_order: int = DEFAULT_ORDER

    def __post_init__(self):
        if isinstance(self.template, str):
            object.__setattr__(self, "template", parse_template(self.template))
        t = self.template
        if t.free_slots == 0:
            raise UsageError(f"template {t.descriptor!r} has no free parameter '?'")
        if self.target_kind == ASSORTATIVITY:
            if not -1.0 < self.target_value < 1.0:
                raise UsageError(f"target r must lie in (-1, 1), got {self.target_value}")
        elif self.target_kind == MOTIF_DENSITY:
            if self.motif is None or self.motif.lower() not in ("p1", "p2", "p3", "c3", "s3"):
                raise UsageError(f"motif must be one of P1, P2, P3, C3, S3, got {self.motif!r}")
            if not 0.0 < self.target_value < 1.0:
                raise UsageError(f"target density must lie in (0, 1), got {self.target_value}")
        else:
            raise UsageError(f"unknown target kind {self.target_kind!r}")
        if self.n < 4:
            raise UsageError(f"n must be at least 4, got {self.n}")

        fams = t.free_families
        if self.theta_bounds is None:
            lo = max(DEFAULT_BOUNDS[f][0] + self.lag * k for k, f in enumerate(fams))
            hi = min(DEFAULT_BOUNDS[f][1] for f in fams)
            object.__setattr__(self, "theta_bounds", (lo, hi))
        lo, hi = map(float, self.theta_bounds)
        if not lo < hi:
            raise UsageError(f"invalid theta bounds ({lo}, {hi})")
        for k, fam in enumerate(fams):
            for th in (lo - self.lag * k, hi - self.lag * k):
                if not _in_domain(fam, th):
                    raise UsageError(f"theta bound {th} outside the {fam.value} domain")
        object.__setattr__(self, "theta_bounds", (lo, hi))

    def graphon(self, theta: float) -> Graphon:
        return self.template.bind(self._pad(theta), self.lag)

    def _pad(self, theta: float) -> float:
        # theta = 0 is excluded for Clayton and Frank; step inside the open boundary
        for k, fam in enumerate(self.template.free_families):
            if fam in (Family.CLAYTON, Family.FRANK) and abs(theta - self.lag * k) < BOUNDARY_PAD:
                return self.lag * k + BOUNDARY_PAD
        return theta

    def objective(self, theta: float) -> float:
        rep = density_report(self.graphon(theta), self.grid_order)
        if self.target_kind == ASSORTATIVITY:
            return theoretical_assortativity(rep, self.n)
        return rep.motif(self.motif)


@dataclass(frozen=True)
class ObjectiveCurve:
    thetas: np.ndarray
    values: np.ndarray
    monotone: str  # "increasing", "decreasing" or "none"

    def csv(self) -> str:
        rows = ["theta,value"]
        rows += [f"{t:.10g},{v:.10g}" for t, v in zip(self.thetas, self.values)]
        return "\n".join(rows) + "\n"


def _monotonicity(values: np.ndarray) -> str:
    d = np.diff(values[np.isfinite(values)])
    if d.size == 0:
        return "none"
    if np.all(d >= -1e-12):
        return "increasing"
    if np.all(d <= 1e-12):
        return "decreasing"
    return "none"


def scan(problem: CalibrationProblem, grid_points: int = 32, spacing: str = "linear") -> ObjectiveCurve:
    """Objective on a uniform (or log-spaced) theta grid across the bounds."""
    if grid_points < 3:
        raise UsageError(f"grid_points must be at least 3, got {grid_points}")
    lo, hi = problem.theta_bounds
    if spacing == "log":
        if lo <= 0:
            raise UsageError("log spacing needs positive bounds")
        thetas = np.geomspace(lo, hi, grid_points)
    else:
        thetas = np.linspace(lo, hi, grid_points)
    values = np.empty(grid_points)
    for i, th in enumerate(thetas):
        try:
            values[i] = problem.objective(float(th))
        except UndefinedError:
            values[i] = np.nan
    return ObjectiveCurve(thetas, values, _monotonicity(values))


@dataclass(frozen=True)
class CalibrationResult:
    theta_star: float
    achieved_value: float
    target_value: float
    residual: float
    status: str
    objective_curve: ObjectiveCurve = field(repr=False)
    iterations: int = 0

    def as_text(self) -> str:
        keys = ("theta_star", "achieved_value", "target_value", "residual", "status", "iterations")
        out = []
        for k in keys:
            v = getattr(self, k)
            out.append(f"{k}={v:.10g}" if isinstance(v, float) else f"{k}={v}")
        out.append(f"monotone={self.objective_curve.monotone}")
        return "\n".join(out) + "\n"


def _bisect(f, a, b, fa, target, tolerance, max_iters):
    """Root of f - target on [a, b] with f(a) - target and f(b) - target of opposite sign."""
    it = 0
    best = (a, fa)
    ga = fa - target
    while it < max_iters:
        it += 1
        mid = 0.5 * (a + b)
        fm = f(mid)
        gm = fm - target
        if abs(gm) < abs(best[1] - target):
            best = (mid, fm)
        if gm == 0 or (abs(gm) <= 1e-3 * tolerance) or (b - a) <= 1e-12 * max(1.0, abs(mid)):
            break
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    return best[0], best[1], it


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(g, a, b, max_iters, xtol=1e-10):
    """Minimise g on [a, b] by golden-section search; returns (x, g(x), iterations)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    it = 0
    while it < max_iters and (b - a) > xtol * max(1.0, abs(a) + abs(b)):
        it += 1
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
    return (c, gc, it) if gc < gd else (d, gd, it)


def solve(problem: CalibrationProblem, tolerance: float = 1e-4, max_iters: int = 100,
          grid_points: int = 32) -> CalibrationResult:
    if not tolerance > 0:
        raise UsageError(f"tolerance must be positive, got {tolerance}")
    curve = scan(problem, grid_points)
    target = problem.target_value
    th, vals = curve.thetas, curve.values
    ok = np.isfinite(vals)
    if not ok.any():
        raise UndefinedError("objective undefined across the whole theta range")

    def f(x):
        try:
            return problem.objective(float(x))
        except UndefinedError:
            return math.nan

    resid = np.where(ok, np.abs(vals - target), np.inf)
    inside = vals[ok].min() <= target <= vals[ok].max()

    bracket = None
    for i in range(len(th) - 1):
        if ok[i] and ok[i + 1] and (vals[i] - target) * (vals[i + 1] - target) <= 0:
            bracket = i
            break

    iterations = 0
    if bracket is not None:
        i = bracket
        if vals[i] == target:
            x, fx = float(th[i]), float(vals[i])
        elif vals[i + 1] == target:
            x, fx = float(th[i + 1]), float(vals[i + 1])
        else:
            x, fx, iterations = _bisect(f, float(th[i]), float(th[i + 1]), float(vals[i]),
                                        target, tolerance, max_iters)
    else:
        i = int(np.argmin(resid))
        a = float(th[max(i - 1, 0)])
        b = float(th[min(i + 1, len(th) - 1)])
        def miss(z):
            v = f(z)
            return abs(v - target) if np.isfinite(v) else math.inf

        x, _, iterations = _golden(miss, a, b, max_iters)
        fx = f(x)
        if not np.isfinite(fx) or abs(fx - target) > resid[i]:
            x, fx = float(th[i]), float(vals[i])

    residual = abs(fx - target)
    lo, hi = problem.theta_bounds
    at_bound = min(abs(x - lo), abs(x - hi)) <= 1e-9 * max(1.0, abs(lo), abs(hi))
    if residual <= tolerance and (inside or bracket is not None) and not (at_bound and not inside):
        status = CONVERGED
    elif resid.min() > 10 * tolerance:
        status = UNREACHABLE
    elif at_bound or not inside:
        status = BOUNDARY
    else:
        status = UNREACHABLE
    return CalibrationResult(float(x), float(fx), float(target), float(residual), status,
                             curve, iterations)


@dataclass(frozen=True)
class VerificationRecord:
    theta: float | None
    target_value: float
    mean_r: float
    min_r: float
    max_r: float
    gap: float
    reps: int
    undefined: int

    def as_text(self) -> str:
        keys = ("mean_r", "min_r", "max_r", "gap", "reps", "undefined")
        out = []
        for k in keys:
            v = getattr(self, k)
            out.append(f"verify_{k}={v:.10g}" if isinstance(v, float) else f"verify_{k}={v}")
        return "\n".join(out) + "\n"


def verify_graphon(graphon: Graphon, n: int, target: float, reps: int, base_seed: int,
                   theta: float | None = None) -> VerificationRecord:
    if reps < 1:
        raise UsageError(f"reps must be at least 1, got {reps}")
    rs = []
    undefined = 0
    for g in sample_batch(graphon, n, base_seed, reps):
        try:
            rs.append(empirical_assortativity(g))
        except UndefinedError:
            undefined += 1
    if not rs:
        raise UndefinedError("assortativity undefined in every repetition")
    mean = float(np.mean(rs))
    return VerificationRecord(theta, target, mean, float(min(rs)), float(max(rs)),
                              abs(mean - target), reps, undefined)


def verify_by_sampling(result: CalibrationResult, problem: CalibrationProblem,
                       reps: int = 10, base_seed: int = 0) -> VerificationRecord:
    """Sample graphs at theta* and compare their mean empirical r with the target."""
    if result.status == UNREACHABLE:
        raise UsageError("cannot verify an unreachable calibration")
    if problem.target_kind != ASSORTATIVITY:
        raise UsageError("sampling verification compares assortativity only")
    return verify_graphon(problem.graphon(result.theta_star), problem.n,
                          problem.target_value, reps, base_seed, theta=result.theta_star)


__all__ = [
    "CalibrationProblem", "CalibrationResult", "ObjectiveCurve", "VerificationRecord",
    "scan", "solve", "verify_by_sampling", "verify_graphon",
]
