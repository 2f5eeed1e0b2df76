"""Homomorphism densities of graphons by Gauss-Legendre quadrature.

Every density of a one-component graphon is computed from one kernel matrix
``K[a, b] = W(x_a, x_b)`` on a tensor Gauss-Legendre grid mapped to [0, 1]:

    lambda = K @ w                      degree operator at the nodes
    t(P1) = w . lambda                  edge density
    t(P2) = w . lambda**2               2-path (cherry) density
    t(P3) = (w lambda)' K (w lambda)    3-path density
    t(S3) = w . lambda**3               3-star density
    t(C3) = trace(B @ B @ B),  B = sqrt(w) K sqrt(w)

Tensor graphons multiply component densities motif by motif; the direct
computation on the product grid is available for cross-checking.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedError, UsageError
from .graphons import Graphon

DEFAULT_ORDER = 128
MOTIFS = ("p1", "p2", "p3", "c3", "s3")


@dataclass(frozen=True)
class QuadratureGrid:
    order: int
    nodes: np.ndarray
    weights: np.ndarray


@functools.lru_cache(maxsize=16)
def quadrature_grid(order: int) -> QuadratureGrid:
    """Gauss-Legendre rule on [0, 1] with weights summing to one."""
    if order < 1:
        raise UsageError(f"grid order must be positive, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureGrid(order, nodes, weights)


@dataclass(frozen=True)
class DensityReport:
    t_p1: float
    t_p2: float
    t_p3: float
    t_c3: float
    t_s3: float
    graphon_descriptor: str = ""
    grid_order: int = 0

    def motif(self, name: str) -> float:
        return getattr(self, "t_" + name.lower())

    def as_tuple(self):
        return tuple(self.motif(m) for m in MOTIFS)

    CSV_FIELDS = ("descriptor", "grid_order", "t_p1", "t_p2", "t_p3", "t_c3", "t_s3", "r_w")

    def csv_row(self, n: int) -> str:
        try:
            r = f"{theoretical_assortativity(self, n):.10g}"
        except UndefinedError:
            r = "undefined"
        vals = [f"{v:.10g}" for v in self.as_tuple()]
        return ",".join([self.graphon_descriptor, str(self.grid_order), *vals, r])


def _component_kernel(comp, order: int) -> tuple[np.ndarray, np.ndarray]:
    grid = quadrature_grid(order)
    x = grid.nodes
    K = np.asarray(comp.kernel(x[:, None], x[None, :]), dtype=float)
    return K, grid.weights


def _moments(K: np.ndarray, w: np.ndarray) -> tuple[float, ...]:
    lam = K @ w
    t1 = float(w @ lam)
    t2 = float(w @ lam**2)
    wl = w * lam
    t3 = float(wl @ K @ wl)
    s3 = float(w @ lam**3)
    sw = np.sqrt(w)
    B = sw[:, None] * K * sw[None, :]
    c3 = float(np.einsum("ij,ji->", B @ B, B))
    return t1, t2, t3, c3, s3


def _component_report(comp, order: int) -> DensityReport:
    K, w = _component_kernel(comp, order)
    return DensityReport(*_moments(K, w), graphon_descriptor=comp.descriptor, grid_order=order)


def density_report(graphon: Graphon, grid_order: int = DEFAULT_ORDER) -> DensityReport:
    """All five motif densities of ``graphon`` on a grid of ``grid_order`` nodes per axis."""
    if grid_order < 16:
        raise UsageError(f"grid_order must be at least 16, got {grid_order}")
    reports = [_component_report(c, grid_order) for c in graphon.components]
    out = tensor_density(reports)
    return DensityReport(*out.as_tuple(), graphon_descriptor=graphon.descriptor,
                         grid_order=grid_order)


def direct_tensor_report(graphon: Graphon, grid_order: int = 32) -> DensityReport:
    """Densities of a tensor graphon on the full product grid over [0,1]^s.

    Costs ``grid_order ** (2 s)`` kernel entries, so only small orders are
    practical; used to check the product rule rather than in production.
    """
    grid = quadrature_grid(grid_order)
    s = graphon.latent_dim
    mesh = np.meshgrid(*([grid.nodes] * s), indexing="ij")
    X = np.column_stack([m.ravel() for m in mesh])
    wmesh = np.meshgrid(*([grid.weights] * s), indexing="ij")
    w = np.prod(np.column_stack([m.ravel() for m in wmesh]), axis=1)
    K = graphon.kernel_block(X, X)
    return DensityReport(*_moments(K, w), graphon_descriptor=graphon.descriptor,
                         grid_order=grid_order)


def tensor_density(reports) -> DensityReport:
    """Motif-wise product of component densities, t(F, U x W) = t(F, U) t(F, W)."""
    reports = list(reports)
    if not reports:
        raise UsageError("tensor_density needs at least one report")
    if len(reports) == 1:
        return reports[0]
    vals = np.prod([r.as_tuple() for r in reports], axis=0)
    return DensityReport(*map(float, vals),
                         graphon_descriptor="*".join(r.graphon_descriptor for r in reports),
                         grid_order=min(r.grid_order for r in reports))


def degree_operator(graphon: Graphon, u, grid_order: int = DEFAULT_ORDER):
    """lambda(u) = integral of W(u, v) dv; a product over coordinates for tensors."""
    grid = quadrature_grid(grid_order)
    s = graphon.latent_dim
    u = np.asarray(u, dtype=float)
    if s > 1 and (u.ndim == 0 or u.shape[-1] != s):
        raise UsageError(f"expected latent vectors of length {s}")
    out = 1.0
    for j, comp in enumerate(graphon.components):
        uj = u if s == 1 else u[..., j]
        K = comp.kernel(uj[..., None], grid.nodes)
        out = out * (np.asarray(K) @ grid.weights)
    if np.ndim(out) == 0:
        return float(out)
    return out


def cumulative_degree_distribution(graphon: Graphon, u, grid_order: int = DEFAULT_ORDER):
    """D_W(u) = integral of lambda over [0, u] (coordinate-wise box for tensors)."""
    grid = quadrature_grid(grid_order)
    s = graphon.latent_dim
    u = np.asarray(u, dtype=float)
    if s > 1 and (u.ndim == 0 or u.shape[-1] != s):
        raise UsageError(f"expected latent vectors of length {s}")
    out = 1.0
    for j, comp in enumerate(graphon.components):
        uj = u if s == 1 else u[..., j]
        t = uj[..., None] * grid.nodes  # nodes of the rule mapped to [0, u]
        lam = np.asarray(comp.kernel(t[..., None], grid.nodes)) @ grid.weights
        out = out * (uj * (lam @ grid.weights))
    if np.ndim(out) == 0:
        return float(out)
    return out


def t_path(graphon: Graphon, k: int, grid_order: int = DEFAULT_ORDER) -> float:
    if k not in (1, 2, 3):
        raise UsageError(f"path densities are available for k in 1..3, got {k}")
    rep = density_report(graphon, grid_order)
    return (rep.t_p1, rep.t_p2, rep.t_p3)[k - 1]


def t_star(graphon: Graphon, k: int, grid_order: int = DEFAULT_ORDER) -> float:
    """t(S_k, W) = integral of lambda(x)**k."""
    if k < 1:
        raise UsageError(f"star size must be positive, got {k}")
    grid = quadrature_grid(grid_order)
    out = 1.0
    for comp in graphon.components:
        K, w = _component_kernel(comp, grid_order)
        out *= float(grid.weights @ (K @ w) ** k)
    return out


def t_cycle3(graphon: Graphon, grid_order: int = DEFAULT_ORDER) -> float:
    return density_report(graphon, grid_order).t_c3


def assortativity_from_densities(t_p1, t_p2, t_p3, t_c3, t_s3, n: int) -> float:
    """Degree assortativity on ``n`` nodes from labelled motif densities.

    With labelled injective counts inj(P1) = 2|P1|, inj(P2) = 2|P2|,
    inj(P3) = 2|P3|, inj(S3) = 6|S3| and the triangle homomorphism density
    6|C3| / n^3, substituting into the count form of r gives

        r = [(n-3) t_P3 + n^2 t_C3 / ((n-1)(n-2)) - (n-2) t_P2^2 / t_P1]
            / [(n-3) t_S3 + t_P2 - (n-2) t_P2^2 / t_P1]

    which reproduces Newman's r exactly when fed the densities of a graph.
    """
    if n < 4:
        raise UsageError(f"n must be at least 4, got {n}")
    if t_p1 == 0:
        raise UndefinedError("assortativity undefined: zero edge density")
    base = (n - 2) * t_p2 * t_p2 / t_p1
    num = (n - 3) * t_p3 + n * n * t_c3 / ((n - 1) * (n - 2)) - base
    den = (n - 3) * t_s3 + t_p2 - base
    if den == 0 or abs(den) <= 1e-15 * max(abs(base), abs(t_p2), 1e-300):
        raise UndefinedError("assortativity undefined: zero degree variance")
    return num / den


def theoretical_assortativity(report: DensityReport, n: int) -> float:
    """r_W for a W-random graph on ``n`` nodes."""
    return assortativity_from_densities(report.t_p1, report.t_p2, report.t_p3,
                                        report.t_c3, report.t_s3, n)


def graph_theoretical_assortativity(counts) -> float:
    """The same formula evaluated on a finite graph's empirical densities."""
    from .metrics import empirical_density

    n = counts.n
    t = {m: empirical_density(counts, n, m) for m in ("P1", "P2", "P3", "C3", "S3")}
    return assortativity_from_densities(t["P1"], t["P2"], t["P3"], t["C3"], t["S3"], n)


__all__ = [
    "DEFAULT_ORDER", "DensityReport", "QuadratureGrid", "quadrature_grid", "density_report",
    "direct_tensor_report", "tensor_density", "degree_operator",
    "cumulative_degree_distribution", "t_path", "t_star", "t_cycle3",
    "assortativity_from_densities", "theoretical_assortativity",
    "graph_theoretical_assortativity",
]
