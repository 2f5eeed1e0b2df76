"""Subgraph counts, mixing statistics and degree assortativity of simple graphs.

Counts are exact Python integers.  The two assortativity routes (edge-end
Pearson correlation and the ratio of motif counts) are evaluated with integer
arithmetic up to the final division, so they agree to rounding on any graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import SizeError, UndefinedError
from .sampler import SampledGraph

# Above this node count triangles are counted with sparse products.
_DENSE_LIMIT = 4000


@dataclass(frozen=True)
class SubgraphCounts:
    n: int
    p1: int
    p2: int
    p3: int
    c3: int
    s3: int

    def as_dict(self):
        return {"n": self.n, "p1": self.p1, "p2": self.p2, "p3": self.p3,
                "c3": self.c3, "s3": self.s3}


def triangle_count(g: SampledGraph) -> int:
    """Number of triangles, tr(A^3) / 6."""
    if g.m == 0:
        return 0
    if g.n <= _DENSE_LIMIT:
        A = g.adjacency(np.float64)
        # entries of A @ A are bounded by n, so float64 sums stay exact
        return int(round(float(np.einsum("ij,ij->", A @ A, A)))) // 6
    A = sp.csr_matrix((np.ones(2 * g.m), (np.r_[g.edges[:, 0], g.edges[:, 1]],
                                          np.r_[g.edges[:, 1], g.edges[:, 0]])),
                      shape=(g.n, g.n))
    return int(round((A @ A).multiply(A).sum())) // 6


def subgraph_counts(g: SampledGraph) -> SubgraphCounts:
    d = [int(x) for x in g.degrees]
    p1 = sum(d) // 2
    p2 = sum(k * (k - 1) // 2 for k in d)
    s3 = sum(k * (k - 1) * (k - 2) // 6 for k in d)
    c3 = triangle_count(g)
    if g.m:
        dm1 = g.degrees - 1
        walk3 = int(np.dot(dm1[g.edges[:, 0]], dm1[g.edges[:, 1]]))
    else:
        walk3 = 0
    p3 = walk3 - 3 * c3
    return SubgraphCounts(g.n, p1, p2, p3, c3, s3)


def clustering_coefficient(counts: SubgraphCounts) -> float:
    if counts.p2 == 0:
        raise UndefinedError("clustering coefficient undefined without 2-paths")
    return 3 * counts.c3 / counts.p2


def _edge_end_sums(g: SampledGraph):
    dj = g.degrees[g.edges[:, 0]].astype(object)
    dk = g.degrees[g.edges[:, 1]].astype(object)
    sum_jk = int(np.sum(dj * dk))
    s1 = int(np.sum(dj + dk))
    s2 = int(np.sum(dj * dj + dk * dk))
    return sum_jk, s1, s2


def empirical_assortativity(g: SampledGraph) -> float:
    """Newman's r as the Pearson correlation of degrees at the two edge ends."""
    if g.m == 0:
        raise UndefinedError("assortativity undefined for a graph without edges")
    m = g.m
    sum_jk, s1, s2 = _edge_end_sums(g)
    # r = (m^-1 sum jk - (m^-1 sum (j+k)/2)^2) / (m^-1 sum (j^2+k^2)/2 - ...), times 4 m^2
    num = 4 * m * sum_jk - s1 * s1
    den = 2 * m * s2 - s1 * s1
    if den == 0:
        raise UndefinedError("assortativity undefined: all edge ends have equal degree")
    return num / den


def _ratio_terms(counts: SubgraphCounts):
    p1, p2, p3, c3, s3 = counts.p1, counts.p2, counts.p3, counts.c3, counts.s3
    num = p1 * (p3 + 3 * c3) - p2 * p2
    den = p1 * (3 * s3 + p2) - p2 * p2
    return num, den


def combinatorial_assortativity(counts: SubgraphCounts) -> float:
    """r = |P2| (|P3|/|P2| + C - |P2|/|P1|) / (3|S3| - |P2| (|P2|/|P1| - 1)).

    Both sides are multiplied through by |P1| to keep the arithmetic exact.
    """
    if counts.p1 == 0 or counts.p2 == 0:
        raise UndefinedError("assortativity undefined without 2-paths")
    num, den = _ratio_terms(counts)
    if den == 0:
        raise UndefinedError("assortativity undefined: zero degree variance")
    return num / den


class Sign(str, enum.Enum):
    ASSORTATIVE = "assortative"
    NEUTRAL = "neutral"
    DISASSORTATIVE = "disassortative"
    UNDEFINED = "undefined"


def classify_sign(counts: SubgraphCounts) -> Sign:
    if counts.p1 == 0 or counts.p2 == 0:
        return Sign.UNDEFINED
    num, den = _ratio_terms(counts)
    if den == 0:
        return Sign.UNDEFINED
    # |P3|/|P2| + C - |P2|/|P1| has the sign of num; compare on the ratio scale
    diff = num / (counts.p1 * counts.p2)
    if abs(diff) <= 1e-12:
        return Sign.NEUTRAL
    return Sign.ASSORTATIVE if diff > 0 else Sign.DISASSORTATIVE


@dataclass(frozen=True)
class MixingStats:
    excess_degree_hist: dict  # k -> q_k
    mixing_matrix: dict  # (j, k) -> e_jk over excess degrees, symmetric
    sigma_q_sq: float

    def assortativity(self) -> float:
        """r = sum_jk jk (e_jk - q_j q_k) / sigma_q^2."""
        if self.sigma_q_sq <= 0:
            raise UndefinedError("assortativity undefined: sigma_q^2 = 0")
        q = self.excess_degree_hist
        cov = sum(j * k * e for (j, k), e in self.mixing_matrix.items())
        mean = sum(k * qk for k, qk in q.items())
        return (cov - mean * mean) / self.sigma_q_sq


def mixing_stats(g: SampledGraph) -> MixingStats:
    if g.m == 0:
        raise UndefinedError("mixing statistics need at least one edge")
    ends = 2 * g.m
    # q_k = (k + 1) n_{k+1} / sum_k k n_k: fraction of edge ends at excess degree k
    counts = np.bincount(g.degrees, minlength=2)
    q = {k - 1: (k * int(c)) / ends for k, c in enumerate(counts) if k >= 1 and c}
    ej = g.degrees[g.edges[:, 0]] - 1
    ek = g.degrees[g.edges[:, 1]] - 1
    pairs = np.concatenate([np.column_stack((ej, ek)), np.column_stack((ek, ej))])
    uniq, cnt = np.unique(pairs, axis=0, return_counts=True)
    M = {(int(a), int(b)): int(c) / ends for (a, b), c in zip(uniq, cnt)}
    mean = sum(k * qk for k, qk in q.items())
    var = sum(k * k * qk for k, qk in q.items()) - mean * mean
    return MixingStats(q, M, max(var, 0.0) if abs(var) > 1e-15 else 0.0)


MOTIF_NODES = {"P1": 2, "P2": 3, "P3": 4, "C3": 3, "S3": 4}


def _falling(n: int, k: int) -> int:
    return math.perm(n, k)


def empirical_density(counts: SubgraphCounts, n: int | None = None, motif: str = "P1") -> float:
    """Labelled injective density of a motif in a finite graph.

    ``t_inj(F) = aut(F) * |F| / (n)_k`` with aut = 2 for paths and 6 for the
    3-star; triangles use the homomorphism density ``6 |C3| / n^3``.
    """
    n = counts.n if n is None else n
    motif = motif.upper()
    if motif not in MOTIF_NODES:
        raise ValueError(f"unknown motif {motif!r}")
    k = MOTIF_NODES[motif]
    if n < k:
        raise SizeError(f"motif {motif} needs at least {k} nodes, graph has {n}")
    if motif == "C3":
        return 6 * counts.c3 / n**3
    label = {"P1": 2 * counts.p1, "P2": 2 * counts.p2, "P3": 2 * counts.p3,
             "S3": 6 * counts.s3}[motif]
    return label / _falling(n, k)


def empirical_densities(counts: SubgraphCounts) -> dict:
    return {m: empirical_density(counts, counts.n, m) for m in MOTIF_NODES
            if counts.n >= MOTIF_NODES[m]}


@dataclass(frozen=True)
class GraphReport:
    n: int
    m: int
    counts: SubgraphCounts
    clustering: float | None
    r_empirical: float | None
    r_combinatorial: float | None
    sign: Sign

    FIELDS = ("n", "m", "p1", "p2", "p3", "c3", "s3", "C",
              "r_empirical", "r_combinatorial", "sign")

    def values(self):
        c = self.counts
        return (self.n, self.m, c.p1, c.p2, c.p3, c.c3, c.s3, self.clustering,
                self.r_empirical, self.r_combinatorial, self.sign.value)


def _or_none(fn, *args):
    try:
        return fn(*args)
    except UndefinedError:
        return None


def analyze(g: SampledGraph) -> GraphReport:
    counts = subgraph_counts(g)
    return GraphReport(
        n=g.n, m=g.m, counts=counts,
        clustering=_or_none(clustering_coefficient, counts),
        r_empirical=_or_none(empirical_assortativity, g),
        r_combinatorial=_or_none(combinatorial_assortativity, counts),
        sign=classify_sign(counts),
    )


def format_value(v) -> str:
    if v is None:
        return "undefined"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def report_text(rep: GraphReport) -> str:
    return "".join(f"{k}={format_value(v)}\n" for k, v in zip(GraphReport.FIELDS, rep.values()))


def report_csv(rep: GraphReport, header: bool = True) -> str:
    lines = [",".join(GraphReport.FIELDS)] if header else []
    lines.append(",".join(format_value(v) for v in rep.values()))
    return "\n".join(lines) + "\n"
