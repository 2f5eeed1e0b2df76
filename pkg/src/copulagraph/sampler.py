"""W-random graph sampling and the edge-list file format.

Randomness comes from numpy's PCG64 bit generator.  ``sample`` seeds PCG64
directly with the 64-bit seed; batch repetitions derive their seeds with
``SeedSequence(base_seed, spawn_key=(k,))`` so every repetition is an
independent stream that can be regenerated on its own.

Within one call the stream is consumed in a fixed order: first the ``n * s``
latent coordinates (row-major), then one uniform per node pair ``i < j`` in
lexicographic order.  The edge set therefore does not depend on how the pair
loop is chunked.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .graphons import Graphon

# Approximate number of node pairs evaluated per kernel block.
_PAIR_BLOCK = 1 << 20

SEED_MASK = (1 << 64) - 1


@dataclass(eq=False)
class SampledGraph:
    n: int
    edges: np.ndarray  # (m, 2) int64, rows (i, j) with i < j, sorted
    seed: int | None = None
    graphon_descriptor: str = ""
    latents: np.ndarray | None = field(default=None, repr=False)
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.edges = edges
        self.degrees = np.bincount(edges.ravel(), minlength=self.n).astype(np.int64)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        # latents are a debugging aid and do not take part in equality
        if not isinstance(other, SampledGraph):
            return NotImplemented
        return (self.n == other.n and self.seed == other.seed
                and self.graphon_descriptor == other.graphon_descriptor
                and np.array_equal(self.edges, other.edges))

    def adjacency(self, dtype=np.float64) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        if self.m:
            A[self.edges[:, 0], self.edges[:, 1]] = 1
            A[self.edges[:, 1], self.edges[:, 0]] = 1
        return A


def from_edges(n: int, edges, seed=None, graphon_descriptor="") -> SampledGraph:
    """Build a graph from arbitrary undirected pairs, rejecting loops and duplicates."""
    pairs = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
        raise UsageError(f"node index out of range for n={n}")
    if np.any(pairs[:, 0] == pairs[:, 1]):
        i = int(pairs[pairs[:, 0] == pairs[:, 1]][0, 0])
        raise UsageError(f"self-loop at node {i}")
    pairs = np.sort(pairs, axis=1)
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    if np.any(counts > 1):
        i, j = uniq[counts > 1][0]
        raise UsageError(f"duplicate edge {i} {j}")
    return SampledGraph(n, uniq, seed=seed, graphon_descriptor=graphon_descriptor)


def sample(graphon: Graphon, n: int, seed: int, keep_latents: bool = False) -> SampledGraph:
    """Draw one W-random simple graph on ``n`` nodes."""
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    seed = int(seed) & SEED_MASK
    rng = np.random.Generator(np.random.PCG64(seed))
    s = graphon.latent_dim
    U = rng.random((n, s))

    chunks = []
    i = 0
    while i < n - 1:
        # choose rows [i, k) so the block holds roughly _PAIR_BLOCK pairs
        k = i + 1
        pairs = n - 1 - i
        while k < n - 1 and pairs + (n - 1 - k) <= _PAIR_BLOCK:
            pairs += n - 1 - k
            k += 1
        rows = np.arange(i, k)
        P = graphon.kernel_block(U[i:k], U)
        mask = np.arange(n)[None, :] > rows[:, None]
        probs = P[mask]
        hits = rng.random(probs.size) < probs
        ii, jj = np.nonzero(mask)
        chunks.append(np.column_stack((ii[hits] + i, jj[hits])))
        i = k
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return SampledGraph(n, edges, seed=seed, graphon_descriptor=graphon.descriptor,
                        latents=U if keep_latents else None)


def derive_seed(base_seed: int, *keys: int) -> int:
    """64-bit seed of the stream labelled ``keys`` under ``base_seed``.

    ``derive_seed(s, k)`` is repetition ``k`` of a batch.
    """
    ss = np.random.SeedSequence(int(base_seed) & SEED_MASK,
                                spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_batch(graphon: Graphon, n: int, base_seed: int, reps: int,
                 keep_latents: bool = False) -> list[SampledGraph]:
    if reps < 1:
        raise UsageError(f"reps must be at least 1, got {reps}")
    return [sample(graphon, n, derive_seed(base_seed, k), keep_latents=keep_latents)
            for k in range(reps)]


# ---------------------------------------------------------------------------
# Edge-list format
# ---------------------------------------------------------------------------

def format_edge_list(g: SampledGraph) -> str:
    buf = io.StringIO()
    seed = "" if g.seed is None else g.seed
    buf.write(f"# n={g.n} seed={seed} graphon={g.graphon_descriptor}\n")
    if g.m:
        np.savetxt(buf, g.edges, fmt="%d", delimiter=" ", newline="\n")
    return buf.getvalue()


def write_edge_list(g: SampledGraph, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_edge_list(g))


def _parse_header(line: str) -> dict:
    fields = {}
    for tok in line.lstrip("#").split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            fields[key] = val
    return fields


def parse_edge_list(text: str) -> SampledGraph:
    """Parse the edge-list format; errors name the offending line."""
    header = {}
    pairs = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not header and not pairs:
                header = _parse_header(line)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise UsageError(f"line {lineno}: non-integer node in {raw!r}") from None
        if i < 0 or j < 0:
            raise UsageError(f"line {lineno}: negative node index in {raw!r}")
        if i == j:
            raise UsageError(f"line {lineno}: self-loop at node {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise UsageError(f"line {lineno}: duplicate edge {key[0]} {key[1]} "
                             f"(first seen on line {seen[key]})")
        seen[key] = lineno
        pairs.append(key)

    max_node = max((j for _, j in pairs), default=-1)
    if "n" in header:
        try:
            n = int(header["n"])
        except ValueError:
            raise UsageError(f"bad node count in header: {header['n']!r}") from None
        if max_node >= n:
            raise UsageError(f"node {max_node} out of range for n={n}")
    else:
        n = max_node + 1
    seed = header.get("seed")
    seed = int(seed) if seed not in (None, "") else None
    edges = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
    return SampledGraph(n, edges, seed=seed, graphon_descriptor=header.get("graphon", ""))


def read_edge_list(path) -> SampledGraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())
