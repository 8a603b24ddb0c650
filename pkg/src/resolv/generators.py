"""Synthetic graph samplers.

The workhorse is a degree-corrected block sampler: node i carries a target
degree k_i and a block label g_i, and the number of parallel edges between
i and j is Poisson with mean

    omega[g_i, g_j] * k_i * k_j / 2m        (i != j)
    omega[g_i, g_i] * k_i^2 / 4m            (self-loop)

where 2m = sum(k). omega is expressed relative to a degree-preserving
random graph, so omega == 1 everywhere reproduces a configuration-model-like
graph and realized degrees match targets in expectation.

Two sampling routes produce the same distribution:

* "exact": one Poisson draw per node pair. Transparent, quadratic; capped
  at 2000 nodes.
* "fast": one Poisson draw per *block pair* for the total edge count, then
  endpoints drawn within each block proportional to target degree. Thinning
  a Poisson process over pairs by endpoint probabilities k_i/kappa_r gives
  independent pair counts with exactly the means above, so the routes agree
  in distribution (not draw-for-draw).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graph import Graph, Partition, partition_stats
from .seeding import derive_seed

_EXACT_LIMIT = 2000


@dataclass(frozen=True)
class DcsbmParams:
    """Degree-corrected block-model parameters.

    block_assignment : block id per node (dense 0..B-1)
    target_degrees   : expected degree per node, > 0
    omega            : B x B symmetric relative-density matrix, >= 0
    """

    block_assignment: np.ndarray
    target_degrees: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "block_assignment",
                           np.asarray(self.block_assignment, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "target_degrees",
                           np.asarray(self.target_degrees, dtype=np.float64).reshape(-1))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.block_assignment.size

    @property
    def B(self) -> int:
        return self.omega.shape[0]

    def validate(self) -> None:
        g = self.block_assignment
        k = self.target_degrees
        w = self.omega
        if g.size == 0:
            raise ValidationError("block_assignment is empty")
        if k.size != g.size:
            raise ValidationError("target_degrees length does not match block_assignment")
        if not np.isfinite(k).all() or (k <= 0).any():
            raise ValidationError("target_degrees must be positive and finite")
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError("omega must be a square matrix")
        if not np.isfinite(w).all() or (w < 0).any():
            raise ValidationError("omega entries must be nonnegative and finite")
        if not np.array_equal(w, w.T):
            raise ValidationError("omega must be symmetric")
        if g.min() < 0 or g.max() >= w.shape[0]:
            raise ValidationError("block_assignment references a block outside omega")


@dataclass(frozen=True)
class ExtendedPpmParams:
    """Planted partition with one within-density per community.

    community_sizes : nodes per community, >= 1 each
    target_degrees  : expected degree per node (length sum(sizes))
    omega_out       : shared between-community relative density
    omega_diag      : within-community relative density per community; each
                      must exceed omega_out for the pattern to be assortative
                      (checked when there are >= 2 communities)
    """

    community_sizes: np.ndarray
    target_degrees: np.ndarray
    omega_out: float
    omega_diag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "community_sizes",
                           np.asarray(self.community_sizes, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "target_degrees",
                           np.asarray(self.target_degrees, dtype=np.float64).reshape(-1))
        object.__setattr__(self, "omega_diag",
                           np.asarray(self.omega_diag, dtype=np.float64).reshape(-1))

    @property
    def B(self) -> int:
        return self.community_sizes.size

    @property
    def n(self) -> int:
        return int(self.community_sizes.sum())

    def validate(self) -> None:
        sizes = self.community_sizes
        if sizes.size == 0 or (sizes < 1).any():
            raise ValidationError("community_sizes must all be >= 1")
        if self.omega_diag.size != sizes.size:
            raise ValidationError("omega_diag length does not match community count")
        if self.target_degrees.size != self.n:
            raise ValidationError("target_degrees length does not match total node count")
        if not np.isfinite(self.omega_out) or self.omega_out < 0:
            raise ValidationError("omega_out must be nonnegative and finite")
        if self.B >= 2 and not (self.omega_diag > self.omega_out).all():
            raise ValidationError("every omega_diag entry must exceed omega_out")
        # remaining checks ride on the block-model validator
        self.to_dcsbm().validate()

    def to_dcsbm(self) -> DcsbmParams:
        omega = np.full((self.B, self.B), float(self.omega_out))
        np.fill_diagonal(omega, self.omega_diag)
        assignment = np.repeat(np.arange(self.B), self.community_sizes)
        return DcsbmParams(block_assignment=assignment,
                           target_degrees=self.target_degrees,
                           omega=omega)


def sample_dcsbm(params: DcsbmParams, seed: int, method: str = "auto") -> Graph:
    """Draw one graph from the block model.

    method: "exact", "fast", or "auto" (exact up to 2000 nodes). Same seed,
    same method, same graph, bit for bit.
    """
    params.validate()
    if method == "auto":
        method = "exact" if params.n <= _EXACT_LIMIT else "fast"
    if method not in ("exact", "fast"):
        raise ValidationError(f"unknown sampling method {method!r}")
    if method == "exact" and params.n > _EXACT_LIMIT:
        raise ValidationError(
            f"exact sampling is quadratic and capped at {_EXACT_LIMIT} nodes")
    rng = np.random.default_rng(seed)
    if method == "exact":
        return _sample_exact(params, rng)
    return _sample_fast(params, rng)


def _sample_exact(params: DcsbmParams, rng: np.random.Generator) -> Graph:
    g = params.block_assignment
    k = params.target_degrees
    n = params.n
    two_m = float(k.sum())
    means = params.omega[g[:, None], g[None, :]] * np.outer(k, k) / two_m
    iu, iv = np.triu_indices(n)
    mean_flat = means[iu, iv]
    mean_flat[iu == iv] *= 0.5
    counts = rng.poisson(mean_flat)
    nz = counts > 0
    return Graph.from_edges(n, zip(iu[nz].tolist(), iv[nz].tolist(), counts[nz].tolist()))


def _sample_fast(params: DcsbmParams, rng: np.random.Generator) -> Graph:
    g = params.block_assignment
    k = params.target_degrees
    two_m = float(k.sum())
    B = params.B
    members = [np.flatnonzero(g == r) for r in range(B)]
    kappa = np.array([float(k[idx].sum()) for idx in members])
    probs = [k[idx] / kappa[r] if kappa[r] > 0 else None for r, idx in enumerate(members)]
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    for r in range(B):
        for s in range(r, B):
            if kappa[r] == 0 or kappa[s] == 0:
                continue
            mean = params.omega[r, s] * kappa[r] * kappa[s] / two_m
            if r == s:
                mean *= 0.5
            if mean == 0.0:
                continue
            total = int(rng.poisson(mean))
            if total == 0:
                continue
            u = rng.choice(members[r], size=total, p=probs[r])
            v = rng.choice(members[s], size=total, p=probs[s])
            us.append(u)
            vs.append(v)
    if not us:
        return Graph.from_edges(params.n, [])
    u = np.concatenate(us)
    v = np.concatenate(vs)
    return Graph.from_edges(params.n, zip(u.tolist(), v.tolist()))


def sample_extended_ppm(params: ExtendedPpmParams, seed: int,
                        method: str = "auto") -> tuple[Graph, Partition]:
    """Draw a planted-partition graph; returns it with its ground truth."""
    params.validate()
    graph = sample_dcsbm(params.to_dcsbm(), seed, method=method)
    truth = partition_stats(graph, np.repeat(np.arange(params.B), params.community_sizes))
    return graph, truth


def sample_er(n: int, m: int, seed: int) -> Graph:
    """Uniform simple graph: m distinct non-loop edges on n nodes."""
    if n < 0:
        raise ValidationError("node count must be nonnegative")
    max_m = n * (n - 1) // 2
    if m < 0 or m > max_m:
        raise ValidationError(f"edge count must be within 0..{max_m} for n={n}")
    if m == 0:
        return Graph.from_edges(n, [])
    rng = np.random.default_rng(seed)
    codes = rng.choice(max_m, size=m, replace=False)
    # decode lexicographic pair index: row i owns n-1-i consecutive codes
    row_starts = np.concatenate([[0], np.cumsum(np.arange(n - 1, 0, -1))])
    i = np.searchsorted(row_starts, codes, side="right") - 1
    j = codes - row_starts[i] + i + 1
    return Graph.from_edges(n, zip(i.tolist(), j.tolist()))


def make_clique(n: int) -> Graph:
    """Complete simple graph on n nodes."""
    if n < 1:
        raise ValidationError("a clique needs at least one node")
    iu, iv = np.triu_indices(n, k=1)
    return Graph.from_edges(n, zip(iu.tolist(), iv.tolist()))


def make_plateau_fixture(seed: int = 0) -> tuple[Graph, Partition]:
    """The no-valid-resolution benchmark: a dense random blob that out-densifies
    the link between two cliques.

    Nodes 0..99 form a uniform random graph with 956 edges, nodes 100..105
    and 106..111 form two 6-cliques, and one bridge edge ties each pair of
    blocks together (3 bridges, 989 edges total). The between-clique density
    lands near 1.93 while the random blob's internal density sits near 1.03,
    so no single resolution can both keep the blob whole and pull the
    cliques apart.
    """
    er = sample_er(100, 956, derive_seed(seed, 0))
    rng = np.random.default_rng(derive_seed(seed, 1))
    edges: list[tuple[int, int]] = [(int(u), int(v)) for u, v, w in er.edges() for _ in range(w)]
    for base in (100, 106):
        for i in range(base, base + 6):
            for j in range(i + 1, base + 6):
                edges.append((i, j))
    edges.append((int(rng.integers(100)), 100 + int(rng.integers(6))))
    edges.append((int(rng.integers(100)), 106 + int(rng.integers(6))))
    edges.append((100 + int(rng.integers(6)), 106 + int(rng.integers(6))))
    graph = Graph.from_edges(112, edges)
    truth = partition_stats(graph, [0] * 100 + [1] * 6 + [2] * 6)
    return graph, truth
