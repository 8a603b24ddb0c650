"""Undirected multigraph container, edge-list I/O, and partition statistics.

Conventions used everywhere downstream:

* Nodes are dense integers 0..n-1. Loaders keep the original labels around
  for writing results back out.
* Parallel edges are stored once with an integer multiplicity.
* A self-loop counts 1 toward the edge total m and 2 toward its endpoint's
  degree, so sum(degrees) == 2*m holds exactly on every graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class Graph:
    """Immutable undirected multigraph.

    Edges are canonicalized: u <= v, sorted lexicographically, duplicates
    merged into the multiplicity column. ``degrees`` and ``m`` are derived
    at construction and validated (sum(degrees) == 2*m).
    """

    n: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    degrees: np.ndarray
    m: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "Graph":
        """Build a graph on ``n`` nodes from (u, v) or (u, v, multiplicity) tuples.

        Repeated pairs accumulate multiplicity. Endpoint order within a pair
        does not matter.
        """
        if n < 0:
            raise ValidationError("node count must be nonnegative")
        us, vs, ws = [], [], []
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1
            else:
                u, v, w = e
            us.append(u)
            vs.append(v)
            ws.append(w)
        u = np.asarray(us, dtype=np.int64).reshape(-1)
        v = np.asarray(vs, dtype=np.int64).reshape(-1)
        w = np.asarray(ws, dtype=np.int64).reshape(-1)
        if u.size:
            if u.min(initial=0) < 0 or v.min(initial=0) < 0 or max(u.max(), v.max()) >= n:
                raise ValidationError("edge endpoint outside 0..n-1")
            if (w < 1).any():
                raise ValidationError("edge multiplicity must be a positive integer")
        return cls._from_arrays(n, u, v, w)

    @classmethod
    def _from_arrays(cls, n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> "Graph":
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        if lo.size:
            order = np.lexsort((hi, lo))
            lo, hi, w = lo[order], hi[order], w[order]
            # merge runs of identical pairs
            new_run = np.empty(lo.size, dtype=bool)
            new_run[0] = True
            new_run[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
            starts = np.flatnonzero(new_run)
            lo = lo[starts]
            hi = hi[starts]
            w = np.add.reduceat(w, starts)
        degrees = np.zeros(n, dtype=np.int64)
        if lo.size:
            loops = lo == hi
            np.add.at(degrees, lo[~loops], w[~loops])
            np.add.at(degrees, hi[~loops], w[~loops])
            np.add.at(degrees, lo[loops], 2 * w[loops])
        m = int(w.sum())
        g = cls(n=n, edge_u=lo, edge_v=hi, edge_w=w, degrees=degrees, m=m)
        assert int(degrees.sum()) == 2 * m
        return g

    @cached_property
    def _adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """CSR neighbor lists excluding self-loops, plus per-node loop weight."""
        loops = self.edge_u == self.edge_v
        u = self.edge_u[~loops]
        v = self.edge_v[~loops]
        w = self.edge_w[~loops]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        ww = np.concatenate([w, w])
        order = np.argsort(src, kind="stable")
        dst = dst[order]
        ww = ww[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        self_w = np.zeros(self.n, dtype=np.int64)
        np.add.at(self_w, self.edge_u[loops], self.edge_w[loops])
        return indptr, dst, ww, self_w

    @cached_property
    def _pair_index(self) -> dict:
        return {(int(a), int(b)): int(c) for a, b, c in zip(self.edge_u, self.edge_v, self.edge_w)}

    def multiplicity(self, u: int, v: int) -> int:
        """Number of parallel edges between u and v (0 if none)."""
        a, b = (u, v) if u <= v else (v, u)
        return self._pair_index.get((a, b), 0)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield canonical (u, v, multiplicity) triples, u <= v, sorted."""
        for a, b, c in zip(self.edge_u, self.edge_v, self.edge_w):
            yield int(a), int(b), int(c)


def load_edge_list(path) -> tuple[Graph, list[str]]:
    """Read a whitespace-separated edge list.

    One edge per line ("u v"), '#' starts a comment line, duplicate lines
    accumulate multiplicity. Node labels are arbitrary tokens, relabeled to
    dense ids in order of first appearance; the label list is returned so
    results can be written back in the original vocabulary.
    """
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected two tokens per line, got {line!r}")
            pair = []
            for tok in parts:
                if tok not in index:
                    index[tok] = len(index)
                pair.append(index[tok])
            us.append(pair[0])
            vs.append(pair[1])
    if not us:
        raise ParseError(f"{path}: no edges found")
    g = Graph.from_edges(len(index), zip(us, vs))
    return g, list(index)


def write_edge_list(graph: Graph, path, labels: Sequence[str] | None = None) -> None:
    """Write the canonical edge list, one line per unit of multiplicity.

    The format round-trips through load_edge_list (duplicates re-accumulate).
    """
    if labels is None:
        labels = [str(i) for i in range(graph.n)]
    elif len(labels) != graph.n:
        raise ValidationError("label list length does not match node count")
    with open(path, "w", encoding="utf-8") as fh:
        for u, v, w in graph.edges():
            line = f"{labels[u]}\t{labels[v]}\n"
            fh.write(line * w)


def load_communities(path) -> dict[str, str]:
    """Read a node-to-community file ("node community" per line).

    Same comment and whitespace rules as load_edge_list. A node listed twice
    with conflicting communities is rejected rather than silently resolved.
    """
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'node community', got {line!r}")
            node, comm = parts
            if node in out and out[node] != comm:
                raise ParseError(f"{path}:{lineno}: node {node!r} assigned to two communities")
            out[node] = comm
    if not out:
        raise ParseError(f"{path}: no assignments found")
    return out


def write_communities(assignment: Mapping[str, str] | np.ndarray, path,
                      labels: Sequence[str] | None = None) -> None:
    """Write a node-to-community file.

    Accepts either a mapping of labels, or a per-node integer array plus an
    optional label list.
    """
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(assignment, Mapping):
            for node, comm in assignment.items():
                fh.write(f"{node}\t{comm}\n")
        else:
            arr = np.asarray(assignment)
            if labels is None:
                labels = [str(i) for i in range(arr.size)]
            for i, c in enumerate(arr):
                fh.write(f"{labels[i]}\t{int(c)}\n")


def induced_subgraph(graph: Graph, nodes) -> tuple[Graph, dict[int, int]]:
    """Subgraph on ``nodes`` with boundary edges dropped.

    Nodes are renumbered 0..len(nodes)-1 in increasing original id; the
    returned dict maps old ids to new. Self-loops on kept nodes survive.
    """
    idx = np.unique(np.asarray(list(nodes), dtype=np.int64))
    if idx.size == 0:
        raise ValidationError("induced subgraph needs a nonempty node set")
    if idx[0] < 0 or idx[-1] >= graph.n:
        raise ValidationError("node id outside 0..n-1")
    remap = np.full(graph.n, -1, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    keep = (remap[graph.edge_u] >= 0) & (remap[graph.edge_v] >= 0)
    sub = Graph._from_arrays(
        int(idx.size),
        remap[graph.edge_u[keep]],
        remap[graph.edge_v[keep]],
        graph.edge_w[keep].copy(),
    )
    return sub, {int(o): int(n) for o, n in zip(idx, remap[idx])}


@dataclass(frozen=True)
class Partition:
    """Per-community edge statistics for a node partition of a Graph.

    assignment : dense community id per node (0..B-1, every id nonempty)
    n_r        : node count per community
    kappa_r    : total degree per community
    m_r        : internal edge count per community (self-loops count once)
    m, n       : edge/node totals of the underlying graph
    """

    assignment: np.ndarray
    B: int
    n_r: np.ndarray
    kappa_r: np.ndarray
    m_r: np.ndarray
    m: int
    n: int
    _inter: Mapping[tuple[int, int], int]

    def m_rs(self, r: int, s: int) -> int:
        """Edge count between distinct communities r and s."""
        if r == s:
            raise ValidationError("m_rs is defined for distinct communities; use m_r for internal edges")
        if not (0 <= r < self.B and 0 <= s < self.B):
            raise ValidationError("community id out of range")
        key = (r, s) if r < s else (s, r)
        return self._inter.get(key, 0)

    def inter_pairs(self) -> Iterator[tuple[int, int, int]]:
        """Yield (r, s, count) for community pairs with at least one edge."""
        for (r, s), c in self._inter.items():
            yield r, s, c

    def members(self, r: int) -> np.ndarray:
        """Node ids belonging to community r."""
        if not (0 <= r < self.B):
            raise ValidationError("community id out of range")
        return np.flatnonzero(self.assignment == r)


def partition_stats(graph: Graph, assignment) -> Partition:
    """Compute all per-community counts for ``assignment`` in one pass.

    Labels may be arbitrary integers; they are relabeled to dense ids
    0..B-1 in increasing label order. The bookkeeping identities
    sum(m_r) + sum(m_rs) == m and sum(kappa_r) == 2m are asserted on
    every call.
    """
    a = np.asarray(assignment, dtype=np.int64).reshape(-1)
    if a.size != graph.n:
        raise ValidationError(
            f"assignment covers {a.size} nodes but the graph has {graph.n}")
    labels, dense = np.unique(a, return_inverse=True)
    B = int(labels.size)
    n_r = np.bincount(dense, minlength=B)
    kappa_r = np.bincount(dense, weights=graph.degrees.astype(np.float64), minlength=B)
    kappa_r = kappa_r.astype(np.int64)
    cu = dense[graph.edge_u]
    cv = dense[graph.edge_v]
    internal = cu == cv
    m_r = np.bincount(cu[internal], weights=graph.edge_w[internal].astype(np.float64), minlength=B)
    m_r = m_r.astype(np.int64)
    inter: dict[tuple[int, int], int] = {}
    if (~internal).any():
        ru = cu[~internal]
        rv = cv[~internal]
        w = graph.edge_w[~internal]
        lo = np.minimum(ru, rv)
        hi = np.maximum(ru, rv)
        key = lo * B + hi
        uniq, inv = np.unique(key, return_inverse=True)
        sums = np.bincount(inv, weights=w.astype(np.float64)).astype(np.int64)
        for kcode, c in zip(uniq, sums):
            inter[(int(kcode) // B, int(kcode) % B)] = int(c)
    p = Partition(
        assignment=dense,
        B=B,
        n_r=n_r,
        kappa_r=kappa_r,
        m_r=m_r,
        m=graph.m,
        n=graph.n,
        _inter=inter,
    )
    assert int(p.m_r.sum()) + sum(inter.values()) == graph.m
    assert int(p.kappa_r.sum()) == 2 * graph.m
    return p
