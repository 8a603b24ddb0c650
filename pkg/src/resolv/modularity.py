"""Generalized modularity and a Louvain-style maximizer.

The objective over a partition with per-community internal edge counts m_r
and degree sums kappa_r is

    Q(gamma) = sum_r [ m_r / m  -  gamma * (kappa_r / 2m)^2 ]

which reduces to standard modularity at gamma = 1. Raising gamma penalizes
degree-heavy communities and pushes the optimum toward finer partitions.

The maximizer below is the usual two-phase scheme: repeated single-node
moves to the best neighboring community until no move helps, then
aggregation of communities into super-nodes, repeated until the node-moving
phase goes idle. Multiplicities and self-loops are honored throughout: a
self-loop stays internal wherever its node goes, so it never enters a move
gain, but it does count in Q and in aggregated super-node loops.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import ValidationError
from .graph import Graph, Partition, partition_stats

# largest graph that gets the chain-move refinement after greedy convergence
_KL_LIMIT = 32


def modularity(graph: Graph, partition: Partition, gamma: float) -> float:
    """Evaluate Q(gamma) for an existing partition."""
    _check_gamma(gamma)
    if graph.m < 1:
        raise ValidationError("modularity is undefined on a graph with no edges")
    if partition.n != graph.n or partition.m != graph.m:
        raise ValidationError("partition was computed for a different graph")
    m = float(graph.m)
    k = partition.kappa_r.astype(np.float64)
    return float(partition.m_r.sum() / m - gamma * np.sum((k / (2.0 * m)) ** 2))


def delta_merge(partition: Partition, r: int, s: int, gamma: float) -> float:
    """Change in Q(gamma) from merging communities r and s.

    Positive means the merge pays. Exactly consistent with modularity():
    Q(after merge) == Q(before) + delta_merge within float tolerance.
    """
    _check_gamma(gamma)
    if r == s:
        raise ValidationError("merge needs two distinct communities")
    m = float(partition.m)
    m_rs = partition.m_rs(r, s)
    return float(m_rs / m
                 - gamma * partition.kappa_r[r] * partition.kappa_r[s] / (2.0 * m * m))


def _check_gamma(gamma: float) -> None:
    if not (np.isfinite(gamma) and gamma > 0):
        raise ValidationError("gamma must be a positive finite number")


def louvain_maximize(graph: Graph, gamma: float, seed: int = 0, *,
                     tol: float = 1e-12, check: bool = False) -> Partition:
    """Greedy maximization of Q(gamma).

    Parameters
    ----------
    graph : Graph with at least one edge.
    gamma : resolution parameter, > 0.
    seed : drives the node visit order (a fresh random permutation per
        sweep). Identical (graph, gamma, seed) gives an identical partition.
    tol : minimum Q improvement for a move to count. Sweeps stop when no
        single-node move improves Q by more than this.
    check : when True, re-derive Q from scratch after every accepted move
        and assert it matches the incrementally tracked value within 1e-9,
        and that the tracked value never decreases. Meant for tests; it is
        quadratic-ish and slow on anything but small graphs.

    At convergence no single-node move (including detaching a node into a
    community of its own) and no pairwise community merge improves Q by
    more than tol. Ties between equally good target communities go to the
    smallest community id. On graphs with at most 32 nodes a chain-move
    refinement also runs after greedy convergence: it strings together
    locked best moves, downhill steps allowed, and keeps the best prefix.
    That escapes pairwise-swap traps no sequence of individually improving
    moves can leave, and at that size it costs microseconds.
    """
    _check_gamma(gamma)
    if graph.m < 1:
        raise ValidationError("modularity optimization needs at least one edge")
    rng = np.random.default_rng(seed)
    m = float(graph.m)

    assignment = np.arange(graph.n, dtype=np.int64)
    while True:
        assignment, _ = _greedy_cycles(graph, m, gamma, rng, tol, check, assignment)
        if graph.n > _KL_LIMIT:
            break
        assignment, polished = _chain_refine(graph, m, gamma, tol, check, assignment)
        if not polished:
            break

    return partition_stats(graph, assignment)


def _greedy_cycles(graph: Graph, m, gamma, rng, tol, check, assignment):
    """Level-based local moving until a full cycle makes no move.

    Outer cycles restart from the original graph with node communities
    seeded by the current result: aggregation alone only guarantees
    stability against super-node moves, while the contract promises no
    single original-node move improves Q. A cycle whose first phase makes
    zero moves certifies exactly that.
    """
    any_cycle_moved = False
    while True:
        eu = graph.edge_u
        ev = graph.edge_v
        ew = graph.edge_w.astype(np.float64)
        k = graph.degrees.astype(np.float64)
        membership = np.arange(graph.n, dtype=np.int64)
        init = assignment
        cycle_moved = False
        while True:
            comm, moved = _local_moving(eu, ev, ew, k, m, gamma, rng, tol, check,
                                        init=init)
            membership = comm[membership]
            cycle_moved = cycle_moved or moved
            if not moved:
                break
            # aggregate: one super-node per surviving community
            labels, dense = np.unique(comm, return_inverse=True)
            membership = _relabel(membership, comm, dense)
            b = int(labels.size)
            au = dense[eu]
            av = dense[ev]
            lo = np.minimum(au, av)
            hi = np.maximum(au, av)
            key = lo * b + hi
            uniq, inv = np.unique(key, return_inverse=True)
            w = np.bincount(inv, weights=ew)
            eu = uniq // b
            ev = uniq % b
            ew = w
            k = np.bincount(dense, weights=k, minlength=b)
            init = None  # fresh super-nodes start as singletons
        assignment = membership
        any_cycle_moved = any_cycle_moved or cycle_moved
        if not cycle_moved:
            return assignment, any_cycle_moved


def _chain_refine(graph: Graph, m, gamma, tol, check, assignment):
    """Kernighan-Lin style rounds on the original graph.

    Each round greedily chains single-node moves with the moved node locked
    afterwards, tracking Q along the chain; steps may go downhill. If the
    best prefix of the chain beats the starting partition by more than tol
    it is kept and another round starts. Deterministic: ties prefer the
    smaller (node, target) pair.
    """
    n = graph.n
    eu = graph.edge_u
    ev = graph.edge_v
    ew = graph.edge_w.astype(np.float64)
    k = graph.degrees.astype(np.float64)
    indptr, nbr, wgt, _ = _csr(n, eu, ev, ew)
    coef = gamma / (2.0 * m)

    comm = np.asarray(assignment, dtype=np.int64).copy()
    q = _scratch_q(eu, ev, ew, k, comm, m, gamma)
    improved_any = False
    while True:
        start_q = q
        cur = comm.copy()
        kappa = np.bincount(cur, weights=k, minlength=n)
        size = np.bincount(cur, minlength=n)
        locked = np.zeros(n, dtype=bool)
        cur_q = q
        best_prefix_q = -np.inf
        best_prefix = None
        for _ in range(n):
            step = None  # (delta, node, target)
            for v in range(n):
                if locked[v]:
                    continue
                cv = int(cur[v])
                links: dict[int, float] = {}
                for t in range(indptr[v], indptr[v + 1]):
                    cj = int(cur[nbr[t]])
                    links[cj] = links.get(cj, 0.0) + wgt[t]
                kv = k[v]
                leave = links.get(cv, 0.0) - coef * kv * (kappa[cv] - kv)
                solo = size[cv] == 1
                fresh = -1
                if not solo:
                    empty = np.flatnonzero(size == 0)
                    if empty.size:
                        fresh = int(empty[0])
                for c in range(n):
                    if c == cv or (size[c] == 0 and c != fresh):
                        continue
                    gain = links.get(c, 0.0) - coef * kv * kappa[c]
                    delta = (gain - leave) / m
                    # scan order is ascending (v, c), so first-seen wins ties
                    if step is None or delta > step[0]:
                        step = (delta, v, c)
            if step is None:
                break
            delta, v, c = step
            old = int(cur[v])
            cur[v] = c
            kappa[old] -= k[v]
            kappa[c] += k[v]
            size[old] -= 1
            size[c] += 1
            locked[v] = True
            cur_q += delta
            if check:
                scratch = _scratch_q(eu, ev, ew, k, cur, m, gamma)
                assert abs(scratch - cur_q) <= 1e-9, (scratch, cur_q)
            if cur_q > best_prefix_q:
                best_prefix_q = cur_q
                best_prefix = cur.copy()
        if best_prefix is not None and best_prefix_q > start_q + tol:
            comm = best_prefix
            q = best_prefix_q
            improved_any = True
        else:
            return comm, improved_any


def _relabel(membership: np.ndarray, comm: np.ndarray, dense: np.ndarray) -> np.ndarray:
    # membership currently points at raw community ids of this level;
    # translate through the dense relabeling used for aggregation
    lookup = np.empty(comm.size, dtype=np.int64)
    lookup[:] = -1
    lookup[comm] = dense
    out = lookup[membership]
    assert (out >= 0).all()
    return out


def _local_moving(eu, ev, ew, k, m, gamma, rng, tol, check,
                  init=None) -> tuple[np.ndarray, bool]:
    """One node-moving phase on the current level graph.

    Starts from singleton communities, or from ``init`` (community ids below
    the node count, gaps allowed) when given. Returns the per-node community
    array and whether any move was accepted.
    """
    n = k.size
    indptr, nbr, wgt, selfw = _csr(n, eu, ev, ew)
    if init is None:
        comm = np.arange(n, dtype=np.int64)
    else:
        comm = np.asarray(init, dtype=np.int64).copy()
    comm_size = np.bincount(comm, minlength=n)
    comm_kappa = np.bincount(comm, weights=k, minlength=n)
    free = [int(i) for i in np.flatnonzero(comm_size == 0)]  # sorted, a valid heap
    coef = gamma / (2.0 * m)
    min_gain = tol * m  # gains below are scaled by m relative to Q

    q = _scratch_q(eu, ev, ew, k, comm, m, gamma)
    any_move = False
    improved = True
    while improved:
        improved = False
        for i in rng.permutation(n):
            ci = int(comm[i])
            links: dict[int, float] = {}
            for t in range(indptr[i], indptr[i + 1]):
                cj = int(comm[nbr[t]])
                links[cj] = links.get(cj, 0.0) + wgt[t]
            ki = k[i]
            comm_kappa[ci] -= ki
            stay = links.get(ci, 0.0) - coef * ki * comm_kappa[ci]
            best_gain = stay
            best_c = ci
            for c, wc in links.items():
                if c == ci:
                    continue
                g = wc - coef * ki * comm_kappa[c]
                if g > best_gain or (g == best_gain and c < best_c):
                    best_gain = g
                    best_c = c
            if free and comm_size[ci] > 1:
                # detaching into an empty community has gain exactly 0
                e = free[0]
                if 0.0 > best_gain or (0.0 == best_gain and e < best_c):
                    best_gain = 0.0
                    best_c = e
            if best_c != ci and best_gain > stay + min_gain:
                if free and best_c == free[0]:
                    heapq.heappop(free)
                comm[i] = best_c
                comm_kappa[best_c] += ki
                comm_size[ci] -= 1
                comm_size[best_c] += 1
                if comm_size[ci] == 0:
                    heapq.heappush(free, ci)
                q_before = q
                q += (best_gain - stay) / m
                improved = True
                any_move = True
                if check:
                    q_scratch = _scratch_q(eu, ev, ew, k, comm, m, gamma)
                    assert abs(q_scratch - q) <= 1e-9, (q_scratch, q)
                    assert q > q_before
            else:
                comm_kappa[ci] += ki
    return comm, any_move


def _csr(n, eu, ev, ew):
    loops = eu == ev
    u = eu[~loops]
    v = ev[~loops]
    w = ew[~loops]
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    ww = np.concatenate([w, w])
    order = np.argsort(src, kind="stable")
    dst = dst[order]
    ww = ww[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src.astype(np.int64), minlength=n), out=indptr[1:])
    selfw = np.zeros(n, dtype=np.float64)
    np.add.at(selfw, eu[loops].astype(np.int64), ew[loops])
    return indptr, dst.astype(np.int64), ww, selfw


def _scratch_q(eu, ev, ew, k, comm, m, gamma) -> float:
    internal = comm[eu] == comm[ev]
    m_in = float(ew[internal].sum())
    b = int(comm.max()) + 1
    kap = np.bincount(comm, weights=k, minlength=b)
    return m_in / m - gamma * float(np.sum((kap / (2.0 * m)) ** 2))
