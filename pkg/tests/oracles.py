"""Independent reference implementations for checking the package.

Everything here is written the dumb, obviously-correct way: explicit
loops, exhaustive enumeration, no code shared with the package internals.
Slow on purpose; only run on small inputs.
"""

from __future__ import annotations

import math


def set_partitions(n: int):
    """All partitions of range(n), yielded as assignment tuples in
    restricted-growth form (community ids appear in first-use order)."""

    def rec(i: int, nlabels: int, current: list[int]):
        if i == n:
            yield tuple(current)
            return
        for lab in range(nlabels):
            current.append(lab)
            yield from rec(i + 1, nlabels, current)
            current.pop()
        current.append(nlabels)
        yield from rec(i + 1, nlabels + 1, current)
        current.pop()

    yield from rec(0, 0, [])


def modularity_direct(edges, assignment, gamma: float) -> float:
    """Q(gamma) straight from an (u, v, multiplicity) edge list.

    Self-loops count once toward m and twice toward their node's degree.
    """
    m = sum(w for _, _, w in edges)
    internal = sum(w for u, v, w in edges if assignment[u] == assignment[v])
    kappa: dict = {}
    for u, v, w in edges:
        if u == v:
            kappa[assignment[u]] = kappa.get(assignment[u], 0) + 2 * w
        else:
            kappa[assignment[u]] = kappa.get(assignment[u], 0) + w
            kappa[assignment[v]] = kappa.get(assignment[v], 0) + w
    penalty = sum(k * k for k in kappa.values()) / (4.0 * m * m)
    return internal / m - gamma * penalty


def best_partition_q(n: int, edges, gamma: float) -> float:
    """Exhaustive-search optimum of Q(gamma). Exponential; n <= 8 or so."""
    return max(modularity_direct(edges, a, gamma) for a in set_partitions(n))


def nmi_naive(left: dict, right: dict) -> float:
    """Definitional NMI with the arithmetic-mean normalizer, natural logs."""
    common = [k for k in left if k in right]
    n = len(common)
    joint: dict = {}
    pa: dict = {}
    pb: dict = {}
    for node in common:
        a, b = left[node], right[node]
        joint[(a, b)] = joint.get((a, b), 0) + 1
        pa[a] = pa.get(a, 0) + 1
        pb[b] = pb.get(b, 0) + 1
    h_a = -sum((c / n) * math.log(c / n) for c in pa.values())
    h_b = -sum((c / n) * math.log(c / n) for c in pb.values())
    info = 0.0
    for (a, b), c in joint.items():
        info += (c / n) * math.log((c / n) / ((pa[a] / n) * (pb[b] / n)))
    if h_a + h_b == 0.0:
        return 1.0
    return 2.0 * info / (h_a + h_b)


def ari_paircount(left: dict, right: dict) -> float:
    """ARI by brute-force pair counting over the shared node set."""
    common = [k for k in left if k in right]
    n11 = n10 = n01 = n00 = 0
    for i in range(len(common)):
        for j in range(i + 1, len(common)):
            u, v = common[i], common[j]
            same_a = left[u] == left[v]
            same_b = right[u] == right[v]
            if same_a and same_b:
                n11 += 1
            elif same_a:
                n10 += 1
            elif same_b:
                n01 += 1
            else:
                n00 += 1
    numer = 2 * (n11 * n00 - n10 * n01)
    denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00)
    if denom == 0:
        return 1.0
    return numer / denom
