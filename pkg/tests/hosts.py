"""Seeded clustered hosts shared by the pipeline tests and the acceptance suite."""
import random

from arbortile.graph import Graph


def blow_up(k, m, cross, inner_p=0.2, seed=0, drop=()):
    """k clusters of size m, complete across the pairs in `cross`, sparse random inside.

    `cross` is a set of cluster pairs (i, j); clusters listed in `drop` get no cross edges.
    """
    rng = random.Random(seed)
    clusters = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    edges = []
    for i, j in cross:
        if i in drop or j in drop:
            continue
        edges += [(u, v) for u in clusters[i] for v in clusters[j]]
    for c in clusters:
        edges += [(c[a], c[b]) for a in range(m) for b in range(a + 1, m) if rng.random() < inner_p]
    return Graph.from_edges(k * m, edges), clusters


def doubled_triangle(m=30, seed=0):
    return blow_up(3, m, {(0, 1), (0, 2), (1, 2)}, seed=seed)
