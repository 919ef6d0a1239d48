"""Small named graphs and seeded random generators used by tests and scripts."""

from __future__ import annotations

import itertools
import random

from .graph import WeightedGraph


def _labels(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"n{i:0{width}d}" for i in range(n)]


def path(n: int) -> WeightedGraph:
    names = "abcdefghijklmnopqrstuvwxyz"[:n] if n <= 26 else _labels(n)
    return WeightedGraph.from_edges([(names[i], names[i + 1], 1) for i in range(n - 1)], names)


def cycle(n: int) -> WeightedGraph:
    names = _labels(n)
    return WeightedGraph.from_edges([(names[i], names[(i + 1) % n], 1) for i in range(n)], names)


def complete(n: int, weight=1) -> WeightedGraph:
    names = _labels(n)
    return WeightedGraph.from_edges(
        [(a, b, weight) for a, b in itertools.combinations(names, 2)], names
    )


def star(n_leaves: int) -> WeightedGraph:
    leaves = [f"leaf{i}" for i in range(n_leaves)]
    return WeightedGraph.from_edges([("center", v, 1) for v in leaves], ["center", *leaves])


def two_triangles(bridge: bool = False) -> WeightedGraph:
    edges = [("a", "b", 1), ("b", "c", 1), ("a", "c", 1), ("d", "e", 1), ("e", "f", 1), ("d", "f", 1)]
    if bridge:
        edges.append(("c", "d", 1))
    return WeightedGraph.from_edges(edges, list("abcdef"))


def ring_of_cliques(n_cliques: int = 4, size: int = 4) -> WeightedGraph:
    """Cliques joined in a ring, one unit bridge between consecutive cliques."""
    edges = []
    names = [[f"k{c}_{i}" for i in range(size)] for c in range(n_cliques)]
    for members in names:
        edges += [(a, b, 1) for a, b in itertools.combinations(members, 2)]
    for c in range(n_cliques):
        edges.append((names[c][-1], names[(c + 1) % n_cliques][0], 1))
    return WeightedGraph.from_edges(edges, [v for m in names for v in m])


def gnm(n: int, m: int, seed: int = 0, max_weight: int = 1) -> WeightedGraph:
    """Uniform random simple graph with exactly ``m`` edges."""
    if m > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    rng = random.Random(seed)
    names = _labels(n)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            chosen.add((min(i, j), max(i, j)))
    return WeightedGraph.from_edges(
        [(names[i], names[j], rng.randint(1, max_weight)) for i, j in sorted(chosen)], names
    )


def random_connected(rng: random.Random, n: int, p: float = 0.3, max_weight: int = 5) -> WeightedGraph:
    """Random spanning tree plus extra edges with probability ``p``."""
    names = _labels(n)
    edges = {}
    order = list(range(n))
    rng.shuffle(order)
    for k in range(1, n):
        i, j = order[k], order[rng.randrange(k)]
        edges[(min(i, j), max(i, j))] = rng.randint(1, max_weight)
    for i, j in itertools.combinations(range(n), 2):
        if (i, j) not in edges and rng.random() < p:
            edges[(i, j)] = rng.randint(1, max_weight)
    return WeightedGraph.from_edges([(names[i], names[j], w) for (i, j), w in sorted(edges.items())], names)


def planted_partition(
    n: int, n_groups: int, avg_degree: float, mixing: float = 0.1, seed: int = 0
) -> WeightedGraph:
    """Groups of equal size; a ``mixing`` share of edges crosses groups."""
    rng = random.Random(seed)
    names = _labels(n)
    target = int(n * avg_degree / 2)
    group = [i * n_groups // n for i in range(n)]
    members: list[list[int]] = [[] for _ in range(n_groups)]
    for i, gid in enumerate(group):
        members[gid].append(i)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < target:
        i = rng.randrange(n)
        if rng.random() < mixing:
            j = rng.randrange(n)
        else:
            j = rng.choice(members[group[i]])
        if i != j:
            chosen.add((min(i, j), max(i, j)))
    return WeightedGraph.from_edges([(names[i], names[j], 1) for i, j in sorted(chosen)], names)
