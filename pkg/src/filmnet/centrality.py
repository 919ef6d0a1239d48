"""Degree, betweenness, closeness and eigenvector centrality.

Distances are measured either in hops or with edge length ``1/weight``
(stronger ties are shorter). Betweenness sums over ordered source/target
pairs and by default divides by ``n**2``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csgraph

from .graph import HOP, INVERSE_WEIGHT, METRICS, WeightedGraph

PAPER = "paper"
NONE = "none"
NORMALIZATIONS = (PAPER, NONE)

MEASURES = ("degree", "strength", "betweenness", "closeness", "eigenvector")

# relative tolerance for treating two weighted path lengths as equal
PATH_RTOL = 1e-10
BRUTE_FORCE_MAX_NODES = 12


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3g})")
        self.residual = residual


@dataclass(frozen=True)
class CentralityScores:
    measure: str
    nodes: tuple[str, ...]
    values: tuple[float, ...]
    params: dict = field(default_factory=dict)

    def __getitem__(self, label: str) -> float:
        return self.values[self.nodes.index(label)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.nodes, self.values))


def _check(name, value, allowed):
    if value not in allowed:
        raise ValueError(f"{name} must be one of {allowed}, got {value!r}")


def _same_length(a: float, b: float) -> bool:
    return abs(a - b) <= PATH_RTOL * max(1.0, abs(a), abs(b))


# ------------------------------------------------------------------ degree


def degree_centrality(g: WeightedGraph, weighted: bool = False) -> CentralityScores:
    if weighted:
        values = tuple(float(g.strength(i)) for i in range(g.n))
        return CentralityScores("strength", g.nodes, values, {"weighted": True})
    values = tuple(float(g.degree(i)) for i in range(g.n))
    return CentralityScores("degree", g.nodes, values, {"weighted": False})


# ------------------------------------------------------------- betweenness


def _unit_adjacency(g: WeightedGraph):
    A = g.csr.copy()
    A.setdiag(0)
    A.eliminate_zeros()
    A.data[:] = 1.0
    return A


def _betweenness_hop(g: WeightedGraph, chunk: int = 256) -> np.ndarray:
    """Level-synchronous dependency accumulation over batches of sources."""
    n = g.n
    A = _unit_adjacency(g)
    bc = np.zeros(n)
    for start in range(0, n, chunk):
        src = np.arange(start, min(n, start + chunk))
        rows = np.arange(len(src))
        dist = np.full((len(src), n), -1, dtype=np.int64)
        sigma = np.zeros((len(src), n))
        frontier = np.zeros((len(src), n), dtype=bool)
        dist[rows, src] = 0
        sigma[rows, src] = 1.0
        frontier[rows, src] = True
        levels = [frontier]
        d = 0
        while True:
            d += 1
            reach = (A @ np.where(frontier, sigma, 0.0).T).T
            new = (reach > 0) & (dist < 0)
            if not new.any():
                break
            sigma[new] = reach[new]
            dist[new] = d
            frontier = new
            levels.append(new)
        delta = np.zeros((len(src), n))
        safe_sigma = np.where(sigma > 0, sigma, 1.0)
        for d in range(len(levels) - 1, 0, -1):
            coef = np.where(levels[d], (1.0 + delta) / safe_sigma, 0.0)
            pulled = (A @ coef.T).T
            delta += np.where(levels[d - 1], sigma * pulled, 0.0)
        delta[rows, src] = 0.0
        bc += delta.sum(axis=0)
    return bc


def _betweenness_weighted(g: WeightedGraph) -> np.ndarray:
    """Dijkstra-based dependency accumulation with edge length 1/w."""
    n = g.n
    bc = np.zeros(n)
    lengths = [{j: 1.0 / w for j, w in nbrs.items()} for nbrs in g.adj]
    for s in range(n):
        order: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0.0] * n
        dist: dict[int, float] = {}
        seen = {s: 0.0}
        sigma[s] = 1.0
        tie = itertools.count()
        heap = [(0.0, next(tie), s, s)]
        while heap:
            d, _, pred, v = heapq.heappop(heap)
            if v in dist:
                continue
            if v != s:
                sigma[v] += sigma[pred]
            order.append(v)
            dist[v] = d
            for w, length in lengths[v].items():
                nd = d + length
                if w in dist:
                    continue
                if w not in seen or (nd < seen[w] and not _same_length(nd, seen[w])):
                    seen[w] = nd
                    heapq.heappush(heap, (nd, next(tie), v, w))
                    sigma[w] = 0.0
                    preds[w] = [v]
                elif _same_length(nd, seen[w]):
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coef = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coef
            if w != s:
                bc[w] += delta[w]
    return bc


def betweenness_centrality(
    g: WeightedGraph, normalization: str = PAPER, metric: str = HOP
) -> CentralityScores:
    """Sum over ordered pairs (s, t), s != t, both distinct from the node, of
    the share of shortest s-t paths through the node. ``paper`` divides by n**2.
    """
    _check("normalization", normalization, NORMALIZATIONS)
    _check("metric", metric, METRICS)
    raw = _betweenness_hop(g) if metric == HOP else _betweenness_weighted(g)
    if normalization == PAPER and g.n:
        raw = raw / g.n**2
    return CentralityScores(
        "betweenness",
        g.nodes,
        tuple(float(v) for v in raw),
        {"normalization": normalization, "metric": metric, "pairs": "ordered"},
    )


def brute_force_betweenness(g: WeightedGraph, metric: str = HOP) -> CentralityScores:
    """Unnormalized betweenness by explicit enumeration of every shortest path.

    Exponential; meant as a test oracle for graphs of at most 12 nodes.
    """
    n = g.n
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force betweenness limited to {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    _check("metric", metric, METRICS)

    def length(i, j):
        return 1.0 if metric == HOP else 1.0 / g.adj[i][j]

    # Floyd-Warshall for the target lengths
    D = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        D[i][i] = 0.0
        for j in g.adj[i]:
            D[i][j] = length(i, j)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]

    totals = [Fraction(0)] * n
    for s in range(n):
        for t in range(n):
            if s == t or D[s][t] == math.inf:
                continue
            target = D[s][t]
            paths: list[list[int]] = []

            def walk(v, so_far, path, on_path):
                if v == t:
                    if _same_length(so_far, target):
                        paths.append(path[:])
                    return
                for w in g.adj[v]:
                    if w in on_path:
                        continue
                    nd = so_far + length(v, w)
                    if nd > target and not _same_length(nd, target):
                        continue
                    path.append(w)
                    on_path.add(w)
                    walk(w, nd, path, on_path)
                    on_path.discard(w)
                    path.pop()

            walk(s, 0.0, [s], {s})
            through = [0] * n
            for p in paths:
                for v in p[1:-1]:
                    through[v] += 1
            for v in range(n):
                if through[v]:
                    totals[v] += Fraction(through[v], len(paths))
    return CentralityScores(
        "betweenness",
        g.nodes,
        tuple(float(x) for x in totals),
        {"normalization": NONE, "metric": metric, "method": "enumeration", "exact": tuple(totals)},
    )


# --------------------------------------------------------------- closeness


def all_pairs_distances(g: WeightedGraph, metric: str = HOP) -> np.ndarray:
    _check("metric", metric, METRICS)
    if g.n == 0:
        return np.zeros((0, 0))
    A = g.csr.copy()
    A.setdiag(0)
    A.eliminate_zeros()
    A.data = 1.0 / A.data if metric == INVERSE_WEIGHT else np.ones_like(A.data)
    return csgraph.shortest_path(A, method="D", directed=False, unweighted=(metric == HOP))


def closeness_centrality(g: WeightedGraph, metric: str = HOP) -> CentralityScores:
    """``(n-1) / sum of distances`` on connected graphs.

    Disconnected graphs use the reachable set R of each node:
    ``(|R|-1)/S * (|R|-1)/(n-1)``; isolated nodes score 0.
    """
    n = g.n
    D = all_pairs_distances(g, metric)
    values = []
    for i in range(n):
        row = D[i]
        finite = np.isfinite(row)
        r = int(finite.sum())
        total = float(row[finite].sum())
        if r <= 1 or total <= 0:
            values.append(0.0)
        else:
            values.append((r - 1) / total * (r - 1) / (n - 1))
    return CentralityScores(
        "closeness",
        g.nodes,
        tuple(values),
        {"metric": metric, "disconnected": "reachable-set scaling", "isolated": 0.0},
    )


# ------------------------------------------------------------- eigenvector


def eigenvector_centrality(
    g: WeightedGraph, tolerance: float = 1e-9, max_iterations: int = 1000
) -> CentralityScores:
    """Dominant eigenvector of the weighted adjacency matrix by power iteration.

    Each step averages the new normalized iterate with the previous one, which
    removes the oscillation power iteration shows on bipartite graphs.
    """
    if g.edge_count == 0 and not any(g.loops or ()):
        raise ConvergenceError("graph has no edges, no dominant direction", math.nan)
    A = g.csr
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    residual = math.inf
    for it in range(1, max_iterations + 1):
        y = A @ x
        y /= np.linalg.norm(y)
        y += x
        y /= np.linalg.norm(y)
        residual = float(np.max(np.abs(y - x)))
        x = y
        if residual < tolerance:
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iterations} steps", residual)
    x = np.clip(x, 0.0, None)
    x /= np.linalg.norm(x)
    return CentralityScores(
        "eigenvector",
        g.nodes,
        tuple(float(v) for v in x),
        {"tolerance": tolerance, "max_iterations": max_iterations, "iterations": it, "norm": "l2"},
    )


# ----------------------------------------------------------------- ranking


def rank_top_k(scores: CentralityScores, k: int) -> list[tuple[str, float]]:
    """Highest scores first; equal scores ordered by label."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(zip(scores.nodes, scores.values), key=lambda p: (-p[1], p[0]))
    return ranked[:k]
