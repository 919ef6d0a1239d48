"""Newman modularity, two-phase Louvain optimisation and per-community stats."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import WeightedGraph, density, subgraph

BRUTE_FORCE_MAX_NODES = 10
# moves must gain more than this; guards against float noise between equal gains
_GAIN_FLOOR = 1e-12
_TRACK_TOL = 1e-9


class UndefinedModularityError(ValueError):
    pass


@dataclass(frozen=True)
class LouvainConfig:
    seed: int = 0
    resolution: float = 1.0
    max_passes: int = 100
    min_gain: float = 0.0

    def __post_init__(self):
        if not self.resolution > 0:
            raise ValueError("resolution must be > 0")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass(frozen=True)
class Partition:
    assignment: tuple[int, ...]
    n_communities: int
    modularity: float
    resolution: float = 1.0
    seed: int | None = None
    trace: tuple[float, ...] = field(default=(), compare=False)

    def members(self, nodes: Sequence[str]) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.n_communities)]
        for label, c in zip(nodes, self.assignment):
            out[c].append(label)
        return out


def canonical(assignment: Sequence[int]) -> tuple[int, ...]:
    """Renumber community ids 0..c-1 by first appearance."""
    ids: dict[int, int] = {}
    return tuple(ids.setdefault(c, len(ids)) for c in assignment)


def _as_assignment(g: WeightedGraph, p) -> list[int]:
    if isinstance(p, Partition):
        p = p.assignment
    if isinstance(p, Mapping):
        try:
            p = [p[v] for v in g.nodes]
        except KeyError as exc:
            raise ValueError(f"partition does not cover node {exc.args[0]!r}") from None
    p = list(p)
    if len(p) != g.n:
        raise ValueError(f"partition covers {len(p)} nodes, graph has {g.n}")
    return p


def modularity(g: WeightedGraph, p, resolution: float = 1.0) -> float:
    """Weighted Newman modularity ``(1/2m) sum_ij [A_ij - r k_i k_j / 2m] d(c_i, c_j)``.

    Self-loops (aggregated graphs only) enter A_ii at twice their weight.
    """
    assignment = _as_assignment(g, p)
    inside: dict[int, float] = {}
    tot: dict[int, float] = {}
    loops = g.loops or (0,) * g.n
    for i, nbrs in enumerate(g.adj):
        ci = assignment[i]
        t = tot.get(ci, 0.0)
        s = inside.get(ci, 0.0)
        if loops[i]:
            t += 2 * loops[i]
            s += 2 * loops[i]
        for j, w in nbrs.items():
            t += w
            if assignment[j] == ci:
                s += w
        tot[ci] = t
        inside[ci] = s
    m2 = sum(tot.values())
    if m2 <= 0:
        raise UndefinedModularityError("modularity is undefined on a graph without edges")
    return sum(inside[c] / m2 - resolution * (tot[c] / m2) ** 2 for c in tot)


# ----------------------------------------------------------------- louvain


def _local_moves(g: WeightedGraph, cfg: LouvainConfig, rng: random.Random):
    """First phase on ``g``: returns (community per node, moved?, tracked Q)."""
    n = g.n
    res = cfg.resolution
    k = [float(g.strength(i)) for i in range(n)]
    m2 = sum(k)
    if m2 <= 0:
        raise UndefinedModularityError("modularity is undefined on a graph without edges")
    loops = g.loops or (0,) * n
    comm = list(range(n))
    tot = k[:]
    q = sum(2 * loops[i] / m2 - res * (k[i] / m2) ** 2 for i in range(n))
    order = list(range(n))
    rng.shuffle(order)
    adj = g.adj
    threshold = max(cfg.min_gain, _GAIN_FLOOR)
    moved = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            ki = k[i]
            if not adj[i]:
                continue
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                c = comm[j]
                links[c] = links.get(c, 0.0) + w
            tot[ci] -= ki
            scale = res * ki / m2
            stay = links.get(ci, 0.0) - tot[ci] * scale
            best_c, best = -1, 0.0
            for c, w in links.items():
                if c == ci:
                    continue
                gain = w - tot[c] * scale
                if best_c < 0 or gain > best or (gain == best and c < best_c):
                    best_c, best = c, gain
            dq = 2.0 * (best - stay) / m2 if best_c >= 0 else 0.0
            if best_c >= 0 and dq > threshold:
                comm[i] = best_c
                tot[best_c] += ki
                q += dq
                moves += 1
            else:
                tot[ci] += ki
        if not moves:
            break
        moved = True
    return comm, moved, q


def louvain_phase1(g: WeightedGraph, cfg: LouvainConfig = LouvainConfig()) -> Partition:
    """Single local-moving phase starting from singleton communities."""
    comm, _, tracked = _local_moves(g, cfg, random.Random(cfg.seed))
    assignment = canonical(comm)
    q = modularity(g, assignment, cfg.resolution)
    if abs(q - tracked) > _TRACK_TOL:
        raise RuntimeError(f"incremental modularity {tracked} drifted from recomputed {q}")
    return Partition(assignment, max(assignment) + 1, q, cfg.resolution, cfg.seed)


def louvain_aggregate(g: WeightedGraph, p) -> WeightedGraph:
    """Collapse each community to one node.

    Inter-community weights are summed; intra-community weight (and any
    existing self-loops) becomes the community node's self-loop.
    """
    assignment = canonical(_as_assignment(g, p))
    c = max(assignment) + 1 if assignment else 0
    adj: list[dict[int, float]] = [{} for _ in range(c)]
    loops = [0] * c
    if g.loops:
        for i, w in enumerate(g.loops):
            loops[assignment[i]] += w
    for i, j, w in g.edges():
        a, b = assignment[i], assignment[j]
        if a == b:
            loops[a] += w
        else:
            adj[a][b] = adj[a].get(b, 0) + w
            adj[b][a] = adj[b].get(a, 0) + w
    return WeightedGraph(
        tuple(str(x) for x in range(c)), tuple(adj), tuple(loops) if any(loops) else None
    )


def _sorted_copy(g: WeightedGraph) -> tuple[WeightedGraph, list[int]]:
    """Copy of ``g`` with nodes in label order, plus old index per new index."""
    perm = sorted(range(g.n), key=lambda i: g.nodes[i])
    new_of = {old: new for new, old in enumerate(perm)}
    adj = tuple(dict(sorted((new_of[j], w) for j, w in g.adj[i].items())) for i in perm)
    loops = tuple(g.loops[i] for i in perm) if g.loops else None
    return WeightedGraph(tuple(g.nodes[i] for i in perm), adj, loops), perm


def louvain(g: WeightedGraph, cfg: LouvainConfig = LouvainConfig()) -> Partition:
    """Alternate local moving and aggregation until nothing changes.

    The sweep order is a seeded shuffle of the nodes in label order, so the
    result depends on labels and structure only, not on node storage order.
    ``trace`` holds the modularity of the singleton start and after each pass.
    """
    work, perm = _sorted_copy(g)
    rng = random.Random(cfg.seed)
    assign = list(range(work.n))
    level = work
    trace = [modularity(work, assign, cfg.resolution)]
    for _ in range(cfg.max_passes):
        comm, moved, tracked = _local_moves(level, cfg, rng)
        if not moved:
            break
        dense = canonical(comm)
        q = modularity(level, dense, cfg.resolution)
        if abs(q - tracked) > _TRACK_TOL:
            raise RuntimeError(f"incremental modularity {tracked} drifted from recomputed {q}")
        assign = [dense[a] for a in assign]
        trace.append(q)
        level = louvain_aggregate(level, dense)
    original = [0] * g.n
    for new, old in enumerate(perm):
        original[old] = assign[new]
    assignment = canonical(original)
    q = modularity(g, assignment, cfg.resolution)
    return Partition(assignment, max(assignment) + 1, q, cfg.resolution, cfg.seed, tuple(trace))


# ------------------------------------------------------------------ oracle


def brute_force_best_partition(g: WeightedGraph, resolution: float = 1.0) -> Partition:
    """Exhaustive search over all set partitions (at most 10 nodes).

    Partitions are visited as restricted growth strings in lexicographic
    order, so among equal optima the lexicographically smallest wins.
    """
    n = g.n
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force partition search limited to {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    A = g.csr.toarray()
    k = A.sum(axis=1)
    m2 = k.sum()
    if m2 <= 0:
        raise UndefinedModularityError("modularity is undefined on a graph without edges")
    B = (A - resolution * np.outer(k, k) / m2).tolist()

    best = [-np.inf, None]
    rgs = [0] * n
    # col_sums[c][j] = sum of B[m][j] over members m of community c
    col_sums: list[list[float]] = []

    def extend(i: int, acc: float):
        if i == n:
            if acc > best[0] + 1e-12:
                best[0], best[1] = acc, rgs[:]
            return
        for c in range(len(col_sums) + 1):
            fresh = c == len(col_sums)
            if fresh:
                col_sums.append([0.0] * n)
            sums = col_sums[c]
            gain = 2 * sums[i] + B[i][i]
            rgs[i] = c
            row = B[i]
            for j in range(n):
                sums[j] += row[j]
            extend(i + 1, acc + gain)
            if fresh:
                col_sums.pop()
            else:
                for j in range(n):
                    sums[j] -= row[j]

    extend(0, 0.0)
    assignment = tuple(best[1])
    return Partition(assignment, max(assignment) + 1, modularity(g, assignment, resolution), resolution)


# -------------------------------------------------------------- statistics


@dataclass(frozen=True)
class CommunityStats:
    community_id: int
    n_nodes: int
    n_edges: int
    density: float
    members: tuple[tuple[str, float], ...]  # (label, within-community strength)


def community_stats(g: WeightedGraph, p) -> list[CommunityStats]:
    assignment = _as_assignment(g, p)
    groups: dict[int, list[str]] = {}
    for label, c in zip(g.nodes, assignment):
        groups.setdefault(c, []).append(label)
    out = []
    for c in sorted(groups):
        sub = subgraph(g, groups[c])
        d = density(sub.n, sub.edge_count, "undirected")
        ranked = sorted(
            ((sub.nodes[i], float(sum(sub.adj[i].values()))) for i in range(sub.n)),
            key=lambda t: (-t[1], t[0]),
        )
        out.append(CommunityStats(c, sub.n, sub.edge_count, float(d) if d is not None else 0.0, tuple(ranked)))
    return out
