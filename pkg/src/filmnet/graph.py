"""Weighted undirected graph substrate, macro statistics and exchange formats."""

from __future__ import annotations

import csv
import heapq
import io
import math
import re
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from .comatrix import CoMatrix

Number = int | float

HOP = "hop"
INVERSE_WEIGHT = "inverse_weight"
METRICS = (HOP, INVERSE_WEIGHT)


class GraphError(ValueError):
    pass


def _num(w) -> Number:
    """Plain Python number; integral values become ``int``."""
    if isinstance(w, (np.integer, int)) and not isinstance(w, bool):
        return int(w)
    w = float(w)
    return int(w) if w.is_integer() else w


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable undirected graph with positive edge weights.

    ``adj[i]`` maps neighbour index to weight. ``loops`` holds self-loop
    weights and is only populated on community-aggregated graphs.
    """

    nodes: tuple[str, ...]
    adj: tuple[dict[int, Number], ...]
    loops: tuple[Number, ...] | None = None

    @classmethod
    def from_edges(
        cls, edges: Iterable[tuple[str, str, Number]], nodes: Sequence[str] | None = None
    ) -> "WeightedGraph":
        edges = list(edges)
        if nodes is None:
            seen: dict[str, None] = {}
            for a, b, _ in edges:
                seen.setdefault(a, None)
                seen.setdefault(b, None)
            nodes = tuple(seen)
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("duplicate node labels")
        index = {v: i for i, v in enumerate(nodes)}
        adj: list[dict[int, Number]] = [{} for _ in nodes]
        for a, b, w in edges:
            if a not in index or b not in index:
                raise GraphError(f"edge ({a!r}, {b!r}) references an unknown node")
            if a == b:
                raise GraphError(f"self-loop on {a!r}")
            w = _num(w)
            if not w > 0 or not math.isfinite(w):
                raise GraphError(f"edge ({a!r}, {b!r}) has non-positive weight {w!r}")
            i, j = index[a], index[b]
            if j in adj[i]:
                raise GraphError(f"parallel edge ({a!r}, {b!r})")
            adj[i][j] = w
            adj[j][i] = w
        return cls(nodes, tuple(adj))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int, Number]]:
        """Each undirected edge once as ``(i, j, w)`` with ``i < j``."""
        for i, nbrs in enumerate(self.adj):
            for j, w in nbrs.items():
                if i < j:
                    yield i, j, w

    def labeled_edges(self) -> list[tuple[str, str, Number]]:
        out = []
        for i, j, w in self.edges():
            a, b = sorted((self.nodes[i], self.nodes[j]))
            out.append((a, b, w))
        out.sort()
        return out

    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def strength(self, i: int) -> Number:
        s = sum(self.adj[i].values())
        if self.loops:
            s += 2 * self.loops[i]
        return s

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        """Weighted adjacency (loops on the diagonal at twice their weight)."""
        rows, cols, vals = [], [], []
        for i, nbrs in enumerate(self.adj):
            for j, w in nbrs.items():
                rows.append(i)
                cols.append(j)
                vals.append(float(w))
        if self.loops:
            for i, w in enumerate(self.loops):
                if w:
                    rows.append(i)
                    cols.append(i)
                    vals.append(2.0 * w)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.adj == other.adj
            and tuple(self.loops or ()) == tuple(other.loops or ())
        )

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.edge_count})"


def from_matrix(m: CoMatrix) -> WeightedGraph:
    """One node per country (isolated ones included), one edge per positive weight."""
    W = np.asarray(m.weights)
    adj: list[dict[int, Number]] = [{} for _ in m.countries]
    for i, j in zip(*np.nonzero(np.triu(W, k=1))):
        w = int(W[i, j])
        adj[i][int(j)] = w
        adj[j][int(i)] = w
    return WeightedGraph(tuple(m.countries), tuple(adj))


# ------------------------------------------------------------------ stats


def density(n: int, e: int, convention: str = "undirected") -> Fraction | None:
    """Edge density; ``None`` when fewer than two nodes.

    ``undirected`` divides by n(n-1)/2, ``paper`` by n(n-1).
    """
    if n < 2:
        return None
    possible = n * (n - 1)
    if convention == "undirected":
        return Fraction(2 * e, possible)
    if convention == "paper":
        return Fraction(e, possible)
    raise ValueError(f"unknown density convention {convention!r}")


@dataclass(frozen=True)
class GraphStats:
    n_nodes: int
    n_edges: int
    avg_degree_undirected: Fraction | None
    avg_degree_paper: Fraction | None
    density_undirected: Fraction | None
    density_paper: Fraction | None
    n_components: int
    largest_component_size: int


def connected_components(g: WeightedGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def stats(g: WeightedGraph) -> GraphStats:
    n, e = g.n, g.edge_count
    comps = connected_components(g)
    return GraphStats(
        n_nodes=n,
        n_edges=e,
        avg_degree_undirected=Fraction(2 * e, n) if n else None,
        avg_degree_paper=Fraction(e, n) if n else None,
        density_undirected=density(n, e, "undirected"),
        density_paper=density(n, e, "paper"),
        n_components=len(comps),
        largest_component_size=max((len(c) for c in comps), default=0),
    )


def subgraph(g: WeightedGraph, keep: Iterable[str]) -> WeightedGraph:
    """Induced subgraph on ``keep``; node order follows ``g``."""
    keep = set(keep)
    for label in sorted(keep):
        if label not in g.index:
            raise GraphError(f"unknown node {label!r}")
    old = [i for i, v in enumerate(g.nodes) if v in keep]
    new_of = {o: k for k, o in enumerate(old)}
    adj = tuple({new_of[j]: w for j, w in g.adj[i].items() if j in new_of} for i in old)
    loops = tuple(g.loops[i] for i in old) if g.loops else None
    return WeightedGraph(tuple(g.nodes[i] for i in old), adj, loops)


# ---------------------------------------------------------- shortest paths


def single_source_distances(g: WeightedGraph, source: int, metric: str = HOP) -> list[float]:
    """Distances from node index ``source``; ``inf`` for unreachable nodes."""
    dist = [math.inf] * g.n
    dist[source] = 0
    if metric == HOP:
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in g.adj[v]:
                if dist[w] == math.inf:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist
    if metric != INVERSE_WEIGHT:
        raise ValueError(f"unknown metric {metric!r}")
    done = [False] * g.n
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for w, wt in g.adj[v].items():
            nd = d + 1.0 / wt
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def shortest_path_lengths(g: WeightedGraph, source: str, metric: str = HOP) -> dict[str, float]:
    dist = single_source_distances(g, g.index[source], metric)
    return dict(zip(g.nodes, dist))


# ---------------------------------------------------------------- exports

EDGE_CSV = "edge_csv"
GEXF = "gexf"
GEXF_NS = "http://www.gexf.net/1.2draft"


def _fmt_weight(w: Number) -> str:
    return str(w) if isinstance(w, int) else repr(float(w))


def to_edge_csv(g: WeightedGraph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for a, b, w in g.labeled_edges():
        writer.writerow([a, b, _fmt_weight(w)])
    return buf.getvalue()


_INT_RE = re.compile(r"^[+-]?\d+$")


def read_edge_csv(text: str, nodes: Sequence[str] | None = None) -> WeightedGraph:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["source", "target", "weight"]:
        raise GraphError("edge list needs header source,target,weight")
    edges = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise GraphError(f"line {line_no}: expected 3 fields, got {len(row)}")
        a, b, w = row
        try:
            weight = int(w) if _INT_RE.match(w.strip()) else float(w)
        except ValueError:
            raise GraphError(f"line {line_no}: bad weight {w!r}") from None
        edges.append((a, b, weight))
    return WeightedGraph.from_edges(edges, nodes)


def to_gexf(g: WeightedGraph) -> str:
    ET.register_namespace("", GEXF_NS)
    root = ET.Element(f"{{{GEXF_NS}}}gexf", {"version": "1.2"})
    meta = ET.SubElement(root, f"{{{GEXF_NS}}}meta")
    ET.SubElement(meta, f"{{{GEXF_NS}}}creator").text = "filmnet"
    graph = ET.SubElement(
        root, f"{{{GEXF_NS}}}graph", {"mode": "static", "defaultedgetype": "undirected"}
    )
    nodes_el = ET.SubElement(graph, f"{{{GEXF_NS}}}nodes")
    for i, label in enumerate(g.nodes):
        ET.SubElement(nodes_el, f"{{{GEXF_NS}}}node", {"id": str(i), "label": label})
    edges_el = ET.SubElement(graph, f"{{{GEXF_NS}}}edges")
    for k, (i, j, w) in enumerate(g.edges()):
        ET.SubElement(
            edges_el,
            f"{{{GEXF_NS}}}edge",
            {"id": str(k), "source": str(i), "target": str(j), "weight": _fmt_weight(w)},
        )
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export(g: WeightedGraph, format: str = EDGE_CSV) -> bytes:
    if format == EDGE_CSV:
        return to_edge_csv(g).encode("utf-8")
    if format == GEXF:
        return to_gexf(g).encode("utf-8")
    raise ValueError(f"unknown export format {format!r}")
