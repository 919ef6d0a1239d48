"""Plain-text and CSV renderings of macro stats, centrality rankings and communities.

Formatting is frozen so reports are byte-identical across runs: densities
to 3 decimals, centralities to 4 significant digits in tables and 10 in the
raw score export.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .centrality import (
    HOP,
    PAPER,
    CentralityScores,
    ConvergenceError,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    rank_top_k,
)
from .comatrix import CountryKeywordCounts
from .community import CommunityStats, Partition, community_stats
from .graph import WeightedGraph, stats

TABLE_MEASURES = ("degree", "betweenness", "closeness", "eigenvector")


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _fixed(x: Fraction | None, places: int) -> str:
    return "n/a" if x is None else f"{float(x):.{places}f}"


# ------------------------------------------------------------ macro stats


def stats_report(g: WeightedGraph) -> str:
    s = stats(g)
    lines = [
        f"nodes: {s.n_nodes}",
        f"edges: {s.n_edges}",
        f"avg_degree (paper-convention): {_fixed(s.avg_degree_paper, 2)}",
        f"avg_degree (undirected): {_fixed(s.avg_degree_undirected, 2)}",
        f"density (paper-convention): {_fixed(s.density_paper, 3)}",
        f"density (undirected): {_fixed(s.density_undirected, 3)}",
        f"components: {s.n_components}",
        f"largest_component_size: {s.largest_component_size}",
    ]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- centrality


def compute_scores(
    g: WeightedGraph,
    metric: str = HOP,
    normalization: str = PAPER,
    weighted_degree: bool = False,
) -> dict[str, CentralityScores]:
    """All table measures keyed by column name.

    ``eigenvector`` is left out when it is undefined (edgeless graphs).
    """
    scores = {
        "degree": degree_centrality(g, weighted=weighted_degree),
        "betweenness": betweenness_centrality(g, normalization, metric),
        "closeness": closeness_centrality(g, metric),
    }
    try:
        scores["eigenvector"] = eigenvector_centrality(g)
    except ConvergenceError:
        if g.edge_count:
            raise
    return scores


@dataclass
class CentralityTable:
    k: int
    columns: dict[str, list[tuple[str, float]]]
    params: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return max((len(c) for c in self.columns.values()), default=0)


def table_from_scores(scores: dict[str, CentralityScores], k: int = 20) -> CentralityTable:
    columns = {m: rank_top_k(scores[m], k) for m in TABLE_MEASURES if m in scores}
    params = {m: scores[m].params for m in columns}
    if "degree" in scores:
        params["degree_variant"] = "strength" if scores["degree"].measure == "strength" else "binary"
    return CentralityTable(k, columns, params)


def centrality_table(g: WeightedGraph, k: int = 20, **options) -> CentralityTable:
    """Top-``k`` ranking per measure; each column is ranked independently."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return table_from_scores(compute_scores(g, **options), k)


def render_centrality_text(table: CentralityTable) -> str:
    measures = list(table.columns)
    header = ["rank"] + [
        f"degree ({table.params.get('degree_variant', 'degree')})" if m == "degree" else m
        for m in measures
    ]
    rows = [header]
    for r in range(table.n_rows):
        row = [str(r + 1)]
        for m in measures:
            col = table.columns[m]
            row.append(f"{col[r][0]} ({col[r][1]:.4g})" if r < len(col) else "")
        rows.append(row)
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in rows
    )


def centrality_table_to_csv(table: CentralityTable) -> str:
    measures = list(table.columns)
    rows = [["rank", *measures]]
    for r in range(table.n_rows):
        rows.append(
            [r + 1]
            + [table.columns[m][r][0] if r < len(table.columns[m]) else "" for m in measures]
        )
    return _csv(rows)


def centrality_table_from_csv(text: str) -> dict[str, list[str]]:
    """Column name -> ranked labels."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    cols: dict[str, list[str]] = {m: [] for m in header[1:]}
    for row in reader:
        for m, label in zip(header[1:], row[1:]):
            if label:
                cols[m].append(label)
    return cols


def scores_to_csv(scores: dict[str, CentralityScores]) -> str:
    rows = [["node", "measure", "value"]]
    for s in scores.values():
        rows += [[node, s.measure, f"{v:.10g}"] for node, v in zip(s.nodes, s.values)]
    return _csv(rows)


def scores_from_csv(text: str) -> dict[str, CentralityScores]:
    """Inverse of :func:`scores_to_csv`; keys follow the table column names."""
    per: dict[str, tuple[list[str], list[float]]] = {}
    for r in csv.DictReader(io.StringIO(text)):
        nodes, vals = per.setdefault(r["measure"], ([], []))
        nodes.append(r["node"])
        vals.append(float(r["value"]))
    out = {}
    for measure, (nodes, vals) in per.items():
        key = "degree" if measure == "strength" else measure
        out[key] = CentralityScores(measure, tuple(nodes), tuple(vals))
    return out


# ------------------------------------------------------------ communities


@dataclass(frozen=True)
class CommunityProfile:
    community_id: int
    n_nodes: int
    n_edges: int
    density: float
    top_countries: tuple[str, ...]
    top_keywords: tuple[tuple[str, int], ...]


def community_profiles(
    g: WeightedGraph,
    p: Partition,
    counts: CountryKeywordCounts | None = None,
    top_n: int = 10,
) -> list[CommunityProfile]:
    """One profile per community. Keywords rank by summed film counts over members."""
    if counts is not None:
        known = set(counts.countries)
        for label in g.nodes:
            if label not in known:
                raise KeyError(f"node {label!r} missing from keyword counts")
        row_of = {c: i for i, c in enumerate(counts.countries)}
    profiles = []
    for cs in community_stats(g, p):
        keywords: tuple[tuple[str, int], ...] = ()
        if counts is not None:
            rows = [row_of[label] for label, _ in cs.members]
            totals = counts.counts[rows].sum(axis=0)
            ranked = sorted(
                ((counts.keywords[j], int(totals[j])) for j in totals.nonzero()[0]),
                key=lambda t: (-t[1], t[0]),
            )
            keywords = tuple(ranked[:top_n])
        profiles.append(
            CommunityProfile(
                cs.community_id,
                cs.n_nodes,
                cs.n_edges,
                cs.density,
                tuple(label for label, _ in cs.members[:top_n]),
                keywords,
            )
        )
    return profiles


def partition_to_csv(g: WeightedGraph, p: Partition) -> str:
    return _csv([["node", "community"], *zip(g.nodes, p.assignment)])


def partition_from_csv(text: str) -> dict[str, int]:
    return {r["node"]: int(r["community"]) for r in csv.DictReader(io.StringIO(text))}


def communities_to_csv(profiles: list[CommunityProfile] | list[CommunityStats]) -> str:
    rows = [["community_id", "n_nodes", "n_edges", "density", "top_members"]]
    for c in profiles:
        members = c.top_countries if isinstance(c, CommunityProfile) else [m for m, _ in c.members]
        rows.append([c.community_id, c.n_nodes, c.n_edges, f"{c.density:.3f}", ";".join(members)])
    return _csv(rows)


def communities_from_csv(text: str) -> list[dict]:
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append(
            {
                "community_id": int(r["community_id"]),
                "n_nodes": int(r["n_nodes"]),
                "n_edges": int(r["n_edges"]),
                "density": r["density"],
                "top_members": r["top_members"].split(";") if r["top_members"] else [],
            }
        )
    return out


def community_keywords_to_csv(profiles: list[CommunityProfile]) -> str:
    rows = [["community_id", "rank", "keyword", "count"]]
    for c in profiles:
        rows += [[c.community_id, r + 1, kw, n] for r, (kw, n) in enumerate(c.top_keywords)]
    return _csv(rows)


def community_keywords_from_csv(text: str) -> dict[int, list[tuple[str, int]]]:
    out: dict[int, list[tuple[str, int]]] = {}
    for r in csv.DictReader(io.StringIO(text)):
        out.setdefault(int(r["community_id"]), []).append((r["keyword"], int(r["count"])))
    return out


def render_communities_text(
    rows: list[dict], keywords: dict[int, list[tuple[str, int]]] | None = None, modularity: float | None = None
) -> str:
    """``rows`` as returned by :func:`communities_from_csv`."""
    out = []
    if modularity is not None:
        out.append(f"modularity: {modularity:.4f}")
    out.append(f"communities: {len(rows)}")
    for r in rows:
        out.append(
            f"[{r['community_id']}] nodes={r['n_nodes']} edges={r['n_edges']} density={r['density']}"
        )
        out.append("    countries: " + ", ".join(r["top_members"]))
        if keywords is not None:
            kws = keywords.get(r["community_id"], [])
            out.append("    keywords: " + ", ".join(f"{k} ({n})" for k, n in kws))
    return "\n".join(out) + "\n"


def profiles_as_rows(profiles: list[CommunityProfile]) -> list[dict]:
    return communities_from_csv(communities_to_csv(profiles))
