"""Country co-occurrence networks from film keyword records."""

from .centrality import (
    CentralityScores,
    ConvergenceError,
    betweenness_centrality,
    brute_force_betweenness,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    rank_top_k,
)
from .comatrix import CoMatrix, CountryKeywordCounts, WeightMode, build_matrix, matrix_to_edge_list, tally_counts
from .community import (
    LouvainConfig,
    Partition,
    brute_force_best_partition,
    community_stats,
    louvain,
    louvain_aggregate,
    louvain_phase1,
    modularity,
)
from .graph import GraphStats, WeightedGraph, density, export, from_matrix, shortest_path_lengths, stats, subgraph
from .ingest import (
    FilmRecord,
    FilterPolicy,
    KeywordStat,
    filter_keywords,
    generate_fixture,
    normalize_keyword,
    parse_records,
)

__version__ = "0.1.0"
