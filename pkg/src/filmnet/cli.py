"""Command-line pipeline: fixture -> ingest -> build -> analyze -> report.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial analysis.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import comatrix, graph, ingest, report
from .centrality import METRICS, NORMALIZATIONS
from .community import LouvainConfig, louvain

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

WEIGHT_MODES = tuple(m.value for m in comatrix.WeightMode)
DEGREE_VARIANTS = ("binary", "strength")
FORMATS = ("text", "csv")


class UsageError(Exception):
    pass


@dataclass
class PipelineConfig:
    min_likes: int = 3
    require_likes_exceed_dislikes: bool = True
    min_film_score: float | None = None
    lemma_map: str | None = None
    weight_mode: str = "min"
    metric: str = "hop"
    normalization: str = "paper"
    degree: str = "binary"
    seed: int = 0
    resolution: float = 1.0
    top_k: int = 20
    top_n: int = 10
    out: str = "out"
    threads: int = 0
    format: str = "text"

    def validate(self):
        for name, allowed in (
            ("weight_mode", WEIGHT_MODES),
            ("metric", METRICS),
            ("normalization", NORMALIZATIONS),
            ("degree", DEGREE_VARIANTS),
            ("format", FORMATS),
        ):
            if getattr(self, name) not in allowed:
                raise UsageError(f"{name} must be one of {', '.join(allowed)}")
        if self.min_likes < 0:
            raise UsageError("min_likes must be >= 0")
        if self.top_k < 1 or self.top_n < 1:
            raise UsageError("top_k and top_n must be >= 1")
        if not self.resolution > 0:
            raise UsageError("resolution must be > 0")
        if self.threads < 0:
            raise UsageError("threads must be >= 0")

    @classmethod
    def load(cls, path: str | None, overrides: dict) -> "PipelineConfig":
        """Defaults, then the config file, then command-line flags."""
        values: dict = {}
        if path:
            try:
                loaded = json.loads(Path(path).read_text(encoding="utf-8"))
            except FileNotFoundError:
                raise UsageError(f"config file not found: {path}") from None
            except json.JSONDecodeError as exc:
                raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
            if not isinstance(loaded, dict):
                raise UsageError("config file must hold a flat JSON object")
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(loaded) - known)
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(unknown)}")
            for key, value in loaded.items():
                default = cls.__dataclass_fields__[key].default
                expected = (int, float) if isinstance(default, float) else type(default)
                if default is not None and (
                    not isinstance(value, expected) or (isinstance(value, bool) and expected is not bool)
                ):
                    raise UsageError(f"config key {key!r} has the wrong type")
            values.update(loaded)
        values.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def provenance(self) -> str:
        data = asdict(self)
        data.pop("out")  # keeps output trees comparable across directories
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat JSON config file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker cap (0 = auto)")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)

    parser = _Parser(prog="filmnet", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--format", choices=FORMATS, default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fixture", parents=[common], help="write a synthetic records file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--countries", type=_positive_int, default=12)
    p.add_argument("--films", type=_positive_int, default=60)
    p.add_argument("--keywords", type=_positive_int, default=20)
    p.add_argument("--hub", action="store_true", help="planted-hub corpus instead")
    p.add_argument("-o", "--output", help="records file (default: OUT/records.jsonl)")

    p = sub.add_parser("ingest", parents=[common], help="filter and normalize keywords")
    p.add_argument("input")
    p.add_argument("--min-likes", type=int, default=None)
    p.add_argument("--allow-disliked", action="store_true", help="do not require likes > dislikes")
    p.add_argument("--min-score", type=float, default=None, help="keep films scoring above this")
    p.add_argument("--lemma-map", default=None, help="raw<TAB>lemma file")
    p.add_argument("-o", "--output", help="default: OUT/records.filtered.jsonl")

    p = sub.add_parser("build", parents=[common], help="country co-occurrence matrix and edge list")
    p.add_argument("input")
    p.add_argument("--weight-mode", choices=WEIGHT_MODES, default=None)

    p = sub.add_parser("analyze", parents=[common], help="stats, centralities and communities")
    p.add_argument("input", help="edge list CSV (or matrix CSV with --matrix)")
    p.add_argument("--matrix", action="store_true", help="input is a square matrix CSV")
    p.add_argument("--counts", help="country,keyword,count file from build")
    p.add_argument("--metric", choices=METRICS, default=None)
    p.add_argument("--normalization", choices=NORMALIZATIONS, default=None)
    p.add_argument("--degree", choices=DEGREE_VARIANTS, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--resolution", type=float, default=None)
    p.add_argument("--top-k", type=_positive_int, default=None)
    p.add_argument("--top-n", type=_positive_int, default=None)

    p = sub.add_parser("report", parents=[common], help="render tables from an analyze directory")
    p.add_argument("input", help="directory written by analyze")
    p.add_argument("--top-k", type=_positive_int, default=None)
    return parser


def _warn(msg: str):
    print(f"filmnet: warning: {msg}", file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}") from None


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------- subcommands


def cmd_fixture(args, cfg: PipelineConfig) -> int:
    if args.hub:
        records = ingest.generate_hub_fixture(cfg.seed, args.countries)
    else:
        records = ingest.generate_fixture(cfg.seed, args.countries, args.films, args.keywords)
    path = Path(args.output) if args.output else _out_dir(cfg) / "records.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    ingest.write_records(records, path)
    print(f"seed: {cfg.seed}")
    print(f"records: {len(records)} -> {path}")
    return EXIT_OK


def cmd_ingest(args, cfg: PipelineConfig) -> int:
    if not Path(args.input).is_file():
        raise FileNotFoundError(f"no such file: {args.input}")
    policy = ingest.FilterPolicy(cfg.min_likes, cfg.require_likes_exceed_dislikes, cfg.min_film_score)
    lemma_map = ingest.load_lemma_map(cfg.lemma_map) if cfg.lemma_map else None
    errors: list[ingest.LineError] = []
    records = ingest.read_records(args.input, errors)
    for e in errors:
        _warn(f"{args.input}: {e}")
    kept = ingest.filter_by_score(records, policy)
    kept = ingest.normalize_records(ingest.filter_keywords(kept, policy), lemma_map)
    path = Path(args.output) if args.output else _out_dir(cfg) / "records.filtered.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    ingest.write_records(kept, path)
    kw_in = sum(len(r.keywords) for r in records)
    kw_out = sum(len(r.keywords) for r in kept)
    print(
        f"records in: {len(records)} out: {len(kept)}; keywords in: {kw_in} out: {kw_out}; "
        f"skipped lines: {len(errors)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_build(args, cfg: PipelineConfig) -> int:
    if not Path(args.input).is_file():
        raise FileNotFoundError(f"no such file: {args.input}")
    records = ingest.read_records(args.input)
    counts = comatrix.tally_counts(records)
    if not counts.countries:
        print(f"filmnet: error: {args.input} contains no countries", file=sys.stderr)
        return EXIT_DATA
    m = comatrix.build_matrix(counts, cfg.weight_mode)
    edges = comatrix.matrix_to_edge_list(m)
    out = _out_dir(cfg)
    comatrix.write_text(out / "matrix.csv", comatrix.matrix_to_csv(m))
    comatrix.write_text(out / "edges.csv", comatrix.edge_list_to_csv(edges))
    comatrix.write_text(out / "counts.csv", comatrix.counts_to_csv(counts))
    if not edges:
        _warn("no keyword is shared between any two countries; edge list is empty")
    print(f"nodes: {len(m.countries)} edges: {len(edges)} (weight mode {cfg.weight_mode})")
    return EXIT_OK


def _load_graph(args, counts) -> graph.WeightedGraph:
    text = _read(args.input)
    if args.matrix:
        return graph.from_matrix(comatrix.matrix_from_csv(text))
    g = graph.read_edge_csv(text)
    labels = set(g.nodes) | set(counts.countries if counts is not None else ())
    return graph.read_edge_csv(text, sorted(labels))


def cmd_analyze(args, cfg: PipelineConfig) -> int:
    counts = comatrix.counts_from_csv(_read(args.counts)) if args.counts else None
    g = _load_graph(args, counts)
    out = _out_dir(cfg)
    text = cfg.format == "text"

    stats_txt = report.stats_report(g)
    comatrix.write_text(out / "stats.txt", stats_txt)
    comatrix.write_text(out / "graph.gexf", graph.to_gexf(g))
    comatrix.write_text(out / "config.json", cfg.provenance())
    if text:
        print(stats_txt)

    scores = report.compute_scores(g, cfg.metric, cfg.normalization, cfg.degree == "strength")
    table = report.table_from_scores(scores, cfg.top_k)
    comatrix.write_text(out / "scores.csv", report.scores_to_csv(scores))
    comatrix.write_text(out / f"centrality_top{cfg.top_k}.csv", report.centrality_table_to_csv(table))
    if text:
        print(report.render_centrality_text(table))

    if g.edge_count == 0:
        _warn("graph has no edges; eigenvector centrality and communities skipped")
        return EXIT_PARTIAL

    p = louvain(g, LouvainConfig(seed=cfg.seed, resolution=cfg.resolution))
    profiles = report.community_profiles(g, p, counts, cfg.top_n)
    comatrix.write_text(out / "partition.csv", report.partition_to_csv(g, p))
    comatrix.write_text(out / "communities.csv", report.communities_to_csv(profiles))
    if counts is not None:
        comatrix.write_text(out / "community_keywords.csv", report.community_keywords_to_csv(profiles))
    label = "modularity" if cfg.resolution == 1.0 else f"modularity (resolution {cfg.resolution:g})"
    comatrix.write_text(out / "modularity.txt", f"{label}: {p.modularity:.10g}\n")
    if text:
        kws = {c.community_id: list(c.top_keywords) for c in profiles} if counts is not None else None
        print(report.render_communities_text(report.profiles_as_rows(profiles), kws))
    print(f"{label}: {p.modularity:.4f}")
    return EXIT_OK


def cmd_report(args, cfg: PipelineConfig) -> int:
    src = Path(args.input)
    if not src.is_dir():
        raise FileNotFoundError(f"no such directory: {src}")
    stats_txt = _read(src / "stats.txt")
    scores = report.scores_from_csv(_read(src / "scores.csv"))
    table = report.table_from_scores(scores, cfg.top_k)
    rows = report.communities_from_csv(_read(src / "communities.csv")) if (src / "communities.csv").exists() else None
    kw_path = src / "community_keywords.csv"
    keywords = report.community_keywords_from_csv(_read(kw_path)) if kw_path.exists() else None
    if cfg.format == "csv":
        out = _out_dir(cfg)
        comatrix.write_text(out / "stats.txt", stats_txt)
        comatrix.write_text(out / f"centrality_top{cfg.top_k}.csv", report.centrality_table_to_csv(table))
        for name in ("communities.csv", "community_keywords.csv"):
            if (src / name).exists() and (src / name).resolve() != (out / name).resolve():
                comatrix.write_text(out / name, _read(src / name))
        return EXIT_OK
    print(stats_txt)
    print(report.render_centrality_text(table))
    if rows is not None:
        mod_path = src / "modularity.txt"
        if mod_path.exists():
            print(_read(mod_path).strip())
        print(report.render_communities_text(rows, keywords))
    return EXIT_OK


COMMANDS = {
    "fixture": cmd_fixture,
    "ingest": cmd_ingest,
    "build": cmd_build,
    "analyze": cmd_analyze,
    "report": cmd_report,
}


def _overrides(args) -> dict:
    ns = vars(args)
    over = {
        "out": ns.get("out"),
        "threads": ns.get("threads"),
        "format": ns.get("format"),
        "seed": ns.get("seed"),
        "min_likes": ns.get("min_likes"),
        "min_film_score": ns.get("min_score"),
        "lemma_map": ns.get("lemma_map"),
        "weight_mode": ns.get("weight_mode"),
        "metric": ns.get("metric"),
        "normalization": ns.get("normalization"),
        "degree": ns.get("degree"),
        "resolution": ns.get("resolution"),
        "top_k": ns.get("top_k"),
        "top_n": ns.get("top_n"),
    }
    if ns.get("allow_disliked"):
        over["require_likes_exceed_dislikes"] = False
    return over


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = PipelineConfig.load(args.config, _overrides(args))
    except (UsageError, TypeError) as exc:
        print(f"filmnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, cfg)
    except (FileNotFoundError, ingest.IngestError, graph.GraphError, comatrix.EmptyInputError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"filmnet: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
