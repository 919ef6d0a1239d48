"""Run fixture -> ingest -> build -> analyze into one directory and show the report."""

import argparse
import sys
from pathlib import Path

from filmnet.cli import main


def run(out: Path, seed: int, hub: bool, countries: int, films: int, keywords: int) -> int:
    fixture = ["fixture", "--seed", str(seed), "--countries", str(countries)]
    fixture += ["--hub"] if hub else ["--films", str(films), "--keywords", str(keywords)]
    steps = [
        fixture,
        ["ingest", str(out / "records.jsonl")],
        ["build", str(out / "records.filtered.jsonl")],
        ["analyze", str(out / "edges.csv"), "--counts", str(out / "counts.csv"), "--format", "csv",
         "--seed", str(seed)],
        ["report", str(out)],
    ]
    for argv in steps:
        code = main(argv + ["--out", str(out)])
        if code != 0:
            print(f"step {argv[0]} exited with {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("demo_out"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--hub", action="store_true", help="use the planted-hub corpus")
    ap.add_argument("--countries", type=int, default=30)
    ap.add_argument("--films", type=int, default=400)
    ap.add_argument("--keywords", type=int, default=60)
    a = ap.parse_args()
    sys.exit(run(a.out, a.seed, a.hub, a.countries, a.films, a.keywords))
