"""Time the analysis stage on the graph sizes the performance targets name."""

import argparse
import time

from filmnet import synthetic
from filmnet.community import LouvainConfig, louvain
from filmnet.report import community_profiles, compute_scores, stats_report, table_from_scores


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start


def analyze(g, seed=0):
    stats_report(g)
    scores = compute_scores(g)
    table_from_scores(scores, 20)
    p = louvain(g, LouvainConfig(seed=seed))
    community_profiles(g, p)
    return p


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    small = synthetic.gnm(150, 7800, seed=a.seed, max_weight=20)
    best = min(timed(analyze, small, a.seed)[1] for _ in range(a.repeats))
    print(f"analyze 150 nodes / 7800 edges: {best:.3f} s (best of {a.repeats})")

    for name, g in (
        ("G(n,m)", synthetic.gnm(10_000, 100_000, seed=a.seed)),
        ("planted partition", synthetic.planted_partition(10_000, 50, 20, 0.2, seed=a.seed)),
    ):
        p, secs = timed(louvain, g, LouvainConfig(seed=a.seed))
        print(f"louvain {name} {g.n} nodes / {g.edge_count} edges: {secs:.2f} s, "
              f"{p.n_communities} communities, Q={p.modularity:.4f}")
