import itertools
import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from filmnet.graph import WeightedGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=8, max_weight=5, connected=False, min_edges=0):
    """Random simple weighted graphs; ``connected`` adds a random spanning tree."""
    n = draw(st.integers(min_n, max_n))
    labels = [f"v{i}" for i in range(n)]
    edges = {}
    if connected:
        for k in range(1, n):
            j = draw(st.integers(0, k - 1))
            edges[(j, k)] = draw(st.integers(1, max_weight))
    for i, j in itertools.combinations(range(n), 2):
        if (i, j) not in edges and draw(st.booleans()):
            edges[(i, j)] = draw(st.integers(1, max_weight))
    if len(edges) < min_edges:
        for i, j in itertools.combinations(range(n), 2):
            if len(edges) >= min_edges:
                break
            edges.setdefault((i, j), 1)
    return WeightedGraph.from_edges(
        [(labels[i], labels[j], w) for (i, j), w in edges.items()], labels
    )
