import itertools

import pytest

from tvf.graphs import Graph


def all_labeled_graphs(n):
    """Every labeled simple graph on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph(range(n), [pairs[i] for i in range(len(pairs)) if bits >> i & 1])


@pytest.fixture(scope="session")
def atlas():
    """All graphs on at most 7 vertices up to isomorphism (networkx atlas)."""
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for g in graph_atlas_g():
        out.append(Graph(range(g.number_of_nodes()), [tuple(e) for e in g.edges()]))
    return out


@pytest.fixture(scope="session")
def atlas6(atlas):
    return [G for G in atlas if G.n <= 6]
