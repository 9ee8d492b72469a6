import itertools
import os

import pytest
from hypothesis import HealthCheck, settings

from cobiased.corpus import DEFAULT_CORPUS
from cobiased.graph import Multigraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=sorted(DEFAULT_CORPUS))
def corpus_graph(request) -> Multigraph:
    return DEFAULT_CORPUS[request.param]


def set_partitions(items):
    """All set partitions of ``items`` (independent of the library's enumerator)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] | {first}] + smaller[i + 1:]
        yield [{first}] + smaller


def components_after_removing(g: Multigraph, removed) -> int:
    """Component count of ``g`` minus ``removed`` by plain depth-first search."""
    removed = set(removed)
    adj = {v: set() for v in g.vertices}
    for e, (u, v) in enumerate(g.edges):
        if e not in removed:
            adj[u].add(v)
            adj[v].add(u)
    seen, count = set(), 0
    for s in g.vertices:
        if s in seen:
            continue
        count += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x] - seen)
    return count


def brute_force_bonds(g: Multigraph) -> set[frozenset[int]]:
    """Edge sets whose removal raises the component count by one and that are minimal with that property."""
    links = [e for e, (u, v) in enumerate(g.edges) if u != v]
    base = components_after_removing(g, ())
    cuts = set()
    for k in range(1, len(links) + 1):
        for s in itertools.combinations(links, k):
            s = frozenset(s)
            if components_after_removing(g, s) != base + 1:
                continue
            if any(c <= s for c in cuts):
                continue
            cuts.add(s)
    return cuts
