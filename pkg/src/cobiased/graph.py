"""Multigraphs with dense edge ids and the lattice of connected partitions.

Vertices are ``0..n-1``.  Edge ``i`` is ``edges[i]``, an ordered pair of
endpoints (equal endpoints make a loop).  Edge identity never depends on the
endpoints, so parallel edges stay distinct and minors renumber by shifting
the ids above the removed edge down by one.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import FormatError, GuardExceededError, NotInLatticeError, UnknownEdgeError

MAX_PARTITION_VERTICES = 12
MAX_SUBSET_EDGES = 20


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise ValueError("negative vertex count")
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {i} references an undeclared vertex")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def ends(self, e: int) -> tuple[int, int]:
        if not 0 <= e < len(self.edges):
            raise UnknownEdgeError(f"unknown edge id {e}")
        return self.edges[e]

    def is_loop(self, e: int) -> bool:
        u, v = self.ends(e)
        return u == v

    def other_end(self, e: int, x: int) -> int:
        u, v = self.edges[e]
        return v if x == u else u

    @cached_property
    def links(self) -> tuple[int, ...]:
        return tuple(e for e, (u, v) in enumerate(self.edges) if u != v)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids at each vertex, in id order; a loop is listed once."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def component_labels(self) -> tuple[int, ...]:
        return tuple(component_labels(self, range(self.m)))

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        return _groups(self.component_labels)

    @property
    def num_components(self) -> int:
        return len(self.components)

    def check_edges(self, edges: Iterable[int]) -> frozenset[int]:
        out = frozenset(edges)
        for e in out:
            if not (isinstance(e, int) and 0 <= e < self.m):
                raise UnknownEdgeError(f"unknown edge id {e}")
        return out

    def mask(self, edges: Iterable[int]) -> int:
        bits = 0
        for e in self.check_edges(edges):
            bits |= 1 << e
        return bits

    def delete_edge(self, e: int) -> Multigraph:
        self.ends(e)
        return Multigraph(self.n, self.edges[:e] + self.edges[e + 1:])

    def contraction_vertex_map(self, e: int) -> tuple[int, ...]:
        """Where each vertex goes when link ``e`` is contracted.

        The larger endpoint merges into the smaller one; vertices above it
        shift down by one.
        """
        u, v = self.ends(e)
        keep, gone = min(u, v), max(u, v)
        return tuple(keep if z == gone else (z if z < gone else z - 1) for z in range(self.n))

    def contract_edge(self, e: int) -> Multigraph:
        u, v = self.ends(e)
        if u == v:
            from .errors import LoopContractionError

            raise LoopContractionError(f"edge {e} is a loop")
        f = self.contraction_vertex_map(e)
        rest = self.edges[:e] + self.edges[e + 1:]
        return Multigraph(self.n - 1, tuple((f[a], f[b]) for a, b in rest))


def shifted_id(x: int, removed: int) -> int:
    """New id of element ``x`` after element ``removed`` leaves a dense numbering."""
    return x if x < removed else x - 1


def _groups(labels: Sequence[int]) -> tuple[frozenset[int], ...]:
    buckets: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        buckets.setdefault(lab, []).append(v)
    return tuple(sorted((frozenset(b) for b in buckets.values()), key=min))


def component_labels(g: Multigraph, edges: Iterable[int]) -> list[int]:
    """Label each vertex by the smallest vertex of its component in ``(V, edges)``."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(g.edges[e][0]), find(g.edges[e][1])
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    return [find(v) for v in range(g.n)]


def count_components(g: Multigraph, edges: Iterable[int]) -> int:
    return len(set(component_labels(g, edges)))


# --- connected partitions ---------------------------------------------------


@dataclass(frozen=True)
class ConnectedPartition:
    """A partition of the vertex set, parts ordered by their minimum vertex."""

    parts: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        parts = tuple(sorted((frozenset(p) for p in self.parts), key=min))
        seen: set[int] = set()
        for p in parts:
            if not p:
                raise NotInLatticeError("empty part")
            if seen & p:
                raise NotInLatticeError("parts overlap")
            seen |= p
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> ConnectedPartition:
        return cls(_groups(labels))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.parts)

    @cached_property
    def labels(self) -> dict[int, int]:
        return {v: i for i, p in enumerate(self.parts) for v in p}

    def refines(self, other: ConnectedPartition) -> bool:
        """True when every part of ``self`` lies inside a part of ``other``."""
        lab = other.labels
        return all(len({lab[v] for v in p}) == 1 for p in self.parts)

    def __str__(self) -> str:
        return "|".join(",".join(map(str, sorted(p))) for p in self.parts)


def is_connected_subset(g: Multigraph, vertices: Iterable[int], edges: Iterable[int] | None = None) -> bool:
    """Whether the subgraph induced on ``vertices`` (using only ``edges`` if given) is connected."""
    vs = set(vertices)
    if not vs:
        return False
    allowed = None if edges is None else set(edges)
    start = min(vs)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for e in g.incidence[x]:
            if allowed is not None and e not in allowed:
                continue
            y = g.other_end(e, x)
            if y in vs and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def check_partition(g: Multigraph, pi: ConnectedPartition) -> None:
    """Raise unless ``pi`` belongs to the lattice of connected partitions of ``g``."""
    covered = frozenset().union(*pi.parts) if pi.parts else frozenset()
    if covered != frozenset(g.vertices):
        raise NotInLatticeError("partition does not cover the vertex set")
    for p in pi.parts:
        if not is_connected_subset(g, p):
            raise NotInLatticeError(f"part {sorted(p)} does not induce a connected subgraph")


def induced_partition(g: Multigraph, h: Iterable[int]) -> ConnectedPartition:
    """Components of the spanning subgraph ``(V(g), h)``."""
    h = g.check_edges(h)
    return ConnectedPartition.from_labels(component_labels(g, sorted(h)))


def interior(g: Multigraph, pi: ConnectedPartition) -> frozenset[int]:
    check_partition(g, pi)
    lab = pi.labels
    return frozenset(e for e, (u, v) in enumerate(g.edges) if lab[u] == lab[v])


def exterior(g: Multigraph, pi: ConnectedPartition) -> frozenset[int]:
    """Edges joining different parts; a disjoint union of bonds of ``g``."""
    check_partition(g, pi)
    lab = pi.labels
    return frozenset(e for e, (u, v) in enumerate(g.edges) if lab[u] != lab[v])


def join_partitions(p: ConnectedPartition, q: ConnectedPartition) -> ConnectedPartition:
    """Finest common coarsening (transitive closure of both equivalences)."""
    verts = sorted(p.labels)
    parent = {v: v for v in verts}

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    for part in (*p.parts, *q.parts):
        first = min(part)
        for v in part:
            a, b = find(first), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    buckets: dict[int, set[int]] = {}
    for v in verts:
        buckets.setdefault(find(v), set()).add(v)
    return ConnectedPartition(tuple(frozenset(b) for b in buckets.values()))


def _connected_sets(g: Multigraph, v: int, allowed: frozenset[int]) -> list[frozenset[int]]:
    """All connected vertex sets inside ``allowed`` containing ``v``, each once."""
    out: list[frozenset[int]] = []

    def nbrs(x: int) -> set[int]:
        return {g.other_end(e, x) for e in g.incidence[x]} & allowed

    def extend(s: frozenset[int], cand: list[int], banned: frozenset[int]) -> None:
        out.append(s)
        cand = list(cand)
        while cand:
            c = cand.pop(0)
            grown = s | {c}
            new = sorted((set(cand) | nbrs(c)) - grown - banned)
            extend(grown, new, banned)
            banned = banned | {c}

    extend(frozenset([v]), sorted(nbrs(v) - {v}), frozenset())
    return out


def enumerate_connected_partitions(
    g: Multigraph, max_vertices: int = MAX_PARTITION_VERTICES
) -> Iterator[ConnectedPartition]:
    """Every element of the connected-partition lattice exactly once.

    The part holding the smallest unplaced vertex is grown as a connected set
    among the unplaced vertices; the rest is enumerated recursively.
    """
    if g.n > max_vertices:
        raise GuardExceededError(f"{g.n} vertices exceeds partition guard {max_vertices}")
    memo: dict[frozenset[int], list[frozenset[int]]] = {}

    def rec(rest: frozenset[int]) -> Iterator[list[frozenset[int]]]:
        if not rest:
            yield []
            return
        if rest not in memo:
            memo[rest] = _connected_sets(g, min(rest), rest)
        for part in memo[rest]:
            for tail in rec(rest - part):
                yield [part, *tail]

    for parts in rec(frozenset(g.vertices)):
        yield ConnectedPartition(tuple(parts))


# --- forests and cycles -------------------------------------------------------


def spanning_forest(g: Multigraph) -> frozenset[int]:
    """Breadth-first maximal forest: roots in vertex order, edges in id order."""
    seen = [False] * g.n
    forest: list[int] = []
    for root in g.vertices:
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for e in g.incidence[x]:
                y = g.other_end(e, x)
                if not seen[y]:
                    seen[y] = True
                    forest.append(e)
                    queue.append(y)
    return frozenset(forest)


def is_forest(g: Multigraph, edges: Iterable[int]) -> bool:
    edges = g.check_edges(edges)
    return count_components(g, edges) == g.n - len(edges)


def is_maximal_forest(g: Multigraph, edges: Iterable[int]) -> bool:
    edges = g.check_edges(edges)
    return is_forest(g, edges) and len(edges) == g.n - g.num_components


def is_isthmus(g: Multigraph, e: int) -> bool:
    if g.is_loop(e):
        return False
    rest = [f for f in range(g.m) if f != e]
    return count_components(g, rest) > g.num_components


def enumerate_forests(g: Multigraph, max_edges: int = MAX_SUBSET_EDGES) -> Iterator[frozenset[int]]:
    """All edge sets of forests (loops excluded by definition)."""
    if g.m > max_edges:
        raise GuardExceededError(f"{g.m} edges exceeds forest guard {max_edges}")
    out: list[frozenset[int]] = []

    def rec(i: int, chosen: list[int], labels: tuple[int, ...]) -> None:
        if i == g.m:
            out.append(frozenset(chosen))
            return
        rec(i + 1, chosen, labels)
        u, v = g.edges[i]
        a, b = labels[u], labels[v]
        if a != b:
            lo, hi = min(a, b), max(a, b)
            merged = tuple(lo if x == hi else x for x in labels)
            chosen.append(i)
            rec(i + 1, chosen, merged)
            chosen.pop()

    rec(0, [], tuple(g.vertices))
    yield from out


def is_cycle(g: Multigraph, edges: Iterable[int]) -> bool:
    """Edge set of a circuit of the graph: connected with every touched vertex of degree two."""
    edges = g.check_edges(edges)
    if not edges:
        return False
    deg: dict[int, int] = {}
    for e in edges:
        u, v = g.edges[e]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    return is_connected_subset(g, deg, edges)


def enumerate_cycles(g: Multigraph, max_edges: int = MAX_SUBSET_EDGES) -> list[frozenset[int]]:
    if g.m > max_edges:
        raise GuardExceededError(f"{g.m} edges exceeds cycle guard {max_edges}")
    out = []
    for bits in range(1, 1 << g.m):
        edges = frozenset(e for e in range(g.m) if bits >> e & 1)
        if is_cycle(g, edges):
            out.append(edges)
    return sorted(out, key=lambda s: sorted(s))


def fundamental_cycle(g: Multigraph, forest: frozenset[int], e: int) -> list[tuple[int, int]]:
    """The cycle of ``forest + e`` as ``(edge, tail)`` steps, ``e`` first in reference direction.

    The reference direction of an edge runs from its smaller endpoint to its larger one.
    """
    u, v = g.ends(e)
    tail, head = min(u, v), max(u, v)
    if u == v:
        return [(e, u)]
    # path head -> tail through the forest
    prev: dict[int, tuple[int, int]] = {head: (-1, -1)}
    queue = deque([head])
    while queue:
        x = queue.popleft()
        if x == tail:
            break
        for f in g.incidence[x]:
            if f not in forest:
                continue
            y = g.other_end(f, x)
            if y not in prev:
                prev[y] = (f, x)
                queue.append(y)
    if tail not in prev:
        raise ValueError(f"edge {e} does not close a cycle with the forest")
    steps: list[tuple[int, int]] = [(e, tail)]
    path: list[tuple[int, int]] = []
    x = tail
    while x != head:
        f, parent = prev[x]
        path.append((f, parent))
        x = parent
    # path lists steps parent->x from tail back to head; reverse into head->tail order
    steps.extend(reversed(path))
    return steps


# --- blocks ---------------------------------------------------------------------


def blocks(g: Multigraph) -> list[frozenset[int]]:
    """Edge sets of the blocks, ordered by smallest edge id; each loop is its own block."""
    disc = [-1] * g.n
    low = [0] * g.n
    stack: list[int] = []
    out: list[frozenset[int]] = []
    clock = [0]

    def dfs(u: int, parent_edge: int) -> None:
        disc[u] = low[u] = clock[0]
        clock[0] += 1
        for e in g.incidence[u]:
            if e == parent_edge or g.is_loop(e):
                continue
            w = g.other_end(e, u)
            if disc[w] == -1:
                stack.append(e)
                dfs(w, e)
                low[u] = min(low[u], low[w])
                if low[w] >= disc[u]:
                    comp = []
                    while True:
                        f = stack.pop()
                        comp.append(f)
                        if f == e:
                            break
                    out.append(frozenset(comp))
            elif disc[w] < disc[u]:
                stack.append(e)
                low[u] = min(low[u], disc[w])

    for v in g.vertices:
        if disc[v] == -1:
            dfs(v, -1)
    out.extend(frozenset([e]) for e in range(g.m) if g.is_loop(e))
    return sorted(out, key=min)


# --- file format ------------------------------------------------------------------


def parse_graph(text: str) -> Multigraph:
    """Read ``graph <n>`` followed by ``edge <id> <u> <v>`` lines; ``#`` starts a comment."""
    n: int | None = None
    found: dict[int, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            nums = [int(w) for w in words[1:]]
        except ValueError:
            raise FormatError(f"non-integer field in {line!r}", lineno) from None
        if words[0] == "graph":
            if n is not None:
                raise FormatError("repeated graph header", lineno)
            if len(nums) != 1 or nums[0] < 0:
                raise FormatError("expected 'graph <n>'", lineno)
            n = nums[0]
        elif words[0] == "edge":
            if n is None:
                raise FormatError("edge before graph header", lineno)
            if len(nums) != 3:
                raise FormatError("expected 'edge <id> <u> <v>'", lineno)
            eid, u, v = nums
            if eid in found:
                raise FormatError(f"duplicate edge id {eid}", lineno)
            if eid < 0:
                raise FormatError(f"negative edge id {eid}", lineno)
            for x in (u, v):
                if not 0 <= x < n:
                    raise FormatError(f"endpoint {x} is not a declared vertex", lineno)
            found[eid] = (u, v)
        else:
            raise FormatError(f"unknown directive {words[0]!r}", lineno)
    if n is None:
        raise FormatError("missing graph header")
    missing = sorted(set(range(len(found))) - set(found))
    if missing:
        raise FormatError(f"edge ids are not dense; missing {missing[0]}")
    return Multigraph(n, tuple(found[i] for i in range(len(found))))


def format_graph(g: Multigraph) -> str:
    lines = [f"graph {g.n}"]
    lines += [f"edge {i} {u} {v}" for i, (u, v) in enumerate(g.edges)]
    return "\n".join(lines) + "\n"


def graph_hash(g: Multigraph) -> str:
    """Short content hash of the canonical text; class files reference graphs by it."""
    return hashlib.sha256(format_graph(g).encode()).hexdigest()[:16]
