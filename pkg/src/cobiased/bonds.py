"""Bonds, tribonds, dibonds and linear classes of bonds.

A bond is identified by its edge set (``Bond.key``): the two vertex sides of a
cut give one bond.  The stored ``side`` is the side holding the smallest
endpoint of the bond's edges.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from .errors import (
    FormatError,
    GuardExceededError,
    LoopContractionError,
    NotABondError,
    NotLinearError,
    NotModularError,
    PreconditionError,
)
from .graph import (
    Multigraph,
    count_components,
    graph_hash,
    is_connected_subset,
    shifted_id,
)

MAX_COMPONENT_VERTICES = 16
MAX_CLASS_BONDS = 16


@dataclass(frozen=True)
class Bond:
    edges: frozenset[int]
    side: frozenset[int] = field(compare=False)
    component: int = field(compare=False)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def mask(self) -> int:
        return sum(1 << e for e in self.edges)

    def __lt__(self, other: Bond) -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return "{" + " ".join(map(str, self.key)) + "}"


class Direction(enum.Enum):
    TOWARD = "toward"
    AWAY = "away"


@dataclass(frozen=True)
class OrientedBond:
    """A bond with all edges pointing toward, or all away from, ``bond.side``."""

    bond: Bond
    direction: Direction = Direction.AWAY

    def reversed(self) -> OrientedBond:
        flip = Direction.TOWARD if self.direction is Direction.AWAY else Direction.AWAY
        return OrientedBond(self.bond, flip)

    def edge_sign(self, g: Multigraph, e: int) -> int:
        """+1 when this orientation agrees with the reference direction (low id to high id)."""
        u, v = g.edges[e]
        tail = min(u, v)
        tail_in_side = tail in self.bond.side
        if self.direction is Direction.AWAY:
            return 1 if tail_in_side else -1
        return -1 if tail_in_side else 1


@dataclass(frozen=True)
class Tribond:
    parts: tuple[frozenset[int], frozenset[int], frozenset[int]]
    bonds: tuple[Bond, Bond, Bond]
    edges: frozenset[int]

    def __str__(self) -> str:
        return " | ".join(",".join(map(str, sorted(p))) for p in self.parts)


class DibondKind(enum.Enum):
    MISSING_CROSS_EDGES = "missing-cross-edges"
    SEPARATE_COMPONENTS = "separate-components"


@dataclass(frozen=True)
class Dibond:
    bonds: tuple[Bond, Bond]
    kind: DibondKind
    edges: frozenset[int]


# --- enumeration ----------------------------------------------------------------


def _delta(g: Multigraph, side: frozenset[int]) -> frozenset[int]:
    return frozenset(e for e, (u, v) in enumerate(g.edges) if (u in side) != (v in side))


def _make_bond(g: Multigraph, side: frozenset[int], comp: int) -> Bond:
    edges = _delta(g, side)
    lowest = min(min(g.edges[e]) for e in edges)
    if lowest not in side:
        side = g.components[comp] - side
    return Bond(edges, side, comp)


@lru_cache(maxsize=512)
def _bonds_cached(g: Multigraph, max_vertices: int) -> tuple[Bond, ...]:
    out: list[Bond] = []
    for ci, comp in enumerate(g.components):
        if len(comp) > max_vertices:
            raise GuardExceededError(f"component of {len(comp)} vertices exceeds bond guard {max_vertices}")
        verts = sorted(comp)
        root, others = verts[0], verts[1:]
        for r in range(len(others)):
            for extra in itertools.combinations(others, r):
                side = frozenset((root, *extra))
                if is_connected_subset(g, side) and is_connected_subset(g, comp - side):
                    out.append(_make_bond(g, side, ci))
    return tuple(sorted(out))


def enumerate_bonds(g: Multigraph, max_vertices: int = MAX_COMPONENT_VERTICES) -> list[Bond]:
    """All bonds of ``g`` in canonical (sorted edge-id) order."""
    return list(_bonds_cached(g, max_vertices))


@lru_cache(maxsize=512)
def bond_index(g: Multigraph) -> dict[frozenset[int], Bond]:
    return {b.edges: b for b in _bonds_cached(g, MAX_COMPONENT_VERTICES)}


def as_bond(g: Multigraph, b: Bond | Iterable[int]) -> Bond:
    edges = b.edges if isinstance(b, Bond) else g.check_edges(b)
    try:
        return bond_index(g)[edges]
    except KeyError:
        raise NotABondError(f"edge set {sorted(edges)} is not a bond") from None


def bond_from_side(g: Multigraph, side: Iterable[int]) -> Bond:
    return as_bond(g, _delta(g, frozenset(side)))


def is_modular_pair(g: Multigraph, b1: Bond, b2: Bond) -> bool:
    b1, b2 = as_bond(g, b1), as_bond(g, b2)
    if b1 == b2:
        raise PreconditionError("a modular pair needs two distinct bonds")
    rest = [e for e in range(g.m) if e not in b1.edges and e not in b2.edges]
    return count_components(g, rest) == g.num_components + 2


def _tribond_from_parts(g: Multigraph, parts: Iterable[frozenset[int]]) -> Tribond:
    ordered = tuple(sorted(parts, key=min))
    bonds = tuple(bond_from_side(g, p) for p in ordered)
    return Tribond(ordered, bonds, frozenset().union(*(b.edges for b in bonds)))  # type: ignore[arg-type]


def classify_modular_union(g: Multigraph, b1: Bond, b2: Bond) -> Tribond | Dibond:
    b1, b2 = as_bond(g, b1), as_bond(g, b2)
    if not is_modular_pair(g, b1, b2):
        raise NotModularError(f"{b1} and {b2} are not a modular pair")
    if b1.edges & b2.edges:
        rest = [e for e in range(g.m) if e not in b1.edges and e not in b2.edges]
        from .graph import component_labels, _groups

        pieces = _groups(component_labels(g, rest))
        comp = g.components[b1.component]
        return _tribond_from_parts(g, [p for p in pieces if p <= comp])
    pair = tuple(sorted((b1, b2)))
    kind = DibondKind.SEPARATE_COMPONENTS if b1.component != b2.component else DibondKind.MISSING_CROSS_EDGES
    return Dibond(pair, kind, b1.edges | b2.edges)  # type: ignore[arg-type]


def _three_part_splits(verts: list[int]) -> Iterator[tuple[frozenset[int], ...]]:
    # restricted growth strings with exactly three blocks
    n = len(verts)

    def rec(i: int, labels: list[int], used: int) -> Iterator[list[int]]:
        if i == n:
            if used == 3:
                yield labels
            return
        for lab in range(min(used + 1, 3)):
            labels.append(lab)
            yield from rec(i + 1, labels, max(used, lab + 1))
            labels.pop()

    for labels in rec(0, [], 0):
        yield tuple(frozenset(v for v, lab in zip(verts, labels) if lab == k) for k in range(3))


@lru_cache(maxsize=512)
def _tribonds_cached(g: Multigraph, max_vertices: int) -> tuple[Tribond, ...]:
    out = []
    for comp in g.components:
        if len(comp) > max_vertices:
            raise GuardExceededError(f"component of {len(comp)} vertices exceeds tribond guard {max_vertices}")
        if len(comp) < 3:
            continue
        for parts in _three_part_splits(sorted(comp)):
            if not all(is_connected_subset(g, p) for p in parts):
                continue
            adjacent = set()
            where = {v: k for k, p in enumerate(parts) for v in p}
            for e in g.links:
                u, v = g.edges[e]
                if u in where and v in where and where[u] != where[v]:
                    adjacent.add(frozenset((where[u], where[v])))
            if len(adjacent) == 3:
                out.append(_tribond_from_parts(g, parts))
    return tuple(sorted(out, key=lambda t: [sorted(p) for p in t.parts]))


def enumerate_tribonds(g: Multigraph, max_vertices: int = MAX_COMPONENT_VERTICES) -> list[Tribond]:
    """Tribonds keyed by tripartition, ordered by their sorted parts."""
    return list(_tribonds_cached(g, max_vertices))


def enumerate_dibonds(g: Multigraph, max_vertices: int = MAX_COMPONENT_VERTICES) -> list[Dibond]:
    out = []
    bonds = enumerate_bonds(g, max_vertices)
    for b1, b2 in itertools.combinations(bonds, 2):
        if not (b1.edges & b2.edges) and is_modular_pair(g, b1, b2):
            d = classify_modular_union(g, b1, b2)
            assert isinstance(d, Dibond)
            out.append(d)
    return out


# --- linear classes ---------------------------------------------------------------


def find_violation(g: Multigraph, bonds: Iterable[Bond]) -> Tribond | None:
    """First tribond (canonical order) containing exactly two of ``bonds``."""
    keys = {b.edges for b in bonds}
    for t in enumerate_tribonds(g):
        if sum(b.edges in keys for b in t.bonds) == 2:
            return t
    return None


@dataclass(frozen=True)
class LinearClass:
    """A set of bonds meeting no tribond in exactly two members; validated on construction."""

    graph: Multigraph = field(repr=False)
    bonds: frozenset[Bond]

    def __post_init__(self) -> None:
        canon = frozenset(as_bond(self.graph, b) for b in self.bonds)
        object.__setattr__(self, "bonds", canon)
        witness = find_violation(self.graph, canon)
        if witness is not None:
            raise NotLinearError(witness)

    @property
    def trivial(self) -> bool:
        return len(self.bonds) == len(bond_index(self.graph))

    @cached_property
    def keys(self) -> frozenset[frozenset[int]]:
        return frozenset(b.edges for b in self.bonds)

    def __contains__(self, b: object) -> bool:
        edges = b.edges if isinstance(b, Bond) else frozenset(b)  # type: ignore[arg-type]
        return edges in self.keys

    @cached_property
    def sorted_bonds(self) -> list[Bond]:
        return sorted(self.bonds)

    @cached_property
    def uncobalanced(self) -> list[Bond]:
        return [b for b in enumerate_bonds(self.graph) if b not in self.bonds]

    def __len__(self) -> int:
        return len(self.bonds)


def validate_linear_class(g: Multigraph, candidate: Iterable[Bond | Iterable[int]]) -> LinearClass:
    """Build a :class:`LinearClass`; raises ``NotLinearError`` carrying the first violating tribond."""
    return LinearClass(g, frozenset(as_bond(g, b) for b in candidate))


def trivial_class(g: Multigraph) -> LinearClass:
    return LinearClass(g, frozenset(enumerate_bonds(g)))


def _tribond_constraints(g: Multigraph, bonds: list[Bond]) -> list[tuple[int, int, int]]:
    pos = {b.edges: i for i, b in enumerate(bonds)}
    return [tuple(sorted(pos[b.edges] for b in t.bonds)) for t in enumerate_tribonds(g)]  # type: ignore[misc]


def enumerate_linear_classes(g: Multigraph, max_bonds: int = MAX_CLASS_BONDS) -> Iterator[LinearClass]:
    """Every linear class exactly once, by backtracking over bonds in canonical order.

    A tribond is checked as soon as its last bond (in that order) is decided.
    """
    bonds = enumerate_bonds(g)
    if len(bonds) > max_bonds:
        raise GuardExceededError(f"{len(bonds)} bonds exceeds class-enumeration guard {max_bonds}")
    closing: dict[int, list[tuple[int, int]]] = {}
    for a, b, c in _tribond_constraints(g, bonds):
        closing.setdefault(c, []).append((a, b))
    chosen = [False] * len(bonds)

    def rec(i: int) -> Iterator[LinearClass]:
        if i == len(bonds):
            yield LinearClass(g, frozenset(b for b, on in zip(bonds, chosen) if on))
            return
        for on in (False, True):
            chosen[i] = on
            if all(chosen[a] + chosen[b] + on != 2 for a, b in closing.get(i, ())):
                yield from rec(i + 1)
        chosen[i] = False

    yield from rec(0)


def random_linear_class(g: Multigraph, rng: random.Random, p_in: float = 0.5) -> LinearClass:
    """A random linear class: bonds decided in shuffled order with forced choices propagated."""
    bonds = enumerate_bonds(g)
    triples = _tribond_constraints(g, bonds)
    touching: dict[int, list[tuple[int, int, int]]] = {}
    for t in triples:
        for i in t:
            touching.setdefault(i, []).append(t)
    state: list[bool | None] = [None] * len(bonds)

    def propagate(start: int) -> bool:
        todo = [start]
        while todo:
            i = todo.pop()
            for t in touching.get(i, ()):
                vals = [state[j] for j in t]
                ins = sum(v is True for v in vals)
                undecided = [j for j in t if state[j] is None]
                if ins == 2 and not undecided:
                    return False
                if len(undecided) == 1:
                    j = undecided[0]
                    # two in -> third in; one in one out -> third out
                    if ins == 2:
                        state[j] = True
                        todo.append(j)
                    elif ins == 1:
                        state[j] = False
                        todo.append(j)
        return True

    order = list(range(len(bonds)))
    rng.shuffle(order)
    for i in order:
        if state[i] is not None:
            continue
        snapshot = list(state)
        choice = rng.random() < p_in
        state[i] = choice
        if not propagate(i):
            state[:] = snapshot
            state[i] = not choice
            if not propagate(i):  # pragma: no cover - the empty class is always reachable
                raise AssertionError("propagation dead end")
    return LinearClass(g, frozenset(b for b, s in zip(bonds, state) if s))


# --- minors ---------------------------------------------------------------------


def contract_class(g: Multigraph, lc: LinearClass, e: int) -> tuple[Multigraph, LinearClass]:
    """``(G/e, L/e)``: members of the class avoiding ``e``, renumbered."""
    if g.is_loop(e):
        raise LoopContractionError(f"edge {e} is a loop")
    h = g.contract_edge(e)
    kept = [frozenset(shifted_id(x, e) for x in b.edges) for b in lc.bonds if e not in b.edges]
    return h, LinearClass(h, frozenset(as_bond(h, k) for k in kept))


def delete_class(g: Multigraph, lc: LinearClass, e: int) -> tuple[Multigraph, LinearClass]:
    """``(G\\e, L\\e)``: bonds ``B`` of ``G\\e`` with ``B`` or ``B+e`` in the class."""
    g.ends(e)
    h = g.delete_edge(e)
    keys = {b.edges for b in lc.bonds}
    back = {x: x if x < e else x + 1 for x in range(h.m)}
    members = []
    for b in enumerate_bonds(h):
        orig = frozenset(back[x] for x in b.edges)
        if orig in keys or orig | {e} in keys:
            members.append(b)
    return h, LinearClass(h, frozenset(members))


# --- vertex union ---------------------------------------------------------------


def split_blocks(g: Multigraph, lc: LinearClass | None = None) -> tuple[Multigraph, LinearClass | None]:
    """Pull the graph apart at cut vertices so every component is a block.

    Edge ids are preserved.  New vertex ids are handed out block by block
    (blocks ordered by smallest edge id, vertices by old id); isolated
    vertices come last.
    """
    from .graph import blocks

    edges: list[tuple[int, int] | None] = [None] * g.m
    nxt = 0
    for blk in blocks(g):
        verts = sorted({x for e in blk for x in g.edges[e]})
        local = {v: nxt + i for i, v in enumerate(verts)}
        nxt += len(verts)
        for e in blk:
            u, v = g.edges[e]
            edges[e] = (local[u], local[v])
    isolated = [v for v in g.vertices if not g.incidence[v]]
    h = Multigraph(nxt + len(isolated), tuple(edges))  # type: ignore[arg-type]
    if lc is None:
        return h, None
    return h, LinearClass(h, frozenset(as_bond(h, b.edges) for b in lc.bonds))


# --- example classes --------------------------------------------------------------


def _separates(g: Multigraph, b: Bond, w: frozenset[int]) -> bool:
    inside = w & g.components[b.component]
    return bool(inside & b.side) and bool(inside - b.side)


def two_point_class(g: Multigraph, a: int, b: int) -> LinearClass:
    """Bonds not separating ``a`` from ``b``."""
    return nonseparating_class(g, {a, b})


def nonseparating_class(g: Multigraph, w: Iterable[int]) -> LinearClass:
    """Bonds leaving the vertices of ``w`` in their component all on one side."""
    w = frozenset(w)
    if not w <= frozenset(g.vertices):
        raise PreconditionError("W is not a vertex subset")
    return LinearClass(g, frozenset(b for b in enumerate_bonds(g) if not _separates(g, b, w)))


def even_split_class(g: Multigraph, w: Iterable[int]) -> LinearClass:
    """Bonds splitting ``w`` into two even parts; needs ``|W|`` even in every component."""
    w = frozenset(w)
    if not w <= frozenset(g.vertices):
        raise PreconditionError("W is not a vertex subset")
    for comp in g.components:
        if len(w & comp) % 2:
            raise PreconditionError(f"W meets component {sorted(comp)} in an odd number of vertices")
    return LinearClass(g, frozenset(b for b in enumerate_bonds(g) if len(w & b.side) % 2 == 0))


def is_additive(g: Multigraph, lc: LinearClass) -> tuple[bool, Tribond | None]:
    """Every tribond has an even number of un-cobalanced bonds; else the first witness."""
    for t in enumerate_tribonds(g):
        if sum(b not in lc.bonds for b in t.bonds) % 2:
            return False, t
    return True, None


# --- file format ---------------------------------------------------------------------


def format_class(lc: LinearClass) -> str:
    lines = [f"class {graph_hash(lc.graph)}"]
    lines += ["bond " + " ".join(map(str, b.key)) for b in lc.sorted_bonds]
    return "\n".join(lines) + "\n"


def parse_class(text: str, g: Multigraph, check_hash: bool = True) -> LinearClass:
    header: str | None = None
    members: list[Bond] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "class":
            if header is not None or len(words) != 2:
                raise FormatError("expected a single 'class <graph-hash>' header", lineno)
            header = words[1]
            if check_hash and header != graph_hash(g):
                raise FormatError(f"class references graph {header}, not {graph_hash(g)}", lineno)
        elif words[0] == "bond":
            if header is None:
                raise FormatError("bond before class header", lineno)
            try:
                ids = [int(x) for x in words[1:]]
            except ValueError:
                raise FormatError(f"non-integer edge id in {line!r}", lineno) from None
            try:
                members.append(as_bond(g, ids))
            except NotABondError as exc:
                raise NotABondError(f"line {lineno}: {exc}") from None
        else:
            raise FormatError(f"unknown directive {words[0]!r}", lineno)
    if header is None:
        raise FormatError("missing class header")
    return validate_linear_class(g, members)
