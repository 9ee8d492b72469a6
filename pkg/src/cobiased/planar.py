"""Plane embeddings given as rotation systems, and multiplicative bond gains.

A dart is a pair ``(edge, end)``: the half of ``edge`` attached at
``graph.edges[edge][end]``, read as pointing away from that vertex.  Faces
are the orbits of ``dart -> next(reverse(dart))``, where ``next`` steps to
the following dart in the cyclic order at its vertex.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .bonds import Direction, LinearClass, OrientedBond, enumerate_bonds
from .errors import EmbeddingError, FormatError, GroupMismatchError, GuardExceededError
from .gains import AdditiveGroup
from .graph import Multigraph

Dart = tuple[int, int]
MAX_PLANAR_SPACE = 10**7


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table; element 0 need not be the identity."""

    name: str
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if n == 0 or len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("Cayley table must be square and match the labels")
        if len(set(self.labels)) != n:
            raise ValueError("element labels must be distinct")
        t = self.table
        for row in t:
            if sorted(row) != list(range(n)):
                raise ValueError("Cayley table rows must be permutations")
        ids = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise ValueError("no two-sided identity")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError(f"not associative at {self.labels[a]}, {self.labels[b]}, {self.labels[c]}")

    @property
    def order(self) -> int:
        return len(self.labels)

    @cached_property
    def identity(self) -> int:
        n = self.order
        return next(e for e in range(n) if all(self.table[e][x] == x for x in range(n)))

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(self.table[a].index(self.identity) for a in range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def product(self, xs: Iterable[int]) -> int:
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    @cached_property
    def abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def element(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FormatError(f"{label!r} is not an element of {self.name}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.labels == other.labels and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.labels, self.table))

    # constructors

    @classmethod
    def from_additive(cls, group: AdditiveGroup) -> FiniteGroup:
        """Cayley table of a finite additive group; elements in lexicographic tuple order."""
        elems = group.elements()
        pos = {x: i for i, x in enumerate(elems)}
        table = tuple(tuple(pos[group.add(x, y)] for y in elems) for x in elems)
        return cls(str(group), tuple(group.format_element(x) for x in elems), table)

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        return cls.from_additive(AdditiveGroup.cyclic(n))

    @classmethod
    def symmetric(cls, k: int) -> FiniteGroup:
        """Permutations of ``0..k-1`` in one-line notation; ``(p*q)(i) = p(q(i))``."""
        perms = list(itertools.permutations(range(k)))
        pos = {p: i for i, p in enumerate(perms)}
        table = tuple(tuple(pos[tuple(p[q[i]] for i in range(k))] for q in perms) for p in perms)
        return cls(f"S{k}", tuple("".join(map(str, p)) for p in perms), table)

    @classmethod
    def parse(cls, spec: str) -> FiniteGroup:
        """``S<k>`` or any finite additive group spec such as ``Z/2xZ/2``."""
        spec = spec.strip()
        m = re.fullmatch(r"S([1-5])", spec)
        if m:
            return cls.symmetric(int(m.group(1)))
        group = AdditiveGroup.parse(spec)
        if not group.finite:
            raise FormatError("planar gains need a finite group")
        return cls.from_additive(group)


def small_groups(max_order: int = 6) -> list[FiniteGroup]:
    """One group per isomorphism type up to order 6 (as far as ``max_order`` allows)."""
    out = [FiniteGroup.cyclic(n) for n in range(1, max_order + 1)]
    if max_order >= 4:
        out.insert(4, FiniteGroup.from_additive(AdditiveGroup.cyclic(2, 2)))
    if max_order >= 6:
        out.append(FiniteGroup.symmetric(3))
    return out


@dataclass(frozen=True)
class RotationSystem:
    graph: Multigraph
    rotation: tuple[tuple[Dart, ...], ...]

    def __post_init__(self) -> None:
        g = self.graph
        rot = tuple(tuple((int(e), int(end)) for e, end in darts) for darts in self.rotation)
        object.__setattr__(self, "rotation", rot)
        if len(rot) != g.n:
            raise EmbeddingError("need one cyclic order per vertex")
        if g.num_components != 1:
            raise EmbeddingError("plane graphs must be connected")
        seen: set[Dart] = set()
        for v, darts in enumerate(rot):
            for e, end in darts:
                if not (0 <= e < g.m and end in (0, 1)) or g.edges[e][end] != v:
                    raise EmbeddingError(f"half-edge ({e},{end}) is not attached at vertex {v}")
                if (e, end) in seen:
                    raise EmbeddingError(f"half-edge ({e},{end}) listed twice")
                seen.add((e, end))
        if len(seen) != 2 * g.m:
            raise EmbeddingError("some half-edges are missing from the rotation")
        if g.n - g.m + len(self.faces) != 2:
            raise EmbeddingError(f"Euler check failed: V - E + F = {g.n - g.m + len(self.faces)}")

    @cached_property
    def _next(self) -> dict[Dart, Dart]:
        out = {}
        for darts in self.rotation:
            for i, d in enumerate(darts):
                out[d] = darts[(i + 1) % len(darts)]
        return out

    def face_step(self, d: Dart) -> Dart:
        e, end = d
        return self._next[(e, 1 - end)]

    @cached_property
    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        if self.graph.m == 0:
            return ((),)
        out, seen = [], set()
        for darts in self.rotation:
            for d in darts:
                if d in seen:
                    continue
                face = []
                while d not in seen:
                    seen.add(d)
                    face.append(d)
                    d = self.face_step(d)
                out.append(tuple(face))
        return tuple(out)

    @cached_property
    def face_of(self) -> dict[Dart, int]:
        return {d: i for i, face in enumerate(self.faces) for d in face}


def dual_walk(rs: RotationSystem, ob: OrientedBond) -> list[int]:
    """Bond edges in the order the dual cycle crosses them, starting at the lowest edge id.

    For the away orientation, the walk leaves through the outgoing half of the
    current edge, follows that face around, and crosses back at the unique
    bond edge whose incoming half lies on the same face.  The toward
    orientation gives the same cycle traversed backwards.
    """
    g = rs.graph
    b = ob.bond
    side = b.side

    def out_dart(e: int) -> Dart:
        return (e, 0) if g.edges[e][0] in side else (e, 1)

    def in_dart(e: int) -> Dart:
        e_, end = out_dart(e)
        return (e_, 1 - end)

    entering = {rs.face_of[in_dart(e)]: e for e in b.edges}
    start = min(b.edges)
    walk, e = [], start
    while True:
        walk.append(e)
        try:
            e = entering[rs.face_of[out_dart(e)]]
        except KeyError:
            raise EmbeddingError("bond edges do not close up in the dual") from None
        if e == start:
            break
        if len(walk) > len(b.edges):
            raise EmbeddingError("dual walk does not close")
    if len(walk) != len(b.edges):
        raise EmbeddingError("bond is not a single dual cycle")
    if ob.direction is Direction.TOWARD:
        walk = [walk[0], *reversed(walk[1:])]
    return walk


@dataclass(frozen=True)
class MultiplicativeGains:
    """Group element indices on each edge's reference direction (low id to high id)."""

    graph: Multigraph
    group: FiniteGroup
    gains: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.gains) != self.graph.m:
            raise ValueError("need exactly one gain per edge")
        if any(not 0 <= x < self.group.order for x in self.gains):
            raise ValueError("gain outside the group")

    @classmethod
    def identity(cls, g: Multigraph, group: FiniteGroup) -> MultiplicativeGains:
        return cls(g, group, (group.identity,) * g.m)


def oriented_gain(mg: MultiplicativeGains, ob: OrientedBond, e: int) -> int:
    x = mg.gains[e]
    return x if ob.edge_sign(mg.graph, e) > 0 else mg.group.inv(x)


def walk_product(rs: RotationSystem, mg: MultiplicativeGains, ob: OrientedBond) -> int:
    return mg.group.product(oriented_gain(mg, ob, e) for e in dual_walk(rs, ob))


def all_walk_products(rs: RotationSystem, mg: MultiplicativeGains, ob: OrientedBond) -> list[int]:
    """Products for every starting edge, in both orientations of the bond."""
    out = []
    for o in (ob, ob.reversed()):
        walk = [oriented_gain(mg, o, e) for e in dual_walk(rs, o)]
        for i in range(len(walk)):
            out.append(mg.group.product(walk[i:] + walk[:i]))
    return out


def planar_bond_gain(rs: RotationSystem, mg: MultiplicativeGains, ob: OrientedBond) -> bool:
    """Whether the oriented bond is cobalanced (its dual-walk product is the identity)."""
    _check(rs, mg)
    return walk_product(rs, mg, ob) == mg.group.identity


def _check(rs: RotationSystem, mg: MultiplicativeGains) -> None:
    if rs.graph != mg.graph:
        raise GroupMismatchError("gains and embedding live on different graphs")


def planar_class_from_gains(rs: RotationSystem, mg: MultiplicativeGains) -> LinearClass:
    _check(rs, mg)
    ident = mg.group.identity
    members = [b for b in enumerate_bonds(rs.graph) if walk_product(rs, mg, OrientedBond(b)) == ident]
    return LinearClass(rs.graph, frozenset(members))


@dataclass(frozen=True)
class PlanarRealizability:
    witness: MultiplicativeGains | None
    searched: int
    nodes: int

    @property
    def realizable(self) -> bool:
        return self.witness is not None


def planar_realizability(
    rs: RotationSystem, lc: LinearClass, group: FiniteGroup, max_space: int = MAX_PLANAR_SPACE
) -> PlanarRealizability:
    """Exhaustive search over all edge gains, pruned as soon as a bond's edges are all assigned.

    Loops never meet a bond, so they are fixed to the identity.  Edges are
    assigned in id order and elements in index order, so the witness is the
    lexicographically first one.
    """
    g = rs.graph
    free = list(g.links)
    space = group.order ** len(free)
    if space > max_space:
        raise GuardExceededError(f"search space {space} exceeds guard {max_space}")
    closing: dict[int, list[tuple[list[tuple[int, int]], bool]]] = {}
    for b in enumerate_bonds(g):
        ob = OrientedBond(b)
        terms = [(e, ob.edge_sign(g, e)) for e in dual_walk(rs, ob)]
        closing.setdefault(max(b.edges), []).append((terms, b in lc.bonds))
    ident, t, inv = group.identity, group.table, group.inverses
    values = [ident] * g.m
    nodes = 0

    def ok(e: int) -> bool:
        for terms, member in closing.get(e, ()):
            acc = ident
            for f, sign in terms:
                acc = t[acc][values[f] if sign > 0 else inv[values[f]]]
            if (acc == ident) != member:
                return False
        return True

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(free):
            return True
        e = free[i]
        for x in range(group.order):
            nodes += 1
            values[e] = x
            if ok(e) and rec(i + 1):
                return True
        values[e] = ident
        return False

    if rec(0):
        return PlanarRealizability(MultiplicativeGains(g, group, tuple(values)), space, nodes)
    return PlanarRealizability(None, space, nodes)


# --- file formats ----------------------------------------------------------------------

_DART = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def format_rotation(rs: RotationSystem) -> str:
    lines = ["rotation"]
    for v, darts in enumerate(rs.rotation):
        lines.append(f"vertex {v}: " + " ".join(f"({e},{end})" for e, end in darts))
    return "\n".join(lines) + "\n"


def parse_rotation(text: str, g: Multigraph) -> RotationSystem:
    header = False
    rows: dict[int, tuple[Dart, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "rotation":
            if header:
                raise FormatError("repeated rotation header", lineno)
            header = True
            continue
        m = re.fullmatch(r"vertex\s+(\d+)\s*:(.*)", line)
        if not m:
            raise FormatError(f"cannot parse {line!r}", lineno)
        if not header:
            raise FormatError("vertex line before rotation header", lineno)
        v = int(m.group(1))
        if not 0 <= v < g.n:
            raise FormatError(f"vertex {v} out of range", lineno)
        if v in rows:
            raise FormatError(f"duplicate vertex {v}", lineno)
        rest = m.group(2)
        darts = tuple((int(a), int(b)) for a, b in _DART.findall(rest))
        if _DART.sub("", rest).strip():
            raise FormatError("half-edges must be written as (edge,end)", lineno)
        rows[v] = darts
    if not header:
        raise FormatError("missing rotation header")
    return RotationSystem(g, tuple(rows.get(v, ()) for v in g.vertices))


def format_multiplicative_gains(mg: MultiplicativeGains) -> str:
    lines = [f"gains {mg.group.name}"]
    lines += [f"gain {e} {mg.group.labels[x]}" for e, x in enumerate(mg.gains)]
    return "\n".join(lines) + "\n"


def parse_multiplicative_gains(text: str, g: Multigraph) -> MultiplicativeGains:
    """Like the additive gain format, plus ``S<k>`` group specs with one-line permutation labels."""
    group: FiniteGroup | None = None
    gains: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "gains" and len(words) == 2 and group is None:
            try:
                group = FiniteGroup.parse(words[1])
            except FormatError as exc:
                raise FormatError(str(exc), lineno) from None
        elif words[0] == "gain" and len(words) == 3 and group is not None:
            try:
                e = int(words[1])
            except ValueError:
                raise FormatError(f"bad edge id {words[1]!r}", lineno) from None
            if not 0 <= e < g.m or e in gains:
                raise FormatError(f"bad or repeated edge id {e}", lineno)
            try:
                gains[e] = group.element(words[2])
            except FormatError as exc:
                raise FormatError(str(exc), lineno) from None
        else:
            raise FormatError(f"cannot parse {line!r}", lineno)
    if group is None:
        raise FormatError("missing gains header")
    return MultiplicativeGains(g, group, tuple(gains.get(e, group.identity) for e in range(g.m)))


def rotation_from_orders(g: Multigraph, orders: Sequence[Sequence[int]]) -> RotationSystem:
    """Build a rotation from per-vertex cyclic lists of edge ids (loops are not allowed here)."""
    rot = []
    for v, edges in enumerate(orders):
        rot.append(tuple((e, 0 if g.edges[e][0] == v else 1) for e in edges))
    return RotationSystem(g, tuple(rot))
