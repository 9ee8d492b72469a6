"""Additive gain graphs and quotient labelings as sources of linear classes.

Gains are stored once per edge, as the value on the edge's reference
direction (smaller endpoint to larger endpoint); the reverse direction
carries the negative.  Loops always carry zero.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

from .bonds import (
    Bond,
    Direction,
    LinearClass,
    OrientedBond,
    enumerate_bonds,
)
from .errors import (
    FormatError,
    GroupMismatchError,
    GuardExceededError,
    InvalidLabelingError,
    IsthmusDeletionError,
    LoopContractionError,
    NotABlockError,
    NotACycleError,
    NotAMaximalForestError,
    PreconditionError,
    UncobalancedIsthmusError,
)
from .graph import (
    Multigraph,
    blocks,
    component_labels,
    fundamental_cycle,
    is_isthmus,
    is_maximal_forest,
    shifted_id,
    spanning_forest,
)

Element = tuple[int, ...]
MAX_SEARCH_SPACE = 10**7


@dataclass(frozen=True)
class AdditiveGroup:
    """``Z`` (moduli ``(0,)``) or a product of finite cyclic groups ``Z/n1 x Z/n2 x ...``."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        mods = tuple(int(n) for n in self.moduli)
        if not mods:
            raise ValueError("a group needs at least one factor")
        if 0 in mods and mods != (0,):
            raise ValueError("only the plain integers are supported as an infinite group")
        if any(n < 0 for n in mods):
            raise ValueError("negative modulus")
        object.__setattr__(self, "moduli", mods)

    @classmethod
    def integers(cls) -> AdditiveGroup:
        return cls((0,))

    @classmethod
    def cyclic(cls, *ns: int) -> AdditiveGroup:
        return cls(tuple(ns))

    @classmethod
    def parse(cls, spec: str) -> AdditiveGroup:
        spec = spec.strip()
        if spec == "Z":
            return cls.integers()
        mods = []
        for factor in spec.split("x"):
            if not factor.startswith("Z/"):
                raise FormatError(f"bad group factor {factor!r}")
            try:
                n = int(factor[2:])
            except ValueError:
                raise FormatError(f"bad group factor {factor!r}") from None
            if n < 1:
                raise FormatError(f"bad modulus in {factor!r}")
            mods.append(n)
        return cls(tuple(mods))

    def __str__(self) -> str:
        return "Z" if self.moduli == (0,) else "x".join(f"Z/{n}" for n in self.moduli)

    @property
    def finite(self) -> bool:
        return self.moduli != (0,)

    @property
    def order(self) -> int:
        if not self.finite:
            raise PreconditionError("the integers are infinite")
        out = 1
        for n in self.moduli:
            out *= n
        return out

    @property
    def zero(self) -> Element:
        return (0,) * len(self.moduli)

    def element(self, x: int | Sequence[int]) -> Element:
        vals = (x,) if isinstance(x, int) else tuple(x)
        if len(vals) != len(self.moduli):
            raise ValueError(f"{x!r} is not an element of {self}")
        return tuple(v % n if n else v for v, n in zip(vals, self.moduli))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n if n else a + b for a, b, n in zip(x, y, self.moduli))

    def neg(self, x: Element) -> Element:
        return tuple(-a % n if n else -a for a, n in zip(x, self.moduli))

    def sub(self, x: Element, y: Element) -> Element:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % n if n else k * a for a, n in zip(x, self.moduli))

    def total(self, xs: Iterable[Element]) -> Element:
        out = self.zero
        for x in xs:
            out = self.add(out, x)
        return out

    def elements(self) -> list[Element]:
        """All elements in lexicographic order (finite groups only)."""
        if not self.finite:
            raise PreconditionError("cannot list the integers")
        return list(itertools.product(*(range(n) for n in self.moduli)))

    def format_element(self, x: Element) -> str:
        return ",".join(map(str, x))

    def parse_element(self, text: str) -> Element:
        try:
            return self.element(tuple(int(t) for t in text.split(",")))
        except ValueError:
            raise FormatError(f"{text!r} is not an element of {self}") from None

    def random_element(self, rng: random.Random, spread: int = 3) -> Element:
        if self.finite:
            return tuple(rng.randrange(n) for n in self.moduli)
        return (rng.randint(-spread, spread),)


def _ref_sign(g: Multigraph, e: int, tail: int) -> int:
    """+1 when traversing ``e`` out of ``tail`` follows its reference direction."""
    u, v = g.edges[e]
    return 1 if tail == min(u, v) else -1


@dataclass(frozen=True)
class GainAssignment:
    graph: Multigraph
    group: AdditiveGroup
    gains: tuple[Element, ...]

    def __post_init__(self) -> None:
        if len(self.gains) != self.graph.m:
            raise ValueError("need exactly one gain per edge")
        gains = tuple(self.group.element(x) for x in self.gains)
        for e in range(self.graph.m):
            if self.graph.is_loop(e) and gains[e] != self.group.zero:
                raise PreconditionError(f"loop {e} must carry gain zero")
        object.__setattr__(self, "gains", gains)

    @classmethod
    def zero(cls, g: Multigraph, group: AdditiveGroup) -> GainAssignment:
        return cls(g, group, (group.zero,) * g.m)

    def scaled(self, k: int) -> GainAssignment:
        return GainAssignment(self.graph, self.group, tuple(self.group.scale(k, x) for x in self.gains))


def bond_gain(ga: GainAssignment, ob: OrientedBond) -> Element:
    """Sum of the gains of the bond's edges, each read in the bond's direction."""
    grp, g = ga.group, ga.graph
    out = grp.zero
    for e in ob.bond.edges:
        x = ga.gains[e]
        out = grp.add(out, x if ob.edge_sign(g, e) > 0 else grp.neg(x))
    return out


def class_from_gains(ga: GainAssignment) -> LinearClass:
    zero = ga.group.zero
    members = [b for b in enumerate_bonds(ga.graph) if bond_gain(ga, OrientedBond(b)) == zero]
    return LinearClass(ga.graph, frozenset(members))


def bond_values(ga: GainAssignment) -> tuple[Element, ...]:
    """Gain of every bond oriented away from its stored side, in canonical bond order."""
    return tuple(bond_gain(ga, OrientedBond(b)) for b in enumerate_bonds(ga.graph))


# --- shifting --------------------------------------------------------------------------


Cycle = Sequence[tuple[int, int]]


def check_cycle(g: Multigraph, cycle: Cycle) -> None:
    """A cycle is a closed walk of ``(edge, tail)`` steps through distinct edges and vertices."""
    if not cycle:
        raise NotACycleError("empty cycle")
    seen_edges, seen_vertices = set(), set()
    at = cycle[0][1]
    for e, tail in cycle:
        u, v = g.ends(e)
        if tail not in (u, v) or tail != at:
            raise NotACycleError(f"step ({e}, {tail}) does not continue the walk")
        if e in seen_edges or tail in seen_vertices:
            raise NotACycleError("cycle repeats an edge or a vertex")
        seen_edges.add(e)
        seen_vertices.add(tail)
        at = g.other_end(e, tail)
    if at != cycle[0][1]:
        raise NotACycleError("walk does not close")


def oriented_cycle(g: Multigraph, edges: Iterable[int]) -> list[tuple[int, int]]:
    """Walk an unoriented cycle edge set, starting along its smallest edge in reference direction."""
    edges = sorted(g.check_edges(edges))
    if not edges:
        raise NotACycleError("empty cycle")
    first = edges[0]
    u, v = g.edges[first]
    at, steps, left = min(u, v), [], set(edges)
    e = first
    while True:
        steps.append((e, at))
        left.discard(e)
        at = g.other_end(e, at)
        nxt = [f for f in left if at in g.edges[f]]
        if not nxt:
            break
        e = min(nxt)
    check_cycle(g, steps)
    if left:
        raise NotACycleError("edge set is not a single cycle")
    return steps


def cycle_shift(ga: GainAssignment, cycle: Cycle, a: Element) -> GainAssignment:
    """Add ``a`` along every edge of the oriented cycle."""
    g, grp = ga.graph, ga.group
    check_cycle(g, cycle)
    a = grp.element(a)
    gains = list(ga.gains)
    for e, tail in cycle:
        if g.is_loop(e):
            continue
        step = a if _ref_sign(g, e, tail) > 0 else grp.neg(a)
        gains[e] = grp.add(gains[e], step)
    return GainAssignment(g, grp, tuple(gains))


def _forest(g: Multigraph, forest: Iterable[int] | None) -> frozenset[int]:
    if forest is None:
        return spanning_forest(g)
    forest = g.check_edges(forest)
    if not is_maximal_forest(g, forest):
        raise NotAMaximalForestError(f"{sorted(forest)} is not a maximal forest")
    return forest


def normalize(ga: GainAssignment, forest: Iterable[int] | None = None) -> GainAssignment:
    """The shifting-equivalent assignment vanishing off ``forest``.

    Each non-forest edge is cancelled by a shift around its fundamental cycle.
    """
    g, grp = ga.graph, ga.group
    tree = _forest(g, forest)
    out = ga
    for e in range(g.m):
        if e in tree or g.is_loop(e) or ga.gains[e] == grp.zero:
            continue
        out = cycle_shift(out, fundamental_cycle(g, tree, e), grp.neg(ga.gains[e]))
    return out


def tree_gains_from_bonds(ga: GainAssignment, forest: Iterable[int] | None = None) -> tuple[Element, ...]:
    """Forest-edge values forced by bond gains: each equals the gain of its fundamental bond."""
    g, grp = ga.graph, ga.group
    tree = _forest(g, forest)
    out = []
    for e in range(g.m):
        if e not in tree:
            out.append(grp.zero)
            continue
        labels = component_labels(g, tree - {e})
        u, v = g.edges[e]
        side = frozenset(x for x in g.vertices if labels[x] == labels[min(u, v)])
        b = Bond(frozenset(f for f, (p, q) in enumerate(g.edges) if (p in side) != (q in side)), side, 0)
        out.append(bond_gain(ga, OrientedBond(b, Direction.AWAY)))
    return tuple(out)


def _same_setting(x, y) -> None:
    if x.graph != y.graph or x.group != y.group:
        raise GroupMismatchError("objects live on different graphs or groups")


def shifting_equivalent(ga1: GainAssignment, ga2: GainAssignment) -> bool:
    """Decided by comparing normal forms on the default spanning forest."""
    _same_setting(ga1, ga2)
    return normalize(ga1).gains == normalize(ga2).gains


def bonds_agree(ga1: GainAssignment, ga2: GainAssignment) -> bool:
    _same_setting(ga1, ga2)
    return bond_values(ga1) == bond_values(ga2)


# --- quotient labelings ------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientLabeling:
    """Vertex labels summing to zero on every connected component."""

    graph: Multigraph
    group: AdditiveGroup
    labels: tuple[Element, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.graph.n:
            raise ValueError("need exactly one label per vertex")
        labels = tuple(self.group.element(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        for comp in self.graph.components:
            if self.group.total(labels[v] for v in comp) != self.group.zero:
                raise InvalidLabelingError(f"labels on component {sorted(comp)} do not sum to zero")

    def side_sum(self, side: Iterable[int]) -> Element:
        return self.group.total(self.labels[v] for v in side)

    def scaled(self, k: int) -> QuotientLabeling:
        return QuotientLabeling(self.graph, self.group, tuple(self.group.scale(k, x) for x in self.labels))


def labeling_value(ql: QuotientLabeling, ob: OrientedBond) -> Element:
    """Label sum of the side the bond points into."""
    s = ql.side_sum(ob.bond.side)
    return s if ob.direction is Direction.TOWARD else ql.group.neg(s)


def class_from_labeling(ql: QuotientLabeling) -> LinearClass:
    zero = ql.group.zero
    return LinearClass(ql.graph, frozenset(b for b in enumerate_bonds(ql.graph) if ql.side_sum(b.side) == zero))


def gains_from_labeling(ql: QuotientLabeling, forest: Iterable[int] | None = None) -> GainAssignment:
    """Forest-normalized gains whose bond gains equal the labeling's bond values.

    A forest edge gets the label sum of the side its reference direction points into.
    """
    g, grp = ql.graph, ql.group
    tree = _forest(g, forest)
    gains = [grp.zero] * g.m
    for e in tree:
        labels = component_labels(g, tree - {e})
        head = max(g.edges[e])
        gains[e] = ql.side_sum(x for x in g.vertices if labels[x] == labels[head])
    return GainAssignment(g, grp, tuple(gains))


def check_block_components(g: Multigraph) -> None:
    if any(g.is_loop(e) for e in range(g.m)):
        raise PreconditionError("graph has loops")
    if any(not g.incidence[v] for v in g.vertices):
        raise PreconditionError("graph has isolated vertices")
    comp_of = g.component_labels
    seen: set[int] = set()
    for blk in blocks(g):
        c = comp_of[g.edges[min(blk)][0]]
        if c in seen:
            raise NotABlockError("a component has more than one block; split it first")
        seen.add(c)


def labeling_from_gains(ga: GainAssignment) -> QuotientLabeling:
    """Label each vertex with the gain of its star oriented inward."""
    g, grp = ga.graph, ga.group
    check_block_components(g)
    labels = []
    for v in g.vertices:
        terms = []
        for e in g.incidence[v]:
            x = ga.gains[e]
            terms.append(x if max(g.edges[e]) == v else grp.neg(x))
        labels.append(grp.total(terms))
    return QuotientLabeling(g, grp, tuple(labels))


# --- minors ---------------------------------------------------------------------------------


def gain_minor(ga: GainAssignment, op: str, e: int) -> GainAssignment:
    g, grp = ga.graph, ga.group
    u, v = g.ends(e)
    if op == "contract":
        if u == v:
            raise LoopContractionError(f"edge {e} is a loop")
        f = g.contraction_vertex_map(e)
        h = g.contract_edge(e)
        gains = []
        for x in range(g.m):
            if x == e:
                continue
            a, b = g.edges[x]
            t, hd = f[min(a, b)], f[max(a, b)]
            if t == hd:
                gains.append(grp.zero)
            else:
                gains.append(ga.gains[x] if t < hd else grp.neg(ga.gains[x]))
        return GainAssignment(h, grp, tuple(gains))
    if op == "delete":
        if u != v and is_isthmus(g, e):
            raise IsthmusDeletionError(f"edge {e} is an isthmus; its gain cannot be shifted away")
        psi = ga
        if u != v and ga.gains[e] != grp.zero:
            rest = g.delete_edge(e)
            forest = frozenset(x if x < e else x + 1 for x in spanning_forest(rest))
            psi = cycle_shift(ga, fundamental_cycle(g, forest, e), grp.neg(ga.gains[e]))
        h = g.delete_edge(e)
        return GainAssignment(h, grp, psi.gains[:e] + psi.gains[e + 1:])
    raise ValueError(f"unknown minor operation {op!r}")


def labeling_minor(ql: QuotientLabeling, op: str, e: int) -> QuotientLabeling:
    g, grp = ql.graph, ql.group
    u, v = g.ends(e)
    if op == "contract":
        if u == v:
            raise LoopContractionError(f"edge {e} is a loop")
        f = g.contraction_vertex_map(e)
        labels = [grp.zero] * (g.n - 1)
        for x in g.vertices:
            labels[f[x]] = grp.add(labels[f[x]], ql.labels[x])
        return QuotientLabeling(g.contract_edge(e), grp, tuple(labels))
    if op == "delete":
        if u != v and is_isthmus(g, e):
            labels = component_labels(g, [x for x in range(g.m) if x != e])
            side = [x for x in g.vertices if labels[x] == labels[u]]
            if ql.side_sum(side) != grp.zero:
                raise UncobalancedIsthmusError(f"edge {e} is an un-cobalanced isthmus")
        return QuotientLabeling(g.delete_edge(e), grp, ql.labels)
    raise ValueError(f"unknown minor operation {op!r}")


# --- scalar multiples -------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def scalar_invariance_check(obj: Union[GainAssignment, QuotientLabeling], a: int) -> bool:
    """Whether multiplying by the nonzero scalar ``a`` of ``Z/p`` leaves the class unchanged."""
    grp = obj.group
    if len(grp.moduli) != 1 or not _is_prime(grp.moduli[0]):
        raise PreconditionError(f"{grp} is not the additive group of a prime field")
    if a % grp.moduli[0] == 0:
        raise PreconditionError("the scalar must be nonzero")
    if isinstance(obj, GainAssignment):
        return class_from_gains(obj.scaled(a)) == class_from_gains(obj)
    try:
        scaled = obj.scaled(a)
    except InvalidLabelingError:
        return False
    return class_from_labeling(scaled) == class_from_labeling(obj)


# --- realizability ---------------------------------------------------------------------


@dataclass(frozen=True)
class Realizability:
    witness: GainAssignment | None
    searched: int  # size of the normalized assignment space
    nodes: int  # partial assignments visited

    @property
    def realizable(self) -> bool:
        return self.witness is not None


def is_realizable_over(
    g: Multigraph, lc: LinearClass, group: AdditiveGroup, max_space: int = MAX_SEARCH_SPACE
) -> Realizability:
    """Exhaustive search over gains vanishing off the default spanning forest.

    Every realizable class is realized by such an assignment, so the search
    is complete for ``group``.  Forest edges are assigned in id order and
    elements in lexicographic order; the first witness found is returned.
    """
    if not group.finite:
        raise PreconditionError("realizability search needs a finite group")
    tree = sorted(spanning_forest(g))
    space = group.order ** len(tree)
    if space > max_space:
        raise GuardExceededError(f"search space {space} exceeds guard {max_space}")
    pos = {e: i for i, e in enumerate(tree)}
    closing: dict[int, list[tuple[list[tuple[int, int]], bool]]] = {}
    for b in enumerate_bonds(g):
        ob = OrientedBond(b)
        terms = [(pos[e], ob.edge_sign(g, e)) for e in b.edges if e in pos]
        closing.setdefault(max(i for i, _ in terms), []).append((terms, b in lc.bonds))
    elements = group.elements()
    zero = group.zero
    values: list[Element] = [zero] * len(tree)
    nodes = 0

    def ok(i: int) -> bool:
        for terms, member in closing.get(i, ()):
            s = zero
            for j, sign in terms:
                s = group.add(s, values[j] if sign > 0 else group.neg(values[j]))
            if (s == zero) != member:
                return False
        return True

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(tree):
            return True
        for x in elements:
            nodes += 1
            values[i] = x
            if ok(i) and rec(i + 1):
                return True
        return False

    if rec(0):
        gains = [zero] * g.m
        for e, x in zip(tree, values):
            gains[e] = x
        return Realizability(GainAssignment(g, group, tuple(gains)), space, nodes)
    return Realizability(None, space, nodes)


# --- random instances -------------------------------------------------------------------


def random_gains(g: Multigraph, group: AdditiveGroup, rng: random.Random) -> GainAssignment:
    zero = group.zero
    return GainAssignment(
        g, group, tuple(zero if g.is_loop(e) else group.random_element(rng) for e in range(g.m))
    )


def random_labeling(g: Multigraph, group: AdditiveGroup, rng: random.Random) -> QuotientLabeling:
    labels = [group.random_element(rng) for _ in g.vertices]
    for comp in g.components:
        last = max(comp)
        labels[last] = group.neg(group.total(labels[v] for v in comp if v != last))
    return QuotientLabeling(g, group, tuple(labels))


def random_oriented_cycle(g: Multigraph, rng: random.Random) -> list[tuple[int, int]] | None:
    """A fundamental cycle of a random non-forest link, or ``None`` for forests."""
    tree = spanning_forest(g)
    chords = [e for e in g.links if e not in tree]
    if not chords:
        return None
    steps = fundamental_cycle(g, tree, rng.choice(chords))
    if rng.random() < 0.5:
        steps = [(e, g.other_end(e, t)) for e, t in reversed(steps)]
    return steps


# --- file formats -------------------------------------------------------------------------


def format_gains(ga: GainAssignment) -> str:
    lines = [f"gains {ga.group}"]
    lines += [f"gain {e} {ga.group.format_element(x)}" for e, x in enumerate(ga.gains)]
    return "\n".join(lines) + "\n"


def format_labeling(ql: QuotientLabeling) -> str:
    lines = [f"labels {ql.group}"]
    lines += [f"label {v} {ql.group.format_element(x)}" for v, x in enumerate(ql.labels)]
    return "\n".join(lines) + "\n"


def _parse_table(text: str, header: str, entry: str, size: int) -> tuple[str, dict[int, tuple[str, int]]]:
    spec: str | None = None
    rows: dict[int, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == header:
            if spec is not None or len(words) != 2:
                raise FormatError(f"expected a single '{header} <group-spec>' header", lineno)
            spec = words[1]
        elif words[0] == entry:
            if spec is None:
                raise FormatError(f"{entry} before {header} header", lineno)
            if len(words) != 3:
                raise FormatError(f"expected '{entry} <id> <value>'", lineno)
            try:
                idx = int(words[1])
            except ValueError:
                raise FormatError(f"bad id {words[1]!r}", lineno) from None
            if not 0 <= idx < size:
                raise FormatError(f"id {idx} out of range", lineno)
            if idx in rows:
                raise FormatError(f"duplicate {entry} for {idx}", lineno)
            rows[idx] = (words[2], lineno)
        else:
            raise FormatError(f"unknown directive {words[0]!r}", lineno)
    if spec is None:
        raise FormatError(f"missing {header} header")
    return spec, rows


def _values(group: AdditiveGroup, rows: dict[int, tuple[str, int]], size: int) -> list[Element]:
    out = [group.zero] * size
    for idx, (text, lineno) in rows.items():
        try:
            out[idx] = group.parse_element(text)
        except FormatError as exc:
            raise FormatError(str(exc), lineno) from None
    return out


def parse_gains(text: str, g: Multigraph) -> GainAssignment:
    """Unlisted edges get gain zero."""
    spec, rows = _parse_table(text, "gains", "gain", g.m)
    group = AdditiveGroup.parse(spec)
    return GainAssignment(g, group, tuple(_values(group, rows, g.m)))


def parse_labeling(text: str, g: Multigraph) -> QuotientLabeling:
    """Unlisted vertices get label zero."""
    spec, rows = _parse_table(text, "labels", "label", g.n)
    group = AdditiveGroup.parse(spec)
    return QuotientLabeling(g, group, tuple(_values(group, rows, g.n)))


def iter_group_assignments(group: AdditiveGroup, k: int) -> Iterator[tuple[Element, ...]]:
    return itertools.product(group.elements(), repeat=k)
