"""Complete join and join matroids of a cobiased graph.

``J0(G, L)`` lives on the edges plus one extra element ``e0`` (id ``m``);
``J(G, L)`` is its contraction by ``e0`` and lives on the edges alone.  Rank
and independence are computed from the connected partition a set of edges
induces; bases, circuits and cocircuits are enumerated from their graphic
descriptions and are guard-limited.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .bonds import (
    LinearClass,
    contract_class,
    delete_class,
    enumerate_bonds,
    enumerate_dibonds,
    enumerate_tribonds,
)
from .errors import PreconditionError, TrivialClassError, UnknownElementError
from .graph import (
    ConnectedPartition,
    Multigraph,
    check_partition,
    component_labels,
    enumerate_cycles,
    enumerate_forests,
    is_isthmus,
    shifted_id,
)
from .oracle import BruteForceMatroid, oracle_from_independence


class Variant(enum.Enum):
    COMPLETE_JOIN = "j0"
    JOIN = "j"


def _ext_mask(g: Multigraph, labels: list[int]) -> int:
    bits = 0
    for e, (u, v) in enumerate(g.edges):
        if labels[u] != labels[v]:
            bits |= 1 << e
    return bits


def _covers_uncobalanced(unco: list[int], ext: int) -> bool:
    return any(b & ~ext == 0 for b in unco)


def is_cobalanced_partition(g: Multigraph, lc: LinearClass, pi: ConnectedPartition) -> bool:
    """Every bond contained in the exterior of ``pi`` belongs to the class."""
    check_partition(g, pi)
    lab = pi.labels
    ext = _ext_mask(g, [lab[v] for v in g.vertices])
    return not _covers_uncobalanced([b.mask for b in lc.uncobalanced], ext)


def _bits(edges: Iterable[int]) -> int:
    out = 0
    for e in edges:
        out |= 1 << e
    return out


def _sorted_sets(family: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    return sorted(set(family), key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class JoinMatroid:
    graph: Multigraph
    linear_class: LinearClass
    variant: Variant = Variant.JOIN
    # Deleting an un-cobalanced isthmus turns e0 into a coloop, which no class on the
    # smaller graph can express; with this flag J0 = M(G) + coloop and J = M(G).
    e0_coloop: bool = False

    def __post_init__(self) -> None:
        if self.linear_class.graph != self.graph:
            raise PreconditionError("linear class belongs to a different graph")

    @property
    def e0(self) -> int | None:
        return self.graph.m if self.variant is Variant.COMPLETE_JOIN else None

    @property
    def ground(self) -> tuple[int, ...]:
        m = self.graph.m
        return tuple(range(m + 1)) if self.variant is Variant.COMPLETE_JOIN else tuple(range(m))

    @property
    def trivial(self) -> bool:
        return self.linear_class.trivial

    @property
    def graphic(self) -> bool:
        """True when J is just M(G): a trivial class, or e0 forced to be a coloop."""
        return self.trivial or self.e0_coloop

    @cached_property
    def _unco(self) -> list[int]:
        return [b.mask for b in self.linear_class.uncobalanced]

    def _split(self, xs: Iterable[int]) -> tuple[list[int], bool]:
        edges, has_e0 = [], False
        for x in xs:
            if x == self.e0:
                has_e0 = True
            elif isinstance(x, int) and 0 <= x < self.graph.m:
                edges.append(x)
            else:
                raise UnknownElementError(f"{x!r} is not an element of this matroid")
        return edges, has_e0

    def _partition(self, edges: list[int]) -> tuple[int, bool]:
        """Number of parts of the induced partition, and whether it is cobalanced."""
        labels = component_labels(self.graph, edges)
        return len(set(labels)), not _covers_uncobalanced(self._unco, _ext_mask(self.graph, labels))

    def rank(self, xs: Iterable[int]) -> int:
        edges, has_e0 = self._split(xs)
        parts, cobalanced = self._partition(edges)
        graphic = self.graph.n - parts
        if self.graphic:
            return graphic + (has_e0 and self.e0_coloop)
        if self.variant is Variant.JOIN:
            return graphic - 1 if cobalanced else graphic
        return graphic + (has_e0 and not cobalanced)

    def is_independent(self, xs: Iterable[int]) -> bool:
        edges, has_e0 = self._split(xs)
        parts, cobalanced = self._partition(edges)
        if self.graph.n - parts != len(edges):
            return False  # not a forest
        if self.graphic:
            return self.variant is Variant.JOIN or not has_e0 or self.e0_coloop
        if self.variant is Variant.JOIN:
            return not cobalanced
        return not has_e0 or not cobalanced

    def _require_nontrivial(self) -> None:
        if self.trivial and not self.e0_coloop and self.variant is Variant.COMPLETE_JOIN:
            raise TrivialClassError("enumerations of J0 need a non-trivial class")

    def bases(self) -> list[frozenset[int]]:
        self._require_nontrivial()
        g = self.graph
        full = g.n - g.num_components
        forests = list(enumerate_forests(g))
        if self.graphic:
            extra = {g.m} if self.e0_coloop and self.variant is Variant.COMPLETE_JOIN else set()
            return _sorted_sets(f | extra for f in forests if len(f) == full)
        out: list[frozenset[int]] = []
        for f in forests:
            labels = component_labels(g, f)
            if len(f) == full and self.variant is Variant.COMPLETE_JOIN:
                out.append(f)
            elif len(f) == full - 1:
                ext = _ext_mask(g, labels)
                # the exterior of a coatom is a single bond
                if ext in self._unco:
                    out.append(f | {g.m} if self.variant is Variant.COMPLETE_JOIN else f)
        return _sorted_sets(out)

    def circuits(self) -> list[frozenset[int]]:
        self._require_nontrivial()
        cycles = enumerate_cycles(self.graph)
        if self.graphic:
            return _sorted_sets(cycles)
        joins = enumerate_ljoins(self.graph, self.linear_class)
        if self.variant is Variant.COMPLETE_JOIN:
            return _sorted_sets([*cycles, *(j | {self.graph.m} for j in joins)])
        join_bits = [_bits(j) for j in joins]
        free = [c for c in cycles if not any(j & ~_bits(c) == 0 for j in join_bits)]
        return _sorted_sets([*joins, *free])

    def cocircuits(self) -> list[frozenset[int]]:
        self._require_nontrivial()
        g, lc = self.graph, self.linear_class
        bonds = enumerate_bonds(g)
        if self.graphic:
            extra = [frozenset({g.m})] if self.e0_coloop and self.variant is Variant.COMPLETE_JOIN else []
            return _sorted_sets([*(b.edges for b in bonds), *extra])
        out = [b.edges for b in bonds if b in lc.bonds]
        if self.variant is Variant.COMPLETE_JOIN:
            out += [b.edges | {g.m} for b in bonds if b not in lc.bonds]
        members = [b.mask for b in lc.bonds]
        for t in [*enumerate_tribonds(g), *enumerate_dibonds(g)]:
            tb = _bits(t.edges)
            if not any(b & ~tb == 0 for b in members):
                out.append(t.edges)
        return _sorted_sets(out)

    def minor(self, op: str, e: int) -> JoinMatroid:
        """Join matroid of the minor cobiased graph (edge ids above ``e`` shift down)."""
        if e == self.e0 or not (isinstance(e, int) and 0 <= e < self.graph.m):
            raise UnknownElementError(f"{e!r} is not a graph edge of this matroid")
        g = self.graph
        coloop = self.e0_coloop
        if op == "delete":
            h, lc = delete_class(g, self.linear_class, e)
            if not g.is_loop(e) and is_isthmus(g, e) and frozenset({e}) not in self.linear_class.keys:
                # {e, e0} is a cocircuit of J0, so {e0} is one after deleting e
                coloop = True
        elif op == "contract":
            h, lc = contract_class(g, self.linear_class, e)
        else:
            raise ValueError(f"unknown minor operation {op!r}")
        return JoinMatroid(h, lc, self.variant, coloop)

    def minor_relabeling(self, e: int) -> dict[int, int]:
        """Element renaming taking the oracle minor's ground onto the minor matroid's ground."""
        return {x: shifted_id(x, e) for x in self.ground if x != e}

    def oracle(self) -> BruteForceMatroid:
        return oracle_from_independence(self.ground, self.is_independent)

    def render(self, xs: Iterable[int]) -> str:
        return " ".join("*" if x == self.e0 else str(x) for x in sorted(xs))

    def dump(self, show: Iterable[str] = ("bases", "circuits", "cocircuits", "rank")) -> str:
        lines = [f"matroid {self.variant.value} {len(self.ground)}"]
        for what in show:
            if what == "bases":
                lines += [f"base {self.render(b)}".rstrip() for b in self.bases()]
            elif what == "circuits":
                lines += [f"circuit {self.render(c)}" for c in self.circuits()]
            elif what == "cocircuits":
                lines += [f"cocircuit {self.render(c)}" for c in self.cocircuits()]
            elif what == "rank":
                lines.append(f"rank {self.rank(self.ground)}")
            else:
                raise ValueError(f"unknown family {what!r}")
        return "\n".join(lines) + "\n"


def complete_join_matroid(g: Multigraph, lc: LinearClass) -> JoinMatroid:
    return JoinMatroid(g, lc, Variant.COMPLETE_JOIN)


def join_matroid(g: Multigraph, lc: LinearClass) -> JoinMatroid:
    return JoinMatroid(g, lc, Variant.JOIN)


def enumerate_ljoins(g: Multigraph, lc: LinearClass) -> list[frozenset[int]]:
    """Forests inducing a cobalanced partition, minimal under inclusion."""
    if lc.trivial:
        raise TrivialClassError("every forest is cobalanced for the trivial class")
    unco = [b.mask for b in lc.uncobalanced]

    def cobalanced(f: Iterable[int]) -> bool:
        return not _covers_uncobalanced(unco, _ext_mask(g, component_labels(g, f)))

    out = []
    for f in enumerate_forests(g):
        if cobalanced(f) and not any(cobalanced(f - {x}) for x in f):
            out.append(f)
    return _sorted_sets(out)
