"""Brute-force matroids on small ground sets.

A :class:`BruteForceMatroid` stores its independent sets explicitly as a
boolean table indexed by bitmask over the positions of ``ground``.  It is the
reference every join-matroid characterization is checked against, so it
only uses the textbook cryptomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import GroundMismatchError, GuardExceededError, MatroidAxiomError, UnknownElementError

MAX_GROUND = 20


def _popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        counts[1 << i: 1 << (i + 1)] = counts[: 1 << i] + 1
    return counts


def _subset_max(values: np.ndarray, n: int) -> np.ndarray:
    """For every mask, the maximum of ``values`` over its submasks."""
    out = values.copy()
    idx = np.arange(out.size)
    for i in range(n):
        with_bit = idx[(idx >> i) & 1 == 1]
        out[with_bit] = np.maximum(out[with_bit], out[with_bit ^ (1 << i)])
    return out


def _all_submasks_true(flags: np.ndarray, n: int) -> np.ndarray:
    """``out[X]`` is true when ``flags[X - x]`` holds for every ``x`` in ``X``."""
    out = np.ones_like(flags)
    idx = np.arange(flags.size)
    for i in range(n):
        with_bit = idx[(idx >> i) & 1 == 1]
        out[with_bit] &= flags[with_bit ^ (1 << i)]
    return out


@dataclass(frozen=True, eq=False)
class BruteForceMatroid:
    ground: tuple[Hashable, ...]
    independent: np.ndarray  # bool, length 2**len(ground)

    @property
    def n(self) -> int:
        return len(self.ground)

    @cached_property
    def position(self) -> dict[Hashable, int]:
        return {x: i for i, x in enumerate(self.ground)}

    def to_mask(self, xs: Iterable[Hashable]) -> int:
        bits = 0
        for x in xs:
            try:
                bits |= 1 << self.position[x]
            except KeyError:
                raise UnknownElementError(f"{x!r} is not in the ground set") from None
        return bits

    def to_set(self, mask: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.ground) if mask >> i & 1)

    @cached_property
    def sizes(self) -> np.ndarray:
        return _popcounts(self.n)

    @cached_property
    def rank_table(self) -> np.ndarray:
        vals = np.where(self.independent, self.sizes, 0).astype(np.int8)
        return _subset_max(vals, self.n)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def is_independent(self, xs: Iterable[Hashable]) -> bool:
        return bool(self.independent[self.to_mask(xs)])

    def independent_sets(self) -> list[frozenset]:
        return [self.to_set(int(m)) for m in np.flatnonzero(self.independent)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BruteForceMatroid):
            return NotImplemented
        return self.ground == other.ground and bool(np.array_equal(self.independent, other.independent))

    __hash__ = None  # type: ignore[assignment]

    def relabel(self, mapping: dict[Hashable, Hashable]) -> BruteForceMatroid:
        """Same family under renamed elements; positions are unchanged."""
        return BruteForceMatroid(tuple(mapping.get(x, x) for x in self.ground), self.independent)


def _check_axioms(ground: tuple, indep: np.ndarray) -> None:
    n = len(ground)
    if not indep[0]:
        raise MatroidAxiomError("I1", ())
    down = _all_submasks_true(indep, n)
    bad = np.flatnonzero(indep & ~down)
    if bad.size:
        x = int(bad[0])
        for i in range(n):
            if x >> i & 1 and not indep[x ^ (1 << i)]:
                raise MatroidAxiomError("I2", (x, x ^ (1 << i)))
    sizes = _popcounts(n)
    rank = _subset_max(np.where(indep, sizes, 0).astype(np.int8), n)
    full = (1 << n) - 1
    for i_mask in np.flatnonzero(indep):
        i_mask = int(i_mask)
        augmenting = 0
        for j in range(n):
            bit = 1 << j
            if not i_mask & bit and indep[i_mask | bit]:
                augmenting |= bit
        blocked = full & ~augmenting
        if rank[blocked] > sizes[i_mask]:
            target = int(sizes[i_mask]) + 1
            for j_mask in range(1 << n):
                if j_mask & ~blocked == 0 and indep[j_mask] and sizes[j_mask] == target:
                    raise MatroidAxiomError("I3", (i_mask, j_mask))


def _guard(ground: Sequence) -> tuple:
    ground = tuple(ground)
    if len(ground) > MAX_GROUND:
        raise GuardExceededError(f"ground set of {len(ground)} exceeds oracle guard {MAX_GROUND}")
    if len(set(ground)) != len(ground):
        raise ValueError("repeated ground element")
    return ground


def from_table(ground: Sequence[Hashable], indep: np.ndarray, check: bool = True) -> BruteForceMatroid:
    ground = _guard(ground)
    indep = np.asarray(indep, dtype=bool)
    if check:
        _check_axioms(ground, indep)
    return BruteForceMatroid(ground, indep)


def oracle_from_independence(
    ground: Sequence[Hashable], predicate: Callable[[frozenset], bool]
) -> BruteForceMatroid:
    """Materialize every independent set; raises ``MatroidAxiomError`` with a witness pair.

    Witness masks index positions of ``ground``; the reported witness is the
    smallest in bitmask order.
    """
    ground = _guard(ground)
    n = len(ground)
    table = np.zeros(1 << n, dtype=bool)
    for mask in range(1 << n):
        table[mask] = bool(predicate(frozenset(x for i, x in enumerate(ground) if mask >> i & 1)))
    return from_table(ground, table)


def _family_masks(ground: tuple, family: Iterable[Iterable[Hashable]]) -> list[int]:
    pos = {x: i for i, x in enumerate(ground)}
    out = []
    for s in family:
        bits = 0
        for x in s:
            if x not in pos:
                raise UnknownElementError(f"{x!r} is not in the ground set")
            bits |= 1 << pos[x]
        out.append(bits)
    return out


def from_bases(ground: Sequence[Hashable], bases: Iterable[Iterable[Hashable]]) -> BruteForceMatroid:
    ground = _guard(ground)
    n = len(ground)
    table = np.zeros(1 << n, dtype=bool)
    for b in _family_masks(ground, bases):
        table[b] = True
    # downward closure
    idx = np.arange(1 << n)
    for i in range(n):
        without = idx[(idx >> i) & 1 == 0]
        table[without] |= table[without | (1 << i)]
    return from_table(ground, table)


def from_circuits(ground: Sequence[Hashable], circuits: Iterable[Iterable[Hashable]]) -> BruteForceMatroid:
    ground = _guard(ground)
    n = len(ground)
    dependent = np.zeros(1 << n, dtype=bool)
    for c in _family_masks(ground, circuits):
        dependent[c] = True
    idx = np.arange(1 << n)
    for i in range(n):
        with_bit = idx[(idx >> i) & 1 == 1]
        dependent[with_bit] |= dependent[with_bit ^ (1 << i)]
    return from_table(ground, ~dependent)


def from_rank(ground: Sequence[Hashable], rank: Callable[[frozenset], int]) -> BruteForceMatroid:
    """Independent sets are those of full rank; the given function must then equal the oracle rank."""
    ground = _guard(ground)
    n = len(ground)
    values = np.zeros(1 << n, dtype=np.int16)
    for mask in range(1 << n):
        values[mask] = rank(frozenset(x for i, x in enumerate(ground) if mask >> i & 1))
    m = from_table(ground, values == _popcounts(n))
    mismatch = np.flatnonzero(values != m.rank_table)
    if mismatch.size:
        raise MatroidAxiomError("R", (int(mismatch[0]),))
    return m


def from_cocircuits(ground: Sequence[Hashable], cocircuits: Iterable[Iterable[Hashable]]) -> BruteForceMatroid:
    return dual(from_circuits(ground, cocircuits))


def dual(m: BruteForceMatroid) -> BruteForceMatroid:
    full = m.full
    total = m.rank_table[full]
    comp = np.arange(1 << m.n) ^ full
    return BruteForceMatroid(m.ground, m.rank_table[comp] == total)


def rank_of(m: BruteForceMatroid, xs: Iterable[Hashable]) -> int:
    return int(m.rank_table[m.to_mask(xs)])


def _sorted_family(m: BruteForceMatroid, masks: np.ndarray) -> list[frozenset]:
    sets = [m.to_set(int(x)) for x in masks]
    order = {x: i for i, x in enumerate(m.ground)}
    return sorted(sets, key=lambda s: sorted(order[x] for x in s))


def to_bases(m: BruteForceMatroid) -> list[frozenset]:
    r = m.rank_table[m.full]
    return _sorted_family(m, np.flatnonzero(m.independent & (m.sizes == r)))


def to_circuits(m: BruteForceMatroid) -> list[frozenset]:
    minimal = ~m.independent & _all_submasks_true(m.independent, m.n)
    return _sorted_family(m, np.flatnonzero(minimal))


def to_cocircuits(m: BruteForceMatroid) -> list[frozenset]:
    return to_circuits(dual(m))


def oracle_minor(m: BruteForceMatroid, op: str, e: Hashable) -> BruteForceMatroid:
    """Delete or contract ``e``; contracting a loop is the same as deleting it."""
    if e not in m.position:
        raise UnknownElementError(f"{e!r} is not in the ground set")
    i = m.position[e]
    bit = 1 << i
    masks = np.arange(1 << m.n)
    keep = masks[(masks & bit) == 0]
    if op == "delete" or (op == "contract" and not m.independent[bit]):
        table = m.independent[keep]
    elif op == "contract":
        table = m.independent[keep | bit]
    else:
        raise ValueError(f"unknown minor operation {op!r}")
    # squeeze out bit i
    low = keep & (bit - 1)
    high = (keep >> (i + 1)) << i
    packed = np.zeros(1 << (m.n - 1), dtype=bool)
    packed[low | high] = table
    ground = m.ground[:i] + m.ground[i + 1:]
    return BruteForceMatroid(ground, packed)


def oracle_equal(m1: BruteForceMatroid, m2: BruteForceMatroid) -> bool:
    if set(m1.ground) != set(m2.ground):
        raise GroundMismatchError("matroids have different ground sets")
    if m1.ground != m2.ground:
        perm = [m2.position[x] for x in m1.ground]
        m2 = reorder(m2, perm)
    return m1 == m2


def reorder(m: BruteForceMatroid, perm: Sequence[int]) -> BruteForceMatroid:
    """Matroid whose position ``k`` holds ``m``'s element at position ``perm[k]``."""
    masks = np.arange(1 << m.n)
    old = np.zeros_like(masks)
    for k, p in enumerate(perm):
        old |= ((masks >> k) & 1) << p
    return BruteForceMatroid(tuple(m.ground[p] for p in perm), m.independent[old])


def uniform(r: int, n: int) -> BruteForceMatroid:
    return oracle_from_independence(tuple(range(n)), lambda s: len(s) <= r)
