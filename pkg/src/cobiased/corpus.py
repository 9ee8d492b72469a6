"""The default test corpus: small graphs, plane embeddings and named classes.

In ``K_{2,m}`` the two poles are vertices 0 (top) and 1 (bottom) and the
middle vertices are ``2..m+1``; edge ``i`` (for ``i < m``) is the top edge
``a_{i+1}`` and edge ``m + i`` the bottom edge ``b_{i+1}``, stored with the
pole last.
"""

from __future__ import annotations

from .bonds import LinearClass, bond_from_side
from .graph import Multigraph
from .planar import RotationSystem


def k3() -> Multigraph:
    return Multigraph(3, ((0, 1), (0, 2), (1, 2)))


def p4() -> Multigraph:
    """Path a-b-c-d with edges ab=0, bc=1, cd=2."""
    return Multigraph(4, ((0, 1), (1, 2), (2, 3)))


def c4() -> Multigraph:
    return Multigraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


def k4() -> Multigraph:
    return Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


def k2m(m: int) -> Multigraph:
    top = tuple((0, k) for k in range(2, m + 2))
    bottom = tuple((k, 1) for k in range(2, m + 2))
    return Multigraph(m + 2, top + bottom)


def k23() -> Multigraph:
    return k2m(3)


def k24() -> Multigraph:
    return k2m(4)


def bowtie() -> Multigraph:
    """Two triangles sharing vertex 0."""
    return Multigraph(5, ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)))


def two_triangles() -> Multigraph:
    """The bowtie with its cut vertex split in two (edge ids match the bowtie's)."""
    return Multigraph(6, ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)))


def triple_edge() -> Multigraph:
    return Multigraph(2, ((0, 1), (0, 1), (0, 1)))


def triangle_loop_parallel() -> Multigraph:
    return Multigraph(3, ((0, 1), (0, 2), (1, 2), (0, 1), (2, 2)))


DEFAULT_CORPUS: dict[str, Multigraph] = {
    "k3": k3(),
    "p4": p4(),
    "c4": c4(),
    "k4": k4(),
    "k23": k23(),
    "k24": k24(),
    "bowtie": bowtie(),
    "two_triangles": two_triangles(),
    "triple_edge": triple_edge(),
    "triangle_loop_parallel": triangle_loop_parallel(),
}


def _k2m_rotation(m: int) -> tuple:
    top = tuple((i, 0) for i in range(m))
    bottom = tuple((m + i, 1) for i in reversed(range(m)))
    middle = tuple(((i, 1), (m + i, 0)) for i in range(m))
    return (top, bottom, *middle)


ROTATIONS: dict[str, tuple] = {
    "k3": (((0, 0), (1, 0)), ((0, 1), (2, 0)), ((1, 1), (2, 1))),
    "p4": (((0, 0),), ((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1),)),
    "c4": (((0, 0), (3, 0)), ((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (3, 1))),
    "k4": (((0, 0), (1, 0), (2, 0)), ((0, 1), (4, 0), (3, 0)), ((1, 1), (3, 1), (5, 0)), ((2, 1), (5, 1), (4, 1))),
    "k23": _k2m_rotation(3),
    "k24": _k2m_rotation(4),
    "bowtie": (
        ((0, 0), (1, 0), (3, 0), (4, 0)),
        ((0, 1), (2, 0)),
        ((1, 1), (2, 1)),
        ((3, 1), (5, 0)),
        ((4, 1), (5, 1)),
    ),
    "triple_edge": (((0, 0), (1, 0), (2, 0)), ((0, 1), (2, 1), (1, 1))),
    "triangle_loop_parallel": (
        ((0, 0), (1, 0), (3, 0)),
        ((0, 1), (3, 1), (2, 0)),
        ((1, 1), (2, 1), (4, 0), (4, 1)),
    ),
}


def rotation(name: str) -> RotationSystem:
    """Plane embedding of a connected corpus graph (``two_triangles`` has none)."""
    return RotationSystem(DEFAULT_CORPUS[name], ROTATIONS[name])


def k24_class() -> LinearClass:
    """The three-bond class ``{a1a2a3a4, a1a2b3b4, b1b2a3a4}`` on ``K_{2,4}``."""
    g = k24()
    return LinearClass(
        g,
        frozenset({bond_from_side(g, {0}), bond_from_side(g, {0, 4, 5}), bond_from_side(g, {0, 2, 3})}),
    )


def p4_bc_class() -> LinearClass:
    g = p4()
    return LinearClass(g, frozenset({bond_from_side(g, {0, 1})}))

