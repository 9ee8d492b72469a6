import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobiased.bonds import OrientedBond, bond_from_side, enumerate_bonds, enumerate_linear_classes, trivial_class
from cobiased.corpus import DEFAULT_CORPUS, ROTATIONS, k3, k4, k24, k24_class, rotation
from cobiased.errors import EmbeddingError, FormatError, GroupMismatchError, GuardExceededError
from cobiased.gains import AdditiveGroup, GainAssignment, bond_gain, class_from_gains
from cobiased.graph import Multigraph
from cobiased.planar import (
    FiniteGroup,
    MultiplicativeGains,
    RotationSystem,
    all_walk_products,
    dual_walk,
    format_multiplicative_gains,
    format_rotation,
    parse_multiplicative_gains,
    parse_rotation,
    planar_bond_gain,
    planar_class_from_gains,
    planar_realizability,
    rotation_from_orders,
    small_groups,
)

EMBEDDED = sorted(ROTATIONS)
S3 = FiniteGroup.symmetric(3)
FACES = {"k3": 2, "p4": 1, "c4": 2, "k4": 4, "k23": 3, "k24": 4, "bowtie": 3, "triple_edge": 3, "triangle_loop_parallel": 4}


def random_gains(g, group, rng):
    return MultiplicativeGains(g, group, tuple(group.identity if g.is_loop(e) else rng.randrange(group.order) for e in range(g.m)))


def cyclic_equal(a, b):
    """Equal as cyclic sequences up to rotation and reflection."""
    if len(a) != len(b):
        return False
    for seq in (list(b), list(reversed(b))):
        for i in range(len(seq)):
            if seq[i:] + seq[:i] == list(a):
                return True
    return False


class TestGroups:
    def test_s3(self):
        assert S3.order == 6 and not S3.abelian
        assert S3.labels[S3.identity] == "012"
        c = S3.element("120")
        assert S3.product([c, c, c]) == S3.identity
        assert S3.mul(c, S3.inv(c)) == S3.identity

    def test_composition_convention(self):
        p, q = S3.element("102"), S3.element("021")
        # (p*q)(i) = p(q(i)): q sends 1 to 2, p fixes 2
        assert S3.labels[S3.mul(p, q)] == "120"

    @pytest.mark.parametrize("spec, order, abelian", [("Z/4", 4, True), ("Z/2xZ/2", 4, True), ("S3", 6, False), ("S4", 24, False)])
    def test_parse(self, spec, order, abelian):
        grp = FiniteGroup.parse(spec)
        assert grp.order == order and grp.abelian == abelian

    def test_parse_rejects_integers(self):
        with pytest.raises(FormatError):
            FiniteGroup.parse("Z")
        with pytest.raises(FormatError):
            S3.element("000")

    def test_bad_tables(self):
        with pytest.raises(ValueError):
            FiniteGroup("bad", ("a", "b"), ((0, 1), (0, 1)))
        with pytest.raises(ValueError):
            # x*y = -x-y mod 3 is a Latin square without an identity
            FiniteGroup("bad", ("a", "b", "c"), ((0, 2, 1), (2, 1, 0), (1, 0, 2)))
        # a Latin square with identity that is not associative
        loop = ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3), (3, 2, 4, 0, 1), (4, 3, 1, 2, 0))
        with pytest.raises(ValueError):
            FiniteGroup("loop", tuple("abcde"), loop)

    def test_small_groups(self):
        groups = small_groups()
        assert [g.order for g in groups] == [1, 2, 3, 4, 4, 5, 6, 6]
        assert sum(not g.abelian for g in groups) == 1

    def test_equality_by_table(self):
        assert FiniteGroup.cyclic(3) == FiniteGroup.parse("Z/3")
        assert FiniteGroup.cyclic(4) != FiniteGroup.parse("Z/2xZ/2")


class TestRotations:
    @pytest.mark.parametrize("name", EMBEDDED)
    def test_face_counts(self, name):
        rs = rotation(name)
        assert len(rs.faces) == FACES[name]
        g = rs.graph
        assert g.n - g.m + len(rs.faces) == 2

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_faces_partition_darts(self, name):
        rs = rotation(name)
        darts = [d for f in rs.faces for d in f]
        assert sorted(darts) == sorted((e, end) for e in range(rs.graph.m) for end in (0, 1))

    def test_nonplanar_rotation(self):
        with pytest.raises(EmbeddingError):
            rotation_from_orders(k4(), [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]])

    def test_disconnected(self):
        with pytest.raises(EmbeddingError):
            RotationSystem(DEFAULT_CORPUS["two_triangles"], ROTATIONS["k3"] * 2)

    def test_bad_darts(self):
        with pytest.raises(EmbeddingError):
            RotationSystem(k3(), (((0, 0),), ((0, 1), (2, 0)), ((1, 1), (2, 1))))
        with pytest.raises(EmbeddingError):
            RotationSystem(k3(), (((0, 0), (1, 0), (0, 0)), ((0, 1), (2, 0)), ((1, 1), (2, 1))))
        with pytest.raises(EmbeddingError):
            RotationSystem(k3(), (((0, 1), (1, 0)), ((0, 0), (2, 0)), ((1, 1), (2, 1))))

    def test_single_vertex(self):
        rs = RotationSystem(Multigraph(1, ()), ((),))
        assert len(rs.faces) == 1

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_file_round_trip(self, name):
        rs = rotation(name)
        assert parse_rotation(format_rotation(rs), rs.graph) == rs

    @pytest.mark.parametrize(
        "text", ["vertex 0: (0,0)\n", "rotation\nrotation\n", "rotation\nvertex 9: (0,0)\n", "rotation\nvertex 0: 0,0\n", "rotation\nbogus\n"]
    )
    def test_file_errors(self, text):
        with pytest.raises(FormatError):
            parse_rotation(text, k3())


class TestDualWalk:
    def test_single_edge_bond(self):
        rs = rotation("p4")
        assert dual_walk(rs, OrientedBond(bond_from_side(rs.graph, {0}))) == [0]

    def test_k3(self):
        rs = rotation("k3")
        walk = dual_walk(rs, OrientedBond(bond_from_side(rs.graph, {2})))
        assert sorted(walk) == [1, 2]

    def test_k24_top_vertex(self):
        rs = rotation("k24")
        ob = OrientedBond(bond_from_side(rs.graph, {0}))
        assert dual_walk(rs, ob) == [0, 3, 2, 1]
        assert cyclic_equal(dual_walk(rs, ob), [0, 1, 2, 3])
        assert dual_walk(rs, OrientedBond(bond_from_side(rs.graph, {0, 4, 5}))) == [0, 7, 6, 1]

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_walk_crosses_faces(self, name):
        """Consecutive walk edges share a face."""
        rs = rotation(name)
        g = rs.graph
        face_edges = [{e for e, _ in f} for f in rs.faces]
        for b in enumerate_bonds(g):
            for ob in (OrientedBond(b), OrientedBond(b).reversed()):
                walk = dual_walk(rs, ob)
                assert sorted(walk) == sorted(b.edges)
                for x, y in zip(walk, walk[1:] + walk[:1]):
                    assert any(x in f and y in f for f in face_edges)

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_reversal(self, name):
        rs = rotation(name)
        for b in enumerate_bonds(rs.graph):
            ob = OrientedBond(b)
            assert cyclic_equal(dual_walk(rs, ob), list(reversed(dual_walk(rs, ob.reversed()))))


class TestBondGains:
    def test_identity(self):
        rs = rotation("k4")
        mg = MultiplicativeGains.identity(rs.graph, S3)
        assert all(planar_bond_gain(rs, mg, OrientedBond(b)) for b in enumerate_bonds(rs.graph))
        assert planar_class_from_gains(rs, mg).trivial

    def test_k24_s3(self):
        rs = rotation("k24")
        c = S3.element("120")
        mg = MultiplicativeGains(rs.graph, S3, (S3.identity,) * 4 + (c,) * 4)
        assert planar_bond_gain(rs, mg, OrientedBond(bond_from_side(rs.graph, {0})))
        assert not planar_bond_gain(rs, mg, OrientedBond(bond_from_side(rs.graph, {1})))

    def test_graph_mismatch(self):
        with pytest.raises(GroupMismatchError):
            planar_class_from_gains(rotation("k3"), MultiplicativeGains.identity(k4(), S3))

    def test_gain_range(self):
        with pytest.raises(ValueError):
            MultiplicativeGains(k3(), S3, (0, 1, 6))

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_start_and_direction_invariance(self, name):
        rs = rotation(name)
        rng = random.Random(name)
        for _ in range(40):
            mg = random_gains(rs.graph, S3, rng)
            for b in enumerate_bonds(rs.graph):
                verdicts = {x == S3.identity for x in all_walk_products(rs, mg, OrientedBond(b))}
                assert len(verdicts) == 1

    def test_random_s3_on_k4(self):
        rs = rotation("k4")
        rng = random.Random(0)
        for _ in range(200):
            planar_class_from_gains(rs, random_gains(rs.graph, S3, rng))

    @pytest.mark.parametrize("name", EMBEDDED)
    @pytest.mark.parametrize("spec", ["Z/2", "Z/3", "Z/2xZ/2", "Z/6"])
    def test_abelian_consistency(self, name, spec):
        rs = rotation(name)
        additive = AdditiveGroup.parse(spec)
        cayley = FiniteGroup.from_additive(additive)
        elems = additive.elements()
        rng = random.Random(name + spec)
        for _ in range(20):
            mg = random_gains(rs.graph, cayley, rng)
            ga = GainAssignment(rs.graph, additive, tuple(elems[x] for x in mg.gains))
            for b in enumerate_bonds(rs.graph):
                ob = OrientedBond(b)
                assert planar_bond_gain(rs, mg, ob) == (bond_gain(ga, ob) == additive.zero)
            assert planar_class_from_gains(rs, mg) == class_from_gains(ga)


def brute_force_planar(rs, lc, group):
    for values in itertools.product(range(group.order), repeat=rs.graph.m):
        if any(rs.graph.is_loop(e) and values[e] != group.identity for e in range(rs.graph.m)):
            continue
        if planar_class_from_gains(rs, MultiplicativeGains(rs.graph, group, values)) == lc:
            return True
    return False


class TestRealizability:
    def test_trivial(self):
        rs = rotation("k4")
        result = planar_realizability(rs, trivial_class(rs.graph), S3)
        assert result.realizable and result.witness == MultiplicativeGains.identity(rs.graph, S3)

    @pytest.mark.parametrize("group", small_groups(), ids=lambda grp: grp.name)
    def test_k24_class_not_realizable(self, group):
        result = planar_realizability(rotation("k24"), k24_class(), group)
        assert not result.realizable and result.searched == group.order**8

    @pytest.mark.parametrize("spec", ["Z/2", "Z/3"])
    def test_k24_unpruned(self, spec):
        assert not brute_force_planar(rotation("k24"), k24_class(), FiniteGroup.parse(spec))

    @pytest.mark.parametrize("name", ["k3", "p4", "c4", "k4", "triple_edge", "triangle_loop_parallel"])
    def test_matches_brute_force(self, name):
        rs = rotation(name)
        grp = FiniteGroup.cyclic(2)
        for lc in enumerate_linear_classes(rs.graph):
            result = planar_realizability(rs, lc, grp)
            assert result.realizable == brute_force_planar(rs, lc, grp)
            if result.realizable:
                assert planar_class_from_gains(rs, result.witness) == lc

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_round_trip(self, name):
        rs = rotation(name)
        rng = random.Random(name)
        for _ in range(3):
            lc = planar_class_from_gains(rs, random_gains(rs.graph, S3, rng))
            result = planar_realizability(rs, lc, S3)
            assert result.realizable and planar_class_from_gains(rs, result.witness) == lc

    def test_guard(self):
        with pytest.raises(GuardExceededError):
            planar_realizability(rotation("k24"), k24_class(), S3, max_space=1000)


class TestGainFiles:
    @pytest.mark.parametrize("spec", ["S3", "Z/2xZ/3", "Z/5"])
    def test_round_trip(self, spec):
        grp = FiniteGroup.parse(spec)
        g = k24()
        mg = random_gains(g, grp, random.Random(spec))
        assert parse_multiplicative_gains(format_multiplicative_gains(mg), g) == mg

    def test_defaults_to_identity(self):
        mg = parse_multiplicative_gains("gains S3\ngain 1 102\n", k3())
        assert mg.gains == (S3.identity, S3.element("102"), S3.identity)

    @pytest.mark.parametrize("text", ["gain 0 012\n", "gains S3\ngain 0 012\ngain 0 012\n", "gains S3\ngain 0 7\n", "gains Z\n"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_multiplicative_gains(text, k3())


@given(st.integers(0, 10**6), st.sampled_from(EMBEDDED))
def test_random_s3_classes_are_linear_and_match_every_walk(seed, name):
    rs = rotation(name)
    mg = random_gains(rs.graph, S3, random.Random(seed))
    lc = planar_class_from_gains(rs, mg)
    for b in enumerate_bonds(rs.graph):
        products = all_walk_products(rs, mg, OrientedBond(b))
        assert (b in lc) == (products[0] == S3.identity)
