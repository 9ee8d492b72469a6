import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobiased.bonds import (
    bond_from_side,
    enumerate_bonds,
    enumerate_linear_classes,
    random_linear_class,
    split_blocks,
    trivial_class,
    validate_linear_class,
)
from cobiased.corpus import DEFAULT_CORPUS, k3, k4, p4
from cobiased.errors import PreconditionError, TrivialClassError, UnknownElementError
from cobiased.graph import ConnectedPartition, Multigraph, induced_partition, is_forest
from cobiased.join import (
    JoinMatroid,
    Variant,
    complete_join_matroid,
    enumerate_ljoins,
    is_cobalanced_partition,
    join_matroid,
)
from cobiased.oracle import (
    from_bases,
    from_circuits,
    from_cocircuits,
    from_rank,
    oracle_equal,
    oracle_from_independence,
    oracle_minor,
    to_bases,
    to_circuits,
)

SMALL = ["k3", "p4", "c4", "k4", "k23", "bowtie", "two_triangles", "triple_edge", "triangle_loop_parallel"]
E0_P4 = 3


def sets(*xs):
    return [frozenset(x) for x in xs]


def p4_bc():
    return validate_linear_class(p4(), [{1}])


def k3_class(side):
    g = k3()
    return validate_linear_class(g, [bond_from_side(g, side)])


def graphic_oracle(g):
    return oracle_from_independence(tuple(range(g.m)), lambda s: is_forest(g, s))


def nontrivial_classes(name, limit=40):
    g = DEFAULT_CORPUS[name]
    out = [lc for lc in enumerate_linear_classes(g) if not lc.trivial]
    rng = random.Random(name)
    rng.shuffle(out)
    return g, out[:limit]


class TestCobalancedPartition:
    def test_k3_examples(self):
        g, lc = k3(), k3_class({2})
        assert is_cobalanced_partition(g, lc, ConnectedPartition(({0, 1}, {2})))
        assert not is_cobalanced_partition(g, lc, induced_partition(g, ()))

    @pytest.mark.parametrize("name", SMALL)
    def test_top_partition_always_cobalanced(self, name):
        g, classes = nontrivial_classes(name, 5)
        for lc in classes:
            assert is_cobalanced_partition(g, lc, induced_partition(g, range(g.m)))


class TestRankAndIndependence:
    def test_p4_examples(self):
        j, j0 = join_matroid(p4(), p4_bc()), complete_join_matroid(p4(), p4_bc())
        assert j.rank({0, 1, 2}) == 2
        assert j0.rank(()) == 0
        assert j0.rank({0, E0_P4}) == 2
        assert not j.is_independent({0, 2})
        assert j.is_independent({0, 1})

    def test_empty_set(self):
        assert join_matroid(p4(), p4_bc()).is_independent(())
        assert join_matroid(p4(), trivial_class(p4())).is_independent(())
        assert complete_join_matroid(p4(), p4_bc()).is_independent(())

    def test_e0_is_loop_for_trivial_class(self):
        j0 = complete_join_matroid(k3(), trivial_class(k3()))
        assert j0.rank({3}) == 0 and not j0.is_independent({3})
        assert join_matroid(k3(), trivial_class(k3())).rank({0, 1, 2}) == 2

    def test_unknown_element(self):
        with pytest.raises(UnknownElementError):
            join_matroid(p4(), p4_bc()).rank({3})
        with pytest.raises(UnknownElementError):
            complete_join_matroid(p4(), p4_bc()).is_independent({4})

    def test_class_from_other_graph(self):
        with pytest.raises(PreconditionError):
            JoinMatroid(k4(), p4_bc())

    @pytest.mark.parametrize("name", SMALL)
    def test_rank_drop(self, name):
        g, classes = nontrivial_classes(name)
        full = g.n - g.num_components
        for lc in classes:
            assert join_matroid(g, lc).rank(range(g.m)) == full - 1
            assert complete_join_matroid(g, lc).rank(range(g.m + 1)) == full

    def test_loops_are_loops(self):
        g = DEFAULT_CORPUS["triangle_loop_parallel"]
        for lc in enumerate_linear_classes(g):
            for variant in Variant:
                assert JoinMatroid(g, lc, variant).rank({4}) == 0


class TestEnumerations:
    def test_k3_bases_and_circuits(self):
        j = join_matroid(k3(), k3_class({0}))
        assert j.bases() == sets({0}, {1})
        assert j.circuits() == sets({2}, {0, 1})

    def test_p4_bases(self):
        assert complete_join_matroid(p4(), p4_bc()).bases() == sets({0, 1, 2}, {0, 1, 3}, {1, 2, 3})

    def test_p4_circuits(self):
        assert join_matroid(p4(), p4_bc()).circuits() == sets({0, 2})
        assert complete_join_matroid(p4(), p4_bc()).circuits() == sets({0, 2, 3})

    def test_p4_cocircuits(self):
        assert join_matroid(p4(), p4_bc()).cocircuits() == sets({1}, {0, 2})
        assert complete_join_matroid(p4(), p4_bc()).cocircuits() == sets({1}, {0, 2}, {0, 3}, {2, 3})

    def test_trivial_join_is_graphic(self):
        j = join_matroid(k4(), trivial_class(k4()))
        assert oracle_equal(from_bases(j.ground, j.bases()), graphic_oracle(k4()))

    def test_trivial_complete_join_enumerations_raise(self):
        j0 = complete_join_matroid(k3(), trivial_class(k3()))
        for method in (j0.bases, j0.circuits, j0.cocircuits):
            with pytest.raises(TrivialClassError):
                method()

    @pytest.mark.parametrize("name", ["p4", "c4", "k23", "bowtie"])
    def test_all_but_one_bond(self, name):
        g = DEFAULT_CORPUS[name]
        total = len(enumerate_bonds(g))
        for lc in enumerate_linear_classes(g):
            if len(lc) == total - 1:
                assert lc.keys <= set(join_matroid(g, lc).cocircuits())

    def test_restriction_to_edges_is_graphic(self):
        g, classes = nontrivial_classes("k4", 10)
        cycles = set(to_circuits(graphic_oracle(g)))
        for lc in classes:
            c0 = complete_join_matroid(g, lc).circuits()
            assert {c for c in c0 if g.m not in c} == cycles

    def test_dump(self):
        text = complete_join_matroid(p4(), p4_bc()).dump(("cocircuits", "rank"))
        assert text == "matroid j0 4\ncocircuit 1\ncocircuit 0 2\ncocircuit 0 *\ncocircuit 2 *\nrank 3\n"


class TestLJoins:
    def test_p4(self):
        assert enumerate_ljoins(p4(), p4_bc()) == sets({0, 2})

    def test_k3(self):
        assert enumerate_ljoins(k3(), k3_class({0})) == sets({2}, {0, 1})

    def test_empty_class_gives_maximal_forests(self):
        g = k4()
        expected = sorted(to_bases(graphic_oracle(g)), key=lambda s: (len(s), sorted(s)))
        assert enumerate_ljoins(g, validate_linear_class(g, [])) == expected

    def test_trivial_raises(self):
        with pytest.raises(TrivialClassError):
            enumerate_ljoins(k3(), trivial_class(k3()))

    @pytest.mark.parametrize("name", SMALL)
    def test_single_edge_deletion_uncobalanced(self, name):
        g, classes = nontrivial_classes(name, 10)
        for lc in classes:
            for f in enumerate_ljoins(g, lc):
                assert is_forest(g, f)
                assert is_cobalanced_partition(g, lc, induced_partition(g, f))
                for x in f:
                    assert not is_cobalanced_partition(g, lc, induced_partition(g, f - {x}))


def assert_five_way(jm):
    reference = jm.oracle()
    ground = jm.ground
    assert oracle_equal(reference, from_bases(ground, jm.bases()))
    assert oracle_equal(reference, from_circuits(ground, jm.circuits()))
    assert oracle_equal(reference, from_cocircuits(ground, jm.cocircuits()))
    assert oracle_equal(reference, from_rank(ground, jm.rank))


class TestAgreement:
    @pytest.mark.parametrize("name", SMALL)
    @pytest.mark.parametrize("variant", list(Variant))
    def test_five_way(self, name, variant):
        g, classes = nontrivial_classes(name, 12)
        for lc in classes:
            assert_five_way(JoinMatroid(g, lc, variant))

    @pytest.mark.parametrize("name", SMALL)
    def test_quotient_and_extension(self, name):
        g, classes = nontrivial_classes(name, 12)
        for lc in [*classes, trivial_class(g)]:
            j0 = complete_join_matroid(g, lc).oracle()
            assert oracle_equal(oracle_minor(j0, "contract", g.m), join_matroid(g, lc).oracle())
            assert oracle_equal(oracle_minor(j0, "delete", g.m), graphic_oracle(g))

    @pytest.mark.parametrize("name", ["bowtie", "p4", "triangle_loop_parallel"])
    def test_block_split(self, name):
        g, classes = nontrivial_classes(name, 12)
        for lc in classes:
            h, lh = split_blocks(g, lc)
            for variant in Variant:
                assert oracle_equal(JoinMatroid(g, lc, variant).oracle(), JoinMatroid(h, lh, variant).oracle())


def assert_minor(jm, op, e):
    g = jm.graph
    # contracting a graph loop is deleting it
    graph_op = "delete" if op == "contract" and g.is_loop(e) else op
    expected = oracle_minor(jm.oracle(), op, e).relabel(jm.minor_relabeling(e))
    assert oracle_equal(expected, jm.minor(graph_op, e).oracle())


class TestMinors:
    def test_p4_delete_isthmus_outside_class(self):
        for variant in Variant:
            jm = JoinMatroid(p4(), p4_bc(), variant)
            minor = jm.minor("delete", 0)
            assert minor.e0_coloop
            assert_minor(jm, "delete", 0)

    def test_p4_delete_class_isthmus(self):
        jm = complete_join_matroid(p4(), p4_bc())
        assert not jm.minor("delete", 1).e0_coloop
        assert_minor(jm, "delete", 1)

    def test_k3_contract(self):
        jm = complete_join_matroid(k3(), k3_class({2}))
        minor = jm.minor("contract", 0)
        assert minor.graph.m == 2 and minor.linear_class.trivial
        assert minor.linear_class.keys == {frozenset({0, 1})}
        assert_minor(jm, "contract", 0)

    def test_e0_rejected(self):
        jm = complete_join_matroid(p4(), p4_bc())
        with pytest.raises(UnknownElementError):
            jm.minor("delete", E0_P4)
        with pytest.raises(ValueError):
            jm.minor("flip", 0)

    @pytest.mark.parametrize("name", SMALL)
    def test_all_single_minors(self, name):
        g, classes = nontrivial_classes(name, 15)
        for lc in [*classes, trivial_class(g)]:
            for variant in Variant:
                jm = JoinMatroid(g, lc, variant)
                for e in range(g.m):
                    for op in ("delete", "contract"):
                        assert_minor(jm, op, e)

    def test_double_minors_commute(self):
        g, classes = nontrivial_classes("k4", 10)
        for lc in classes:
            jm = complete_join_matroid(g, lc)
            a = jm.minor("contract", 0).minor("delete", 4)
            b = jm.minor("delete", 5).minor("contract", 0)
            assert oracle_equal(a.oracle(), b.oracle())

    def test_flag_survives_further_minors(self):
        jm = complete_join_matroid(p4(), p4_bc()).minor("delete", 0)
        assert jm.minor("contract", 0).e0_coloop
        assert jm.rank({jm.e0}) == 1


@given(st.integers(0, 10**6), st.sampled_from(SMALL), st.sampled_from(list(Variant)))
def test_random_minor_sequences(seed, name, variant):
    rng = random.Random(seed)
    g = DEFAULT_CORPUS[name]
    jm = JoinMatroid(g, random_linear_class(g, rng), variant)
    for _ in range(min(3, g.m)):
        e = rng.randrange(jm.graph.m)
        op = rng.choice(["delete", "contract"])
        assert_minor(jm, op, e)
        jm = jm.minor("delete" if op == "contract" and jm.graph.is_loop(e) else op, e)


def test_isolated_vertices_ignored():
    g = Multigraph(4, ((0, 1), (1, 2), (0, 2)))
    lc = validate_linear_class(g, [bond_from_side(g, {0})])
    assert join_matroid(g, lc).rank(range(3)) == 1
