import json

import numpy as np
import pytest

from covrep.covrep import CovariantRep
from covrep.errors import CommutationViolation
from covrep.examples import (
    G1,
    G2,
    PROFILES,
    DirectedGraph,
    cycle_unitary_rep,
    direct_sum,
    graph_correspondence,
    graph_induced,
    induced_representation,
    jordan_pair,
    random_instance,
    scalar_tuple,
    weighted_graph_rep,
    write_corpus,
)
from covrep.product import ProductRep
from covrep.serialize import instance_from_json, instance_to_json
from covrep.wold import check_analytic, verify_muhly_solel

from oracles import path_count


class TestDirectedGraph:
    def test_validation(self):
        with pytest.raises(ValueError):
            DirectedGraph(2, ((0, 5),))
        with pytest.raises(ValueError):
            DirectedGraph(2, ((0, 1),), (0.0,))
        g = DirectedGraph(3, ((0, 1), (0, 1)))
        assert g.adjacency()[0, 1] == 2

    def test_empty_edge_set_rejected(self):
        with pytest.raises(ValueError):
            graph_correspondence(DirectedGraph(2, ()))


class TestGraphCorrespondence:
    def test_g1_g2_dims(self):
        assert graph_correspondence(G1).dim == 1
        assert graph_correspondence(G2).dim == 2

    def test_tensor_powers_count_paths(self):
        from covrep.correspondence import tensor_power

        E = graph_correspondence(G2)
        adj = G2.adjacency()
        for n in range(1, 4):
            assert tensor_power(E, n).dim == path_count(adj, n)


class TestInducedRepresentation:
    def test_g1_is_the_three_dimensional_instance(self):
        rep = graph_induced(G1)
        assert rep.hdim == 3
        assert rep.meta["exact"] is True
        assert rep.check_isometric().passed
        assert check_analytic(rep)

    def test_g2_is_six_dimensional(self):
        rep = graph_induced(G2)
        assert rep.hdim == 6
        assert rep.check_isometric().passed

    def test_truncated_shift_flagged_non_exact(self):
        from covrep.examples import scalar_correspondence, scalar_representation

        rep = induced_representation(scalar_correspondence(), scalar_representation(1), 2)
        assert rep.meta["exact"] is False
        assert not rep.check_isometric().passed  # isometry fails at the top level

    def test_induced_satisfies_muhly_solel_with_trivial_h2(self):
        report = verify_muhly_solel(graph_induced(G2))
        assert report.passed and report.dims["H2"] == 0

    def test_depth_required_for_cycles(self):
        g = DirectedGraph(1, ((0, 0),))
        from covrep.algebra import StarRepresentation

        E = graph_correspondence(g)
        pi = StarRepresentation.identity(E.algebra)
        with pytest.raises(ValueError):
            induced_representation(E, pi)


class TestScalarTuple:
    def test_identity_pair(self):
        pr = scalar_tuple([np.eye(2), np.eye(2)])
        assert pr.is_doubly_commuting()

    def test_jordan_pair_properties(self):
        pr = jordan_pair()
        assert pr.is_doubly_commuting()
        assert all(check_analytic(pr.rep(i)) for i in range(2))

    def test_s_s2_valid_but_not_doubly(self):
        S = np.zeros((3, 3), dtype=complex)
        S[0, 1] = S[1, 2] = 1.0
        pr = scalar_tuple([S, S @ S])
        assert not pr.is_doubly_commuting()

    def test_non_commuting_raises(self):
        with pytest.raises(CommutationViolation):
            scalar_tuple([np.diag([1.0, 2.0]), np.array([[0.0, 1.0], [0.0, 0.0]])])


class TestWeightedGraphRep:
    def test_g1_half_properties(self):
        rep = weighted_graph_rep(G1, [0.5])
        conc = rep.check_concave()
        assert conc.passed and conc.vacuous
        assert check_analytic(rep)
        assert rep.left_invertible()
        np.testing.assert_allclose(rep.cauchy_dual().T, 2.0 * graph_induced(G1).T, atol=1e-10)

    def test_unit_weights_are_isometric(self):
        assert weighted_graph_rep(G2, [1.0, 1.0]).check_isometric().passed

    def test_concavity_counterexample_weights(self):
        rep = weighted_graph_rep(G2, [1.0, 1.5])
        assert not rep.check_concave().passed


class TestCycleUnitaryAndDirectSum:
    def test_cycle_rep_is_unitary_part(self):
        g = DirectedGraph(3, ((0, 1), (2, 2)))
        rep = cycle_unitary_rep(g, [1], [1j])
        assert rep.check_isometric().passed
        assert rep.check_fully_coisometric().passed

    def test_two_cycle(self):
        g = DirectedGraph(4, ((0, 1), (2, 3), (3, 2)))
        rep = cycle_unitary_rep(g, [1, 2])
        assert rep.hdim == 2
        assert rep.check_isometric().passed and rep.check_fully_coisometric().passed

    def test_rejects_leaking_cycle(self):
        g = DirectedGraph(3, ((2, 2), (2, 0)))
        with pytest.raises(ValueError):
            cycle_unitary_rep(g, [0])

    def test_direct_sum_dims(self):
        r1 = graph_induced(G1)
        r2 = graph_induced(G1)
        both = direct_sum(r1, r2)
        assert both.hdim == 6
        assert both.check_isometric().passed


class TestRandomInstance:
    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            random_instance(0, "nope")

    @pytest.mark.parametrize("profile", PROFILES)
    def test_deterministic_per_seed(self, profile):
        a = random_instance(7, profile)
        b = random_instance(7, profile)
        if isinstance(a, CovariantRep):
            np.testing.assert_array_equal(a.T, b.T)
            np.testing.assert_array_equal(a.sigma.images, b.sigma.images)
        else:
            for i in range(a.k):
                np.testing.assert_array_equal(a.reps[i].T, b.reps[i].T)

    def test_profiles_achieved(self):
        for seed in range(6):
            assert random_instance(seed, "isometric").check_isometric().passed
            conc = random_instance(seed, "concave")
            assert conc.check_concave().passed
            shim = random_instance(seed, "shimorin")
            assert shim.check_shimorin().passed
            pr = random_instance(seed, "doubly-commuting")
            assert isinstance(pr, ProductRep) and pr.is_doubly_commuting()
            generic = random_instance(seed, "generic")
            assert isinstance(generic, CovariantRep)


class TestCorpus:
    def test_expected_names(self, corpus):
        assert set(corpus) == {
            "g1-induced",
            "g2-induced",
            "g1-w-half",
            "scalar-unitary-3",
            "jordan-pair",
            "two-color-path",
        }

    def test_write_and_reload(self, tmp_path, corpus):
        paths = write_corpus(tmp_path)
        assert len(paths) == 6
        for path in paths:
            data = json.loads(path.read_text())
            inst = instance_from_json(data)
            again = instance_to_json(inst)
            assert json.dumps(again, sort_keys=True) == json.dumps(data, sort_keys=True)

    def test_two_color_path_shape(self, corpus):
        pr = corpus["two-color-path"]
        assert pr.hdim == 9
        assert pr.meta["exact"] is True
        assert pr.is_doubly_commuting()
