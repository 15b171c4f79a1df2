import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covrep.errors import AmbientMismatch, NotInvariant, NotIsometric, NotSigmaInvariant
from covrep.examples import (
    G1,
    G2,
    DirectedGraph,
    cycle_unitary_rep,
    direct_sum,
    graph_induced,
    random_instance,
    scalar_covrep,
    weighted_graph_rep,
)
from covrep.wold import (
    Subspace,
    check_analytic,
    check_dual_reducing_implication,
    check_invariant,
    check_reducing,
    check_wandering,
    h_infinity,
    image,
    invariant_closure,
    kernel,
    script_L_n,
    verify_cauchy_dual_props,
    verify_ker_Ln,
    verify_muhly_solel,
    verify_richter,
    wandering_subspace,
    wold_decompose,
)

from oracles import (
    h_infinity_oracle,
    orth,
    script_L_oracle,
    span_closure,
    subspaces_equal,
    wandering_oracle,
)


def unitary3():
    return scalar_covrep(np.roll(np.eye(3, dtype=complex), 1, axis=0))


def loop_plus_g1():
    """G1 plus a disjoint loop vertex: unitary (+) induced on 4 dimensions."""
    g = DirectedGraph(3, ((0, 1), (2, 2)))
    from covrep.algebra import StarRepresentation
    from covrep.examples import graph_correspondence, induced_representation

    E = graph_correspondence(g)
    images = np.zeros((3, 2, 2), dtype=complex)
    images[0, 0, 0] = 1.0
    images[1, 1, 1] = 1.0
    pi = StarRepresentation(E.algebra, 2, images)
    induced = induced_representation(E, pi, depth=1)
    unitary = cycle_unitary_rep(g, [1], [1j])
    return direct_sum(unitary, induced), unitary.hdim, induced.hdim


class TestSubspaceAlgebra:
    def test_intersect_self(self, rng):
        s = Subspace.from_span(rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)))
        assert s.intersect(s).equals(s)

    def test_intersect_coordinate_axes(self):
        e = np.eye(2, dtype=complex)
        s1 = Subspace(2, e[:, :1])
        s2 = Subspace(2, e[:, 1:])
        assert s1.intersect(s2).dim == 0

    def test_image_kernel_of_rank2(self, rng):
        a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 3))
        img = image(a)
        ker = kernel(a)
        assert img.dim == 2
        assert ker.dim == 1
        # consistency: A annihilates its kernel and maps onto its image
        assert np.linalg.norm(a @ ker.basis) < 1e-10
        assert img.containment_gap(image(a)) < 1e-12

    def test_de_morgan(self, rng):
        s1 = Subspace.from_span(rng.standard_normal((5, 2)))
        s2 = Subspace.from_span(rng.standard_normal((5, 3)))
        lhs = s1.intersect(s2)
        rhs = (s1.orthocomplement() + s2.orthocomplement()).orthocomplement()
        assert lhs.equals(rhs)

    def test_sum_and_containment(self, rng):
        s1 = Subspace.from_span(rng.standard_normal((5, 2)))
        s2 = Subspace.from_span(rng.standard_normal((5, 2)))
        total = s1 + s2
        assert total.contains(s1) and total.contains(s2)

    def test_ambient_mismatch(self):
        with pytest.raises(AmbientMismatch):
            Subspace.full(2).intersect(Subspace.full(3))

    def test_dimension_is_authoritative(self, rng):
        s1 = Subspace.from_span(rng.standard_normal((4, 2)))
        s2 = s1 + Subspace.from_span(rng.standard_normal((4, 1)))
        assert s1.dim != s2.dim
        assert not s1.equals(s2)


class TestWanderingSubspace:
    def test_unitary_has_none(self):
        assert wandering_subspace(unitary3()).dim == 0

    def test_g1_level_zero(self):
        rep = graph_induced(G1)
        W = wandering_subspace(rep)
        assert W.dim == 2
        assert subspaces_equal(W.basis, wandering_oracle(list(rep.T), 3))

    def test_isometric_matches_range_projection(self):
        rep = graph_induced(G2)
        W = wandering_subspace(rep)
        alt = image(np.eye(6) - rep.tilde @ rep.tilde.conj().T)
        assert W.equals(alt)


class TestScriptL:
    def test_n_zero_returns_K(self):
        rep = graph_induced(G1)
        K = wandering_subspace(rep)
        assert script_L_n(rep, K, 0) is K

    def test_g1_first_translate(self):
        rep = graph_induced(G1)
        W = wandering_subspace(rep)
        l1 = script_L_n(rep, W, 1)
        assert l1.dim == 1
        assert subspaces_equal(l1.basis, script_L_oracle(list(rep.T), W.basis, 1))

    def test_beyond_nilpotency_vanishes(self):
        rep = graph_induced(G2)
        W = wandering_subspace(rep)
        assert script_L_n(rep, W, 4).dim == 0

    def test_rejects_non_sigma_invariant(self):
        rep = graph_induced(G2)
        p0 = orth(rep.sigma.apply_coords(rep.sigma.algebra.unit_coords(0)))
        p1 = orth(rep.sigma.apply_coords(rep.sigma.algebra.unit_coords(1)))
        v = (p0[:, :1] + p1[:, :1]) / np.sqrt(2)
        with pytest.raises(NotSigmaInvariant):
            script_L_n(rep, Subspace(6, v), 1)


class TestInvariantClosure:
    def test_full_space_fixed(self):
        rep = graph_induced(G2)
        assert invariant_closure(rep, Subspace.full(6)).dim == 6

    def test_zero_fixed(self):
        rep = graph_induced(G2)
        assert invariant_closure(rep, Subspace.zero(6)).dim == 0

    def test_g1_wandering_generates(self):
        rep = graph_induced(G1)
        closure = invariant_closure(rep, wandering_subspace(rep))
        assert closure.dim == 3

    def test_matches_span_iteration_oracle(self):
        for rep in (graph_induced(G2), weighted_graph_rep(G2, [1.25, 1.1])):
            W = wandering_subspace(rep)
            mine = invariant_closure(rep, W)
            brute = span_closure(list(rep.T), W.basis)
            assert subspaces_equal(mine.basis, brute)


class TestHInfinity:
    def test_unitary_full(self):
        assert h_infinity(unitary3()).dim == 3

    def test_nilpotent_zero(self):
        assert h_infinity(graph_induced(G1)).dim == 0
        assert h_infinity(graph_induced(G2)).dim == 0

    def test_direct_sum_recovers_unitary_block(self):
        rep, nu, ni = loop_plus_g1()
        hinf = h_infinity(rep)
        assert hinf.dim == nu
        assert subspaces_equal(hinf.basis, h_infinity_oracle(list(rep.T), rep.hdim))

    def test_decreasing_ranges(self):
        rep, _, _ = loop_plus_g1()
        prev = Subspace.full(rep.hdim)
        for n in range(1, rep.hdim + 2):
            cur = image(rep.tilde_n(n))
            assert prev.containment_gap(cur) <= 1e-8
            prev = cur

    def test_stabilization_extra_step(self):
        rep, _, _ = loop_plus_g1()
        hinf = h_infinity(rep)
        extra = image(rep.tilde_n(rep.hdim + 1))
        assert hinf.equals(extra)

    def test_analytic_flags(self):
        assert check_analytic(graph_induced(G1))
        assert not check_analytic(unitary3())
        assert check_analytic(scalar_covrep(np.zeros((2, 2))))

    def test_analytic_left_invertible_has_vanishing_L_powers(self):
        # |L^n h| -> 0 for analytic representations; exact in finite dims
        for rep in (graph_induced(G2), weighted_graph_rep(G2, [1.25, 1.1])):
            assert check_analytic(rep)
            assert np.linalg.norm(rep.L_n(rep.hdim)) < 1e-12


class TestInvariantReducingWandering:
    def test_full_space(self):
        rep = graph_induced(G1)
        H = Subspace.full(3)
        assert check_invariant(rep, H).passed
        assert check_reducing(rep, H).passed
        assert not check_wandering(rep, H).passed

    def test_wandering_subspace_is_wandering(self):
        rep = graph_induced(G1)
        assert check_wandering(rep, wandering_subspace(rep)).passed

    def test_non_sigma_invariant_vector(self):
        rep = graph_induced(G1)
        p0 = orth(rep.sigma.apply_coords(rep.sigma.algebra.unit_coords(0)))
        p1 = orth(rep.sigma.apply_coords(rep.sigma.algebra.unit_coords(1)))
        v = (p0[:, :1] + p1[:, :1]) / np.sqrt(2)
        assert not check_invariant(rep, Subspace(3, v)).passed


class TestWoldDecompose:
    def test_g1_dims(self):
        wd = wold_decompose(graph_induced(G1))
        assert wd.dims() == (2, 3, 0)
        assert wd.hypothesis_met and wd.certified

    def test_g2_dims(self):
        wd = wold_decompose(graph_induced(G2))
        assert wd.dims() == (3, 6, 0)
        assert wd.certified

    def test_unitary_dims(self):
        wd = wold_decompose(unitary3())
        assert wd.dims() == (0, 0, 3)
        assert wd.certified

    def test_direct_sum_dims_add(self):
        rep, nu, ni = loop_plus_g1()
        wd = wold_decompose(rep)
        assert wd.dims() == (2, ni, nu)
        assert wd.certified
        # projections complete and orthogonal
        P = wd.H_u.projector() + wd.H_inf.projector()
        np.testing.assert_allclose(P, np.eye(rep.hdim), atol=1e-9)
        assert np.linalg.norm(wd.H_u.projector() @ wd.H_inf.projector()) < 1e-9

    def test_hypothesis_failure_flagged_not_raised(self):
        rep = scalar_covrep(np.diag([1.0, 2.0]))
        wd = wold_decompose(rep)
        assert not wd.hypothesis_met
        assert wd.dims()[0] == 0  # invertible: no wandering vectors

    def test_analytic_case_fills_H(self):
        wd = wold_decompose(weighted_graph_rep(G2, [1.25, 1.1]))
        assert wd.H_u.dim == 6 and wd.H_inf.dim == 0


class TestMuhlySolel:
    def test_g2_pure(self):
        rep = verify_muhly_solel(graph_induced(G2))
        assert rep.passed
        assert rep.dims == {"H1": 6, "H2": 0, "W": 3}

    def test_unitary_all_h2(self):
        rep = verify_muhly_solel(unitary3())
        assert rep.passed
        assert rep.dims == {"H1": 0, "H2": 3, "W": 0}

    def test_mixed_direct_sum(self):
        rep, nu, ni = loop_plus_g1()
        report = verify_muhly_solel(rep)
        assert report.passed
        assert report.dims == {"H1": ni, "H2": nu, "W": 2}

    def test_rejects_non_isometric(self):
        with pytest.raises(NotIsometric):
            verify_muhly_solel(weighted_graph_rep(G1, [0.5]))


class TestRichter:
    def test_fock_grading_subspaces(self):
        rep = graph_induced(G2)
        # levels >= m are invariant; their wandering subspaces are level m
        ids = np.eye(6, dtype=complex)
        for m, start, wdim in [(0, 0, 3), (1, 3, 2), (2, 5, 1)]:
            K = Subspace(6, ids[:, start:])
            report = verify_richter(rep, K)
            assert report.passed and report.hypotheses_met
            assert report.dims["W_K"] == wdim

    def test_zero_subspace(self):
        rep = graph_induced(G1)
        report = verify_richter(rep, Subspace.zero(3))
        assert report.passed
        assert report.dims["W_K"] == 0

    def test_non_invariant_errors(self):
        rep = graph_induced(G2)
        p0 = orth(rep.sigma.apply_coords(rep.sigma.algebra.unit_coords(0)))
        with pytest.raises(NotInvariant):
            verify_richter(rep, Subspace(6, p0[:, :1]))

    def test_unitary_hypotheses_fail_conclusion_fails(self):
        report = verify_richter(unitary3(), Subspace.full(3))
        assert not report.hypotheses_met
        assert not report.passed


class TestCauchyDualProps:
    def test_isometric_analytic_self_dual(self):
        report = verify_cauchy_dual_props(graph_induced(G2))
        assert report.passed

    def test_weighted_g2(self):
        report = verify_cauchy_dual_props(weighted_graph_rep(G2, [1.25, 1.1]))
        assert report.passed
        assert all(i.residual <= 1e-9 for i in report.conclusions)

    def test_scalar_unitary(self):
        report = verify_cauchy_dual_props(unitary3())
        assert report.passed
        assert report.dims["span"] == 0
        assert report.dims["H_inf"] == 3

    def test_dual_reducing_implication_unitary(self):
        report = check_dual_reducing_implication(unitary3())
        assert report.passed
        assert report.hypotheses_met  # H'_inf = H is reducing

    def test_dual_reducing_implication_g1(self):
        report = check_dual_reducing_implication(graph_induced(G1))
        assert report.passed

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_dual_reducing_never_violated(self, seed):
        rep = random_instance(seed, "concave")
        if rep.left_invertible():
            assert check_dual_reducing_implication(rep).passed

    def test_mixed_instance_nontrivial_summands(self):
        # unitary (+) induced: both H_inf and the wandering span are nonzero,
        # so the four subspace identities are exercised with real content
        rep, nu, ni = loop_plus_g1()
        assert rep.left_invertible()
        report = verify_cauchy_dual_props(rep)
        assert report.passed
        assert report.dims["H_inf"] == nu and report.dims["span"] == ni
        implication = check_dual_reducing_implication(rep)
        assert implication.passed and implication.hypotheses_met
        # ker L^n saturates at the analytic part and never reaches H_inf
        assert verify_ker_Ln(rep, 3).dims["ker"] == ni


class TestKerLn:
    def test_n1_is_wandering(self):
        rep = weighted_graph_rep(G2, [1.25, 1.1])
        report = verify_ker_Ln(rep, 1)
        assert report.passed
        assert report.dims["ker"] == wandering_subspace(rep).dim

    def test_g2_two_levels(self):
        report = verify_ker_Ln(graph_induced(G2), 2)
        assert report.passed
        assert report.dims["ker"] == 5

    def test_beyond_nilpotency_full(self):
        rep = graph_induced(G2)
        report = verify_ker_Ln(rep, 4)
        assert report.passed
        assert report.dims["ker"] == 6
