import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covrep.errors import CommutationViolation, ShapeMismatch
from covrep.examples import (
    jordan_pair,
    random_instance,
    scalar_tuple,
    two_color_path_rep,
    two_colored_system,
)
from covrep.product import (
    ProductRep,
    ProductSystem,
    check_T24_condition_b,
    invariant_closure_alpha,
    multi_word,
    script_L_alpha,
    validate_alpha,
    validate_product_system,
    verify_P21,
    verify_T22,
    verify_T24_equivalence,
    wandering_alpha,
)
from covrep.wold import Subspace, wandering_subspace

from oracles import doubly_commuting_oracle

S2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
S3 = np.zeros((3, 3), dtype=complex)
S3[0, 1] = S3[1, 2] = 1.0


def unitary_pair():
    return scalar_tuple([np.diag([1.0, 1j]), np.diag([1j, -1.0])])


def jordan_with_unitary():
    # doubly commuting by construction; coordinate 2 is unitary, not analytic
    U = np.diag([1.0, 1j])
    return scalar_tuple([np.kron(S2, np.eye(2)), np.kron(np.eye(2), U)])


class TestMultiIndex:
    def test_validate_alpha(self):
        assert validate_alpha((1, 0), 2) == (0, 1)
        with pytest.raises(ShapeMismatch):
            validate_alpha((), 2)
        with pytest.raises(ShapeMismatch):
            validate_alpha((2,), 2)

    def test_multi_word_order(self):
        assert multi_word((0, 1), (2, 1)) == (0, 0, 1)
        with pytest.raises(ShapeMismatch):
            multi_word((0, 1), (1,))
        with pytest.raises(ShapeMismatch):
            multi_word((0,), (-1,))


class TestProductSystemValidation:
    def test_trivial_scalar_system_passes(self):
        pr = scalar_tuple([np.eye(2), np.eye(2)])
        assert validate_product_system(pr.system).passed

    def test_scaled_flip_fails_unitarity(self):
        pr = scalar_tuple([np.eye(2), np.eye(2)])
        chain = pr.system.chain
        bad = ProductSystem(
            pr.system.correspondences,
            {(1, 0): 2.0 * pr.system.flip(1, 0)},
            chain=chain,
        )
        report = validate_product_system(bad)
        assert not report.passed
        assert any("unitary" in i.name and not i.passed for i in report.items)

    def test_two_colored_system_passes(self):
        system = two_colored_system(4, [(0, 1), (2, 3)], [(0, 2), (1, 3)])
        assert validate_product_system(system).passed

    def test_two_colored_rejects_mismatched_paths(self):
        # 1 -> 2 colored then 2 -> 3: one 21-path, no 12-paths
        with pytest.raises(ValueError):
            two_colored_system(3, [(0, 1)], [(1, 2)])

    def test_missing_flip_rejected(self):
        pr = scalar_tuple([np.eye(2), np.eye(2)])
        with pytest.raises(ShapeMismatch):
            ProductSystem(pr.system.correspondences, {}, chain=pr.system.chain)


class TestProductRep:
    def test_commuting_pair_valid(self):
        pr = scalar_tuple([S3, S3 @ S3])
        assert pr.validate_commutation().passed

    def test_non_commuting_rejected(self):
        A = np.array([[0.0, 1.0], [0.0, 0.0]])
        B = np.array([[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(CommutationViolation):
            scalar_tuple([A, B])

    def test_tilde_multi_zero_is_identity(self):
        pr = jordan_pair()
        np.testing.assert_allclose(pr.tilde_multi((0, 0)), np.eye(4))

    def test_tilde_multi_scalar_collapse(self, rng):
        A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        B = A @ A + 0.5 * np.eye(3)  # commutes with A
        pr = scalar_tuple([A, B])
        t = pr.tilde_multi((2, 1))
        np.testing.assert_allclose(
            np.linalg.svd(t, compute_uv=False),
            np.linalg.svd(A @ A @ B, compute_uv=False),
            atol=1e-8,
        )

    def test_two_color_composite_partial_isometry(self):
        pr = two_color_path_rep()
        t = pr.tilde_multi((1, 1))
        # one two-colored length-2 path: rank-one partial isometry
        assert np.linalg.matrix_rank(t, tol=1e-9) == 1
        np.testing.assert_allclose(np.linalg.svd(t, compute_uv=False)[0], 1.0, atol=1e-10)


class TestDoublyCommuting:
    def test_jordan_pair_true(self):
        pr = jordan_pair()
        assert pr.is_doubly_commuting()
        report = pr.check_doubly_commuting()
        assert report.passed  # includes the derived defect-commutation identity

    def test_same_jordan_block_false(self):
        pr = scalar_tuple([S2, S2])
        assert not pr.is_doubly_commuting()

    def test_s_s2_fails_with_large_residual(self):
        pr = scalar_tuple([S3, S3 @ S3])
        report = pr.check_doubly_commuting()
        worst = max(i.residual for i in report.items if i.name.startswith("doubly"))
        assert worst > 1e-3

    def test_k1_vacuous(self):
        pr = scalar_tuple([S2])
        assert pr.is_doubly_commuting()
        assert pr.check_doubly_commuting().passed

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_classical_oracle_on_commuting_pairs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 4))
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        kind = rng.integers(0, 3)
        if kind == 0:
            B = A @ A
        elif kind == 1:
            B = A + 2.0 * np.eye(n)
        else:
            A = np.kron(A, np.eye(2))
            B = np.kron(np.eye(n), rng.standard_normal((2, 2)))
        pr = scalar_tuple([A, B])
        assert pr.is_doubly_commuting() == doubly_commuting_oracle(A, B)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_doubly_implies_defect_commutation(self, seed):
        pr = random_instance(seed, "doubly-commuting")
        report = pr.check_doubly_commuting()
        assert pr.is_doubly_commuting()
        assert report.passed
        # doubly commuting tuples are consistent with the commutation relation
        assert pr.validate_commutation().passed


class TestAlphaSubspaces:
    def test_singleton_is_coordinate_wandering(self):
        pr = jordan_pair()
        for i in range(2):
            assert wandering_alpha(pr, (i,)).equals(wandering_subspace(pr.rep(i)))

    def test_jordan_joint_wandering(self):
        pr = jordan_pair()
        W = wandering_alpha(pr, (0, 1))
        assert W.dim == 1

    def test_intersection_identity(self):
        pr = two_color_path_rep()
        W01 = wandering_alpha(pr, (0, 1))
        assert W01.equals(
            wandering_subspace(pr.rep(0)).intersect(wandering_subspace(pr.rep(1)))
        )

    def test_unitary_pair_no_wandering(self):
        assert wandering_alpha(unitary_pair(), (0, 1)).dim == 0

    def test_script_L_alpha(self):
        pr = jordan_pair()
        W = wandering_alpha(pr, (0, 1))
        assert script_L_alpha(pr, (0, 1), (0, 0), W) is W
        assert script_L_alpha(pr, (0, 1), (1, 1), W).dim == 1

    def test_script_L_alpha_rejects_non_sigma_invariant(self):
        from covrep.errors import NotSigmaInvariant

        pr = two_color_path_rep()
        from oracles import orth

        p0 = orth(pr.sigma.apply_coords(pr.sigma.algebra.unit_coords(0)))
        p1 = orth(pr.sigma.apply_coords(pr.sigma.algebra.unit_coords(1)))
        bad = Subspace(pr.hdim, (p0[:, :1] + p1[:, :1]) / np.sqrt(2))
        with pytest.raises(NotSigmaInvariant):
            script_L_alpha(pr, (0,), (1,), bad)

    def test_closure_generates(self):
        pr = jordan_pair()
        W = wandering_alpha(pr, (0, 1))
        closure = invariant_closure_alpha(pr, (0, 1), W)
        assert closure.dim == 4
        assert invariant_closure_alpha(pr, (0, 1), Subspace.zero(4)).dim == 0

    def test_closure_order_independent(self):
        pr = two_color_path_rep()
        W = wandering_alpha(pr, (0, 1))
        fwd = invariant_closure_alpha(pr, (0, 1), W)
        from covrep.wold import invariant_closure

        rev = invariant_closure(pr.rep(1), invariant_closure(pr.rep(0), W))
        assert fwd.equals(rev)

    def test_stepwise_recursion_two_steps(self):
        pr = jordan_pair()
        from covrep.wold import invariant_closure

        W12 = wandering_alpha(pr, (0, 1))
        step1 = invariant_closure(pr.rep(0), W12)
        step2 = invariant_closure(pr.rep(1), step1)
        assert step2.equals(Subspace.full(4))


@pytest.fixture(scope="module")
def grid():
    from covrep.examples import induced_product_representation, two_colored_system

    def v(i, j):
        return 2 * i + j

    ex = [(v(i, j), v(i + 1, j)) for i in range(2) for j in range(2)]
    ey = [(v(i, 0), v(i, 1)) for i in range(3)]
    system = two_colored_system(6, ex, ey)
    return system, induced_product_representation(system), ex, ey


class TestGridSystem:
    """2x3 grid with x-steps and y-steps: depth (2, 1), so creation by the
    second color bubbles through two interior flips."""

    def test_system_and_relation(self, grid):
        system, pr, _, _ = grid
        assert system.validate().passed
        assert pr.validate_commutation().passed
        assert pr.meta["exact"] is True
        assert pr.is_doubly_commuting()

    def test_level_dims_match_adjacency_oracle(self, grid):
        system, pr, ex, ey = grid
        ax = np.zeros((6, 6), dtype=int)
        ay = np.zeros((6, 6), dtype=int)
        for s, t in ex:
            ax[s, t] += 1
        for s, t in ey:
            ay[s, t] += 1
        # dim E(n1, n2) = #(y-path then x-path) composable pairs
        total = 6  # the (0,0) level carries M (x) H = C^6
        for n1, n2 in [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]:
            expect = int(
                np.sum(
                    np.linalg.matrix_power(ay, n2) @ np.linalg.matrix_power(ax, n1)
                )
            )
            word = (0,) * n1 + (1,) * n2
            assert system.chain.corr(word).dim == expect, (n1, n2)
            total += expect
        assert pr.hdim == total == 18

    def test_theorems(self, grid):
        _, pr, _, _ = grid
        assert verify_T22(pr).passed
        t24 = verify_T24_equivalence(pr)
        assert t24.passed and all(i.passed for i in t24.evaluated)


class TestP21:
    def test_jordan_alpha1(self):
        report = verify_P21(jordan_pair(), (0,))
        assert report.passed and report.hypotheses_met

    def test_full_alpha_vacuous(self):
        report = verify_P21(jordan_pair(), (0, 1))
        assert report.passed
        assert report.conclusions[0].vacuous

    def test_non_doubly_pair_flagged(self):
        report = verify_P21(scalar_tuple([S3, S3 @ S3]), (0,))
        assert not report.hypotheses_met
        # conclusion evaluated anyway; for this pair it happens to fail
        assert not report.conclusions[0].passed


class TestT22:
    def test_jordan_gws_all_alpha(self):
        report = verify_T22(jordan_pair())
        assert report.passed
        assert report.hypotheses_met  # via the direct strategy fallback
        assert any("direct" in i.name for i in report.evaluated)

    def test_two_color_gws(self):
        report = verify_T22(two_color_path_rep())
        assert report.passed and report.hypotheses_met

    def test_unitary_pair_fails_hypotheses_and_conclusions(self):
        report = verify_T22(unitary_pair())
        assert not report.hypotheses_met  # unitaries are not analytic
        generating = [i for i in report.conclusions if i.name.startswith("generating")]
        assert generating and all(not i.passed for i in generating)

    def test_strategy_c23_on_two_color(self):
        report = verify_T22(two_color_path_rep(), strategy="c23")
        assert report.hypotheses_met and report.passed


class TestT24:
    def test_condition_b_doubly_commuting(self):
        assert check_T24_condition_b(jordan_pair()).passed
        assert check_T24_condition_b(two_color_path_rep()).passed

    def test_condition_b_isometric_tuple(self):
        report = check_T24_condition_b(two_color_path_rep())
        assert report.max_violation < 1e-10

    def test_condition_b_non_commuting_pair_fails(self):
        A = np.array([[0.0, 1.0], [0.0, 0.0]])
        B = np.array([[1.0, 0.0], [1.0, 1.0]])
        # build without validation: condition (b) is still evaluable
        from covrep.examples import scalar_correspondence, scalar_representation
        from covrep.correspondence import ChainTower

        corrs = [scalar_correspondence() for _ in range(2)]
        chain = ChainTower(corrs)
        system = ProductSystem(corrs, {(1, 0): np.eye(1)}, chain=chain)
        pr = ProductRep(
            system, scalar_representation(2), [A[None], B[None]], validate=False
        )
        assert not check_T24_condition_b(pr).passed

    def test_jordan_all_four_true(self):
        report = verify_T24_equivalence(jordan_pair())
        assert report.passed
        assert all(i.passed for i in report.evaluated)

    def test_unitary_pair_equivalence_preserved(self):
        report = verify_T24_equivalence(unitary_pair())
        booleans = {i.name: i.passed for i in report.evaluated}
        assert not booleans["(2)_coordinates_analytic"]
        assert not booleans["(a)_gws_all_alpha"]
        assert report.passed  # both sides false

    def test_one_unitary_coordinate(self):
        report = verify_T24_equivalence(jordan_with_unitary())
        booleans = {i.name: i.passed for i in report.evaluated}
        assert booleans["(1)_doubly_commuting"]
        assert not booleans["(2)_coordinates_analytic"]
        assert not booleans["(a)_gws_all_alpha"]
        assert report.passed

    def test_s_s2_independent_b_and_equivalence(self):
        report = verify_T24_equivalence(scalar_tuple([S3, S3 @ S3]))
        booleans = {i.name: i.passed for i in report.evaluated}
        assert not booleans["(1)_doubly_commuting"]
        assert not booleans["(b)_flip_intertwining"]
        assert report.passed
