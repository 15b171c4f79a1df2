"""Subspace lattice machinery and the decomposition / theorem verifiers.

Subspaces are stored through orthonormal column bases.  Equality between
subspaces is decided by dimension first, then by the maximal principal
angle, measured through the well-conditioned sine residual
|(I - P_U) V|_2.  Every verifier returns a TheoremReport that evaluates
the conclusions even when hypotheses fail, flagging them as not asserted,
so failing instances act as counterexample explorers rather than raising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    ANGLE_TOL,
    RANK_TOL,
    as_complex,
    dagger,
    eye_like,
    null_cols,
    op_norm,
    orth_cols,
    scale_of,
)
from .correspondence import FockHilbert, fock
from .covrep import CheckResult, CovariantRep
from .errors import AmbientMismatch, NotIsometric, NotSigmaInvariant, ShapeMismatch
from .reporting import CheckItem, TheoremReport


@dataclass(frozen=True, eq=False)
class Subspace:
    """A closed subspace of C^n given by an orthonormal column basis."""

    ambient_dim: int
    basis: np.ndarray
    tol: float = ANGLE_TOL

    def __post_init__(self):
        basis = as_complex(self.basis)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise ShapeMismatch(
                f"basis must be {self.ambient_dim} x d, got {basis.shape}"
            )
        if basis.shape[1]:
            drift = op_norm(dagger(basis) @ basis - eye_like(basis.shape[1]))
            if drift > 1e-6:
                raise ShapeMismatch(f"basis columns are not orthonormal (drift {drift:.3e})")
        object.__setattr__(self, "basis", basis)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_span(cls, vectors, tol: float = ANGLE_TOL) -> "Subspace":
        vectors = as_complex(vectors)
        return cls(vectors.shape[0], orth_cols(vectors), tol)

    @classmethod
    def zero(cls, n: int, tol: float = ANGLE_TOL) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=complex), tol)

    @classmethod
    def full(cls, n: int, tol: float = ANGLE_TOL) -> "Subspace":
        return cls(n, eye_like(n), tol)

    # -- basic data --------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    def _check_ambient(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch(
                f"ambient dims differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    # -- lattice operations --------------------------------------------------

    def orthocomplement(self) -> "Subspace":
        return Subspace(self.ambient_dim, null_cols(dagger(self.basis)), self.tol)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Kernel of (I - P_1) + (I - P_2), with the global rank tolerance."""
        self._check_ambient(other)
        gap = (eye_like(self.ambient_dim) - self.projector()) + (
            eye_like(self.ambient_dim) - other.projector()
        )
        return Subspace(self.ambient_dim, null_cols(gap, RANK_TOL), self.tol)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_span(np.hstack([self.basis, other.basis]), self.tol)

    # -- comparisons -----------------------------------------------------------

    def containment_gap(self, other: "Subspace") -> float:
        """sin of the largest principal angle of ``other`` out of ``self``."""
        self._check_ambient(other)
        if other.dim == 0:
            return 0.0
        res = other.basis - self.projector() @ other.basis
        return op_norm(res)

    def angle_gap(self, other: "Subspace") -> float:
        return max(self.containment_gap(other), other.containment_gap(self))

    def contains(self, other: "Subspace") -> bool:
        return self.containment_gap(other) <= self.tol

    def equals(self, other: "Subspace") -> bool:
        """Dimension equality first (authoritative), then principal angles."""
        self._check_ambient(other)
        if self.dim != other.dim:
            return False
        return self.angle_gap(other) <= self.tol


def image(mat, ambient_dim: int | None = None, tol: float = ANGLE_TOL) -> Subspace:
    mat = as_complex(mat)
    if ambient_dim is not None and mat.shape[0] != ambient_dim:
        raise AmbientMismatch(f"matrix rows {mat.shape[0]} != ambient {ambient_dim}")
    return Subspace(mat.shape[0], orth_cols(mat), tol)


def kernel(mat, tol: float = ANGLE_TOL) -> Subspace:
    mat = as_complex(mat)
    return Subspace(mat.shape[1], null_cols(mat), tol)


def subspace_sum(*spaces: Subspace) -> Subspace:
    out = spaces[0]
    for s in spaces[1:]:
        out = out + s
    return out


# -- representation-driven subspaces ------------------------------------------


def _sigma_invariance_residual(rep: CovariantRep, K: Subspace) -> float:
    comp = eye_like(rep.hdim) - K.projector()
    worst = 0.0
    for img in rep.sigma.images:
        worst = max(worst, op_norm(comp @ img @ K.basis))
    return worst


def _require_sigma_invariant(rep: CovariantRep, K: Subspace):
    res = _sigma_invariance_residual(rep, K)
    if res > rep.tol * scale_of(*rep.sigma.images):
        raise NotSigmaInvariant(f"subspace is not sigma(M)-invariant (residual {res:.3e})")


def wandering_subspace(rep: CovariantRep) -> Subspace:
    """W = ker T~* = H (-) T~(E (x) H)."""
    return image(rep.tilde, rep.hdim).orthocomplement()


def script_L_n(rep: CovariantRep, K: Subspace, n: int) -> Subspace:
    """L_n(K): closure of T~_n (E^{(x)n} (x) K) inside H."""
    if K.ambient_dim != rep.hdim:
        raise AmbientMismatch("subspace does not live in the representation space")
    _require_sigma_invariant(rep, K)
    if n == 0:
        return K
    sub = rep.hilb.tensor_op(rep.word(n), K.projector())
    carrier = orth_cols(sub, 0.5)
    return image(rep.tilde_n(n) @ carrier, rep.hdim)


def invariant_closure(rep: CovariantRep, K: Subspace) -> Subspace:
    """Smallest (sigma, T)-invariant subspace containing K: sum of L_n(K)."""
    _require_sigma_invariant(rep, K)
    total = K
    for n in range(1, rep.hdim + 1):
        step = total + script_L_n(rep, K, n)
        if step.dim == total.dim:
            return total
        total = step
    return total


def h_infinity(rep: CovariantRep) -> Subspace:
    """H_infty = intersection of the decreasing ranges of T~_n."""
    prev = Subspace.full(rep.hdim)
    for n in range(1, rep.hdim + 2):
        cur = image(rep.tilde_n(n), rep.hdim)
        if cur.dim == prev.dim and prev.contains(cur):
            return cur
        prev = cur
    return prev


def check_analytic(rep: CovariantRep) -> bool:
    return h_infinity(rep).dim == 0


def check_invariant(rep: CovariantRep, K: Subspace) -> CheckResult:
    """P_K commutes with sigma(M) and every T(xi) leaves K invariant."""
    comp = eye_like(rep.hdim) - K.projector()
    sigma_res = _sigma_invariance_residual(rep, K)
    t_res = 0.0
    for i in range(rep.E.dim):
        t_res = max(t_res, op_norm(comp @ rep.T[i] @ K.basis))
    res = max(sigma_res, t_res)
    bound = rep.tol * scale_of(rep.theta, *rep.sigma.images)
    return CheckResult("invariant", res <= bound, res)


def check_reducing(rep: CovariantRep, K: Subspace) -> CheckResult:
    a = check_invariant(rep, K)
    b = check_invariant(rep, K.orthocomplement())
    res = max(a.residual, b.residual)
    return CheckResult("reducing", a.passed and b.passed, res)


def check_wandering(rep: CovariantRep, K: Subspace) -> CheckResult:
    """K is sigma(M)-invariant and orthogonal to all its forward translates."""
    sigma_res = _sigma_invariance_residual(rep, K)
    bound = rep.tol * scale_of(rep.theta, *rep.sigma.images)
    if sigma_res > bound:
        return CheckResult("wandering", False, sigma_res, reason="NotSigmaInvariant")
    worst = 0.0
    for n in range(1, rep.hdim + 1):
        ln = script_L_n(rep, K, n)
        if ln.dim == 0:
            break
        worst = max(worst, op_norm(dagger(K.basis) @ ln.basis))
    return CheckResult("wandering", worst <= bound, worst)


# -- Wold-type decomposition -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class WoldDecomposition:
    """The triple (W, H_u, H_inf) with its numerical certificates."""

    W: Subspace
    H_u: Subspace
    H_inf: Subspace
    hypotheses: tuple[CheckItem, ...]
    certificates: tuple[CheckItem, ...]

    @property
    def hypothesis_met(self) -> bool:
        return any(item.passed for item in self.hypotheses)

    @property
    def certified(self) -> bool:
        return all(item.passed for item in self.certificates)

    def dims(self) -> tuple[int, int, int]:
        return (self.W.dim, self.H_u.dim, self.H_inf.dim)

    def to_json(self) -> dict:
        return {
            "dims": {"W": self.W.dim, "H_u": self.H_u.dim, "H_inf": self.H_inf.dim},
            "hypotheses": [i.to_json() for i in self.hypotheses],
            "certificates": [i.to_json() for i in self.certificates],
            "hypothesis_met": self.hypothesis_met,
            "pass": self.certified,
        }


def wold_decompose(rep: CovariantRep) -> WoldDecomposition:
    """Compute H = (sum of L_n(W)) (+) H_inf with all certificates.

    The decomposition is always computed; when neither the concavity nor
    the Shimorin hypothesis holds, the certificates simply report whether
    the conclusion happens to survive, without asserting the theorem.
    """
    n = rep.hdim
    concave = rep.check_concave()
    shimorin = rep.check_shimorin()
    W = wandering_subspace(rep)
    H_u = invariant_closure(rep, W)
    H_inf = h_infinity(rep)
    bound = rep.tol * scale_of(rep.theta)

    orth = op_norm(dagger(H_u.basis) @ H_inf.basis)
    complete_dim = H_u.dim + H_inf.dim == n
    complete = op_norm(H_u.projector() + H_inf.projector() - eye_like(n))
    red_u = check_reducing(rep, H_u)
    red_inf = check_reducing(rep, H_inf)
    if H_inf.dim:
        sub = rep.restrict(H_inf.basis)
        iso = sub.check_isometric()
        coiso = sub.check_fully_coisometric()
        iso_item = CheckItem("restriction_isometric", iso.passed, iso.residual)
        coiso_item = CheckItem("restriction_fully_coisometric", coiso.passed, coiso.residual)
    else:
        iso_item = CheckItem("restriction_isometric", True, 0.0, vacuous=True)
        coiso_item = CheckItem("restriction_fully_coisometric", True, 0.0, vacuous=True)

    hypotheses = (concave.as_item(), shimorin.as_item())
    certificates = (
        CheckItem("orthogonality", orth <= bound, orth),
        CheckItem("completeness", complete_dim and complete <= bound, complete),
        CheckItem("H_u_reducing", red_u.passed, red_u.residual),
        CheckItem("H_inf_reducing", red_inf.passed, red_inf.residual),
        iso_item,
        coiso_item,
    )
    return WoldDecomposition(W, H_u, H_inf, hypotheses, certificates)


# -- theorem verifiers ------------------------------------------------------------


def _angle_item(name: str, left: Subspace, right: Subspace) -> CheckItem:
    gap = left.angle_gap(right) if left.dim == right.dim else 1.0
    return CheckItem(name, left.equals(right), gap)


def verify_muhly_solel(rep: CovariantRep) -> TheoremReport:
    """Wold decomposition of an isometric representation into an induced
    part on F(E) (x) W and a fully co-isometric part."""
    iso = rep.check_isometric()
    if not iso.passed:
        raise NotIsometric(f"representation is not isometric (residual {iso.residual:.3e})")
    n = rep.hdim
    W = image(eye_like(n) - rep.tilde @ dagger(rep.tilde), n)
    pieces = []
    depth = 0
    cur = W
    for k in range(n + 1):
        if k:
            cur = script_L_n(rep, W, k)
        if cur.dim == 0:
            break
        pieces.append(cur)
        depth = k
    H1 = subspace_sum(*pieces) if pieces else Subspace.zero(n)
    H2 = h_infinity(rep)

    orth = op_norm(dagger(H1.basis) @ H2.basis)
    complete = op_norm(H1.projector() + H2.projector() - eye_like(n))
    bound = rep.tol * scale_of(rep.theta)
    if H2.dim:
        coiso = rep.restrict(H2.basis).check_fully_coisometric()
        coiso_item = CheckItem("H2_fully_coisometric", coiso.passed, coiso.residual)
    else:
        coiso_item = CheckItem("H2_fully_coisometric", True, 0.0, vacuous=True)

    # intertwining unitary from F(E) (x)_sigma|W W onto H1, level by level
    if W.dim:
        sigma_w_images = np.stack([dagger(W.basis) @ img @ W.basis for img in rep.sigma.images])
        from .algebra import StarRepresentation

        sigma_w = StarRepresentation(rep.sigma.algebra, W.dim, sigma_w_images, rep.sigma.tol)
        trunc = fock(rep.E, depth, chain=rep.chain, letter=rep.letter)
        model = FockHilbert(trunc, sigma_w)
        gammas = []
        for k in range(depth + 1):
            msp = model.spaces[k]
            if k == 0:
                # M (x) W -> H through sigma: a (x) w -> sigma(a) w
                amap = np.einsum(
                    "kpq,qw->pkw", rep.sigma.images, W.basis
                ).reshape(n, rep.sigma.algebra.dim * W.dim)
                gammas.append(amap @ msp.lift)
            else:
                rsp = rep.space(k)
                r_k = rep.chain.corr(rep.word(k)).dim
                embed = rsp.push @ np.kron(eye_like(r_k), W.basis) @ msp.lift
                gammas.append(rep.tilde_n(k) @ embed)
        gamma = np.hstack(gammas)
        unit = max(
            op_norm(dagger(gamma) @ gamma - eye_like(gamma.shape[1])),
            op_norm(gamma @ dagger(gamma) - H1.projector()),
        )
        inter = 0.0
        rho = model.representation()
        for k in range(rep.sigma.algebra.dim):
            inter = max(
                inter, op_norm(gamma @ rho.images[k] - rep.sigma.images[k] @ gamma)
            )
        for i in range(rep.E.dim):
            xi = np.zeros(rep.E.dim, complex)
            xi[i] = 1.0
            inter = max(inter, op_norm(gamma @ model.creation(xi) - rep.T[i] @ gamma))
        model_item = CheckItem("H1_induced_intertwiner", max(unit, inter) <= bound, max(unit, inter))
    else:
        model_item = CheckItem("H1_induced_intertwiner", True, 0.0, vacuous=True)

    report = TheoremReport(
        "muhly_solel",
        hypotheses=(iso.as_item(),),
        conclusions=(
            CheckItem("orthogonality", orth <= bound, orth),
            CheckItem("completeness", (H1.dim + H2.dim == n) and complete <= bound, complete),
            coiso_item,
            model_item,
        ),
        dims={"H1": H1.dim, "H2": H2.dim, "W": W.dim},
    )
    return report


def verify_richter(rep: CovariantRep, K: Subspace) -> TheoremReport:
    """Wandering subspace theorem for an invariant subspace of an analytic
    concave representation: K = closure of the translates of K (-) T~(E (x) K)."""
    inv = check_invariant(rep, K)
    if not inv.passed:
        from .errors import NotInvariant

        raise NotInvariant(f"subspace is not (sigma, T)-invariant (residual {inv.residual:.3e})")
    concave = rep.check_concave()
    analytic = CheckResult("analytic", check_analytic(rep), float(h_infinity(rep).dim))

    forward = script_L_n(rep, K, 1)
    W_K = K.intersect(forward.orthocomplement())
    closure = invariant_closure(rep, W_K)
    wander = check_wandering(rep, W_K)
    regen = _angle_item("closure_recovers_K", closure, K)
    # the closure determines its wandering subspace: closure (-) T~(E (x) closure)
    if closure.dim:
        w_back = closure.intersect(script_L_n(rep, closure, 1).orthocomplement())
    else:
        w_back = Subspace.zero(rep.hdim)
    uniqueness = _angle_item("wandering_uniqueness", w_back, W_K)

    return TheoremReport(
        "richter",
        hypotheses=(analytic.as_item(), concave.as_item()),
        conclusions=(wander.as_item(), regen, uniqueness),
        dims={"K": K.dim, "W_K": W_K.dim, "closure": closure.dim},
    )


def verify_cauchy_dual_props(rep: CovariantRep) -> TheoremReport:
    """The Cauchy-dual subspace identities and the analytic/GWS biconditionals."""
    rep._require_left_invertible()
    dual = rep.cauchy_dual()
    n = rep.hdim
    W = wandering_subspace(rep)
    W_dual = wandering_subspace(dual)
    hinf = h_infinity(rep)
    hinf_dual = h_infinity(dual)
    span = invariant_closure(rep, W)
    span_dual = invariant_closure(dual, W)

    analytic = check_analytic(rep)
    analytic_dual = check_analytic(dual)
    gws = span.equals(Subspace.full(n))
    gws_dual = span_dual.equals(Subspace.full(n))

    conclusions = (
        _angle_item("dual_wandering_equals_wandering", W_dual, W),
        _angle_item("perp_dual_Hinf_is_span", hinf_dual.orthocomplement(), span),
        _angle_item("perp_Hinf_is_dual_span", hinf.orthocomplement(), span_dual),
        _angle_item("Hinf_equals_dual_Hinf", hinf, hinf_dual),
        _angle_item("spans_coincide", span, span_dual),
        CheckItem("analytic_iff_dual_gws", analytic == gws_dual, float(analytic != gws_dual)),
        CheckItem("gws_iff_dual_analytic", gws == analytic_dual, float(gws != analytic_dual)),
    )
    return TheoremReport(
        "cauchy_dual",
        hypotheses=(CheckItem("left_invertible", True, 0.0),),
        conclusions=conclusions,
        dims={
            "W": W.dim,
            "H_inf": hinf.dim,
            "H_inf_dual": hinf_dual.dim,
            "span": span.dim,
            "span_dual": span_dual.dim,
        },
    )


def check_dual_reducing_implication(rep: CovariantRep) -> TheoremReport:
    """If H'_inf is reducing for the dual, then H'_inf is contained in H_inf."""
    rep._require_left_invertible()
    dual = rep.cauchy_dual()
    hinf_dual = h_infinity(dual)
    red = check_reducing(dual, hinf_dual)
    if red.passed:
        gap = h_infinity(rep).containment_gap(hinf_dual)
        concl = CheckItem("dual_Hinf_contained_in_Hinf", gap <= ANGLE_TOL, gap)
    else:
        concl = CheckItem("dual_Hinf_contained_in_Hinf", True, 0.0, vacuous=True,
                          detail="antecedent false")
    return TheoremReport(
        "dual_reducing_implication",
        hypotheses=(red.as_item(),),
        conclusions=(concl,),
        dims={"H_inf_dual": hinf_dual.dim},
    )


def verify_ker_Ln(rep: CovariantRep, n: int) -> TheoremReport:
    """ker L^n equals the span of the first n translates of the wandering subspace."""
    rep._require_left_invertible()
    W = wandering_subspace(rep)
    kerL = kernel(rep.L_n(n))
    translates = [script_L_n(rep, W, j) for j in range(n)]
    rhs = subspace_sum(*translates) if translates else Subspace.zero(rep.hdim)
    return TheoremReport(
        "ker_Ln",
        hypotheses=(CheckItem("left_invertible", True, 0.0),),
        conclusions=(_angle_item("kernel_matches_translates", kerL, rhs),),
        dims={"ker": kerL.dim, "translates": rhs.dim},
    )
