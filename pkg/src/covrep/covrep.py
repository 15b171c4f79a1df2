"""Covariant representations (sigma, T) and their canonical operator calculus.

Everything spectral about a pair (sigma, T) is carried by the operator
T-tilde : E (x)_sigma H -> H, xi (x) h -> T(xi) h.  This module builds
T-tilde on the Gram quotient, the composed operators T-tilde_n, the left
inverse L with its chain L^n, the Cauchy dual, the defect operator, the
wandering-sum operator U, and the operator-inequality checks (isometric,
fully co-isometric, concave, expansive, growth, and the three equivalent
forms of the Shimorin condition).

All instances are immutable after construction; derived operators are
cached write-once, so representations can be shared across threads and
independent checks evaluated in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    RANK_TOL,
    as_complex,
    dagger,
    eye_like,
    inv_sqrt_psd,
    min_eig_herm,
    null_cols,
    op_norm,
    orth_cols,
    scale_of,
    solve_hermitian,
    sqrt_psd,
)
from .algebra import StarRepresentation
from .correspondence import ChainTower, Correspondence, HilbertTower, InteriorTensorSpace
from .errors import (
    AlgebraMismatch,
    BimoduleViolation,
    IllDefinedTilde,
    NotConcave,
    NotInvariant,
    NotLeftInvertible,
    ShapeMismatch,
)
from .reporting import CheckItem


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single operator inequality or identity check."""

    name: str
    passed: bool
    residual: float
    min_eig: float | None = None
    vacuous: bool = False
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def as_item(self) -> CheckItem:
        detail = self.reason
        if not detail and self.min_eig is not None:
            detail = f"min_eig={self.min_eig:.3e}"
        return CheckItem(self.name, self.passed, self.residual, self.vacuous, detail)


@dataclass(frozen=True, eq=False)
class TildeOperator:
    """The canonical operator of a covariant representation, as a matrix
    from the E (x)_sigma H quotient to H, with its intertwining residual."""

    matrix: np.ndarray
    intertwining_residual: float


@dataclass(frozen=True, eq=False)
class DefectOperator:
    """D = (T~* T~ - I)^{1/2}; defined only for expansive representations."""

    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class LeftInverseChain:
    """L, its tensor-extended powers L^n, and the range/wandering projections."""

    L: np.ndarray
    powers: tuple[np.ndarray, ...]  # L^1 .. L^n
    P: np.ndarray  # projection onto ker T~* = W
    Q: np.ndarray  # projection onto ran T~
    projection_residual: float
    telescoping_residual: float


@dataclass(frozen=True, eq=False)
class UOperator:
    """U h = sum_n (I (x) P) L^n h as a matrix into the graded space (+) E^n (x) W."""

    matrix: np.ndarray
    level_dims: tuple[int, ...]
    kernel: np.ndarray  # orthonormal basis of ker U in H
    isometry_residual: float
    coisometry_residual: float
    norm: float
    concave_vacuous: bool


class CovariantRep:
    """A covariant representation of a correspondence on a Hilbert space.

    ``T`` holds one n x n matrix per E-basis vector.  Construction checks
    the bimodule relation T(a xi b) = sigma(a) T(xi) sigma(b) and that the
    induced map on E (x) H annihilates the Gram kernel, then builds
    T-tilde.  Pass a shared ChainTower/HilbertTower when several
    representations must act in literally identical quotient bases (as
    the coordinates of a product-system representation do).
    """

    def __init__(
        self,
        sigma: StarRepresentation,
        E: Correspondence,
        T,
        *,
        tol: float | None = None,
        chain: ChainTower | None = None,
        hilb: HilbertTower | None = None,
        letter: int = 0,
        validate: bool = True,
        meta: dict | None = None,
    ):
        if sigma.algebra != E.algebra:
            raise AlgebraMismatch("representation and correspondence algebras differ")
        n = sigma.hilbert_dim
        T = as_complex(T).reshape(E.dim, n, n) if E.dim else np.zeros((0, n, n), complex)
        self.sigma = sigma
        self.E = E
        self.T = T
        self.tol = tol if tol is not None else min(E.tol, sigma.tol)
        self.meta = dict(meta or {})
        self.chain = chain if chain is not None else ChainTower([E], self.tol)
        self.hilb = hilb if hilb is not None else HilbertTower(self.chain, sigma)
        self.letter = letter
        if self.chain.family[letter] is not E:
            raise AlgebraMismatch("tower letter does not carry this correspondence")
        # algebraic map theta : C^{e n} -> C^n, column (i*n + p) = T_i e_p
        self.theta = T.transpose(1, 0, 2).reshape(n, E.dim * n)
        self._fac: dict[int, np.ndarray] = {}
        self._lfac: dict[int, np.ndarray] = {}
        self._tilde_n: dict[int, np.ndarray] = {0: eye_like(n)}
        self._L_n: dict[int, np.ndarray] = {0: eye_like(n)}
        self._tilde: TildeOperator | None = None
        if validate:
            self._validate_construction()

    # -- construction checks -------------------------------------------------

    def _validate_construction(self):
        alg = self.E.algebra
        n = self.hdim
        scale = scale_of(self.theta, *(self.sigma.images if alg.dim else ()))
        bound = self.tol * scale
        worst = 0.0
        for k in range(alg.dim):
            sk = self.sigma.images[k]
            for l in range(alg.dim):
                sl = self.sigma.images[l]
                move = self.E.phi(alg.unit_coords(k)) @ np.tensordot(
                    alg.unit_coords(l), self.E.right_action, axes=(0, 0)
                )
                for i in range(self.E.dim):
                    lhs = np.tensordot(move[:, i], self.T, axes=(0, 0))
                    rhs = sk @ self.T[i] @ sl
                    worst = max(worst, op_norm(lhs - rhs))
        if worst > bound:
            raise BimoduleViolation(
                f"T(a xi b) deviates from sigma(a) T(xi) sigma(b) by {worst:.3e}"
            )
        kern = self.space(1).kernel
        if kern.size:
            drop = op_norm(self.theta @ kern)
            if drop > bound:
                raise IllDefinedTilde(
                    f"xi (x) h -> T(xi) h does not annihilate the Gram kernel ({drop:.3e})"
                )

    # -- basic geometry --------------------------------------------------------

    @property
    def hdim(self) -> int:
        return self.sigma.hilbert_dim

    def word(self, k: int) -> tuple[int, ...]:
        return (self.letter,) * k

    def space(self, k: int) -> InteriorTensorSpace:
        return self.hilb.space(self.word(k))

    def sdim(self, k: int) -> int:
        return self.space(k).quotient_dim

    # -- canonical operators ----------------------------------------------------

    @property
    def tilde(self) -> np.ndarray:
        return self.tilde_operator.matrix

    @property
    def tilde_operator(self) -> TildeOperator:
        if self._tilde is None:
            mat = self.theta @ self.space(1).lift
            worst = 0.0
            for k in range(self.E.algebra.dim):
                phik = self.phi_on_tensor(k)
                worst = max(worst, op_norm(mat @ phik - self.sigma.images[k] @ mat))
            self._tilde = TildeOperator(mat, worst)
        return self._tilde

    def phi_on_tensor(self, k: int) -> np.ndarray:
        """Quotient matrix of phi(b_k) (x) I on E (x)_sigma H."""
        sp = self.space(1)
        return sp.push @ np.kron(self.E.left_action[k], eye_like(self.hdim)) @ sp.lift

    def fac(self, k: int) -> np.ndarray:
        """I_{E^{(x)k}} (x) T~ : space(k+1) -> space(k)."""
        if k not in self._fac:
            self._fac[k] = (
                self.tilde if k == 0 else self.hilb.factor(self.word(k + 1), self.theta)
            )
        return self._fac[k]

    def tilde_n(self, n: int) -> np.ndarray:
        """T~_n = T~ (I (x) T~) ... (I (x)^{n-1} T~) : space(n) -> H."""
        if n < 0:
            raise ShapeMismatch("tilde_n needs n >= 0")
        if n not in self._tilde_n:
            self._tilde_n[n] = self.tilde_n(n - 1) @ self.fac(n - 1)
        return self._tilde_n[n]

    @property
    def gram_tilde(self) -> np.ndarray:
        return dagger(self.tilde) @ self.tilde

    def left_invertible(self) -> bool:
        g = self.gram_tilde
        if g.shape[0] == 0:
            return True
        w = np.linalg.eigvalsh((g + dagger(g)) / 2.0)
        return bool(w[0] > RANK_TOL * max(1.0, w[-1]))

    def _require_left_invertible(self):
        if not self.left_invertible():
            raise NotLeftInvertible("T-tilde is not bounded below")

    @property
    def L(self) -> np.ndarray:
        """The left inverse (T~* T~)^{-1} T~*."""
        self._require_left_invertible()
        return solve_hermitian(self.gram_tilde, dagger(self.tilde))

    def lfac(self, k: int) -> np.ndarray:
        """I_{E^{(x)k}} (x) L : space(k) -> space(k+1)."""
        if k not in self._lfac:
            self._require_left_invertible()
            fk = self.fac(k)
            self._lfac[k] = solve_hermitian(dagger(fk) @ fk, dagger(fk))
        return self._lfac[k]

    def L_n(self, n: int) -> np.ndarray:
        """L^n = (I (x)^{n-1} L) ... (I (x) L) L : H -> space(n)."""
        if n < 0:
            raise ShapeMismatch("L_n needs n >= 0")
        if n not in self._L_n:
            self._L_n[n] = self.lfac(n - 1) @ self.L_n(n - 1)
        return self._L_n[n]

    @property
    def P(self) -> np.ndarray:
        """Orthogonal projection onto the wandering subspace ker T~*."""
        return eye_like(self.hdim) - self.tilde @ self.L

    @property
    def Q(self) -> np.ndarray:
        return self.tilde @ self.L

    # -- property checks ---------------------------------------------------------

    def _psd_check(self, name: str, mat: np.ndarray, vacuous_ok: bool = True) -> CheckResult:
        if mat.shape[0] == 0:
            return CheckResult(name, True, 0.0, None, vacuous=vacuous_ok)
        m = min_eig_herm(mat, self.tol)
        bound = self.tol * scale_of(mat)
        return CheckResult(name, m >= -bound, max(0.0, -m), m)

    def check_isometric(self) -> CheckResult:
        g = self.gram_tilde
        res = op_norm(g - eye_like(g.shape[0]))
        return CheckResult("isometric", res <= self.tol * scale_of(g), res)

    def check_fully_coisometric(self) -> CheckResult:
        c = self.tilde @ dagger(self.tilde)
        res = op_norm(c - eye_like(self.hdim))
        return CheckResult("fully_coisometric", res <= self.tol * scale_of(c), res)

    def check_concave(self) -> CheckResult:
        """Operator form: T~_2* T~_2 - I <= 2 (I_E (x) T~* T~ - I)."""
        if self.sdim(2) == 0:
            return CheckResult("concave", True, 0.0, None, vacuous=True)
        f1 = self.fac(1)
        t2 = self.tilde_n(2)
        mat = 2.0 * dagger(f1) @ f1 - eye_like(self.sdim(2)) - dagger(t2) @ t2
        out = self._psd_check("concave", mat)
        return out

    def check_expansive(self) -> CheckResult:
        """T~* T~ >= I, the conclusion of the concavity lemma."""
        g = self.gram_tilde
        mat = g - eye_like(g.shape[0])
        return self._psd_check("expansive", mat)

    def check_growth_bound(self, n: int) -> CheckResult:
        """T~_n* T~_n - I <= n (I (x) T~* T~ - I) on the n-th tensor level."""
        if n < 1:
            raise ShapeMismatch("growth bound needs n >= 1")
        if self.sdim(n) == 0:
            return CheckResult(f"growth_bound_{n}", True, 0.0, None, vacuous=True)
        fn = self.fac(n - 1)
        tn = self.tilde_n(n)
        mat = float(n) * dagger(fn) @ fn - float(n - 1) * eye_like(self.sdim(n)) - dagger(tn) @ tn
        return self._psd_check(f"growth_bound_{n}", mat)

    def _not_left_invertible(self, name: str) -> CheckResult:
        return CheckResult(name, False, 1.0, None, reason="NotLeftInvertible")

    def check_shimorin(self) -> CheckResult:
        """Operator form (14): I_E (x) T~ T~* + (T~* T~)^{-1} <= 2 I."""
        if self.sdim(1) == 0:
            return CheckResult("shimorin", True, 0.0, None, vacuous=True)
        if not self.left_invertible():
            return self._not_left_invertible("shimorin")
        s1 = self.sdim(1)
        f1 = self.fac(1)
        inv = solve_hermitian(self.gram_tilde, eye_like(s1))
        mat = 2.0 * eye_like(s1) - f1 @ dagger(f1) - inv
        return self._psd_check("shimorin", mat)

    def check_eq13(self) -> CheckResult:
        """Vector form: |T~ xi|^2 + |T~_2* T~ xi|^2 <= 2 |T~* T~ xi|^2."""
        if self.sdim(1) == 0:
            return CheckResult("eq13", True, 0.0, None, vacuous=True)
        if not self.left_invertible():
            return self._not_left_invertible("eq13")
        g = self.gram_tilde
        b = dagger(self.tilde_n(2)) @ self.tilde
        mat = 2.0 * g @ g - g - dagger(b) @ b
        return self._psd_check("eq13", mat)

    def check_eq12(self) -> CheckResult:
        """X-operator form: X = [I (x) T~, (T~* T~)^{-1/2}] with X X* <= 2 I."""
        if self.sdim(1) == 0:
            return CheckResult("eq12", True, 0.0, None, vacuous=True)
        if not self.left_invertible():
            return self._not_left_invertible("eq12")
        s1 = self.sdim(1)
        f1 = self.fac(1)
        isq = inv_sqrt_psd(self.gram_tilde)
        xxs = f1 @ dagger(f1) + isq @ dagger(isq)
        mat = 2.0 * eye_like(s1) - xxs
        return self._psd_check("eq12", mat)

    def check_analytic(self) -> CheckResult:
        # deferred import: subspace machinery lives in wold
        from .wold import h_infinity

        dim = h_infinity(self).dim
        return CheckResult("analytic", dim == 0, float(dim))

    # -- derived representations ----------------------------------------------

    def cauchy_dual(self) -> "CovariantRep":
        """The representation with T~' = T~ (T~* T~)^{-1}."""
        self._require_left_invertible()
        tilde_dual = dagger(self.L)
        theta_dual = tilde_dual @ self.space(1).push
        n = self.hdim
        T_dual = theta_dual.reshape(n, self.E.dim, n).transpose(1, 0, 2)
        return CovariantRep(
            self.sigma,
            self.E,
            T_dual,
            tol=self.tol,
            chain=self.chain,
            hilb=self.hilb,
            letter=self.letter,
            meta={"cauchy_dual": True, **self.meta},
        )

    def defect_operator(self) -> DefectOperator:
        """D = (T~* T~ - I)^{1/2}; requires an expansive representation."""
        g = self.gram_tilde
        mat = g - eye_like(g.shape[0])
        if mat.shape[0] and min_eig_herm(mat, self.tol) < -self.tol * scale_of(g):
            raise NotConcave("T~* T~ - I is not positive; defect operator undefined")
        return DefectOperator(sqrt_psd(mat, self.tol))

    def restrict(self, basis) -> "CovariantRep":
        """Restriction to the invariant subspace spanned by the orthonormal columns."""
        basis = as_complex(basis)
        if basis.ndim != 2 or basis.shape[0] != self.hdim:
            raise ShapeMismatch("restriction basis must be n x d with orthonormal columns")
        bound = self.tol * scale_of(basis, self.theta, *(self.sigma.images if self.E.algebra.dim else ()))
        proj = basis @ dagger(basis)
        comp = eye_like(self.hdim) - proj
        worst = 0.0
        for img in self.sigma.images:
            worst = max(worst, op_norm(comp @ img @ basis))
        for i in range(self.E.dim):
            worst = max(worst, op_norm(comp @ self.T[i] @ basis))
        if worst > bound:
            raise NotInvariant(f"subspace is not (sigma, T)-invariant (residual {worst:.3e})")
        images = np.stack([dagger(basis) @ img @ basis for img in self.sigma.images])
        sigma_k = StarRepresentation(self.sigma.algebra, basis.shape[1], images, self.sigma.tol)
        T_k = np.stack([dagger(basis) @ self.T[i] @ basis for i in range(self.E.dim)]) if self.E.dim else np.zeros((0, basis.shape[1], basis.shape[1]), complex)
        return CovariantRep(
            sigma_k, self.E, T_k, tol=self.tol, chain=self.chain, letter=self.letter
        )

    # -- chains, energy identity, U ---------------------------------------------

    def left_inverse_chain(self, n: int) -> LeftInverseChain:
        self._require_left_invertible()
        L = self.L
        powers = tuple(self.L_n(j) for j in range(1, n + 1))
        P, Q = self.P, self.Q
        proj_res = max(
            op_norm(P @ P - P), op_norm(P - dagger(P)), op_norm(Q @ Q - Q), op_norm(Q - dagger(Q))
        )
        tele = 0.0
        for m in range(1, n + 1):
            lhs = eye_like(self.hdim) - self.tilde_n(m) @ self.L_n(m)
            rhs = sum(
                self.tilde_n(j) @ self.hilb.tensor_op(self.word(j), P) @ self.L_n(j)
                for j in range(m)
            )
            tele = max(tele, op_norm(lhs - rhs))
        return LeftInverseChain(L, powers, P, Q, proj_res, tele)

    def energy_identity(self, basis, n: int) -> float:
        """Max deviation from |h|^2 = sum |(I (x) P) L^j h|^2 + |L^n h|^2
        + sum |(I (x) D) L^j h|^2 over an orthonormal basis of the invariant
        subspace spanned by ``basis``."""
        sub = self.restrict(basis)
        conc = sub.check_concave()
        if not conc.passed:
            raise NotConcave("restriction is not concave")
        exp = sub.check_expansive()
        if not exp.passed:
            # vacuous concavity, or concavity on a truncated model that no
            # longer reaches every fiber direction, does not make T~*T~ >= I
            raise NotConcave(
                "restriction is concave only formally and not expansive; defect undefined"
            )
        sub._require_left_invertible()
        m = sub.hdim
        if m == 0:
            return 0.0
        D = sub.defect_operator().matrix
        P = sub.P
        totals = np.zeros(m)
        for j in range(n):
            mat = sub.hilb.tensor_op(sub.word(j), P) @ sub.L_n(j)
            totals += np.sum(np.abs(mat) ** 2, axis=0)
        totals += np.sum(np.abs(sub.L_n(n)) ** 2, axis=0)
        for j in range(1, n + 1):
            mid = sub.hilb.mid_op_at(sub.word(j - 1), sub.letter, D) if j > 1 else D
            mat = mid @ sub.L_n(j)
            totals += np.sum(np.abs(mat) ** 2, axis=0)
        return float(np.max(np.abs(totals - 1.0)))

    def build_U(self) -> UOperator:
        """U h = sum_n (I (x) P) L^n h into (+)_{n<=dim H} E^{(x)n} (x) W."""
        self._require_left_invertible()
        conc = self.check_concave()
        if not conc.passed:
            raise NotConcave("U is defined for concave representations")
        n = self.hdim
        P = self.P
        blocks = []
        dims = []
        for k in range(n + 1):
            pk = self.hilb.tensor_op(self.word(k), P)
            bk = orth_cols(pk, 0.5)
            dims.append(bk.shape[1])
            blocks.append(dagger(bk) @ pk @ self.L_n(k))
        U = np.vstack(blocks) if blocks else np.zeros((0, n), complex)
        kernel = null_cols(U)
        gram = dagger(U) @ U
        iso = op_norm(gram - eye_like(n))
        coiso = op_norm(U @ dagger(U) - eye_like(U.shape[0]))
        return UOperator(
            U,
            tuple(dims),
            kernel,
            iso,
            coiso,
            op_norm(U),
            conc.vacuous,
        )


# -- module-level operation names matching the documented API ------------------


def make_covrep(sigma: StarRepresentation, E: Correspondence, T, **kw) -> CovariantRep:
    return CovariantRep(sigma, E, T, **kw)


def tilde_n(rep: CovariantRep, n: int) -> np.ndarray:
    return rep.tilde_n(n)


def check_isometric(rep: CovariantRep) -> CheckResult:
    return rep.check_isometric()


def check_fully_coisometric(rep: CovariantRep) -> CheckResult:
    return rep.check_fully_coisometric()


def check_concave(rep: CovariantRep) -> CheckResult:
    return rep.check_concave()


def check_expansive(rep: CovariantRep) -> CheckResult:
    return rep.check_expansive()


def check_growth_bound(rep: CovariantRep, n: int) -> CheckResult:
    return rep.check_growth_bound(n)


def check_shimorin(rep: CovariantRep) -> CheckResult:
    return rep.check_shimorin()


def check_eq13(rep: CovariantRep) -> CheckResult:
    return rep.check_eq13()


def check_eq12(rep: CovariantRep) -> CheckResult:
    return rep.check_eq12()


def cauchy_dual(rep: CovariantRep) -> CovariantRep:
    return rep.cauchy_dual()


def left_inverse_chain(rep: CovariantRep, n: int) -> LeftInverseChain:
    return rep.left_inverse_chain(n)


def energy_identity(rep: CovariantRep, basis, n: int) -> float:
    return rep.energy_identity(basis, n)


def build_U(rep: CovariantRep) -> UOperator:
    return rep.build_U()
