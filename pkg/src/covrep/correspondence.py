"""C*-correspondences over matrix-block algebras and their tensor calculus.

A correspondence of dimension e is stored through three structure tensors
on the canonical bases: right action and left action as one e x e matrix
per algebra basis unit, and the algebra-valued inner product as one
coordinate vector per basis pair.  All tensor-product constructions are
Gram-kernel quotients: the scalar semi-inner product (trace form through
the faithful block representation, or the sigma-twisted form for Hilbert
spaces) is diagonalized, its kernel dropped, and every derived operator is
a matrix in the resulting orthonormal quotient basis, so adjoints are
literal conjugate transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._linalg import (
    DEFAULT_TOL,
    as_complex,
    eye_like,
    gram_quotient,
    kron,
    min_eig_herm,
    op_norm,
    scale_of,
)
from .algebra import MatrixBlocksAlgebra, StarRepresentation
from .errors import AlgebraMismatch, PositivityFailure, ShapeMismatch
from .reporting import CheckItem, ValidationReport

Word = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Correspondence:
    """A C*-correspondence E over a MatrixBlocksAlgebra.

    right_action[k] and left_action[k] are the matrices of xi -> xi.b_k and
    of phi(b_k) on E-coordinates; gram[i, j] holds the algebra coordinates
    of <f_i, f_j>, conjugate-linear in the first slot.
    """

    algebra: MatrixBlocksAlgebra
    dim: int
    right_action: np.ndarray  # (alg.dim, e, e)
    left_action: np.ndarray  # (alg.dim, e, e)
    gram: np.ndarray  # (e, e, alg.dim)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        e, d = int(self.dim), self.algebra.dim
        ra = as_complex(self.right_action).reshape(d, e, e)
        la = as_complex(self.left_action).reshape(d, e, e)
        g = as_complex(self.gram).reshape(e, e, d)
        object.__setattr__(self, "dim", e)
        object.__setattr__(self, "right_action", ra)
        object.__setattr__(self, "left_action", la)
        object.__setattr__(self, "gram", g)

    def phi(self, a_coords) -> np.ndarray:
        """Matrix of the left action of the element with the given coords."""
        return np.tensordot(as_complex(a_coords), self.left_action, axes=(0, 0))

    def right_apply(self, xi, a_coords) -> np.ndarray:
        mat = np.tensordot(as_complex(a_coords), self.right_action, axes=(0, 0))
        return mat @ as_complex(xi)

    def gram_of(self, x, y) -> np.ndarray:
        """Algebra coordinates of <x, y>."""
        return np.einsum("i,j,ijk->k", np.conj(as_complex(x)), as_complex(y), self.gram)

    @cached_property
    def scalar_gram(self) -> np.ndarray:
        """Trace form tr(pi(<f_i, f_j>)) through the faithful representation."""
        return np.tensordot(self.gram, self.algebra.trace_vec, axes=(2, 0))

    def faithful_gram(self) -> np.ndarray:
        """The e*N x e*N scalar Gram of E tensored against the faithful rep."""
        fb = _faithful_basis(self.algebra)
        n = self.algebra.faithful_dim
        return np.einsum("ijk,kab->iajb", self.gram, fb).reshape(self.dim * n, self.dim * n)

    def validate(self) -> ValidationReport:
        return validate_correspondence(self)


def _faithful_basis(alg: MatrixBlocksAlgebra) -> np.ndarray:
    return np.stack([alg.faithful(alg.unit_coords(k)) for k in range(alg.dim)])


def validate_correspondence(E: Correspondence) -> ValidationReport:
    """Check the Hilbert-module and left-action axioms of a correspondence."""
    alg = E.algebra
    d, e = alg.dim, E.dim
    scale = scale_of(
        E.gram.reshape(e * e, d), E.left_action.reshape(d * e, e), E.right_action.reshape(d * e, e)
    )
    bound = E.tol * scale

    right_lin = 0.0
    star_sym = 0.0
    adj = 0.0
    hom = 0.0
    module = 0.0
    commute = 0.0
    for k in range(d):
        uk = alg.unit_coords(k)
        phik = E.left_action[k]
        phik_star = E.phi(alg.star(uk))
        rk = E.right_action[k]
        for i in range(e):
            for j in range(e):
                # <f_i, f_j . b_k> = <f_i, f_j> b_k
                lhs = np.einsum("m,mc->c", rk[:, j], E.gram[i])
                rhs = alg.mul(E.gram[i, j], uk)
                right_lin = max(right_lin, float(np.linalg.norm(lhs - rhs)))
                # <phi(b_k) f_i, f_j> = <f_i, phi(b_k*) f_j>
                lhs = np.einsum("m,mc->c", np.conj(phik[:, i]), E.gram[:, j])
                rhs = np.einsum("m,mc->c", phik_star[:, j], E.gram[i])
                adj = max(adj, float(np.linalg.norm(lhs - rhs)))
        for l in range(d):
            ul = alg.unit_coords(l)
            hom = max(hom, op_norm(E.phi(alg.mul(uk, ul)) - E.left_action[k] @ E.left_action[l]))
            # (xi . b_l) . b_k = xi . (b_l b_k)
            mixed = np.tensordot(alg.mul(ul, uk), E.right_action, axes=(0, 0))
            module = max(module, op_norm(E.right_action[k] @ E.right_action[l] - mixed))
            commute = max(commute, op_norm(E.left_action[k] @ E.right_action[l] - E.right_action[l] @ E.left_action[k]))
    for i in range(e):
        for j in range(e):
            star_sym = max(
                star_sym,
                float(np.linalg.norm(alg.star(E.gram[i, j]) - E.gram[j, i])),
            )

    if e:
        pos_eig = min_eig_herm(E.faithful_gram(), E.tol)
        positivity = max(0.0, -pos_eig)
    else:
        positivity = 0.0

    one_mat = E.phi(alg.one)
    essential = op_norm(one_mat - eye_like(e))
    unit_right = op_norm(np.tensordot(alg.one, E.right_action, axes=(0, 0)) - eye_like(e))
    nonzero = 0.0 if (e > 0 and op_norm(E.left_action.reshape(d * e, e)) > bound) else 1.0

    items = (
        CheckItem("right_linearity", right_lin <= bound, right_lin),
        CheckItem("star_symmetry", star_sym <= bound, star_sym),
        CheckItem("positivity", positivity <= bound, positivity),
        CheckItem("phi_adjointable", adj <= bound, adj),
        CheckItem("phi_homomorphism", hom <= bound, hom),
        CheckItem("phi_nonzero_essential", essential <= bound and nonzero == 0.0, max(essential, nonzero)),
        CheckItem("right_module", max(module, unit_right) <= bound, max(module, unit_right)),
        CheckItem("bimodule_commutation", commute <= bound, commute),
    )
    return ValidationReport("correspondence", items)


@dataclass(frozen=True, eq=False)
class InteriorTensorSpace:
    """Gram-kernel quotient of an algebraic tensor product.

    ``push`` maps the algebraic space onto the quotient C^r and has
    orthonormal rows for the semi-inner product; ``lift`` is the isometric
    section with ``push @ lift = I``; ``kernel`` spans the Gram kernel.
    """

    source_dims: tuple[int, ...]
    quotient_dim: int
    push: np.ndarray
    lift: np.ndarray
    gram: np.ndarray
    kernel: np.ndarray

    @property
    def gram_kernel_dim(self) -> int:
        return self.kernel.shape[1]

    @property
    def algebraic_dim(self) -> int:
        return int(np.prod(self.source_dims)) if self.source_dims else 1


def _identity_space(n: int) -> InteriorTensorSpace:
    eye = eye_like(n)
    return InteriorTensorSpace((n,), n, eye.copy(), eye.copy(), eye.copy(), np.zeros((n, 0), dtype=complex))


def algebra_correspondence(alg: MatrixBlocksAlgebra, tol: float = DEFAULT_TOL) -> Correspondence:
    """The algebra viewed as the standard correspondence over itself."""
    d = alg.dim
    right = np.zeros((d, d, d), dtype=complex)
    left = np.zeros((d, d, d), dtype=complex)
    gram = np.zeros((d, d, d), dtype=complex)
    for k in range(d):
        uk = alg.unit_coords(k)
        for l in range(d):
            ul = alg.unit_coords(l)
            right[k][:, l] = alg.mul(ul, uk)
            left[k][:, l] = alg.mul(uk, ul)
    for i in range(d):
        si = alg.star(alg.unit_coords(i))
        for j in range(d):
            gram[i, j] = alg.mul(si, alg.unit_coords(j))
    return Correspondence(alg, d, right, left, gram, tol)


def _module_gram(E: Correspondence, F: Correspondence) -> np.ndarray:
    """Algebra-valued semi-Gram of the algebraic tensor E (x) F.

    Index (i, p) is flattened as i * dim(F) + p; the value at
    ((i,p),(j,q)) is <g_p, phi_F(<f_i, f_j>_E) g_q>_F.
    """
    phi_g = np.einsum("ijk,kmq->ijmq", E.gram, F.left_action)
    gm = np.einsum("ijmq,pmk->ipjqk", phi_g, F.gram)
    n = E.dim * F.dim
    return gm.reshape(n, n, E.algebra.dim)


def internal_tensor(
    E: Correspondence, F: Correspondence
) -> tuple[Correspondence, InteriorTensorSpace]:
    """Internal tensor product E (x) F as a quotient correspondence.

    The balancing relation (zeta.a) (x) xi = zeta (x) phi(a) xi holds in the
    quotient because both sides differ by a Gram-kernel vector.
    """
    if E.algebra != F.algebra:
        raise AlgebraMismatch("correspondences are defined over different algebras")
    alg = E.algebra
    tol = min(E.tol, F.tol)
    gm = _module_gram(E, F)

    # positivity of the algebra-valued form, through the faithful rep; the
    # trace form below has the same kernel only when this holds
    n_alg = E.dim * F.dim
    if n_alg:
        fb = _faithful_basis(alg)
        nf = alg.faithful_dim
        big = np.einsum("xyk,kab->xayb", gm, fb).reshape(n_alg * nf, n_alg * nf)
        eig = min_eig_herm(big, tol)
        if eig < -tol * scale_of(big):
            raise PositivityFailure(f"module semi-Gram has eigenvalue {eig:.3e}")

    scalar = np.tensordot(gm, alg.trace_vec, axes=(2, 0))
    push, lift, kernel = gram_quotient(scalar, tol)
    r = push.shape[0]

    left = np.stack(
        [push @ kron(E.left_action[k], eye_like(F.dim)) @ lift for k in range(alg.dim)]
    ) if alg.dim else np.zeros((0, r, r), dtype=complex)
    right = np.stack(
        [push @ kron(eye_like(E.dim), F.right_action[k]) @ lift for k in range(alg.dim)]
    )
    gram_q = np.einsum("xa,yb,xyk->abk", np.conj(lift), lift, gm)

    quotient = Correspondence(alg, r, right, left, gram_q, tol)
    space = InteriorTensorSpace((E.dim, F.dim), r, push, lift, scalar, kernel)
    return quotient, space


def interior_tensor_with_rep(E: Correspondence, sigma: StarRepresentation) -> InteriorTensorSpace:
    """Hilbert-space quotient of E (x) H under the sigma-twisted inner product."""
    if E.algebra != sigma.algebra:
        raise AlgebraMismatch("correspondence and representation algebras differ")
    n = sigma.hilbert_dim
    gram = np.einsum("ijk,kpq->ipjq", E.gram, sigma.images).reshape(E.dim * n, E.dim * n)
    push, lift, kernel = gram_quotient(gram, min(E.tol, sigma.tol))
    return InteriorTensorSpace((E.dim, n), push.shape[0], push, lift, gram, kernel)


class ChainTower:
    """Left-associated internal-tensor chains over a fixed correspondence family.

    Words are tuples of family indices; ``corr(word)`` is the quotient
    correspondence E_{w0} (x) ... (x) E_{w-1} built stepwise, ``corr(())``
    is the algebra itself.  The tower caches every chain once, so flips and
    prepend maps produced by different callers act in identical bases.
    Instances are immutable apart from the internal memo tables and can be
    shared across threads.
    """

    def __init__(self, family, tol: float = DEFAULT_TOL):
        family = tuple(family)
        if not family:
            raise ShapeMismatch("tower needs at least one correspondence")
        alg = family[0].algebra
        if any(c.algebra != alg for c in family):
            raise AlgebraMismatch("tower correspondences must share one algebra")
        self.family = family
        self.algebra = alg
        self.tol = tol
        self._corr: dict[Word, Correspondence] = {}
        self._step: dict[Word, InteriorTensorSpace] = {}

    def edim(self, letter: int) -> int:
        return self.family[letter].dim

    def corr(self, word: Word) -> Correspondence:
        word = tuple(word)
        if word not in self._corr:
            if word == ():
                self._corr[word] = algebra_correspondence(self.algebra, self.tol)
            elif len(word) == 1:
                self._corr[word] = self.family[word[0]]
            else:
                quotient, space = internal_tensor(self.corr(word[:-1]), self.family[word[-1]])
                self._corr[word] = quotient
                self._step[word] = space
        return self._corr[word]

    def step(self, word: Word) -> InteriorTensorSpace:
        """Quotient data of corr(word[:-1]) (x) family[word[-1]]; len(word) >= 2."""
        word = tuple(word)
        if len(word) < 2:
            raise ShapeMismatch("step data exists only for words of length >= 2")
        self.corr(word)
        return self._step[word]

    # -- canonical re-bracketing -------------------------------------------

    def unfold_tail(self, word: Word, p: int) -> np.ndarray:
        """Matrix expanding corr(word) into corr(word[:max(p,1)]) (x) algebraic tail."""
        word = tuple(word)
        m = len(word)
        if not 0 <= p < m:
            raise ShapeMismatch(f"position {p} out of range for word of length {m}")
        mat = eye_like(self.corr(word).dim)
        tail = 1
        q = m
        while q > max(p, 1):
            mat = kron(self.step(word[:q]).lift, eye_like(tail)) @ mat
            tail *= self.edim(word[q - 1])
            q -= 1
        return mat

    def fold_tail(self, word: Word, p: int) -> np.ndarray:
        """Right inverse of unfold_tail: contracts the expanded tail back."""
        word = tuple(word)
        m = len(word)
        if not 0 <= p < m:
            raise ShapeMismatch(f"position {p} out of range for word of length {m}")
        head = self.corr(word[: max(p, 1)]).dim
        tail_dims = [self.edim(c) for c in word[max(p, 1):]]
        mat = eye_like(head * int(np.prod(tail_dims)) if tail_dims else head)
        for q in range(max(p, 1) + 1, m + 1):
            rest = int(np.prod([self.edim(c) for c in word[q:]])) if word[q:] else 1
            mat = kron(self.step(word[:q]).push, eye_like(rest)) @ mat
        return mat

    def full_lift(self, word: Word) -> np.ndarray:
        """corr(word) into the full algebraic tensor prod_q C^{e_{w_q}}."""
        return self.unfold_tail(word, 0)

    def full_push(self, word: Word) -> np.ndarray:
        return self.fold_tail(word, 0)

    # -- structural maps -----------------------------------------------------

    def prepend(self, word: Word, letter: int, xi) -> np.ndarray:
        """Matrix of eta -> xi (x) eta from corr(word) to corr((letter,) + word).

        For the empty word this is the creation map out of the algebra,
        a (x) -> xi . a through the right action.
        """
        word = tuple(word)
        xi = as_complex(xi)
        E = self.family[letter]
        if xi.shape != (E.dim,):
            raise ShapeMismatch(f"vector of shape {xi.shape} is not in a {E.dim}-dim fiber")
        if word == ():
            cols = [E.right_apply(xi, self.algebra.unit_coords(k)) for k in range(self.algebra.dim)]
            return np.stack(cols, axis=1)
        target = (letter,) + word
        if len(word) == 1:
            raw = kron(xi[:, None], eye_like(self.edim(word[0])))
            return self.step(target).push @ raw
        inner = self.prepend(word[:-1], letter, xi)
        raw = kron(inner, eye_like(self.edim(word[-1])))
        return self.step(target).push @ raw @ self.step(word).lift

    def flip_at(self, word: Word, p: int, tmat) -> tuple[Word, np.ndarray]:
        """Apply a two-letter flip at positions (p, p+1) of the chain.

        ``tmat`` must map corr((word[p], word[p+1])) to the reversed
        two-letter quotient in this tower's bases.
        """
        word = tuple(word)
        m = len(word)
        if not 0 <= p < m - 1:
            raise ShapeMismatch(f"cannot flip positions ({p},{p+1}) in word of length {m}")
        i, j = word[p], word[p + 1]
        new_word = word[:p] + (j, i) + word[p + 2:]
        head = self.corr(word[:p]).dim if p >= 1 else 1
        tail = int(np.prod([self.edim(c) for c in word[p + 2:]])) if word[p + 2:] else 1
        two_alg = self.step((j, i)).lift @ as_complex(tmat) @ self.step((i, j)).push
        mid = kron(eye_like(head), two_alg, eye_like(tail))
        mat = self.fold_tail(new_word, p) @ mid @ self.unfold_tail(word, p)
        return new_word, mat


class HilbertTower:
    """Word-indexed Hilbert spaces corr(word) (x)_sigma H with pushed operators.

    space(()) is H itself.  All returned matrices are expressed in the
    orthonormal quotient bases, so operator adjoints are conjugate
    transposes of the matrices.
    """

    def __init__(self, chain: ChainTower, sigma: StarRepresentation):
        if sigma.algebra != chain.algebra:
            raise AlgebraMismatch("representation algebra differs from tower algebra")
        self.chain = chain
        self.sigma = sigma
        self._space: dict[Word, InteriorTensorSpace] = {}

    @property
    def hdim(self) -> int:
        return self.sigma.hilbert_dim

    def space(self, word: Word) -> InteriorTensorSpace:
        word = tuple(word)
        if word not in self._space:
            if word == ():
                self._space[word] = _identity_space(self.hdim)
            else:
                self._space[word] = interior_tensor_with_rep(self.chain.corr(word), self.sigma)
        return self._space[word]

    def dim(self, word: Word) -> int:
        return self.space(word).quotient_dim

    def factor(self, word: Word, theta) -> np.ndarray:
        """Quotient matrix of I (x) T-tilde : space(word) -> space(word[:-1]).

        ``theta`` is the algebraic map C^{e_last * n} -> C^n of the
        covariant representation attached to the last letter.
        """
        word = tuple(word)
        if not word:
            raise ShapeMismatch("factor needs a nonempty word")
        theta = as_complex(theta)
        n = self.hdim
        if len(word) == 1:
            return theta @ self.space(word).lift
        prefix = word[:-1]
        r_prefix = self.chain.corr(prefix).dim
        mid = kron(eye_like(r_prefix), theta)
        expand = kron(self.chain.step(word).lift, eye_like(n))
        return self.space(prefix).push @ mid @ expand @ self.space(word).lift

    def tensor_op(self, word: Word, X) -> np.ndarray:
        """Quotient matrix of I_{corr(word)} (x) X for X on H commuting with sigma(M)."""
        word = tuple(word)
        X = as_complex(X)
        if not word:
            return X
        r = self.chain.corr(word).dim
        sp = self.space(word)
        return sp.push @ kron(eye_like(r), X) @ sp.lift

    def mid_op_at(self, word: Word, letter: int, X) -> np.ndarray:
        """I_{corr(word)} (x) X on space(word + (letter,)), for X acting on
        the single-letter space((letter,)) and commuting with its left
        algebra action."""
        word = tuple(word)
        X = as_complex(X)
        one = self.space((letter,))
        if X.shape != (one.quotient_dim, one.quotient_dim):
            raise ShapeMismatch("operator does not act on the single-letter space")
        if not word:
            return X
        ext = word + (letter,)
        n = self.hdim
        alg_rep = one.lift @ X @ one.push
        r = self.chain.corr(word).dim
        sp = self.space(ext)
        expand = kron(self.chain.step(ext).lift, eye_like(n))
        contract = kron(self.chain.step(ext).push, eye_like(n))
        return sp.push @ contract @ kron(eye_like(r), alg_rep) @ expand @ sp.lift

    def prepend_op(self, word: Word, letter: int, xi) -> np.ndarray:
        """Quotient matrix of eta (x) h -> (xi (x) eta) (x) h."""
        word = tuple(word)
        pre = self.chain.prepend(word, letter, xi)
        src = self.space(word)
        dst = self.space((letter,) + word)
        return dst.push @ kron(pre, eye_like(self.hdim)) @ src.lift

    def flip_op(self, word: Word, p: int, tmat) -> tuple[Word, np.ndarray]:
        """Quotient matrix of (flip at p) (x) I_H : space(word) -> space(flipped)."""
        new_word, mat = self.chain.flip_at(word, p, tmat)
        src = self.space(word)
        dst = self.space(new_word)
        return new_word, dst.push @ kron(mat, eye_like(self.hdim)) @ src.lift


def tensor_power(E: Correspondence, n: int) -> Correspondence:
    """n-fold internal tensor power; n = 0 gives the algebra correspondence."""
    if n < 0:
        raise ShapeMismatch("tensor power needs n >= 0")
    return ChainTower([E], E.tol).corr((0,) * n)


@dataclass(frozen=True, eq=False)
class FockTruncation:
    """Levels E^{(x)n}, n = 0..N, of the Fock module of a correspondence.

    ``nilpotent`` is true when level N+1 has quotient dimension zero, in
    which case the truncation is the exact Fock module.
    """

    base: Correspondence
    depth: int
    levels: tuple[Correspondence, ...]
    nilpotent: bool
    chain: ChainTower = field(repr=False)
    letter: int = 0
    next_level: Correspondence = field(repr=False, default=None)

    def level_dims(self) -> tuple[int, ...]:
        return tuple(level.dim for level in self.levels)


def fock(E: Correspondence, depth: int, *, chain: ChainTower | None = None, letter: int = 0) -> FockTruncation:
    """Truncated Fock module of E with levels 0..depth."""
    if depth < 0:
        raise ShapeMismatch("Fock depth must be >= 0")
    if chain is None:
        chain = ChainTower([E], E.tol)
        letter = 0
    if chain.family[letter] is not E:
        raise AlgebraMismatch("tower letter does not carry the requested correspondence")
    levels = tuple(chain.corr((letter,) * n) for n in range(depth + 1))
    nxt = chain.corr((letter,) * (depth + 1))
    return FockTruncation(E, depth, levels, nxt.dim == 0, chain, letter, nxt)


class FockHilbert:
    """The Hilbert space F_N(E) (x)_sigma H with its creation operators.

    Level k occupies the coordinate block [offsets[k], offsets[k+1]).
    ``exact`` records whether creation out of the top level would vanish,
    i.e. whether the truncation is the honest Fock space over sigma.
    """

    def __init__(self, trunc: FockTruncation, sigma: StarRepresentation):
        self.trunc = trunc
        self.sigma = sigma
        self.hilb = HilbertTower(trunc.chain, sigma)
        words = [(trunc.letter,) * n for n in range(trunc.depth + 1)]
        # level 0 is M (x)_sigma H rather than H itself
        self.spaces = [interior_tensor_with_rep(trunc.levels[0], sigma)] + [
            self.hilb.space(w) for w in words[1:]
        ]
        dims = [sp.quotient_dim for sp in self.spaces]
        self.offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        self.dim = int(self.offsets[-1])
        if trunc.nilpotent:
            self.exact = True
        else:
            top = interior_tensor_with_rep(trunc.next_level, sigma)
            self.exact = top.quotient_dim == 0

    def level_dims(self) -> tuple[int, ...]:
        return tuple(sp.quotient_dim for sp in self.spaces)

    def _level_phi(self, k: int, a_coords) -> np.ndarray:
        sp = self.spaces[k]
        level = self.trunc.levels[k]
        n = self.sigma.hilbert_dim
        return sp.push @ kron(level.phi(a_coords), eye_like(n)) @ sp.lift

    def rep_image(self, a_coords) -> np.ndarray:
        """phi_infinity(a) (x) I as a block-diagonal matrix."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k in range(len(self.spaces)):
            o, t = self.offsets[k], self.offsets[k + 1]
            out[o:t, o:t] = self._level_phi(k, a_coords)
        return out

    def representation(self) -> StarRepresentation:
        alg = self.trunc.base.algebra
        images = np.stack([self.rep_image(alg.unit_coords(k)) for k in range(alg.dim)])
        return StarRepresentation(alg, self.dim, images, self.sigma.tol)

    def creation(self, xi) -> np.ndarray:
        """Creation by xi in E: level k -> k + 1, top level to zero."""
        xi = as_complex(xi)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        n = self.sigma.hilbert_dim
        letter = self.trunc.letter
        for k in range(self.trunc.depth):
            word = (letter,) * k
            pre = self.trunc.chain.prepend(word, letter, xi)
            block = self.spaces[k + 1].push @ kron(pre, eye_like(n)) @ self.spaces[k].lift
            o_src, o_dst = self.offsets[k], self.offsets[k + 1]
            out[o_dst : self.offsets[k + 2], o_src:o_dst] = block
        return out


def creation_operator(trunc: FockTruncation, xi, sigma: StarRepresentation) -> np.ndarray:
    """Matrix of the creation operator T_xi (x) I on F_N(E) (x)_sigma H."""
    return FockHilbert(trunc, sigma).creation(xi)
