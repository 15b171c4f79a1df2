"""Dense complex linear algebra helpers with scale-relative tolerances.

Conventions used throughout the package:

* inner products are conjugate-linear in the first argument,
* matrices act on column vectors, adjoint = conjugate transpose,
* a residual passes when it is at most ``tol * (1 + scale)`` where
  ``scale`` is the largest operator norm entering the computation.
"""

from __future__ import annotations

import numpy as np

from .errors import PositivityFailure, ShapeMismatch

#: residual tolerance, scaled by (1 + data norm) at the point of use
DEFAULT_TOL = 1e-9
#: relative eigenvalue / singular value cutoff for rank decisions
RANK_TOL = 1e-8
#: maximal principal angle (radians) at which two subspaces count as equal
ANGLE_TOL = 1e-7


def as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def op_norm(a) -> float:
    """Spectral norm; zero for matrices with an empty axis."""
    a = as_complex(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def scale_of(*mats) -> float:
    """1 + max operator norm of the arguments, for relative tolerances."""
    return 1.0 + max((op_norm(m) for m in mats), default=0.0)


def eye_like(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def dagger(a) -> np.ndarray:
    return as_complex(a).conj().T


def herm_residual(a) -> float:
    a = as_complex(a)
    return op_norm(a - dagger(a))


def min_eig_herm(a, tol: float = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of the Hermitian part of ``a``.

    Raises ShapeMismatch when ``a`` drifts measurably from Hermitian,
    so that numerical asymmetry is caught instead of silently averaged
    away.  Empty matrices give +inf (vacuously positive).
    """
    a = as_complex(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected square matrix, got {a.shape}")
    if a.shape[0] == 0:
        return np.inf
    drift = herm_residual(a)
    if drift > tol * scale_of(a):
        raise ShapeMismatch(f"matrix is not Hermitian (drift {drift:.3e})")
    return float(np.linalg.eigvalsh((a + dagger(a)) / 2.0)[0])


def orth_cols(a, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``a`` (SVD, relative cutoff)."""
    a = as_complex(a)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    r = int(np.sum(s > rank_tol * max(1.0, s[0])))
    return u[:, :r]


def null_cols(a, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the null space of ``a``."""
    a = as_complex(a)
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0 or a.size == 0:
        return eye_like(n)
    _, s, vh = np.linalg.svd(a)
    cutoff = rank_tol * max(1.0, s[0] if s.size else 0.0)
    r = int(np.sum(s > cutoff))
    return vh[r:, :].conj().T


def solve_hermitian(a, b) -> np.ndarray:
    """Solve ``a x = b`` for Hermitian positive definite ``a``."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape[0] == 0:
        return np.zeros((0, b.shape[1]) if b.ndim == 2 else (0,), dtype=complex)
    return np.linalg.solve(a, b)


def inv_sqrt_psd(a, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Inverse square root of a Hermitian positive definite matrix."""
    a = as_complex(a)
    if a.shape[0] == 0:
        return a.copy()
    w, v = np.linalg.eigh((a + dagger(a)) / 2.0)
    if w[0] <= rank_tol * max(1.0, w[-1]):
        raise PositivityFailure(f"matrix not positive definite (min eig {w[0]:.3e})")
    return (v * (w ** -0.5)) @ dagger(v)


def sqrt_psd(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Square root of a Hermitian PSD matrix; small negatives are clipped."""
    a = as_complex(a)
    if a.shape[0] == 0:
        return a.copy()
    w, v = np.linalg.eigh((a + dagger(a)) / 2.0)
    if w.size and w[0] < -tol * scale_of(a):
        raise PositivityFailure(f"matrix not PSD (min eig {w[0]:.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)


def gram_quotient(gram, tol: float = DEFAULT_TOL, rank_tol: float = RANK_TOL):
    """Quotient a semi-inner-product space by the kernel of its Gram matrix.

    Returns ``(push, lift, kernel_basis)`` where ``push`` has orthonormal
    rows for the semi-inner product (``push* push = gram`` modulo kernel),
    ``lift`` is the isometric section with ``push @ lift = I``, and
    ``kernel_basis`` spans the Gram kernel orthonormally.

    Raises PositivityFailure when the Gram has an eigenvalue below
    ``-tol * (1 + |gram|)``.
    """
    gram = as_complex(gram)
    m = gram.shape[0]
    if gram.shape != (m, m):
        raise ShapeMismatch(f"Gram matrix must be square, got {gram.shape}")
    if m == 0:
        z = np.zeros((0, 0), dtype=complex)
        return z, z, z
    drift = herm_residual(gram)
    if drift > tol * scale_of(gram):
        raise ShapeMismatch(f"Gram matrix is not Hermitian (drift {drift:.3e})")
    w, v = np.linalg.eigh((gram + dagger(gram)) / 2.0)
    if w[0] < -tol * scale_of(gram):
        raise PositivityFailure(f"semi-Gram has negative eigenvalue {w[0]:.3e}")
    cutoff = rank_tol * max(1.0, w[-1])
    keep = w > cutoff
    # largest eigenvalue first, for a deterministic well-conditioned basis
    idx = np.nonzero(keep)[0][::-1]
    wk = w[idx]
    vk = v[:, idx]
    push = (np.sqrt(wk)[:, None]) * dagger(vk)
    lift = vk * (wk ** -0.5)
    kernel = v[:, ~keep]
    return push, lift, kernel


def kron(*mats) -> np.ndarray:
    out = as_complex(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_complex(m))
    return out


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
