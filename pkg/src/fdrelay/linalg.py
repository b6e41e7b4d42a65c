"""Dense complex matrix helpers used by the rate formulas.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration that also accepts stacks of matrices with shape
``(..., M, M)``, which is how the Monte Carlo code diagonalizes thousands of
small Gram matrices at once.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

__all__ = [
    "HermitianEigen",
    "adjoint",
    "matmul",
    "gram",
    "hermitian_eigen",
    "log2det_identity_plus",
    "logdet2_shifted_gram",
]

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues (ascending) and matching unit eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        q = self.eigenvectors
        return (q * self.eigenvalues[..., None, :]) @ adjoint(q)


def _as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    if a.shape[-1] < 1 or a.shape[-2] < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got {a.shape}")
    return a


def adjoint(a):
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(np.asarray(a), -1, -2))


def matmul(a, b):
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[-1] != b.shape[-2]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def gram(x):
    """Return ``X^H X``."""
    x = _as_matrix(x)
    return adjoint(x) @ x


def _fix_phase(vectors):
    # largest-magnitude component of each column made real-positive
    idx = np.argmax(np.abs(vectors), axis=-2)[..., None, :]
    pivot = np.take_along_axis(vectors, idx, axis=-2)
    return vectors * (np.conj(pivot) / np.abs(pivot))


def hermitian_eigen(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix (or stack) by cyclic Jacobi.

    Parameters
    ----------
    a : array_like, shape (..., M, M)
        Hermitian matrix or stack of Hermitian matrices.
    tol : float
        Sweeps stop once every off-diagonal magnitude is at most
        ``tol * ||A||_F`` for every matrix in the stack.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`NumericalError`.

    Returns
    -------
    HermitianEigen
        Eigenvalues sorted ascending with ties kept in index order. Each
        eigenvector's largest-magnitude component is real and positive.
    """
    a = _as_matrix(a)
    m = a.shape[-1]
    if a.shape[-2] != m:
        raise ValueError(f"matrix must be square, got {a.shape}")
    norm = np.linalg.norm(a, axis=(-2, -1))
    skew = np.linalg.norm(a - adjoint(a), axis=(-2, -1))
    if np.any(skew > HERMITIAN_TOL * norm):
        raise ValueError(f"matrix is not Hermitian (skew residual {skew.max():.3e})")

    a = 0.5 * (a + adjoint(a))
    v = np.broadcast_to(np.eye(m, dtype=complex), a.shape).copy()
    threshold = tol * norm
    off_mask = ~np.eye(m, dtype=bool)

    def off_diagonal():
        return np.max(np.abs(a) * off_mask, axis=(-2, -1)) if m > 1 else np.zeros_like(norm)

    for _ in range(max_sweeps):
        if np.all(off_diagonal() <= threshold):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[..., p, q]
                mag = np.abs(apq)
                active = mag > 0
                safe_mag = np.where(active, mag, 1.0)
                phase = np.where(active, apq / safe_mag, 1.0)
                theta = (a[..., q, q].real - a[..., p, p].real) / (2.0 * safe_mag)
                sign = np.where(theta >= 0, 1.0, -1.0)
                t = np.where(active, sign / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                c_ = c[..., None]
                s_ = s[..., None]
                ph_ = phase[..., None]
                col_p = a[..., :, p].copy()
                col_q = a[..., :, q].copy()
                a[..., :, p] = c_ * col_p - s_ * np.conj(ph_) * col_q
                a[..., :, q] = s_ * ph_ * col_p + c_ * col_q
                row_p = a[..., p, :].copy()
                row_q = a[..., q, :].copy()
                a[..., p, :] = c_ * row_p - s_ * ph_ * row_q
                a[..., q, :] = s_ * np.conj(ph_) * row_p + c_ * row_q
                a[..., p, q] = 0.0
                a[..., q, p] = 0.0

                vp = v[..., :, p].copy()
                vq = v[..., :, q].copy()
                v[..., :, p] = c_ * vp - s_ * np.conj(ph_) * vq
                v[..., :, q] = s_ * ph_ * vp + c_ * vq
    off = off_diagonal()
    if np.any(off > threshold):
        raise NumericalError(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps",
            residual=float(np.max(off)),
        )

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return HermitianEigen(eigenvalues=w, eigenvectors=_fix_phase(v))


def log2det_identity_plus(a):
    """``log2 det(I + A)`` for a square ``A`` whose determinant is real positive.

    ``A`` need not be Hermitian (``P X^H X`` products are not), but it must be
    similar to a PSD matrix so the determinant is real and >= 1 in exact
    arithmetic. Works on stacks.
    """
    a = np.asarray(a, dtype=complex)
    m = a.shape[-1]
    sign, logabs = np.linalg.slogdet(np.eye(m) + a)
    if not np.all(np.isfinite(logabs)):
        raise NumericalError("non-finite determinant")
    if np.any(np.abs(sign - 1.0) > 1e-6):
        raise NumericalError("determinant is not real positive", residual=float(np.max(np.abs(sign - 1.0))))
    return logabs / np.log(2.0)


def logdet2_shifted_gram(c, x, p):
    """``log2 det(c I_n + X P X^H)`` evaluated on the M x M side.

    Uses ``det(c I_n + X P X^H) = c^n det(I_M + P X^H X / c)`` so the n x n
    matrix is never formed.

    Parameters
    ----------
    c : float
        Positive diagonal shift.
    x : array_like, shape (n, M)
    p : array_like, shape (M, M)
        Hermitian positive semidefinite.
    """
    if not c > 0:
        raise ValueError(f"shift must be positive, got {c}")
    x = _as_matrix(x)
    p = _as_matrix(p)
    n, m = x.shape[-2:]
    if p.shape[-2:] != (m, m):
        raise ValueError(f"P must be {m}x{m}, got {p.shape}")
    return n * np.log2(c) + log2det_identity_plus(p @ gram(x) / c)
