"""Dense real-symmetric eigendecompositions and matrix functions.

Everything here is built on a cyclic Jacobi sweep: simple, dependency-free,
unconditionally stable on symmetric input, and deterministic for a fixed
input matrix, which is what the byte-identical reproducibility contract of
the harness needs. Intended scale is n <= 64.

The batched entry point exists because the property sweeps evaluate tens of
thousands of small spectrahedron points; rotating a whole batch at a fixed
pivot is vectorizable while a single matrix is not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError, NumericalFailureError

SYMMETRY_TOL = 1e-12
# Off-diagonal Frobenius mass must drop below this multiple of ||A||_F before
# we stop. Rotations re-introduce entries of order eps*||A||, so the threshold
# has to sit a couple orders above eps or n ~ 64 batches never certify.
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


def check_symmetric(A: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Validate that A is a finite, square, symmetric float matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    if A.shape[0] > 0 and np.max(np.abs(A - A.T)) > tol:
        raise InvalidInputError("matrix is not symmetric within tolerance")
    return A


@dataclass(frozen=True, eq=False)
class EigDecomposition:
    """Spectral factorization A = V diag(w) V^T.

    eigenvalues are sorted descending; eigenvector columns carry the sign
    convention that the largest-magnitude component is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_batch(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a batch (m, n, n) of symmetric matrices in place.

    Returns (eigenvalue batch (m, n), eigenvector batch (m, n, n)).
    """
    m, n, _ = B.shape
    V = np.broadcast_to(np.eye(n), (m, n, n)).copy()
    if n <= 1:
        return B.reshape(m, max(n, 0)).copy() if n else np.zeros((m, 0)), V

    norms = np.sqrt(np.einsum("mij,mij->m", B, B))
    thresholds = (JACOBI_TOL * norms) ** 2

    idx = np.arange(n)

    def off_sq(M: np.ndarray) -> np.ndarray:
        # Summed directly off a diagonal-zeroed copy: the total-minus-diagonal
        # shortcut cancels catastrophically and reads as noise ~eps*||A||^2,
        # which can never certify a threshold of (1e-13 ||A||_F)^2.
        off = M.copy()
        off[:, idx, idx] = 0.0
        return np.einsum("mij,mij->m", off, off)

    for _ in range(MAX_SWEEPS):
        if np.all(off_sq(B) <= thresholds):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = B[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                tau = (B[:, q, q] - B[:, p, p]) / np.where(active, 2.0 * apq, 1.0)
                # Smaller-magnitude root of t^2 + 2 tau t - 1 = 0; hypot keeps
                # huge tau from overflowing.
                t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cc = c[:, None]
                ss = s[:, None]

                colp = B[:, :, p].copy()
                colq = B[:, :, q].copy()
                B[:, :, p] = cc * colp - ss * colq
                B[:, :, q] = ss * colp + cc * colq
                rowp = B[:, p, :].copy()
                rowq = B[:, q, :].copy()
                B[:, p, :] = cc * rowp - ss * rowq
                B[:, q, :] = ss * rowp + cc * rowq
                B[:, p, q] = 0.0
                B[:, q, p] = 0.0

                vp = V[:, :, p].copy()
                vq = V[:, :, q].copy()
                V[:, :, p] = cc * vp - ss * vq
                V[:, :, q] = ss * vp + cc * vq
    else:
        raise NumericalFailureError(
            f"Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps"
        )

    w = np.einsum("mii->mi", B).copy()

    # Descending order with a stable tie rule, then fix eigenvector signs.
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    lead = np.argmax(np.abs(V), axis=1)
    signs = np.sign(np.take_along_axis(V, lead[:, None, :], axis=1))[:, 0, :]
    signs = np.where(signs == 0.0, 1.0, signs)
    V *= signs[:, None, :]
    return w, V


def sym_eig_batch(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a batch (m, n, n) of symmetric matrices."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise InvalidInputError(f"expected a (m, n, n) batch, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("batch has non-finite entries")
    if A.shape[0] and A.shape[1] and np.max(np.abs(A - np.swapaxes(A, 1, 2))) > SYMMETRY_TOL:
        raise InvalidInputError("batch contains a non-symmetric matrix")
    return _jacobi_batch(A.copy())


def sym_eig(A: np.ndarray) -> EigDecomposition:
    """Full spectral decomposition of one symmetric matrix."""
    A = check_symmetric(A)
    w, V = _jacobi_batch(A[None, :, :].copy())
    return EigDecomposition(eigenvalues=w[0], eigenvectors=V[0])


def matrix_fn(A: np.ndarray, f) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix through its spectrum."""
    dec = sym_eig(A)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(dec.eigenvalues), dtype=float)
    if fw.shape != dec.eigenvalues.shape or not np.all(np.isfinite(fw)):
        raise DomainError("function not defined on the spectrum of the matrix")
    V = dec.eigenvectors
    out = (V * fw) @ V.T
    return 0.5 * (out + out.T)


def sym_logdet_grad(A: np.ndarray) -> np.ndarray:
    """Gradient of log det at an SPD matrix, i.e. its inverse."""
    dec = sym_eig(A)
    if dec.eigenvalues[-1] <= 0.0:
        raise DomainError("matrix is not positive definite")
    V = dec.eigenvectors
    out = (V / dec.eigenvalues) @ V.T
    return 0.5 * (out + out.T)
