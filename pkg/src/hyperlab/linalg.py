"""Dense complex linear algebra kernel.

Everything downstream (operator systems, Choi calculus, the UCP search)
funnels through the handful of primitives here: Hermitian eigendecomposition,
operator norm, PSD projection and the Kronecker / partial-trace pair.
Matrices are plain complex numpy arrays; all dimensions are desk-scale
(<= 64) so everything is dense.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput

# Relative tolerance for accepting a matrix as Hermitian.
HERMITICITY_RTOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting NaN/inf entries."""
    A = np.asarray(a, dtype=complex)
    if A.ndim != 2:
        raise InvalidInput(f"expected a 2-d matrix, got ndim={A.ndim}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise InvalidInput("matrix has non-finite entries")
    return A


def require_square(A: np.ndarray) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {A.shape}")
    return A


def maxabs(A) -> float:
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def is_hermitian(A, rtol: float = HERMITICITY_RTOL) -> bool:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return maxabs(A - A.conj().T) <= rtol * (1.0 + maxabs(A))


def hermitize(A) -> np.ndarray:
    """Symmetrize (A + A*)/2; used to wash out floating-point drift."""
    A = np.asarray(A, dtype=complex)
    return (A + A.conj().T) / 2.0


def herm_eig(A):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending
    and eigenvectors as the columns of a unitary matrix.  The input is
    symmetrized before decomposing.
    """
    A = require_square(A)
    if not is_hermitian(A):
        raise InvalidInput("herm_eig requires a Hermitian matrix")
    w, U = np.linalg.eigh(hermitize(A))
    return w[::-1].copy(), U[:, ::-1].copy()


def op_norm(A) -> float:
    """Largest singular value, via the top eigenvalue of A*A."""
    A = as_matrix(A)
    if A.size == 0:
        return 0.0
    M = hermitize(A.conj().T @ A)
    w = np.linalg.eigvalsh(M)
    return float(np.sqrt(max(float(w[-1]), 0.0)))


def frob_norm(A) -> float:
    return float(np.linalg.norm(np.asarray(A, dtype=complex)))


def frob_inner(A, B) -> complex:
    """Frobenius inner product <A, B> = trace(A* B)."""
    return complex(np.vdot(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)))


def psd_project(A) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (eigenvalue clipping)."""
    A = require_square(A)
    if not is_hermitian(A):
        raise InvalidInput("psd_project requires a Hermitian matrix")
    w, U = np.linalg.eigh(hermitize(A))
    w = np.clip(w, 0.0, None)
    return hermitize((U * w) @ U.conj().T)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def partial_trace_first(C, d: int) -> np.ndarray:
    """Trace out the first tensor factor of a matrix on C^d (x) C^m.

    Row/column index convention is row-major: index (a, mu) -> a*m + mu,
    so partial_trace_first(kron(A, B), d) == trace(A) * B.
    """
    C = require_square(C)
    n = C.shape[0]
    if d < 1 or n % d != 0:
        raise InvalidInput(f"size {n} is not divisible by first factor dim {d}")
    m = n // d
    return np.einsum("aman->mn", C.reshape(d, m, d, m))


def eye(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E
