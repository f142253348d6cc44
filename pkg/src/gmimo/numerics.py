"""Dense complex linear-algebra kernel.

Thin contract layer over ``numpy.linalg`` that pins the conventions the
rest of the toolkit relies on: descending spectral order, validated
Hermitian input, and null-space bases with orthonormal columns.  Problem
sizes stay below roughly 100 x 100, so dense algorithms only.
"""

from typing import Optional, Tuple

import numpy as np

__all__ = ["hermitian_eig", "svd", "null_space", "default_rank_tolerance"]

HERMITIAN_RTOL = 1e-10
"Maximum relative asymmetry ||A - A^H||_F / ||A||_F accepted as Hermitian."


def _as_complex_matrix(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def hermitian_eig(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, largest eigenvalue first.

    Parameters
    ----------
    a : np.ndarray
        Square matrix, Hermitian to within ``HERMITIAN_RTOL`` relative
        asymmetry.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Real eigenvalues sorted descending and the matching unitary
        matrix of column eigenvectors, so a = V diag(w) V^H.
    """
    a = _as_complex_matrix(a)
    n, m = a.shape
    if n != m:
        raise ValueError(f"expected a square matrix, got {n}x{m}")
    asym = np.linalg.norm(a - a.conj().T)
    scale = np.linalg.norm(a)
    if asym > HERMITIAN_RTOL * max(scale, 1.0):
        raise ValueError(
            f"matrix is not Hermitian: relative asymmetry {asym / max(scale, 1e-300):.3e}"
        )
    w, v = np.linalg.eigh(a)
    return w[::-1], v[:, ::-1]


def svd(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced singular value decomposition a = U diag(s) V^H.

    Singular values come back nonnegative and descending; U and V carry
    orthonormal columns (min(rows, cols) of them each).
    """
    a = _as_complex_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return u, s, vh.conj().T


def default_rank_tolerance(a: np.ndarray) -> float:
    """Numerical-rank threshold 1e-10 * max(rows, cols) * largest singular value."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    s_max = float(np.linalg.norm(a, 2))
    return 1e-10 * max(a.shape) * s_max


def null_space(a: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of the (right) null space of ``a``.

    Columns n satisfy ||a n|| <= tol; the basis has
    cols(a) - rank(a, tol) columns, where the rank counts singular
    values above ``tol``.  With ``tol=None`` the default rank
    heuristic from :func:`default_rank_tolerance` is used.
    """
    a = _as_complex_matrix(a)
    if tol is None:
        tol = default_rank_tolerance(a)
    elif tol <= 0:
        raise ValueError("tol must be positive")
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=np.complex128)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T
