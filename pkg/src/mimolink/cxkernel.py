"""Minimal complex dense linear-algebra kernel.

Matrices are 2-D ``numpy.ndarray`` objects of dtype complex128 with entries
stored (and serialized) in row-major order.  Every operation validates its
input, admits no NaN/Inf entries, and is a pure deterministic function of
its arguments, so results are safe to share across concurrent workers and
stable enough for golden-file tests.

Positive-definite solves and log-determinants go through a Cholesky
factorization; the log-determinant is the sum of log pivots, which stays
finite and accurate where forming the determinant itself would overflow.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DefinitenessError, DomainError, ShapeError, SymmetryError

#: Relative Frobenius tolerance for accepting a matrix as Hermitian.
HERMITIAN_RTOL = 1e-10


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and column, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{name} contains non-finite entries")
    return m


def _as_hermitian(m, name: str = "matrix") -> np.ndarray:
    m = _as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got {m.shape}")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.conj().T) > HERMITIAN_RTOL * max(scale, np.finfo(float).tiny):
        raise SymmetryError(f"{name} is not Hermitian within relative tolerance {HERMITIAN_RTOL:g}")
    # Symmetrize so downstream factorizations see an exactly Hermitian matrix.
    return 0.5 * (m + m.conj().T)


def matmul(a, b) -> np.ndarray:
    """Complex matrix product a @ b."""
    a = _as_matrix(a, "left operand")
    b = _as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose. An involution: adjoint(adjoint(a)) == a."""
    return _as_matrix(a).conj().T


def hermitian_solve(m, rhs) -> np.ndarray:
    """Solve m @ X = rhs for Hermitian positive-definite m.

    Parameters
    ----------
    m : square Hermitian positive-definite matrix
    rhs : vector or matrix with matching row count

    Returns
    -------
    X with residual ||m @ X - rhs||_F <= 1e-9 * ||rhs||_F for
    well-conditioned systems.

    Raises
    ------
    ShapeError, SymmetryError, DefinitenessError
    """
    m = _as_hermitian(m)
    r = np.asarray(rhs, dtype=np.complex128)
    vector_rhs = r.ndim == 1
    if vector_rhs:
        r = r[:, np.newaxis]
    r = _as_matrix(r, "right-hand side")
    if r.shape[0] != m.shape[0]:
        raise ShapeError(f"right-hand side has {r.shape[0]} rows, matrix is {m.shape[0]}x{m.shape[1]}")
    try:
        factor = scipy.linalg.cho_factor(m, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"matrix is not positive definite: {exc}") from exc
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - scipy alias
        raise DefinitenessError(f"matrix is not positive definite: {exc}") from exc
    x = scipy.linalg.cho_solve(factor, r, check_finite=False)
    return x[:, 0] if vector_rhs else x


def squared_singular_values(g) -> np.ndarray:
    """Squared singular values of g, sorted descending.

    Equals the eigenvalues of adjoint(g) @ g (equivalently the nonzero part
    of g @ adjoint(g)); length is min(rows, cols).
    """
    g = _as_matrix(g)
    s = np.linalg.svd(g, compute_uv=False)
    return s * s


def logdet_hpd(m) -> float:
    """Base-2 log-determinant of a Hermitian positive-definite matrix."""
    m = _as_hermitian(m)
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"matrix is not positive definite: {exc}") from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diag(chol)))))


def frobenius_sq(m) -> float:
    """Squared Frobenius norm: sum of |entry|^2."""
    m = _as_matrix(m)
    return float(np.vdot(m, m).real)
