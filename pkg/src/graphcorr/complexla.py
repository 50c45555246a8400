"""Tolerance-controlled dense complex linear algebra.

Everything here works on small dense ``complex128`` arrays. Vectors are
1-D arrays of length ``n``; a "form" is an ``n x n`` Hermitian positive
semidefinite matrix ``G`` defining the semi-inner product
``<x, y> = x^H G y`` (conjugate-linear in the first slot).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NonFiniteError, OrthonormalityError, SingularMatrixError

TOL_VAL = 1e-9
TOL_RANK = 1e-8


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Coerce ``data`` to a finite 2-D complex array."""
    arr = np.asarray(data, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return arr


def _as_vectors(vectors: Sequence, n: int) -> np.ndarray:
    """Stack ``vectors`` as the columns of an ``n x k`` array."""
    if len(vectors) == 0:
        return np.zeros((n, 0), dtype=complex)
    cols = [np.asarray(v, dtype=complex) for v in vectors]
    for i, c in enumerate(cols):
        if c.shape != (n,):
            raise DimensionError(f"vector {i} has shape {c.shape}, expected ({n},)")
    out = np.stack(cols, axis=1)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("vectors have non-finite entries")
    return out


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """A Hermitian positive semidefinite matrix, checked at ``tol``."""

    matrix: np.ndarray
    tol: float = TOL_VAL

    def __post_init__(self):
        g = as_matrix(self.matrix, "form")
        if g.shape[0] != g.shape[1]:
            raise DimensionError(f"form must be square, got {g.shape}")
        scale = max(1.0, float(np.max(np.abs(g), initial=0.0)))
        if np.max(np.abs(g - g.conj().T), initial=0.0) > self.tol * scale:
            raise ValueError("form is not Hermitian")
        if g.size:
            eig = np.linalg.eigvalsh((g + g.conj().T) / 2)
            top = max(1.0, float(np.max(np.abs(eig))))
            if eig[0] < -self.tol * top:
                raise ValueError(f"form is not positive semidefinite (eigenvalue {eig[0]:.3e})")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _form_matrix(form) -> np.ndarray:
    if isinstance(form, HermitianForm):
        return form.matrix
    g = as_matrix(form, "form")
    if g.shape[0] != g.shape[1]:
        raise DimensionError(f"form must be square, got {g.shape}")
    return g


def _norms2(cols: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ij,ik,kj->j", cols.conj(), g, cols))


def _project_out(cols: np.ndarray, q: np.ndarray, g: np.ndarray) -> np.ndarray:
    return cols - np.outer(q, (q.conj() @ g) @ cols)


def _pivoted_mgs(residual: np.ndarray, basis: list, g: np.ndarray, tol: float, scale: float) -> list:
    # Columns of `residual` are already orthogonal to `basis`.
    residual = residual.copy()
    active = np.ones(residual.shape[1], dtype=bool)
    added = []
    while active.any():
        norms2 = np.where(active, _norms2(residual, g), -np.inf)
        j = int(np.argmax(norms2))
        if norms2[j] <= tol * scale:
            break
        active[j] = False
        r = residual[:, j]
        for q in basis + added:
            r = r - q * (q.conj() @ g @ r)
        nrm2 = float(np.real(r.conj() @ g @ r))
        if nrm2 <= tol * scale:
            continue
        q = r / np.sqrt(nrm2)
        added.append(q)
        residual = _project_out(residual, q, g)
    return added


def form_orthonormalize(vectors: Sequence, form, tol: float = TOL_RANK) -> list[np.ndarray]:
    """Orthonormalize ``vectors`` with respect to ``form``.

    Modified Gram-Schmidt with pivoting: at each step the remaining residual
    of largest form-norm is taken (lowest input index on ties). Residuals
    whose squared norm drops to ``tol * max(1, largest input squared norm)``
    are discarded, so the output length is the numerical rank of the input
    Gram matrix.

    Parameters
    ----------
    vectors : sequence of array_like
        Coefficient vectors of length ``n``.
    form : HermitianForm or array_like
        ``n x n`` PSD matrix.
    tol : float
        Relative rank threshold.

    Returns
    -------
    list of numpy.ndarray
        Vectors ``b_i`` with ``b_i^H G b_j = delta_ij``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = _form_matrix(form)
    cols = _as_vectors(vectors, g.shape[0])
    if cols.shape[1] == 0:
        return []
    scale = max(1.0, float(np.max(_norms2(cols, g))))
    return _pivoted_mgs(cols, [], g, tol, scale)


def orthonormal_extension(onset: Sequence, spanning: Sequence, form, tol: float = TOL_RANK) -> list[np.ndarray]:
    """Extend an orthonormal ``onset`` to a basis of ``span(onset + spanning)``.

    The onset vectors are returned unmodified as a prefix of the result.

    Raises
    ------
    OrthonormalityError
        If the onset Gram matrix differs from the identity by more than ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = _form_matrix(form)
    n = g.shape[0]
    head = _as_vectors(onset, n)
    gram = head.conj().T @ g @ head
    err = np.max(np.abs(gram - np.eye(head.shape[1])), initial=0.0)
    if err > tol:
        raise OrthonormalityError(f"onset is not orthonormal (residual {err:.3e})")
    basis = [np.asarray(v, dtype=complex) for v in onset]
    cols = _as_vectors(spanning, n)
    if cols.shape[1] == 0:
        return basis
    scale = max(1.0, float(np.max(_norms2(cols, g))))
    for _ in range(2):
        for q in basis:
            cols = _project_out(cols, q, g)
    return basis + _pivoted_mgs(cols, basis, g, tol, scale)


def hermitian_rank(form, tol: float = TOL_RANK) -> int:
    """Number of eigenvalues above ``tol * max(1, largest eigenvalue)``."""
    g = _form_matrix(form)
    if g.size == 0:
        return 0
    eig = np.linalg.eigvalsh((g + g.conj().T) / 2)
    return int(np.sum(eig > tol * max(1.0, float(eig[-1]))))


def invert(matrix, tol: float = TOL_VAL) -> np.ndarray:
    """Inverse of a square matrix whose condition number is below ``1/tol``.

    Raises
    ------
    SingularMatrixError
        If the matrix is singular at tolerance or the residual
        ``max|M N - I|`` exceeds ``10 * tol``.
    """
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"cannot invert non-square matrix of shape {m.shape}")
    if m.size == 0:
        return m.copy()
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond * tol >= 1.0:
        raise SingularMatrixError(f"matrix is singular at tolerance (condition {cond:.3e})")
    inv = np.linalg.inv(m)
    residual = np.max(np.abs(m @ inv - np.eye(m.shape[0])))
    if residual > 10 * tol:
        raise SingularMatrixError(f"inverse residual {residual:.3e} exceeds {10 * tol:.1e}")
    return inv


def max_abs(a) -> float:
    """Max-entry norm, 0 for empty arrays."""
    return float(np.max(np.abs(a), initial=0.0))
