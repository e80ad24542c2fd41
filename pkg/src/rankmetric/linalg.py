"""Dense linear algebra over a finite field.

Every routine takes the field as its first argument and works on numpy
integer arrays holding field encodings (see :mod:`rankmetric.finite_field`).
Row operations are vectorised through the field's table lookups, so the
Python-level loops only run over pivot columns.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a singular matrix."""


def _as_2d(A, ncols: int | None = None) -> np.ndarray:
    R = np.array(A, dtype=np.int64, copy=True)
    if R.size == 0:
        return np.zeros((0, ncols if ncols is not None else (R.shape[-1] if R.ndim == 2 else 0)), dtype=np.int64)
    if R.ndim == 1:
        R = R.reshape(1, -1)
    if R.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {R.shape}")
    return R


def _eliminate(F, R: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan on R in place, choosing pivots only among the first ncols columns."""
    rows = R.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = F.mul(R[r], F.inv(lead))
        f = R[:, c].copy()
        f[r] = 0
        if f.any():
            R[:] = F.sub(R, F.mul(f[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rref(F, A, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped.

    The result is canonical: two matrices have the same row space iff their
    rref arrays are equal.
    """
    R = _as_2d(A, ncols)
    R, pivots = _eliminate(F, R, R.shape[1])
    return R[: len(pivots)], pivots


def rref_with_transform(F, A) -> tuple[np.ndarray, np.ndarray]:
    """Return (R, T) with T invertible and T @ A == R, R the full-height rref."""
    A = _as_2d(A)
    rows, cols = A.shape
    M = np.concatenate([A, np.eye(rows, dtype=np.int64)], axis=1)
    M, _ = _eliminate(F, M, cols)
    return M[:, :cols], M[:, cols:]


def rank(F, A) -> int:
    A = _as_2d(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F, A, ncols: int) -> np.ndarray:
    """Canonical basis (rref rows) of {x : A x = 0} in F^ncols."""
    A = _as_2d(A, ncols)
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, pivots = rref(F, A)
    free = [j for j in range(ncols) if j not in pivots]
    if not free:
        return np.zeros((0, ncols), dtype=np.int64)
    N = np.zeros((len(free), ncols), dtype=np.int64)
    for row, j in enumerate(free):
        N[row, j] = 1
        for i, pc in enumerate(pivots):
            N[row, pc] = F.neg(int(R[i, j]))
    return rref(F, N)[0]


def inverse(F, A) -> np.ndarray:
    A = _as_2d(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise SingularMatrixError("only square matrices are invertible")
    R, T = rref_with_transform(F, A)
    if not np.array_equal(R, np.eye(n, dtype=np.int64)):
        raise SingularMatrixError("matrix is singular")
    return T


def matmul(F, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.is_prime_field:
        return (A @ B) % F.p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for j in range(A.shape[-1]):
        out = F.add(out, F.mul(A[..., j, None], B[j]))
    return out


def dot(F, u, v) -> int:
    """Standard bilinear form sum_i u_i v_i."""
    u = np.asarray(u, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel()
    if u.shape != v.shape:
        raise ValueError("length mismatch")
    if F.is_prime_field:
        return int((u * v).sum() % F.p)
    acc = 0
    for x in F.mul(u, v).tolist():
        acc = F.add(acc, x)
    return int(acc)


def batch_rank(F, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices of shape (N, k, m), fully vectorised."""
    M = np.array(mats, dtype=np.int64, copy=True)
    N, k, m = M.shape
    if k > m:
        M = np.ascontiguousarray(M.transpose(0, 2, 1))
        k, m = m, k
    ranks = np.zeros(N, dtype=np.int64)
    if N == 0 or k == 0:
        return ranks
    used = np.zeros((N, k), dtype=bool)
    idx = np.arange(N)
    for c in range(m):
        col = M[:, :, c]
        cand = (col != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        ranks += has
        used[idx[has], piv[has]] = True
        pivrow = M[idx, piv, :]
        f = F.mul(col, F.inv_unchecked(col[idx, piv])[:, None])
        f[idx, piv] = 0
        f[~has] = 0
        M = F.sub(M, F.mul(f[:, :, None], pivrow[:, None, :]))
    return ranks


def index_digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-`base` digits of each index, most significant first, shape (N, width)."""
    out = np.empty((indices.shape[0], width), dtype=np.int64)
    rest = np.array(indices, dtype=np.int64, copy=True)
    for pos in range(width - 1, -1, -1):
        rest, out[:, pos] = np.divmod(rest, base)
    return out


def span_chunk(F, basis: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Elements start..stop-1 of the span of `basis` (rows), lexicographic in the coefficients."""
    basis = np.asarray(basis, dtype=np.int64)
    dim, n = basis.shape
    coef = index_digits(np.arange(start, stop, dtype=np.int64), F.order, dim)
    if F.is_prime_field:
        return (coef @ basis) % F.p
    out = np.zeros((stop - start, n), dtype=np.int64)
    for i in range(dim):
        out = F.add(out, F.mul(coef[:, i, None], basis[i][None, :]))
    return out


def iter_span(F, basis: np.ndarray, chunk: int = 1 << 16):
    """Yield the span of `basis` in deterministic chunks of row vectors."""
    basis = np.asarray(basis, dtype=np.int64)
    total = F.order ** basis.shape[0]
    for start in range(0, total, chunk):
        yield span_chunk(F, basis, start, min(total, start + chunk))
