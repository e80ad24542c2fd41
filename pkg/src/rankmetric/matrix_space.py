"""Matrices over a finite field and the subspace constructions built on them.

Covers rank, the trace product <M, N> = Tr(M N^t), the h-trace, column
spaces, orthogonal complements in F_q^k and the spaces Mat_U(k x m, F_q) of
matrices whose column space lies in a fixed subspace U.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence

import numpy as np

from . import linalg
from .finite_field import FieldElement, FieldError, FieldMismatchError, FiniteField


def _entries(field: FiniteField, rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return np.array(rows, dtype=np.int64)
    out = []
    for row in rows:
        out.append([field(x).value if isinstance(x, (FieldElement, str)) else int(x) for x in row])
    return np.array(out, dtype=np.int64)


class MatrixFq:
    """An immutable k x m matrix over a finite field (entries are field encodings)."""

    __slots__ = ("field", "entries")

    def __init__(self, field: FiniteField, entries):
        arr = _entries(field, entries)
        if arr.ndim != 2:
            raise ValueError(f"a matrix needs a 2-d array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise FieldError(f"matrix entries out of range for {field}")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixFq is immutable")

    @classmethod
    def zeros(cls, field: FiniteField, k: int, m: int) -> MatrixFq:
        return cls(field, np.zeros((k, m), dtype=np.int64))

    @classmethod
    def identity(cls, field: FiniteField, k: int, m: int | None = None) -> MatrixFq:
        return cls(field, np.eye(k, k if m is None else m, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> MatrixFq:
        return MatrixFq(self.field, self.entries.T)

    def transpose(self) -> MatrixFq:
        return self.T

    def rank(self) -> int:
        return linalg.rank(self.field, self.entries)

    def flatten(self) -> np.ndarray:
        """Row-major flattening into F_q^(km)."""
        return self.entries.reshape(-1).copy()

    def _check(self, other: MatrixFq) -> None:
        if not isinstance(other, MatrixFq):
            raise TypeError(f"expected a MatrixFq, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"matrices over {self.field} and {other.field}")

    def __add__(self, other: MatrixFq) -> MatrixFq:
        self._check(other)
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        return MatrixFq(self.field, self.field.add(self.entries, other.entries))

    def __sub__(self, other: MatrixFq) -> MatrixFq:
        self._check(other)
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        return MatrixFq(self.field, self.field.sub(self.entries, other.entries))

    def __neg__(self) -> MatrixFq:
        return MatrixFq(self.field, self.field.neg(self.entries))

    def scale(self, c) -> MatrixFq:
        c = self.field(c).value if isinstance(c, FieldElement) else int(c)
        return MatrixFq(self.field, self.field.mul(self.entries, c))

    def __matmul__(self, other: MatrixFq) -> MatrixFq:
        self._check(other)
        return MatrixFq(self.field, linalg.matmul(self.field, self.entries, other.entries))

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, int(self.entries[i, j]))

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFq)
            and other.field == self.field
            and other.shape == self.shape
            and np.array_equal(other.entries, self.entries)
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.entries.tobytes()))

    def to_text(self) -> str:
        return "; ".join(", ".join(self.field.format(v) for v in row) for row in self.entries.tolist())

    def __repr__(self):
        return f"MatrixFq[{self.to_text()}]"


def parse_matrix(field: FiniteField, text: str) -> MatrixFq:
    """Rows separated by ';' (or newlines), entries by ','."""
    rows = [r for r in text.replace("\n", ";").split(";") if r.strip()]
    data = [[field.parse(x) for x in r.split(",")] for r in rows]
    if len({len(r) for r in data}) > 1:
        raise ValueError("ragged matrix rows")
    return MatrixFq(field, data)


class VectorSubspace:
    """A subspace of F^k held by its reduced row echelon basis."""

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: FiniteField, ambient_dim: int, vectors=()):
        arr = np.array([list(v) if not isinstance(v, np.ndarray) else v for v in vectors], dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, ambient_dim), dtype=np.int64)
        elif arr.ndim != 2 or arr.shape[1] != ambient_dim:
            raise ValueError(f"vectors must have length {ambient_dim}")
        basis = linalg.rref(field, arr, ambient_dim)[0]
        basis.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("VectorSubspace is immutable")

    @classmethod
    def zero(cls, field: FiniteField, k: int) -> VectorSubspace:
        return cls(field, k)

    @classmethod
    def full(cls, field: FiniteField, k: int) -> VectorSubspace:
        return cls(field, k, np.eye(k, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def dual(self) -> VectorSubspace:
        return VectorSubspace(self.field, self.ambient_dim, linalg.nullspace(self.field, self.basis, self.ambient_dim))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return linalg.rank(self.field, np.vstack([self.basis, v])) == self.dim

    __contains__ = contains

    def __add__(self, other: VectorSubspace) -> VectorSubspace:
        return VectorSubspace(self.field, self.ambient_dim, np.vstack([self.basis, other.basis]))

    def intersect(self, other: VectorSubspace) -> VectorSubspace:
        return (self.dual() + other.dual()).dual()

    def elements(self) -> Iterator[np.ndarray]:
        for chunk in linalg.iter_span(self.field, self.basis):
            yield from chunk

    def __eq__(self, other):
        return (
            isinstance(other, VectorSubspace)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and np.array_equal(other.basis, self.basis)
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        vecs = ", ".join("(" + ",".join(self.field.format(x) for x in row) + ")" for row in self.basis.tolist())
        return f"span{{{vecs}}}"


def rank(M: MatrixFq) -> int:
    return M.rank()


def trace_product(M: MatrixFq, N: MatrixFq) -> FieldElement:
    """<M, N> = Tr(M N^t)."""
    M._check(N)
    if M.shape != N.shape:
        raise ValueError(f"shape mismatch {M.shape} vs {N.shape}")
    P = linalg.matmul(M.field, M.entries, N.entries.T)
    acc = 0
    for i in range(P.shape[0]):
        acc = M.field.add(acc, int(P[i, i]))
    return FieldElement(M.field, acc)


def column_sum_product(M: MatrixFq, N: MatrixFq) -> FieldElement:
    """Sum over columns of the standard inner products M_i . N_i."""
    M._check(N)
    if M.shape != N.shape:
        raise ValueError(f"shape mismatch {M.shape} vs {N.shape}")
    acc = 0
    for i in range(M.m):
        acc = M.field.add(acc, linalg.dot(M.field, M.entries[:, i], N.entries[:, i]))
    return FieldElement(M.field, acc)


def h_trace(M: MatrixFq, h: int) -> FieldElement:
    """Sum of the first h diagonal entries; 1 <= h <= min(k, m)."""
    if not 1 <= h <= min(M.shape):
        raise ValueError(f"h must lie in [1, {min(M.shape)}], got {h}")
    acc = 0
    for i in range(h):
        acc = M.field.add(acc, int(M.entries[i, i]))
    return FieldElement(M.field, acc)


def column_space(M: MatrixFq) -> VectorSubspace:
    return VectorSubspace(M.field, M.k, M.entries.T)


def subspace_dual(U: VectorSubspace) -> VectorSubspace:
    return U.dual()


def mat_u_basis(U: VectorSubspace, m: int) -> list[MatrixFq]:
    """The matrices u e_j^t (u a basis vector of U, j < m); they span Mat_U(k x m)."""
    out = []
    for u in U.basis:
        for j in range(m):
            E = np.zeros((U.ambient_dim, m), dtype=np.int64)
            E[:, j] = u
            out.append(MatrixFq(U.field, E))
    return out


def enumerate_subspaces(field: FiniteField, k: int, dim: int | None = None) -> Iterator[VectorSubspace]:
    """Every subspace of F^k (of the given dimension), via pivot patterns of rref bases."""
    dims = range(k + 1) if dim is None else [dim]
    q = field.order
    for d in dims:
        for pivots in itertools.combinations(range(k), d):
            free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, k) if j not in pivots]
            for vals in itertools.product(range(q), repeat=len(free)):
                B = np.zeros((d, k), dtype=np.int64)
                for i, p in enumerate(pivots):
                    B[i, p] = 1
                for (i, j), v in zip(free, vals):
                    B[i, j] = v
                yield VectorSubspace(field, k, B)


def random_matrix(field: FiniteField, k: int, m: int, rng: np.random.Generator) -> MatrixFq:
    return MatrixFq(field, rng.integers(0, field.order, size=(k, m)))


def random_invertible(field: FiniteField, n: int, rng: np.random.Generator) -> MatrixFq:
    while True:
        M = random_matrix(field, n, n, rng)
        if M.rank() == n:
            return M


def rank_normal_form(M: MatrixFq) -> tuple[MatrixFq, MatrixFq, int]:
    """Invertible R (k x k), C (m x m) with R M C = [[I_r, 0], [0, 0]]."""
    F = M.field
    E, R = linalg.rref_with_transform(F, M.entries)
    _, R2 = linalg.rref_with_transform(F, E.T)
    return MatrixFq(F, R), MatrixFq(F, R2.T), len(linalg.rref(F, E)[1])


def equivalence_transform(N: MatrixFq, A: MatrixFq) -> tuple[MatrixFq, MatrixFq]:
    """Invertible P, Q with N = P A Q; N and A must have equal shape and rank."""
    if N.shape != A.shape:
        raise ValueError("shape mismatch")
    RN, CN, rn = rank_normal_form(N)
    RA, CA, ra = rank_normal_form(A)
    if rn != ra:
        raise ValueError(f"ranks differ ({rn} vs {ra})")
    F = N.field
    P = MatrixFq(F, linalg.inverse(F, RN.entries)) @ RA
    Q = CA @ MatrixFq(F, linalg.inverse(F, CN.entries))
    return P, Q


def as_matrices(field: FiniteField, mats: Sequence) -> list[MatrixFq]:
    return [M if isinstance(M, MatrixFq) else MatrixFq(field, M) for M in mats]
