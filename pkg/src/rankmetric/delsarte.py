"""Delsarte rank-metric codes: F_q-linear subspaces of Mat(k x m, F_q).

A code is stored as the reduced row echelon basis of its row-major
flattening, so two codes are equal iff their stored bases are equal.  Under
this flattening the trace product is the standard dot product of F_q^(km),
which makes the dual a plain null space.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence

import numpy as np

from . import linalg, qcalc
from .qcalc import RankDistribution
from .finite_field import FiniteField, FieldMismatchError
from .matrix_space import MatrixFq, VectorSubspace, as_matrices, equivalence_transform, mat_u_basis, random_invertible

log = logging.getLogger(__name__)

DEFAULT_ENUM_BUDGET = 1 << 24
CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured codeword budget."""


class DelsarteCode:
    """An F_q-linear subspace of Mat(k x m, F_q)."""

    __slots__ = ("field", "k", "m", "basis")

    def __init__(self, field: FiniteField, k: int, m: int, vectors=None):
        if vectors is None or len(vectors) == 0:
            basis = np.zeros((0, k * m), dtype=np.int64)
        else:
            basis = linalg.rref(field, np.asarray(vectors, dtype=np.int64).reshape(-1, k * m), k * m)[0]
        basis.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("DelsarteCode is immutable")

    @classmethod
    def zero(cls, field: FiniteField, k: int, m: int) -> DelsarteCode:
        return cls(field, k, m)

    @classmethod
    def full(cls, field: FiniteField, k: int, m: int) -> DelsarteCode:
        return cls(field, k, m, np.eye(k * m, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.k, self.m)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.field.order**self.dim

    @property
    def generators(self) -> list[MatrixFq]:
        return [MatrixFq(self.field, row.reshape(self.k, self.m)) for row in self.basis]

    def iter_codewords(self, chunk: int = CHUNK) -> Iterator[np.ndarray]:
        """Codewords as (N, k, m) arrays, lexicographic in the basis coefficients."""
        for block in linalg.iter_span(self.field, self.basis, chunk):
            yield block.reshape(-1, self.k, self.m)

    def codewords(self) -> Iterator[MatrixFq]:
        for block in self.iter_codewords():
            for M in block:
                yield MatrixFq(self.field, M)

    def contains(self, M) -> bool:
        v = (M.entries if isinstance(M, MatrixFq) else np.asarray(M)).reshape(1, -1)
        return linalg.rank(self.field, np.vstack([self.basis, v])) == self.dim

    __contains__ = contains

    def _compatible(self, other: DelsarteCode) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"codes over {self.field} and {other.field}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        return (
            isinstance(other, DelsarteCode)
            and other.field == self.field
            and other.shape == self.shape
            and np.array_equal(other.basis, self.basis)
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.basis.tobytes()))

    def __repr__(self):
        return f"DelsarteCode({self.field}, {self.k}x{self.m}, dim={self.dim})"


def code_from_generators(mats: Sequence, field: FiniteField | None = None, shape: tuple[int, int] | None = None) -> DelsarteCode:
    """Canonical code spanned by the given matrices.

    `field` and `shape` are only needed when `mats` is empty or holds raw arrays.
    """
    if mats:
        if field is None:
            field = mats[0].field
        mats = as_matrices(field, mats)
        shapes = {M.shape for M in mats}
        if len(shapes) != 1 or (shape is not None and shapes != {tuple(shape)}):
            raise ValueError(f"generators have inconsistent shapes {sorted(shapes)}")
        if any(M.field != field for M in mats):
            raise FieldMismatchError("generators over different fields")
        k, m = mats[0].shape
        return DelsarteCode(field, k, m, [M.flatten() for M in mats])
    if field is None or shape is None:
        raise ValueError("an empty generator list needs field and shape")
    return DelsarteCode(field, *shape)


def dual(C: DelsarteCode) -> DelsarteCode:
    """C-perp under the trace product."""
    km = C.k * C.m
    return DelsarteCode(C.field, C.k, C.m, linalg.nullspace(C.field, C.basis, km))


def code_sum(C: DelsarteCode, D: DelsarteCode) -> DelsarteCode:
    C._compatible(D)
    return DelsarteCode(C.field, C.k, C.m, np.vstack([C.basis, D.basis]))


def intersect(C: DelsarteCode, D: DelsarteCode) -> DelsarteCode:
    C._compatible(D)
    return dual(code_sum(dual(C), dual(D)))


def transpose_code(C: DelsarteCode) -> DelsarteCode:
    gens = C.basis.reshape(-1, C.k, C.m).transpose(0, 2, 1).reshape(-1, C.k * C.m)
    return DelsarteCode(C.field, C.m, C.k, gens)


def transform_code(C: DelsarteCode, P: MatrixFq, Q: MatrixFq) -> DelsarteCode:
    """P C Q = {P M Q : M in C}."""
    gens = [(P @ M @ Q).flatten() for M in C.generators]
    return DelsarteCode(C.field, P.k, Q.m, gens)


def _enumerate_distribution(C: DelsarteCode) -> tuple[int, ...]:
    counts = np.zeros(min(C.k, C.m) + 1, dtype=np.int64)
    for block in C.iter_codewords():
        counts += np.bincount(linalg.batch_rank(C.field, block), minlength=counts.size)
    return tuple(int(c) for c in counts)


def rank_distribution_route(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[RankDistribution, str]:
    """Rank distribution and the route used: 'enumerate' or 'dual+transform'.

    C itself is enumerated when it fits the budget; otherwise C-perp is
    enumerated and its distribution pushed through the MacWilliams transform.
    """
    q = C.field.order
    kk, mm = min(C.k, C.m), max(C.k, C.m)
    if C.size <= budget:
        return RankDistribution(q, C.k, C.m, _enumerate_distribution(C)), "enumerate"
    D = dual(C)
    if D.size > budget:
        raise BudgetExceeded(f"both C (q^{C.dim}) and its dual (q^{D.dim}) exceed the budget of {budget} codewords")
    B = _enumerate_distribution(D)
    A = qcalc.dual_distribution_recursive(B, D.dim, q, kk, mm)
    log.info("rank distribution of dim-%d code obtained from its dual", C.dim)
    return RankDistribution(q, C.k, C.m, A.counts), "dual+transform"


def rank_distribution(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> RankDistribution:
    return rank_distribution_route(C, budget)[0]


def min_rank(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    if C.dim == 0:
        raise ValueError("the minimum rank is only defined for a non-zero code")
    A = rank_distribution(C, budget)
    return next(i for i in range(1, len(A)) if A[i])


def max_rank(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    if C.dim == 0:
        return 0
    A = rank_distribution(C, budget)
    return max(i for i in range(len(A)) if A[i])


def singleton_bound(k: int, m: int, d: int) -> int:
    """max(k, m) * (min(k, m) - d + 1): the largest dimension of a code of minimum rank d."""
    return max(k, m) * (min(k, m) - d + 1)


def is_mrd(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    if C.dim == 0:
        return True
    return C.dim == singleton_bound(C.k, C.m, min_rank(C, budget))


def is_optimal_anticode(C: DelsarteCode, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    return C.dim == max(C.k, C.m) * max_rank(C, budget)


def standard_anticode(field: FiniteField, k: int, m: int, D: int) -> DelsarteCode:
    """Matrices supported on the first D rows (k <= m) or first D columns (k > m)."""
    if not 0 <= D <= min(k, m):
        raise ValueError(f"D must lie in [0, {min(k, m)}]")
    gens = []
    for i in range(k):
        for j in range(m):
            if (i < D) if k <= m else (j < D):
                E = np.zeros((k, m), dtype=np.int64)
                E[i, j] = 1
                gens.append(E.ravel())
    return DelsarteCode(field, k, m, gens)


def mat_u_code(U: VectorSubspace, m: int) -> DelsarteCode:
    """Mat_U(k x m, F_q) as a code."""
    return DelsarteCode(U.field, U.ambient_dim, m, [M.flatten() for M in mat_u_basis(U, m)])


def random_code(field: FiniteField, k: int, m: int, dim: int, rng: np.random.Generator) -> DelsarteCode:
    if not 0 <= dim <= k * m:
        raise ValueError("dimension out of range")
    while True:
        C = DelsarteCode(field, k, m, rng.integers(0, field.order, size=(dim, k * m)))
        if C.dim == dim:
            return C


def _max_rank_word(C: DelsarteCode) -> MatrixFq | None:
    best, best_rank = None, 0
    for block in C.iter_codewords():
        ranks = linalg.batch_rank(C.field, block)
        i = int(ranks.argmax())
        if ranks[i] > best_rank:
            best, best_rank = block[i], int(ranks[i])
    return None if best is None else MatrixFq(C.field, best)


def _word_of_rank(C: DelsarteCode, r: int) -> MatrixFq:
    for block in C.iter_codewords():
        hits = np.flatnonzero(linalg.batch_rank(C.field, block) == r)
        if hits.size:
            return MatrixFq(C.field, block[hits[0]])
    raise ValueError(f"no codeword of rank {r}")


def mrd_intersection_test(C: DelsarteCode, trials: int = 64, rng: np.random.Generator | None = None) -> bool:
    """Sampled check that C meets every non-zero MRD code of minimum rank D+1 trivially.

    C must have dimension max(k, m) * D with D <= min(k, m) - 1.  Each trial
    builds an MRD code P.E.Q from an expanded evaluation code E.  Even
    trials align P, Q so that P E Q contains a maximum-rank codeword of C
    (if that rank exceeds D); odd trials draw P, Q at random.  Returns False
    as soon as some intersection is non-zero.
    """
    from .finite_field import ExtensionSpec, FieldBasis
    from .gabidulin import evaluation_code, expand_code, random_basis, random_points

    rng = rng if rng is not None else np.random.default_rng(0)
    if C.k > C.m:
        return mrd_intersection_test(transpose_code(C), trials, rng)
    k, m = C.k, C.m
    D, rem = divmod(C.dim, m)
    if rem or D > k - 1:
        raise ValueError(f"dimension {C.dim} is not max(k,m)*D with D <= min(k,m)-1")
    F = C.field
    ext = ExtensionSpec(F, m)
    witness = _max_rank_word(C)
    if witness is not None and witness.rank() <= D:
        witness = None
    for t in range(trials):
        points = random_points(ext, k, rng)
        G = random_basis(ext, rng) if t % 3 else FieldBasis.power(ext)
        E = expand_code(evaluation_code(ext, D + 1, points), G)
        if witness is not None and t % 2 == 0:
            A = _word_of_rank(E, witness.rank())
            P, Q = equivalence_transform(witness, A)
        else:
            P, Q = random_invertible(F, k, rng), random_invertible(F, m, rng)
        if intersect(C, transform_code(E, P, Q)).dim:
            return False
    return True
