"""Gabidulin codes: F_{q^m}-linear subspaces of F_{q^m}^k.

Includes the expansion of vectors and codes to matrices over F_q with
respect to a basis, the Gabidulin dual, linearized polynomials and the
evaluation construction of MRD codes.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .delsarte import DelsarteCode, dual
from .finite_field import ExtensionSpec, FieldBasis, FieldElement, FieldError, FieldMismatchError, FiniteField
from .matrix_space import MatrixFq
from .qcalc import RankDistribution


def _values(ext: FiniteField, items: Iterable) -> list[int]:
    out = []
    for x in items:
        if isinstance(x, FieldElement):
            out.append(ext(x).value)
        elif isinstance(x, str):
            out.append(ext.parse(x))
        else:
            out.append(int(x))
    return out


class GabidulinCode:
    """An F_{q^m}-linear subspace of F_{q^m}^k held by its rref generator matrix."""

    __slots__ = ("ext", "k", "basis")

    def __init__(self, ext: ExtensionSpec, k: int, vectors=None):
        if vectors is None or len(vectors) == 0:
            basis = np.zeros((0, k), dtype=np.int64)
        else:
            rows = np.array([_values(ext, v) for v in vectors], dtype=np.int64).reshape(-1, k)
            basis = linalg.rref(ext, rows, k)[0]
        basis.flags.writeable = False
        object.__setattr__(self, "ext", ext)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("GabidulinCode is immutable")

    @classmethod
    def zero(cls, ext: ExtensionSpec, k: int) -> GabidulinCode:
        return cls(ext, k)

    @classmethod
    def full(cls, ext: ExtensionSpec, k: int) -> GabidulinCode:
        return cls(ext, k, np.eye(k, dtype=np.int64))

    @property
    def m(self) -> int:
        return self.ext.degree

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def generators(self) -> list[tuple[FieldElement, ...]]:
        return [tuple(FieldElement(self.ext, int(v)) for v in row) for row in self.basis]

    def iter_codewords(self, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        yield from linalg.iter_span(self.ext, self.basis, chunk)

    def contains(self, vec) -> bool:
        v = np.array(_values(self.ext, vec), dtype=np.int64).reshape(1, -1)
        return linalg.rank(self.ext, np.vstack([self.basis, v])) == self.dim

    __contains__ = contains

    def __eq__(self, other):
        return (
            isinstance(other, GabidulinCode)
            and other.ext == self.ext
            and other.k == self.k
            and np.array_equal(other.basis, self.basis)
        )

    def __hash__(self):
        return hash((self.ext, self.k, self.basis.tobytes()))

    def __repr__(self):
        return f"GabidulinCode({self.ext}, k={self.k}, dim={self.dim})"


def code_from_vectors(ext: ExtensionSpec, vectors: Sequence, k: int | None = None) -> GabidulinCode:
    if not vectors and k is None:
        raise ValueError("an empty generator list needs the length k")
    k = len(vectors[0]) if k is None else k
    return GabidulinCode(ext, k, list(vectors))


def vector_rank(a: Sequence, ext: FiniteField | None = None) -> int:
    """dim over F_q of the span of the entries of a."""
    if ext is None:
        ext = next(x.field for x in a if isinstance(x, FieldElement))
    vals = np.array(_values(ext, a), dtype=np.int64)
    return linalg.rank(ext.base, ext.coord_array(vals))


def _batch_vector_rank(ext: FiniteField, words: np.ndarray) -> np.ndarray:
    return linalg.batch_rank(ext.base, ext.coord_array(words))


def expand_matrix(a: Sequence, G: FieldBasis) -> MatrixFq:
    """The k x m matrix whose i-th row holds the coordinates of a_i in the basis G."""
    vals = np.array(_values(G.field, a), dtype=np.int64)
    return MatrixFq(G.field.base, G.coords(vals).reshape(len(vals), G.field.degree))


def expand_code(C: GabidulinCode, G: FieldBasis) -> DelsarteCode:
    """C_G(C): expansions of gamma_j * g over all generators g and basis elements gamma_j."""
    if G.field != C.ext:
        raise FieldMismatchError(f"basis of {G.field} used with a code over {C.ext}")
    ext = C.ext
    gens = []
    for row in C.basis:
        for gamma in G.values:
            gens.append(G.coords(ext.mul(row, gamma)).reshape(-1))
    return DelsarteCode(ext.base, C.k, ext.degree, gens)


def gabidulin_dual(C: GabidulinCode) -> GabidulinCode:
    """C-perp under the standard inner product of F_{q^m}^k."""
    return GabidulinCode(C.ext, C.k, linalg.nullspace(C.ext, C.basis, C.k))


def inner_product(a: Sequence, b: Sequence, ext: FiniteField) -> FieldElement:
    return FieldElement(ext, linalg.dot(ext, _values(ext, a), _values(ext, b)))


def rank_distribution_direct(C: GabidulinCode) -> RankDistribution:
    """Rank distribution from the vector ranks of the F_{q^m}-codewords themselves."""
    n = min(C.k, C.m) + 1
    counts = np.zeros(n, dtype=np.int64)
    for block in C.iter_codewords():
        counts += np.bincount(_batch_vector_rank(C.ext, block), minlength=n)
    return RankDistribution(C.ext.base.order, C.k, C.m, tuple(int(c) for c in counts))


class LinearizedPoly:
    """p(x) = sum_i coeffs[i] * x^(q^i) over F_{q^m}."""

    __slots__ = ("ext", "coeffs")

    def __init__(self, ext: ExtensionSpec, coeffs: Sequence):
        vals = _values(ext, coeffs)
        while vals and vals[-1] == 0:
            vals.pop()
        object.__setattr__(self, "ext", ext)
        object.__setattr__(self, "coeffs", tuple(vals))

    def __setattr__(self, name, value):
        raise AttributeError("LinearizedPoly is immutable")

    @property
    def degree(self) -> int:
        """Largest i with a non-zero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, a):
        ext = self.ext
        arr = a.value if isinstance(a, FieldElement) else a
        acc = np.zeros_like(np.asarray(arr, dtype=np.int64))
        for i, c in enumerate(self.coeffs):
            if c:
                acc = ext.add(acc, ext.mul(c, ext.frobenius(arr, i)))
        if isinstance(a, FieldElement):
            return FieldElement(ext, int(acc))
        return int(acc) if np.ndim(acc) == 0 else acc

    def compose(self, inner: LinearizedPoly) -> LinearizedPoly:
        """(self o inner)(x) = self(inner(x))."""
        ext = self.ext
        out = [0] * (len(self.coeffs) + len(inner.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(inner.coeffs):
                if a and b:
                    out[i + j] = ext.add(out[i + j], ext.mul(a, ext.frobenius(b, i)))
        return LinearizedPoly(ext, out)

    def ordinary_coeffs(self) -> list[int]:
        """Coefficients of the ordinary polynomial, low degree first."""
        if not self.coeffs:
            return []
        q = self.ext.base_order
        out = [0] * (q ** (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            out[q**i] = c
        return out

    def __eq__(self, other):
        return isinstance(other, LinearizedPoly) and other.ext == self.ext and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.ext, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "x" if i == 0 else f"x^(q^{i})"
                terms.append(mono if c == 1 else f"({self.ext.format(c)})*{mono}")
        return " + ".join(reversed(terms))


def linearized_eval(p: LinearizedPoly, a):
    return p(a)


def roots(p: LinearizedPoly) -> list[int]:
    """All roots of p in F_{q^m}, by exhaustive scan."""
    allv = np.arange(p.ext.order, dtype=np.int64)
    return np.flatnonzero(p(allv) == 0).tolist()


def roots_space(p: LinearizedPoly) -> tuple[FieldElement, ...]:
    """A canonical F_q-basis of the root space V(p)."""
    ext = p.ext
    rs = roots(p)
    B = linalg.rref(ext.base, ext.coord_array(np.array(rs, dtype=np.int64)), ext.degree)[0]
    return tuple(FieldElement(ext, ext.from_coords(row)) for row in B.tolist())


def subspace_polynomial(ext: ExtensionSpec, generators: Iterable) -> LinearizedPoly:
    """The monic linearized polynomial whose roots are exactly span_{F_q}(generators).

    Built by p_{U + F_q b} = (x^q - p_U(b)^(q-1) x) o p_U.  A set or
    frozenset is taken to be the whole subspace U and must be closed under
    addition and base-field scaling.
    """
    q = ext.base_order
    vals = _values(ext, generators)
    for b in vals:
        if not 0 <= b < ext.order:
            raise FieldError(f"{b} is not an element of {ext}")
    if isinstance(generators, (set, frozenset)):
        U = set(vals) | {0}
        for a in U:
            for c in range(1, q):
                if ext.mul(c, a) not in U:
                    raise ValueError("set is not closed under scaling by the base field")
            for b in U:
                if ext.add(a, b) not in U:
                    raise ValueError("set is not closed under addition")
    p = LinearizedPoly(ext, [1])
    for b in vals:
        c = p(b)
        if c == 0:
            continue  # b already lies in the span
        p = LinearizedPoly(ext, [ext.neg(ext.pow(c, q - 1)), 1]).compose(p)
    return p


def literal_product(ext: FiniteField, elements: Iterable) -> list[int]:
    """Ordinary coefficients (low degree first) of prod_b (x - b)."""
    out = [1]
    for b in _values(ext, elements):
        nb = ext.neg(b)
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] = ext.add(nxt[i + 1], c)
            nxt[i] = ext.add(nxt[i], ext.mul(c, nb))
        out = nxt
    return out


def evaluation_code(ext: ExtensionSpec, d: int, points: Sequence | None = None, k: int | None = None) -> GabidulinCode:
    """Image of the evaluation map on linearized polynomials of degree <= k - d.

    `points` are gamma_1..gamma_k, linearly independent over F_q; by default
    the first k powers 1, z, z^2, ... of the defining root.
    """
    m = ext.degree
    if points is None:
        if k is None:
            raise ValueError("give either the evaluation points or the length k")
        if k > m:
            raise ValueError(f"k = {k} exceeds m = {m}")
        pts = [ext.base_order**i for i in range(k)]
    else:
        pts = _values(ext, points)
        if k is not None and k != len(pts):
            raise ValueError("k disagrees with the number of points")
    k = len(pts)
    if not 1 <= d <= k <= m:
        raise ValueError(f"need 1 <= d <= k <= m, got d={d}, k={k}, m={m}")
    if linalg.rank(ext.base, ext.coord_array(np.array(pts, dtype=np.int64))) != k:
        raise ValueError("evaluation points are not linearly independent over the base field")
    pts_arr = np.array(pts, dtype=np.int64)
    gens = [ext.frobenius(pts_arr, i) for i in range(k - d + 1)]
    return GabidulinCode(ext, k, gens)


def check_orthobasis_duality(C: GabidulinCode, G: FieldBasis) -> bool:
    """Whether C_{G'}(C-perp) == C_G(C)-perp with G' the trace-dual basis of G."""
    return expand_code(gabidulin_dual(C), G.dual()) == dual(expand_code(C, G))


def random_basis(ext: ExtensionSpec, rng: np.random.Generator) -> FieldBasis:
    while True:
        vals = rng.integers(1, ext.order, size=ext.degree).tolist()
        try:
            return FieldBasis(ext, vals)
        except FieldError:
            continue


def random_points(ext: ExtensionSpec, k: int, rng: np.random.Generator) -> list[int]:
    """k elements of F_{q^m} that are linearly independent over F_q."""
    if k > ext.degree:
        raise ValueError("at most m independent points exist")
    while True:
        vals = rng.integers(1, ext.order, size=k)
        if linalg.rank(ext.base, ext.coord_array(vals)) == k:
            return vals.tolist()


def random_gabidulin_code(ext: ExtensionSpec, k: int, dim: int, rng: np.random.Generator) -> GabidulinCode:
    while True:
        C = GabidulinCode(ext, k, rng.integers(0, ext.order, size=(dim, k)))
        if C.dim == dim:
            return C
