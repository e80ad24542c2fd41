"""Gaussian binomials and the MacWilliams machinery for rank distributions.

All quantities are exact Python integers.  Transforms take the rank
distribution A of a code C in Mat(k x m, F_q) with k <= m, together with
dim C, and return the rank distribution of C-perp.
"""

from __future__ import annotations

import threading
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction


class TransformError(ValueError):
    """The input cannot be the rank distribution of a linear code of that dimension."""


@dataclass(frozen=True)
class RankDistribution:
    """Exact counts A_0..A_min(k,m) of codewords by rank."""

    q: int
    k: int
    m: int
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        n = min(self.k, self.m) + 1
        if len(counts) < n:
            counts = counts + (0,) * (n - len(counts))
        if len(counts) > n and any(counts[n:]):
            raise ValueError(f"ranks above min(k, m) = {n - 1} must have zero count")
        object.__setattr__(self, "counts", counts[:n])

    def __getitem__(self, i: int) -> int:
        return self.counts[i] if 0 <= i < len(self.counts) else 0

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def transposed(self) -> RankDistribution:
        return RankDistribution(self.q, self.m, self.k, self.counts)


class QBinomialTable:
    """Memoised Gaussian binomials [s, t]_q built row by row from
    [s, t] = [s-1, t-1] + q^t [s-1, t]."""

    def __init__(self, q: int):
        if q < 2:
            raise ValueError("q must be at least 2")
        self.q = q
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, s: int) -> None:
        with self._lock:
            q = self.q
            while len(self._rows) <= s:
                prev = self._rows[-1]
                n = len(prev)
                row = [1] * (n + 1)
                for t in range(1, n):
                    row[t] = prev[t - 1] + q**t * prev[t]
                self._rows.append(row)

    def __call__(self, s: int, t: int) -> int:
        if s < 0 or t < 0 or t > s:
            return 0
        if s >= len(self._rows):
            self._grow(s)
        return self._rows[s][t]


_TABLES: dict[int, QBinomialTable] = {}
_TABLES_LOCK = threading.Lock()


def _table(q: int) -> QBinomialTable:
    tab = _TABLES.get(q)
    if tab is None:
        with _TABLES_LOCK:
            tab = _TABLES.setdefault(q, QBinomialTable(q))
    return tab


def q_binomial(q: int, s: int, t: int) -> int:
    """Number of t-dimensional subspaces of F_q^s (0 outside 0 <= t <= s)."""
    return _table(q)(s, t)


def q_binomial_product(q: int, s: int, t: int) -> int:
    """The same coefficient from the product of (q^(s-i+1) - 1)/(q^i - 1)."""
    if s < 0 or t < 0 or t > s:
        return 0
    num = den = 1
    for i in range(1, t + 1):
        num *= q ** (s - i + 1) - 1
        den *= q**i - 1
    quot, rem = divmod(num, den)
    assert rem == 0
    return quot


def _pair_binom(n: int) -> int:
    return n * (n - 1) // 2


def q_binomial_alternating_sum(q: int, n: int) -> int:
    """sum_r [n, r] (-1)^r q^C(r,2); equals 1 for n = 0 and 0 otherwise."""
    return sum(q_binomial(q, n, r) * (-1) ** r * q ** _pair_binom(r) for r in range(n + 1))


def _unpack(A, q, k, m):
    counts = getattr(A, "counts", None)
    if counts is not None:
        q = A.q if q is None else q
        k = min(A.k, A.m) if k is None else k
        m = max(A.k, A.m) if m is None else m
    else:
        counts = tuple(A)
    if q is None or k is None or m is None:
        raise ValueError("q, k and m are required for a bare sequence")
    if k > m:
        raise ValueError(f"transform expects k <= m (got k={k}, m={m}); transpose first")
    counts = tuple(int(c) for c in counts)
    if len(counts) > k + 1 and any(counts[k + 1:]):
        raise TransformError(f"non-zero counts above rank {k}")
    counts = (counts + (0,) * (k + 1))[: k + 1]
    return counts, q, k, m


def _result(q, k, m, counts):
    return RankDistribution(q, k, m, tuple(counts))


def moment_lhs(A: Sequence[int], k: int, q: int, nu: int) -> int:
    """sum_i A_i [k-i, nu]."""
    return sum(a * q_binomial(q, k - i, nu) for i, a in enumerate(A))


def moment_rhs(B: Sequence[int], size: int, k: int, m: int, q: int, nu: int) -> Fraction:
    """(|C| / q^(m nu)) sum_j B_j [k-j, nu-j]."""
    s = sum(b * q_binomial(q, k - j, nu - j) for j, b in enumerate(B))
    return Fraction(size * s, q ** (m * nu))


def _check_input(counts, dim, q):
    if any(c < 0 for c in counts):
        raise TransformError("negative count in rank distribution")
    if sum(counts) != q**dim:
        raise TransformError(f"counts sum to {sum(counts)}, expected q^{dim} = {q ** dim}")
    if counts[0] != 1:
        raise TransformError("a linear code has exactly one codeword of rank 0")


def _check_output(B, k, m, dim, q):
    if any(b < 0 for b in B):
        raise TransformError(f"transform produced negative counts {B}")
    if sum(B) != q ** (k * m - dim):
        raise TransformError("transform output does not sum to the dual size")  # pragma: no cover


def dual_distribution_recursive(A, dim: int, q: int | None = None, k: int | None = None, m: int | None = None):
    """Rank distribution of C-perp by the moment recursion

        B_0 = 1,  B_nu = a_nu - sum_{j<nu} B_j [k-j, nu-j],
        a_nu = q^(m nu) / |C| * sum_i A_i [k-i, nu].
    """
    counts, q, k, m = _unpack(A, q, k, m)
    _check_input(counts, dim, q)
    size = q**dim
    B = [1]
    for nu in range(1, k + 1):
        a_nu, rem = divmod(q ** (m * nu) * moment_lhs(counts, k, q, nu), size)
        if rem:
            raise TransformError(f"a_{nu} is not an integer")
        B.append(a_nu - sum(B[j] * q_binomial(q, k - j, nu - j) for j in range(nu)))
    _check_output(B, k, m, dim, q)
    return _result(q, k, m, B)


def dual_distribution_explicit(A, dim: int, q: int | None = None, k: int | None = None, m: int | None = None):
    """Rank distribution of C-perp in closed form:

        B_j = 1/|C| sum_i A_i sum_s (-1)^(j-s) q^(ms + C(j-s,2)) [k-s, k-j] [k-i, s].
    """
    counts, q, k, m = _unpack(A, q, k, m)
    _check_input(counts, dim, q)
    size = q**dim
    B = []
    for j in range(k + 1):
        total = 0
        for s in range(j + 1):
            inner = sum(a * q_binomial(q, k - i, s) for i, a in enumerate(counts))
            total += (-1) ** (j - s) * q ** (m * s + _pair_binom(j - s)) * q_binomial(q, k - s, k - j) * inner
        b, rem = divmod(total, size)
        if rem:
            raise TransformError(f"B_{j} is not an integer")
        B.append(b)
    _check_output(B, k, m, dim, q)
    return _result(q, k, m, B)


def mrd_distribution(q: int, k: int, m: int, d: int):
    """Rank distribution of any non-zero MRD code in Mat(k x m, F_q) with minimum rank d."""
    if not 1 <= k <= m:
        raise ValueError("mrd_distribution expects 1 <= k <= m")
    if not 1 <= d <= k:
        raise ValueError(f"minimum rank must lie in [1, {k}]")
    A = [0] * (k + 1)
    A[0] = 1
    for ell in range(k - d + 1):
        top = k - d - ell
        A[d + ell] = (q ** (m * (1 + ell)) - 1) * q_binomial(q, k, top) - sum(
            A[i] * q_binomial(q, k - i, top) for i in range(d, d + ell)
        )
    return _result(q, k, m, A)
