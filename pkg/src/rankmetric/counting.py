"""Counting k x m matrices over F_q by rank and h-trace.

n(r, h) is the number of rank-r matrices whose first h diagonal entries sum
to zero; h = 0 means no trace condition.  Queries with k > m are answered
with k and m swapped, since transposition preserves both rank and h-trace.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import linalg, qcalc
from .finite_field import FieldElement, field_for_order
from .qcalc import q_binomial

CENSUS_BUDGET = 1 << 24


@dataclass(frozen=True)
class CensusQuery:
    q: int
    k: int
    m: int
    r: int
    h: int = 0

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be a prime power >= 2")
        field_for_order(self.q)
        if self.k > self.m:
            k, m = self.m, self.k
            object.__setattr__(self, "k", k)
            object.__setattr__(self, "m", m)
        if self.k < 1:
            raise ValueError("k and m must be positive")
        if not 0 <= self.r <= self.k:
            raise ValueError(f"rank r must lie in [0, {self.k}], got {self.r}")
        if not 0 <= self.h <= self.k:
            raise ValueError(f"trace depth h must lie in [0, {self.k}], got {self.h}")


def _pair(n: int) -> int:
    return n * (n - 1) // 2


def count_rank(q: int, k: int, m: int, r: int) -> int:
    """[m, r]_q * prod_{i<r} (q^k - q^i)."""
    Q = CensusQuery(q, k, m, r)
    out = q_binomial(q, Q.m, r)
    for i in range(r):
        out *= q**Q.k - q**i
    return out


def _needs_h(h: int) -> None:
    if h < 1:
        raise ValueError("the h-trace counts need h >= 1; use count_rank for h = 0")


def count_rank_htrace_recursive(q: int, k: int, m: int, r: int, h: int) -> int:
    """Rank-r matrices with zero h-trace, as B_r of the dual of the code spanned by
    the partial identity diag(1,..,1,0,..) with h ones."""
    Q = CensusQuery(q, k, m, r, h)
    _needs_h(Q.h)
    A = [0] * (Q.k + 1)
    A[0], A[Q.h] = 1, q - 1
    return qcalc.dual_distribution_recursive(A, 1, q, Q.k, Q.m)[r]


def count_rank_htrace_explicit(q: int, k: int, m: int, r: int, h: int) -> int:
    """(1/q) sum_s (-1)^(r-s) q^(ms + C(r-s,2)) [k-s, k-r] ([k, s] + (q-1)[k-h, s])."""
    Q = CensusQuery(q, k, m, r, h)
    _needs_h(Q.h)
    k, m = Q.k, Q.m
    total = 0
    for s in range(r + 1):
        inner = q_binomial(q, k, s) + (q - 1) * q_binomial(q, k - Q.h, s)
        total += (-1) ** (r - s) * q ** (m * s + _pair(r - s)) * q_binomial(q, k - s, k - r) * inner
    out, rem = divmod(total, q)
    if rem:
        raise ArithmeticError("h-trace count is not divisible by q")  # pragma: no cover
    return out


def count_rank_trace_value(q: int, k: int, m: int, r: int, h: int, value, method: str = "recursive") -> int:
    """Rank-r matrices whose h-trace equals the given non-zero value.

    The count does not depend on the value: scaling by a non-zero constant
    permutes the non-zero trace classes.
    """
    v = value.value if isinstance(value, FieldElement) else int(value)
    if not 0 <= v < q:
        raise ValueError(f"{value} is not an element of GF({q})")
    if v == 0:
        raise ValueError("value must be non-zero; use the h-trace counts for zero")
    Q = CensusQuery(q, k, m, r, h)
    _needs_h(Q.h)
    zero = (count_rank_htrace_explicit if method == "explicit" else count_rank_htrace_recursive)(q, k, m, r, h)
    out, rem = divmod(count_rank(q, k, m, r) - zero, q - 1)
    if rem:
        raise ArithmeticError("non-zero trace count is not divisible by q - 1")  # pragma: no cover
    return out


@dataclass
class Census:
    """Exhaustive table: counts[h][r, t] = #{rank r, h-trace t}; counts[0] holds ranks only."""

    q: int
    k: int
    m: int
    counts: dict[int, np.ndarray] = field(default_factory=dict)

    def rank_marginal(self) -> list[int]:
        return [int(c) for c in self.counts[0][:, 0]]

    def n(self, r: int, h: int, value: int = 0) -> int:
        if h == 0:
            return int(self.counts[0][r, 0])
        return int(self.counts[h][r, value])

    def rows(self) -> list[tuple[int, int, int, int, int, int, int]]:
        """(q, k, m, r, h, trace_value, count), h = 0 rows carrying trace_value 0."""
        out = []
        for h in range(self.k + 1):
            for r in range(self.k + 1):
                values = [0] if h == 0 else range(self.q)
                for t in values:
                    out.append((self.q, self.k, self.m, r, h, t, self.n(r, h, t)))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "k", "m", "r", "h", "trace_value", "count"])
        w.writerows(self.rows())
        return buf.getvalue()


def census_bruteforce(q: int, k: int, m: int, budget: int = CENSUS_BUDGET, chunk: int = 1 << 16) -> Census:
    """Enumerate all q^(km) matrices and bucket them by rank and every h-trace."""
    if k > m:
        k, m = m, k
    if k < 1:
        raise ValueError("k and m must be positive")
    F = field_for_order(q)
    total = q ** (k * m)
    if total > budget:
        from .delsarte import BudgetExceeded

        raise BudgetExceeded(f"q^(km) = {total} matrices exceed the budget of {budget}")
    counts = {h: np.zeros((k + 1, q), dtype=np.int64) for h in range(k + 1)}
    diag = [i * m + i for i in range(k)]
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        mats = linalg.index_digits(np.arange(start, stop, dtype=np.int64), q, k * m)
        ranks = linalg.batch_rank(F, mats.reshape(-1, k, m))
        counts[0][:, 0] += np.bincount(ranks, minlength=k + 1)
        tr = np.zeros(stop - start, dtype=np.int64)
        for h in range(1, k + 1):
            tr = F.add(tr, mats[:, diag[h - 1]])
            counts[h] += np.bincount(ranks * q + tr, minlength=(k + 1) * q).reshape(k + 1, q)
    return Census(q, k, m, counts)
