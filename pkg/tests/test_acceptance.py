"""End-to-end acceptance gate: every criterion is an exact integer or field equality.

Each test records a PASS/FAIL verdict that is printed in the terminal summary.
"""

import pathlib
import time
from functools import lru_cache

import numpy as np
import pytest

from oracles import NaiveField, subspace_layers
from rankmetric.codefile import read_code
from rankmetric.counting import (
    census_bruteforce,
    count_rank,
    count_rank_htrace_explicit,
    count_rank_htrace_recursive,
    count_rank_trace_value,
)
from rankmetric.delsarte import (
    DelsarteCode,
    dual,
    is_mrd,
    is_optimal_anticode,
    mrd_intersection_test,
    random_code,
    rank_distribution,
    rank_distribution_route,
    standard_anticode,
    transform_code,
    transpose_code,
)
from rankmetric.finite_field import ExtensionSpec, FieldBasis, FieldSpec, field_for_order
from rankmetric.gabidulin import (
    GabidulinCode,
    evaluation_code,
    expand_code,
    expand_matrix,
    gabidulin_dual,
    inner_product,
    random_basis,
    random_points,
)
from rankmetric.matrix_space import MatrixFq, random_invertible, trace_product
from rankmetric.qcalc import (
    dual_distribution_explicit,
    dual_distribution_recursive,
    moment_lhs,
    moment_rhs,
    mrd_distribution,
    q_binomial,
    q_binomial_alternating_sum,
)

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

# n_4(3x4, r, h) as printed, rows h = 1, 2, 3 and columns r = 0..3
PRINTED_TABLE = {
    1: (1, 2283, 381780, 3810240),
    2: (1, 1515, 336468, 3856320),
    3: (1, 132, 337428, 3855552),
}


class Record:
    """A code together with both rank distributions, each read off by enumeration."""

    def __init__(self, C: DelsarteCode):
        self.code = C
        self.A = rank_distribution(C)
        self.B = rank_distribution(dual(C))


# -- 1 -------------------------------------------------------------------------------------------


def test_criterion_1_worked_example(report):
    t0 = time.perf_counter()
    C = read_code(DATA / "worked_example.rc").code
    A = rank_distribution(C)
    D = dual(C)
    B_enum, route = rank_distribution_route(D)
    B_rec = dual_distribution_recursive(A, C.dim, 3, 3, 4)
    B_exp = dual_distribution_explicit(A, C.dim, 3, 3, 4)
    elapsed = time.perf_counter() - t0
    ok = (
        C.dim == 3
        and A.counts == (1, 2, 0, 24)
        and route == "enumerate"
        and B_enum.counts == B_rec.counts == B_exp.counts == (1, 50, 3432, 16200)
        and elapsed < 1.0
    )
    report(1, ok, f"dim={C.dim} A={A.counts} B={B_enum.counts} (enumerate = recursive = explicit) in {elapsed:.2f}s")
    assert ok


# -- 2 -------------------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def table_by_formulas():
    t0 = time.perf_counter()
    rec = {h: tuple(count_rank_htrace_recursive(4, 3, 4, r, h) for r in range(4)) for h in (1, 2, 3)}
    exp = {h: tuple(count_rank_htrace_explicit(4, 3, 4, r, h) for r in range(4)) for h in (1, 2, 3)}
    return rec, exp, time.perf_counter() - t0


@lru_cache(maxsize=None)
def table_by_census():
    t0 = time.perf_counter()
    census = census_bruteforce(4, 3, 4)
    brute = {h: tuple(census.n(r, h) for r in range(4)) for h in (1, 2, 3)}
    return brute, time.perf_counter() - t0


def printed_mismatches(table):
    return [(h, r, PRINTED_TABLE[h][r], table[h][r]) for h in (1, 2, 3) for r in range(4) if table[h][r] != PRINTED_TABLE[h][r]]


def test_criterion_2_routes_and_consistency(report):
    rec, exp, t_formula = table_by_formulas()
    brute, t_brute = table_by_census()
    bad = printed_mismatches(rec)
    detail = (
        f"recursive = explicit ({t_formula:.3f}s) = brute force over 4^12 ({t_brute:.1f}s); "
        + ", ".join(f"n(r={r},h={h}) printed {p} computed {c}" for h, r, p, c in bad)
        + "; computed row sums to 4^11, printed row does not"
    )
    report(2, not bad, detail)

    assert rec == exp == brute
    assert t_formula < 1.0
    assert t_brute < 120.0
    # each row counts the km-1 dimensional space of zero h-trace matrices
    for h in (1, 2, 3):
        assert sum(rec[h]) == 4**11
    # 11 of the 12 printed entries agree; the remaining one is the printed 132
    assert [(h, r) for h, r, _, _ in bad] == [(3, 1)]
    assert rec[3][1] == 1323
    assert sum(PRINTED_TABLE[3]) == 4**11 - 1191


@pytest.mark.xfail(strict=True, reason="printed table entry n(r=1,h=3) = 132; every route gives 1323, "
                   "the only value for which the h = 3 row sums to 4^11")
def test_criterion_2_matches_printed_table():
    rec, exp, _ = table_by_formulas()
    brute, _ = table_by_census()
    for table in (rec, exp, brute):
        assert table == PRINTED_TABLE


# -- 3 -------------------------------------------------------------------------------------------


def test_criterion_3_expansion_example(report):
    t0 = time.perf_counter()
    F3 = FieldSpec(3)
    E = ExtensionSpec(F3, 2, (1, 2, 2))
    eta = E("z")
    xi = eta**2
    G = FieldBasis(E, [E.one, xi])
    alpha = [xi, E(2)]
    beta = [xi, E.one]
    M_a = expand_matrix(alpha, G)
    M_xa = expand_matrix([xi * a for a in alpha], G)
    M_b = expand_matrix(beta, G)
    C = GabidulinCode(E, 2, [alpha])
    CG_dual = dual(expand_code(C, G))
    same_basis = expand_code(gabidulin_dual(C), G)
    dual_basis = expand_code(gabidulin_dual(C), G.dual())
    elapsed = time.perf_counter() - t0
    ok = (
        xi * xi + E.one == E.zero
        and M_a == MatrixFq(F3, [[0, 1], [2, 0]])
        and M_xa == MatrixFq(F3, [[2, 0], [0, 2]])
        and M_b == MatrixFq(F3, [[0, 1], [1, 0]])
        and inner_product(alpha, beta, E) == E.one
        and trace_product(M_b, M_a) == F3.zero
        and trace_product(M_b, M_xa) == F3.zero
        and same_basis != CG_dual
        and dual_basis == CG_dual
        and elapsed < 1.0
    )
    report(3, ok, f"matrices reproduced, same-basis expansion unequal, trace-dual basis equal in {elapsed:.2f}s")
    assert ok


# -- 4 -------------------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def moment_codes() -> tuple[Record, ...]:
    rng = np.random.default_rng(2024)
    shapes = [(q, k, m) for q in (2, 3) for k in range(1, 5) for m in range(k, 5) if k * m <= 16]
    out = []
    while len(out) < 220:
        q, k, m = shapes[int(rng.integers(len(shapes)))]
        n = k * m
        # both C and its dual are enumerated, so keep each under 2^17 words
        dims = [d for d in range(n + 1) if q**d <= 1 << 17 and q ** (n - d) <= 1 << 17]
        d = dims[int(rng.integers(len(dims)))]
        out.append(Record(random_code(field_for_order(q), k, m, d, rng)))
    return tuple(out)


def test_criterion_4_moment_identities(report):
    t0 = time.perf_counter()
    codes = moment_codes()
    checked = 0
    for rec in codes:
        C = rec.code
        q, k, m = C.field.order, C.k, C.m
        for nu in range(k + 1):
            assert moment_lhs(rec.A.counts, k, q, nu) == moment_rhs(rec.B.counts, C.size, k, m, q, nu)
            checked += 1
        assert dual_distribution_recursive(rec.A, C.dim).counts == rec.B.counts
        assert dual_distribution_explicit(rec.A, C.dim).counts == rec.B.counts
    elapsed = time.perf_counter() - t0
    ok = len(codes) >= 200 and elapsed < 60.0
    report(4, ok, f"{len(codes)} codes, {checked} moment identities, both transforms = enumerated dual in {elapsed:.1f}s")
    assert ok


# -- 5 -------------------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def mrd_codes() -> tuple[tuple[int, int, int, int, Record], ...]:
    rng = np.random.default_rng(5)
    out = []
    for q in (2, 3):
        F = field_for_order(q)
        for m in range(1, 4):
            ext = ExtensionSpec(F, m)
            for k in range(1, m + 1):
                for d in range(1, k + 1):
                    C = evaluation_code(ext, d, random_points(ext, k, rng))
                    out.append((q, k, m, d, Record(expand_code(C, random_basis(ext, rng)))))
    return tuple(out)


def test_criterion_5_mrd_suite(report):
    t0 = time.perf_counter()
    codes = mrd_codes()
    for q, k, m, d, rec in codes:
        assert rec.code.dim == m * (k - d + 1)
        assert is_mrd(rec.code)
        assert is_mrd(dual(rec.code))
        assert rec.A == mrd_distribution(q, k, m, d)
        assert all(rec.A[d + ell] > 0 for ell in range(k - d + 1))
        if d > 1:
            # the dual is MRD with minimum rank k - d + 2
            assert rec.B == mrd_distribution(q, k, m, k - d + 2)
    elapsed = time.perf_counter() - t0
    ok = len(codes) == 2 * 10 and elapsed < 60.0
    report(5, ok, f"{len(codes)} evaluation codes over (q, d <= k <= m <= 3): MRD, dual MRD, distributions exact in {elapsed:.1f}s")
    assert ok


# -- 6 -------------------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def anticode_codes() -> tuple[tuple[Record, bool], ...]:
    """(code, built as an anticode) pairs: standard, equivalent and transposed anticodes plus random codes."""
    rng = np.random.default_rng(6)
    out = []
    for q, k, m in [(2, 2, 2), (2, 2, 3), (2, 3, 2), (2, 3, 3), (3, 2, 2), (3, 2, 3), (3, 3, 2), (2, 2, 4), (3, 3, 3)]:
        F = field_for_order(q)
        for D in range(1, min(k, m)):
            A = standard_anticode(F, k, m, D)
            out.append((Record(A), True))
            for _ in range(2):
                P, Q = random_invertible(F, k, rng), random_invertible(F, m, rng)
                out.append((Record(transform_code(A, P, Q)), True))
            if k != m:
                out.append((Record(transpose_code(standard_anticode(F, m, k, D))), True))
            n = max(k, m) * D
            for _ in range(9):
                out.append((Record(random_code(F, k, m, n, rng)), False))
    return tuple(out)


def test_criterion_6_anticode_suite(report):
    t0 = time.perf_counter()
    codes = anticode_codes()
    rng = np.random.default_rng(66)
    agree = positives = 0
    for rec, built in codes:
        C = rec.code
        pred = is_optimal_anticode(C)
        if built:
            assert pred
            assert is_optimal_anticode(dual(C))
        assert pred == is_optimal_anticode(dual(C))
        assert mrd_intersection_test(C, trials=24, rng=rng) == pred
        agree += 1
        positives += pred
    elapsed = time.perf_counter() - t0
    ok = agree >= 100 and 0 < positives < agree and elapsed < 60.0
    report(6, ok, f"sampled MRD-intersection criterion agrees with the predicate on {agree} codes "
                  f"({positives} anticodes) in {elapsed:.1f}s")
    assert ok


# -- 7 -------------------------------------------------------------------------------------------


def test_criterion_7_bounds(report):
    records = list(moment_codes()) + [rec for *_, rec in mrd_codes()] + [rec for rec, _ in anticode_codes()]
    checked = 0
    for rec in records:
        C = rec.code
        kk = min(C.k, C.m)
        ranks_C = [i for i in range(kk + 1) if rec.A[i]]
        ranks_D = [i for i in range(kk + 1) if rec.B[i]]
        maxC, maxD = max(ranks_C), max(ranks_D)
        assert maxC >= kk - maxD
        assert (maxC == kk - maxD) == is_optimal_anticode(C)
        if C.dim > 0:
            minC = min(i for i in ranks_C if i)
            assert minC <= maxD + 1
            if C.dim < C.k * C.m:
                minD = min(i for i in ranks_D if i)
                assert minD <= kk - minC + 2
                assert (minD == kk - minC + 2) == is_mrd(C)
        checked += 1
    report(7, True, f"all three bounds and both equality cases hold on the {checked} codes of criteria 4-6")


# -- 8 -------------------------------------------------------------------------------------------


def test_criterion_8_counting_closure(report):
    t0 = time.perf_counter()
    tables = 0
    for q in (2, 3):
        for k in range(1, 4):
            for m in range(k, 4):
                census = census_bruteforce(q, k, m)
                assert census.rank_marginal() == [count_rank(q, k, m, r) for r in range(k + 1)]
                for h in range(1, k + 1):
                    assert sum(census.n(r, h) for r in range(k + 1)) == q ** (k * m - 1)
                    assert sum(count_rank_htrace_recursive(q, k, m, r, h) for r in range(k + 1)) == q ** (k * m - 1)
                    for r in range(k + 1):
                        zero = count_rank_htrace_recursive(q, k, m, r, h)
                        assert census.n(r, h) == zero == count_rank_htrace_explicit(q, k, m, r, h)
                        for value in range(1, q):
                            nz = count_rank_trace_value(q, k, m, r, h, value)
                            assert census.n(r, h, value) == nz
                            assert count_rank(q, k, m, r) == zero + (q - 1) * nz
                tables += 1
    elapsed = time.perf_counter() - t0
    ok = elapsed < 120.0
    report(8, ok, f"{tables} exhaustive censuses match closed forms, zero-trace totals and partitions in {elapsed:.1f}s")
    assert ok


# -- 9 -------------------------------------------------------------------------------------------


def test_criterion_9_q_binomials(report):
    for q in (2, 3):
        ref = NaiveField(q)
        for s in range(5):
            layers = subspace_layers(ref, s)
            assert [q_binomial(q, s, t) for t in range(s + 1)] == [len(layer) for layer in layers]
    for q in range(2, 6):
        for n in range(13):
            assert q_binomial_alternating_sum(q, n) == (1 if n == 0 else 0)
    report(9, True, "subspace counts for q in {2,3}, s <= 4; alternating sums vanish for 1 <= n <= 12, q <= 5")
