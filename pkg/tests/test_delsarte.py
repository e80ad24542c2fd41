import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, brute_dual, rank_distribution_brute, span
from rankmetric import delsarte
from rankmetric.delsarte import (
    BudgetExceeded,
    DelsarteCode,
    code_from_generators,
    code_sum,
    dual,
    intersect,
    is_mrd,
    is_optimal_anticode,
    mat_u_code,
    max_rank,
    min_rank,
    mrd_intersection_test,
    random_code,
    rank_distribution,
    rank_distribution_route,
    standard_anticode,
    transform_code,
    transpose_code,
)
from rankmetric.finite_field import FieldMismatchError, FieldSpec, field_for_order
from rankmetric.matrix_space import MatrixFq, enumerate_subspaces, random_invertible, subspace_dual
from rankmetric.qcalc import q_binomial

F2, F3 = FieldSpec(2), FieldSpec(3)

EXAMPLE_GENS = [
    [[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 2, 1]],
    [[0, 2, 0, 0], [0, 0, 1, 2], [1, 1, 0, 0]],
    [[0, 2, 0, 0], [0, 0, 1, 2], [1, 1, 1, 1]],
]


@pytest.fixture
def example_code():
    return code_from_generators([MatrixFq(F3, g) for g in EXAMPLE_GENS])


def test_code_from_generators():
    assert code_from_generators([], F3, (2, 2)).dim == 0
    M = MatrixFq(F3, [[1, 2], [0, 1]])
    assert code_from_generators([M, M.scale(2)]).dim == 1
    with pytest.raises(ValueError):
        code_from_generators([M, MatrixFq.zeros(F3, 2, 3)])
    with pytest.raises(FieldMismatchError):
        code_from_generators([M, MatrixFq.zeros(F2, 2, 2)], F3)
    with pytest.raises(ValueError):
        code_from_generators([])


def test_example_code(example_code):
    C = example_code
    assert C.dim == 3
    assert rank_distribution(C).counts == (1, 2, 0, 24)
    D = dual(C)
    assert D.dim == 9
    assert rank_distribution(D).counts == (1, 50, 3432, 16200)
    assert min_rank(C) == 1 and max_rank(C) == 3
    assert not is_mrd(C)
    assert not is_optimal_anticode(C)


def test_example_distribution_against_oracle(example_code):
    ref = NaiveField(3)
    words = span(ref, [tuple(sum(g, [])) for g in EXAMPLE_GENS])
    assert rank_distribution_brute(ref, words, 3, 4) == [1, 2, 0, 24]


def test_dual_matches_enumeration():
    ref = NaiveField(3)
    rng = np.random.default_rng(0)
    for _ in range(8):
        C = random_code(F3, 2, 3, int(rng.integers(0, 7)), rng)
        expected = brute_dual(ref, [tuple(r) for r in C.basis.tolist()], 6)
        got = span(ref, [tuple(r) for r in dual(C).basis.tolist()], 6)
        assert got == expected


def test_zero_and_full():
    Z, Fu = DelsarteCode.zero(F2, 2, 3), DelsarteCode.full(F2, 2, 3)
    assert dual(Z) == Fu and dual(Fu) == Z
    assert rank_distribution(Z).counts == (1, 0, 0)
    assert rank_distribution(DelsarteCode.full(F2, 2, 2)).counts == (1, 9, 6)
    assert min_rank(Fu) == 1 and max_rank(Fu) == 2
    assert max_rank(Z) == 0
    with pytest.raises(ValueError):
        min_rank(Z)
    assert is_mrd(Z) and is_mrd(Fu)
    assert is_optimal_anticode(Z) and is_optimal_anticode(Fu)


def test_expanded_gabidulin_code_min_rank():
    C = code_from_generators([MatrixFq(F3, [[0, 1], [2, 0]]), MatrixFq(F3, [[2, 0], [0, 2]])])
    assert C.dim == 2
    assert rank_distribution(C).counts == (1, 0, 8)
    assert min_rank(C) == 2


def test_lattice_examples():
    rng = np.random.default_rng(1)
    C = random_code(F3, 2, 3, 3, rng)
    assert intersect(C, DelsarteCode.full(F3, 2, 3)) == C
    assert code_sum(C, DelsarteCode.zero(F3, 2, 3)) == C
    assert transpose_code(transpose_code(C)) == C
    with pytest.raises(ValueError):
        code_sum(C, DelsarteCode.zero(F3, 3, 2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_duality_identities(q, k, m, seed):
    if k * m > 12:
        return
    F = field_for_order(q)
    rng = np.random.default_rng(seed)
    C = random_code(F, k, m, int(rng.integers(0, k * m + 1)), rng)
    D = random_code(F, k, m, int(rng.integers(0, k * m + 1)), rng)
    assert dual(dual(C)) == C
    assert dual(C).dim == k * m - C.dim
    assert dual(intersect(C, D)) == code_sum(dual(C), dual(D))
    assert dual(code_sum(C, D)) == intersect(dual(C), dual(D))
    assert code_sum(C, D).dim == C.dim + D.dim - intersect(C, D).dim
    assert dual(transpose_code(C)) == transpose_code(dual(C))


@pytest.mark.parametrize("k,m", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_mat_u_intersection_cardinalities(k, m):
    """|C n Mat_U| = |C| / q^(m(k-s)) * |C-perp n Mat_{U-perp}| for every U."""
    q = 2
    rng = np.random.default_rng(k * 10 + m)
    for _ in range(4):
        C = random_code(F2, k, m, int(rng.integers(0, k * m + 1)), rng)
        Cd = dual(C)
        for U in enumerate_subspaces(F2, k):
            s = U.dim
            lhs = q ** intersect(C, mat_u_code(U, m)).dim
            rhs_num = C.size * q ** intersect(Cd, mat_u_code(subspace_dual(U), m)).dim
            assert lhs * q ** (m * (k - s)) == rhs_num


def test_double_counting_identity():
    """sum_U |C n Mat_U| over dim-s subspaces equals sum_i A_i [k-i, s-i]."""
    k = m = 3
    rng = np.random.default_rng(5)
    for _ in range(4):
        C = random_code(F2, k, m, int(rng.integers(1, 8)), rng)
        A = rank_distribution(C)
        # brute-force: count pairs (M, U) with colsp(M) inside U directly
        words = [w.reshape(k, m) for block in C.iter_codewords() for w in block]
        for s in range(k + 1):
            subspaces = list(enumerate_subspaces(F2, k, s))
            lhs = sum(1 for U in subspaces for M in words if all(U.contains(col) for col in M.T))
            rhs = sum(A[i] * q_binomial(2, k - i, s - i) for i in range(k + 1))
            assert lhs == rhs


def test_standard_anticodes_and_duals():
    for q in (2, 3):
        F = field_for_order(q)
        for k, m in [(2, 3), (3, 3), (3, 2), (2, 2)]:
            for D in range(min(k, m) + 1):
                A = standard_anticode(F, k, m, D)
                assert A.dim == max(k, m) * D
                assert is_optimal_anticode(A)
                assert is_optimal_anticode(dual(A))
                assert max_rank(A) == D


def test_anticode_predicate_rejects():
    rng = np.random.default_rng(3)
    seen_false = 0
    for _ in range(20):
        C = random_code(F2, 2, 3, 3, rng)
        if not is_optimal_anticode(C):
            seen_false += 1
            assert not is_optimal_anticode(dual(C))
    assert seen_false


def test_mrd_duality_random_and_bounds():
    rng = np.random.default_rng(9)
    for _ in range(60):
        q = int(rng.choice([2, 3]))
        F = field_for_order(q)
        k, m = (int(x) for x in rng.integers(1, 4, size=2))
        if k * m == 1:
            continue
        C = random_code(F, k, m, int(rng.integers(1, k * m)), rng)
        D = dual(C)
        kk = min(k, m)
        dC, dD = min_rank(C), min_rank(D)
        MC, MD = max_rank(C), max_rank(D)
        assert dD <= kk - dC + 2
        assert (dD == kk - dC + 2) == is_mrd(C)
        assert dC <= MD + 1
        assert MC >= kk - MD
        assert (MC == kk - MD) == is_optimal_anticode(C)
        if is_mrd(C):
            assert is_mrd(D)


def test_dual_route_used_beyond_budget(example_code):
    D = dual(example_code)
    A, route = rank_distribution_route(D, budget=3**3)
    assert route == "dual+transform"
    assert A.counts == (1, 50, 3432, 16200)
    A, route = rank_distribution_route(D)
    assert route == "enumerate"
    with pytest.raises(BudgetExceeded):
        rank_distribution(DelsarteCode(F3, 3, 4, np.eye(12, dtype=np.int64)[:6]), budget=10)


def test_dual_route_for_tall_codes():
    rng = np.random.default_rng(4)
    C = random_code(F3, 4, 2, 6, rng)
    A1, r1 = rank_distribution_route(C, budget=3**2)
    A2, r2 = rank_distribution_route(C)
    assert (r1, r2) == ("dual+transform", "enumerate")
    assert A1 == A2


def test_enumeration_is_chunk_independent(example_code):
    D = dual(example_code)
    small = np.concatenate(list(D.iter_codewords(chunk=1000)))
    big = np.concatenate(list(D.iter_codewords()))
    assert np.array_equal(small, big)


def test_transform_code_preserves_distribution():
    rng = np.random.default_rng(6)
    C = random_code(F3, 2, 3, 3, rng)
    P, Q = random_invertible(F3, 2, rng), random_invertible(F3, 3, rng)
    assert rank_distribution(transform_code(C, P, Q)) == rank_distribution(C)


def test_mrd_intersection_agrees_with_predicate():
    rng = np.random.default_rng(12)
    agree = 0
    for q, k, m in [(2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 2, 2), (3, 2, 3), (2, 3, 2)]:
        F = field_for_order(q)
        for D in range(1, min(k, m)):
            n = max(k, m) * D
            cands = [standard_anticode(F, k, m, D), transpose_code(standard_anticode(F, m, k, D)) if k != m else None]
            cands += [random_code(F, k, m, n, rng) for _ in range(3)]
            for C in cands:
                if C is None:
                    continue
                assert mrd_intersection_test(C, trials=24, rng=rng) == is_optimal_anticode(C)
                agree += 1
    assert agree >= 20


def test_mrd_intersection_rejects_bad_dimension():
    with pytest.raises(ValueError):
        mrd_intersection_test(random_code(F2, 2, 3, 2, np.random.default_rng(0)))


def test_immutability(example_code):
    with pytest.raises(AttributeError):
        example_code.k = 5
    with pytest.raises(ValueError):
        example_code.basis[0, 0] = 1
    assert hash(example_code) == hash(code_from_generators([MatrixFq(F3, g) for g in reversed(EXAMPLE_GENS)]))


def test_contains(example_code):
    for M in itertools.islice(example_code.codewords(), 10):
        assert M in example_code
    assert MatrixFq.identity(F3, 3, 4) not in example_code
    assert delsarte.singleton_bound(3, 4, 2) == 8
