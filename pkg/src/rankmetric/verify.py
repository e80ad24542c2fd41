"""Seeded self-check suite run by `rankcode verify`.

Each property draws its instances from its own generator seeded by
(seed, property index), so a single property can be rerun with `--only`
and see exactly the same cases.
"""

from __future__ import annotations

import shlex
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from . import counting, delsarte, gabidulin, qcalc
from .finite_field import ExtensionSpec, field_for_order, prime_power
from .matrix_space import VectorSubspace, enumerate_subspaces


@dataclass
class Config:
    seed: int = 0
    trials: int = 20
    max_q: int = 3
    max_dim: int = 9
    budget: int = delsarte.DEFAULT_ENUM_BUDGET


@dataclass
class Outcome:
    name: str
    passed: bool
    cases: int
    detail: str = ""


class Failure(Exception):
    pass


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise Failure(msg)


def _orders(max_q: int) -> list[int]:
    out = []
    for q in range(2, max(max_q, 2) + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return out


def _shape(rng, cfg: Config, kmax: int = 4) -> tuple[int, int]:
    """Random k <= m with km <= max_dim."""
    shapes = [(k, m) for k in range(1, kmax + 1) for m in range(k, kmax + 1) if k * m <= cfg.max_dim]
    return shapes[rng.integers(len(shapes))]


def _random_code(rng, cfg: Config):
    q = int(rng.choice(_orders(cfg.max_q)))
    k, m = _shape(rng, cfg)
    if rng.integers(2):
        k, m = m, k
    dim = int(rng.integers(0, k * m + 1))
    return delsarte.random_code(field_for_order(q), k, m, dim, rng)


def prop_moments(rng, cfg: Config) -> int:
    """Moment identities and both transforms against the enumerated dual."""
    for _ in range(cfg.trials):
        C = _random_code(rng, cfg)
        q, k, m = C.field.order, min(C.shape), max(C.shape)
        A = delsarte.rank_distribution(C, cfg.budget)
        B = delsarte.rank_distribution(delsarte.dual(C), cfg.budget)
        for nu in range(k + 1):
            _check(
                qcalc.moment_lhs(A.counts, k, q, nu) == qcalc.moment_rhs(B.counts, C.size, k, m, q, nu),
                f"moment nu={nu} fails for {C}",
            )
        rec = qcalc.dual_distribution_recursive(A.counts, C.dim, q, k, m).counts
        exp = qcalc.dual_distribution_explicit(A.counts, C.dim, q, k, m).counts
        _check(rec == B.counts, f"recursive transform {rec} != enumerated {B.counts}")
        _check(exp == B.counts, f"explicit transform {exp} != enumerated {B.counts}")
    return cfg.trials


def prop_mrd_duality(rng, cfg: Config) -> int:
    """Expanded evaluation codes and their duals are MRD with the predicted distribution."""
    for _ in range(cfg.trials):
        q = int(rng.choice(_orders(cfg.max_q)))
        k, m = _shape(rng, cfg, kmax=3)
        d = int(rng.integers(1, k + 1))
        ext = ExtensionSpec(field_for_order(q), m)
        E = gabidulin.expand_code(
            gabidulin.evaluation_code(ext, d, gabidulin.random_points(ext, k, rng)), gabidulin.random_basis(ext, rng)
        )
        A = delsarte.rank_distribution(E, cfg.budget)
        _check(A.counts == qcalc.mrd_distribution(q, k, m, d).counts, f"q={q} k={k} m={m} d={d}: {A.counts}")
        _check(all(A[i] > 0 for i in range(d, k + 1)), f"missing ranks in {A.counts}")
        _check(delsarte.is_mrd(E, cfg.budget), f"q={q} k={k} m={m} d={d}: expansion is not MRD")
        if d > 1:
            _check(delsarte.is_mrd(delsarte.dual(E), cfg.budget), f"q={q} k={k} m={m} d={d}: dual is not MRD")
    return cfg.trials


def prop_anticode_duality(rng, cfg: Config) -> int:
    """Mat_U codes are optimal anticodes, and so are their duals."""
    for _ in range(cfg.trials):
        q = int(rng.choice(_orders(cfg.max_q)))
        k, m = _shape(rng, cfg)
        F = field_for_order(q)
        t = int(rng.integers(0, k + 1))
        U = VectorSubspace(F, k, rng.integers(0, q, size=(t, k)))
        C = delsarte.mat_u_code(U, m)
        if rng.integers(2):
            C = delsarte.transpose_code(C)
        _check(delsarte.is_optimal_anticode(C, cfg.budget), f"{C} from {U} is not an optimal anticode")
        _check(delsarte.is_optimal_anticode(delsarte.dual(C), cfg.budget), f"dual of {C} is not an optimal anticode")
    return cfg.trials


def prop_bounds(rng, cfg: Config) -> int:
    """Bounds linking min/max rank of a code and of its dual."""
    n = 0
    while n < cfg.trials:
        C = _random_code(rng, cfg)
        D = delsarte.dual(C)
        if C.dim == 0 or D.dim == 0:
            continue
        n += 1
        kk = min(C.shape)
        dC, dD = delsarte.min_rank(C, cfg.budget), delsarte.min_rank(D, cfg.budget)
        MC, MD = delsarte.max_rank(C, cfg.budget), delsarte.max_rank(D, cfg.budget)
        mrd = delsarte.is_mrd(C, cfg.budget)
        _check(dD <= kk - dC + 2, f"{C}: minrk(dual)={dD} > {kk - dC + 2}")
        _check((dD == kk - dC + 2) == mrd, f"{C}: minrk equality {dD == kk - dC + 2} but MRD {mrd}")
        _check(dC <= MD + 1, f"{C}: minrk={dC} > maxrk(dual)+1={MD + 1}")
        anti = delsarte.is_optimal_anticode(C, cfg.budget)
        _check(MC >= kk - MD, f"{C}: maxrk={MC} < {kk - MD}")
        _check((MC == kk - MD) == anti, f"{C}: maxrk equality {MC == kk - MD} but anticode {anti}")
    return n


def prop_orthobasis(rng, cfg: Config) -> int:
    """Expansion w.r.t. a basis and its trace-dual basis commutes with taking duals."""
    for _ in range(cfg.trials):
        q = int(rng.choice(_orders(cfg.max_q)))
        m = int(rng.integers(1, 4))
        while m > 1 and q**m > 81:
            m -= 1
        k = int(rng.integers(1, 4))
        ext = ExtensionSpec(field_for_order(q), m)
        C = gabidulin.random_gabidulin_code(ext, k, int(rng.integers(0, k + 1)), rng)
        G = gabidulin.random_basis(ext, rng)
        _check(gabidulin.check_orthobasis_duality(C, G), f"{C} with basis {G}")
    return cfg.trials


def prop_counting(rng, cfg: Config) -> int:
    """Recursive, explicit and brute-force h-trace counts agree; partition identity."""
    shapes = [(q, k, m) for q in _orders(cfg.max_q) for k in range(1, 4) for m in range(k, 4)
              if k * m <= cfg.max_dim and q ** (k * m) <= min(cfg.budget, 1 << 16)]
    n = min(cfg.trials, len(shapes))
    picks = rng.choice(len(shapes), size=n, replace=False)
    for i in sorted(picks.tolist()):
        q, k, m = shapes[i]
        census = counting.census_bruteforce(q, k, m, cfg.budget)
        for r in range(k + 1):
            _check(census.n(r, 0) == counting.count_rank(q, k, m, r), f"count_rank({q},{k},{m},{r})")
            for h in range(1, k + 1):
                rec = counting.count_rank_htrace_recursive(q, k, m, r, h)
                exp = counting.count_rank_htrace_explicit(q, k, m, r, h)
                _check(rec == exp == census.n(r, h, 0), f"q={q} k={k} m={m} r={r} h={h}: {rec}, {exp}, {census.n(r, h, 0)}")
                for v in range(1, q):
                    nz = counting.count_rank_trace_value(q, k, m, r, h, v)
                    _check(nz == census.n(r, h, v), f"trace value {v}: {nz} != {census.n(r, h, v)}")
                    _check(counting.count_rank(q, k, m, r) == rec + (q - 1) * nz, "partition identity")
    return n


def prop_q_binomial(rng, cfg: Config) -> int:
    """Gaussian binomials against subspace enumeration and the product formula."""
    n = 0
    for q in _orders(min(cfg.max_q, 3)):
        F = field_for_order(q)
        for s in range(5 if q == 2 else 4):
            for t in range(s + 1):
                count = sum(1 for _ in enumerate_subspaces(F, s, t))
                _check(qcalc.q_binomial(q, s, t) == count == qcalc.q_binomial_product(q, s, t), f"[{s},{t}]_{q}")
                n += 1
    for q in range(2, 6):
        for s in range(13):
            _check(qcalc.q_binomial_alternating_sum(q, s) == (1 if s == 0 else 0), f"alternating sum q={q} n={s}")
    return n


PROPERTIES: dict[str, Callable] = {
    "moments": prop_moments,
    "mrd-duality": prop_mrd_duality,
    "anticode-duality": prop_anticode_duality,
    "bounds": prop_bounds,
    "orthobasis-duality": prop_orthobasis,
    "counting": prop_counting,
    "q-binomial": prop_q_binomial,
}


def run_property(name: str, cfg: Config) -> Outcome:
    index = list(PROPERTIES).index(name)
    rng = np.random.default_rng([cfg.seed, index])
    try:
        cases = PROPERTIES[name](rng, cfg)
    except (Failure, ArithmeticError, ValueError) as exc:
        return Outcome(name, False, 0, f"{type(exc).__name__}: {exc}")
    return Outcome(name, True, cases)


def reproduce_command(name: str, cfg: Config) -> str:
    args = ["rankcode", "--enum-budget", str(cfg.budget), "verify", "--seed", str(cfg.seed), "--trials", str(cfg.trials),
            "--max-q", str(cfg.max_q), "--max-dim", str(cfg.max_dim), "--only", name]
    return shlex.join(args)


def run_suite(cfg: Config, only: list[str] | None = None) -> list[Outcome]:
    names = only or list(PROPERTIES)
    for n in names:
        if n not in PROPERTIES:
            raise ValueError(f"unknown property {n!r}; choose from {', '.join(PROPERTIES)}")
    return [run_property(n, cfg) for n in names]
