import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankmetric.codefile import CodeFileError, format_code, parse_code, read_code, write_code
from rankmetric.delsarte import DelsarteCode, random_code, rank_distribution
from rankmetric.finite_field import ExtensionSpec, FieldBasis, FieldSpec, field_for_order
from rankmetric.gabidulin import GabidulinCode, random_gabidulin_code

EXAMPLE = """rankcode v1
field GF(3)
shape 3 4 delsarte
# the three generators of the worked example
gen
1, 2, 0, 0
0, 1, 0, 0
0, 0, 2, 1

gen
0, 2, 0, 0; 0, 0, 1, 2; 1, 1, 0, 0

gen
0, 2, 0, 0; 0, 0, 1, 2; 1, 1, 1, 1
"""

GAB = """rankcode v1
field GF(3)
ext GF(3^2; 1,2,2)
shape 2 2 gabidulin
basis 1, z+1
gen
z+1, 2
"""


def test_parse_example():
    cf = parse_code(EXAMPLE)
    assert cf.kind == "delsarte"
    assert cf.code.dim == 3
    assert rank_distribution(cf.code).counts == (1, 2, 0, 24)
    assert len(cf.given) == 3 and cf.basis is None


def test_parse_gabidulin():
    cf = parse_code(GAB)
    E = cf.code.ext
    assert cf.kind == "gabidulin"
    assert E.modulus == (1, 2, 2)
    assert cf.code == GabidulinCode(E, 2, [[E("z+1"), E(2)]])
    assert cf.basis == FieldBasis(E, [1, E("z+1")])
    assert cf.given == [[E.parse("z+1"), 2]]


def test_round_trip_files(tmp_path):
    for text in (EXAMPLE, GAB):
        cf = parse_code(text)
        path = tmp_path / "c.rc"
        write_code(path, cf.code, cf.basis)
        back = read_code(path)
        assert back.code == cf.code and back.basis == cf.basis
        assert format_code(back.code, back.basis) == path.read_text()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4, 9]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_round_trip_random(q, k, m, seed):
    rng = np.random.default_rng(seed)
    F = field_for_order(q)
    C = random_code(F, k, m, int(rng.integers(0, k * m + 1)), rng)
    assert parse_code(format_code(C)).code == C
    E = ExtensionSpec(FieldSpec(F.p), m)
    G = random_gabidulin_code(E, k, int(rng.integers(0, k + 1)), rng)
    assert parse_code(format_code(G)).code == G


def test_zero_code_files():
    Z = DelsarteCode.zero(FieldSpec(2), 2, 3)
    text = format_code(Z)
    assert "gen" not in text
    assert parse_code(text).code == Z


def test_canonicalization_is_logged(caplog):
    with caplog.at_level(logging.INFO, logger="rankmetric.codefile"):
        parse_code(EXAMPLE)
    assert any("canonicalized" in r.message for r in caplog.records)


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("rankcode v2\n", 1),
        ("rankcode v1\nfield GF(6)\n", 2),
        ("rankcode v1\nfield GF(3)\nshape 2 x delsarte\n", 3),
        ("rankcode v1\nfield GF(3)\nshape 2 2 hamming\n", 3),
        ("rankcode v1\nfield GF(3)\nshape 0 2 delsarte\n", 3),
        ("rankcode v1\nfield GF(3)\nshape 2 2 gabidulin\n", 3),
        ("rankcode v1\nfield GF(3)\next GF(3^3; 1,0,2,1)\nshape 2 2 gabidulin\n", 4),
        ("rankcode v1\nfield GF(3)\next GF(3^2; 1,0,1)\nshape 2 2 delsarte\n", 4),
        ("rankcode v1\nfield GF(3)\nshape 2 2 delsarte\nbasis 1, 2\n", 4),
        ("rankcode v1\nfield GF(3)\nshape 2 2 delsarte\n\n1, 2; 0, 0\n", 5),
        ("rankcode v1\nfield GF(3)\nshape 2 2 delsarte\ngen\n1, 2\n", 4),
        ("rankcode v1\nfield GF(3)\nshape 2 2 delsarte\ngen\n1, 2\n0, 0, 1\n", 6),
        ("rankcode v1\nfield GF(3)\nshape 2 2 delsarte\ngen\n1, 2\n0, y\n", 6),
        ("rankcode v1\nfield GF(3)\next GF(3^2; 1,2,2)\nshape 2 2 gabidulin\ngen\nz, 1, 1\n", 5),
        ("rankcode v1\nfield GF(3)\next GF(3^2; 1,2,2)\nshape 2 2 gabidulin\nbasis 1, 2\n", 5),
        ("rankcode v1\nfield GF(3)\next GF(3^2; 1,0,1,1)\nshape 2 2 gabidulin\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(CodeFileError) as info:
        parse_code(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")
