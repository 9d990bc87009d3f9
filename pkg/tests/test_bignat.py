"""Tests for the natural-number contract."""

import random

import pytest

from nimtower import bignat
from nimtower.errors import DivideByZero, ParseError
from nimtower.fermat import _FACTOR_STRINGS

P62 = 93461639715357977769163558199606896584051237541638188580280321


def test_from_decimal():
    assert bignat.from_decimal("641") == 641
    assert bignat.from_decimal("000") == 0
    assert bignat.from_decimal("65537") == 65537


@pytest.mark.parametrize("bad", ["", "12a", "-5", " 3", "0x10", "6 41"])
def test_from_decimal_rejects(bad):
    with pytest.raises(ParseError):
        bignat.from_decimal(bad)


def test_parse_nat_hex_convenience():
    assert bignat.parse_nat("0x20") == 32
    assert bignat.parse_nat("0XfF") == 255
    assert bignat.parse_nat("255") == 255
    with pytest.raises(ParseError):
        bignat.parse_nat("0x")
    with pytest.raises(ParseError):
        bignat.parse_nat("0xg1")


def test_add_mul():
    assert bignat.mul(641, 6700417) == 4294967297
    assert bignat.add(12345, 0) == 12345
    assert bignat.mul(3, 5 * 17) == 255


def test_divrem():
    assert bignat.divrem(4294967297, 641) == (6700417, 0)
    assert bignat.divrem(7, 2) == (3, 1)
    assert bignat.divrem((1 << 256) + 1, 1238926361552897) == (P62, 0)
    with pytest.raises(DivideByZero):
        bignat.divrem(5, 0)


def test_bits():
    assert bignat.bit_length(4294967297) == 33
    assert bignat.bit_length(0) == 0
    assert bignat.bit_length((1 << 2048) + 1) == 2049
    assert bignat.bit_at(4294967297, 0) == 1
    assert bignat.bit_at(4294967297, 1) == 0
    assert bignat.bit_at(4294967297, 32) == 1


def test_divrem_inverts_mul_property():
    rng = random.Random(2024)
    for _ in range(200):
        a = rng.getrandbits(512)
        b = rng.getrandbits(512) | 1
        r = rng.randrange(b)
        assert bignat.divrem(a * b + r, b) == (a, r)


def test_roundtrip_on_factor_strings():
    for strings in _FACTOR_STRINGS.values():
        for s in strings:
            assert bignat.to_decimal(bignat.from_decimal(s)) == s


def test_mul_commutative_associative_sampled():
    rng = random.Random(7)
    for _ in range(100):
        a, b, c = (rng.getrandbits(256) for _ in range(3))
        assert bignat.mul(a, b) == bignat.mul(b, a)
        assert bignat.mul(bignat.mul(a, b), c) == bignat.mul(a, bignat.mul(b, c))
