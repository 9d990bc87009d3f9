"""Arbitrary-precision natural numbers for exponents, Fermat numbers and group orders.

Python ints already are arbitrary-precision, so they serve as the backing
representation; this module pins down the contract actually relied on
elsewhere (decimal parsing, exact division, bit access) and the error
behavior at the edges.  Only naturals are supported: nothing in the tower
arithmetic ever needs a sign or a subtraction.
"""

from __future__ import annotations

from .errors import DivideByZero, ParseError

BigNat = int

_DECIMAL_DIGITS = frozenset("0123456789")
_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


def from_decimal(s: str) -> BigNat:
    """Parse a decimal digit string; leading zeros are canonicalized away."""
    if not s or any(ch not in _DECIMAL_DIGITS for ch in s):
        raise ParseError(f"not a decimal natural number: {s!r}")
    return int(s, 10)


def to_decimal(x: BigNat) -> str:
    return str(x)


def parse_nat(s: str) -> BigNat:
    """Parse a natural number: decimal, or hex with a 0x prefix."""
    if s[:2].lower() == "0x":
        digits = s[2:]
        if not digits or any(ch not in _HEX_DIGITS for ch in digits):
            raise ParseError(f"not a hex natural number: {s!r}")
        return int(digits, 16)
    return from_decimal(s)


def add(a: BigNat, b: BigNat) -> BigNat:
    return a + b


def mul(a: BigNat, b: BigNat) -> BigNat:
    return a * b


def divrem(a: BigNat, b: BigNat) -> tuple[BigNat, BigNat]:
    """Quotient and remainder with a = q*b + r, 0 <= r < b."""
    if b == 0:
        raise DivideByZero("division by zero")
    return divmod(a, b)


def bit_length(a: BigNat) -> int:
    """Position of the highest set bit plus one; 0 for the value 0."""
    return a.bit_length()


def bit_at(a: BigNat, k: int) -> int:
    return (a >> k) & 1
