"""Elements and field arithmetic for the recursive tower of binary fields.

Level i holds 2^(2^(i+1)) elements.  An element is a bit vector of
coefficients over the monomial basis: bit m stands for the product of the
generators c_j over the 1-bits j of m, so bit 0 is the constant 1, bit 2^k
is c_k, and bit 2^(k+1)-1 is the top monomial a_k = c_0*...*c_k.  Read as
an unsigned integer, the coefficient vector is exactly the element's nimber
value (c_k corresponds to 2^(2^k)), which is what lets the independent
nimber oracles check this module bit for bit.

The defining relation c_k^2 = c_k + a_{k-1} drives every kernel below.
Writing x = xh*c_k + xl with xh, xl in the half-width field:

    x*y      = ((xh+xl)(yh+yl) + xl*yl)*c_k + (xh*yh*a_{k-1} + xl*yl)
    x^2      = (xh^2)*c_k + (xh^2*a_{k-1} + xl^2)
    conj(x)  = xh*c_k + (xl + xh)            # x^(2^(2^k)), fixes the subfield
    norm(x)  = x*conj(x) = xh^2*a_{k-1} + xh*xl + xl^2   # lands in the subfield

Multiplication is the Karatsuba form (three half-width products plus one
multiply-by-a_{k-1}); inversion is conj(x) * norm(x)^-1 recursively.  The
kernels work on plain ints keyed by width in bits; the TowerElement class
is a thin immutable wrapper that adds level bookkeeping.

Base cases: a 256x256 product table covers widths up to 8 and is built once
from the recursion itself; on top of it sit log/antilog tables for the
65536-element field (width 16), where the recursion bottoms out.  The
16-bit threshold is the measured sweet spot for 4096-bit operations and is
a named constant below.
"""

from __future__ import annotations

import random
import re
import threading
from dataclasses import dataclass

from .errors import (
    LevelError,
    LevelMismatch,
    NotInField,
    ParseError,
    ZeroInverse,
    ZeroToZero,
)

# Width (bits) of the dense product table: 2^8 x 2^8 entries, level <= 2.
BASE_TABLE_BITS = 8
# Width at which the recursion switches to log/antilog lookups (tunable).
LOG_TABLE_BITS = 16
# Generator used to build the 16-bit log tables: c3*c0, primitive in L_3.
_LOG_GENERATOR = 0x200

_MUL8: list[list[int]] | None = None
_EXP16: list[int] = []
_LOG16: list[int] = []
_MUL_TOP16: list[int] = []
_SQ16: list[int] = []
_tables_ready = False
_tables_lock = threading.Lock()


def _build_tables() -> None:
    global _MUL8, _EXP16, _LOG16, _MUL_TOP16, _SQ16, _tables_ready
    # Stage the 256x256 table up from the trivial 2x2 field.
    t = [[0, 0], [0, 1]]
    half = 1
    while half < BASE_TABLE_BITS:
        size = 1 << (2 * half)
        mask = (1 << half) - 1
        top = 1 << (half - 1)
        new = [[0] * size for _ in range(size)]
        for a in range(size):
            ah, al = a >> half, a & mask
            row = new[a]
            for b in range(size):
                bh, bl = b >> half, b & mask
                hh = t[ah][bh]
                ll = t[al][bl]
                mid = t[ah ^ al][bh ^ bl]
                row[b] = ((mid ^ ll) << half) ^ t[hh][top] ^ ll
        t = new
        half *= 2
    mul8 = t

    # Log/antilog for the width-16 field, generated by c3*c0.  The antilog
    # table is doubled so exponent sums need no reduction mod 65535.
    order = (1 << LOG_TABLE_BITS) - 1
    exp = [0] * (2 * order)
    log = [0] * (order + 1)
    x = 1
    for i in range(order):
        exp[i] = x
        exp[i + order] = x
        log[x] = i
        xh, xl = x >> 8, x & 0xFF
        gh, gl = _LOG_GENERATOR >> 8, _LOG_GENERATOR & 0xFF
        hh = mul8[xh][gh]
        ll = mul8[xl][gl]
        mid = mul8[xh ^ xl][gh ^ gl]
        x = ((mid ^ ll) << 8) ^ mul8[hh][0x80] ^ ll
    if x != 1:
        raise AssertionError("log-table generator does not have full order")

    log_top = log[1 << (LOG_TABLE_BITS - 1)]
    mul_top16 = [0] * (order + 1)
    sq16 = [0] * (order + 1)
    for v in range(1, order + 1):
        lv = log[v]
        mul_top16[v] = exp[lv + log_top]
        sq16[v] = exp[2 * lv]

    _MUL8 = mul8
    _EXP16, _LOG16, _MUL_TOP16, _SQ16 = exp, log, mul_top16, sq16
    _tables_ready = True


def _ensure_tables() -> None:
    if not _tables_ready:
        with _tables_lock:
            if not _tables_ready:
                _build_tables()


# ---------------------------------------------------------------------------
# Int kernels.  All take values below 2**w for a power-of-two width w.


def _mul(a: int, b: int, w: int) -> int:
    if w == LOG_TABLE_BITS:
        if a == 0 or b == 0:
            return 0
        return _EXP16[_LOG16[a] + _LOG16[b]]
    if w < LOG_TABLE_BITS:
        return _MUL8[a][b]
    if a < 2 or b < 2:
        return a * b
    half = w >> 1
    mask = (1 << half) - 1
    ah, al = a >> half, a & mask
    bh, bl = b >> half, b & mask
    if ah | bh == 0:
        return _mul(al, bl, half)
    hh = _mul(ah, bh, half)
    ll = _mul(al, bl, half)
    mid = _mul(ah ^ al, bh ^ bl, half)
    return ((mid ^ ll) << half) ^ _mul_top(hh, half) ^ ll


def _mul_top(x: int, w: int) -> int:
    """Multiply x by the top monomial of the width-w field (value 2^(w-1))."""
    if w == LOG_TABLE_BITS:
        return _MUL_TOP16[x]
    if w < LOG_TABLE_BITS:
        return _MUL8[x][1 << (w - 1)]
    if x == 0:
        return 0
    half = w >> 1
    xh = x >> half
    xl = x & ((1 << half) - 1)
    if xh == 0:
        return _mul_top(xl, half) << half
    return (_mul_top(xh ^ xl, half) << half) ^ _mul_top(_mul_top(xh, half), half)


def _square(a: int, w: int) -> int:
    if w == LOG_TABLE_BITS:
        return _SQ16[a]
    if w < LOG_TABLE_BITS:
        return _MUL8[a][a]
    half = w >> 1
    ah = a >> half
    if ah == 0:
        return _square(a, half)
    hh = _square(ah, half)
    return (hh << half) ^ _mul_top(hh, half) ^ _square(a & ((1 << half) - 1), half)


def _inv(a: int, w: int) -> int:
    if w <= LOG_TABLE_BITS:
        if a == 1:
            return 1
        return _EXP16[(1 << LOG_TABLE_BITS) - 1 - _LOG16[a]]
    half = w >> 1
    ah = a >> half
    al = a & ((1 << half) - 1)
    if ah == 0:
        return _inv(al, half)
    norm = _mul_top(_square(ah, half), half) ^ _mul(ah, al, half) ^ _square(al, half)
    ninv = _inv(norm, half)
    return (_mul(ah, ninv, half) << half) ^ _mul(ah ^ al, ninv, half)


# Exponent size above which _pow switches to 4-bit windows.
_POW_WINDOW_THRESHOLD = 64


def _pow(a: int, e: int, w: int) -> int:
    """Left-to-right square-and-multiply (4-bit digits for long exponents)."""
    if e == 0 or a == 1:
        return 1 if e == 0 else a
    bits = e.bit_length()
    if bits <= _POW_WINDOW_THRESHOLD:
        r = a
        for i in range(bits - 2, -1, -1):
            r = _square(r, w)
            if (e >> i) & 1:
                r = _mul(r, a, w)
        return r
    powers = [1, a]
    for _ in range(14):
        powers.append(_mul(powers[-1], a, w))
    shift = (bits - 1) & ~3
    r = powers[e >> shift]
    while shift:
        shift -= 4
        r = _square(_square(_square(_square(r, w), w), w), w)
        digit = (e >> shift) & 0xF
        if digit:
            r = _mul(r, powers[digit], w)
    return r


def mul_values(a: int, b: int, width: int) -> int:
    """Raw product of two coefficient vectors of the given bit width."""
    _ensure_tables()
    return _mul(a, b, max(width, 1))


def square_value(a: int, width: int) -> int:
    _ensure_tables()
    return _square(a, max(width, 1))


def pow_values(a: int, e: int, width: int) -> int:
    """Raw exponentiation of a coefficient vector (e a natural number)."""
    _ensure_tables()
    return _pow(a, e, max(width, 1))


def width_of(level: int) -> int:
    """Coefficient-vector length (bits) of a level: 2^(level+1)."""
    if level < -1:
        raise LevelError(f"level must be >= -1, got {level}")
    return 1 << (level + 1)


def _min_level_for(value: int) -> int:
    level = -1
    while value >> width_of(level):
        level += 1
    return level


@dataclass(frozen=True, slots=True)
class TowerElement:
    """Immutable element of the level-`level` field."""

    level: int
    value: int

    def __post_init__(self):
        if self.level < -1:
            raise LevelError(f"level must be >= -1, got {self.level}")
        if self.value < 0 or self.value >> width_of(self.level):
            raise NotInField(
                f"value {self.value:#x} does not fit in level {self.level}"
            )

    # -- structure ---------------------------------------------------------

    @property
    def width(self) -> int:
        return width_of(self.level)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value:#x}@L{self.level}"

    def lift(self, level: int) -> "TowerElement":
        """Re-express at a higher level by zero-extending coefficients."""
        if level < self.level:
            raise LevelError(f"cannot lift level {self.level} down to {level}")
        return TowerElement(level, self.value)

    def min_level(self) -> "TowerElement":
        """Truncate to the smallest level containing all set coefficients."""
        return TowerElement(_min_level_for(self.value), self.value)

    def in_subfield(self, k: int) -> bool:
        """Whether the element lies in the level-k subfield (bit test)."""
        if not (-1 <= k <= self.level):
            raise LevelError(f"subfield level {k} out of range for level {self.level}")
        return self.value >> width_of(k) == 0

    # -- arithmetic ---------------------------------------------------------

    def _require_same_level(self, other: "TowerElement") -> None:
        if self.level != other.level:
            raise LevelMismatch(
                f"levels differ: {self.level} vs {other.level}; lift explicitly"
            )

    def add(self, other: "TowerElement") -> "TowerElement":
        self._require_same_level(other)
        return TowerElement(self.level, self.value ^ other.value)

    __add__ = add

    def mul(self, other: "TowerElement") -> "TowerElement":
        self._require_same_level(other)
        _ensure_tables()
        return TowerElement(self.level, _mul(self.value, other.value, self.width))

    __mul__ = mul

    def square(self) -> "TowerElement":
        _ensure_tables()
        return TowerElement(self.level, _square(self.value, self.width))

    def frobenius_conj(self) -> "TowerElement":
        """The conjugate over the next subfield down: x^(2^(2^level))."""
        if self.level < 0:
            raise LevelError("frobenius_conj needs level >= 0")
        half = self.width >> 1
        vh = self.value >> half
        vl = self.value & ((1 << half) - 1)
        return TowerElement(self.level, (vh << half) ^ (vl ^ vh))

    def inverse(self) -> "TowerElement":
        if self.value == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        _ensure_tables()
        return TowerElement(self.level, _inv(self.value, self.width))

    def pow(self, e: int) -> "TowerElement":
        """Left-to-right square-and-multiply; 0**0 is an error."""
        if e < 0:
            raise ValueError("exponent must be a natural number")
        if self.value == 0:
            if e == 0:
                raise ZeroToZero("0**0 is undefined")
            return self
        if e == 0:
            return TowerElement(self.level, 1)
        _ensure_tables()
        return TowerElement(self.level, _pow(self.value, e, self.width))

    __pow__ = pow

    def __eq__(self, other) -> bool:
        if isinstance(other, TowerElement):
            return self.level == other.level and self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.level, self.value))


# ---------------------------------------------------------------------------
# Constructors and text formats.


def zero(level: int) -> TowerElement:
    return TowerElement(level, 0)


def one(level: int) -> TowerElement:
    return TowerElement(level, 1)


def generator(kind: str, index: int, level: int) -> TowerElement:
    """The generator c_index, top monomial a_index, zero or one, at `level`.

    c_k has the single coefficient bit 2^k set; a_k = c_0*...*c_k has bit
    2^(k+1)-1.  Index -1 yields 1 for both families.
    """
    if level < -1:
        raise LevelError(f"level must be >= -1, got {level}")
    if kind == "zero":
        return zero(level)
    if kind == "one":
        return one(level)
    if kind not in ("c", "a"):
        raise ValueError(f"unknown generator kind {kind!r}")
    if not (-1 <= index <= level):
        raise LevelError(f"{kind}_{index} does not live in level {level}")
    if index == -1:
        return one(level)
    bit = (1 << index) if kind == "c" else ((1 << (index + 1)) - 1)
    return TowerElement(level, 1 << bit)


_HEX_RE = re.compile(r"0x[0-9a-fA-F]+\Z")


def parse_hex(s: str, level: int) -> TowerElement:
    if not _HEX_RE.match(s):
        raise ParseError(f"not a hex element literal: {s!r}")
    value = int(s, 16)
    if value >> width_of(level):
        raise NotInField(f"{s} needs more than {width_of(level)} coefficient bits")
    return TowerElement(level, value)


def _monomial_name(bit: int) -> str:
    if bit == 0:
        return "1"
    parts = [f"c{j}" for j in range(bit.bit_length() - 1, -1, -1) if (bit >> j) & 1]
    return "*".join(parts)


def format_element(x: TowerElement, style: str = "hex") -> str:
    if style == "hex":
        return f"{x.value:#x}"
    if style == "poly":
        if x.value == 0:
            return "0"
        terms = [
            _monomial_name(m) for m in range(x.value.bit_length() - 1, -1, -1)
            if (x.value >> m) & 1
        ]
        return " + ".join(terms)
    raise ValueError(f"unknown format style {style!r}")


def random_element(level: int, seed: int) -> TowerElement:
    """Deterministic pseudo-uniform element for a (level, seed) pair."""
    rng = random.Random(f"tower/{level}/{seed}")
    return TowerElement(level, rng.getrandbits(width_of(level)))
