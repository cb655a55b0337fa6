"""Canonical encodings for attributes, payloads, predicates and public inputs.

Everything that crosses the native/circuit boundary is defined here once:

* an attribute is an unsigned 50-bit integer;
* five attributes form a 256-bit payload pre-image (5 x 50 bits, most
  significant slot first, then 6 zero padding bits);
* a predicate is a 3-bit mask over the one-hot comparison outcome
  ``(lt, eq, gt)`` of an attribute against a reference value;
* the public input is ``y | p | r`` flattened to field elements, with each
  256-bit digest split into a high and a low 128-bit half.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FormatError, ParseError, RangeError, ShapeError

ATTRIBUTE_BITS = 50
ATTRIBUTE_LIMIT = 1 << ATTRIBUTE_BITS
SLOTS_PER_PAYLOAD = 5
PAYLOAD_BITS = 256
PAD_BITS = PAYLOAD_BITS - SLOTS_PER_PAYLOAD * ATTRIBUTE_BITS
DIGEST_BYTES = 32
FIELD_ELEMENTS_PER_PAYLOAD = 2 + 2 * SLOTS_PER_PAYLOAD

LT, EQ, GT = 0b001, 0b010, 0b100
NOOP = LT | EQ | GT

_SYMBOL_TO_MASK = {
    "<": LT,
    "=": EQ,
    "==": EQ,
    ">": GT,
    "<=": LT | EQ,
    ">=": EQ | GT,
    "!=": LT | GT,
    "any": NOOP,
    # complements as written in the literature
    "≮": EQ | GT,
    "≠": LT | GT,
    "≯": LT | EQ,
    "≤": LT | EQ,
    "≥": EQ | GT,
}

_MASK_TO_SYMBOL = {LT: "<", EQ: "=", GT: ">", LT | EQ: "<=", EQ | GT: ">=", LT | GT: "!=", NOOP: "any"}


def check_attribute(value: int, what: str = "attribute") -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise RangeError(f"{what} must be an integer, got {type(value).__name__}")
    if not 0 <= value < ATTRIBUTE_LIMIT:
        raise RangeError(f"{what} {value} outside [0, 2^{ATTRIBUTE_BITS})")
    return value


@dataclass(frozen=True)
class PredicateMask:
    """3-bit selector: bit0 = lt, bit1 = eq, bit2 = gt."""

    mask: int

    def __post_init__(self):
        if isinstance(self.mask, bool) or not isinstance(self.mask, int):
            raise RangeError("predicate mask must be an integer")
        if not 1 <= self.mask <= NOOP:
            raise RangeError(f"predicate mask {self.mask:#05b} outside [1, 7]")

    @property
    def is_noop(self) -> bool:
        return self.mask == NOOP

    @property
    def symbol(self) -> str:
        return _MASK_TO_SYMBOL[self.mask]

    def complement(self) -> PredicateMask:
        return PredicateMask(self.mask ^ NOOP)

    def __int__(self) -> int:
        return self.mask


ANY = PredicateMask(NOOP)


def encode_predicate(symbol: str) -> PredicateMask:
    try:
        return PredicateMask(_SYMBOL_TO_MASK[symbol.strip()])
    except (KeyError, AttributeError):
        raise ParseError(f"unknown predicate symbol {symbol!r}") from None


def evaluate_predicate(mask: PredicateMask | int, a: int, r: int) -> bool:
    """Native oracle: is the outcome bit selected by sign(a - r) set in ``mask``?"""
    m = int(mask)
    check_attribute(a)
    check_attribute(r, "reference")
    if a < r:
        return bool(m & LT)
    if a == r:
        return bool(m & EQ)
    return bool(m & GT)


@dataclass(frozen=True)
class PayloadPreimage:
    slots: tuple[int, ...]
    packed: bytes

    @property
    def bits(self) -> list[int]:
        """The 256 pre-image bits, most significant first."""
        n = int.from_bytes(self.packed, "big")
        return [(n >> (PAYLOAD_BITS - 1 - i)) & 1 for i in range(PAYLOAD_BITS)]


def pack_payload(slots: Sequence[int]) -> PayloadPreimage:
    if len(slots) != SLOTS_PER_PAYLOAD:
        raise ShapeError(f"a payload holds exactly {SLOTS_PER_PAYLOAD} slots, got {len(slots)}")
    acc = 0
    for value in slots:
        acc = (acc << ATTRIBUTE_BITS) | check_attribute(value)
    acc <<= PAD_BITS
    return PayloadPreimage(tuple(slots), acc.to_bytes(PAYLOAD_BITS // 8, "big"))


def unpack_payload(packed: bytes) -> PayloadPreimage:
    if len(packed) != PAYLOAD_BITS // 8:
        raise ShapeError("packed payload must be 32 bytes")
    n = int.from_bytes(packed, "big")
    if n & ((1 << PAD_BITS) - 1):
        raise FormatError("payload padding bits are not zero")
    n >>= PAD_BITS
    mask = ATTRIBUTE_LIMIT - 1
    slots = [(n >> (ATTRIBUTE_BITS * (SLOTS_PER_PAYLOAD - 1 - i))) & mask for i in range(SLOTS_PER_PAYLOAD)]
    return PayloadPreimage(tuple(slots), bytes(packed))


def split_digest(digest: bytes) -> tuple[int, int]:
    if len(digest) != DIGEST_BYTES:
        raise ShapeError(f"digest must be {DIGEST_BYTES} bytes, got {len(digest)}")
    return int.from_bytes(digest[:16], "big"), int.from_bytes(digest[16:], "big")


@dataclass(frozen=True)
class PublicInput:
    """The public proof input ``x = y | p | r``."""

    y: tuple[bytes, ...]
    p: tuple[PredicateMask, ...]
    r: tuple[int, ...]

    @property
    def payload_count(self) -> int:
        return len(self.y)

    @property
    def field_elements(self) -> list[int]:
        out: list[int] = []
        for digest in self.y:
            out.extend(split_digest(digest))
        out.extend(m.mask for m in self.p)
        out.extend(self.r)
        return out

    def to_bytes(self) -> bytes:
        parts = [struct.pack("<H", len(self.y))]
        parts.extend(self.y)
        parts.append(bytes(m.mask for m in self.p))
        parts.extend(struct.pack("<Q", v) for v in self.r)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> PublicInput:
        if len(data) < 2:
            raise FormatError("public input truncated")
        (m,) = struct.unpack_from("<H", data)
        slots = SLOTS_PER_PAYLOAD * m
        expected = 2 + DIGEST_BYTES * m + slots + 8 * slots
        if len(data) != expected:
            raise FormatError(f"public input length {len(data)} != {expected}")
        off = 2
        y = tuple(data[off + DIGEST_BYTES * j: off + DIGEST_BYTES * (j + 1)] for j in range(m))
        off += DIGEST_BYTES * m
        try:
            p = [PredicateMask(b) for b in data[off: off + slots]]
        except RangeError as exc:
            raise FormatError(str(exc)) from None
        off += slots
        r = [v for (v,) in struct.iter_unpack("<Q", data[off:])]
        try:
            return assemble_public_input(y, p, r)
        except RangeError as exc:
            raise FormatError(str(exc)) from None


def assemble_public_input(
    y: Iterable[bytes], p: Iterable[PredicateMask | int], r: Iterable[int]
) -> PublicInput:
    y = tuple(bytes(d) for d in y)
    p = tuple(m if isinstance(m, PredicateMask) else PredicateMask(m) for m in p)
    r = tuple(r)
    if not y:
        raise ShapeError("public input needs at least one digest")
    if len(p) != SLOTS_PER_PAYLOAD * len(y) or len(r) != SLOTS_PER_PAYLOAD * len(y):
        raise ShapeError(
            f"|p|={len(p)}, |r|={len(r)} must both equal {SLOTS_PER_PAYLOAD}*|y|={SLOTS_PER_PAYLOAD * len(y)}"
        )
    for d in y:
        if len(d) != DIGEST_BYTES:
            raise ShapeError(f"digest must be {DIGEST_BYTES} bytes, got {len(d)}")
    for v in r:
        check_attribute(v, "reference")
    return PublicInput(y, p, r)


def public_input_arity(payload_count: int) -> int:
    return FIELD_ELEMENTS_PER_PAYLOAD * payload_count
