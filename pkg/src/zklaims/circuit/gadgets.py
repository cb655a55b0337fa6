"""Boolean and 32-bit word gadgets with constant folding.

A :class:`Bit` is either a constant or a (possibly negated) allocated
variable.  Operations on constants cost no constraints and negation is free,
which is what keeps the fixed SHA-256 padding and IV out of the circuit.
Words are lists of 32 bits, most significant bit first.
"""

from __future__ import annotations

from .r1cs import ONE, ConstraintSystem


class Bit:
    __slots__ = ("var", "neg", "value")

    def __init__(self, var: int | None, value: int, neg: bool = False):
        self.var = var
        self.value = value
        self.neg = neg

    @property
    def is_constant(self) -> bool:
        return self.var is None

    def lc(self) -> dict:
        if self.var is None:
            return {ONE: 1} if self.value else {}
        if self.neg:
            return {ONE: 1, self.var: -1}
        return {self.var: 1}

    def __repr__(self):
        if self.var is None:
            return f"Bit({self.value})"
        return f"Bit({'~' if self.neg else ''}v{self.var}={self.value})"


ZERO = Bit(None, 0)
TRUE = Bit(None, 1)


def const(value: int) -> Bit:
    return TRUE if value else ZERO


def alloc_bit(cs: ConstraintSystem, value: int) -> Bit:
    var = cs.alloc(value)
    cs.enforce_boolean(var)
    return Bit(var, value)


def not_(a: Bit) -> Bit:
    if a.var is None:
        return const(1 - a.value)
    return Bit(a.var, 1 - a.value, not a.neg)


def _add_into(acc: dict, lc: dict, scale: int = 1) -> dict:
    for v, k in lc.items():
        acc[v] = acc.get(v, 0) + scale * k
    return acc


def xor(cs: ConstraintSystem, a: Bit, b: Bit) -> Bit:
    if a.var is None:
        return not_(b) if a.value else b
    if b.var is None:
        return not_(a) if b.value else a
    neg = a.neg != b.neg
    if a.var == b.var:
        return const(int(neg))
    # xor the raw variables and push both negations onto the result
    x = a.value ^ a.neg
    y = b.value ^ b.neg
    z = cs.alloc(x ^ y)
    cs.enforce({a.var: 2}, {b.var: 1}, {a.var: 1, b.var: 1, z: -1})
    return Bit(z, (x ^ y) ^ neg, neg)


def and_(cs: ConstraintSystem, a: Bit, b: Bit) -> Bit:
    if a.var is None:
        return b if a.value else ZERO
    if b.var is None:
        return a if b.value else ZERO
    value = a.value & b.value
    c = cs.alloc(value)
    cs.enforce(a.lc(), b.lc(), {c: 1})
    return Bit(c, value)


def or_(cs: ConstraintSystem, a: Bit, b: Bit) -> Bit:
    return not_(and_(cs, not_(a), not_(b)))


def ch(cs: ConstraintSystem, e: Bit, f: Bit, g: Bit) -> Bit:
    """``f if e else g`` in one constraint: e * (f - g) = ch - g."""
    if e.var is None:
        return f if e.value else g
    if f.var is None and g.var is None:
        if f.value == g.value:
            return f
        return e if f.value else not_(e)
    value = f.value if e.value else g.value
    out = cs.alloc(value)
    g_lc = g.lc()
    cs.enforce(e.lc(), _add_into(f.lc(), g_lc, -1), _add_into({out: 1}, g_lc, -1))
    return Bit(out, value)


def maj(cs: ConstraintSystem, a: Bit, b: Bit, c: Bit) -> Bit:
    """Majority of three bits: maj = bc + a * (b + c - 2bc)."""
    for k, x, y in ((a, b, c), (b, a, c), (c, a, b)):
        if k.var is None:
            return or_(cs, x, y) if k.value else and_(cs, x, y)
    bc = and_(cs, b, c)
    value = (a.value & b.value) | (a.value & c.value) | (b.value & c.value)
    out = cs.alloc(value)
    bc_lc = bc.lc()
    rhs = _add_into(_add_into(b.lc(), c.lc()), bc_lc, -2)
    cs.enforce(a.lc(), rhs, _add_into({out: 1}, bc_lc, -1))
    return Bit(out, value)


Word = list  # 32 Bits, MSB first


def const_word(value: int) -> Word:
    return [const((value >> (31 - i)) & 1) for i in range(32)]


def word_value(word: Word) -> int:
    out = 0
    for bit in word:
        out = (out << 1) | bit.value
    return out


def rotr(word: Word, n: int) -> Word:
    return word[-n:] + word[:-n]


def shr(word: Word, n: int) -> Word:
    return [ZERO] * n + word[:-n]


def xor_words(cs: ConstraintSystem, *words: Word) -> Word:
    out = words[0]
    for w in words[1:]:
        out = [xor(cs, x, y) for x, y in zip(out, w)]
    return out


def unpack_lc(cs: ConstraintSystem, lc: dict | None, value: int, nbits: int) -> list[Bit]:
    """Decompose ``value`` (which must equal ``lc``) into ``nbits`` boolean wires, LSB first."""
    bits = [alloc_bit(cs, (value >> k) & 1) for k in range(nbits)]
    if cs.recording:
        packed = {}
        for k, bit in enumerate(bits):
            packed[bit.var] = 1 << k
        cs.enforce(_add_into(packed, lc, -1), {ONE: 1}, {})
    return bits


def add_words(cs: ConstraintSystem, words: list[Word], constant: int = 0) -> Word:
    """Sum of 32-bit words (plus a constant) modulo 2^32."""
    total = constant
    variable = False
    for w in words:
        total += word_value(w)
        variable = variable or any(bit.var is not None for bit in w)
    if not variable:
        return const_word(total & 0xFFFFFFFF)
    lc: dict | None = None
    if cs.recording:
        lc = {ONE: constant} if constant else {}
        for w in words:
            for i, bit in enumerate(w):
                weight = 1 << (31 - i)
                if bit.var is None:
                    if bit.value:
                        lc[ONE] = lc.get(ONE, 0) + weight
                elif bit.neg:
                    lc[ONE] = lc.get(ONE, 0) + weight
                    lc[bit.var] = lc.get(bit.var, 0) - weight
                else:
                    lc[bit.var] = lc.get(bit.var, 0) + weight
    bound = len(words) * 0xFFFFFFFF + constant
    bits = unpack_lc(cs, lc, total, bound.bit_length())
    return bits[:32][::-1]
