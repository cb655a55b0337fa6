"""SHA-256 as a circuit over :class:`~zklaims.circuit.gadgets.Bit` words."""

from __future__ import annotations

from .gadgets import Bit, Word, add_words, ch, const, const_word, maj, rotr, shr, xor_words
from .r1cs import ConstraintSystem

IV = (
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
)

K = (
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1, 0x923F82A4, 0xAB1C5ED5,
    0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3, 0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174,
    0xE49B69C1, 0xEFBE4786, 0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147, 0x06CA6351, 0x14292967,
    0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13, 0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85,
    0xA2BFE8A1, 0xA81A664B, 0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A, 0x5B9CCA4F, 0x682E6FF3,
    0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208, 0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
)


def compress(cs: ConstraintSystem, state: list[Word], block: list[Bit]) -> list[Word]:
    assert len(block) == 512
    w = [block[32 * i: 32 * (i + 1)] for i in range(16)]
    for t in range(16, 64):
        s0 = xor_words(cs, rotr(w[t - 15], 7), rotr(w[t - 15], 18), shr(w[t - 15], 3))
        s1 = xor_words(cs, rotr(w[t - 2], 17), rotr(w[t - 2], 19), shr(w[t - 2], 10))
        w.append(add_words(cs, [w[t - 16], s0, w[t - 7], s1]))

    a, b, c, d, e, f, g, h = state
    for t in range(64):
        big_s1 = xor_words(cs, rotr(e, 6), rotr(e, 11), rotr(e, 25))
        choice = [ch(cs, x, y, z) for x, y, z in zip(e, f, g)]
        big_s0 = xor_words(cs, rotr(a, 2), rotr(a, 13), rotr(a, 22))
        majority = [maj(cs, x, y, z) for x, y, z in zip(a, b, c)]
        t1 = [h, big_s1, choice, w[t]]
        new_e = add_words(cs, [d] + t1, K[t])
        new_a = add_words(cs, t1 + [big_s0, majority], K[t])
        a, b, c, d, e, f, g, h = new_a, a, b, c, new_e, e, f, g

    return [add_words(cs, [old, new]) for old, new in zip(state, (a, b, c, d, e, f, g, h))]


def sha256_bits(cs: ConstraintSystem, message: list[Bit]) -> list[Bit]:
    """Digest bits (MSB first) of a message whose length is fixed at build time."""
    length = len(message)
    padded = list(message) + [const(1)]
    while len(padded) % 512 != 448:
        padded.append(const(0))
    padded += [const((length >> (63 - i)) & 1) for i in range(64)]
    state = [const_word(v) for v in IV]
    for off in range(0, len(padded), 512):
        state = compress(cs, state, padded[off: off + 512])
    return [bit for word in state for bit in word]
