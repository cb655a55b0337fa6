"""Binary formats for proving keys, verification keys and proofs.

Every file starts with ``magic(4) | version u8 | hash_id u8 | payload_count u16 | flags u8``
(little-endian); ``flags`` bit 0 marks keys from a seeded, test-only setup.
Points use the canonical compressed encoding (48 bytes in G1, 96 in G2).
Verification keys and proofs are subgroup-checked on load; proving-key
points are not, since the proving key only ever hurts its own holder.
"""

from __future__ import annotations

import struct

from py_arkworks_bls12381 import G1Point, G2Point

from ..errors import FormatError
from .groth16 import G1_BYTES, G2_BYTES, PROOF_BYTES, Proof, ProvingKey, VerificationKey

VERSION = 1
PK_MAGIC = b"ZKPK"
VK_MAGIC = b"ZKVK"
PROOF_MAGIC = b"ZKPF"
FLAG_SEEDED = 0x01

_HEADER = struct.Struct("<4sBBHB")


def _header(magic: bytes, hash_id: int, payload_count: int, flags: int = 0) -> bytes:
    return _HEADER.pack(magic, VERSION, hash_id, payload_count, flags)


class _Reader:
    def __init__(self, data: bytes, magic: bytes):
        self.data = bytes(data)
        self.off = 0
        if len(self.data) < _HEADER.size:
            raise FormatError("file truncated before header")
        got, version, self.hash_id, self.payload_count, self.flags = _HEADER.unpack_from(self.data)
        if got != magic:
            raise FormatError(f"bad magic {got!r}, expected {magic!r}")
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        self.off = _HEADER.size

    def take(self, n: int) -> bytes:
        if self.off + n > len(self.data):
            raise FormatError("file truncated")
        out = self.data[self.off: self.off + n]
        self.off += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def point(self, group, checked: bool = True):
        raw = self.take(G1_BYTES if group is G1Point else G2_BYTES)
        try:
            if checked:
                return group.from_compressed_bytes(raw)
            return group.from_compressed_bytes_unchecked(raw)
        except ValueError as exc:
            raise FormatError(f"invalid curve point: {exc}") from None

    def points(self, group, n: int, checked: bool = True) -> list:
        return [self.point(group, checked) for _ in range(n)]

    def done(self) -> None:
        if self.off != len(self.data):
            raise FormatError(f"{len(self.data) - self.off} trailing bytes")


def _pts(points) -> bytes:
    return b"".join(bytes(p.to_compressed_bytes()) for p in points)


def proving_key_to_bytes(pk: ProvingKey) -> bytes:
    parts = [
        _header(PK_MAGIC, pk.hash_id, pk.payload_count, FLAG_SEEDED if pk.seeded else 0),
        pk.fingerprint,
        struct.pack("<III", pk.num_inputs, pk.num_variables, pk.domain_size),
        _pts([pk.alpha_g1, pk.beta_g1, pk.beta_g2, pk.delta_g1, pk.delta_g2]),
        _pts(pk.a_query),
        _pts(pk.b_g1_query),
        _pts(pk.b_g2_query),
        _pts(pk.l_query),
        _pts(pk.h_query),
    ]
    return b"".join(parts)


def proving_key_from_bytes(data: bytes) -> ProvingKey:
    rd = _Reader(data, PK_MAGIC)
    fingerprint = rd.take(32)
    num_inputs, num_variables, domain_size = rd.u32(), rd.u32(), rd.u32()
    if num_variables <= num_inputs or domain_size < 2:
        raise FormatError("inconsistent proving key dimensions")
    expected = (
        rd.off + 3 * G1_BYTES + 2 * G2_BYTES
        + num_variables * (2 * G1_BYTES + G2_BYTES)
        + (num_variables - num_inputs - 1) * G1_BYTES
        + (domain_size - 1) * G1_BYTES
    )
    if expected != len(rd.data):
        raise FormatError(f"proving key length {len(rd.data)} != {expected}")
    g1 = lambda: rd.point(G1Point, checked=False)  # noqa: E731
    alpha_g1 = g1()
    beta_g1 = g1()
    beta_g2 = rd.point(G2Point, checked=False)
    delta_g1 = g1()
    delta_g2 = rd.point(G2Point, checked=False)
    pk = ProvingKey(
        hash_id=rd.hash_id,
        payload_count=rd.payload_count,
        seeded=bool(rd.flags & FLAG_SEEDED),
        fingerprint=fingerprint,
        num_inputs=num_inputs,
        num_variables=num_variables,
        domain_size=domain_size,
        alpha_g1=alpha_g1,
        beta_g1=beta_g1,
        beta_g2=beta_g2,
        delta_g1=delta_g1,
        delta_g2=delta_g2,
        a_query=rd.points(G1Point, num_variables, checked=False),
        b_g1_query=rd.points(G1Point, num_variables, checked=False),
        b_g2_query=rd.points(G2Point, num_variables, checked=False),
        l_query=rd.points(G1Point, num_variables - num_inputs - 1, checked=False),
        h_query=rd.points(G1Point, domain_size - 1, checked=False),
    )
    rd.done()
    return pk


def verification_key_to_bytes(vk: VerificationKey) -> bytes:
    return b"".join([
        _header(VK_MAGIC, vk.hash_id, vk.payload_count, FLAG_SEEDED if vk.seeded else 0),
        vk.fingerprint,
        _pts([vk.alpha_g1, vk.beta_g2, vk.gamma_g2, vk.delta_g2]),
        struct.pack("<I", len(vk.ic)),
        _pts(vk.ic),
    ])


def verification_key_from_bytes(data: bytes) -> VerificationKey:
    rd = _Reader(data, VK_MAGIC)
    fingerprint = rd.take(32)
    alpha_g1 = rd.point(G1Point)
    beta_g2, gamma_g2, delta_g2 = rd.points(G2Point, 3)
    n_ic = rd.u32()
    if n_ic < 1 or rd.off + n_ic * G1_BYTES != len(rd.data):
        raise FormatError("verification key IC length mismatch")
    ic = rd.points(G1Point, n_ic)
    rd.done()
    return VerificationKey(
        hash_id=rd.hash_id,
        payload_count=rd.payload_count,
        seeded=bool(rd.flags & FLAG_SEEDED),
        fingerprint=fingerprint,
        alpha_g1=alpha_g1,
        beta_g2=beta_g2,
        gamma_g2=gamma_g2,
        delta_g2=delta_g2,
        ic=ic,
    )


def proof_from_bytes(data: bytes) -> Proof:
    """Parse the fixed-length 192-byte proof encoding."""
    data = bytes(data)
    if len(data) != PROOF_BYTES:
        raise FormatError(f"proof must be {PROOF_BYTES} bytes, got {len(data)}")
    try:
        a = G1Point.from_compressed_bytes(data[:G1_BYTES])
        b = G2Point.from_compressed_bytes(data[G1_BYTES: G1_BYTES + G2_BYTES])
        c = G1Point.from_compressed_bytes(data[G1_BYTES + G2_BYTES:])
    except ValueError as exc:
        raise FormatError(f"invalid proof point: {exc}") from None
    return Proof(a, b, c)


def proof_file_to_bytes(proof: Proof, hash_id: int, payload_count: int) -> bytes:
    return _header(PROOF_MAGIC, hash_id, payload_count) + proof.to_bytes()


def proof_file_from_bytes(data: bytes) -> tuple[Proof, int, int]:
    rd = _Reader(data, PROOF_MAGIC)
    proof = proof_from_bytes(rd.take(PROOF_BYTES))
    rd.done()
    return proof, rd.hash_id, rd.payload_count
