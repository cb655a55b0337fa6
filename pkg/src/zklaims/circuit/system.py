"""The ZKlaims constraint system: hash binding plus one predicate gadget per slot."""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from ..encoding import (
    ATTRIBUTE_BITS,
    SLOTS_PER_PAYLOAD,
    ANY,
    PublicInput,
    assemble_public_input,
    evaluate_predicate,
    pack_payload,
    public_input_arity,
)
from ..errors import DigestMismatch, FormatError, ShapeError, UnsatisfiableStatement, UnsupportedHash
from ..hashes import HASH_SHA256, payload_digest
from .gadgets import ZERO, Bit, _add_into, alloc_bit
from .predicate import SlotWires, compare_slot
from .r1cs import ONE, ConstraintSystem, first_unsatisfied
from .sha256 import sha256_bits

MAX_PAYLOADS = 64
DESCRIPTOR_MAGIC = b"ZKCS"
DESCRIPTOR_VERSION = 1
_HEADER = struct.Struct("<4sBBH")
_BODY = struct.Struct("<III32s")

_HASH_GADGETS = {HASH_SHA256: sha256_bits}


def _pack_enforce(cs: ConstraintSystem, bits: list[Bit], public_var: int) -> None:
    lc: dict = {public_var: -1}
    n = len(bits)
    for i, bit in enumerate(bits):
        _add_into(lc, bit.lc(), 1 << (n - 1 - i))
    cs.enforce(lc, {ONE: 1}, {})


def _synthesize(
    cs: ConstraintSystem, hash_id: int, payloads: Sequence[Sequence[int]], x: PublicInput
) -> tuple[list[SlotWires], list[list[int]]]:
    m = len(payloads)
    inputs = [cs.input(v) for v in x.field_elements]
    masks = inputs[2 * m: 2 * m + SLOTS_PER_PAYLOAD * m]
    refs = inputs[2 * m + SLOTS_PER_PAYLOAD * m:]
    hash_gadget = _HASH_GADGETS[hash_id]
    used = SLOTS_PER_PAYLOAD * ATTRIBUTE_BITS
    slots: list[SlotWires] = []
    payload_vars: list[list[int]] = []
    for j, values in enumerate(payloads):
        pre_bits = pack_payload(values).bits
        bits = [alloc_bit(cs, b) for b in pre_bits[:used]] + [ZERO] * (len(pre_bits) - used)
        payload_vars.append([bit.var for bit in bits[:used]])
        digest = hash_gadget(cs, bits)
        _pack_enforce(cs, digest[:128], inputs[2 * j])
        _pack_enforce(cs, digest[128:], inputs[2 * j + 1])
        for k in range(SLOTS_PER_PAYLOAD):
            idx = SLOTS_PER_PAYLOAD * j + k
            slot_bits = bits[ATTRIBUTE_BITS * k: ATTRIBUTE_BITS * (k + 1)]
            slots.append(compare_slot(cs, slot_bits, masks[idx], refs[idx]))
    return slots, payload_vars


@dataclass(eq=False)
class ConstraintSystemDescriptor:
    """φ for a fixed payload count: R1CS matrices plus layout metadata."""

    payload_count: int
    hash_algorithm_id: int
    num_inputs: int
    num_variables: int
    a: list
    b: list
    c: list
    slots: list[SlotWires]
    payload_vars: list[list[int]]
    _fingerprint: bytes | None = field(default=None, repr=False)

    @property
    def total_slots(self) -> int:
        return SLOTS_PER_PAYLOAD * self.payload_count

    @property
    def constraint_count(self) -> int:
        return len(self.a)

    @property
    def public_input_arity(self) -> int:
        return self.num_inputs

    @property
    def fingerprint(self) -> bytes:
        """SHA-256 over the canonical encoding of the constraint matrices."""
        if self._fingerprint is None:
            h = hashlib.sha256(self._header())
            h.update(struct.pack("<III", self.constraint_count, self.num_variables, self.num_inputs))
            for rows in (self.a, self.b, self.c):
                for row in rows:
                    h.update(repr(row).encode())
                    h.update(b";")
            self._fingerprint = h.digest()
        return self._fingerprint

    def _header(self) -> bytes:
        return _HEADER.pack(DESCRIPTOR_MAGIC, DESCRIPTOR_VERSION, self.hash_algorithm_id, self.payload_count)

    def to_bytes(self) -> bytes:
        body = _BODY.pack(self.constraint_count, self.num_variables, self.num_inputs, self.fingerprint)
        return self._header() + body

    @classmethod
    def from_bytes(cls, data: bytes) -> ConstraintSystemDescriptor:
        if len(data) != _HEADER.size + _BODY.size:
            raise FormatError("descriptor has wrong length")
        magic, version, hash_id, m = _HEADER.unpack_from(data)
        if magic != DESCRIPTOR_MAGIC or version != DESCRIPTOR_VERSION:
            raise FormatError("not a ZKlaims constraint system descriptor")
        count, nvars, ninputs, fp = _BODY.unpack_from(data, _HEADER.size)
        try:
            desc = build_constraint_system(m, hash_id)
        except (ValueError, UnsupportedHash) as exc:
            raise FormatError(str(exc)) from None
        if (count, nvars, ninputs, fp) != (desc.constraint_count, desc.num_variables, desc.num_inputs, desc.fingerprint):
            raise FormatError("descriptor does not match the regenerated constraint system")
        return desc

    def is_satisfied(self, assignment: WitnessAssignment) -> bool:
        return self.first_unsatisfied(assignment) is None

    def first_unsatisfied(self, assignment: WitnessAssignment) -> int | None:
        return first_unsatisfied(self.a, self.b, self.c, assignment.values)


@dataclass(eq=False)
class WitnessAssignment:
    """Full variable assignment: [1, public inputs..., private wires...]."""

    descriptor: ConstraintSystemDescriptor
    values: list[int]

    @property
    def public_values(self) -> list[int]:
        return self.values[1: 1 + self.descriptor.num_inputs]

    @property
    def payload_bits(self) -> list[list[int]]:
        """The m x 256 private pre-image bits (padding bits are constant zero)."""
        pad = [0] * (256 - SLOTS_PER_PAYLOAD * ATTRIBUTE_BITS)
        return [[self.values[v] for v in vars_] + pad for vars_ in self.descriptor.payload_vars]

    def outcome(self, slot: int) -> tuple[int, int, int]:
        """The (lt, eq, gt) wires of ``slot`` under this assignment."""
        return self.descriptor.slots[slot].outcome(self.values)


@lru_cache(maxsize=8)
def build_constraint_system(payload_count: int, hash_algorithm_id: int = HASH_SHA256) -> ConstraintSystemDescriptor:
    if not isinstance(payload_count, int) or not 1 <= payload_count <= MAX_PAYLOADS:
        raise ValueError(f"payload_count must be in [1, {MAX_PAYLOADS}], got {payload_count}")
    if hash_algorithm_id not in _HASH_GADGETS:
        raise UnsupportedHash(f"no circuit gadget for hash id {hash_algorithm_id}")
    zeros = [[0] * SLOTS_PER_PAYLOAD for _ in range(payload_count)]
    y = [payload_digest(hash_algorithm_id, pack_payload(p).packed) for p in zeros]
    n = SLOTS_PER_PAYLOAD * payload_count
    x = assemble_public_input(y, [ANY] * n, [0] * n)
    cs = ConstraintSystem(public_input_arity(payload_count), recording=True)
    slots, payload_vars = _synthesize(cs, hash_algorithm_id, zeros, x)
    return ConstraintSystemDescriptor(
        payload_count, hash_algorithm_id, cs.num_inputs, cs.num_variables, cs.a, cs.b, cs.c, slots, payload_vars
    )


def assign_witness(
    descriptor: ConstraintSystemDescriptor, attributes: Sequence[int], x: PublicInput
) -> WitnessAssignment:
    """Run the circuit on concrete values without any native pre-checks.

    The result may violate constraints (wrong digest, false predicate); use
    :meth:`ConstraintSystemDescriptor.first_unsatisfied` to find out.
    """
    m = descriptor.payload_count
    if len(attributes) != SLOTS_PER_PAYLOAD * m:
        raise ShapeError(f"expected {SLOTS_PER_PAYLOAD * m} attributes, got {len(attributes)}")
    if x.payload_count != m:
        raise ShapeError(f"public input has {x.payload_count} payloads, descriptor {m}")
    payloads = [attributes[SLOTS_PER_PAYLOAD * j: SLOTS_PER_PAYLOAD * (j + 1)] for j in range(m)]
    cs = ConstraintSystem(descriptor.num_inputs, recording=False)
    _synthesize(cs, descriptor.hash_algorithm_id, payloads, x)
    if cs.num_variables != descriptor.num_variables:
        raise ShapeError("witness layout diverged from the constraint system")
    return WitnessAssignment(descriptor, cs.values)


def synthesize_witness(descriptor: ConstraintSystemDescriptor, credential, statement) -> WitnessAssignment:
    """Witness for proving ``statement`` about ``credential``.

    Digests and predicates are checked natively first, so a false statement
    fails with the offending slot index instead of an opaque constraint index.
    """
    m = descriptor.payload_count
    attributes = list(credential.attributes)
    masks = list(statement.masks)
    refs = list(statement.references)
    n = SLOTS_PER_PAYLOAD * m
    if len(attributes) != n or len(credential.y) != m:
        raise ShapeError(f"credential shape does not match a {m}-payload constraint system")
    if len(masks) != n or len(refs) != n:
        raise ShapeError(f"statement must have {n} clauses, got {len(masks)}")
    for j in range(m):
        packed = pack_payload(attributes[SLOTS_PER_PAYLOAD * j: SLOTS_PER_PAYLOAD * (j + 1)]).packed
        if payload_digest(descriptor.hash_algorithm_id, packed) != bytes(credential.y[j]):
            raise DigestMismatch(f"payload {j} does not hash to the credential digest")
    for i, (mask, a, r) in enumerate(zip(masks, attributes, refs)):
        if not evaluate_predicate(mask, a, r):
            raise UnsatisfiableStatement(i)
    x = assemble_public_input(credential.y, masks, refs)
    return assign_witness(descriptor, attributes, x)
