"""Statements, proof generation and the persistable ZKlaims context (π, x, S)."""

from __future__ import annotations

import base64
import json
import re
from dataclasses import dataclass
from typing import Mapping

from . import circuit, snark
from .encoding import (
    ANY,
    SLOTS_PER_PAYLOAD,
    PredicateMask,
    PublicInput,
    assemble_public_input,
    check_attribute,
    encode_predicate,
)
from .errors import (
    DuplicateClause,
    FormatError,
    KeyMismatch,
    NoncePredicateForbidden,
    ParseError,
    RangeError,
    ShapeError,
    UnknownSlot,
)
from .issuer import Credential, CredentialSchema
from .snark import Proof, ProvingKey


@dataclass(frozen=True)
class Statement:
    """One (mask, reference) pair per slot; unmentioned slots are (any, 0)."""

    masks: tuple[PredicateMask, ...]
    references: tuple[int, ...]

    def __post_init__(self):
        n = len(self.masks)
        if n == 0 or n % SLOTS_PER_PAYLOAD or len(self.references) != n:
            raise ShapeError(f"statement needs 5*m masks and references, got {n} and {len(self.references)}")
        if not self.masks[-1].is_noop:
            raise NoncePredicateForbidden("the nonce slot cannot carry a predicate")
        for mask, ref in zip(self.masks, self.references):
            check_attribute(ref, "reference")
            if mask.is_noop and ref != 0:
                raise ParseError("a slot without predicate must have reference 0")

    @property
    def payload_count(self) -> int:
        return len(self.masks) // SLOTS_PER_PAYLOAD

    @classmethod
    def trivial(cls, payload_count: int) -> Statement:
        n = SLOTS_PER_PAYLOAD * payload_count
        return cls((ANY,) * n, (0,) * n)

    @classmethod
    def from_clauses(cls, payload_count: int, clauses: Mapping[int, tuple[PredicateMask | str, int]]) -> Statement:
        n = SLOTS_PER_PAYLOAD * payload_count
        masks, refs = [ANY] * n, [0] * n
        for slot, (mask, ref) in clauses.items():
            if not 0 <= slot < n:
                raise UnknownSlot(f"slot {slot} outside [0, {n})")
            mask = encode_predicate(mask) if isinstance(mask, str) else mask
            if not mask.is_noop:
                masks[slot], refs[slot] = mask, ref
        return cls(tuple(masks), tuple(refs))

    def clauses(self) -> dict[int, tuple[PredicateMask, int]]:
        return {i: (m, r) for i, (m, r) in enumerate(zip(self.masks, self.references)) if not m.is_noop}

    def to_dsl(self) -> str:
        return "".join(f"slot{i} {m.symbol} {r}\n" for i, (m, r) in self.clauses().items())


_CLAUSE = re.compile(r"^\s*(?P<slot>[A-Za-z_][A-Za-z0-9_.-]*)\s*(?P<op><=|>=|!=|==|=|<|>|≤|≥|≠|≮|≯)\s*(?P<ref>\S+)\s*$")


def parse_statement(dsl_text: str, schema: CredentialSchema | int) -> Statement:
    """Parse ``slot<INDEX> <OP> <UINT>`` clauses (or ``<label> <OP> <UINT>``), one per line."""
    if isinstance(schema, CredentialSchema):
        m, labels = schema.payload_count, schema.slot_labels
    else:
        m, labels = schema, None
    n = SLOTS_PER_PAYLOAD * m
    clauses: dict[int, tuple[PredicateMask, int]] = {}
    for lineno, raw in enumerate(dsl_text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _CLAUSE.match(line)
        if not match:
            raise ParseError(f"line {lineno}: expected '<slot> <op> <uint>', got {raw!r}")
        name = match["slot"]
        if re.fullmatch(r"slot\d+", name):
            slot = int(name[4:])
            if slot >= n:
                raise UnknownSlot(f"line {lineno}: slot {slot} outside [0, {n})")
        elif labels is not None and name in labels:
            slot = labels.index(name)
        else:
            raise UnknownSlot(f"line {lineno}: unknown slot {name!r}")
        if slot == n - 1:
            raise NoncePredicateForbidden(f"line {lineno}: the nonce slot cannot carry a predicate")
        if slot in clauses:
            raise DuplicateClause(f"line {lineno}: slot {slot} already has a clause")
        if not match["ref"].isdigit():
            raise ParseError(f"line {lineno}: reference must be an unsigned integer")
        try:
            ref = check_attribute(int(match["ref"]), "reference")
        except RangeError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        clauses[slot] = (encode_predicate(match["op"]), ref)
    return Statement.from_clauses(m, clauses)


def disclosure_statement(schema: CredentialSchema, credential: Credential, labels) -> Statement:
    """Equality clauses that reveal exactly the listed attributes."""
    clauses = {}
    for label in labels:
        slot = schema.slot_index(label)
        if slot == schema.nonce_slot:
            raise NoncePredicateForbidden("the nonce cannot be disclosed")
        clauses[slot] = (encode_predicate("="), credential.attributes[slot])
    return Statement.from_clauses(schema.payload_count, clauses)


@dataclass(frozen=True)
class ZklaimsContext:
    """Everything a verifier needs besides vk, the issuer key and its own expectation."""

    proof: Proof
    x: PublicInput
    signature: bytes
    issuer_id: str
    schema_id: str

    @property
    def statement(self) -> Statement:
        return Statement(self.x.p, self.x.r)

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_id": self.schema_id,
                "issuer_id": self.issuer_id,
                "proof": base64.b64encode(self.proof.to_bytes()).decode(),
                "y": [d.hex() for d in self.x.y],
                "p": [m.mask for m in self.x.p],
                "r": [str(v) for v in self.x.r],
                "S": base64.b64encode(self.signature).decode(),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str | bytes) -> ZklaimsContext:
        try:
            d = json.loads(text)
            proof = snark.proof_from_bytes(base64.b64decode(d["proof"], validate=True))
            if not all(isinstance(v, str) and v.isdigit() for v in d["r"]):
                raise ValueError("references must be decimal strings")
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in d["p"]):
                raise ValueError("masks must be integers")
            x = assemble_public_input([bytes.fromhex(h) for h in d["y"]], d["p"], [int(v) for v in d["r"]])
            sig = base64.b64decode(d["S"], validate=True)
            schema_id, issuer_id = d["schema_id"], d["issuer_id"]
            if not isinstance(schema_id, str) or not isinstance(issuer_id, str):
                raise ValueError("ids must be strings")
        except FormatError:
            raise
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise FormatError(f"bad context: {exc}") from None
        return cls(proof, x, sig, issuer_id, schema_id)


def create_context(pk: ProvingKey, credential: Credential, statement: Statement) -> ZklaimsContext:
    m = pk.payload_count
    if len(credential.y) != m or statement.payload_count != m:
        raise KeyMismatch(f"proving key is for {m} payload(s); credential has {len(credential.y)}, statement {statement.payload_count}")
    descriptor = circuit.build_constraint_system(m, pk.hash_id)
    if descriptor.fingerprint != pk.fingerprint:
        raise KeyMismatch("proving key was not generated for this constraint system")
    witness = circuit.synthesize_witness(descriptor, credential, statement)
    x = assemble_public_input(credential.y, statement.masks, statement.references)
    proof = snark.prove(pk, witness, x)
    return ZklaimsContext(proof, x, credential.signature, credential.issuer_id, credential.schema_id)
