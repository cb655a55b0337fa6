"""Credential schemas, issuer keys, credential issuance and the one-time setup."""

from __future__ import annotations

import base64
import hashlib
import json
import re
import secrets
from dataclasses import dataclass
from typing import Mapping, Sequence

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey

from . import circuit, snark
from .encoding import ATTRIBUTE_BITS, DIGEST_BYTES, SLOTS_PER_PAYLOAD, check_attribute, pack_payload
from .errors import FormatError, KeyMismatch, MissingAttribute, ParseError, UnknownSlot
from .hashes import HASH_NAMES, HASH_SHA256, SIG_ED25519, SIG_NAMES, payload_digest

NONCE_LABEL = "nonce"
RESERVED_PREFIX = "_"
CREDENTIAL_TAG = b"ZKLAIMS-CRED-v1"
SIGNATURE_BYTES = 64
PUBLIC_KEY_BYTES = 32

_ID_RE = re.compile(r"^[A-Za-z0-9._:-]{1,128}$")
_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]{0,63}$")


def issuer_id_for(public_key: bytes) -> str:
    return hashlib.sha256(bytes(public_key)).hexdigest()


def _load_public_key(public_key: bytes) -> Ed25519PublicKey:
    if not isinstance(public_key, (bytes, bytearray)) or len(public_key) != PUBLIC_KEY_BYTES:
        raise FormatError("issuer public key must be 32 raw bytes")
    return Ed25519PublicKey.from_public_bytes(bytes(public_key))


@dataclass(frozen=True)
class IssuerKeypair:
    """An Ed25519 key pair; the issuer (or namespace) id is the SHA-256 of its public key."""

    signing_key: Ed25519PrivateKey

    @classmethod
    def generate(cls) -> IssuerKeypair:
        return cls(Ed25519PrivateKey.generate())

    @classmethod
    def from_secret(cls, secret: bytes) -> IssuerKeypair:
        if len(secret) != 32:
            raise FormatError("secret key must be 32 bytes")
        return cls(Ed25519PrivateKey.from_private_bytes(bytes(secret)))

    @property
    def secret_bytes(self) -> bytes:
        from cryptography.hazmat.primitives import serialization

        return self.signing_key.private_bytes(
            serialization.Encoding.Raw, serialization.PrivateFormat.Raw, serialization.NoEncryption()
        )

    @property
    def public_key(self) -> bytes:
        from cryptography.hazmat.primitives import serialization

        return self.signing_key.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)

    @property
    def issuer_id(self) -> str:
        return issuer_id_for(self.public_key)

    def sign(self, message: bytes) -> bytes:
        return self.signing_key.sign(message)

    def to_json(self) -> str:
        return json.dumps(
            {"issuer_id": self.issuer_id, "public_key": self.public_key.hex(), "secret_key": self.secret_bytes.hex()},
            indent=2,
        ) + "\n"

    def public_json(self) -> str:
        return public_key_json(self.public_key)

    @classmethod
    def from_json(cls, text: str) -> IssuerKeypair:
        try:
            data = json.loads(text)
            kp = cls.from_secret(bytes.fromhex(data["secret_key"]))
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"bad key file: {exc}") from None
        if data.get("issuer_id", kp.issuer_id) != kp.issuer_id:
            raise FormatError("key file issuer_id does not match its key")
        return kp


def public_key_json(public_key: bytes) -> str:
    return json.dumps({"issuer_id": issuer_id_for(public_key), "public_key": bytes(public_key).hex()}, indent=2) + "\n"


def public_key_from_json(text: str) -> bytes:
    try:
        data = json.loads(text)
        pub = bytes.fromhex(data["public_key"])
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad public key file: {exc}") from None
    _load_public_key(pub)
    if data.get("issuer_id", issuer_id_for(pub)) != issuer_id_for(pub):
        raise FormatError("public key file issuer_id does not match its key")
    return pub


@dataclass(frozen=True)
class CredentialSchema:
    schema_id: str
    issuer_id: str
    payload_count: int
    slot_labels: tuple[str, ...]
    hash_algorithm_id: int = HASH_SHA256
    signature_algorithm_id: int = SIG_ED25519

    def __post_init__(self):
        if not _ID_RE.match(self.schema_id) or not _ID_RE.match(self.issuer_id):
            raise ParseError("schema_id and issuer_id must match [A-Za-z0-9._:-]{1,128}")
        if not isinstance(self.payload_count, int) or not 1 <= self.payload_count <= circuit.system.MAX_PAYLOADS:
            raise ParseError(f"payload_count must be in [1, {circuit.system.MAX_PAYLOADS}]")
        if len(self.slot_labels) != SLOTS_PER_PAYLOAD * self.payload_count:
            raise ParseError(f"need {SLOTS_PER_PAYLOAD * self.payload_count} slot labels, got {len(self.slot_labels)}")
        if self.slot_labels[-1] != NONCE_LABEL:
            raise ParseError("last slot label must be 'nonce'")
        if len(set(self.slot_labels)) != len(self.slot_labels):
            raise ParseError("slot labels must be unique")
        for label in self.slot_labels:
            if not _LABEL_RE.match(label) or re.fullmatch(r"slot\d+", label):
                raise ParseError(f"invalid slot label {label!r}")
        if self.hash_algorithm_id not in HASH_NAMES or self.signature_algorithm_id not in SIG_NAMES:
            raise ParseError("unknown hash or signature algorithm id")

    @property
    def total_slots(self) -> int:
        return SLOTS_PER_PAYLOAD * self.payload_count

    @property
    def nonce_slot(self) -> int:
        return self.total_slots - 1

    def slot_index(self, label: str) -> int:
        try:
            return self.slot_labels.index(label)
        except ValueError:
            raise UnknownSlot(f"schema has no slot labelled {label!r}") from None

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_id": self.schema_id,
                "issuer_id": self.issuer_id,
                "payload_count": self.payload_count,
                "slot_labels": list(self.slot_labels),
                "hash_id": self.hash_algorithm_id,
                "sig_id": self.signature_algorithm_id,
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CredentialSchema:
        try:
            d = json.loads(text)
            return cls(
                d["schema_id"], d["issuer_id"], d["payload_count"], tuple(d["slot_labels"]), d["hash_id"], d["sig_id"]
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"bad schema file: {exc}") from None


def new_schema(
    issuer_id: str,
    labels: Sequence[str],
    payload_count: int | None = None,
    schema_id: str | None = None,
    hash_algorithm_id: int = HASH_SHA256,
) -> CredentialSchema:
    """Lay ``labels`` out over payloads; unused slots get reserved ``_padN`` labels."""
    labels = list(labels)
    if payload_count is None:
        payload_count = max(1, -(-(len(labels) + 1) // SLOTS_PER_PAYLOAD))
    free = SLOTS_PER_PAYLOAD * payload_count - 1
    if len(labels) > free:
        raise ParseError(f"{len(labels)} labels do not fit in {payload_count} payload(s) ({free} slots + nonce)")
    labels += [f"{RESERVED_PREFIX}pad{i}" for i in range(len(labels), free)]
    if schema_id is None:
        schema_id = "schema-" + secrets.token_hex(8)
    return CredentialSchema(schema_id, issuer_id, payload_count, tuple(labels) + (NONCE_LABEL,), hash_algorithm_id)


@dataclass(frozen=True)
class Credential:
    """C = (a, y, S): attribute values (the last one is the nonce), payload digests, issuer signature."""

    schema_id: str
    issuer_id: str
    attributes: tuple[int, ...]
    y: tuple[bytes, ...]
    signature: bytes

    @property
    def nonce(self) -> int:
        return self.attributes[-1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_id": self.schema_id,
                "issuer_id": self.issuer_id,
                "attributes": [str(a) for a in self.attributes],
                "y": [d.hex() for d in self.y],
                "S": base64.b64encode(self.signature).decode(),
            },
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Credential:
        try:
            d = json.loads(text)
            attrs = tuple(int(a) for a in d["attributes"])
            y = tuple(bytes.fromhex(h) for h in d["y"])
            sig = base64.b64decode(d["S"], validate=True)
            cred = cls(d["schema_id"], d["issuer_id"], attrs, y, sig)
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"bad credential file: {exc}") from None
        if any(len(h) != DIGEST_BYTES for h in y) or len(attrs) != SLOTS_PER_PAYLOAD * len(y):
            raise FormatError("credential shape is inconsistent")
        for a in attrs:
            check_attribute(a)
        return cred


def credential_message(schema_id: str, issuer_id: str, y: Sequence[bytes]) -> bytes:
    # NUL separators keep the variable-length ids unambiguous
    return CREDENTIAL_TAG + issuer_id.encode() + b"\0" + schema_id.encode() + b"\0" + b"".join(bytes(d) for d in y)


def sign_credential(signing_key: IssuerKeypair | Ed25519PrivateKey, schema_id: str, issuer_id: str, y: Sequence[bytes]) -> bytes:
    if not y:
        raise ValueError("cannot sign an empty digest vector")
    key = signing_key.signing_key if isinstance(signing_key, IssuerKeypair) else signing_key
    return key.sign(credential_message(schema_id, issuer_id, y))


def verify_credential_signature(
    issuer_public_key: bytes, schema_id: str, issuer_id: str, y: Sequence[bytes], signature: bytes
) -> bool:
    if not isinstance(signature, (bytes, bytearray)) or len(signature) != SIGNATURE_BYTES:
        raise FormatError(f"signature must be {SIGNATURE_BYTES} bytes")
    key = _load_public_key(issuer_public_key)
    try:
        key.verify(bytes(signature), credential_message(schema_id, issuer_id, y))
    except InvalidSignature:
        return False
    return True


def recompute_digests(credential: Credential, hash_algorithm_id: int = HASH_SHA256) -> tuple[bytes, ...]:
    a = credential.attributes
    return tuple(
        payload_digest(hash_algorithm_id, pack_payload(a[j: j + SLOTS_PER_PAYLOAD]).packed)
        for j in range(0, len(a), SLOTS_PER_PAYLOAD)
    )


def check_credential(credential: Credential, issuer_public_key: bytes, schema: CredentialSchema) -> tuple[bool, bool]:
    """(digests match the attributes, signature verifies) for a stored credential."""
    digests_ok = recompute_digests(credential, schema.hash_algorithm_id) == tuple(credential.y)
    sig_ok = (
        credential.issuer_id == issuer_id_for(issuer_public_key)
        and verify_credential_signature(
            issuer_public_key, credential.schema_id, credential.issuer_id, credential.y, credential.signature
        )
    )
    return digests_ok, sig_ok


def issue_credential(keypair: IssuerKeypair, schema: CredentialSchema, values: Mapping[str, int]) -> Credential:
    if keypair.issuer_id != schema.issuer_id:
        raise KeyMismatch("signing key does not belong to the schema's issuer")
    for label in values:
        if label == NONCE_LABEL:
            raise ParseError("the nonce is chosen by the issuer")
        schema.slot_index(label)
    attributes = []
    for label in schema.slot_labels[:-1]:
        if label in values:
            attributes.append(check_attribute(values[label], label))
        elif label.startswith(RESERVED_PREFIX):
            attributes.append(0)
        else:
            raise MissingAttribute(label)
    attributes.append(secrets.randbits(ATTRIBUTE_BITS))
    attributes = tuple(attributes)
    y = tuple(
        payload_digest(schema.hash_algorithm_id, pack_payload(attributes[j: j + SLOTS_PER_PAYLOAD]).packed)
        for j in range(0, len(attributes), SLOTS_PER_PAYLOAD)
    )
    signature = sign_credential(keypair, schema.schema_id, schema.issuer_id, y)
    return Credential(schema.schema_id, schema.issuer_id, attributes, y, signature)


def bootstrap_issuer(schema: CredentialSchema, seed: bytes | None = None):
    """Build φ for the schema and run the one-time setup: (descriptor, pk, vk)."""
    descriptor = circuit.build_constraint_system(schema.payload_count, schema.hash_algorithm_id)
    pk, vk = snark.setup(descriptor, seed)
    return descriptor, pk, vk
