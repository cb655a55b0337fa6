"""Algorithm identifiers for payload hashing and credential signatures."""

from __future__ import annotations

import hashlib

from .errors import UnsupportedHash

HASH_SHA256 = 1
SIG_ED25519 = 1

HASH_NAMES = {HASH_SHA256: "sha256"}
SIG_NAMES = {SIG_ED25519: "ed25519"}


def payload_digest(hash_id: int, packed: bytes) -> bytes:
    """Native digest of a packed 256-bit payload pre-image."""
    if hash_id == HASH_SHA256:
        return hashlib.sha256(packed).digest()
    raise UnsupportedHash(f"no hash registered under id {hash_id}")
