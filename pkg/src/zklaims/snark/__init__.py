"""Groth16 backend: Setup, Prove, Verify and their file formats."""

from .groth16 import PROOF_BYTES, Proof, ProvingKey, VerificationKey, prove, setup, verify
from .serialize import (
    proof_file_from_bytes,
    proof_file_to_bytes,
    proof_from_bytes,
    proving_key_from_bytes,
    proving_key_to_bytes,
    verification_key_from_bytes,
    verification_key_to_bytes,
)

__all__ = [
    "PROOF_BYTES",
    "Proof",
    "ProvingKey",
    "VerificationKey",
    "proof_file_from_bytes",
    "proof_file_to_bytes",
    "proof_from_bytes",
    "prove",
    "proving_key_from_bytes",
    "proving_key_to_bytes",
    "setup",
    "verification_key_from_bytes",
    "verification_key_to_bytes",
    "verify",
]
