"""Offline verification of a ZKlaims context."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from . import snark
from .errors import FormatError, ShapeError, ZklaimsError
from .issuer import issuer_id_for, verify_credential_signature
from .prover import Statement, ZklaimsContext
from .snark import VerificationKey

EXIT_OK = 0
EXIT_SIGNATURE = 2
EXIT_SEMANTICS = 3
EXIT_PROOF = 4
EXIT_MALFORMED = 5


@dataclass(frozen=True)
class VerificationReport:
    signature_ok: bool
    proof_ok: bool
    semantics_ok: bool
    failure_detail: str | None = None
    malformed: bool = False

    @property
    def overall(self) -> bool:
        return self.signature_ok and self.proof_ok and self.semantics_ok and not self.malformed

    @property
    def exit_code(self) -> int:
        if self.malformed:
            return EXIT_MALFORMED
        if not self.signature_ok:
            return EXIT_SIGNATURE
        if not self.semantics_ok:
            return EXIT_SEMANTICS
        if not self.proof_ok:
            return EXIT_PROOF
        return EXIT_OK

    def to_dict(self) -> dict:
        d = asdict(self)
        d["overall"] = self.overall
        return d


def verify_context(
    vk: VerificationKey, issuer_public_key: bytes, context: ZklaimsContext, expected: Statement
) -> VerificationReport:
    """Signature, then semantics, then the proof; stops at the first failure."""
    if len(context.x.field_elements) != vk.num_inputs:
        raise ShapeError(f"verification key expects {vk.num_inputs} public inputs, context has {len(context.x.field_elements)}")

    try:
        sig_ok = context.issuer_id == issuer_id_for(issuer_public_key) and verify_credential_signature(
            issuer_public_key, context.schema_id, context.issuer_id, context.x.y, context.signature
        )
    except FormatError as exc:
        return VerificationReport(False, False, False, f"malformed signature material: {exc}", malformed=True)
    if not sig_ok:
        return VerificationReport(False, False, False, "issuer signature over y does not verify")

    if context.x.p != expected.masks or context.x.r != expected.references:
        got = _describe(Statement(context.x.p, context.x.r)) if _canonical(context) else "(non-canonical)"
        detail = f"statement mismatch: expected [{_describe(expected)}], context proves [{got}]"
        return VerificationReport(True, False, False, detail)

    proof_ok = snark.verify(vk, context.proof, context.x)
    return VerificationReport(True, proof_ok, True, None if proof_ok else "zkSNARK proof does not verify")


def _describe(statement: Statement) -> str:
    return "; ".join(statement.to_dsl().splitlines()) or "no predicates"


def _canonical(context: ZklaimsContext) -> bool:
    try:
        Statement(context.x.p, context.x.r)
    except ZklaimsError:
        return False
    return True


def verify_context_json(vk: VerificationKey, issuer_public_key: bytes, context_json: str | bytes, expected: Statement) -> VerificationReport:
    """Like :func:`verify_context`, but malformed input becomes a report instead of an exception."""
    try:
        context = ZklaimsContext.from_json(context_json)
        return verify_context(vk, issuer_public_key, context, expected)
    except (FormatError, ShapeError) as exc:
        return VerificationReport(False, False, False, f"malformed input: {exc}", malformed=True)
