"""ZKlaims: issuer-signed attribute credentials with zkSNARK predicate proofs.

Typical flow::

    kp = IssuerKeypair.generate()
    schema = new_schema(kp.issuer_id, ["age", "country"])
    descriptor, pk, vk = bootstrap_issuer(schema)
    cred = issue_credential(kp, schema, {"age": 30, "country": 276})
    ctx = create_context(pk, cred, parse_statement("age >= 18", schema))
    verify_context(vk, kp.public_key, ctx, parse_statement("age >= 18", schema)).overall
"""

from .directory import Directory, NamespaceRecord, RecordKind
from .encoding import ANY, PredicateMask, PublicInput, encode_predicate, evaluate_predicate
from .errors import ZklaimsError
from .issuer import (
    Credential,
    CredentialSchema,
    IssuerKeypair,
    bootstrap_issuer,
    check_credential,
    issue_credential,
    new_schema,
)
from .prover import Statement, ZklaimsContext, create_context, disclosure_statement, parse_statement
from .verifier import VerificationReport, verify_context

__version__ = "0.1.0"

__all__ = [
    "ANY",
    "Credential",
    "CredentialSchema",
    "Directory",
    "IssuerKeypair",
    "NamespaceRecord",
    "PredicateMask",
    "PublicInput",
    "RecordKind",
    "Statement",
    "VerificationReport",
    "ZklaimsContext",
    "ZklaimsError",
    "bootstrap_issuer",
    "check_credential",
    "create_context",
    "disclosure_statement",
    "encode_predicate",
    "evaluate_predicate",
    "issue_credential",
    "new_schema",
    "parse_statement",
    "verify_context",
]
