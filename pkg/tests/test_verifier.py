import dataclasses
import json
import random

import pytest

from conftest import issuer, keys, schema
from zklaims import snark
from zklaims.encoding import PredicateMask, assemble_public_input
from zklaims.errors import FormatError, ShapeError
from zklaims.issuer import IssuerKeypair, issue_credential, sign_credential
from zklaims.prover import create_context, parse_statement
from zklaims.verifier import (
    EXIT_MALFORMED,
    EXIT_OK,
    EXIT_PROOF,
    EXIT_SEMANTICS,
    EXIT_SIGNATURE,
    VerificationReport,
    verify_context,
    verify_context_json,
)

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def honest():
    sc = schema(1)
    cred = issue_credential(issuer(), sc, {"attr0": 18, "attr1": 7, "attr2": 9, "attr3": 1000})
    st_ = parse_statement("attr0 >= 18", sc)
    ctx = create_context(keys(1)[0], cred, st_)
    return cred, st_, ctx


def check(ctx, expected, vk=None, pub=None):
    return verify_context(vk or keys(1)[1], pub or issuer().public_key, ctx, expected)


def test_report_overall_is_conjunction():
    for bits in range(8):
        s, p, m = bool(bits & 1), bool(bits & 2), bool(bits & 4)
        r = VerificationReport(s, p, m)
        assert r.overall == (s and p and m)
        assert (r.exit_code == EXIT_OK) == r.overall
    assert VerificationReport(True, True, True, malformed=True).exit_code == EXIT_MALFORMED


def test_honest(honest):
    _, st_, ctx = honest
    rep = check(ctx, st_)
    assert rep.overall and rep.signature_ok and rep.proof_ok and rep.semantics_ok and rep.exit_code == 0


def test_semantic_mismatch(honest):
    _, _, ctx = honest
    rep = check(ctx, parse_statement("slot0 >= 21", 1))
    assert rep.signature_ok and not rep.semantics_ok and not rep.overall
    assert rep.exit_code == EXIT_SEMANTICS
    assert "slot0 >= 21" in rep.failure_detail and "slot0 >= 18" in rep.failure_detail
    # a stronger claim is not accepted in place of the requested one either
    assert not check(ctx, parse_statement("slot0 >= 17", 1)).overall
    assert not check(ctx, parse_statement("", 1)).overall


def test_foreign_signature(honest):
    _, st_, ctx = honest
    other = IssuerKeypair.generate()
    forged = dataclasses.replace(ctx, signature=sign_credential(other, ctx.schema_id, ctx.issuer_id, ctx.x.y))
    rep = check(forged, st_)
    assert not rep.signature_ok and rep.exit_code == EXIT_SIGNATURE
    # nor does presenting the other key help, since issuer_id no longer matches it
    assert not check(forged, st_, pub=other.public_key).signature_ok


def test_wrong_schema_id(honest):
    _, st_, ctx = honest
    assert not check(dataclasses.replace(ctx, schema_id="another"), st_).signature_ok


def test_tampered_proof(honest):
    _, st_, ctx = honest
    # a proof for the same x but different randomness is fine; a proof for different x is not
    cred2 = issue_credential(issuer(), schema(1), {"attr0": 40, "attr1": 7, "attr2": 9, "attr3": 1000})
    ctx2 = create_context(keys(1)[0], cred2, st_)
    swapped = dataclasses.replace(ctx, proof=ctx2.proof)
    rep = check(swapped, st_)
    assert rep.signature_ok and rep.semantics_ok and not rep.proof_ok and rep.exit_code == EXIT_PROOF


def test_arity_mismatch(honest):
    _, st_, ctx = honest
    with pytest.raises(ShapeError):
        check(ctx, st_, vk=keys(2)[1])


def test_json_entry_point(honest):
    _, st_, ctx = honest
    assert verify_context_json(keys(1)[1], issuer().public_key, ctx.to_json(), st_).overall
    rep = verify_context_json(keys(1)[1], issuer().public_key, "{}", st_)
    assert rep.malformed and rep.exit_code == EXIT_MALFORMED and not rep.overall
    d = json.loads(ctx.to_json())
    d["S"] = d["S"][:8]
    rep = verify_context_json(keys(1)[1], issuer().public_key, json.dumps(d), st_)
    assert rep.exit_code == EXIT_MALFORMED


def test_single_field_mutations(honest):
    """Every single-field change of a valid context is rejected."""
    _, st_, ctx = honest
    rng = random.Random(3)
    x = ctx.x
    mutants = []
    raw = bytearray(ctx.proof.to_bytes())
    for pos in (0, 47, 48, 100, 143, 144, 191):
        b = bytearray(raw)
        b[pos] ^= 1 << rng.randrange(8)
        mutants.append(("proof", b))
    d = bytearray(x.y[0])
    d[rng.randrange(32)] ^= 1
    mutants.append(("y", assemble_public_input([bytes(d)], x.p, x.r)))
    for i in range(5):
        for m in range(1, 8):
            if m != x.p[i].mask:
                p = list(x.p)
                p[i] = PredicateMask(m)
                mutants.append(("p", assemble_public_input(x.y, p, x.r)))
        r = list(x.r)
        r[i] = (r[i] + 1) % 2**50
        mutants.append(("r", assemble_public_input(x.y, x.p, r)))
    s = bytearray(ctx.signature)
    s[rng.randrange(64)] ^= 1
    mutants.append(("S", bytes(s)))

    for field, value in mutants:
        if field == "proof":
            try:
                mutated = dataclasses.replace(ctx, proof=snark.proof_from_bytes(bytes(value)))
            except FormatError:
                continue  # not even a valid encoding
        elif field == "S":
            mutated = dataclasses.replace(ctx, signature=value)
        else:
            mutated = dataclasses.replace(ctx, x=value)
        assert not check(mutated, st_).overall, field
