import hashlib
import random
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import CLAUSE_SYMBOLS, MASK_OF, oracle_digest, oracle_holds, oracle_pack, random_attr
from zklaims import circuit
from zklaims.circuit.gadgets import ZERO, alloc_bit
from zklaims.circuit.predicate import compare_slot
from zklaims.circuit.r1cs import ConstraintSystem, first_unsatisfied
from zklaims.circuit.sha256 import sha256_bits
from zklaims.encoding import ANY, assemble_public_input, encode_predicate
from zklaims.errors import DigestMismatch, FormatError, ShapeError, UnsatisfiableStatement, UnsupportedHash


def sha_system(message_bits, constant_tail=0):
    cs = ConstraintSystem(0)
    var = message_bits[: len(message_bits) - constant_tail]
    bits = [alloc_bit(cs, b) for b in var] + [ZERO] * constant_tail
    out = sha256_bits(cs, bits)
    return cs, [b.value for b in out]


def bits_of(data: bytes):
    return [(byte >> (7 - i)) & 1 for byte in data for i in range(8)]


@pytest.mark.parametrize("seed", range(4))
def test_sha256_gadget_matches_hashlib(seed):
    data = random.Random(seed).randbytes(32)
    cs, out = sha_system(bits_of(data))
    assert out == bits_of(hashlib.sha256(data).digest())
    assert first_unsatisfied(cs.a, cs.b, cs.c, cs.values) is None


def test_sha256_gadget_with_constant_padding():
    slots = [1, 2, 3, 4, (1 << 50) - 1]
    cs, out = sha_system(bits_of(oracle_pack(slots)), constant_tail=6)
    assert out == bits_of(oracle_digest(slots))
    assert first_unsatisfied(cs.a, cs.b, cs.c, cs.values) is None


def test_sha256_gadget_detects_wrong_wire():
    cs, _ = sha_system(bits_of(bytes(32)))
    values = list(cs.values)
    # flip some internal boolean wire far from the inputs
    idx = len(values) // 2
    values[idx] = 1 - values[idx] if values[idx] in (0, 1) else values[idx] + 1
    assert first_unsatisfied(cs.a, cs.b, cs.c, values) is not None


def slot_system(mask: int, a: int, r: int):
    cs = ConstraintSystem(2)
    mv, rv = cs.input(mask), cs.input(r)
    bits = [alloc_bit(cs, (a >> (49 - i)) & 1) for i in range(50)]
    wires = compare_slot(cs, bits, mv, rv)
    return cs, wires


def slot_satisfied(mask, a, r):
    cs, _ = slot_system(mask, a, r)
    return first_unsatisfied(cs.a, cs.b, cs.c, cs.values) is None


@pytest.mark.parametrize("mask", range(1, 8))
def test_slot_gadget_small_exhaustive(mask):
    sym = {v: k for k, v in MASK_OF.items()}[mask]
    for a in range(12):
        for r in range(12):
            assert slot_satisfied(mask, a, r) == oracle_holds(sym, a, r), (sym, a, r)


@given(sym=st.sampled_from(CLAUSE_SYMBOLS), a=st.integers(0, (1 << 50) - 1), r=st.integers(0, (1 << 50) - 1))
@settings(max_examples=150, deadline=None)
def test_slot_gadget_wide_values(sym, a, r):
    assert slot_satisfied(MASK_OF[sym], a, r) == oracle_holds(sym, a, r)


@given(a=st.integers(0, (1 << 50) - 1), r=st.integers(0, (1 << 50) - 1))
@settings(max_examples=60, deadline=None)
def test_slot_outcome_is_one_hot(a, r):
    cs, wires = slot_system(7, a, r)
    assert wires.outcome(cs.values) == (int(a < r), int(a == r), int(a > r))


def test_slot_gadget_boundaries():
    top = (1 << 50) - 1
    for a, r in [(0, 0), (0, top), (top, 0), (top, top), (top - 1, top)]:
        for sym in CLAUSE_SYMBOLS:
            assert slot_satisfied(MASK_OF[sym], a, r) == oracle_holds(sym, a, r)


def test_slot_gadget_rejects_mask_zero():
    assert not slot_satisfied(0, 5, 5)


def test_slot_constraint_budget():
    cs, _ = slot_system(7, 1, 2)
    # 50 value bits are allocated by the caller; the comparison itself stays small
    assert cs.num_constraints - 50 < 70


@pytest.fixture(scope="module")
def desc1():
    return circuit.build_constraint_system(1)


def test_descriptor_shape(desc1):
    assert desc1.num_inputs == 12
    assert desc1.total_slots == 5
    assert len(desc1.slots) == 5
    assert len(desc1.payload_vars) == 1 and len(desc1.payload_vars[0]) == 250
    assert circuit.build_constraint_system(1) is desc1


def test_descriptor_roundtrip(desc1):
    raw = desc1.to_bytes()
    assert circuit.ConstraintSystemDescriptor.from_bytes(raw).to_bytes() == raw
    for i in range(len(raw)):
        bad = bytearray(raw)
        bad[i] ^= 0x01
        with pytest.raises(FormatError):
            circuit.ConstraintSystemDescriptor.from_bytes(bytes(bad))
    with pytest.raises(FormatError):
        circuit.ConstraintSystemDescriptor.from_bytes(raw + b"\0")


@pytest.mark.parametrize("m", [0, 65, -1, "1"])
def test_descriptor_bad_count(m):
    with pytest.raises(ValueError):
        circuit.build_constraint_system(m)


def test_descriptor_bad_hash():
    with pytest.raises(UnsupportedHash):
        circuit.build_constraint_system(1, 9)


def make_cred(attrs):
    m = len(attrs) // 5
    y = [oracle_digest(attrs[5 * j: 5 * j + 5]) for j in range(m)]
    return SimpleNamespace(attributes=attrs, y=y)


def make_statement(m, clauses):
    masks, refs = [ANY] * 5 * m, [0] * 5 * m
    for s, (sym, r) in clauses.items():
        masks[s], refs[s] = encode_predicate(sym), r
    return SimpleNamespace(masks=masks, references=refs)


def test_witness_satisfies_and_exposes_layout(desc1):
    rng = random.Random(7)
    attrs = [random_attr(rng) for _ in range(5)]
    st_ = make_statement(1, {0: ("<=", attrs[0]), 2: ("!=", attrs[2] + 1)})
    w = circuit.synthesize_witness(desc1, make_cred(attrs), st_)
    assert desc1.is_satisfied(w)
    x = assemble_public_input(make_cred(attrs).y, st_.masks, st_.references)
    assert w.public_values == x.field_elements
    assert w.payload_bits[0] == bits_of(oracle_pack(attrs))
    for k, a in enumerate(attrs):
        r = st_.references[k]
        assert w.outcome(k) == (int(a < r), int(a == r), int(a > r))


def test_witness_two_payloads():
    desc = circuit.build_constraint_system(2)
    rng = random.Random(8)
    attrs = [random_attr(rng) for _ in range(10)]
    st_ = make_statement(2, {6: (">=", attrs[6])})
    w = circuit.synthesize_witness(desc, make_cred(attrs), st_)
    assert desc.is_satisfied(w)
    assert [bits_of(oracle_pack(attrs[:5])), bits_of(oracle_pack(attrs[5:]))] == w.payload_bits


def test_false_statement_fails_natively_and_in_circuit(desc1):
    attrs = [10, 20, 30, 40, 50]
    st_ = make_statement(1, {1: ("<", 20)})
    with pytest.raises(UnsatisfiableStatement) as exc:
        circuit.synthesize_witness(desc1, make_cred(attrs), st_)
    assert exc.value.slot == 1
    # bypass the native check: the constraint system itself refuses
    x = assemble_public_input(make_cred(attrs).y, st_.masks, st_.references)
    w = circuit.assign_witness(desc1, attrs, x)
    assert desc1.first_unsatisfied(w) is not None


def test_wrong_digest_is_unsatisfiable(desc1):
    attrs = [1, 2, 3, 4, 5]
    cred = make_cred(attrs)
    cred.y = [hashlib.sha256(b"other").digest()]
    with pytest.raises(DigestMismatch):
        circuit.synthesize_witness(desc1, cred, make_statement(1, {}))
    x = assemble_public_input(cred.y, [ANY] * 5, [0] * 5)
    assert not desc1.is_satisfied(circuit.assign_witness(desc1, attrs, x))


def test_shape_errors(desc1):
    with pytest.raises(ShapeError):
        circuit.synthesize_witness(desc1, make_cred([1] * 10), make_statement(2, {}))
    with pytest.raises(ShapeError):
        circuit.synthesize_witness(desc1, make_cred([1] * 5), make_statement(2, {}))
