import os
import struct

import pytest
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PublicKey
from hypothesis import given, settings
from hypothesis import strategies as st

from zklaims.directory import MAX_BLOB, Directory, NamespaceRecord, RecordKind, make_record
from zklaims.errors import FormatError, InvalidRecordSignature, NotFound, OversizeBlob
from zklaims.issuer import IssuerKeypair

OWNER = IssuerKeypair.from_secret(b"\x01" * 32)
OTHER = IssuerKeypair.from_secret(b"\x02" * 32)


def test_publish_resolve(tmp_path):
    d = Directory(tmp_path)
    rec = d.publish(OWNER, "vk", "vk", b"key bytes")
    assert rec.namespace_id == OWNER.issuer_id
    got = d.resolve(OWNER.issuer_id, "vk")
    assert got.blob == b"key bytes" and got.kind == RecordKind.VK
    assert (tmp_path / OWNER.issuer_id / "vk").is_file()
    assert d.labels(OWNER.issuer_id) == ["vk"]


def test_republish_overwrites(tmp_path):
    d = Directory(tmp_path)
    d.publish(OWNER, "ctx", RecordKind.CONTEXT, b"one")
    d.publish(OWNER, "ctx", RecordKind.CONTEXT, b"two")
    assert d.resolve(OWNER.issuer_id, "ctx").blob == b"two"
    assert [p.name for p in (tmp_path / OWNER.issuer_id).iterdir()] == ["ctx"]


def test_not_found(tmp_path):
    d = Directory(tmp_path)
    with pytest.raises(NotFound):
        d.resolve(OWNER.issuer_id, "missing")
    d.publish(OWNER, "a", "schema", b"{}")
    with pytest.raises(NotFound):
        d.resolve(OTHER.issuer_id, "a")


def test_record_signature_is_over_label_kind_blob(tmp_path):
    rec = Directory(tmp_path).publish(OWNER, "lbl", "descriptor", b"\x00\x01")
    msg = struct.pack("<H", 3) + b"lbl" + bytes([RecordKind.DESCRIPTOR]) + b"\x00\x01"
    Ed25519PublicKey.from_public_bytes(OWNER.public_key).verify(rec.record_signature, msg)


def test_every_byte_flip_is_caught(tmp_path):
    d = Directory(tmp_path)
    d.publish(OWNER, "vk", "vk", b"some verification key bytes")
    path = tmp_path / OWNER.issuer_id / "vk"
    good = path.read_bytes()
    for i in range(len(good)):
        bad = bytearray(good)
        bad[i] ^= 0x40
        path.write_bytes(bytes(bad))
        with pytest.raises((InvalidRecordSignature, FormatError)):
            d.resolve(OWNER.issuer_id, "vk")
    path.write_bytes(good)
    assert d.resolve(OWNER.issuer_id, "vk").blob == b"some verification key bytes"


def test_record_moved_to_other_namespace(tmp_path):
    d = Directory(tmp_path)
    d.publish(OTHER, "vk", "vk", b"attacker key")
    (tmp_path / OWNER.issuer_id).mkdir()
    os.replace(tmp_path / OTHER.issuer_id / "vk", tmp_path / OWNER.issuer_id / "vk")
    with pytest.raises(InvalidRecordSignature):
        d.resolve(OWNER.issuer_id, "vk")


def test_record_renamed(tmp_path):
    d = Directory(tmp_path)
    d.publish(OWNER, "old", "context", b"ctx")
    os.replace(tmp_path / OWNER.issuer_id / "old", tmp_path / OWNER.issuer_id / "new")
    with pytest.raises(InvalidRecordSignature):
        d.resolve(OWNER.issuer_id, "new")


def test_size_cap(tmp_path):
    d = Directory(tmp_path)
    with pytest.raises(OversizeBlob):
        d.publish(OWNER, "pk", "pk", b"\0" * (MAX_BLOB + 1))
    d.publish(OWNER, "pk", "pk", b"\0" * 10)
    assert not any(p.name.startswith(".tmp") for p in (tmp_path / OWNER.issuer_id).iterdir())


@pytest.mark.parametrize("label", ["", "../x", "a/b", ".hidden", "x" * 200])
def test_bad_labels(tmp_path, label):
    with pytest.raises(ValueError):
        Directory(tmp_path).publish(OWNER, label, "vk", b"x")


def test_empty_blob_and_kind(tmp_path):
    d = Directory(tmp_path)
    with pytest.raises(ValueError):
        d.publish(OWNER, "x", "vk", b"")
    with pytest.raises(ValueError):
        d.publish(OWNER, "x", "nonsense", b"x")
    d.publish(OWNER, "x", "vk", b"x")
    with pytest.raises(FormatError):
        d.resolve(OWNER.issuer_id, "x", kind="context")


def test_resolve_does_not_touch_store(tmp_path):
    d = Directory(tmp_path)
    d.publish(OWNER, "v", "vk", b"abc")
    path = tmp_path / OWNER.issuer_id / "v"
    before = (path.read_bytes(), path.stat().st_mtime_ns)
    for _ in range(3):
        d.resolve(OWNER.issuer_id, "v")
    assert (path.read_bytes(), path.stat().st_mtime_ns) == before


@given(label=st.from_regex(r"[A-Za-z0-9_][A-Za-z0-9._-]{0,20}", fullmatch=True),
       kind=st.sampled_from(list(RecordKind)), blob=st.binary(min_size=1, max_size=300))
@settings(max_examples=60)
def test_record_bytes_roundtrip(label, kind, blob):
    rec = make_record(OWNER, label, kind, blob)
    raw = rec.to_bytes()
    back = NamespaceRecord.from_bytes(raw)
    assert back == rec and back.to_bytes() == raw
    back.check(OWNER.issuer_id)
    assert raw[:4] == b"ZKNR" and raw[4] == 1 and raw[5] == int(kind)
