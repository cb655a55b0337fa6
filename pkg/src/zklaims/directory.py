"""A file-backed stand-in for a name system: signed records under owner namespaces.

Layout is ``<store>/<namespace_id>/<label>``, one record file per label.  A
record file is::

    "ZKNR" | version u8 | kind u8 | label_len u16 | label | blob_len u32 | blob
           | signature (64) | owner public key (32)

The signature is Ed25519 over ``label ‖ kind ‖ blob`` (with the label length
prefixed so the split is unambiguous).  The namespace id is the SHA-256 of
the owner key, so a record proves which namespace it belongs to.
"""

from __future__ import annotations

import enum
import os
import re
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PublicKey

from .errors import FormatError, InvalidRecordSignature, NotFound, OversizeBlob
from .issuer import PUBLIC_KEY_BYTES, SIGNATURE_BYTES, IssuerKeypair, issuer_id_for

MAGIC = b"ZKNR"
VERSION = 1
MAX_BLOB = 1 << 20
_HEAD = struct.Struct("<4sBBH")
_LABEL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9._-]{0,127}$")
_NS_RE = re.compile(r"^[0-9a-f]{64}$")


class RecordKind(enum.IntEnum):
    DESCRIPTOR = 1
    VK = 2
    CONTEXT = 3
    SCHEMA = 4
    ISSUER_KEY = 5
    PK = 6  # never accepted above MAX_BLOB, which in practice means never

    @classmethod
    def parse(cls, name: str | int | RecordKind) -> RecordKind:
        if isinstance(name, cls):
            return name
        if isinstance(name, int):
            return cls(name)
        try:
            return cls[name.upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown record kind {name!r}") from None


def record_message(label: str, kind: int, blob: bytes) -> bytes:
    lb = label.encode()
    return struct.pack("<H", len(lb)) + lb + bytes([int(kind)]) + blob


@dataclass(frozen=True)
class NamespaceRecord:
    namespace_id: str
    label: str
    kind: RecordKind
    blob: bytes
    record_signature: bytes
    owner_public_key: bytes

    def to_bytes(self) -> bytes:
        lb = self.label.encode()
        return b"".join([
            _HEAD.pack(MAGIC, VERSION, int(self.kind), len(lb)),
            lb,
            struct.pack("<I", len(self.blob)),
            self.blob,
            self.record_signature,
            self.owner_public_key,
        ])

    @classmethod
    def from_bytes(cls, data: bytes) -> NamespaceRecord:
        """Parse only; call :meth:`check` to authenticate."""
        data = bytes(data)
        if len(data) < _HEAD.size:
            raise FormatError("record truncated")
        magic, version, kind, label_len = _HEAD.unpack_from(data)
        if magic != MAGIC or version != VERSION:
            raise FormatError("not a version-1 ZKNR record")
        off = _HEAD.size
        label = data[off:off + label_len]
        off += label_len
        if len(label) != label_len or len(data) < off + 4:
            raise FormatError("record truncated")
        (blob_len,) = struct.unpack_from("<I", data, off)
        off += 4
        if len(data) != off + blob_len + SIGNATURE_BYTES + PUBLIC_KEY_BYTES:
            raise FormatError("record length does not match its header")
        blob = data[off:off + blob_len]
        off += blob_len
        sig = data[off:off + SIGNATURE_BYTES]
        pub = data[off + SIGNATURE_BYTES:]
        try:
            kind = RecordKind(kind)
            label = label.decode()
        except (ValueError, UnicodeDecodeError) as exc:
            raise FormatError(f"bad record header: {exc}") from None
        return cls(issuer_id_for(pub), label, kind, blob, sig, pub)

    def check(self, namespace_id: str | None = None) -> None:
        if namespace_id is not None and namespace_id != self.namespace_id:
            raise InvalidRecordSignature("record is signed by a key outside this namespace")
        try:
            Ed25519PublicKey.from_public_bytes(self.owner_public_key).verify(
                self.record_signature, record_message(self.label, self.kind, self.blob)
            )
        except (InvalidSignature, ValueError):
            raise InvalidRecordSignature(f"record {self.namespace_id}/{self.label} fails its signature check") from None


def make_record(owner: IssuerKeypair, label: str, kind, blob: bytes) -> NamespaceRecord:
    kind = RecordKind.parse(kind)
    if not _LABEL_RE.match(label):
        raise ValueError(f"invalid record label {label!r}")
    if not blob:
        raise ValueError("cannot publish an empty blob")
    if len(blob) > MAX_BLOB:
        raise OversizeBlob(f"{kind.name.lower()} blob of {len(blob)} bytes exceeds the {MAX_BLOB}-byte record cap")
    blob = bytes(blob)
    sig = owner.sign(record_message(label, kind, blob))
    return NamespaceRecord(owner.issuer_id, label, kind, blob, sig, owner.public_key)


class Directory:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def _path(self, namespace_id: str, label: str) -> Path:
        if not _NS_RE.match(namespace_id):
            raise ValueError(f"invalid namespace id {namespace_id!r}")
        if not _LABEL_RE.match(label):
            raise ValueError(f"invalid record label {label!r}")
        return self.root / namespace_id / label

    def publish(self, owner: IssuerKeypair, label: str, kind, blob: bytes) -> NamespaceRecord:
        record = make_record(owner, label, kind, blob)
        path = self._path(record.namespace_id, label)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(record.to_bytes())
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return record

    def resolve(self, namespace_id: str, label: str, kind=None) -> NamespaceRecord:
        path = self._path(namespace_id, label)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise NotFound(f"{namespace_id}/{label}") from None
        try:
            record = NamespaceRecord.from_bytes(data)
        except FormatError as exc:
            raise InvalidRecordSignature(f"record {namespace_id}/{label} is corrupt: {exc}") from None
        record.check(namespace_id)
        if record.label != label:
            raise InvalidRecordSignature(f"record stored as {label!r} is signed for {record.label!r}")
        if kind is not None and record.kind != RecordKind.parse(kind):
            raise FormatError(f"record {namespace_id}/{label} is a {record.kind.name.lower()}, not {RecordKind.parse(kind).name.lower()}")
        return record

    def labels(self, namespace_id: str) -> list[str]:
        d = self.root / namespace_id
        if not d.is_dir():
            return []
        return sorted(p.name for p in d.iterdir() if not p.name.startswith("."))
