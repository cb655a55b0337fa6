"""Exception hierarchy shared by every zklaims module."""

from __future__ import annotations


class ZklaimsError(Exception):
    """Base class for all zklaims errors."""


class RangeError(ZklaimsError, ValueError):
    """A value lies outside its fixed-width range."""


class ParseError(ZklaimsError, ValueError):
    """Text or bytes could not be parsed."""


class FormatError(ParseError):
    """A serialized artifact is malformed (bad magic, truncated, bad point)."""


class ShapeError(ZklaimsError, ValueError):
    """Vector lengths or arities do not line up."""


class UnsupportedHash(ZklaimsError):
    """No circuit gadget exists for the requested hash algorithm id."""


class UnknownSlot(ParseError):
    pass


class DuplicateClause(ParseError):
    pass


class NoncePredicateForbidden(ParseError):
    pass


class MissingAttribute(ZklaimsError, KeyError):
    pass


class DigestMismatch(ZklaimsError):
    """Credential attributes do not hash to the credential's digests."""


class UnsatisfiableStatement(ZklaimsError):
    """A statement clause is false for the credential's attribute values."""

    def __init__(self, slot: int, message: str | None = None):
        self.slot = slot
        super().__init__(message or f"predicate on slot {slot} is false for this credential")


class UnsatisfiedConstraints(ZklaimsError):
    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"constraint {index} is not satisfied")


class KeyMismatch(ZklaimsError):
    pass


class BackendError(ZklaimsError):
    pass


class NotFound(ZklaimsError, KeyError):
    pass


class InvalidRecordSignature(ZklaimsError):
    pass


class OversizeBlob(ZklaimsError, ValueError):
    pass
