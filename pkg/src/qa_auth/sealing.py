"""Authenticated encryption for enrolled answers at rest.

Answers are sealed with AES-256-GCM under a server-held key. The key is
either supplied directly (32 raw bytes) or derived from a passphrase with
scrypt at a configurable cost. Each sealed blob is bound to its account and
question via associated data, so ciphertexts cannot be swapped between
enrollment slots without failing authentication.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

KEY_BYTES = 32
NONCE_BYTES = 12

# scrypt cost for passphrase-derived keys; 2**14 keeps tests fast while
# remaining an explicit, tunable work factor.
DEFAULT_KDF_COST = 2**14


class SealingError(Exception):
    """Sealing or unsealing failed (bad key size, tampered ciphertext)."""


@dataclass(frozen=True)
class SealingKey:
    """A 32-byte AEAD key. Never persisted by the store."""

    material: bytes

    def __post_init__(self) -> None:
        if len(self.material) != KEY_BYTES:
            raise SealingError(f"sealing key must be {KEY_BYTES} bytes, got {len(self.material)}")

    def __repr__(self) -> str:  # keep key bytes out of logs / tracebacks
        return "SealingKey(<redacted>)"

    @classmethod
    def generate(cls) -> "SealingKey":
        return cls(os.urandom(KEY_BYTES))

    @classmethod
    def derive(cls, passphrase: str, salt: bytes, cost: int = DEFAULT_KDF_COST) -> "SealingKey":
        """Derive a key from a passphrase with scrypt (CPU/memory cost `cost`)."""
        kdf = Scrypt(salt=salt, length=KEY_BYTES, n=cost, r=8, p=1)
        return cls(kdf.derive(passphrase.encode("utf-8")))


def seal(plaintext: bytes, key: SealingKey, associated_data: bytes = b"") -> bytes:
    """Encrypt and authenticate `plaintext`; returns nonce || ciphertext."""
    nonce = os.urandom(NONCE_BYTES)
    try:
        box = AESGCM(key.material)
        return nonce + box.encrypt(nonce, plaintext, associated_data)
    except Exception as exc:  # pragma: no cover - cryptography is reliable
        raise SealingError("sealing failed") from exc


def unseal(blob: bytes, key: SealingKey, associated_data: bytes = b"") -> bytes:
    """Decrypt and authenticate a blob produced by :func:`seal`.

    Raises SealingError if the blob is malformed or its tag does not verify
    (wrong key, tampering, or mismatched associated data).
    """
    if len(blob) < NONCE_BYTES + 16:
        raise SealingError("sealed blob too short")
    nonce, ciphertext = blob[:NONCE_BYTES], blob[NONCE_BYTES:]
    try:
        return AESGCM(key.material).decrypt(nonce, ciphertext, associated_data)
    except InvalidTag as exc:
        raise SealingError("authentication tag mismatch") from exc
