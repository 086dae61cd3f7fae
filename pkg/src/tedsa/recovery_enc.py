"""Encryption of the recovery party's key material.

Hashed ElGamal over the signing curve: an ephemeral e gives E = e*B, and the
plaintext scalar is XORed with a keystream derived from e*pk. IND-CPA under
DDH in the order-q subgroup; no integrity protection. A tampered blob decrypts
to a wrong share, which the recovery party's proof check then rejects.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from .algebra import EdPoint
from .hashing import frame
from .profiles import CurveProfile
from .zkp import UnsupportedBackend, decode_subgroup_point

DLOG_SKIPPED_NOTICE = "dlog-verification: skipped"


@dataclass(frozen=True)
class RecoveryKeypair:
    sk: int
    pk: EdPoint

    @classmethod
    def generate(cls, profile: CurveProfile, rng=None) -> "RecoveryKeypair":
        sk = (rng.randrange(1, profile.q) if rng is not None
              else 1 + secrets.randbelow(profile.q - 1))
        return cls(sk, profile.B * sk)


def ciphertext_len(profile: CurveProfile) -> int:
    return 2 * profile.scalar_len


def _keystream(profile: CurveProfile, E: EdPoint, shared: EdPoint) -> bytes:
    stream = profile.hprime(frame(b"REC/KDF", E.encode(), shared.encode()))
    return stream[: profile.scalar_len]


def enc(profile: CurveProfile, pk: EdPoint, m: int, rng=None) -> bytes:
    if not 0 <= m < profile.q:
        raise ValueError("plaintext must be a reduced scalar")
    e = (rng.randrange(1, profile.q) if rng is not None
         else 1 + secrets.randbelow(profile.q - 1))
    E = profile.B * e
    pad = _keystream(profile, E, pk * e)
    body = bytes(a ^ b for a, b in zip(m.to_bytes(profile.scalar_len, "little"), pad))
    return E.encode() + body


def dec(profile: CurveProfile, sk: int, ciphertext: bytes) -> int:
    n = profile.scalar_len
    if len(ciphertext) != 2 * n:
        raise ValueError(f"ciphertext must be {2 * n} bytes, got {len(ciphertext)}")
    E = decode_subgroup_point(profile, ciphertext[:n])
    pad = _keystream(profile, E, E * sk)
    m = int.from_bytes(bytes(a ^ b for a, b in zip(ciphertext[n:], pad)), "little")
    if m >= profile.q:
        raise ValueError("decrypted value is not a reduced scalar")
    return m


@dataclass(frozen=True)
class RecBlob:
    """Encryptions of (y_{i,3}, y_{3,i}) for the recovery party."""

    share_for_p3: bytes
    p3_share: bytes

    def to_bytes(self) -> bytes:
        return frame(self.share_for_p3, self.p3_share)

    @classmethod
    def from_bytes(cls, data: bytes) -> "RecBlob":
        from .commitment import decode_tuple

        first, second = decode_tuple(data, 2)
        return cls(first, second)

    @classmethod
    def seal(cls, profile: CurveProfile, pk: EdPoint, y_i3: int, y_3i: int, rng=None) -> "RecBlob":
        return cls(enc(profile, pk, y_i3, rng), enc(profile, pk, y_3i, rng))

    def open(self, profile: CurveProfile, sk: int) -> tuple[int, int]:
        return dec(profile, sk, self.share_for_p3), dec(profile, sk, self.p3_share)


def supports_dlog_verification(backend: str = "hashed-elgamal") -> bool:
    return False


def verifiable_enc_hook(profile: CurveProfile, ciphertext: bytes, Y: EdPoint,
                        backend: str = "hashed-elgamal"):
    """Prove or check that ``ciphertext`` encrypts the discrete log of Y.

    Reserved for a verifiable encryption backend; the default one cannot do it.
    """
    raise UnsupportedBackend(f"backend {backend!r} cannot prove the plaintext is dlog(Y)")
