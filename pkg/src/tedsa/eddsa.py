"""Centralized EdDSA: reference signer and the cofactored verifier.

The verifier is the acceptance oracle for every threshold signature, so it
checks exactly 2^c*S*B == 2^c*R + 2^c*H(R||A||M)*A.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from .algebra import EdPoint, NonCanonical, NotOnCurve
from .hashing import EXTENDED, challenge, secret_scalar
from .profiles import CurveProfile


@dataclass(frozen=True)
class Signature:
    R: EdPoint
    S: int

    def to_bytes(self, profile: CurveProfile) -> bytes:
        """Wire format: encode(R) || little-endian(S), 2b bits."""
        return self.R.encode() + profile.scalar_bytes(self.S)

    @classmethod
    def from_bytes(cls, profile: CurveProfile, data: bytes) -> "Signature":
        n = profile.scalar_len
        if len(data) != 2 * n:
            raise ValueError(f"signature must be {2 * n} bytes")
        R = profile.curve.decode(data[:n])
        S = int.from_bytes(data[n:], "little")
        if S >= profile.q:
            raise NonCanonical("S >= q")
        return cls(R, S)


@dataclass(frozen=True)
class CentralKeypair:
    k: bytes
    a: int
    prefix: bytes
    A: EdPoint

    @classmethod
    def from_secret(cls, profile: CurveProfile, k: bytes, mode: str = EXTENDED) -> "CentralKeypair":
        a = secret_scalar(profile, k, mode)
        prefix = profile.hprime(k)[profile.scalar_len:]
        return cls(k, a, prefix, profile.B * a)

    @classmethod
    def generate(cls, profile: CurveProfile, mode: str = EXTENDED, rng=None) -> "CentralKeypair":
        if rng is None:
            k = secrets.token_bytes(profile.scalar_len)
        else:
            k = rng.randbytes(profile.scalar_len)
        return cls.from_secret(profile, k, mode)


def central_sign(profile: CurveProfile, kp: CentralKeypair, message: bytes) -> Signature:
    r = int.from_bytes(profile.hprime(kp.prefix + message), "little") % profile.q
    R = profile.B * r
    h = challenge(profile, R.encode(), kp.A.encode(), message)
    return Signature(R, (r + h * kp.a) % profile.q)


def central_verify(profile: CurveProfile, A: EdPoint, message: bytes, sig: Signature | bytes) -> bool:
    if isinstance(sig, (bytes, bytearray)):
        try:
            sig = Signature.from_bytes(profile, bytes(sig))
        except (ValueError, NotOnCurve, NonCanonical):
            return False
    if not 0 <= sig.S < profile.q:
        return False
    if not (sig.R.is_on_curve() and A.is_on_curve()):
        return False
    h = challenge(profile, sig.R.encode(), A.encode(), message)
    cof = 2 ** profile.c
    B = profile.B
    return B * (cof * sig.S) == sig.R * cof + A * (cof * h)
