"""Hash commitments (random-oracle model).

C = H'(frame("COM", nonce, frame(value))) and D = nonce || frame(value).
Non-malleability is assumed from the random oracle; nothing more is claimed.
"""

from __future__ import annotations

import hmac
import secrets
from dataclasses import dataclass
from typing import Optional

from .hashing import frame
from .profiles import CurveProfile

NONCE_LEN = 32


@dataclass(frozen=True)
class CommitPair:
    C: bytes
    D: bytes


def _digest(profile: CurveProfile, nonce: bytes, framed_value: bytes) -> bytes:
    return profile.hprime(frame(b"COM", nonce, framed_value))


def commit(profile: CurveProfile, value: bytes, rng=None) -> CommitPair:
    nonce = rng.randbytes(NONCE_LEN) if rng is not None else secrets.token_bytes(NONCE_LEN)
    return commit_with_nonce(profile, value, nonce)


def commit_with_nonce(profile: CurveProfile, value: bytes, nonce: bytes) -> CommitPair:
    if len(nonce) != NONCE_LEN:
        raise ValueError("bad nonce length")
    framed = frame(value)
    return CommitPair(_digest(profile, nonce, framed), nonce + framed)


def open_commitment(profile: CurveProfile, C: bytes, D: bytes) -> Optional[bytes]:
    """Ver(C, D): the committed value, or None if the pair does not match."""
    if len(D) < NONCE_LEN + 8:
        return None
    nonce, framed = D[:NONCE_LEN], D[NONCE_LEN:]
    length = int.from_bytes(framed[:8], "big")
    if length != len(framed) - 8:
        return None
    if not hmac.compare_digest(_digest(profile, nonce, framed), C):
        return None
    return framed[8:]


def encode_tuple(*items: bytes) -> bytes:
    """Canonical encoding of a tuple of byte strings before commitment."""
    return frame(*items)


def decode_tuple(data: bytes, count: int) -> list[bytes]:
    items, pos = [], 0
    for _ in range(count):
        if pos + 8 > len(data):
            raise ValueError("truncated tuple")
        n = int.from_bytes(data[pos:pos + 8], "big")
        pos += 8
        if pos + n > len(data):
            raise ValueError("truncated tuple")
        items.append(data[pos:pos + n])
        pos += n
    if pos != len(data):
        raise ValueError("trailing bytes in tuple")
    return items
