"""Hash pipeline.

``hprime`` (on the profile) is the base hash H' with a 2b-bit digest.  On top of it:

* :func:`hash_to_scalar` -- framed, domain-tagged H' reduced mod q. Every
  protocol-internal hash goes through here.
* :func:`challenge` -- the EdDSA challenge H(R || A || M). This one keeps the
  plain byte layout of standard EdDSA so that ordinary verifiers accept the
  threshold signatures.
* :func:`secret_scalar` -- the clamped secret scalar of centralized EdDSA.

Framing: each part is prefixed with its length as an 8-byte big-endian integer,
and the domain tag is framed the same way in front of the parts.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .profiles import CurveProfile

EXTENDED = "extended"
STANDARD = "standard"
CLAMP_MODES = (EXTENDED, STANDARD)


def frame(*parts: bytes) -> bytes:
    out = bytearray()
    for part in parts:
        out += len(part).to_bytes(8, "big")
        out += part
    return bytes(out)


def tagged_digest(profile: CurveProfile, tag: str, parts: Iterable[bytes]) -> bytes:
    return profile.hprime(frame(tag.encode(), *parts))


def hash_to_scalar(profile: CurveProfile, tag: str, *parts: bytes) -> int:
    """Tagged, framed digest read little-endian and reduced mod q."""
    digest = tagged_digest(profile, tag, parts)
    return int.from_bytes(digest, "little") % profile.q


def challenge(profile: CurveProfile, R_enc: bytes, A_enc: bytes, message: bytes) -> int:
    """H(R || A || M) with the plain concatenation used by every EdDSA verifier."""
    return int.from_bytes(profile.hprime(R_enc + A_enc + message), "little") % profile.q


def clamp_integer(h: int, n: int, c: int, mode: str = EXTENDED) -> int:
    """The integer encoded by the n-bit string ``h`` before reduction mod q.

    ``extended`` mode: 2^(n+1) + sum_{i=c}^{n} 2^i h_i, where h_n does not exist
    in an n-bit string and counts as zero.
    ``standard`` mode: 2^n + sum_{i=c}^{n-1} 2^i h_i (RFC 8032 clamping).
    """
    if mode not in CLAMP_MODES:
        raise ValueError(f"unknown clamp mode {mode!r}")
    middle = h & ((1 << n) - 1) & ~((1 << c) - 1)
    top = n + 1 if mode == EXTENDED else n
    return (1 << top) + middle


def secret_scalar(profile: CurveProfile, k: bytes, mode: str = EXTENDED) -> int:
    """Secret scalar of a b-bit key: hash, keep n bits, clamp, reduce mod q."""
    if len(k) != profile.scalar_len:
        raise ValueError(f"secret key must be {profile.b} bits")
    h = int.from_bytes(profile.hprime(k), "little")
    return clamp_integer(h, profile.n, profile.c, mode) % profile.q


def chi_square_uniform(samples: Iterable[int], modulus: int, buckets: int = 16) -> float:
    """Chi-square statistic of ``samples`` (values in [0, modulus)) against uniform."""
    counts = [0] * buckets
    total = 0
    for v in samples:
        if not 0 <= v < modulus:
            raise ValueError(f"sample {v} out of range")
        counts[v * buckets // modulus] += 1
        total += 1
    # bucket k holds the v with floor(v*buckets/modulus) == k
    edges = [-(-k * modulus // buckets) for k in range(buckets + 1)]
    stat = 0.0
    for k in range(buckets):
        expected = total * (edges[k + 1] - edges[k]) / modulus
        stat += (counts[k] - expected) ** 2 / expected
    return stat


def prng_uniformity_check(sampler: Callable[[int], int], trials: int, modulus: int,
                          buckets: int = 16) -> float:
    """Chi-square statistic for ``trials`` outputs of ``sampler(i)``, i = 0, 1, ..."""
    if trials < 10 * buckets:
        raise ValueError("need at least 10 samples per bucket")
    return chi_square_uniform((sampler(i) for i in range(trials)), modulus, buckets)


def counter_bytes(i: int) -> bytes:
    return i.to_bytes(8, "big")

