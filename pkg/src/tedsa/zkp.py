"""Sigma protocols made non-interactive with Fiat-Shamir.

Statements live in the order-q subgroup generated by the base point B; every
point a verifier receives is checked for subgroup membership instead of going
through a cofactor-eliminating encoding.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Optional

from .algebra import EdPoint, NonCanonical, NotOnCurve, WPoint
from .hashing import frame, hash_to_scalar
from .profiles import CurveProfile

DEFAULT_ROUNDS = 128


class UnsupportedBackend(NotImplementedError):
    pass


def _random_scalar(profile: CurveProfile, rng) -> int:
    if rng is None:
        return secrets.randbelow(profile.q)
    return rng.randrange(profile.q)


def decode_subgroup_point(profile: CurveProfile, data: bytes) -> EdPoint:
    P = profile.curve.decode(data)
    if not P.in_subgroup():
        raise NotOnCurve("point outside the prime-order subgroup")
    return P


# --------------------------------------------------------------------------
# Schnorr proof of knowledge of a discrete log


@dataclass(frozen=True)
class SchnorrProof:
    U: EdPoint
    z: int

    def to_bytes(self, profile: CurveProfile) -> bytes:
        return self.U.encode() + profile.scalar_bytes(self.z)

    @classmethod
    def from_bytes(cls, profile: CurveProfile, data: bytes) -> "SchnorrProof":
        n = profile.scalar_len
        if len(data) != 2 * n:
            raise ValueError("bad Schnorr proof length")
        return cls(decode_subgroup_point(profile, data[:n]), profile.scalar_from_bytes(data[n:]))


def schnorr_challenge(profile: CurveProfile, K: EdPoint, U: EdPoint, context: bytes) -> int:
    return hash_to_scalar(profile, "FS/SCH", context, profile.B.encode(), K.encode(), U.encode())


def schnorr_prove(profile: CurveProfile, x: int, K: EdPoint, context: bytes, rng=None,
                  nonce: Optional[int] = None) -> SchnorrProof:
    """Prove knowledge of x with K = x*B. ``nonce`` fixes r (tests only)."""
    r = _random_scalar(profile, rng) if nonce is None else nonce % profile.q
    U = profile.B * r
    c = schnorr_challenge(profile, K, U, context)
    return SchnorrProof(U, (r + c * x) % profile.q)


def schnorr_verify(profile: CurveProfile, K: EdPoint, proof: SchnorrProof, context: bytes) -> bool:
    if not (K.is_on_curve() and proof.U.is_on_curve()) or not 0 <= proof.z < profile.q:
        return False
    c = schnorr_challenge(profile, K, proof.U, context)
    return profile.B * proof.z == proof.U + K * c


# --------------------------------------------------------------------------
# Equality of discrete logs: x*B = K and x*Bbar = Kbar


@dataclass(frozen=True)
class DlogEqRound:
    U: EdPoint
    U_bar: EdPoint
    c: int
    s: int


@dataclass(frozen=True)
class DlogEqProof:
    rounds: tuple[DlogEqRound, ...]
    full_challenge: bool = False

    def to_bytes(self, profile: CurveProfile) -> bytes:
        out = bytearray([1 if self.full_challenge else 0])
        out += len(self.rounds).to_bytes(2, "big")
        for rd in self.rounds:
            out += rd.U.encode() + rd.U_bar.encode()
            out += profile.scalar_bytes(rd.c) + profile.scalar_bytes(rd.s)
        return bytes(out)

    @classmethod
    def from_bytes(cls, profile: CurveProfile, data: bytes) -> "DlogEqProof":
        n = profile.scalar_len
        if len(data) < 3:
            raise ValueError("truncated proof")
        full, count = bool(data[0]), int.from_bytes(data[1:3], "big")
        if len(data) != 3 + count * 4 * n:
            raise ValueError("bad proof length")
        rounds = []
        for k in range(count):
            chunk = data[3 + 4 * n * k: 3 + 4 * n * (k + 1)]
            rounds.append(DlogEqRound(
                decode_subgroup_point(profile, chunk[:n]),
                decode_subgroup_point(profile, chunk[n:2 * n]),
                profile.scalar_from_bytes(chunk[2 * n:3 * n]),
                profile.scalar_from_bytes(chunk[3 * n:]),
            ))
        return cls(tuple(rounds), full)


def _dlogeq_challenges(profile, B_bar, K, K_bar, commitments, context, full: bool) -> list[int]:
    # all commitments are fixed before any challenge is derived, so a prover
    # cannot grind rounds one at a time
    parts = [context, profile.B.encode(), B_bar.encode(), K.encode(), K_bar.encode()]
    for U, U_bar in commitments:
        parts += [U.encode(), U_bar.encode()]
    if full:
        return [hash_to_scalar(profile, "FS/DLEQ/full", *parts)]
    seed = profile.hprime(frame(b"FS/DLEQ", *parts))
    bits: list[int] = []
    block = 0
    while len(bits) < len(commitments):
        stream = profile.hprime(frame(b"FS/DLEQ/bits", seed, block.to_bytes(4, "big")))
        for byte in stream:
            bits.extend((byte >> i) & 1 for i in range(8))
        block += 1
    return bits[: len(commitments)]


def dlogeq_prove(profile: CurveProfile, x: int, B_bar: EdPoint, K: EdPoint, K_bar: EdPoint,
                 context: bytes, rng=None, rounds: int = DEFAULT_ROUNDS,
                 full_challenge: bool = False) -> DlogEqProof:
    """Binary-challenge proof repeated ``rounds`` times, or one round with a
    challenge in Z_q when ``full_challenge`` is set."""
    q = profile.q
    count = 1 if full_challenge else rounds
    rs = [_random_scalar(profile, rng) for _ in range(count)]
    commitments = [(profile.B * r, B_bar * r) for r in rs]
    cs = _dlogeq_challenges(profile, B_bar, K, K_bar, commitments, context, full_challenge)
    return DlogEqProof(
        tuple(DlogEqRound(U, Ub, c, (r + c * x) % q) for (U, Ub), r, c in zip(commitments, rs, cs)),
        full_challenge,
    )


def dlogeq_verify(profile: CurveProfile, B_bar: EdPoint, K: EdPoint, K_bar: EdPoint,
                  proof: DlogEqProof, context: bytes, rounds: int = DEFAULT_ROUNDS) -> bool:
    expected = 1 if proof.full_challenge else rounds
    if len(proof.rounds) != expected:
        return False
    commitments = [(rd.U, rd.U_bar) for rd in proof.rounds]
    cs = _dlogeq_challenges(profile, B_bar, K, K_bar, commitments, context, proof.full_challenge)
    B = profile.B
    for rd, c in zip(proof.rounds, cs):
        if rd.c != c:
            return False
        if B * rd.s != K * c + rd.U:
            return False
        if B_bar * rd.s != K_bar * c + rd.U_bar:
            return False
    return True


# --------------------------------------------------------------------------
# Proof that R = f(r' * V') * B for the r' behind R' = r' * B'

DEV_TRANSPARENT = "dev-transparent"
BULLETPROOF = "bulletproof"
BACKENDS = (DEV_TRANSPARENT, BULLETPROOF)


@dataclass(frozen=True)
class PurifyStatement:
    R_prime: WPoint
    V_prime: WPoint
    R: EdPoint


@dataclass(frozen=True)
class PurifyProof:
    backend: str
    payload: bytes = b""


def _check_backend(backend: str):
    if backend == BULLETPROOF:
        raise UnsupportedBackend("the bulletproof nonce proof is not implemented")
    if backend != DEV_TRANSPARENT:
        raise UnsupportedBackend(f"unknown nonce-proof backend {backend!r}")


def purify_prove(profile: CurveProfile, statement: PurifyStatement, witness: int,
                 backend: str = DEV_TRANSPARENT) -> PurifyProof:
    _check_backend(backend)
    from .purify import derive_nonce

    params = profile.purify
    if params.B_prime * witness != statement.R_prime:
        raise ValueError("witness does not match R'")
    if profile.B * derive_nonce(params, witness, statement.V_prime) != statement.R:
        raise ValueError("witness does not match R")
    return PurifyProof(backend, b"")


def purify_verify(profile: CurveProfile, statement: PurifyStatement, proof: PurifyProof,
                  backend: str = DEV_TRANSPARENT) -> bool:
    """Verify a nonce proof.

    The dev-transparent backend carries no proof at all: it only checks that
    the statement is well formed. It gives no soundness against a signer that
    lies about R; the closing S*B check of the signing protocol is what catches
    a wrong R.
    """
    _check_backend(backend)
    if proof.backend != backend or proof.payload:
        return False
    try:
        ok = (statement.R_prime.is_on_curve() and statement.V_prime.is_on_curve()
              and statement.R.is_on_curve() and statement.R.in_subgroup())
    except (NotOnCurve, NonCanonical):
        return False
    return ok
