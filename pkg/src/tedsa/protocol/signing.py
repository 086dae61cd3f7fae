"""Two-party signing.

Round NONCE: each signer derives r_i = f(r'_i * V') with V' = H_Pur(K, M) and
sends R_i = r_i*B with a nonce proof.
Round PARTIAL: each signer sends S_i = r_i + omega_i * H(R || A || M); the sum
must satisfy S*B = R + H(R || A || M)*A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..algebra import EdPoint, WPoint
from ..eddsa import Signature
from ..hashing import challenge, hash_to_scalar
from ..profiles import CurveProfile
from ..purify import derive_nonce, h_pur
from ..zkp import (
    DEV_TRANSPARENT,
    PurifyProof,
    PurifyStatement,
    UnsupportedBackend,
    purify_prove,
    purify_verify,
)
from .errors import AbortBadNonceProof, AbortBadSignature
from .machine import PartyMachine
from .record import PartyRecord, PublicPair, decode_point, decode_scalar


@dataclass(frozen=True)
class SessionKeyMaterial:
    K: int
    V_prime: WPoint
    r: int
    R: EdPoint


def pair_tag(profile: CurveProfile, X: dict[int, PublicPair], pair: tuple[int, int]) -> int:
    """K = H(X_A, X_B) with the lower index as signer A; indices are hashed too."""
    lo, hi = sorted(pair)
    return hash_to_scalar(profile, "K", bytes([lo]), X[lo].encode(profile),
                          bytes([hi]), X[hi].encode(profile))


def nonce_point(profile: CurveProfile, K: int, message: bytes,
                derived_key: Optional[EdPoint] = None) -> WPoint:
    parts = [profile.scalar_bytes(K), message]
    if derived_key is not None:
        # a derived key gets its own nonce stream
        parts.append(derived_key.encode())
    return h_pur(profile, parts)


def encode_nonce_proof(proof: PurifyProof) -> bytes:
    tag = proof.backend.encode()
    return bytes([len(tag)]) + tag + proof.payload


def decode_nonce_proof(data: bytes) -> PurifyProof:
    if not data or len(data) < 1 + data[0]:
        raise ValueError("truncated nonce proof")
    n = data[0]
    return PurifyProof(data[1:1 + n].decode("ascii", "replace"), data[1 + n:])


class SigningCore:
    """Signer-side computations shared by ordinary and recovery signing."""

    def __init__(self, profile: CurveProfile, me: int, peer: int, omega: int, r_prime: int,
                 X: dict[int, PublicPair], public_key: EdPoint, message: bytes,
                 derived: bool = False, backend: str = DEV_TRANSPARENT):
        self.profile = profile
        self.me, self.peer = me, peer
        self.omega = omega
        self.r_prime = r_prime
        self.X = X
        self.public_key = public_key
        self.message = message
        self.backend = backend
        K = pair_tag(profile, X, (me, peer))
        V = nonce_point(profile, K, message, public_key if derived else None)
        r = derive_nonce(profile.purify, r_prime, V)
        self.session = SessionKeyMaterial(K, V, r, profile.B * r)

    def nonce_payload(self) -> dict[str, bytes]:
        s = self.session
        statement = PurifyStatement(self.X[self.me].R_prime, s.V_prime, s.R)
        proof = purify_prove(self.profile, statement, self.r_prime, self.backend)
        return {"R": s.R.encode(), "proof": encode_nonce_proof(proof)}

    def absorb_nonce(self, payload: dict[str, bytes]) -> None:
        p = self.profile
        R_peer = decode_point(p, payload["R"], "NONCE", self.peer)
        try:
            proof = decode_nonce_proof(payload["proof"])
            statement = PurifyStatement(self.X[self.peer].R_prime, self.session.V_prime, R_peer)
            ok = purify_verify(p, statement, proof, self.backend)
        except (ValueError, UnsupportedBackend) as exc:
            raise AbortBadNonceProof("NONCE", self.peer, str(exc)) from None
        if not ok:
            raise AbortBadNonceProof("NONCE", self.peer, "nonce proof rejected")
        self.R = self.session.R + R_peer
        self.h = challenge(p, self.R.encode(), self.public_key.encode(), self.message)

    def partial(self) -> int:
        return (self.session.r + self.omega * self.h) % self.profile.q

    def partial_payload(self) -> dict[str, bytes]:
        return {"S": self.profile.scalar_bytes(self.partial())}

    def combine(self, payload: dict[str, bytes]) -> Signature:
        p = self.profile
        S_peer = decode_scalar(p, payload["S"], "PARTIAL", self.peer)
        S = (self.partial() + S_peer) % p.q
        if p.B * S != self.R + self.public_key * self.h:
            raise AbortBadSignature("PARTIAL", self.peer, "S*B != R + H(R||A||M)*A")
        return Signature(self.R, S)


class SignParty(PartyMachine):
    schedule = ("NONCE", "PARTIAL")

    def __init__(self, record: PartyRecord, peer: int, message: bytes, ceremony_id: str,
                 backend: str = DEV_TRANSPARENT):
        super().__init__(ceremony_id, record.index)
        if peer == record.index or peer not in record.X:
            raise ValueError(f"P{record.index} has no public pair for P{peer}")
        self.peer = peer
        self.core = SigningCore(
            record.profile, record.index, peer, record.omega((record.index, peer)),
            record.r_prime, record.X, record.public_key, message,
            derived=record.derivation is not None, backend=backend,
        )

    def expects(self, tag):
        return {self.peer}

    def emit(self, tag):
        if tag == "NONCE":
            return [self.message("NONCE", self.peer, **self.core.nonce_payload())]
        self.core.absorb_nonce(self.got("NONCE", self.peer).payload)
        return [self.message("PARTIAL", self.peer, **self.core.partial_payload())]

    def finish(self) -> Signature:
        return self.core.combine(self.got("PARTIAL", self.peer).payload)

