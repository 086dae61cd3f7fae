"""Signing with the recovery party P3 and one online party P_i.

Round REC_PKG: P_i sends A, both recovery blobs, X_i and a proof of x_i.
Round X3: P3 decrypts its share, checks P_i's proof, and answers with X_3 and
a proof of x_3. Signing then continues with rounds NONCE and PARTIAL.

P3's share is the degree-1 extrapolation of everyone's polynomials to 3:
x_3 = y_13 + y_23 + 2*y_32 - y_31.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Optional

from ..algebra import EdPoint
from ..eddsa import Signature
from ..hashing import frame
from ..profiles import CurveProfile
from ..purify import encode_aux, new_seed, seed_from_secret
from ..recovery_enc import RecBlob
from ..zkp import DEV_TRANSPARENT, SchnorrProof, schnorr_prove, schnorr_verify
from .errors import AbortBadProof, AbortBadRecovery, AbortMalformedMessage
from .keygen import x_statement
from .machine import PartyMachine
from .messages import CeremonyMessage
from .record import PartyRecord, PublicPair, decode_aux_point, decode_point
from .signing import SigningCore


def recovery_context(ceremony_id: str, index: int) -> bytes:
    return frame(b"REC/POK", ceremony_id.encode(), bytes([index]))


def online_statement(profile: CurveProfile, A: EdPoint, x3: int, i: int) -> EdPoint:
    """x_i*B for i in {1, 2}, from the line through (0, A) and (3, x_3*B)."""
    inv3 = pow(3, -1, profile.q)
    return (A * (3 - i) + profile.B * (i * x3 % profile.q)) * inv3


@dataclass(frozen=True)
class RecoveredShares:
    y13: int
    y31: int
    y23: int
    y32: int

    @property
    def a3(self) -> int:
        return 2 * self.y31 - self.y32

    @property
    def x3(self) -> int:
        return self.y13 + self.y23 + 2 * self.y32 - self.y31


def recovery_prepare(record: PartyRecord, ceremony_id: str, rng=None) -> CeremonyMessage:
    """The package an online party sends to wake up P3."""
    if record.index not in (1, 2):
        raise ValueError("only P1 or P2 can start a recovery")
    missing = [i for i in (1, 2) if i not in record.rec]
    if missing:
        raise ValueError(f"record lacks recovery blob(s) for P{missing}")
    p = record.profile
    me = record.X[record.index]
    K = p.B * record.x
    proof = schnorr_prove(p, record.x, K, recovery_context(ceremony_id, record.index), rng)
    deriv = b"" if record.derivation is None else record.derivation.to_bytes(8, "big")
    return CeremonyMessage(ceremony_id, "REC_PKG", record.index, 3, {
        "A": record.A.encode(),
        "rec1": record.rec[1],
        "rec2": record.rec[2],
        "X_A": me.A.encode(),
        "X_R": encode_aux(p, me.R_prime),
        "proof": proof.to_bytes(p),
        "deriv": deriv,
    })


def recovery_join(profile: CurveProfile, sk3: int, package: CeremonyMessage, rng=None,
                  r_prime: Optional[int] = None) -> tuple[PartyRecord, CeremonyMessage]:
    """P3's side: decrypt, check the online party, and answer with X_3.

    ``r_prime`` pins P3's nonce seed; by default a fresh one is drawn.
    """
    p, i, cid = profile, package.sender, package.ceremony_id
    tag = "REC_PKG"
    if i not in (1, 2):
        raise AbortMalformedMessage(tag, i, "recovery package must come from P1 or P2")
    pay = package.payload
    A = decode_point(p, pay["A"], tag, i)
    try:
        y13, y31 = RecBlob.from_bytes(pay["rec1"]).open(p, sk3)
        y23, y32 = RecBlob.from_bytes(pay["rec2"]).open(p, sk3)
    except ValueError as exc:
        raise AbortBadRecovery(tag, i, f"cannot decrypt recovery blob: {exc}") from None
    shares = RecoveredShares(y13, y31, y23, y32)
    q = p.q
    x3 = shares.x3 % q
    X_online = PublicPair(decode_point(p, pay["X_A"], tag, i), decode_aux_point(p, pay["X_R"], tag, i))
    try:
        proof = SchnorrProof.from_bytes(p, pay["proof"])
    except ValueError as exc:
        raise AbortMalformedMessage(tag, i, str(exc)) from None
    if not schnorr_verify(p, online_statement(p, A, x3, i), proof, recovery_context(cid, i)):
        raise AbortBadProof(tag, i, "online party's share is inconsistent with the recovered one")
    deriv = pay["deriv"]
    if len(deriv) not in (0, 8):
        raise AbortMalformedMessage(tag, i, "derivation index must be 8 bytes")
    derivation = int.from_bytes(deriv, "big") if deriv else None

    rng = rng if rng is not None else secrets.SystemRandom()
    seed = seed_from_secret(p.purify, r_prime) if r_prime is not None else new_seed(p.purify, rng)
    X3 = PublicPair(p.B * (shares.a3 % q), seed.R_prime)
    D = p.B * (y31 * y32 % q)
    record = PartyRecord(p, 3, x3, seed.r_prime, A, {i: X_online, 3: X3}, D,
                         {1: pay["rec1"], 2: pay["rec2"]}, {}, None, derivation)
    my_proof = schnorr_prove(p, x3, p.B * x3, recovery_context(cid, 3), rng)
    reply = CeremonyMessage(cid, "X3", 3, i, {
        "X_A": X3.A.encode(),
        "X_R": encode_aux(p, X3.R_prime),
        "proof": my_proof.to_bytes(p),
    })
    return record, reply


def accept_x3(record: PartyRecord, reply: CeremonyMessage) -> PartyRecord:
    """Online party's check of P3's answer; returns the record extended with X_3."""
    p, tag = record.profile, "X3"
    pay = reply.payload
    X3 = PublicPair(decode_point(p, pay["X_A"], tag, 3), decode_aux_point(p, pay["X_R"], tag, 3))
    v = record.view
    if X3.A != v["Y31"] * 2 - v["Y32"]:
        raise AbortBadRecovery(tag, 3, "A_3 does not match 2*Y_31 - Y_32")
    try:
        proof = SchnorrProof.from_bytes(p, pay["proof"])
    except ValueError as exc:
        raise AbortMalformedMessage(tag, 3, str(exc)) from None
    if not schnorr_verify(p, x_statement(v, 3), proof, recovery_context(reply.ceremony_id, 3)):
        raise AbortBadProof(tag, 3, "proof of knowledge of x_3 does not verify")
    out = record.derived(record.derivation)
    out.X[3] = X3
    return out


class RecoverOnline(PartyMachine):
    schedule = ("REC_PKG", "X3", "NONCE", "PARTIAL")

    def __init__(self, record: PartyRecord, message: bytes, ceremony_id: str, rng=None,
                 backend: str = DEV_TRANSPARENT):
        super().__init__(ceremony_id, record.index)
        self.record = record
        self.msg = message
        self.rng = rng
        self.backend = backend

    def expects(self, tag):
        return set() if tag == "REC_PKG" else {3}

    def emit(self, tag):
        if tag == "REC_PKG":
            return [recovery_prepare(self.record, self.ceremony_id, self.rng)]
        if tag == "X3":
            return []
        if tag == "NONCE":
            self.record = accept_x3(self.record, self.got("X3", 3))
            r = self.record
            self.core = SigningCore(r.profile, r.index, 3, r.omega((r.index, 3)), r.r_prime, r.X,
                                    r.public_key, self.msg, r.derivation is not None, self.backend)
            return [self.message("NONCE", 3, **self.core.nonce_payload())]
        self.core.absorb_nonce(self.got("NONCE", 3).payload)
        return [self.message("PARTIAL", 3, **self.core.partial_payload())]

    def finish(self) -> Signature:
        return self.core.combine(self.got("PARTIAL", 3).payload)


class RecoverJoin(PartyMachine):
    schedule = ("REC_PKG", "X3", "NONCE", "PARTIAL")

    def __init__(self, profile: CurveProfile, sk3: int, online: int, message: bytes,
                 ceremony_id: str, rng=None, r_prime: Optional[int] = None,
                 backend: str = DEV_TRANSPARENT):
        super().__init__(ceremony_id, 3)
        self.profile = profile
        self.sk3 = sk3
        self.online = online
        self.msg = message
        self.rng = rng
        self.pinned = r_prime
        self.backend = backend
        self.record: Optional[PartyRecord] = None

    def expects(self, tag):
        return set() if tag == "X3" else {self.online}

    def emit(self, tag):
        if tag == "REC_PKG":
            return []
        if tag == "X3":
            self.record, reply = recovery_join(self.profile, self.sk3, self.got("REC_PKG", self.online),
                                               self.rng, self.pinned)
            return [reply]
        if tag == "NONCE":
            r = self.record
            self.core = SigningCore(r.profile, 3, self.online, r.omega((self.online, 3)), r.r_prime,
                                    r.X, r.public_key, self.msg, r.derivation is not None,
                                    self.backend)
            return [self.message("NONCE", self.online, **self.core.nonce_payload())]
        self.core.absorb_nonce(self.got("NONCE", self.online).payload)
        return [self.message("PARTIAL", self.online, **self.core.partial_payload())]

    def finish(self) -> Signature:
        return self.core.combine(self.got("PARTIAL", self.online).payload)
