"""Distributed key generation between P1 and P2 with P3 offline.

Round KGC: commit to (A_i, Y_3i, R'_i, M_i).
Round KGD: open the commitment.
Round SHARE: send y_ij = f_i(j) = a_i + m_i*j and the recovery blob rec_i3.
Round POK: prove knowledge of x_i = y_1i + y_2i + y_3i.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from ..algebra import EdPoint
from ..commitment import commit, decode_tuple, encode_tuple, open_commitment
from ..hashing import frame
from ..profiles import CurveProfile
from ..purify import encode_aux, new_seed
from ..recovery_enc import DLOG_SKIPPED_NOTICE, RecBlob, supports_dlog_verification
from ..vss import deal, verify_share
from ..zkp import SchnorrProof, schnorr_prove, schnorr_verify
from .errors import AbortBadProof, AbortBadShare, AbortCommitMismatch, AbortMalformedMessage
from .machine import PartyMachine
from .record import PartyRecord, PublicPair, decode_aux_point, decode_point, decode_scalar

ONLINE = (1, 2)


def keygen_context(ceremony_id: str, index: int) -> bytes:
    return frame(b"KG/POK", ceremony_id.encode(), bytes([index]))


def share_point(view_A: EdPoint, view_M: EdPoint, j: int) -> EdPoint:
    """Y_{i,j} = A_i + j*M_i."""
    return view_A + view_M * j


def x_statement(view: dict[str, EdPoint], i: int) -> EdPoint:
    """x_i*B from public keygen data: Y_1i + Y_2i + Y_3i.

    For i = 3 the recovery party's share point is extrapolated from Y_31, Y_32.
    """
    Y3 = {1: view["Y31"], 2: view["Y32"], 3: view["Y32"] * 2 - view["Y31"]}[i]
    return share_point(view["A1"], view["M1"], i) + share_point(view["A2"], view["M2"], i) + Y3


@dataclass(frozen=True)
class KeygenOpening:
    A: EdPoint
    Y3: EdPoint
    R_prime: object
    M: EdPoint


class KeygenParty(PartyMachine):
    schedule = ("KGC", "KGD", "SHARE", "POK")

    def __init__(self, profile: CurveProfile, index: int, pk3: EdPoint, ceremony_id: str,
                 rng=None):
        if index not in ONLINE:
            raise ValueError("key generation runs between P1 and P2")
        if profile.purify is None:
            raise ValueError(f"profile {profile.name!r} has no nonce-curve parameters")
        super().__init__(ceremony_id, index)
        self.profile = profile
        self.pk3 = pk3
        self.peer = 3 - index
        self.rng = rng if rng is not None else secrets.SystemRandom()
        q = profile.q
        self.a = self.rng.randrange(q)
        self.y3 = self.rng.randrange(q)
        self.m = self.rng.randrange(q)
        self.seed = new_seed(profile.purify, self.rng)
        self.dealing = deal(profile, [self.a, self.m], (1, 2, 3))
        self.mine = KeygenOpening(profile.B * self.a, profile.B * self.y3, self.seed.R_prime,
                                  profile.B * self.m)
        self.notices: list[str] = []

    def expects(self, tag):
        return {self.peer}

    def _encode_opening(self, o: KeygenOpening) -> bytes:
        return encode_tuple(o.A.encode(), o.Y3.encode(), encode_aux(self.profile, o.R_prime),
                            o.M.encode())

    def _decode_opening(self, value: bytes) -> KeygenOpening:
        try:
            A, Y3, R, M = decode_tuple(value, 4)
        except ValueError as exc:
            raise AbortMalformedMessage("KGD", self.peer, str(exc)) from None
        p = self.profile
        return KeygenOpening(decode_point(p, A, "KGD", self.peer), decode_point(p, Y3, "KGD", self.peer),
                             decode_aux_point(p, R, "KGD", self.peer), decode_point(p, M, "KGD", self.peer))

    def emit(self, tag):
        return getattr(self, f"_round_{tag}")()

    def _round_KGC(self):
        self.com = commit(self.profile, self._encode_opening(self.mine), self.rng)
        return [self.message("KGC", None, C=self.com.C)]

    def _round_KGD(self):
        return [self.message("KGD", None, D=self.com.D)]

    def _round_SHARE(self):
        C = self.got("KGC", self.peer).payload["C"]
        D = self.got("KGD", self.peer).payload["D"]
        value = open_commitment(self.profile, C, D)
        if value is None:
            raise AbortCommitMismatch("KGD", self.peer, "decommitment does not open KGC")
        self.theirs = self._decode_opening(value)
        y_peer = self.dealing.shares[self.peer]
        y_for_p3 = self.dealing.shares[3]
        self.rec_mine = RecBlob.seal(self.profile, self.pk3, y_for_p3, self.y3, self.rng).to_bytes()
        return [self.message("SHARE", self.peer, y=self.profile.scalar_bytes(y_peer), rec=self.rec_mine)]

    def _round_POK(self):
        msg = self.got("SHARE", self.peer)
        y = decode_scalar(self.profile, msg.payload["y"], "SHARE", self.peer)
        if not verify_share(self.profile, self.index, y, (self.theirs.A, self.theirs.M)):
            raise AbortBadShare("SHARE", self.peer, "Y_ji != A_j + i*M_j")
        try:
            RecBlob.from_bytes(msg.payload["rec"])
        except ValueError as exc:
            raise AbortMalformedMessage("SHARE", self.peer, f"bad recovery blob: {exc}") from None
        self.rec_theirs = msg.payload["rec"]
        if not supports_dlog_verification():
            self.notices.append(DLOG_SKIPPED_NOTICE)
        q = self.profile.q
        self.x = (self.dealing.shares[self.index] + y + self.y3) % q
        self.view = self._public_view()
        K = x_statement(self.view, self.index)
        proof = schnorr_prove(self.profile, self.x, K, keygen_context(self.ceremony_id, self.index),
                              self.rng)
        return [self.message("POK", None, proof=proof.to_bytes(self.profile))]

    def _public_view(self) -> dict[str, EdPoint]:
        by_index = {self.index: self.mine, self.peer: self.theirs}
        return {
            "A1": by_index[1].A, "A2": by_index[2].A,
            "M1": by_index[1].M, "M2": by_index[2].M,
            "Y31": by_index[1].Y3, "Y32": by_index[2].Y3,
        }

    def finish(self) -> PartyRecord:
        p = self.profile
        data = self.got("POK", self.peer).payload["proof"]
        try:
            proof = SchnorrProof.from_bytes(p, data)
        except ValueError as exc:
            raise AbortMalformedMessage("POK", self.peer, str(exc)) from None
        K = x_statement(self.view, self.peer)
        if not schnorr_verify(p, K, proof, keygen_context(self.ceremony_id, self.peer)):
            raise AbortBadProof("POK", self.peer, "proof of knowledge of x does not verify")
        v = self.view
        A3 = v["Y31"] * 2 - v["Y32"]
        A = v["A1"] + v["A2"] + A3
        D = self.theirs.Y3 * self.y3
        rec = {self.index: self.rec_mine, self.peer: self.rec_theirs}
        X = {self.index: PublicPair(self.mine.A, self.mine.R_prime),
             self.peer: PublicPair(self.theirs.A, self.theirs.R_prime)}
        return PartyRecord(p, self.index, self.x, self.seed.r_prime, A, X, D, rec, dict(v),
                           self.pk3, None, list(self.notices))
