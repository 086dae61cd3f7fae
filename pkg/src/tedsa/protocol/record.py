"""Long-lived party material and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..algebra import EdPoint, NonCanonical, NotOnCurve, WPoint
from ..hashing import frame, hash_to_scalar
from ..profiles import CurveProfile
from ..purify import decode_aux, encode_aux
from ..vss import lagrange_weight
from ..zkp import decode_subgroup_point
from .errors import AbortMalformedMessage

PARTIES = (1, 2, 3)
PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class PublicPair:
    """X_i = (A_i, R'_i): a signer's public key piece and nonce-seed point."""

    A: EdPoint
    R_prime: WPoint

    def encode(self, profile: CurveProfile) -> bytes:
        return frame(self.A.encode(), encode_aux(profile, self.R_prime))

    def to_dict(self, profile: CurveProfile) -> dict:
        return {"A": self.A.encode().hex(), "R_prime": encode_aux(profile, self.R_prime).hex()}

    @classmethod
    def from_dict(cls, profile: CurveProfile, d: dict) -> "PublicPair":
        return cls(decode_subgroup_point(profile, bytes.fromhex(d["A"])),
                   decode_aux(profile, bytes.fromhex(d["R_prime"])))


def decode_point(profile: CurveProfile, data: bytes, round: str, sender: int) -> EdPoint:
    try:
        return decode_subgroup_point(profile, data)
    except (ValueError, NotOnCurve, NonCanonical) as exc:
        raise AbortMalformedMessage(round, sender, f"bad point: {exc}") from None


def decode_scalar(profile: CurveProfile, data: bytes, round: str, sender: int) -> int:
    try:
        return profile.scalar_from_bytes(data)
    except ValueError as exc:
        raise AbortMalformedMessage(round, sender, f"bad scalar: {exc}") from None


def decode_aux_point(profile: CurveProfile, data: bytes, round: str, sender: int) -> WPoint:
    try:
        return decode_aux(profile, data)
    except (ValueError, NotOnCurve) as exc:
        raise AbortMalformedMessage(round, sender, f"bad nonce-curve point: {exc}") from None


def derivation_tweak(profile: CurveProfile, D: EdPoint, index: int) -> int:
    """H(D || i) with i as an 8-byte unsigned integer."""
    if not 0 <= index < 2 ** 64:
        raise ValueError("derivation index must fit in 8 bytes")
    return hash_to_scalar(profile, "DER", D.encode(), index.to_bytes(8, "big"))


@dataclass
class PartyRecord:
    profile: CurveProfile
    index: int
    x: int
    r_prime: int
    A: EdPoint
    X: dict[int, PublicPair]
    D: Optional[EdPoint] = None
    rec: dict[int, bytes] = field(default_factory=dict)  # i -> serialized rec_{i,3}
    view: dict[str, EdPoint] = field(default_factory=dict)  # A1, A2, M1, M2, Y31, Y32
    pk3: Optional[EdPoint] = None
    derivation: Optional[int] = None
    notices: list[str] = field(default_factory=list)

    def tweak(self) -> int:
        if self.derivation is None:
            return 0
        if self.D is None:
            raise ValueError("key derivation needs the shared secret D")
        return derivation_tweak(self.profile, self.D, self.derivation)

    def omega(self, pair: tuple[int, int]) -> int:
        """This party's signing share for ``pair``: lambda_i * (x_i + tweak)."""
        if self.index not in pair:
            raise ValueError(f"P{self.index} is not in pair {pair}")
        lam = lagrange_weight(self.profile.q, pair, self.index)
        return lam * (self.x + self.tweak()) % self.profile.q

    @property
    def public_key(self) -> EdPoint:
        """A, or A^i = A + H(D || i)*B when a derivation index is set."""
        return self.A + self.profile.B * self.tweak()

    def derived(self, index: Optional[int]) -> "PartyRecord":
        return PartyRecord(self.profile, self.index, self.x, self.r_prime, self.A, dict(self.X),
                           self.D, dict(self.rec), dict(self.view), self.pk3, index,
                           list(self.notices))

    # -- persistence -------------------------------------------------------

    def to_dict(self) -> dict:
        p = self.profile
        return {
            "profile": p.to_dict(),
            "index": self.index,
            "x": p.scalar_bytes(self.x).hex(),
            "r_prime": self.r_prime,
            "A": self.A.encode().hex(),
            "X": {str(i): X.to_dict(p) for i, X in sorted(self.X.items())},
            "D": self.D.encode().hex() if self.D is not None else None,
            "rec": {str(i): blob.hex() for i, blob in sorted(self.rec.items())},
            "view": {k: P.encode().hex() for k, P in sorted(self.view.items())},
            "pk3": self.pk3.encode().hex() if self.pk3 is not None else None,
            "derivation": self.derivation,
            "notices": list(self.notices),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "PartyRecord":
        p = CurveProfile.from_dict(d["profile"])

        def pt(h):
            return decode_subgroup_point(p, bytes.fromhex(h)) if h is not None else None

        return cls(
            profile=p,
            index=d["index"],
            x=p.scalar_from_bytes(bytes.fromhex(d["x"])),
            r_prime=d["r_prime"],
            A=pt(d["A"]),
            X={int(i): PublicPair.from_dict(p, v) for i, v in d["X"].items()},
            D=pt(d["D"]),
            rec={int(i): bytes.fromhex(v) for i, v in d["rec"].items()},
            view={k: pt(v) for k, v in d["view"].items()},
            pk3=pt(d["pk3"]),
            derivation=d["derivation"],
            notices=list(d.get("notices", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "PartyRecord":
        return cls.from_dict(json.loads(text))
