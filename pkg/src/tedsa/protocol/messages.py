"""Ceremony messages and their canonical text encoding."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import AbortMalformedMessage

# Payload fields each round tag carries.
ROUND_FIELDS: dict[str, tuple[str, ...]] = {
    "KGC": ("C",),
    "KGD": ("D",),
    "SHARE": ("y", "rec"),
    "POK": ("proof",),
    "REC_PKG": ("A", "rec1", "rec2", "X_A", "X_R", "proof", "deriv"),
    "X3": ("X_A", "X_R", "proof"),
    "NONCE": ("R", "proof"),
    "PARTIAL": ("S",),
}


@dataclass(frozen=True)
class CeremonyMessage:
    ceremony_id: str
    round: str
    sender: int
    recipient: Optional[int]  # None means broadcast
    payload: dict[str, bytes] = field(default_factory=dict)

    def __post_init__(self):
        validate_payload(self.round, self.sender, self.payload)

    def to_dict(self) -> dict:
        return {
            "ceremony": self.ceremony_id,
            "round": self.round,
            "sender": self.sender,
            "recipient": self.recipient,
            "payload": {k: v.hex() for k, v in sorted(self.payload.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_bytes(self) -> bytes:
        return self.to_json().encode()

    @classmethod
    def from_dict(cls, d: dict) -> "CeremonyMessage":
        try:
            payload = {k: bytes.fromhex(v) for k, v in d["payload"].items()}
            return cls(d["ceremony"], d["round"], int(d["sender"]), d["recipient"], payload)
        except (KeyError, TypeError, ValueError) as exc:
            raise AbortMalformedMessage(str(d.get("round", "?")), d.get("sender"), str(exc)) from None

    @classmethod
    def from_json(cls, text: str | bytes) -> "CeremonyMessage":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AbortMalformedMessage("?", None, f"bad JSON: {exc}") from None
        return cls.from_dict(d)

    def with_payload(self, **changes: bytes) -> "CeremonyMessage":
        payload = dict(self.payload)
        payload.update(changes)
        return CeremonyMessage(self.ceremony_id, self.round, self.sender, self.recipient, payload)


def validate_payload(round: str, sender: int, payload: dict) -> None:
    fields = ROUND_FIELDS.get(round)
    if fields is None:
        raise AbortMalformedMessage(round, sender, "unknown round tag")
    if set(payload) != set(fields):
        raise AbortMalformedMessage(round, sender, f"expected fields {sorted(fields)}, got {sorted(payload)}")
    for k, v in payload.items():
        if not isinstance(v, bytes):
            raise AbortMalformedMessage(round, sender, f"field {k} is not bytes")
