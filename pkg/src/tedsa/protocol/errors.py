"""Named aborts. Every failure during a ceremony is terminal for that ceremony."""

from __future__ import annotations

from typing import Optional


class ProtocolAbort(Exception):
    exit_code = 10

    def __init__(self, round: str, sender: Optional[int], reason: str = ""):
        self.round = round
        self.sender = sender
        self.reason = reason
        who = f"P{sender}" if sender is not None else "?"
        super().__init__(f"{type(self).__name__} in round {round} from {who}: {reason}".rstrip(": "))


class AbortCommitMismatch(ProtocolAbort):
    exit_code = 11


class AbortBadShare(ProtocolAbort):
    exit_code = 12


class AbortBadProof(ProtocolAbort):
    exit_code = 13


class AbortBadNonceProof(ProtocolAbort):
    exit_code = 14


class AbortBadSignature(ProtocolAbort):
    exit_code = 15


class AbortMissingMessage(ProtocolAbort):
    exit_code = 16


class AbortMalformedMessage(ProtocolAbort):
    exit_code = 17


class AbortBadRecovery(ProtocolAbort):
    exit_code = 18


ABORT_CLASSES = (
    AbortCommitMismatch,
    AbortBadShare,
    AbortBadProof,
    AbortBadNonceProof,
    AbortBadSignature,
    AbortMissingMessage,
    AbortMalformedMessage,
    AbortBadRecovery,
)
