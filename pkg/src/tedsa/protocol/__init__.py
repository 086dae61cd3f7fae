from .derive import derive
from .errors import (
    ABORT_CLASSES,
    AbortBadNonceProof,
    AbortBadProof,
    AbortBadRecovery,
    AbortBadShare,
    AbortBadSignature,
    AbortCommitMismatch,
    AbortMalformedMessage,
    AbortMissingMessage,
    ProtocolAbort,
)
from .keygen import KeygenParty
from .messages import ROUND_FIELDS, CeremonyMessage
from .record import PAIRS, PartyRecord, PublicPair, derivation_tweak
from .recovery import RecoverJoin, RecoverOnline, recovery_join, recovery_prepare
from .signing import SessionKeyMaterial, SignParty, SigningCore, pair_tag

__all__ = [
    "derive", "ABORT_CLASSES", "AbortBadNonceProof", "AbortBadProof", "AbortBadRecovery",
    "AbortBadShare", "AbortBadSignature", "AbortCommitMismatch", "AbortMalformedMessage",
    "AbortMissingMessage", "ProtocolAbort", "KeygenParty", "ROUND_FIELDS", "CeremonyMessage",
    "PAIRS", "PartyRecord", "PublicPair", "derivation_tweak", "RecoverJoin", "RecoverOnline",
    "recovery_join", "recovery_prepare", "SessionKeyMaterial", "SignParty", "SigningCore",
    "pair_tag",
]
