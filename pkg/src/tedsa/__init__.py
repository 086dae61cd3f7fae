"""2-of-3 threshold EdDSA with an offline recovery party."""

from .eddsa import CentralKeypair, Signature, central_sign, central_verify
from .harness import CeremonyConfig, run_ceremony
from .profiles import ED25519, PROFILES, TOY, CurveProfile, PurifyParams, get_profile
from .recovery_enc import RecoveryKeypair

__all__ = [
    "CentralKeypair", "Signature", "central_sign", "central_verify",
    "CeremonyConfig", "run_ceremony",
    "ED25519", "PROFILES", "TOY", "CurveProfile", "PurifyParams", "get_profile",
    "RecoveryKeypair",
]
