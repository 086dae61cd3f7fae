"""Command-line harness.

State lives in one directory: profile.json, p3.key / p3.pub, partyN.json,
pubkey.hex and a transcripts/ folder. Records are plaintext unless --sealed
is given, in which case they are encrypted under the passphrase in
$TEDSA_PASSPHRASE.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import secrets
import sys
from pathlib import Path
from typing import Optional

from .eddsa import central_verify
from .harness import CeremonyConfig, ConfigError, run_ceremony, transcript_json
from .profiles import CurveProfile, PROFILES, get_profile
from .protocol.errors import ProtocolAbort
from .protocol.record import PartyRecord
from .recovery_enc import RecoveryKeypair
from .zkp import decode_subgroup_point

log = logging.getLogger("tedsa")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3

PASSPHRASE_ENV = "TEDSA_PASSPHRASE"


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Sealed storage


def _seal(plaintext: bytes, passphrase: str) -> bytes:
    from cryptography.hazmat.primitives.ciphers.aead import AESGCM
    from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

    salt, nonce = os.urandom(16), os.urandom(12)
    key = Scrypt(salt=salt, length=32, n=2 ** 14, r=8, p=1).derive(passphrase.encode())
    ct = AESGCM(key).encrypt(nonce, plaintext, b"tedsa-record")
    return json.dumps({"sealed": 1, "salt": salt.hex(), "nonce": nonce.hex(), "ct": ct.hex()}).encode()


def _unseal(blob: dict, passphrase: str) -> bytes:
    from cryptography.exceptions import InvalidTag
    from cryptography.hazmat.primitives.ciphers.aead import AESGCM
    from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

    salt = bytes.fromhex(blob["salt"])
    key = Scrypt(salt=salt, length=32, n=2 ** 14, r=8, p=1).derive(passphrase.encode())
    try:
        return AESGCM(key).decrypt(bytes.fromhex(blob["nonce"]), bytes.fromhex(blob["ct"]),
                                   b"tedsa-record")
    except InvalidTag:
        raise ConfigError("wrong passphrase or corrupted sealed file") from None


class Store:
    def __init__(self, root: Path, sealed: bool):
        self.root = root
        self.sealed = sealed

    def _passphrase(self) -> str:
        value = os.environ.get(PASSPHRASE_ENV)
        if not value:
            raise ConfigError(f"sealed mode needs ${PASSPHRASE_ENV}")
        return value

    def write_secret(self, name: str, text: str) -> Path:
        path = self.root / name
        if self.sealed:
            path.write_bytes(_seal(text.encode(), self._passphrase()))
        else:
            log.warning("writing %s in plaintext (use --sealed to encrypt records)", path)
            path.write_text(text)
        return path

    def read_secret(self, name: str) -> str:
        path = self.root / name
        if not path.exists():
            raise ConfigError(f"{path} not found")
        raw = path.read_bytes()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError:
            raise ConfigError(f"{path} is not valid JSON") from None
        if isinstance(doc, dict) and doc.get("sealed") == 1:
            return _unseal(doc, self._passphrase()).decode()
        return raw.decode()

    def profile(self) -> CurveProfile:
        path = self.root / "profile.json"
        if not path.exists():
            raise ConfigError(f"{path} not found; run setup first")
        return CurveProfile.from_dict(json.loads(path.read_text()))

    def record(self, i: int) -> PartyRecord:
        return PartyRecord.from_json(self.read_secret(f"party{i}.json"))

    def recovery_key(self, profile: CurveProfile, secret: bool) -> RecoveryKeypair:
        if secret:
            doc = json.loads(self.read_secret("p3.key"))
            sk = profile.scalar_from_bytes(bytes.fromhex(doc["sk"]))
            return RecoveryKeypair(sk, profile.B * sk)
        pk = decode_subgroup_point(profile, bytes.fromhex((self.root / "p3.pub").read_text().strip()))
        return RecoveryKeypair(0, pk)

    def transcript(self, transcript: dict) -> Path:
        folder = self.root / "transcripts"
        folder.mkdir(exist_ok=True)
        path = folder / f"{transcript['ceremony']}.json"
        path.write_text(transcript_json(transcript))
        return path


# --------------------------------------------------------------------------
# Commands


def _parse_signers(text: str) -> tuple[int, int]:
    try:
        parts = tuple(sorted(int(s) for s in text.split(",")))
    except ValueError:
        raise UsageError(f"--signers expects two indices like 1,2, got {text!r}") from None
    if len(parts) != 2 or parts not in ((1, 2), (1, 3), (2, 3)):
        raise UsageError(f"--signers must be one of 1,2 / 1,3 / 2,3, got {text!r}")
    return parts


def _ceremony_id(kind: str) -> str:
    return f"{kind}-{secrets.token_hex(6)}"


def _finish(result, store: Store) -> Optional[int]:
    path = store.transcript(result.transcript)
    log.info("transcript written to %s", path)
    if result.outcome.abort is not None:
        exc = result.outcome.abort
        print(f"abort: {exc}", file=sys.stderr)
        return exc.exit_code
    return None


def cmd_setup(args, store: Store) -> int:
    if args.validate:
        profile = CurveProfile.from_dict(json.loads(Path(args.validate).read_text()))
        check_profile(profile)
        print(f"profile {profile.name!r} is consistent")
        return EXIT_OK
    profile = get_profile(args.profile) if args.profile in PROFILES else \
        CurveProfile.from_dict(json.loads(Path(args.profile).read_text()))
    check_profile(profile)
    if profile.purify is None:
        log.warning("profile %r has no nonce-curve parameters; keygen and signing will refuse",
                    profile.name)
    store.root.mkdir(parents=True, exist_ok=True)
    (store.root / "profile.json").write_text(profile.to_json())
    rk = RecoveryKeypair.generate(profile, _rng(args))
    store.write_secret("p3.key", json.dumps({"sk": profile.scalar_bytes(rk.sk).hex()}))
    (store.root / "p3.pub").write_text(rk.pk.encode().hex())
    print(rk.pk.encode().hex())
    return EXIT_OK


def check_profile(profile: CurveProfile) -> None:
    if not (profile.B * profile.q).is_identity() or not profile.B.is_on_curve():
        raise ConfigError("base point does not have order q")
    pur = profile.purify
    if pur is not None:
        if not pur.B_prime.is_on_curve() or not (pur.B_prime * pur.order).is_infinity:
            raise ConfigError("nonce-curve generator is not of order q1*q2")
        if (pur.B_prime * pur.q1).is_infinity or (pur.B_prime * pur.q2).is_infinity:
            raise ConfigError("nonce-curve base point does not generate the whole group")


def _rng(args):
    return random.Random(args.seed) if args.seed is not None else None


def cmd_keygen(args, store: Store) -> int:
    profile = store.profile()
    cfg = CeremonyConfig(profile, _ceremony_id("keygen"), recovery_key=store.recovery_key(profile, False),
                         seed=args.seed)
    result = run_ceremony("keygen", cfg)
    code = _finish(result, store)
    if code is not None:
        return code
    for i, rec in result.records.items():
        store.write_secret(f"party{i}.json", rec.to_json())
    A = result.outcome.public_key.encode().hex()
    (store.root / "pubkey.hex").write_text(A)
    print(A)
    return EXIT_OK


def _sign(args, store: Store, kind: str) -> int:
    profile = store.profile()
    signers = _parse_signers(args.signers)
    if kind == "sign" and signers != (1, 2):
        raise UsageError("sign is for signers 1,2; use recover-sign with P3")
    if kind == "recover-sign" and 3 not in signers:
        raise UsageError("recover-sign needs P3 among the signers")
    message = Path(args.msg).read_bytes()
    online = [i for i in signers if i != 3]
    records = {i: store.record(i) for i in online}
    rk = store.recovery_key(profile, True) if kind == "recover-sign" else None
    pinned = None
    if kind == "recover-sign" and args.pin_r3 and (store.root / "party3.json").exists():
        pinned = store.record(3).r_prime
    cfg = CeremonyConfig(profile, _ceremony_id(kind), message, signers, records, rk,
                         derivation=args.index, seed=args.seed, pinned_r3=pinned)
    result = run_ceremony(kind, cfg)
    code = _finish(result, store)
    if code is not None:
        return code
    if kind == "recover-sign" and args.pin_r3 and pinned is None:
        rec3 = result.records[3].derived(None)
        store.write_secret("party3.json", rec3.to_json())
    sig = result.outcome.signature.to_bytes(profile)
    out = Path(args.out) if args.out else Path(args.msg).with_suffix(".sig")
    out.write_bytes(sig)
    print(sig.hex())
    return EXIT_OK


def cmd_derive(args, store: Store) -> int:
    profile = store.profile()
    records = {i: store.record(i) for i in (1, 2) if (store.root / f"party{i}.json").exists()}
    cfg = CeremonyConfig(profile, _ceremony_id("derive"), records=records, derivation=args.index)
    result = run_ceremony("derive", cfg)
    store.transcript(result.transcript)
    A = result.outcome.public_key.encode().hex()
    (store.root / f"pubkey-{args.index}.hex").write_text(A)
    print(A)
    return EXIT_OK


def cmd_verify(args, store: Store) -> int:
    profile = store.profile()
    if args.pubkey:
        text = args.pubkey
        if Path(text).exists():
            text = Path(text).read_text()
    else:
        name = "pubkey.hex" if args.index is None else f"pubkey-{args.index}.hex"
        path = store.root / name
        if not path.exists():
            raise ConfigError(f"{path} not found")
        text = path.read_text()
    try:
        A = decode_subgroup_point(profile, bytes.fromhex(text.strip()))
    except ValueError as exc:
        raise ConfigError(f"bad public key: {exc}") from None
    sig = Path(args.sig).read_bytes()
    message = Path(args.msg).read_bytes()
    if central_verify(profile, A, message, sig):
        print("valid")
        return EXIT_OK
    print("invalid")
    return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tedsa", description="2-of-3 threshold EdDSA with an offline recovery party")
    parser.add_argument("--dir", default="tedsa-state", help="state directory (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=None, help="deterministic randomness, for tests only")
    parser.add_argument("--sealed", action="store_true", help=f"encrypt records with ${PASSPHRASE_ENV}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="write the curve profile and P3's recovery key pair")
    p.add_argument("--profile", default="toy", help="toy, ed25519, or a profile JSON file")
    p.add_argument("--validate", metavar="FILE", help="only check a profile JSON file")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="run key generation between P1 and P2")
    p.set_defaults(func=cmd_keygen)

    for name, func in (("sign", lambda a, s: _sign(a, s, "sign")),
                       ("recover-sign", lambda a, s: _sign(a, s, "recover-sign"))):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} a message")
        p.add_argument("--signers", required=True, help="e.g. 1,2")
        p.add_argument("--msg", required=True, help="file holding the message")
        p.add_argument("--out", help="signature file (default: <msg>.sig)")
        p.add_argument("--index", type=int, help="sign under the derived key with this index")
        if name == "recover-sign":
            p.add_argument("--pin-r3", action="store_true", help="reuse P3's nonce seed across recoveries")
        p.set_defaults(func=func)

    p = sub.add_parser("derive", help="compute the derived public key for an index")
    p.add_argument("--index", type=int, required=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify", help="check a signature with the cofactored EdDSA equation")
    p.add_argument("--sig", required=True)
    p.add_argument("--msg", required=True)
    p.add_argument("--pubkey", help="hex public key or file (default: state directory)")
    p.add_argument("--index", type=int, help="use the derived key with this index")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    store = Store(Path(args.dir), args.sealed)
    try:
        return args.func(args, store)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProtocolAbort as exc:
        print(f"abort: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
