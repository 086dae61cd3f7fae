"""In-memory ceremony driver with adversarial message hooks.

Each round is a barrier: every party steps, all of that round's messages are
pushed through the transport (and the adversary), and only then does anyone
move on. A message that never arrives therefore surfaces as
:class:`AbortMissingMessage` at the next barrier instead of a hang.
"""

from __future__ import annotations

import json
import random
import secrets
from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .algebra import EdPoint
from .commitment import decode_tuple, encode_tuple, open_commitment
from .eddsa import Signature, central_verify
from .hashing import frame
from .profiles import CurveProfile
from .protocol.errors import ProtocolAbort
from .protocol.keygen import KeygenParty, keygen_context, x_statement
from .protocol.machine import PartyMachine
from .protocol.messages import CeremonyMessage
from .protocol.record import PartyRecord
from .protocol.recovery import RecoverJoin, RecoverOnline
from .protocol.signing import SignParty
from .recovery_enc import RecoveryKeypair, enc
from .vss import verify_share
from .zkp import DEV_TRANSPARENT, SchnorrProof, decode_subgroup_point, schnorr_verify

KINDS = ("keygen", "sign", "recover-sign", "derive")


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# Transport


class Transport:
    """FIFO per (sender, receiver) with a delivery log."""

    def __init__(self, parties):
        self.parties = tuple(parties)
        self.queues: dict[tuple[int, int], deque] = defaultdict(deque)
        self.log: list[CeremonyMessage] = []

    def send(self, msg: CeremonyMessage) -> None:
        targets = [msg.recipient] if msg.recipient is not None else [
            p for p in self.parties if p != msg.sender]
        for t in targets:
            if t in self.parties:
                self.queues[(msg.sender, t)].append(msg)

    def drain(self, receiver: int) -> list[CeremonyMessage]:
        out = []
        for sender in self.parties:
            q = self.queues.get((sender, receiver))
            while q:
                msg = q.popleft()
                self.log.append(msg)
                out.append(msg)
        return out


# --------------------------------------------------------------------------
# Adversary


@dataclass
class Mutation:
    """One tampering rule.

    kind ``flip`` xors ``mask`` into byte ``index`` of payload ``field``;
    ``replace`` sets ``field`` to ``value`` (bytes, or a callable taking the
    message); ``drop`` removes the message; ``replay`` delivers it twice, or
    delivers ``value`` (a captured message) in its place when given.
    """

    round: str
    sender: int
    kind: str
    field: Optional[str] = None
    index: int = 0
    mask: int = 1
    value: Union[bytes, Callable, CeremonyMessage, None] = None
    fired: bool = False

    def apply(self, msg: CeremonyMessage) -> list[CeremonyMessage]:
        self.fired = True
        if self.kind == "drop":
            return []
        if self.kind == "replay":
            if isinstance(self.value, CeremonyMessage):
                return [self.value]
            return [msg, msg]
        if self.kind == "flip":
            data = bytearray(msg.payload[self.field])
            data[self.index] ^= self.mask
            return [msg.with_payload(**{self.field: bytes(data)})]
        if self.kind == "replace":
            new = self.value(msg) if callable(self.value) else self.value
            return [msg.with_payload(**{self.field: new})]
        raise ValueError(f"unknown mutation {self.kind!r}")


@dataclass
class AdversaryScript:
    mutations: list[Mutation] = field(default_factory=list)

    def intercept(self, msg: CeremonyMessage) -> list[CeremonyMessage]:
        for m in self.mutations:
            if not m.fired and m.round == msg.round and m.sender == msg.sender:
                return m.apply(msg)
        return [msg]


# --------------------------------------------------------------------------
# Ceremonies


@dataclass
class CeremonyConfig:
    profile: CurveProfile
    ceremony_id: str = "ceremony"
    message: bytes = b""
    signers: tuple[int, int] = (1, 2)
    records: dict[int, PartyRecord] = field(default_factory=dict)
    recovery_key: Optional[RecoveryKeypair] = None
    derivation: Optional[int] = None
    seed: Optional[int] = None
    threads: bool = False
    backend: str = DEV_TRANSPARENT
    pinned_r3: Optional[int] = None

    def rng(self):
        return random.Random(self.seed) if self.seed is not None else secrets.SystemRandom()


@dataclass
class Outcome:
    signature: Optional[Signature] = None
    public_key: Optional[EdPoint] = None
    abort: Optional[ProtocolAbort] = None
    detected_by: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.abort is None

    def to_dict(self, profile: CurveProfile) -> dict:
        if self.abort is not None:
            a = self.abort
            return {"status": "abort", "abort": {
                "class": type(a).__name__, "round": a.round, "sender": a.sender,
                "reason": a.reason, "detected_by": self.detected_by}}
        d = {"status": "ok"}
        if self.signature is not None:
            d["signature"] = self.signature.to_bytes(profile).hex()
        if self.public_key is not None:
            d["public_key"] = self.public_key.encode().hex()
        return d


@dataclass
class CeremonyResult:
    kind: str
    outcome: Outcome
    transcript: dict
    records: dict[int, PartyRecord] = field(default_factory=dict)


def _validate(kind: str, cfg: CeremonyConfig) -> None:
    if kind not in KINDS:
        raise ConfigError(f"unknown ceremony kind {kind!r}")
    if cfg.profile.purify is None and kind != "derive":
        raise ConfigError(f"profile {cfg.profile.name!r} has no nonce-curve parameters")
    if kind == "keygen":
        if cfg.recovery_key is None:
            raise ConfigError("keygen needs P3's public key")
        return
    pair = tuple(sorted(cfg.signers))
    if kind == "sign":
        if pair != (1, 2):
            raise ConfigError("ordinary signing is between P1 and P2; use recover-sign for P3")
        for i in pair:
            if i not in cfg.records:
                raise ConfigError(f"missing record for P{i}")
    elif kind == "recover-sign":
        if pair not in ((1, 3), (2, 3)):
            raise ConfigError("recover-sign needs signers 1,3 or 2,3")
        if pair[0] not in cfg.records:
            raise ConfigError(f"missing record for P{pair[0]}")
        if cfg.recovery_key is None:
            raise ConfigError("recover-sign needs P3's secret key")
    elif kind == "derive":
        if not cfg.records:
            raise ConfigError("derive needs at least one record")
        if cfg.derivation is None:
            raise ConfigError("derive needs an index")


def _machines(kind: str, cfg: CeremonyConfig, rng) -> dict[int, PartyMachine]:
    cid = cfg.ceremony_id
    if kind == "keygen":
        pk3 = cfg.recovery_key.pk
        return {i: KeygenParty(cfg.profile, i, pk3, cid, rng) for i in (1, 2)}
    records = {i: r.derived(cfg.derivation) if cfg.derivation is not None else r
               for i, r in cfg.records.items()}
    if kind == "sign":
        return {i: SignParty(records[i], 3 - i, cfg.message, cid, cfg.backend) for i in (1, 2)}
    online = min(cfg.signers)
    return {
        online: RecoverOnline(records[online], cfg.message, cid, rng, cfg.backend),
        3: RecoverJoin(cfg.profile, cfg.recovery_key.sk, online, cfg.message, cid, rng,
                       cfg.pinned_r3, cfg.backend),
    }


def run_ceremony(kind: str, config: CeremonyConfig,
                 script: Optional[AdversaryScript] = None) -> CeremonyResult:
    _validate(kind, config)
    profile = config.profile
    if kind == "derive":
        return _run_derive(config)
    rng = config.rng()
    machines = _machines(kind, config, rng)
    transport = Transport(sorted(machines))
    outcome = Outcome()
    pool = ThreadPoolExecutor(len(machines)) if config.threads else None

    def step(i):
        try:
            return i, machines[i].step(), None
        except ProtocolAbort as exc:
            return i, [], exc

    try:
        while not all(m.done for m in machines.values()):
            order = sorted(machines)
            results = list(pool.map(step, order)) if pool else [step(i) for i in order]
            failed = [(i, exc) for i, _, exc in results if exc is not None]
            if failed:
                outcome.detected_by, outcome.abort = failed[0]
                break
            for _, out, _ in results:
                for msg in out:
                    for delivered in (script.intercept(msg) if script else [msg]):
                        transport.send(delivered)
            try:
                for i in order:
                    for msg in transport.drain(i):
                        machines[i].receive(msg)
            except ProtocolAbort as exc:
                outcome.detected_by, outcome.abort = i, exc
                break
    finally:
        if pool:
            pool.shutdown()

    records: dict[int, PartyRecord] = {}
    if outcome.ok:
        outputs = {i: m.output for i, m in machines.items()}
        if kind == "keygen":
            records = outputs
            outcome.public_key = outputs[1].A
            if outputs[1].A != outputs[2].A or outputs[1].D != outputs[2].D:
                raise AssertionError("honest keygen parties disagree")
        else:
            sigs = set(s.to_bytes(profile) for s in outputs.values())
            if len(sigs) != 1:
                raise AssertionError("signers produced different signatures")
            outcome.signature = next(iter(outputs.values()))
            outcome.public_key = next(iter(_signing_keys(machines)))
            if kind == "recover-sign":
                records = {3: machines[3].record}
    transcript = _transcript(kind, config, transport.log, outcome, machines)
    return CeremonyResult(kind, outcome, transcript, records)


def _signing_keys(machines):
    for m in machines.values():
        core = getattr(m, "core", None)
        if core is not None:
            yield core.public_key


def _run_derive(cfg: CeremonyConfig) -> CeremonyResult:
    from .protocol.derive import derive

    records, keys = {}, set()
    for i, rec in sorted(cfg.records.items()):
        records[i], Ai = derive(rec, cfg.derivation)
        keys.add(Ai.encode())
    if len(keys) != 1:
        raise AssertionError("parties derived different public keys")
    any_rec = next(iter(records.values()))
    outcome = Outcome(public_key=any_rec.public_key)
    p = cfg.profile
    transcript = {
        "ceremony": cfg.ceremony_id,
        "kind": "derive",
        "profile": p.to_dict(),
        "messages": [],
        "public": {"A": any_rec.A.encode().hex(), "index": cfg.derivation,
                   "tweak": p.scalar_bytes(any_rec.tweak()).hex()},
        "notices": [],
        "outcome": outcome.to_dict(p),
    }
    return CeremonyResult("derive", outcome, transcript, records)


def _transcript(kind, cfg, log, outcome, machines) -> dict:
    p = cfg.profile
    public = {"message": cfg.message.hex()} if kind != "keygen" else {}
    if outcome.public_key is not None and kind != "keygen":
        public["public_key"] = outcome.public_key.encode().hex()
    notices = sorted({n for m in machines.values() for n in getattr(m, "notices", [])})
    return {
        "ceremony": cfg.ceremony_id,
        "kind": kind,
        "profile": p.to_dict(),
        "messages": [m.to_dict() for m in log],
        "public": public,
        "notices": notices,
        "outcome": outcome.to_dict(p),
    }


def transcript_json(transcript: dict) -> str:
    return json.dumps(transcript, sort_keys=True, indent=2)


# --------------------------------------------------------------------------
# Verification-only replay


def replay_transcript(transcript: dict) -> dict:
    """Recompute a recorded honest ceremony's outcome from public data alone."""
    p = CurveProfile.from_dict(transcript["profile"])
    kind = transcript["kind"]
    msgs = [CeremonyMessage.from_dict(m) for m in transcript["messages"]]
    by_round: dict[str, dict[int, CeremonyMessage]] = defaultdict(dict)
    for m in msgs:
        by_round[m.round][m.sender] = m
    public = transcript["public"]
    try:
        if kind == "keygen":
            return _replay_keygen(p, transcript["ceremony"], by_round)
        if kind == "derive":
            A = decode_subgroup_point(p, bytes.fromhex(public["A"]))
            tweak = p.scalar_from_bytes(bytes.fromhex(public["tweak"]))
            return Outcome(public_key=A + p.B * tweak).to_dict(p)
        return _replay_signing(p, by_round, public)
    except ProtocolAbort as exc:
        return Outcome(abort=exc).to_dict(p)


def _replay_keygen(p: CurveProfile, cid: str, by_round) -> dict:
    from .protocol.errors import AbortBadProof, AbortBadShare, AbortCommitMismatch

    view = {}
    openings = {}
    for i in (1, 2):
        value = open_commitment(p, by_round["KGC"][i].payload["C"], by_round["KGD"][i].payload["D"])
        if value is None:
            raise AbortCommitMismatch("KGD", i, "replay")
        A, Y3, _, M = (decode_subgroup_point(p, v) if k != 2 else None
                       for k, v in enumerate(decode_tuple(value, 4)))
        openings[i] = (A, M)
        view.update({f"A{i}": A, f"M{i}": M, f"Y3{i}": Y3})
    for i in (1, 2):
        j = 3 - i
        y = p.scalar_from_bytes(by_round["SHARE"][j].payload["y"])
        if not verify_share(p, i, y, openings[j]):
            raise AbortBadShare("SHARE", j, "replay")
        proof = SchnorrProof.from_bytes(p, by_round["POK"][i].payload["proof"])
        if not schnorr_verify(p, x_statement(view, i), proof, keygen_context(cid, i)):
            raise AbortBadProof("POK", i, "replay")
    A = view["A1"] + view["A2"] + view["Y31"] * 2 - view["Y32"]
    return Outcome(public_key=A).to_dict(p)


def _replay_signing(p: CurveProfile, by_round, public) -> dict:
    from .protocol.errors import AbortBadSignature

    A = decode_subgroup_point(p, bytes.fromhex(public["public_key"]))
    message = bytes.fromhex(public["message"])
    R = p.curve.identity
    for m in by_round["NONCE"].values():
        R = R + decode_subgroup_point(p, m.payload["R"])
    S = sum(p.scalar_from_bytes(m.payload["S"]) for m in by_round["PARTIAL"].values()) % p.q
    sig = Signature(R, S)
    if not central_verify(p, A, message, sig):
        raise AbortBadSignature("PARTIAL", None, "replay")
    return Outcome(signature=sig, public_key=A).to_dict(p)


# --------------------------------------------------------------------------
# Bundled adversarial scenarios


@dataclass
class Scenario:
    name: str
    kind: str
    build: Callable[["ScenarioContext"], AdversaryScript]
    signers: tuple[int, int] = (1, 2)


@dataclass
class ScenarioContext:
    profile: CurveProfile
    recovery_key: RecoveryKeypair
    rng: random.Random
    other_ceremony: Optional[CeremonyMessage] = None


def _script(*mutations: Mutation) -> Callable[[ScenarioContext], AdversaryScript]:
    return lambda ctx: AdversaryScript([Mutation(**vars(m)) for m in mutations])


def _altered_opening(ctx: ScenarioContext) -> AdversaryScript:
    # same nonce, A_2 swapped for B: a decommitment to a different key piece
    def rewrite(msg: CeremonyMessage) -> bytes:
        D = msg.payload["D"]
        nonce, framed = D[:32], D[32:]
        items = decode_tuple(framed[8:], 4)
        items[0] = ctx.profile.B.encode()
        return nonce + frame(encode_tuple(*items))
    return AdversaryScript([Mutation("KGD", 2, "replace", "D", value=rewrite)])


def _reencrypted_blob(ctx: ScenarioContext) -> AdversaryScript:
    # a well-formed blob carrying a wrong y_13
    def rewrite(msg: CeremonyMessage) -> bytes:
        from .recovery_enc import RecBlob

        blob = RecBlob.from_bytes(msg.payload["rec1"])
        bad = enc(ctx.profile, ctx.recovery_key.pk, 1, ctx.rng)
        return RecBlob(bad, blob.p3_share).to_bytes()
    return AdversaryScript([Mutation("REC_PKG", 1, "replace", "rec1", value=rewrite)])


def _bump_trailing_scalar(profile: CurveProfile, field_name: str):
    # add one to the scalar at the end of a field (z of a Schnorr proof)
    def rewrite(msg: CeremonyMessage) -> bytes:
        data = msg.payload[field_name]
        n = profile.scalar_len
        z = int.from_bytes(data[-n:], "little")
        return data[:-n] + profile.scalar_bytes(z + 1)
    return rewrite


def _shift_point(profile: CurveProfile, field_name: str):
    # replace a point by P + B: still a valid subgroup point, just the wrong one
    def rewrite(msg: CeremonyMessage) -> bytes:
        P = decode_subgroup_point(profile, msg.payload[field_name])
        return (P + profile.B).encode()
    return rewrite


def _foreign_message(ctx: ScenarioContext) -> AdversaryScript:
    return AdversaryScript([Mutation("KGC", 1, "replay", value=ctx.other_ceremony)])


SCENARIOS: list[Scenario] = [
    Scenario("flip-kgc", "keygen", _script(Mutation("KGC", 1, "flip", "C", 0))),
    Scenario("flip-kgd", "keygen", _script(Mutation("KGD", 2, "flip", "D", 3))),
    Scenario("altered-opening", "keygen", _altered_opening),
    Scenario("drop-kgc", "keygen", _script(Mutation("KGC", 1, "drop"))),
    Scenario("replay-kgd", "keygen", _script(Mutation("KGD", 1, "replay"))),
    Scenario("foreign-kgc", "keygen", _foreign_message),
    Scenario("flip-share", "keygen", _script(Mutation("SHARE", 1, "flip", "y", 0))),
    Scenario("garbage-rec", "keygen", _script(Mutation("SHARE", 2, "replace", "rec", value=b"\x00"))),
    Scenario("bump-pok", "keygen", lambda ctx: AdversaryScript(
        [Mutation("POK", 2, "replace", "proof", value=_bump_trailing_scalar(ctx.profile, "proof"))])),
    Scenario("flip-nonce-proof", "sign", _script(Mutation("NONCE", 1, "flip", "proof", 1))),
    Scenario("flip-nonce-r", "sign", _script(Mutation("NONCE", 2, "flip", "R", 0))),
    Scenario("shifted-nonce-r", "sign", lambda ctx: AdversaryScript(
        [Mutation("NONCE", 2, "replace", "R", value=_shift_point(ctx.profile, "R"))])),
    Scenario("flip-partial", "sign", _script(Mutation("PARTIAL", 1, "flip", "S", 0))),
    Scenario("drop-partial", "sign", _script(Mutation("PARTIAL", 2, "drop"))),
    Scenario("reencrypted-rec", "recover-sign", _reencrypted_blob, (1, 3)),
    Scenario("flip-rec-proof", "recover-sign",
             _script(Mutation("REC_PKG", 2, "flip", "proof", 0)), (2, 3)),
    Scenario("bump-rec-proof", "recover-sign", lambda ctx: AdversaryScript(
        [Mutation("REC_PKG", 1, "replace", "proof", value=_bump_trailing_scalar(ctx.profile, "proof"))]),
        (1, 3)),
    Scenario("flip-x3-proof", "recover-sign", _script(Mutation("X3", 3, "flip", "proof", 0)), (1, 3)),
    Scenario("bump-x3-proof", "recover-sign", lambda ctx: AdversaryScript(
        [Mutation("X3", 3, "replace", "proof", value=_bump_trailing_scalar(ctx.profile, "proof"))]),
        (2, 3)),
    Scenario("flip-x3-key", "recover-sign", _script(Mutation("X3", 3, "flip", "X_A", 0)), (2, 3)),
    Scenario("shifted-x3-key", "recover-sign", lambda ctx: AdversaryScript(
        [Mutation("X3", 3, "replace", "X_A", value=_shift_point(ctx.profile, "X_A"))]), (1, 3)),
    Scenario("flip-recovery-partial", "recover-sign",
             _script(Mutation("PARTIAL", 3, "flip", "S", 0)), (1, 3)),
]


def run_scenario(scenario: Scenario, profile: CurveProfile, seed: int = 0,
                 message: bytes = b"scenario") -> CeremonyResult:
    """Run one scenario on fresh honest keys; keygen scenarios tamper with keygen itself."""
    rng = random.Random(seed)
    rk = RecoveryKeypair.generate(profile, rng)
    ctx = ScenarioContext(profile, rk, rng)
    if scenario.kind == "keygen":
        other = run_ceremony("keygen", CeremonyConfig(profile, "other", recovery_key=rk,
                                                      seed=seed + 1))
        ctx.other_ceremony = CeremonyMessage.from_dict(other.transcript["messages"][0])
        cfg = CeremonyConfig(profile, f"scn-{scenario.name}", recovery_key=rk, seed=seed)
        return run_ceremony("keygen", cfg, scenario.build(ctx))
    kg = run_ceremony("keygen", CeremonyConfig(profile, f"kg-{scenario.name}", recovery_key=rk,
                                               seed=seed))
    cfg = CeremonyConfig(profile, f"scn-{scenario.name}", message, scenario.signers,
                         kg.records, rk, seed=seed + 2)
    return run_ceremony(scenario.kind, cfg, scenario.build(ctx))
