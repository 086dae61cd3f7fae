import random

import pytest

from ceremony import PAIRS, dealt_secrets, keygen, sign
from tedsa.eddsa import central_verify
from tedsa.harness import CeremonyConfig, run_ceremony
from tedsa.protocol import (
    AbortMalformedMessage,
    CeremonyMessage,
    PartyRecord,
    derivation_tweak,
    derive,
    pair_tag,
    recovery_join,
    recovery_prepare,
)
from tedsa.recovery_enc import DLOG_SKIPPED_NOTICE
from tedsa.vss import lagrange_weight


def test_keygen_parties_agree(toy):
    rk, res = keygen(toy, 1)
    r1, r2 = res.records[1], res.records[2]
    assert r1.A == r2.A and r1.D == r2.D
    assert r1.X == r2.X
    assert DLOG_SKIPPED_NOTICE in r1.notices


def test_public_key_is_sum_of_dealt_constants(toy):
    for seed in range(5):
        rk, res = keygen(toy, seed)
        s = dealt_secrets(toy, rk, res)
        a = s.a(toy.q)
        assert res.records[1].A == toy.B * ((a[1] + a[2] + a[3]) % toy.q)
        assert res.records[1].X[1].A == toy.B * a[1]
        assert res.records[1].D == toy.B * (s.y[3, 1] * s.y[3, 2] % toy.q)


def test_share_identities(toy):
    q = toy.q
    inv2 = pow(2, -1, q)
    for seed in range(10):
        rk, res = keygen(toy, seed)
        s = dealt_secrets(toy, rk, res)
        y, x = s.y, dict(s.x)
        x[3] = (y[1, 3] + y[2, 3] + 2 * y[3, 2] - y[3, 1]) % q
        a = sum(s.a(q).values()) % q
        assert (2 * x[1] - x[2]) % q == a
        assert (3 * inv2 * x[1] - inv2 * x[3]) % q == a
        assert (3 * x[2] - 2 * x[3]) % q == a


def test_signing_shares_sum_to_the_key(toy):
    rk, res = keygen(toy, 3)
    rec = res.records
    s = dealt_secrets(toy, rk, res)
    x3 = (s.y[1, 3] + s.y[2, 3] + 2 * s.y[3, 2] - s.y[3, 1]) % toy.q
    xs = {1: rec[1].x, 2: rec[2].x, 3: x3}
    for pair in PAIRS:
        total = sum(lagrange_weight(toy.q, pair, i) * xs[i] for i in pair)
        assert toy.B * (total % toy.q) == rec[1].A
    assert (toy.B * ((rec[1].omega((1, 2)) + rec[2].omega((1, 2))) % toy.q)) == rec[1].A


def test_every_pair_signs_under_the_same_key(toy):
    rk, res = keygen(toy, 4)
    for pair in PAIRS:
        out = sign(toy, rk, res.records, pair, b"hello", 10)
        assert out.outcome.ok, out.outcome.abort
        assert out.outcome.public_key == res.records[1].A
        assert central_verify(toy, res.records[1].A, b"hello", out.outcome.signature)


def test_recovered_party_share(toy):
    rk, res = keygen(toy, 5)
    s = dealt_secrets(toy, rk, res)
    out = sign(toy, rk, res.records, (1, 3), b"m", 1)
    rec3 = out.records[3]
    assert rec3.x == (s.y[1, 3] + s.y[2, 3] + 2 * s.y[3, 2] - s.y[3, 1]) % toy.q
    assert rec3.X[3].A == toy.B * s.a(toy.q)[3]
    assert rec3.D == res.records[1].D


def test_signing_is_deterministic_and_pair_tags_differ(toy):
    rk, res = keygen(toy, 6)
    first = {}
    for pair in PAIRS:
        sigs = {sign(toy, rk, res.records, pair, b"det", seed, pinned_r3=4242).outcome.signature
                for seed in range(3)}
        assert len(sigs) == 1
        first[pair] = sigs.pop()
    rec3 = sign(toy, rk, res.records, (1, 3), b"det", 0, pinned_r3=4242).records[3]
    X = dict(res.records[1].X)
    X[3] = rec3.X[3]
    tags = {pair_tag(toy, X, pair) for pair in PAIRS}
    assert len(tags) == 3
    assert len({s.R for s in first.values()}) == 3


def test_different_messages_give_different_nonces(toy):
    rk, res = keygen(toy, 7)
    a = sign(toy, rk, res.records, (1, 2), b"a", 0).outcome.signature
    b = sign(toy, rk, res.records, (1, 2), b"b", 0).outcome.signature
    assert a.R != b.R


def test_derivation_shares(toy):
    rk, res = keygen(toy, 8)
    s = dealt_secrets(toy, rk, res)
    x3 = (s.y[1, 3] + s.y[2, 3] + 2 * s.y[3, 2] - s.y[3, 1]) % toy.q
    for index in (0, 1, 2 ** 64 - 1):
        d1, A1 = derive(res.records[1], index)
        d2, A2 = derive(res.records[2], index)
        h = derivation_tweak(toy, res.records[1].D, index)
        assert A1 == A2 == res.records[1].A + toy.B * h
        assert toy.B * ((d1.omega((1, 2)) + d2.omega((1, 2))) % toy.q) == A1
        lam = {pair: {i: lagrange_weight(toy.q, pair, i) for i in pair} for pair in PAIRS}
        xs = {1: s.x[1], 2: s.x[2], 3: x3}
        for pair in PAIRS:
            total = sum(lam[pair][i] * (xs[i] + h) for i in pair) % toy.q
            assert toy.B * total == A1


def test_derivation_tweak_bounds(toy):
    rk, res = keygen(toy, 8)
    with pytest.raises(ValueError):
        derivation_tweak(toy, res.records[1].D, 2 ** 64)
    with pytest.raises(ValueError):
        derivation_tweak(toy, res.records[1].D, -1)


def test_signing_under_derived_key(toy):
    rk, res = keygen(toy, 9)
    for pair in PAIRS:
        out = sign(toy, rk, res.records, pair, b"derived", 3, derivation=17)
        assert out.outcome.ok, out.outcome.abort
        _, Ai = derive(res.records[1], 17)
        assert out.outcome.public_key == Ai
        assert central_verify(toy, Ai, b"derived", out.outcome.signature)
        assert not central_verify(toy, res.records[1].A, b"derived", out.outcome.signature)


def test_derived_and_base_nonces_differ(toy):
    rk, res = keygen(toy, 9)
    base = sign(toy, rk, res.records, (1, 2), b"m", 0).outcome.signature
    derived = sign(toy, rk, res.records, (1, 2), b"m", 0, derivation=1).outcome.signature
    assert base.R != derived.R


def test_record_json_round_trip(toy):
    rk, res = keygen(toy, 10)
    for rec in res.records.values():
        back = PartyRecord.from_json(rec.to_json())
        assert back.to_dict() == rec.to_dict()
        assert back.omega((1, 2)) == rec.omega((1, 2))


def test_omega_rejects_foreign_pair(toy):
    rk, res = keygen(toy, 10)
    with pytest.raises(ValueError):
        res.records[1].omega((2, 3))


def test_recovery_prepare_needs_both_blobs(toy):
    rk, res = keygen(toy, 11)
    rec = res.records[1].derived(None)
    del rec.rec[2]
    with pytest.raises(ValueError):
        recovery_prepare(rec, "c")


def test_recovery_with_wrong_key_aborts(toy):
    rk, res = keygen(toy, 12)
    pkg = recovery_prepare(res.records[1], "c", random.Random(1))
    from tedsa.protocol import AbortBadProof, AbortBadRecovery

    with pytest.raises((AbortBadProof, AbortBadRecovery)):
        recovery_join(toy, (rk.sk + 1) % toy.q, pkg, random.Random(2))


def test_recovery_rejects_bad_derivation_field(toy):
    rk, res = keygen(toy, 12)
    pkg = recovery_prepare(res.records[1], "c", random.Random(1))
    bad = pkg.with_payload(deriv=b"\x01")
    with pytest.raises(AbortMalformedMessage):
        recovery_join(toy, rk.sk, bad, random.Random(2))


def test_message_json_round_trip(toy):
    msg = CeremonyMessage("cid", "NONCE", 1, 2, {"R": b"\x01\x02", "proof": b""})
    assert CeremonyMessage.from_json(msg.to_json()) == msg
    with pytest.raises(AbortMalformedMessage):
        CeremonyMessage.from_json("{not json")
    with pytest.raises(AbortMalformedMessage):
        CeremonyMessage.from_dict({**msg.to_dict(), "round": "BOGUS"})


def test_keygen_determinism_under_seed(toy):
    rk, a = keygen(toy, 13)
    _, b = keygen(toy, 13)
    assert a.records[1].to_dict() == b.records[1].to_dict()


def test_ed25519_threshold_signatures_pass_a_stock_verifier(ed25519):
    from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PublicKey

    rk, res = keygen(ed25519, 40)
    key = Ed25519PublicKey.from_public_bytes(res.records[1].A.encode())
    for pair in PAIRS:
        out = sign(ed25519, rk, res.records, pair, b"interop", 1)
        assert out.outcome.ok, out.outcome.abort
        key.verify(out.outcome.signature.to_bytes(ed25519), b"interop")


def test_profile_without_nonce_curve_is_refused(ed25519):
    from dataclasses import replace

    from tedsa.harness import ConfigError
    from tedsa.recovery_enc import RecoveryKeypair

    bare = replace(ed25519, purify=None)
    with pytest.raises(ConfigError):
        run_ceremony("keygen", CeremonyConfig(bare, recovery_key=RecoveryKeypair.generate(bare)))
