import pytest

from tedsa.recovery_enc import (
    DLOG_SKIPPED_NOTICE,
    RecBlob,
    RecoveryKeypair,
    ciphertext_len,
    dec,
    enc,
    supports_dlog_verification,
    verifiable_enc_hook,
)
from tedsa.zkp import UnsupportedBackend


def test_round_trip_every_toy_scalar(toy, rng):
    kp = RecoveryKeypair.generate(toy, rng)
    for m in range(toy.q):
        assert dec(toy, kp.sk, enc(toy, kp.pk, m, rng)) == m


def test_round_trip_ed25519(ed25519, rng):
    kp = RecoveryKeypair.generate(ed25519, rng)
    for _ in range(1000):
        m = rng.randrange(ed25519.q)
        assert dec(ed25519, kp.sk, enc(ed25519, kp.pk, m, rng)) == m


def test_fixed_length_and_randomized(toy, ed25519, rng):
    for profile in (toy, ed25519):
        kp = RecoveryKeypair.generate(profile, rng)
        a, b = enc(profile, kp.pk, 5, rng), enc(profile, kp.pk, 5, rng)
        assert len(a) == len(b) == ciphertext_len(profile)
        assert a != b


def test_wrong_key_does_not_recover_plaintext(toy, rng):
    kp, other = RecoveryKeypair.generate(toy, rng), RecoveryKeypair.generate(toy, rng)
    misses = 0
    for m in range(200):
        try:
            misses += dec(toy, other.sk, enc(toy, kp.pk, m, rng)) != m
        except ValueError:
            misses += 1
    assert misses == 200


def test_truncated_and_cross_profile_ciphertexts_rejected(toy, ed25519, rng):
    kp = RecoveryKeypair.generate(ed25519, rng)
    ct = enc(ed25519, kp.pk, 1, rng)
    with pytest.raises(ValueError):
        dec(ed25519, kp.sk, ct[:-1])
    toy_kp = RecoveryKeypair.generate(toy, rng)
    with pytest.raises(ValueError):
        dec(toy, toy_kp.sk, ct)


def test_unreduced_plaintext_rejected(toy, rng):
    kp = RecoveryKeypair.generate(toy, rng)
    with pytest.raises(ValueError):
        enc(toy, kp.pk, toy.q, rng)


def test_rec_blob_round_trip(toy, rng):
    kp = RecoveryKeypair.generate(toy, rng)
    blob = RecBlob.seal(toy, kp.pk, 11, 22, rng)
    assert RecBlob.from_bytes(blob.to_bytes()) == blob
    assert blob.open(toy, kp.sk) == (11, 22)


def test_flipped_blob_bit_changes_the_share(toy, rng):
    kp = RecoveryKeypair.generate(toy, rng)
    blob = RecBlob.seal(toy, kp.pk, 11, 22, rng)
    body = bytearray(blob.share_for_p3)
    body[-2] ^= 1
    try:
        got = dec(toy, kp.sk, bytes(body))
    except ValueError:
        got = None
    assert got != 11


def test_dlog_verification_hook_is_unsupported(toy, rng):
    kp = RecoveryKeypair.generate(toy, rng)
    assert not supports_dlog_verification()
    with pytest.raises(UnsupportedBackend):
        verifiable_enc_hook(toy, enc(toy, kp.pk, 3, rng), toy.B * 3)
    assert DLOG_SKIPPED_NOTICE == "dlog-verification: skipped"
