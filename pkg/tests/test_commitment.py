import hashlib

from tedsa.commitment import (
    NONCE_LEN,
    commit,
    commit_with_nonce,
    decode_tuple,
    encode_tuple,
    open_commitment,
)


def test_open_returns_committed_value(toy, rng):
    for _ in range(1000):
        value = rng.randbytes(rng.randrange(0, 64))
        pair = commit(toy, value, rng)
        assert open_commitment(toy, pair.C, pair.D) == value


def test_commitments_to_same_value_differ(ed25519, rng):
    a, b = commit(ed25519, b"same", rng), commit(ed25519, b"same", rng)
    assert a.C != b.C


def test_commitment_matches_reference_hash(ed25519):
    nonce = bytes(range(NONCE_LEN))
    value = b"value"
    framed = len(value).to_bytes(8, "big") + value
    data = b""
    for part in (b"COM", nonce, framed):
        data += len(part).to_bytes(8, "big") + part
    assert commit_with_nonce(ed25519, value, nonce).C == hashlib.sha512(data).digest()


def test_flipped_commitment_bit_fails_to_open(toy, rng):
    pair = commit(toy, b"v", rng)
    for i in range(len(pair.C)):
        bad = bytearray(pair.C)
        bad[i] ^= 0x80
        assert open_commitment(toy, bytes(bad), pair.D) is None


def test_other_value_with_same_nonce_fails_to_open(toy, rng):
    pair = commit(toy, b"original", rng)
    nonce = pair.D[:NONCE_LEN]
    forged = nonce + len(b"forged").to_bytes(8, "big") + b"forged"
    assert open_commitment(toy, pair.C, forged) is None


def test_malformed_decommitments(toy, rng):
    pair = commit(toy, b"v", rng)
    assert open_commitment(toy, pair.C, b"") is None
    assert open_commitment(toy, pair.C, pair.D + b"\x00") is None
    assert open_commitment(toy, pair.C, pair.D[:-1]) is None


def test_binding_smoke_search(toy, rng):
    # one commitment, 10^4 random alternative openings: none opens it
    pair = commit(toy, b"target", rng)
    for _ in range(10_000):
        alt = rng.randbytes(NONCE_LEN) + encode_tuple(rng.randbytes(6))
        assert open_commitment(toy, pair.C, alt) is None


def test_tuple_round_trip(rng):
    items = [rng.randbytes(rng.randrange(0, 9)) for _ in range(4)]
    assert decode_tuple(encode_tuple(*items), 4) == items


def test_tuple_rejects_trailing_bytes():
    import pytest

    with pytest.raises(ValueError):
        decode_tuple(encode_tuple(b"a") + b"x", 1)
    with pytest.raises(ValueError):
        decode_tuple(encode_tuple(b"a"), 2)
