import hashlib
import random

import pytest
from scipy.stats import chi2

from oracles import clamp_extended_oracle, clamp_standard_oracle, le_int
from tedsa.hashing import (
    EXTENDED,
    STANDARD,
    chi_square_uniform,
    clamp_integer,
    counter_bytes,
    frame,
    hash_to_scalar,
    prng_uniformity_check,
    secret_scalar,
)

# 0.999 quantile of chi-square with 15 degrees of freedom
CHI2_15_999 = 37.697


def test_chi_square_table_value():
    assert chi2.ppf(0.999, 15) == pytest.approx(CHI2_15_999, abs=1e-3)


def test_hash_to_scalar_is_deterministic(toy, ed25519):
    for profile in (toy, ed25519):
        assert hash_to_scalar(profile, "T", b"a", b"b") == hash_to_scalar(profile, "T", b"a", b"b")


def test_framing_separates_split_points(toy, ed25519):
    for profile in (toy, ed25519):
        assert hash_to_scalar(profile, "T", b"ab", b"c") != hash_to_scalar(profile, "T", b"a", b"bc")


def test_domain_tags_separate(ed25519):
    assert hash_to_scalar(ed25519, "A", b"x") != hash_to_scalar(ed25519, "B", b"x")


def test_hash_to_scalar_matches_reference_reduction(ed25519, toy):
    for profile in (ed25519, toy):
        parts = (b"threshold", b"", b"\x00" * 40)
        data = b""
        for part in (b"VEC",) + parts:
            data += len(part).to_bytes(8, "big") + part
        digest = hashlib.sha512(data).digest()[: profile.b // 4]
        assert hash_to_scalar(profile, "VEC", *parts) == le_int(digest) % profile.q


def test_hash_to_scalar_below_q(toy, rng):
    for i in range(2000):
        assert 0 <= hash_to_scalar(toy, "T", counter_bytes(i)) < toy.q


def test_framing_is_injective_on_random_part_lists(ed25519):
    r = random.Random(5)
    seen = {}
    for _ in range(1000):
        parts = tuple(r.randbytes(r.randrange(0, 6)) for _ in range(r.randrange(1, 5)))
        key = frame(*parts)
        if key in seen:
            assert seen[key] == parts
        seen[key] = parts
        concat = b"".join(parts)
        # a different split of the same bytes never hashes the same
        alt = (concat,) if len(parts) > 1 else (concat[:1], concat[1:])
        if alt != parts:
            assert hash_to_scalar(ed25519, "T", *parts) != hash_to_scalar(ed25519, "T", *alt)


# -- secret scalar ---------------------------------------------------------------


def test_clamp_of_zero_string_is_top_bit_only():
    assert clamp_integer(0, 254, 3, EXTENDED) == 2 ** 255
    assert clamp_integer(0, 254, 3, STANDARD) == 2 ** 254


def test_clamp_with_only_bit_c():
    n, c = 254, 3
    assert clamp_integer(1 << c, n, c, EXTENDED) == 2 ** (n + 1) + 2 ** c


def test_clamp_small_parameters_match_direct_evaluation():
    n, c = 6, 2
    for h in range(2 ** 8):
        assert clamp_integer(h, n, c, EXTENDED) == clamp_extended_oracle(h & (2 ** n - 1), n, c)
        assert clamp_integer(h, n, c, STANDARD) == clamp_standard_oracle(h & (2 ** n - 1), n, c)
    assert clamp_integer(0b111111, n, c, EXTENDED) == 2 ** 7 + 2 ** 2 + 2 ** 3 + 2 ** 4 + 2 ** 5


def test_clamped_integer_bit_structure(rng):
    for profile_n, c in ((254, 3), (17, 3), (6, 2)):
        for _ in range(300):
            h = rng.getrandbits(512)
            v = clamp_integer(h, profile_n, c, EXTENDED)
            assert v & ((1 << c) - 1) == 0
            assert v >> (profile_n + 1) == 1


def test_secret_scalar_matches_reference(ed25519, toy, rng):
    for profile in (ed25519, toy):
        for _ in range(50):
            k = rng.randbytes(profile.scalar_len)
            h = le_int(hashlib.sha512(k).digest()[: profile.b // 4]) & (2 ** profile.n - 1)
            assert secret_scalar(profile, k, EXTENDED) == clamp_extended_oracle(h, profile.n, profile.c) % profile.q
            assert secret_scalar(profile, k, STANDARD) == clamp_standard_oracle(h, profile.n, profile.c) % profile.q


def test_secret_scalar_rejects_wrong_length(ed25519):
    with pytest.raises(ValueError):
        secret_scalar(ed25519, b"short")


def test_unknown_clamp_mode():
    with pytest.raises(ValueError):
        clamp_integer(0, 10, 2, "other")


# -- uniformity ----------------------------------------------------------------


def test_uniform_sampler_passes(toy):
    r = random.Random(11)
    stat = prng_uniformity_check(lambda i: r.randrange(toy.q), 10_000, toy.q)
    assert stat < CHI2_15_999


def test_constant_sampler_fails(toy):
    stat = prng_uniformity_check(lambda i: 7, 10_000, toy.q)
    assert stat > CHI2_15_999


def test_hash_to_scalar_on_counters_passes(toy):
    stat = prng_uniformity_check(lambda i: hash_to_scalar(toy, "PRNG", counter_bytes(i)), 10_000, toy.q)
    assert stat < CHI2_15_999


def test_uniformity_check_needs_enough_trials(toy):
    with pytest.raises(ValueError):
        prng_uniformity_check(lambda i: i, 100, toy.q)


def test_chi_square_exact_on_balanced_sample():
    assert chi_square_uniform(range(1600), 1600, 16) == 0.0
