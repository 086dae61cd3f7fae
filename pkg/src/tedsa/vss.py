"""Feldman VSS over the signing curve's prime-order subgroup.

Verification failures are final: callers abort, there is no complaint phase.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import EdPoint
from .profiles import CurveProfile


@dataclass(frozen=True)
class ShareSet:
    degree: int
    shares: dict[int, int]
    commitments: tuple[EdPoint, ...]


def evaluate(coefficients, x: int, q: int) -> int:
    acc = 0
    for coef in reversed(coefficients):
        acc = (acc * x + coef) % q
    return acc


def deal(profile: CurveProfile, coefficients, indices) -> ShareSet:
    """Share the polynomial with the given coefficients (constant term first)."""
    indices = list(indices)
    if len(set(i % profile.q for i in indices)) != len(indices):
        raise ValueError("duplicate share index")
    if any(i % profile.q == 0 for i in indices):
        raise ValueError("share index must be nonzero")
    q = profile.q
    shares = {i: evaluate(coefficients, i, q) for i in indices}
    commitments = tuple(profile.B * (c % q) for c in coefficients)
    return ShareSet(len(coefficients) - 1, shares, commitments)


def share(profile: CurveProfile, secret: int, t: int, indices, rng) -> ShareSet:
    coefficients = [secret % profile.q] + [rng.randrange(profile.q) for _ in range(t)]
    return deal(profile, coefficients, indices)


def expected_share_point(profile: CurveProfile, j: int, commitments) -> EdPoint:
    """sum_k j^k * C_k."""
    acc = profile.curve.identity
    power = 1
    for C in commitments:
        acc = acc + C * power
        power = power * j % profile.q
    return acc


def verify_share(profile: CurveProfile, j: int, y: int, commitments) -> bool:
    return profile.B * (y % profile.q) == expected_share_point(profile, j, commitments)


def lagrange_weight(q: int, signers, i: int) -> int:
    """lambda_i = prod_{j in S, j != i} j / (j - i) mod q."""
    signers = list(signers)
    if i not in signers:
        raise ValueError(f"{i} is not in the signer set")
    if len(set(s % q for s in signers)) != len(signers) or any(s % q == 0 for s in signers):
        raise ValueError("signer indices must be distinct and nonzero")
    num, den = 1, 1
    for j in signers:
        if j == i:
            continue
        num = num * j % q
        den = den * (j - i) % q
    return num * pow(den, -1, q) % q
