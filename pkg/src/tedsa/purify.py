"""Deterministic verifiable nonces over E'(F_{q^2}) ~= E1 x E2.

E1(F_q) sits inside E'(F_{q^2}) as the order-q1 subgroup. E2(F_q) maps into
E'(F_{q^2}) through (X, Y) -> (X/delta, Y/(delta*sqrt(delta))), landing on the
order-q2 subgroup. Because q1 != q2 the group E' is cyclic of order q1*q2 and
splits by CRT, which is all phi does.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import NotOnCurve, WPoint
from .hashing import frame
from .profiles import CurveProfile, PurifyParams

MAX_HASH_ATTEMPTS = 256


@dataclass(frozen=True)
class SplitPoint:
    p1: WPoint  # on E1
    p2: WPoint  # on E2


@dataclass(frozen=True)
class PurifySeed:
    r_prime: int
    R_prime: WPoint


def embed_e1(params: PurifyParams, P: WPoint) -> WPoint:
    if P.is_infinity:
        return params.E_prime.infinity
    F2 = params.Fq2
    return WPoint(params.E_prime, F2(P.x), F2(P.y))


def twist_to_prime_curve(params: PurifyParams, P: WPoint) -> WPoint:
    """E2 -> E': (X, Y) -> (X/delta, Y/(delta*sqrt(delta)))."""
    if P.is_infinity:
        return params.E_prime.infinity
    F2, delta = params.Fq2, params.delta
    x = F2(P.x) / delta
    y = F2(P.y) / (F2.sqrt_delta * delta)
    return WPoint(params.E_prime, x, y)


def prime_curve_to_twist(params: PurifyParams, P: WPoint) -> WPoint:
    if P.is_infinity:
        return params.E2.infinity
    F2, delta = params.Fq2, params.delta
    X = P.x * delta
    Y = P.y * F2.sqrt_delta * delta
    if not (X.in_base_field() and Y.in_base_field()):
        raise NotOnCurve("point is not in the image of the twist")
    return params.E2.point(X.c0, Y.c0)


def phi(params: PurifyParams, P: WPoint) -> SplitPoint:
    if not P.is_on_curve():
        raise NotOnCurve(P)
    c1, c2 = params.crt_coefficients
    P1 = P * c1
    P2 = P * c2
    if P1.is_infinity:
        e1 = params.E1.infinity
    else:
        if not (P1.x.in_base_field() and P1.y.in_base_field()):
            raise NotOnCurve("order-q1 component does not descend to F_q")
        e1 = params.E1.point(P1.x.c0, P1.y.c0)
    return SplitPoint(e1, prime_curve_to_twist(params, P2))


def phi_inv(params: PurifyParams, sp: SplitPoint) -> WPoint:
    if not (sp.p1.is_on_curve() and sp.p2.is_on_curve()):
        raise NotOnCurve(sp)
    return embed_e1(params, sp.p1) + twist_to_prime_curve(params, sp.p2)


def hash_to_curve(profile: CurveProfile, curve, tag: str, parts) -> WPoint:
    """Try-and-increment onto a curve over F_q."""
    q = curve.field.modulus
    body = frame(*parts)
    for ctr in range(MAX_HASH_ATTEMPTS):
        digest = profile.hprime(frame(tag.encode(), bytes([ctr]), body))
        x = int.from_bytes(digest, "little") % q
        P = curve.lift_x(x)
        if P is None:
            continue
        sign = profile.hprime(frame((tag + "/sign").encode(), bytes([ctr]), body))[0] & 1
        if P.y.value & 1 != sign:
            P = -P
        return P
    raise RuntimeError("hash to curve exhausted its attempts")


def h1(profile: CurveProfile, parts) -> WPoint:
    return hash_to_curve(profile, profile.purify.E1, "PUR/H1", parts)


def h2(profile: CurveProfile, parts) -> WPoint:
    return hash_to_curve(profile, profile.purify.E2, "PUR/H2", parts)


def h_pur(profile: CurveProfile, parts) -> WPoint:
    """H_Pur(z) = phi^-1(H1(z), H2(z))."""
    return phi_inv(profile.purify, SplitPoint(h1(profile, parts), h2(profile, parts)))


def extract_f(Q: WPoint) -> int:
    """f(Q): 0 at infinity, else the x0 component of x = x0 + x1*sqrt(delta)."""
    if Q.is_infinity:
        return 0
    return Q.x.c0


def derive_nonce(params: PurifyParams, r_prime: int, V_prime: WPoint) -> int:
    return extract_f(V_prime * r_prime)


def new_seed(params: PurifyParams, rng) -> PurifySeed:
    r = rng.randrange(1, params.order)
    return PurifySeed(r, params.B_prime * r)


def seed_from_secret(params: PurifyParams, r_prime: int) -> PurifySeed:
    return PurifySeed(r_prime, params.B_prime * r_prime)


# AuxPoint wire format: x0 || x1 || y0 || y1, each a little-endian F_q value
# of the profile's scalar width; all zeros encodes infinity (b != 0 so (0, 0)
# is never on the curve).


def encode_aux(profile: CurveProfile, P: WPoint) -> bytes:
    if P.is_infinity:
        return bytes(4 * profile.scalar_len)
    return b"".join(profile.scalar_bytes(v) for v in (P.x.c0, P.x.c1, P.y.c0, P.y.c1))


def decode_aux(profile: CurveProfile, data: bytes) -> WPoint:
    params = profile.purify
    n = profile.scalar_len
    if len(data) != 4 * n:
        raise ValueError(f"expected {4 * n}-byte nonce-curve point")
    if data == bytes(4 * n):
        return params.E_prime.infinity
    vals = [int.from_bytes(data[i * n:(i + 1) * n], "little") for i in range(4)]
    if any(v >= params.q for v in vals):
        raise ValueError("non-canonical coordinate")
    F2 = params.Fq2
    return params.E_prime.point(F2(vals[0], vals[1]), F2(vals[2], vals[3]))
