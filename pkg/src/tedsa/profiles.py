"""Curve profiles: signing-curve constants plus nonce-curve (Purify) parameters.

Two profiles ship with the package:

``ed25519``
    The standard Edwards25519 parameters. The nonce curves over F_q were found
    offline with SEA point counting (see ``scripts/find_purify_params.py``);
    the library only checks their consistency.
``toy``
    A tiny curve (q < 2^16) where everything can be brute forced. Its nonce
    curves are found by :func:`search_purify_params` via exhaustive point
    counting.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .algebra import (
    EdwardsCurve,
    Fq2Field,
    PrimeField,
    WeierstrassCurve,
    WPoint,
    is_square_mod,
)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PurifyParams:
    """Nonce-curve parameters over F_q.

    E1: y^2 = x^3 + a*x + b over F_q, prime order q1.
    E2: y^2 = x^3 + a*delta^2*x + b*delta^3 over F_q, prime order q2.
    E':  y^2 = x^3 + a*x + b over F_{q^2}, cyclic of order q1*q2.
    ``base`` is a generator of E' given as (x0, x1, y0, y1).
    """

    q: int
    delta: int
    a: int
    b: int
    q1: int
    q2: int
    base: tuple[int, int, int, int]

    def __post_init__(self):
        if self.q1 == self.q2:
            raise ValueError("q1 and q2 must differ")
        if self.q1 + self.q2 != 2 * self.q + 2:
            raise ValueError("q1, q2 are not the orders of a curve and its twist")
        if is_square_mod(self.delta, self.q):
            raise ValueError("delta must be a non-residue")

    @cached_property
    def Fq(self) -> PrimeField:
        return PrimeField(self.q)

    @cached_property
    def Fq2(self) -> Fq2Field:
        return Fq2Field(self.q, self.delta)

    @cached_property
    def E1(self) -> WeierstrassCurve:
        return WeierstrassCurve(self.a, self.b, self.Fq)

    @cached_property
    def E2(self) -> WeierstrassCurve:
        d = self.delta
        return WeierstrassCurve(self.a * d * d, self.b * d * d * d, self.Fq)

    @cached_property
    def E_prime(self) -> WeierstrassCurve:
        return WeierstrassCurve(self.Fq2(self.a), self.Fq2(self.b), self.Fq2)

    @property
    def order(self) -> int:
        """q' = q1*q2, the order of the generator B'."""
        return self.q1 * self.q2

    @cached_property
    def B_prime(self) -> WPoint:
        x0, x1, y0, y1 = self.base
        return self.E_prime.point(self.Fq2(x0, x1), self.Fq2(y0, y1))

    @cached_property
    def crt_coefficients(self) -> tuple[int, int]:
        """(c1, c2) with c1 = 1 mod q1, 0 mod q2 and c2 = 0 mod q1, 1 mod q2."""
        q1, q2 = self.q1, self.q2
        c1 = q2 * pow(q2, -1, q1) % (q1 * q2)
        c2 = q1 * pow(q1, -1, q2) % (q1 * q2)
        return c1, c2

    def to_dict(self) -> dict:
        return {"q": self.q, "delta": self.delta, "a": self.a, "b": self.b,
                "q1": self.q1, "q2": self.q2, "base": list(self.base)}

    @classmethod
    def from_dict(cls, d: dict) -> "PurifyParams":
        return cls(d["q"], d["delta"], d["a"], d["b"], d["q1"], d["q2"], tuple(d["base"]))


@dataclass(frozen=True)
class CurveProfile:
    name: str
    p: int
    b: int
    c: int
    n: int
    a: int
    d: int
    base: tuple[int, int]
    q: int
    purify: Optional[PurifyParams] = field(default=None, compare=False)

    def __post_init__(self):
        if not 2 ** (self.b - 1) > self.p:
            raise ValueError("need 2^(b-1) > p")
        if self.c not in (2, 3):
            raise ValueError("c must be 2 or 3")
        if not self.c <= self.n <= self.b:
            raise ValueError("need c <= n <= b")
        if self.purify is not None and self.purify.q != self.q:
            raise ValueError("nonce curves must be defined over F_q")

    @cached_property
    def curve(self) -> EdwardsCurve:
        return EdwardsCurve(self.p, self.a, self.d, self.q, 2 ** self.c, self.b, self.base)

    @property
    def B(self):
        return self.curve.B

    @property
    def scalar_len(self) -> int:
        """Bytes in a b-bit little-endian scalar / point encoding."""
        return self.b // 8

    @property
    def digest_len(self) -> int:
        """Bytes in the 2b-bit output of the base hash."""
        return self.b // 4

    def hprime(self, data: bytes) -> bytes:
        """The base hash H' with a 2b-bit output (SHA-512, truncated on small profiles)."""
        return hashlib.sha512(data).digest()[: self.digest_len]

    def scalar_bytes(self, k: int) -> bytes:
        return (k % self.q).to_bytes(self.scalar_len, "little")

    def scalar_from_bytes(self, data: bytes) -> int:
        if len(data) != self.scalar_len:
            raise ValueError(f"expected {self.scalar_len}-byte scalar")
        k = int.from_bytes(data, "little")
        if k >= self.q:
            raise ValueError("non-canonical scalar")
        return k

    def with_purify(self, purify: Optional[PurifyParams]) -> "CurveProfile":
        return CurveProfile(self.name, self.p, self.b, self.c, self.n, self.a, self.d,
                            self.base, self.q, purify)

    def to_dict(self) -> dict:
        return {
            "name": self.name, "p": self.p, "b": self.b, "c": self.c, "n": self.n,
            "a": self.a, "d": self.d, "base": list(self.base), "q": self.q,
            "purify": self.purify.to_dict() if self.purify else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurveProfile":
        purify = PurifyParams.from_dict(d["purify"]) if d.get("purify") else None
        return cls(d["name"], d["p"], d["b"], d["c"], d["n"], d["a"], d["d"],
                   tuple(d["base"]), d["q"], purify)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


# --------------------------------------------------------------------------
# Exhaustive counting helpers (small q only)


def _square_table(q: int) -> bytearray:
    table = bytearray(q)
    for x in range(1, (q + 1) // 2):
        table[x * x % q] = 1
    return table


def count_points_fq(q: int, a: int, b: int, squares: Optional[bytearray] = None) -> int:
    """|E(F_q)| for y^2 = x^3 + ax + b by enumerating every x."""
    squares = squares if squares is not None else _square_table(q)
    total = 1
    for x in range(q):
        r = (x * x * x + a * x + b) % q
        total += 1 if r == 0 else 2 * squares[r]
    return total


def count_points_edwards(p: int, a: int, d: int) -> int:
    """|E(F_p)| for a*x^2 + y^2 = 1 + d*x^2*y^2 by enumerating every y."""
    squares = _square_table(p)
    total = 0
    for y in range(p):
        y2 = y * y % p
        num, den = (y2 - 1) % p, (d * y2 - a) % p
        if den == 0:
            continue
        # num/den is a square iff num*den is
        w = num * den % p
        total += 1 if w == 0 else 2 * squares[w]
    return total


def search_purify_params(q: int, max_a: int = 200, max_b: int = 200) -> PurifyParams:
    """Find nonce curves over F_q by exhaustive point counting.

    Returns the first (a, b), in lexicographic order, such that the curve has
    prime order q1 and its twist prime order q2 != q1, with a generator of the
    order q1*q2 group over F_{q^2}.
    """
    squares = _square_table(q)
    delta = next(x for x in range(2, q) if not squares[x])
    for a in range(1, max_a):
        for b in range(1, max_b):
            if (4 * a ** 3 + 27 * b * b) % q == 0:
                continue
            q1 = count_points_fq(q, a, b, squares)
            q2 = 2 * q + 2 - q1
            if q1 == q2 or q1 == q or not (is_probable_prime(q1) and is_probable_prime(q2)):
                continue
            base = _purify_generator(q, delta, a, b, q1, q2)
            return PurifyParams(q, delta, a, b, q1, q2, base)
    raise ValueError(f"no suitable nonce curves over F_{q} in the search window")


def _purify_generator(q, delta, a, b, q1, q2) -> tuple[int, int, int, int]:
    # phi^-1 of (first E1 point, first E2 point) generates the cyclic group
    from .purify import embed_e1, twist_to_prime_curve

    stub = PurifyParams(q, delta, a, b, q1, q2, (0, 0, 0, 0))
    p1 = next(P for x in range(q) if (P := stub.E1.lift_x(x)) is not None)
    p2 = next(P for x in range(q) if (P := stub.E2.lift_x(x)) is not None)
    g = embed_e1(stub, p1) + twist_to_prime_curve(stub, p2)
    return (g.x.c0, g.x.c1, g.y.c0, g.y.c1)


# --------------------------------------------------------------------------
# Shipped profiles

_ED25519_P = 2 ** 255 - 19
_ED25519_Q = 2 ** 252 + 27742317777372353535851937790883648493

# SEA search over a = 1.., b = 1..999 with delta = 2; the first hit is below.
# Orders confirmed with PARI's ellcard; B' has order q1*q2.
ED25519_PURIFY = PurifyParams(
    q=_ED25519_Q, delta=2, a=26, b=918,
    q1=7237005577332262213973186563042994240868167550569112629598949822938129658277,
    q2=7237005577332262213973186563042994240846065168190702582404952053632778843703,
    base=(
        5427754182999196660479889922282245680642837269534930704501463203714090688363,
        6623448517413103659206140049486694513532553783935860350934827591300663470677,
        4281675488488042298321340151117583877820496115510585069953695812314194656058,
        5276791607414673212782055201179484596155667567009193484075325376597314370606,
    ),
)

ED25519 = CurveProfile(
    name="ed25519",
    p=_ED25519_P,
    b=256,
    c=3,
    n=254,
    a=-1 % _ED25519_P,
    d=-121665 * pow(121666, -1, _ED25519_P) % _ED25519_P,
    base=(
        15112221349535400772501151409588531511454012693041857206046113283949847762202,
        46316835694926478169428394003475163141307993866256225615783033603165251855960,
    ),
    q=_ED25519_Q,
    purify=ED25519_PURIFY,
)

# Output of search_purify_params(65393).
TOY_PURIFY = PurifyParams(
    q=65393, delta=3, a=1, b=55, q1=65677, q2=65111,
    base=(111, 23676, 12659, 55039),
)

TOY = CurveProfile(
    name="toy",
    p=524221,
    b=24,
    c=3,
    n=17,
    a=524220,  # -1
    d=43,
    base=(129188, 299625),
    q=65393,
    purify=TOY_PURIFY,
)

# Nonce-curve set small enough that |E'| <= 2^14, for exhaustive checks.
# Output of search_purify_params(113).
TINY_PURIFY = PurifyParams(
    q=113, delta=3, a=1, b=20, q1=101, q2=127,
    base=(41, 60, 70, 91),
)

PROFILES = {"ed25519": ED25519, "toy": TOY}


def get_profile(name: str) -> CurveProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}") from None
