"""Slow, independent reference computations used as test oracles.

Nothing here calls into the library's arithmetic: coordinates are plain ints
and every formula is written out longhand.
"""

from __future__ import annotations


def ed_add(p, a, d, P, Q):
    (x1, y1), (x2, y2) = P, Q
    t = d * x1 * x2 * y1 * y2 % p
    x3 = (x1 * y2 + y1 * x2) * pow(1 + t, -1, p) % p
    y3 = (y1 * y2 - a * x1 * x2) * pow(1 - t, -1, p) % p
    return x3, y3


def ed_repeated_add(p, a, d, P, k):
    acc = (0, 1)
    for _ in range(k):
        acc = ed_add(p, a, d, acc, P)
    return acc


def bits_le(value, width):
    return [(value >> i) & 1 for i in range(width)]


def ed_encode_bitwise(p, b, x, y):
    """(b-1) bits of y little-endian, then the sign bit: 1 iff the bit string
    of x is lexicographically larger than the bit string of -x."""
    enc_x = bits_le(x % p, b - 1)
    enc_negx = bits_le(-x % p, b - 1)
    sign = 1 if enc_x > enc_negx else 0
    bits = bits_le(y, b - 1) + [sign]
    out = bytearray(b // 8)
    for i, bit in enumerate(bits):
        out[i // 8] |= bit << (i % 8)
    return bytes(out)


def le_int(data: bytes) -> int:
    return sum(byte * 256 ** i for i, byte in enumerate(data))


def clamp_extended_oracle(h: int, n: int, c: int) -> int:
    """2^(n+1) + sum_{i=c}^{n} 2^i h_i for an n-bit string h (h_n absent, so 0)."""
    total = 2 ** (n + 1)
    for i in range(c, n + 1):
        h_i = (h >> i) & 1 if i < n else 0
        total += 2 ** i * h_i
    return total


def clamp_standard_oracle(h: int, n: int, c: int) -> int:
    total = 2 ** n
    for i in range(c, n):
        total += 2 ** i * ((h >> i) & 1)
    return total


def poly_eval(coefficients, x, q):
    return sum(c * pow(x, k, q) for k, c in enumerate(coefficients)) % q


# -- short Weierstrass over F_q and F_{q^2}, points as tuples, None = infinity


def w_add(q, a, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % q == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, q) % q
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    return x3, (lam * (x1 - x3) - y1) % q


def w_points(q, a, b):
    roots = {}
    for y in range(q):
        roots.setdefault(y * y % q, []).append(y)
    pts = [None]
    for x in range(q):
        for y in roots.get((x ** 3 + a * x + b) % q, []):
            pts.append((x, y))
    return pts


class F2:
    """c0 + c1*s with s^2 = delta, written independently of the library."""

    def __init__(self, q, delta, c0, c1=0):
        self.q, self.delta = q, delta
        self.c = (c0 % q, c1 % q)

    def _new(self, c0, c1):
        return F2(self.q, self.delta, c0, c1)

    def __add__(self, o):
        return self._new(self.c[0] + o.c[0], self.c[1] + o.c[1])

    def __sub__(self, o):
        return self._new(self.c[0] - o.c[0], self.c[1] - o.c[1])

    def __mul__(self, o):
        a0, a1 = self.c
        b0, b1 = o.c
        return self._new(a0 * b0 + self.delta * a1 * b1, a0 * b1 + a1 * b0)

    def inv(self):
        a0, a1 = self.c
        n = pow((a0 * a0 - self.delta * a1 * a1) % self.q, -1, self.q)
        return self._new(a0 * n, -a1 * n)

    def __eq__(self, o):
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def is_zero(self):
        return self.c == (0, 0)


def w2_add(q, delta, a, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    A = F2(q, delta, a)
    if x1 == x2 and (y1 + y2).is_zero():
        return None
    if P == Q:
        three, two = F2(q, delta, 3), F2(q, delta, 2)
        lam = (three * x1 * x1 + A) * (two * y1).inv()
    else:
        lam = (y2 - y1) * (x2 - x1).inv()
    x3 = lam * lam - x1 - x2
    return x3, lam * (x1 - x3) - y1


def w2_repeated_add(q, delta, a, P, k):
    acc = None
    for _ in range(k):
        acc = w2_add(q, delta, a, acc, P)
    return acc


def w2_points(q, delta, a, b):
    """Every affine point of y^2 = x^3 + a x + b over F_{q^2}, plus infinity."""
    elems = [F2(q, delta, c0, c1) for c0 in range(q) for c1 in range(q)]
    roots = {}
    for y in elems:
        roots.setdefault(y * y, []).append(y)
    A, Bc = F2(q, delta, a), F2(q, delta, b)
    pts = [None]
    for x in elems:
        for y in roots.get(x * x * x + A * x + Bc, []):
            pts.append((x, y))
    return pts


def w2_double_and_add(q, delta, a, P, k):
    acc = None
    for bit in bin(k)[2:] if k else "":
        acc = w2_add(q, delta, a, acc, acc)
        if bit == "1":
            acc = w2_add(q, delta, a, acc, P)
    return acc
