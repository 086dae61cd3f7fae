"""Field and curve arithmetic.

Three kinds of groups are used:

* a twisted Edwards curve ``a*x^2 + y^2 = 1 + d*x^2*y^2`` over F_p (signing curve),
* short Weierstrass curves ``y^2 = x^3 + a*x + b`` over F_q (the nonce curves and
  their quadratic twist),
* the same Weierstrass equation over F_{q^2} = F_q(sqrt(delta)).

Nothing here is constant time.
"""

from __future__ import annotations

from typing import Optional


class NotASquare(ValueError):
    pass


class NotOnCurve(ValueError):
    pass


class NonCanonical(ValueError):
    pass


def is_square_mod(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def sqrt_mod(a: int, p: int) -> int:
    """Return some square root of ``a`` modulo the odd prime ``p``.

    Uses the direct exponentiation for p = 3 (mod 4) and p = 5 (mod 8),
    Tonelli-Shanks otherwise. Raises NotASquare when no root exists.
    """
    a %= p
    if a == 0:
        return 0
    if not is_square_mod(a, p):
        raise NotASquare(a)
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    if p % 8 == 5:
        x = pow(a, (p + 3) // 8, p)
        if x * x % p != a:
            x = x * pow(2, (p - 1) // 4, p) % p
        return x
    # Tonelli-Shanks
    s, odd = 0, p - 1
    while odd % 2 == 0:
        odd //= 2
        s += 1
    z = 2
    while is_square_mod(z, p):
        z += 1
    m, c, t, r = s, pow(z, odd, p), pow(a, odd, p), pow(a, (odd + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# --------------------------------------------------------------------------
# Prime fields


class PrimeField:
    def __init__(self, modulus: int):
        self.modulus = modulus

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Fp", self.modulus))

    def __repr__(self):
        return f"PrimeField({self.modulus})"

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)


class FieldElement:
    """Canonical residue modulo a prime."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.modulus
        self.field = field

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.modulus != self.field.modulus:
                raise ValueError("mixing elements of different fields")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(o - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(pow(self.value, -1, self.field.modulus), self.field)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = FieldElement(other, self.field)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.field.modulus), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field.modulus == other.field.modulus
        if isinstance(other, int):
            return self.value == other % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.modulus))

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.field.modulus})"

    def is_zero(self) -> bool:
        return self.value == 0

    def is_square(self) -> bool:
        return is_square_mod(self.value, self.field.modulus)

    def sqrt(self) -> "FieldElement":
        return FieldElement(sqrt_mod(self.value, self.field.modulus), self.field)


# --------------------------------------------------------------------------
# Quadratic extension F_q(sqrt(delta))


class Fq2Field:
    """F_q[t]/(t^2 - delta) for a quadratic non-residue ``delta``."""

    def __init__(self, q: int, delta: int):
        if is_square_mod(delta, q):
            raise ValueError("delta must be a quadratic non-residue")
        self.q = q
        self.delta = delta % q

    def __call__(self, c0, c1=0) -> "Fq2":
        if isinstance(c0, FieldElement):
            c0 = c0.value
        if isinstance(c1, FieldElement):
            c1 = c1.value
        return Fq2(c0, c1, self)

    def __eq__(self, other):
        return isinstance(other, Fq2Field) and (self.q, self.delta) == (other.q, other.delta)

    def __hash__(self):
        return hash(("Fq2", self.q, self.delta))

    @property
    def zero(self) -> "Fq2":
        return Fq2(0, 0, self)

    @property
    def one(self) -> "Fq2":
        return Fq2(1, 0, self)

    @property
    def sqrt_delta(self) -> "Fq2":
        return Fq2(0, 1, self)

    @property
    def order(self) -> int:
        return self.q * self.q


class Fq2:
    """c0 + c1*sqrt(delta)."""

    __slots__ = ("c0", "c1", "field")

    def __init__(self, c0: int, c1: int, field: Fq2Field):
        q = field.q
        self.c0 = c0 % q
        self.c1 = c1 % q
        self.field = field

    def _coerce(self, other):
        if isinstance(other, Fq2):
            return other.c0, other.c1
        if isinstance(other, int):
            return other, 0
        if isinstance(other, FieldElement):
            return other.value, 0
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fq2(self.c0 + o[0], self.c1 + o[1], self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fq2(self.c0 - o[0], self.c1 - o[1], self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fq2(o[0] - self.c0, o[1] - self.c1, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a0, a1 = self.c0, self.c1
        b0, b1 = o
        return Fq2(a0 * b0 + self.field.delta * a1 * b1, a0 * b1 + a1 * b0, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Fq2(-self.c0, -self.c1, self.field)

    def conjugate(self) -> "Fq2":
        return Fq2(self.c0, -self.c1, self.field)

    def norm(self) -> int:
        q = self.field.q
        return (self.c0 * self.c0 - self.field.delta * self.c1 * self.c1) % q

    def inverse(self) -> "Fq2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_q^2")
        inv = pow(n, -1, self.field.q)
        return Fq2(self.c0 * inv, -self.c1 * inv, self.field)

    def __truediv__(self, other):
        if not isinstance(other, Fq2):
            other = self.field(*self._coerce(other))
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        q = self.field.q
        return self.c0 == o[0] % q and self.c1 == o[1] % q

    def __hash__(self):
        return hash((self.c0, self.c1, self.field.q))

    def __repr__(self):
        return f"Fq2({self.c0} + {self.c1}*sqrt({self.field.delta}))"

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def in_base_field(self) -> bool:
        return self.c1 == 0

    def is_square(self) -> bool:
        # x is a square in F_{q^2} iff its norm is a square in F_q
        return self.is_zero() or is_square_mod(self.norm(), self.field.q)


# --------------------------------------------------------------------------
# Short Weierstrass curves, generic over the coordinate field


class WeierstrassCurve:
    """y^2 = x^3 + a*x + b over ``field`` (a PrimeField or an Fq2Field)."""

    def __init__(self, a, b, field):
        self.field = field
        self.a = field(a) if isinstance(a, int) else a
        self.b = field(b) if isinstance(b, int) else b
        if (4 * self.a ** 3 + 27 * self.b ** 2).is_zero():
            raise ValueError("singular curve")

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve) and self.field == other.field
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        return f"WeierstrassCurve(a={self.a!r}, b={self.b!r})"

    @property
    def infinity(self) -> "WPoint":
        return WPoint(self, None, None)

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def contains(self, x, y) -> bool:
        return y * y == self.rhs(x)

    def point(self, x, y) -> "WPoint":
        x = self.field(x) if isinstance(x, int) else x
        y = self.field(y) if isinstance(y, int) else y
        if not self.contains(x, y):
            raise NotOnCurve((x, y))
        return WPoint(self, x, y)

    def lift_x(self, x) -> Optional["WPoint"]:
        """A point with abscissa ``x`` (base-field curves only), or None."""
        x = self.field(x) if isinstance(x, int) else x
        r = self.rhs(x)
        if not r.is_square():
            return None
        return WPoint(self, x, r.sqrt())


class WPoint:
    """Affine point on a Weierstrass curve; ``x is None`` encodes infinity."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def is_on_curve(self) -> bool:
        return self.is_infinity or self.curve.contains(self.x, self.y)

    def __eq__(self, other):
        if not isinstance(other, WPoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(None) if self.is_infinity else hash((self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "WPoint(infinity)"
        return f"WPoint({self.x!r}, {self.y!r})"

    def __neg__(self):
        if self.is_infinity:
            return self
        return WPoint(self.curve, self.x, -self.y)

    def __add__(self, other: "WPoint") -> "WPoint":
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if (self.y + other.y).is_zero():
                return self.curve.infinity
            lam = (3 * self.x * self.x + self.curve.a) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return WPoint(self.curve, x3, y3)

    def __sub__(self, other: "WPoint") -> "WPoint":
        return self + (-other)

    def __mul__(self, k: int) -> "WPoint":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-self) * (-k)
        result, addend = self.curve.infinity, self
        while k:
            if k & 1:
                result = result + addend
            addend = addend + addend
            k >>= 1
        return result

    __rmul__ = __mul__


# --------------------------------------------------------------------------
# Twisted Edwards curve


class EdwardsCurve:
    """a*x^2 + y^2 = 1 + d*x^2*y^2 over F_p, with a prime-order subgroup of order q."""

    def __init__(self, p: int, a: int, d: int, q: int, cofactor: int, b: int,
                 base: tuple[int, int]):
        self.p = p
        self.a = a % p
        self.d = d % p
        self.q = q
        self.cofactor = cofactor
        self.b = b
        if b % 8:
            raise ValueError("encoding width must be a whole number of bytes")
        self.B = EdPoint(self, *base)
        if not self.B.is_on_curve():
            raise NotOnCurve("base point")

    @property
    def encoded_len(self) -> int:
        return self.b // 8

    @property
    def identity(self) -> "EdPoint":
        return EdPoint(self, 0, 1)

    def __eq__(self, other):
        return isinstance(other, EdwardsCurve) and (self.p, self.a, self.d) == (other.p, other.a, other.d)

    def __hash__(self):
        return hash((self.p, self.a, self.d))

    def point(self, x: int, y: int) -> "EdPoint":
        pt = EdPoint(self, x, y)
        if not pt.is_on_curve():
            raise NotOnCurve((x, y))
        return pt

    def recover_x(self, y: int, sign: int) -> int:
        p = self.p
        num = (y * y - 1) % p
        den = (self.d * y * y - self.a) % p
        x2 = num * pow(den, -1, p) % p
        try:
            x = sqrt_mod(x2, p)
        except NotASquare:
            raise NotOnCurve(f"no x for y={y}") from None
        if x == 0 and sign:
            raise NonCanonical("x = 0 with sign bit set")
        if x & 1 != sign:
            x = p - x
        return x

    def decode(self, data: bytes) -> "EdPoint":
        if len(data) != self.encoded_len:
            raise ValueError(f"expected {self.encoded_len} bytes, got {len(data)}")
        v = int.from_bytes(data, "little")
        sign = v >> (self.b - 1)
        y = v & ((1 << (self.b - 1)) - 1)
        if y >= self.p:
            raise NonCanonical("y >= p")
        return EdPoint(self, self.recover_x(y, sign), y)

    # extended coordinates (X, Y, Z, T) with x = X/Z, y = Y/Z, xy = T/Z

    def _ext_add(self, P, Q):
        p = self.p
        X1, Y1, Z1, T1 = P
        X2, Y2, Z2, T2 = Q
        A = X1 * X2 % p
        B = Y1 * Y2 % p
        C = self.d * T1 % p * T2 % p
        D = Z1 * Z2 % p
        E = ((X1 + Y1) * (X2 + Y2) - A - B) % p
        F = (D - C) % p
        G = (D + C) % p
        H = (B - self.a * A) % p
        return (E * F % p, G * H % p, F * G % p, E * H % p)

    def _mul(self, k: int, P: "EdPoint") -> "EdPoint":
        p = self.p
        acc = (0, 1, 1, 0)
        addend = (P.x, P.y, 1, P.x * P.y % p)
        while k:
            if k & 1:
                acc = self._ext_add(acc, addend)
            addend = self._ext_add(addend, addend)
            k >>= 1
        X, Y, Z, _ = acc
        zi = pow(Z, -1, p)
        return EdPoint(self, X * zi % p, Y * zi % p)


class EdPoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: EdwardsCurve, x: int, y: int):
        self.curve = curve
        self.x = x % curve.p
        self.y = y % curve.p

    def is_on_curve(self) -> bool:
        c, x2, y2 = self.curve, self.x * self.x, self.y * self.y
        return (c.a * x2 + y2 - 1 - c.d * x2 * y2) % c.p == 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.y == 1

    def in_subgroup(self) -> bool:
        return (self * self.curve.q).is_identity()

    def __eq__(self, other):
        if not isinstance(other, EdPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y and self.curve == other.curve

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"EdPoint({self.x}, {self.y})"

    def __add__(self, other: "EdPoint") -> "EdPoint":
        c, p = self.curve, self.curve.p
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        t = c.d * x1 * x2 * y1 * y2 % p
        den_x = (1 + t) % p
        den_y = (1 - t) % p
        inv = pow(den_x * den_y % p, -1, p)
        x3 = (x1 * y2 + y1 * x2) * den_y % p * inv
        y3 = (y1 * y2 - c.a * x1 * x2) * den_x % p * inv
        return EdPoint(c, x3, y3)

    def __neg__(self):
        return EdPoint(self.curve, -self.x, self.y)

    def __sub__(self, other: "EdPoint") -> "EdPoint":
        return self + (-other)

    def __mul__(self, k: int) -> "EdPoint":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-self) * (-k)
        return self.curve._mul(k, self)

    __rmul__ = __mul__

    def encode(self) -> bytes:
        c = self.curve
        # x is "negative" when its little-endian encoding is lexicographically
        # larger than that of -x, i.e. when its lowest bit is set (p odd)
        v = self.y | ((self.x & 1) << (c.b - 1))
        return v.to_bytes(c.encoded_len, "little")


def ed_encode(P: EdPoint) -> bytes:
    return P.encode()


def ed_decode(curve: EdwardsCurve, data: bytes) -> EdPoint:
    return curve.decode(data)


def w2_mul(k: int, P: WPoint) -> WPoint:
    return P * k
