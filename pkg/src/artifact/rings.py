"""Coefficient rings and sparse vectors.

A vector is a plain ``dict`` from generator id to a nonzero coefficient.
Coefficients are ``int`` over Z and Z/n and ``Fraction`` over Q.
"""

from fractions import Fraction

from .errors import RingError


class Ring:
    name = "?"
    is_field = False

    def __call__(self, value):
        raise NotImplementedError

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            return self(Fraction(text))
        return self(int(text))

    def format(self, c):
        return str(c)

    def divide(self, a, b):
        """Exact quotient a/b, or RingError."""
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class _Integers(Ring):
    name = "Z"

    def __call__(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RingError(f"{value} is not an integer")
            return int(value.numerator)
        if isinstance(value, bool) or not isinstance(value, int):
            raise RingError(f"cannot coerce {value!r} into Z")
        return value

    def divide(self, a, b):
        if b == 0 or a % b:
            raise RingError(f"{a} is not divisible by {b} in Z")
        return a // b


class _Rationals(Ring):
    name = "Q"
    is_field = True

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise RingError(f"cannot coerce {value!r} into Q")
        return Fraction(value)

    def divide(self, a, b):
        if b == 0:
            raise RingError("division by zero")
        return Fraction(a) / b


class IntegersMod(Ring):
    def __init__(self, n):
        if n < 2:
            raise RingError(f"modulus must be >= 2, got {n}")
        self.n = n
        self.name = f"Z/{n}"

    @property
    def is_field(self):
        n = self.n
        return all(n % p for p in range(2, int(n ** 0.5) + 1))

    def __call__(self, value):
        if isinstance(value, Fraction):
            return self.divide(value.numerator % self.n, value.denominator % self.n)
        if isinstance(value, bool) or not isinstance(value, int):
            raise RingError(f"cannot coerce {value!r} into {self.name}")
        return value % self.n

    def divide(self, a, b):
        try:
            inv = pow(b % self.n, -1, self.n)
        except ValueError:
            raise RingError(f"{b} is not a unit in {self.name}") from None
        return (a * inv) % self.n


ZZ = _Integers()
QQ = _Rationals()


def ring_from_name(name):
    name = name.strip()
    if name in ("Z", "ZZ"):
        return ZZ
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("Z/"):
        try:
            return IntegersMod(int(name[2:]))
        except ValueError:
            pass
    raise RingError(f"unknown ring {name!r}")


def add_into(acc, vec, scale=1, ring=None):
    """acc += scale * vec, dropping zeros; returns acc."""
    if not scale:
        return acc
    for k, c in vec.items():
        v = acc.get(k, 0) + scale * c
        if ring is not None and not isinstance(ring, (_Integers, _Rationals)):
            v = ring(v)
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def scaled(vec, scale, ring=None):
    return add_into({}, vec, scale, ring)


def normalize(vec, ring):
    out = {}
    for k, c in vec.items():
        c = ring(c)
        if c:
            out[k] = c
    return out
