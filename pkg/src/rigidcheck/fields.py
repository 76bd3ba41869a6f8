"""Exact coefficient fields: the rationals QQ and odd prime fields GF(p).

Field elements are plain Python values (``fractions.Fraction`` for QQ,
``int`` in ``[0, p)`` for GF(p)); a ``Field`` object supplies the
arithmetic.  Keeping elements unboxed keeps the polynomial and Groebner
inner loops cheap.  Operations never mix elements of different fields:
every container (polynomial, matrix, ideal) carries its field and checks
compatibility at the boundaries.
"""

from __future__ import annotations

from fractions import Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


class FieldError(ValueError):
    pass


class Field:
    """Interface shared by RationalField and PrimeField."""

    char: int

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def to_str(self, a) -> str:
        return str(a)

    def to_json(self):
        raise NotImplementedError


class RationalField(Field):
    """The field of rationals; elements are reduced Fractions."""

    char = 0

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x)
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"not a rational literal: {x!r}") from exc
        raise FieldError(f"cannot coerce {type(x).__name__} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0 in Q")
        return a / b

    def pow(self, a, k: int):
        return a**k

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def to_json(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    """GF(p) for an odd prime p; elements are ints in [0, p).

    p = 2 is rejected: the quadratic-form machinery downstream divides
    by 2, so characteristic 2 is outside the supported domain.
    """

    def __init__(self, p: int):
        if not isinstance(p, int):
            raise FieldError("prime modulus must be an int")
        if p == 2:
            raise FieldError("characteristic 2 is not supported (1/2 must exist)")
        if p < 3 or not is_prime(p):
            raise FieldError(f"modulus {p} is not an odd prime >= 3")
        self.p = p
        self.char = p

    def coerce(self, x) -> int:
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            try:
                if "/" in x:
                    num, den = x.split("/")
                    return self.div(int(num) % self.p, int(den) % self.p)
                return int(x) % self.p
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"not a residue literal mod {self.p}: {x!r}") from exc
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        raise FieldError(f"cannot coerce {type(x).__name__} into GF({self.p})")

    def add(self, a, b):
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.p - a if a else 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        return pow(a, k, self.p)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def is_zero(self, a) -> bool:
        return a == 0

    def to_json(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()

#: Default prime for sampling computations.
DEFAULT_SAMPLING_PRIME = 32003


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj) -> Field:
    """Decode the field tag of the polynomial interchange format."""
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        p = obj["Fp"]
        if not isinstance(p, int):
            raise FieldError('field.Fp must be an integer prime')
        return PrimeField(p)
    raise FieldError(f'field must be "Q" or {{"Fp": p}}, got {obj!r}')
