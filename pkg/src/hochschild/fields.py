"""Exact scalar arithmetic: the rationals and prime fields.

Scalars are plain Python values: `fractions.Fraction` over the
rationals, ints in [0, p) over GF(p).  All arithmetic is routed through
a Field object so every algorithm in the package runs unchanged over
either field.  Scalar literals follow the grammar
``[+-] integer [/ positive-integer]``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ScalarError

_SCALAR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_pair(text):
    text = text.strip()
    if not _SCALAR_RE.match(text):
        raise ScalarError(f"bad scalar literal {text!r}")
    if "/" in text:
        num, den = text.split("/")
        num, den = int(num), int(den)
    else:
        num, den = int(text), 1
    if den == 0:
        raise ScalarError(f"zero denominator in {text!r}")
    return num, den


class Field:
    """Arithmetic interface shared by `Rationals` and `PrimeField`."""

    zero = None
    one = None

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

    def from_int(self, n):
        raise NotImplementedError

    def from_rational(self, fr):
        """Image of an exact rational in this field."""
        raise NotImplementedError

    def parse(self, text):
        num, den = _parse_pair(text)
        return self.from_rational(Fraction(num, den))

    def format(self, a):
        return str(a)


class Rationals(Field):
    zero = Fraction(0)
    one = Fraction(1)

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def from_rational(self, fr):
        return Fraction(fr)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash(Rationals)


class PrimeField(Field):
    """GF(p) with residues stored as plain ints in [0, p)."""

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ScalarError(f"modulus {p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def from_rational(self, fr):
        den = fr.denominator % self.p
        if den == 0:
            raise ScalarError(f"{fr} has no image in GF({self.p})")
        return fr.numerator * pow(den, -1, self.p) % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash((PrimeField, self.p))


QQ = Rationals()


def GF(p):
    return PrimeField(p)


def field_from_name(name):
    """Field named by an instance file: "Q" or "Fp:<prime>"."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        try:
            p = int(name[3:])
        except ValueError:
            raise ScalarError(f"bad field name {name!r}") from None
        return PrimeField(p)
    raise ScalarError(f"bad field name {name!r}")


def field_name(field):
    if isinstance(field, Rationals):
        return "Q"
    return f"Fp:{field.p}"
