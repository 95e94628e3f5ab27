"""Exact scalar arithmetic: the rationals and prime fields.

Every computation in the engine runs over exactly one field object.  Field
elements are plain values supporting ``+ - * /``, ``==`` and ``bool``:
``fractions.Fraction`` for the rationals, :class:`FpElem` for a prime field.
No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextError, SchemaError


class FpElem:
    """An element of F_p.  Arithmetic reduces modulo p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _check(self, other: "FpElem") -> None:
        if not isinstance(other, FpElem) or other.p != self.p:
            raise ContextError("mixed-field arithmetic")

    def __add__(self, other):
        self._check(other)
        return FpElem(self.v + other.v, self.p)

    def __sub__(self, other):
        self._check(other)
        return FpElem(self.v - other.v, self.p)

    def __mul__(self, other):
        self._check(other)
        return FpElem(self.v * other.v, self.p)

    def __truediv__(self, other):
        self._check(other)
        if other.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElem(self.v * pow(other.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __eq__(self, other):
        return isinstance(other, FpElem) and other.p == self.p and other.v == self.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Context object carrying the field tag and element constructors."""

    name: str

    def of(self, n: int):
        raise NotImplementedError

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def parse(self, s: str):
        raise NotImplementedError

    def to_str(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"

    def of(self, n: int):
        return Fraction(n)

    def parse(self, s: str):
        return Fraction(s)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"

    def of(self, n: int):
        return FpElem(n, self.p)

    def parse(self, s: str):
        return FpElem(int(s), self.p)

    def to_str(self, x) -> str:
        return str(x.v)


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Resolve a serialized field tag ("Q" or "Fp:<p>")."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        try:
            return GF(int(name[3:]))
        except ValueError as e:
            raise SchemaError(f"bad field tag {name!r}: {e}") from e
    raise SchemaError(f"unknown field tag {name!r}")
