"""Exact coefficient fields: the rationals and prime fields F_p.

Elements are plain Python values: ``int`` residues in ``[0, p)`` for F_p and
``fractions.Fraction`` for Q.  A :class:`FieldSpec` carries the operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero

MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    """Deterministic trial division."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p > MAX_PRIME:
                raise ValueError(f"prime {self.p} exceeds 2^31")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q``, ``F5``, ``Fp5`` or ``GF(5)`` style names."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls(0)
        for prefix in ("GF(", "Fp", "F"):
            if t.startswith(prefix):
                body = t[len(prefix):].rstrip(")")
                if body.isdigit():
                    return cls(int(body))
        raise ValueError(f"unrecognised field {text!r}; expected Q or F<p>")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __str__(self):
        return self.name

    # element construction
    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or string into the field."""
        if isinstance(x, str):
            return self.parse_element(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    # arithmetic
    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.p == 0:
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if self.p == 0:
            return Fraction(a) ** k
        return pow(a, k, self.p)

    def random_element(self, rng, height: int = 10):
        """Uniform over F_p; over Q an integer in ``[-height, height]``."""
        if self.p == 0:
            return Fraction(rng.randint(-height, height))
        return rng.randrange(self.p)

    def random_nonzero(self, rng, height: int = 10):
        while True:
            x = self.random_element(rng, height)
            if x != 0:
                return x

    def elements(self):
        """Iterate a few small elements (all of them for F_p)."""
        if self.p == 0:
            return [Fraction(k) for k in range(-3, 4)]
        return list(range(self.p))

    # serialization
    def format_element(self, a) -> str:
        if self.p == 0:
            a = Fraction(a)
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return str(a)

    def parse_element(self, text) -> object:
        if isinstance(text, int):
            return self(text)
        s = str(text).strip()
        if "/" in s:
            num, den = s.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(s))
        return self(value)

    def to_json(self) -> dict:
        if self.p == 0:
            return {"field": "Q"}
        return {"field": "Fp", "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        kind = obj.get("field")
        if kind == "Q":
            return cls(0)
        if kind == "Fp":
            return cls(int(obj["p"]))
        raise ValueError(f"unknown field kind {kind!r}")


QQ = FieldSpec(0)


def field_arith(field: FieldSpec, op: str, a, b=None):
    """Dispatch one of ``add``, ``mul``, ``inv``, ``neg``."""
    if op == "add":
        return field.add(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "neg":
        return field.neg(a)
    if op == "inv":
        if b is not None:
            raise ValueError("inv takes a single operand")
        return field.inv(a)
    raise ValueError(f"unknown operation {op!r}")
