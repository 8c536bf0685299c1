"""Binary forms in (s, t), sparse multivariate forms, projective points."""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import AllZero
from .field import FieldSpec


class BinaryForm:
    """Homogeneous polynomial in s, t stored densely.

    ``coeffs[k]`` is the coefficient of ``s**(degree-k) * t**k``.  The zero
    form has degree -1 and no coefficients.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable):
        c = tuple(field(x) for x in coeffs)
        if not any(c):
            c = ()
        self.field = field
        self.coeffs = c

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs) if any(coeffs) else ()
        return obj

    @classmethod
    def zero(cls, field: FieldSpec) -> "BinaryForm":
        return cls._raw(field, ())

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, t_power: int, coeff=None) -> "BinaryForm":
        c = [field.zero] * (degree + 1)
        c[t_power] = field.one if coeff is None else field(coeff)
        return cls._raw(field, c)

    @classmethod
    def constant(cls, field: FieldSpec, value) -> "BinaryForm":
        return cls._raw(field, (field(value),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"BinaryForm({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        d = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = []
            if d - k:
                mono.append("s" if d - k == 1 else f"s^{d - k}")
            if k:
                mono.append("t" if k == 1 else f"t^{k}")
            cs = self.field.format_element(c)
            if mono and cs == "1":
                parts.append("*".join(mono))
            else:
                parts.append("*".join([cs] + mono))
        return " + ".join(parts)

    def padded(self, degree: int) -> list:
        """Coefficient list of length ``degree+1`` (zero form allowed)."""
        if not self.coeffs:
            return [self.field.zero] * (degree + 1)
        if self.degree != degree:
            raise ValueError(f"form of degree {self.degree} used where degree {degree} expected")
        return list(self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        if self.degree != other.degree:
            raise ValueError("adding binary forms of different degrees")
        f = self.field
        return BinaryForm._raw(f, [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "BinaryForm":
        f = self.field
        return BinaryForm._raw(f, [f.neg(a) for a in self.coeffs])

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other) -> "BinaryForm":
        f = self.field
        if not isinstance(other, BinaryForm):
            c = f(other)
            return BinaryForm._raw(f, [f.mul(a, c) for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return BinaryForm.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        p = f.p
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        if p:
            out = [x % p for x in out]
        return BinaryForm._raw(f, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        result = BinaryForm.constant(self.field, 1)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, s, t):
        f = self.field
        d = self.degree
        acc = f.zero
        for k, c in enumerate(self.coeffs):
            if c:
                acc = f.add(acc, f.mul(c, f.mul(f.pow(s, d - k), f.pow(t, k))))
        return acc

    def derivative_s(self) -> "BinaryForm":
        f = self.field
        d = self.degree
        if d <= 0:
            return BinaryForm.zero(f)
        return BinaryForm._raw(f, [f.mul(f(d - k), self.coeffs[k]) for k in range(d)])

    def derivative_t(self) -> "BinaryForm":
        f = self.field
        d = self.degree
        if d <= 0:
            return BinaryForm.zero(f)
        return BinaryForm._raw(f, [f.mul(f(k), self.coeffs[k]) for k in range(1, d + 1)])

    def substitute(self, a, b, c, d) -> "BinaryForm":
        """Compose with ``s -> a*s + b*t``, ``t -> c*s + d*t``."""
        f = self.field
        if not self.coeffs:
            return self
        deg = self.degree
        ls = BinaryForm(f, [a, b])
        lt = BinaryForm(f, [c, d])
        s_pows = [BinaryForm.constant(f, 1)]
        t_pows = [BinaryForm.constant(f, 1)]
        for _ in range(deg):
            s_pows.append(s_pows[-1] * ls)
            t_pows.append(t_pows[-1] * lt)
        out = [f.zero] * (deg + 1)
        for k, coef in enumerate(self.coeffs):
            if coef == 0:
                continue
            term = s_pows[deg - k] * t_pows[k]
            for j, x in enumerate(term.padded(deg)):
                out[j] = f.add(out[j], f.mul(coef, x))
        return BinaryForm._raw(f, out)

    def monic(self) -> "BinaryForm":
        if not self.coeffs:
            return self
        lead = next(c for c in self.coeffs if c != 0)
        return self * self.field.inv(lead)

    def divmod_exact(self, divisor: "BinaryForm") -> Tuple["BinaryForm", "BinaryForm"]:
        """Triangular division ``self = quotient * divisor + residual``.

        The residual is the zero form exactly when ``divisor`` divides ``self``.
        """
        f = self.field
        if not divisor.coeffs:
            raise ZeroDivisionError("division by zero form")
        if not self.coeffs:
            return self, self
        d_deg = divisor.degree
        if d_deg > self.degree:
            return BinaryForm.zero(f), self
        num = list(self.coeffs)
        q = [f.zero] * (self.degree - d_deg + 1)
        lead_idx = next(i for i, c in enumerate(divisor.coeffs) if c != 0)
        inv_lead = f.inv(divisor.coeffs[lead_idx])
        for i in range(len(q)):
            c = num[i + lead_idx] if i + lead_idx < len(num) else f.zero
            if c == 0:
                continue
            factor = f.mul(c, inv_lead)
            q[i] = factor
            for j, dc in enumerate(divisor.coeffs):
                if dc:
                    num[i + j] = f.sub(num[i + j], f.mul(factor, dc))
        return BinaryForm._raw(f, q), BinaryForm._raw(f, num)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "coeffs": [self.field.format_element(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "BinaryForm":
        coeffs = [field.parse_element(c) for c in obj["coeffs"]]
        form = cls(field, coeffs)
        declared = int(obj.get("degree", len(coeffs) - 1))
        if form.coeffs and declared != form.degree:
            raise ValueError("BinaryForm degree does not match coefficient count")
        return form


def _upoly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_mod(field: FieldSpec, a: list, b: list) -> list:
    a = list(a)
    inv = field.inv(b[-1])
    while len(a) >= len(b):
        c = field.mul(a[-1], inv)
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[shift + i] = field.sub(a[shift + i], field.mul(c, x))
        a.pop()
        _upoly_trim(a)
    return a


def _upoly_gcd(field: FieldSpec, a: list, b: list) -> list:
    a, b = _upoly_trim(list(a)), _upoly_trim(list(b))
    while b:
        a, b = b, _upoly_mod(field, a, b)
    return a


def binary_gcd(forms: Sequence[BinaryForm]) -> BinaryForm:
    """Greatest common divisor, scaled so its first nonzero coefficient is 1."""
    nonzero = [g for g in forms if g.coeffs]
    if not nonzero:
        raise AllZero("gcd of zero forms")
    field = nonzero[0].field
    t_val = min(next(i for i, c in enumerate(g.coeffs) if c != 0) for g in nonzero)
    acc: list = []
    for g in nonzero:
        # dehomogenize at t = 1: coefficient of s^j sits at index degree-j
        up = list(reversed(g.coeffs))
        acc = _upoly_gcd(field, acc, up) if acc else _upoly_trim(up)
        if len(acc) == 1:
            break
    # multiplying by t shifts coefficient indices up by one
    coeffs = [field.zero] * t_val + list(reversed(acc))
    return BinaryForm(field, coeffs).monic()


Exponent = Tuple[int, ...]


def monomial_exponents(n_vars: int, degree: int) -> List[Exponent]:
    """All exponent vectors of the given total degree, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n_vars), degree):
        e = [0] * n_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


class MultiForm:
    """Sparse homogeneous polynomial in ``n_vars`` variables."""

    __slots__ = ("field", "n_vars", "degree", "terms")

    def __init__(self, field: FieldSpec, n_vars: int, degree: int, terms: Dict[Exponent, object] | None = None):
        self.field = field
        self.n_vars = n_vars
        self.degree = degree
        clean: Dict[Exponent, object] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n_vars:
                raise ValueError("exponent length mismatch")
            if sum(exp) != degree:
                raise ValueError(f"term {exp} is not of degree {degree}")
            c = field(c)
            if c != 0:
                clean[exp] = field.add(clean.get(exp, field.zero), c)
                if clean[exp] == 0:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def from_monomials(cls, field, n_vars, items) -> "MultiForm":
        """Sum of ``(coeff, exponent)`` pairs of equal degree, merging repeats."""
        items = list(items)
        degree = sum(items[0][1]) if items else 0
        acc: Dict[Exponent, object] = {}
        for c, exp in items:
            exp = tuple(exp)
            acc[exp] = field.add(acc.get(exp, field.zero), field(c))
        return cls(field, n_vars, degree, acc)

    @classmethod
    def variable(cls, field, n_vars, i) -> "MultiForm":
        e = [0] * n_vars
        e[i] = 1
        return cls(field, n_vars, 1, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MultiForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.field == other.field and self.n_vars == other.n_vars
        return (self.field, self.n_vars, self.degree, self.terms) == (
            other.field, other.n_vars, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n_vars, self.degree, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"MultiForm({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = [f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(exp) if k]
            cs = self.field.format_element(c)
            parts.append("*".join(mono) if cs == "1" and mono else "*".join([cs] + mono))
        return " + ".join(parts)

    def __add__(self, other: "MultiForm") -> "MultiForm":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise ValueError("adding forms of different degrees")
        f = self.field
        acc = dict(self.terms)
        for exp, c in other.terms.items():
            acc[exp] = f.add(acc.get(exp, f.zero), c)
        return MultiForm(f, self.n_vars, self.degree, acc)

    def __neg__(self):
        f = self.field
        return MultiForm(f, self.n_vars, self.degree, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiForm":
        f = self.field
        c = f(c)
        return MultiForm(f, self.n_vars, self.degree, {e: f.mul(x, c) for e, x in self.terms.items()})

    def __mul__(self, other) -> "MultiForm":
        if not isinstance(other, MultiForm):
            return self.scale(other)
        f = self.field
        acc: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = f.add(acc.get(e, f.zero), f.mul(c1, c2))
        return MultiForm(f, self.n_vars, self.degree + other.degree, acc)

    def evaluate(self, point: Sequence):
        f = self.field
        acc = f.zero
        for exp, c in self.terms.items():
            v = c
            for x, k in zip(point, exp):
                if k:
                    v = f.mul(v, f.pow(x, k))
                    if v == 0:
                        break
            acc = f.add(acc, v)
        return acc

    def gradient_at(self, point: Sequence) -> list:
        return [partial_derivative(self, i).evaluate(point) for i in range(self.n_vars)]

    def substitute_linear(self, matrix: Sequence[Sequence]) -> "MultiForm":
        """Return ``G(x) = F(A x)``, i.e. ``x_i -> sum_j A[i][j] x_j``."""
        f = self.field
        lin = [MultiForm(f, self.n_vars, 1, {tuple(int(k == j) for k in range(self.n_vars)): matrix[i][j]
                                             for j in range(self.n_vars) if matrix[i][j] != 0})
               for i in range(self.n_vars)]
        pow_cache: Dict[Tuple[int, int], MultiForm] = {}

        def power(i, k):
            key = (i, k)
            if key not in pow_cache:
                if k == 0:
                    pow_cache[key] = MultiForm(f, self.n_vars, 0, {(0,) * self.n_vars: 1})
                else:
                    pow_cache[key] = power(i, k - 1) * lin[i]
            return pow_cache[key]

        total = MultiForm(f, self.n_vars, self.degree, {})
        for exp, c in self.terms.items():
            term = MultiForm(f, self.n_vars, 0, {(0,) * self.n_vars: c})
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coeff": self.field.format_element(c)}
                      for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "MultiForm":
        terms: Dict[Exponent, object] = {}
        for t in obj["terms"]:
            exp = tuple(int(x) for x in t["exp"])
            terms[exp] = field.add(terms.get(exp, field.zero), field.parse_element(t["coeff"]))
        return cls(field, int(obj["n_vars"]), int(obj["degree"]), terms)


def partial_derivative(F: MultiForm, i: int) -> MultiForm:
    """Formal partial derivative; exponents are reduced into the field."""
    if not 0 <= i < F.n_vars:
        raise IndexError(f"variable index {i} out of range")
    f = F.field
    out: Dict[Exponent, object] = {}
    for exp, c in F.terms.items():
        k = exp[i]
        if k == 0:
            continue
        c2 = f.mul(c, f(k))
        if c2 == 0:
            continue
        e = list(exp)
        e[i] -= 1
        out[tuple(e)] = c2
    return MultiForm(f, F.n_vars, max(F.degree - 1, 0), out)


def restrict_to_curve(G: MultiForm, components: Sequence[BinaryForm]) -> BinaryForm:
    """The binary form ``G(f_0(s,t), ..., f_n(s,t))``."""
    if len(components) != G.n_vars:
        raise ValueError("curve has the wrong number of components")
    f = G.field
    if G.is_zero():
        return BinaryForm.zero(f)
    cache: Dict[Tuple[int, int], BinaryForm] = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = BinaryForm.constant(f, 1) if k == 0 else power(i, k - 1) * components[i]
        return cache[key]

    e = max((c.degree for c in components if c.coeffs), default=0)
    out_deg = G.degree * e
    acc = [f.zero] * (out_deg + 1)
    for exp, c in G.terms.items():
        term = BinaryForm.constant(f, c)
        for i, k in enumerate(exp):
            if k:
                term = term * power(i, k)
                if not term.coeffs:
                    break
        if term.coeffs:
            for j, x in enumerate(term.coeffs):
                acc[j] = f.add(acc[j], x)
    return BinaryForm._raw(f, acc)


class ProjectivePoint:
    """Point of projective space with first nonzero coordinate equal to 1."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords: Sequence):
        c = [field(x) for x in coords]
        lead = next((x for x in c if x != 0), None)
        if lead is None:
            raise ValueError("projective point with all coordinates zero")
        inv = field.inv(lead)
        self.field = field
        self.coords = tuple(field.mul(x, inv) for x in c)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + ":".join(self.field.format_element(x) for x in self.coords) + "]"

    def to_json(self) -> list:
        return [self.field.format_element(x) for x in self.coords]

    @classmethod
    def from_json(cls, field, obj) -> "ProjectivePoint":
        return cls(field, [field.parse_element(x) for x in obj])
