"""Hypersurfaces, parametrized rational curves and their bundles.

Pipelines on a curve ``f`` of degree ``e`` in a degree-``d`` hypersurface
``X = {F = 0}`` of projective n-space:

* ``K = ker(O(e)^(n+1) -> O(de))``, row ``(dF/dx_i o f)``.  It contains the
  Euler section ``(f_0, ..., f_n)`` and ``f^*TX = K / O``.
* ``N^dual`` is the kernel of ``K^dual -> O + O(-1)^2`` given by pairing with
  ``f``, ``df/ds`` and ``df/dt``; this is the normal bundle of the image.
* For lines, ``N`` is presented directly as ``ker(O(1)^(n-1) -> O(d))`` using
  the coordinates complementary to the line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .bundles import (
    FreeGradedModule,
    GradedMap,
    ModificationDatum,
    SplittingType,
    evaluate_at_point,
    global_sections,
    h0_twist,
    quotient_splitting,
    section_coordinates,
    splitting_type,
    syzygy_kernel,
)
from .errors import (
    CurveNotOnHypersurface,
    DirectionNotInTangentSpace,
    DirectionTangentToLine,
    NotImmersion,
    SingularPoint,
)
from .field import FieldSpec
from .forms import BinaryForm, MultiForm, ProjectivePoint, binary_gcd, partial_derivative, restrict_to_curve
from .linalg import in_span, inverse, nullspace, rank, rref, solve


@dataclass(frozen=True)
class Hypersurface:
    field: FieldSpec
    n: int
    d: int
    F: MultiForm

    def __post_init__(self):
        if self.F.is_zero():
            raise ValueError("defining form is zero")
        if self.F.n_vars != self.n + 1 or self.F.degree != self.d:
            raise ValueError("form does not match (n, d)")

    @classmethod
    def from_form(cls, F: MultiForm) -> "Hypersurface":
        return cls(F.field, F.n_vars - 1, F.degree, F)

    def partials(self) -> List[MultiForm]:
        return [partial_derivative(self.F, i) for i in range(self.n + 1)]

    def to_json(self) -> dict:
        out = dict(self.field.to_json())
        out.update(self.F.to_json())
        out.update({"n": self.n, "d": self.d})
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Hypersurface":
        field = FieldSpec.from_json(obj)
        F = MultiForm.from_json(field, obj)
        n = int(obj.get("n", F.n_vars - 1))
        d = int(obj.get("d", F.degree))
        return cls(field, n, d, F)


@dataclass(frozen=True)
class RationalCurve:
    """A morphism from the line given by n+1 binary forms of common degree."""

    field: FieldSpec
    components: Tuple[BinaryForm, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        degs = {c.degree for c in comps if c.coeffs}
        if len(degs) != 1:
            raise ValueError("components must be nonzero forms of one common degree")
        if binary_gcd(comps).degree > 0:
            raise ValueError("components have a common root")
        if self.degree < 1:
            raise ValueError("curve degree must be at least 1")

    @classmethod
    def line_through(cls, field: FieldSpec, u: Sequence, v: Sequence) -> "RationalCurve":
        """The line ``s*u + t*v``."""
        return cls(field, tuple(BinaryForm(field, [a, b]) for a, b in zip(u, v)))

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @property
    def n(self) -> int:
        return len(self.components) - 1

    def padded(self) -> List[list]:
        return [c.padded(self.degree) for c in self.components]

    def at(self, st) -> list:
        s, t = st
        return [c.evaluate(s, t) for c in self.components]

    def derivative_s(self) -> Tuple[BinaryForm, ...]:
        return tuple(c.derivative_s() for c in self.components)

    def derivative_t(self) -> Tuple[BinaryForm, ...]:
        return tuple(c.derivative_t() for c in self.components)

    def reparametrize(self, a, b, c, d) -> "RationalCurve":
        return RationalCurve(self.field, tuple(x.substitute(a, b, c, d) for x in self.components))

    def transform(self, matrix: Sequence[Sequence]) -> "RationalCurve":
        """Apply a linear map of the ambient coordinates: ``f -> A f``."""
        f = self.field
        out = []
        for row in matrix:
            acc = BinaryForm.zero(f)
            for a, comp in zip(row, self.components):
                if a != 0:
                    acc = acc + comp * a
            out.append(acc)
        return RationalCurve(f, tuple(out))

    def to_json(self) -> dict:
        return {"degree": self.degree, "components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "RationalCurve":
        comps = tuple(BinaryForm.from_json(field, c) for c in obj["components"])
        curve = cls(field, comps)
        if "degree" in obj and int(obj["degree"]) != curve.degree:
            raise ValueError("curve degree does not match its components")
        return curve


@dataclass(frozen=True)
class FiberSubspace:
    """Subspace of an explicit fiber at a point, given by a spanning basis."""

    point: ProjectivePoint
    vectors: Tuple[Tuple, ...]
    ambient_basis: str = "standard"

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, vec) -> bool:
        f = self.point.field
        if not self.vectors:
            return not any(vec)
        return in_span(f, vec, self.vectors, len(vec))


def transform_hypersurface(X: Hypersurface, matrix: Sequence[Sequence]) -> Hypersurface:
    """Image of X under ``x -> A x``: the form ``F(A^{-1} x)``."""
    inv = inverse(X.field, matrix)
    return Hypersurface(X.field, X.n, X.d, X.F.substitute_linear(inv))


# ---------------------------------------------------------------------------
# membership and smoothness


def _check_dims(X: Hypersurface, f: RationalCurve):
    if f.n != X.n:
        raise ValueError("curve and hypersurface live in different projective spaces")


def contains_curve(X: Hypersurface, f: RationalCurve) -> bool:
    _check_dims(X, f)
    return restrict_to_curve(X.F, f.components).is_zero()


def restricted_partials(X: Hypersurface, f: RationalCurve) -> List[BinaryForm]:
    return [restrict_to_curve(g, f.components) for g in X.partials()]


def smooth_along_curve(X: Hypersurface, f: RationalCurve) -> bool:
    """True when the restricted partials have no common zero on the line."""
    if not contains_curve(X, f):
        raise CurveNotOnHypersurface("curve does not lie on the hypersurface")
    parts = [g for g in restricted_partials(X, f) if g.coeffs]
    if not parts:
        return False
    return binary_gcd(parts).degree == 0


def on_hypersurface(X: Hypersurface, pt: ProjectivePoint) -> bool:
    return X.F.evaluate(pt.coords) == 0


def tangent_hyperplane(X: Hypersurface, pt: ProjectivePoint) -> FiberSubspace:
    """The embedded tangent hyperplane ``{w : grad F(pt) . w = 0}``."""
    if not on_hypersurface(X, pt):
        raise ValueError("point is not on the hypersurface")
    grad = X.F.gradient_at(pt.coords)
    if not any(grad):
        raise SingularPoint(f"{pt} is a singular point")
    basis = nullspace(X.field, [grad], X.n + 1)
    return FiberSubspace(pt, tuple(tuple(v) for v in basis))


def hyperplane_covector(X: Hypersurface, pt: ProjectivePoint) -> list:
    grad = X.F.gradient_at(pt.coords)
    if not any(grad):
        raise SingularPoint(f"{pt} is a singular point")
    return grad


# ---------------------------------------------------------------------------
# points and tangent directions on curves


def curve_parameter(f: RationalCurve, pt: ProjectivePoint) -> ProjectivePoint:
    """The unique parameter on the line mapping to ``pt``."""
    fld = f.field
    coords = pt.coords
    i0 = next(i for i, x in enumerate(coords) if x != 0)
    forms = []
    for j in range(len(coords)):
        if j == i0:
            continue
        g = f.components[j] * coords[i0] - f.components[i0] * coords[j]
        if g.coeffs:
            forms.append(g)
    if not forms:
        raise ValueError("degenerate curve")
    g = binary_gcd(forms)
    if g.degree == 0:
        raise ValueError(f"{pt} is not on the curve")
    if g.degree > 1:
        raise ValueError(f"{pt} has several preimages on the curve")
    a, b = g.coeffs
    return ProjectivePoint(fld, [b, fld.neg(a)])


def tangent_vector(f: RationalCurve, st) -> list:
    """A vector spanning the tangent line of the image together with f(st)."""
    fld = f.field
    s, t = st
    base = f.at(st)
    for comps in (f.derivative_s(), f.derivative_t()):
        w = [c.evaluate(s, t) for c in comps]
        if rank(fld, [base, w], len(base)) == 2:
            return w
    raise NotImmersion("curve is not immersed at this point")


def is_immersion(f: RationalCurve) -> bool:
    """gcd of the 2x2 minors of the rows f, df/ds, df/dt has degree 0."""
    rows = [f.components, f.derivative_s(), f.derivative_t()]
    minors = []
    for r1, r2 in itertools.combinations(range(3), 2):
        for i, j in itertools.combinations(range(f.n + 1), 2):
            m = rows[r1][i] * rows[r2][j] - rows[r1][j] * rows[r2][i]
            if m.coeffs:
                minors.append(m)
    if not minors:
        return False
    return binary_gcd(minors).degree == 0


# ---------------------------------------------------------------------------
# pulled-back tangent bundle


def jacobian_map(X: Hypersurface, f: RationalCurve) -> GradedMap:
    e = f.degree
    row = restricted_partials(X, f)
    return GradedMap(X.field, (e,) * (X.n + 1), (X.d * e,), [row])


def tangent_kernel(X: Hypersurface, f: RationalCurve) -> FreeGradedModule:
    """``K``, the restriction of the Euler-extended tangent bundle."""
    if not smooth_along_curve(X, f):
        raise SingularPoint("curve meets the singular locus")
    return syzygy_kernel(jacobian_map(X, f))


def euler_coordinates(K: FreeGradedModule, f: RationalCurve) -> Tuple[BinaryForm, ...]:
    return section_coordinates(K, f.components, 0)


def pullback_tangent_splitting(X: Hypersurface, f: RationalCurve) -> SplittingType:
    """Splitting type of ``f^*TX``."""
    K = tangent_kernel(X, f)
    return quotient_splitting(K, euler_coordinates(K, f), 0)


def is_very_free(X: Hypersurface, f: RationalCurve) -> bool:
    return all(a >= 1 for a in pullback_tangent_splitting(X, f).degrees)


# ---------------------------------------------------------------------------
# normal bundles


@dataclass
class NormalBundle:
    """Normal bundle of a curve in X with explicit fiber coordinates.

    ``module`` presents N as a free module inside a frame; ``fiber_vector``
    sends an ambient tangent vector at a curve point to its class in that
    frame, and ``generator_coords`` to coordinates in the module generators.
    """

    X: Hypersurface
    curve: RationalCurve
    module: FreeGradedModule
    kind: str
    dual_presentation: Optional[GradedMap] = None
    _line_rows: Optional[List[list]] = dc_field(default=None, repr=False)
    _line_pivots: Optional[List[int]] = dc_field(default=None, repr=False)
    complement: Optional[List[int]] = None
    _K: Optional[FreeGradedModule] = dc_field(default=None, repr=False)
    _dual: Optional[FreeGradedModule] = dc_field(default=None, repr=False)

    @property
    def splitting(self) -> SplittingType:
        return splitting_type(self.module)

    @property
    def rank(self) -> int:
        return self.module.rank

    def h0(self, k: int) -> int:
        """h^0(N(k)) from a direct linear system.

        Lines use the kernel presentation of N itself; other curves use
        Serre duality ``h^1(N(k)) = h^0(N^dual(-k-2))`` on the presentation of
        ``N^dual``, plus Riemann-Roch.
        """
        if self.kind == "line":
            return h0_twist(self.module.presentation, k)
        return self.euler_characteristic(k) + h0_twist(self.dual_presentation, -k - 2)

    def h1(self, k: int) -> int:
        return self.h0(k) - self.euler_characteristic(k)

    def euler_characteristic(self, k: int) -> int:
        """Riemann-Roch with rank n-2 and degree e(n+1-d)-2."""
        X, e = self.X, self.curve.degree
        return e * (X.n + 1 - X.d) - 2 + (X.n - 2) * (k + 1)

    def fiber_vector(self, st, w: Sequence) -> list:
        fld = self.X.field
        if self.kind == "line":
            v = list(w)
            for row, pc in zip(self._line_rows, self._line_pivots):
                if v[pc] != 0:
                    c = v[pc]
                    v = [fld.sub(a, fld.mul(c, b)) for a, b in zip(v, row)]
            return [v[j] for j in self.complement]
        s, t = st
        Kvals = self._K.generators_at((s, t))
        cols = list(map(list, zip(*Kvals)))
        h = solve(fld, cols, list(w), len(Kvals))
        if h is None:
            raise DirectionNotInTangentSpace("vector is not tangent to the hypersurface")
        psi = [[g.evaluate(s, t) for g in gen] for gen in self._dual.generators]
        return [sum_mul(fld, row, h) for row in psi]

    def generator_coords(self, st, w: Sequence) -> list:
        y = self.fiber_vector(st, w)
        if self.kind != "line":
            return y
        fld = self.X.field
        G = self.module.generators_at(st)
        cols = list(map(list, zip(*G)))
        h = solve(fld, cols, y, len(G))
        if h is None:
            raise DirectionNotInTangentSpace("vector is not tangent to the hypersurface")
        return h

    def fiber(self, st) -> FiberSubspace:
        """The whole normal fiber at ``st`` in the frame coordinates."""
        vals = self.module.generators_at(st)
        return FiberSubspace(ProjectivePoint(self.X.field, st), tuple(tuple(v) for v in vals), self.kind)

    def trivial_fiber(self, st) -> FiberSubspace:
        """Span of the values at ``st`` of all global sections."""
        fld = self.X.field
        vals = evaluate_at_point(global_sections(self.module), st)
        vals = [v for v in vals if any(v)]
        if vals:
            rows, _ = rref(fld, vals, len(vals[0]))
            vals = rows
        return FiberSubspace(ProjectivePoint(fld, st), tuple(tuple(v) for v in vals), self.kind)


def sum_mul(fld: FieldSpec, a: Sequence, b: Sequence):
    acc = fld.zero
    for x, y in zip(a, b):
        if x and y:
            acc = fld.add(acc, fld.mul(x, y))
    return acc


def line_normal_bundle(X: Hypersurface, L: RationalCurve) -> NormalBundle:
    """N as ``ker(O(1)^(n-1) -> O(d))`` in coordinates complementary to L."""
    if L.degree != 1:
        raise ValueError("not a line")
    if not smooth_along_curve(X, L):
        raise SingularPoint("line meets the singular locus")
    fld = X.field
    u = [c.padded(1)[0] for c in L.components]
    v = [c.padded(1)[1] for c in L.components]
    rows, pivots = rref(fld, [u, v], X.n + 1)
    complement = [j for j in range(X.n + 1) if j not in pivots]
    parts = restricted_partials(X, L)
    phi = GradedMap(fld, (1,) * len(complement), (X.d,), [[parts[j] for j in complement]])
    module = syzygy_kernel(phi)
    return NormalBundle(X, L, module, "line", _line_rows=rows, _line_pivots=pivots, complement=complement)


def curve_normal_bundle(X: Hypersurface, f: RationalCurve) -> NormalBundle:
    """N via ``N^dual = ker(K^dual -> O + O(-1)^2)``; works for every degree."""
    if not is_immersion(f):
        raise NotImmersion("df vanishes somewhere on the line")
    fld = X.field
    K = tangent_kernel(X, f)
    rows = [section_coordinates(K, f.components, 0),
            section_coordinates(K, f.derivative_s(), 1),
            section_coordinates(K, f.derivative_t(), 1)]
    phi = GradedMap(fld, tuple(-c for c in K.generator_twists), (0, -1, -1), rows)
    dual = syzygy_kernel(phi, saturated=True, rank=X.n - 2)
    nu = tuple(-c for c in dual.generator_twists)
    c1_expected = f.degree * (X.n + 1 - X.d) - 2
    if sum(nu) != c1_expected:
        raise RuntimeError("normal bundle degree mismatch")
    module = FreeGradedModule.split(fld, nu)
    return NormalBundle(X, f, module, "dual", dual_presentation=phi, _K=K, _dual=dual)


def normal_bundle(X: Hypersurface, f: RationalCurve, method: str = "auto") -> NormalBundle:
    if method == "line" or (method == "auto" and f.degree == 1):
        return line_normal_bundle(X, f)
    return curve_normal_bundle(X, f)


def normal_bundle_splitting(X: Hypersurface, f: RationalCurve, method: str = "auto") -> SplittingType:
    return normal_bundle(X, f, method).splitting


def alpha_corank(X: Hypersurface, L: RationalCurve) -> int:
    """Codimension of the span of the normal partials restricted to L.

    This is ``h^1(N_{L|X}(-1))`` read off the map
    ``H^0(O^(n-1)) -> H^0(O(d-1))``.
    """
    if L.degree != 1:
        raise ValueError("not a line")
    if not smooth_along_curve(X, L):
        raise SingularPoint("line meets the singular locus")
    fld = X.field
    u = [c.padded(1)[0] for c in L.components]
    v = [c.padded(1)[1] for c in L.components]
    _, pivots = rref(fld, [u, v], X.n + 1)
    parts = restricted_partials(X, L)
    vecs = [parts[j].padded(X.d - 1) for j in range(X.n + 1) if j not in pivots]
    return X.d - rank(fld, vecs, X.d)


# ---------------------------------------------------------------------------
# certifiers


def typical_splitting(n: int, e: int) -> SplittingType:
    if e == 1:
        return SplittingType([0] * (n - 3) + [-1])
    return SplittingType([1] * (e - 2) + [0] * (n - e))


@dataclass
class TypicalityReport:
    typical: bool
    splitting: SplittingType
    expected: SplittingType
    h1: Dict[int, int]
    h1_criterion: bool
    routes_agree: bool

    def __bool__(self):
        return self.typical

    def to_json(self) -> dict:
        return {"typical": self.typical, "splitting": list(self.splitting.degrees),
                "expected": list(self.expected.degrees),
                "h1": {str(k): v for k, v in sorted(self.h1.items())},
                "h1_criterion": self.h1_criterion, "routes_agree": self.routes_agree}


def is_typical(X: Hypersurface, f: RationalCurve, method: str = "auto") -> TypicalityReport:
    """Typicality by splitting type, cross-checked against the h^1 criteria.

    Lines: ``h^1(N) = 0`` and ``h^1(N(-1)) <= 1``.  Degree ``2 <= e <= n``:
    ``h^1(N(-1)) = 0`` and ``h^1(N(-2)) <= n - e``.
    """
    if X.d != X.n:
        raise ValueError("typicality is defined for degree-n hypersurfaces only")
    e = f.degree
    if not 1 <= e <= X.n:
        raise ValueError("curve degree out of range")
    N = normal_bundle(X, f, method)
    split = N.splitting
    expected = typical_splitting(X.n, e)
    if e == 1:
        h1 = {0: N.h1(0), -1: N.h1(-1)}
        crit = h1[0] == 0 and h1[-1] <= 1
    else:
        h1 = {-1: N.h1(-1), -2: N.h1(-2)}
        crit = h1[-1] == 0 and h1[-2] <= X.n - e
    typical = split == expected
    return TypicalityReport(typical, split, expected, h1, crit, typical == crit)


def direction_in_trivial_subbundle(X: Hypersurface, L: RationalCurve, pt: ProjectivePoint,
                                   v: Sequence, N: Optional[NormalBundle] = None) -> bool:
    """Is the class of the tangent vector ``v`` at ``pt`` in the trivial subbundle of N_{L|X}?"""
    fld = X.field
    if N is None:
        N = normal_bundle(X, L)
    st = curve_parameter(L, pt).coords
    grad = hyperplane_covector(X, pt)
    if sum_mul(fld, grad, v) != 0:
        raise DirectionNotInTangentSpace("direction is not in the tangent hyperplane")
    base = L.at(st)
    tang = tangent_vector(L, st)
    if rank(fld, [base, tang, list(v)], X.n + 1) == 2:
        raise DirectionTangentToLine("direction is tangent to the curve")
    y = N.fiber_vector(st, v)
    return N.trivial_fiber(st).contains(y)


def modification_datum(N: NormalBundle, pt: ProjectivePoint, v: Sequence) -> ModificationDatum:
    """Modification of N at the curve point ``pt`` along the tangent vector ``v``."""
    st = curve_parameter(N.curve, pt)
    return ModificationDatum(st, tuple(N.generator_coords(st.coords, v)))
