"""The special degree-n hypersurface with its configuration of n lines.

``F`` is the sum of

* ``x_0^(n-1) x_n``;
* ``x_1^(n-3) x_n^2 x_0`` and ``x_1^(n-1-k) x_n^k x_k`` for ``3 <= k <= n-1``;
* for each ``m = 1..n-1`` and ``k = 1..n-2``, the block
  ``(x_0^(k-1) x_m^(n-k) + ... + x_0^(n-3) x_m^2) * x_[m+k]`` where ``[j]``
  wraps into ``1..n-1``.

Lines ``L_i = <e_0, e_i>`` for ``i < n`` all pass through ``p = e_0``;
``L_n = <e_1, e_n>`` meets ``L_1`` at ``q = e_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .bundles import SplittingType, elementary_modification_splitting
from .errors import InconsistentMarking, NonTransversalNode, OutOfRange
from .field import FieldSpec
from .forms import BinaryForm, MultiForm, ProjectivePoint, monomial_exponents
from .geometry import (
    Hypersurface,
    NormalBundle,
    RationalCurve,
    alpha_corank,
    contains_curve,
    curve_parameter,
    curve_normal_bundle,
    direction_in_trivial_subbundle,
    is_typical,
    modification_datum,
    normal_bundle,
    restricted_partials,
    smooth_along_curve,
    tangent_hyperplane,
    tangent_vector,
)
from .linalg import nullspace, rank, same_span


def wrap_index(j: int, n: int) -> int:
    """Reduce ``j`` into ``1..n-1`` modulo ``n-1``."""
    return (j - 1) % (n - 1) + 1


def _mono(n_vars: int, powers: Dict[int, int]) -> Tuple[int, ...]:
    e = [0] * n_vars
    for i, k in powers.items():
        e[i] += k
    return tuple(e)


def example_form(n: int, field: FieldSpec) -> MultiForm:
    if n < 4:
        raise OutOfRange("the example needs n >= 4")
    nv = n + 1
    terms: Dict[Tuple[int, ...], int] = {}

    def put(powers):
        e = _mono(nv, powers)
        if e in terms:
            raise AssertionError(f"monomial {e} generated twice")
        terms[e] = 1

    put({0: n - 1, n: 1})
    put({1: n - 3, n: 2, 0: 1})
    for k in range(3, n):
        put({1: n - 1 - k, n: k, k: 1})
    for m in range(1, n):
        for k in range(1, n - 1):
            target = wrap_index(m + k, n)
            for a in range(k - 1, n - 2):
                put({0: a, m: n - 1 - a, target: 1})
    return MultiForm(field, nv, n, terms)


@dataclass
class ExampleInstance:
    n: int
    field: FieldSpec
    X: Hypersurface
    lines: List[RationalCurve]
    p: ProjectivePoint
    q: ProjectivePoint

    def line(self, i: int) -> RationalCurve:
        """``L_i`` with the 1-based index used throughout."""
        return self.lines[i - 1]


def unit(n: int, i: int, field: FieldSpec) -> list:
    v = [field.zero] * (n + 1)
    v[i] = field.one
    return v


def build_example(n: int, field: FieldSpec) -> ExampleInstance:
    F = example_form(n, field)
    X = Hypersurface(field, n, n, F)
    lines = [RationalCurve.line_through(field, unit(n, 0, field), unit(n, i, field)) for i in range(1, n)]
    lines.append(RationalCurve.line_through(field, unit(n, 1, field), unit(n, n, field)))
    return ExampleInstance(n, field, X, lines, ProjectivePoint(field, unit(n, 0, field)),
                           ProjectivePoint(field, unit(n, 1, field)))


def expected_partials_L1(n: int, field: FieldSpec) -> Dict[int, BinaryForm]:
    """Restricted partials on L_1 with ``(x_0, x_1) = (s, t)``; other indices vanish."""
    out = {}
    for j in range(2, n):
        coeffs = [0] * n
        for a in range(j - 2, n - 2):
            coeffs[n - 1 - a] = 1  # s^a t^(n-1-a)
        out[j] = BinaryForm(field, coeffs)
    out[n] = BinaryForm.monomial(field, n - 1, 0)
    return out


def expected_partials_Ln(n: int, field: FieldSpec) -> Dict[int, BinaryForm]:
    """Restricted partials on L_n with ``(x_1, x_n) = (s, t)``."""
    out = {0: BinaryForm.monomial(field, n - 1, 2)}
    for k in range(3, n):
        out[k] = BinaryForm.monomial(field, n - 1, k)
    out[2] = BinaryForm.monomial(field, n - 1, 0)
    return out


# ---------------------------------------------------------------------------
# verification battery


@dataclass
class ClaimRecord:
    claim_id: str
    locus: str
    passed: bool
    witness: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"id": self.claim_id, "locus": self.locus, "passed": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    n: int
    field: FieldSpec
    claims: List[ClaimRecord]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def failures(self) -> List[ClaimRecord]:
        return [c for c in self.claims if not c.passed]

    def __getitem__(self, claim_id: str) -> ClaimRecord:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c
        raise KeyError(claim_id)

    def to_json(self) -> dict:
        return {"n": self.n, "field": self.field.name, "passed": self.passed,
                "claims": [c.to_json() for c in self.claims]}


CLAIM_LOCI = {
    "3.1": "the lines L_1..L_n lie on X",
    "3.2a": "p and q are smooth points of X",
    "3.2b": "T_pX is {x_n = 0}, spanned by L_1..L_{n-1}",
    "3.2c": "T_qX is {x_2 = 0}",
    "3.3": "L_1..L_{n-1} lie in the smooth locus; restricted partials on L_1",
    "3.4": "L_n lies in the smooth locus; restricted partials on L_n",
    "3.5(1)": "L_1..L_n are typical",
    "3.5(2)": "trivial subbundle of N_{L_i|X} at p",
    "3.5(3)": "trivial subbundle of N_{L_1|X} at q",
    "3.5(4)": "trivial subbundle of N_{L_n|X} at q",
    "3.6(1)": "L_1 and L_n are typical",
    "3.6(2)": "T_qL_1 is not in the trivial subbundle of N_{L_n|X}",
    "3.6(3)": "T_qL_n is not in the trivial subbundle of N_{L_1|X}",
    "3.7(1)": "L_2..L_{n-2} are typical",
    "3.7(2)": "T_pL_1 is not in the trivial subbundle of N_{L_i|X}, 2 <= i <= n-1",
    "3.7(3)": "T_pL_2..T_pL_{n-1} span the fiber of N_{L_1|X} at p",
}


def _fmt_forms(forms: Sequence[BinaryForm]) -> List[str]:
    return [str(g) for g in forms]


def _complement_vector(N: NormalBundle, combo: Dict[int, int]) -> list:
    """Vector in N's frame with ``combo[j]`` on the coordinate of ``d/dx_j``."""
    fld = N.X.field
    v = [fld.zero] * len(N.complement)
    for j, c in combo.items():
        v[N.complement.index(j)] = fld(c)
    return v


def verify_example(inst: ExampleInstance) -> VerificationReport:
    """Re-derive every claim about the example; failures are recorded, not raised."""
    n, fld, X = inst.n, inst.field, inst.X
    claims: List[ClaimRecord] = []

    def record(cid, fn):
        try:
            passed, witness = fn()
        except Exception as exc:  # a failed derivation is a failed claim
            passed, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
        claims.append(ClaimRecord(cid, CLAIM_LOCI[cid], bool(passed), witness))

    normals: Dict[int, NormalBundle] = {}

    def N(i):
        if i not in normals:
            normals[i] = normal_bundle(X, inst.line(i))
        return normals[i]

    typical_cache: Dict[int, object] = {}

    def typ(i):
        if i not in typical_cache:
            typical_cache[i] = is_typical(X, inst.line(i))
        return typical_cache[i]

    def c31():
        on = [contains_curve(X, L) for L in inst.lines]
        return all(on), {"on_X": on}

    def c32a():
        gp = X.F.gradient_at(inst.p.coords)
        gq = X.F.gradient_at(inst.q.coords)
        ok = X.F.evaluate(inst.p.coords) == 0 and X.F.evaluate(inst.q.coords) == 0 and any(gp) and any(gq)
        return ok, {"grad_p": [fld.format_element(x) for x in gp], "grad_q": [fld.format_element(x) for x in gq]}

    def c32b():
        T = tangent_hyperplane(X, inst.p)
        expected = [unit(n, i, fld) for i in range(n)]
        spanned_by_lines = [unit(n, 0, fld)] + [unit(n, i, fld) for i in range(1, n)]
        ok = same_span(fld, T.vectors, expected, n + 1) and same_span(fld, T.vectors, spanned_by_lines, n + 1)
        return ok, {"dim": T.dim}

    def c32c():
        T = tangent_hyperplane(X, inst.q)
        expected = [unit(n, i, fld) for i in range(n + 1) if i != 2]
        return same_span(fld, T.vectors, expected, n + 1), {"dim": T.dim}

    def c33():
        smooth = [smooth_along_curve(X, inst.line(i)) for i in range(1, n)]
        parts = restricted_partials(X, inst.line(1))
        exp = expected_partials_L1(n, fld)
        match = all(parts[j] == exp.get(j, BinaryForm.zero(fld)) for j in range(n + 1))
        return all(smooth) and match, {"smooth": smooth, "partials_L1": _fmt_forms(parts)}

    def c34():
        L = inst.line(n)
        smooth = smooth_along_curve(X, L)
        parts = restricted_partials(X, L)
        exp = expected_partials_Ln(n, fld)
        match = all(parts[j] == exp.get(j, BinaryForm.zero(fld)) for j in range(n + 1))
        return smooth and match, {"smooth": smooth, "partials_Ln": _fmt_forms(parts)}

    def c351():
        rows = {}
        ok = True
        for i in range(1, n + 1):
            rep = typ(i)
            corank = alpha_corank(X, inst.line(i))
            dual_split = curve_normal_bundle(X, inst.line(i)).splitting
            good = (rep.typical and rep.routes_agree and corank == 1 == rep.h1[-1]
                    and dual_split == rep.splitting)
            ok &= good
            rows[f"L{i}"] = {"splitting": list(rep.splitting.degrees), "alpha_corank": corank,
                             "h1": {str(k): v for k, v in rep.h1.items()}}
        return ok, rows

    def c352():
        ok = True
        dims = {}
        for i in range(1, n):
            Ni = N(i)
            triv = Ni.trivial_fiber((1, 0))
            gens = []
            for k in range(1, n - 2):
                gens.append(_complement_vector(Ni, {wrap_index(i + k, n): 1, wrap_index(i + k + 1, n): -1}))
            good = same_span(fld, list(triv.vectors), gens, len(Ni.complement))
            ok &= good and triv.dim == n - 3
            dims[f"L{i}"] = triv.dim
        return ok, {"trivial_rank": dims}

    def c353():
        N1 = N(1)
        triv = N1.trivial_fiber((0, 1))
        gens = [_complement_vector(N1, {j: 1}) for j in range(3, n)]
        return same_span(fld, list(triv.vectors), gens, n - 1), {"trivial_rank": triv.dim}

    def c354():
        Nn = N(n)
        triv = Nn.trivial_fiber((1, 0))
        gens = [_complement_vector(Nn, {j: 1}) for j in range(3, n)]
        return same_span(fld, list(triv.vectors), gens, n - 1), {"trivial_rank": triv.dim}

    def c361():
        return typ(1).typical and typ(n).typical, {}

    def c362():
        inside = direction_in_trivial_subbundle(X, inst.line(n), inst.q, unit(n, 0, fld), N(n))
        return not inside, {"in_trivial_subbundle": inside}

    def c363():
        inside = direction_in_trivial_subbundle(X, inst.line(1), inst.q, unit(n, n, fld), N(1))
        return not inside, {"in_trivial_subbundle": inside}

    def c371():
        return all(typ(i).typical for i in range(2, n - 1)), {}

    def c372():
        res = {f"L{i}": direction_in_trivial_subbundle(X, inst.line(i), inst.p, unit(n, 1, fld), N(i))
               for i in range(2, n)}
        return not any(res.values()), {"in_trivial_subbundle": res}

    def c373():
        N1 = N(1)
        classes = [N1.fiber_vector((1, 0), unit(n, i, fld)) for i in range(2, n)]
        fiber = N1.fiber((1, 0))
        r = rank(fld, classes, n - 1)
        ok = r == n - 2 == fiber.dim and same_span(fld, classes, list(fiber.vectors), n - 1)
        return ok, {"span_rank": r}

    for cid, fn in [("3.1", c31), ("3.2a", c32a), ("3.2b", c32b), ("3.2c", c32c), ("3.3", c33),
                    ("3.4", c34), ("3.5(1)", c351), ("3.5(2)", c352), ("3.5(3)", c353),
                    ("3.5(4)", c354), ("3.6(1)", c361), ("3.6(2)", c362), ("3.6(3)", c363),
                    ("3.7(1)", c371), ("3.7(2)", c372), ("3.7(3)", c373)]:
        record(cid, fn)
    return VerificationReport(n, fld, claims)


# ---------------------------------------------------------------------------
# line configurations and Hilbert functions


@dataclass
class LineConfiguration:
    """Lines with marked intersection points ``(point, indices of lines through it)``."""

    field: FieldSpec
    n: int
    lines: List[RationalCurve]
    points: List[Tuple[ProjectivePoint, Tuple[int, ...]]] = dc_field(default_factory=list)

    def validate(self) -> None:
        for pt, idx in self.points:
            for i in idx:
                try:
                    curve_parameter(self.lines[i], pt)
                except (ValueError, IndexError) as exc:
                    raise InconsistentMarking(f"{pt} is not on line {i}") from exc
        marked = {frozenset((i, j)) for _, idx in self.points for i in idx for j in idx if i != j}
        for i in range(len(self.lines)):
            for j in range(i + 1, len(self.lines)):
                if frozenset((i, j)) in marked:
                    continue
                if self.lines[i].degree == self.lines[j].degree == 1:
                    rows = [c for L in (self.lines[i], self.lines[j]) for c in zip(*L.padded())]
                    if rank(self.field, [list(r) for r in rows], self.n + 1) < 4:
                        raise InconsistentMarking(f"lines {i} and {j} meet at an unmarked point")

    def to_json(self) -> dict:
        out = dict(self.field.to_json())
        out["n"] = self.n
        out["lines"] = [L.to_json() for L in self.lines]
        out["points"] = [{"coords": pt.to_json(), "lines": list(idx)} for pt, idx in self.points]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "LineConfiguration":
        fld = FieldSpec.from_json(obj)
        lines = [RationalCurve.from_json(fld, L) for L in obj["lines"]]
        pts = [(ProjectivePoint.from_json(fld, p["coords"]), tuple(int(i) for i in p["lines"]))
               for p in obj.get("points", [])]
        return cls(fld, int(obj["n"]), lines, pts)


def example_configuration(n: int, field: FieldSpec) -> LineConfiguration:
    inst = build_example(n, field)
    return LineConfiguration(field, n, inst.lines,
                             [(inst.p, tuple(range(n - 1))), (inst.q, (0, n - 1))])


def hilbert_structure(config: LineConfiguration, d: int) -> int:
    """h^0(O_C(d)) for the union of the lines, by gluing sections on each line.

    A section is a degree-d form on each component; at a marked point the
    values must agree once both are read against the same vector representing
    the point.
    """
    fld = config.field
    config.validate()
    ncomp = len(config.lines)
    ncols = ncomp * (d + 1)
    rows = []
    for pt, idx in config.points:
        anchor = next(i for i, x in enumerate(pt.coords) if x != 0)
        evals = []
        for i in idx:
            st = curve_parameter(config.lines[i], pt).coords
            val = config.lines[i].at(st)
            scale = fld.div(val[anchor], pt.coords[anchor])  # f_i(st) = scale * pt
            w = fld.inv(fld.pow(scale, d))
            row = [fld.zero] * ncols
            for e in range(d + 1):
                row[i * (d + 1) + e] = fld.mul(w, fld.mul(fld.pow(st[0], d - e), fld.pow(st[1], e)))
            evals.append(row)
        for a, b in zip(evals, evals[1:]):
            rows.append([fld.sub(x, y) for x, y in zip(a, b)])
    return ncols - (rank(fld, rows, ncols) if rows else 0)


def restriction_matrix(curves: Sequence[RationalCurve], degree: int, field: FieldSpec, n_vars: int):
    """Rows: coefficients of ``G o f`` for each curve; columns: monomials of ``degree``."""
    monos = monomial_exponents(n_vars, degree)
    rows: List[list] = []
    for f in curves:
        out_deg = degree * f.degree
        block = [[field.zero] * len(monos) for _ in range(out_deg + 1)]
        cache: Dict[Tuple[int, int], BinaryForm] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = BinaryForm.constant(field, 1) if k == 0 else power(i, k - 1) * f.components[i]
            return cache[key]

        for col, exp in enumerate(monos):
            g = BinaryForm.constant(field, 1)
            for i, k in enumerate(exp):
                if k:
                    g = g * power(i, k)
                    if not g.coeffs:
                        break
            if g.coeffs:
                for r, c in enumerate(g.coeffs):
                    block[r][col] = c
        rows.extend(block)
    return rows, monos


def hilbert_ideal(config: LineConfiguration, d: int, n_ambient: Optional[int] = None) -> int:
    """Dimension of degree-d forms vanishing on every curve of the configuration."""
    n = config.n if n_ambient is None else n_ambient
    if not config.lines:
        return comb(n + d, d)
    rows, monos = restriction_matrix(config.lines, d, config.field, n + 1)
    return len(monos) - rank(config.field, rows, len(monos))


def linear_system_through(curves: Sequence[RationalCurve], degree: int,
                          field: Optional[FieldSpec] = None, n_vars: Optional[int] = None) -> List[MultiForm]:
    """Basis of the degree-``degree`` forms vanishing on every listed curve."""
    if curves:
        field = curves[0].field
        n_vars = curves[0].n + 1
    rows, monos = restriction_matrix(curves, degree, field, n_vars)
    basis = nullspace(field, rows, len(monos)) if rows else nullspace(field, [], len(monos))
    return [MultiForm(field, n_vars, degree, {monos[j]: c for j, c in enumerate(v) if c != 0}) for v in basis]


# ---------------------------------------------------------------------------
# comb smoothing hypotheses


@dataclass
class CombReport:
    conditions: Dict[str, bool]
    details: Dict[str, object]

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "conditions": dict(sorted(self.conditions.items())),
                "details": self.details}


def _splitting_str(s: SplittingType) -> List[int]:
    return list(s.degrees)


def comb_hypotheses(X: Hypersurface, handle: RationalCurve, teeth: Sequence[RationalCurve],
                    nodes: Sequence[ProjectivePoint]) -> CombReport:
    """Check the computable hypotheses for smoothing a comb or a pair of lines.

    Condition keys:

    * ``teeth_typical``, ``handle_typical``, ``teeth_disjoint`` (teeth that
      all meet the handle at one common node count as disjoint elsewhere)
    * ``handle_not_in_tooth_trivial``: the handle's tangent at each node is
      not in the trivial subbundle of the tooth's normal bundle.
    * with one tooth on a line handle: ``tooth_not_in_handle_trivial`` and
      ``handle_modification_trivial`` / ``tooth_modification_trivial`` (both
      one-point modifications are ``O^(n-2)``).
    * distinct nodes and ``n-2`` teeth: ``handle_modification_ample``, the
      modification of the handle's normal bundle at the nodes is ``O(1)^(n-2)``.
    * all nodes equal: ``teeth_span_fiber``, the tooth directions span the
      handle's normal fiber there.
    """
    if len(teeth) != len(nodes):
        raise ValueError("one node per tooth")
    fld = X.field
    n = X.n
    conds: Dict[str, bool] = {}
    details: Dict[str, object] = {}

    handle_params = [curve_parameter(handle, pt) for pt in nodes]
    tooth_params = [curve_parameter(L, pt) for L, pt in zip(teeth, nodes)]
    handle_dirs = [tangent_vector(handle, st.coords) for st in handle_params]
    tooth_dirs = [tangent_vector(L, st.coords) for L, st in zip(teeth, tooth_params)]
    for pt, hd, td in zip(nodes, handle_dirs, tooth_dirs):
        if rank(fld, [list(pt.coords), hd, td], n + 1) < 3:
            raise NonTransversalNode(f"branches are tangent at {pt}")

    teeth_reports = [is_typical(X, L) for L in teeth]
    handle_report = is_typical(X, handle)
    conds["teeth_typical"] = all(r.typical for r in teeth_reports)
    conds["handle_typical"] = handle_report.typical
    details["teeth_normal"] = [_splitting_str(r.splitting) for r in teeth_reports]
    details["handle_normal"] = _splitting_str(handle_report.splitting)

    disjoint = True
    for i in range(len(teeth)):
        for j in range(i + 1, len(teeth)):
            if teeth[i].degree == teeth[j].degree == 1:
                rows = [list(c) for L in (teeth[i], teeth[j]) for c in zip(*L.padded())]
                disjoint &= rank(fld, rows, n + 1) == 4
    conds["teeth_disjoint"] = disjoint or len(set(nodes)) == 1

    tooth_normals = [normal_bundle(X, L) for L in teeth]
    handle_normal = normal_bundle(X, handle)
    inside = [direction_in_trivial_subbundle(X, L, pt, hd, NL)
              for L, pt, hd, NL in zip(teeth, nodes, handle_dirs, tooth_normals)]
    conds["handle_not_in_tooth_trivial"] = not any(inside)
    details["handle_direction_in_tooth_trivial"] = inside

    if len(teeth) == 1 and handle.degree == 1:
        (pt,), (td,), (hd,) = nodes, tooth_dirs, handle_dirs
        inside_h = direction_in_trivial_subbundle(X, handle, pt, td, handle_normal)
        conds["tooth_not_in_handle_trivial"] = not inside_h
        mod_h = elementary_modification_splitting(handle_normal.module,
                                                  [modification_datum(handle_normal, pt, td)])
        mod_t = elementary_modification_splitting(tooth_normals[0].module,
                                                  [modification_datum(tooth_normals[0], pt, hd)])
        trivial = SplittingType([0] * (n - 2))
        conds["handle_modification_trivial"] = mod_h == trivial
        conds["tooth_modification_trivial"] = mod_t == trivial
        details["handle_modification"] = _splitting_str(mod_h)
        details["tooth_modification"] = _splitting_str(mod_t)
    elif len(set(nodes)) == len(nodes):
        data = [modification_datum(handle_normal, pt, td) for pt, td in zip(nodes, tooth_dirs)]
        mod = elementary_modification_splitting(handle_normal.module, data)
        details["handle_modification"] = _splitting_str(mod)
        if len(teeth) == n - 2:
            conds["handle_modification_ample"] = mod == SplittingType([1] * (n - 2))
    if len(set(nodes)) == 1 and len(teeth) > 1:
        st = handle_params[0].coords
        classes = [handle_normal.fiber_vector(st, td) for td in tooth_dirs]
        fiber = handle_normal.fiber(st)
        width = len(classes[0])
        r = rank(fld, classes, width)
        conds["teeth_span_fiber"] = r == fiber.dim and same_span(fld, classes, list(fiber.vectors), width)
        details["span_rank"] = r
    return CombReport(conds, details)
