"""Vector bundles on the projective line presented by matrices of binary forms.

Sign convention, used everywhere: the graded module ``R(c)`` over
``R = k[s, t]`` corresponds to the sheaf ``O(c)``.  A :class:`GradedMap` with
domain twists ``a`` and codomain twists ``b`` is a sheaf map
``(+) O(a_j) -> (+) O(b_i)``, so its entry ``(i, j)`` is a binary form of degree
``b_i - a_j``.  A kernel generator of twist ``c`` is a column of forms of
degree ``a_j - c``, and a free module with twists ``c_i`` is ``(+) O(c_i)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import CapExceeded, DuplicatePoint, NotSurjective, SectionVanishes, ZeroDirection
from .field import FieldSpec
from .forms import BinaryForm, ProjectivePoint, binary_gcd
from .linalg import EchelonBasis, nullspace, rank as mat_rank, solve

Vector = Tuple[BinaryForm, ...]


@dataclass(frozen=True)
class SplittingType:
    """Multiset of degrees of ``(+) O(e_i)``, sorted descending."""

    degrees: Tuple[int, ...]

    def __init__(self, degrees):
        object.__setattr__(self, "degrees", tuple(sorted((int(d) for d in degrees), reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def c1(self) -> int:
        return sum(self.degrees)

    def twist(self, k: int) -> "SplittingType":
        return SplittingType(d + k for d in self.degrees)

    def dual(self) -> "SplittingType":
        return SplittingType(-d for d in self.degrees)

    def h0(self, k: int = 0) -> int:
        return sum(max(0, d + k + 1) for d in self.degrees)

    def h1(self, k: int = 0) -> int:
        return sum(max(0, -(d + k) - 1) for d in self.degrees)

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees)}

    @classmethod
    def from_json(cls, obj) -> "SplittingType":
        return cls(obj["degrees"])

    def __str__(self):
        if not self.degrees:
            return "0"
        parts = []
        for d, grp in itertools.groupby(self.degrees):
            mult = len(list(grp))
            parts.append(f"O({d})" + (f"^{mult}" if mult > 1 else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class GradedMap:
    """Matrix of binary forms ``(+) O(a_j) -> (+) O(b_i)``."""

    field: FieldSpec
    domain_twists: Tuple[int, ...]
    codomain_twists: Tuple[int, ...]
    matrix: Tuple[Tuple[BinaryForm, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "domain_twists", tuple(self.domain_twists))
        object.__setattr__(self, "codomain_twists", tuple(self.codomain_twists))
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))
        if len(self.matrix) != len(self.codomain_twists):
            raise ValueError("row count does not match codomain twists")
        for i, row in enumerate(self.matrix):
            if len(row) != len(self.domain_twists):
                raise ValueError("column count does not match domain twists")
            for j, entry in enumerate(row):
                want = self.codomain_twists[i] - self.domain_twists[j]
                if entry.coeffs and entry.degree != want:
                    raise ValueError(f"entry ({i},{j}) has degree {entry.degree}, expected {want}")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.codomain_twists), len(self.domain_twists)

    def apply(self, vec: Sequence[BinaryForm]) -> Vector:
        f = self.field
        out = []
        for row in self.matrix:
            acc = BinaryForm.zero(f)
            for entry, g in zip(row, vec):
                acc = acc + entry * g
            out.append(acc)
        return tuple(out)

    def substitute(self, a, b, c, d) -> "GradedMap":
        return GradedMap(self.field, self.domain_twists, self.codomain_twists,
                         [[e.substitute(a, b, c, d) for e in row] for row in self.matrix])

    def to_json(self) -> dict:
        return {"domain_twists": list(self.domain_twists),
                "codomain_twists": list(self.codomain_twists),
                "matrix": [[e.to_json() for e in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "GradedMap":
        return cls(field, obj["domain_twists"], obj["codomain_twists"],
                   [[BinaryForm.from_json(field, e) for e in row] for row in obj["matrix"]])


@dataclass(frozen=True)
class FreeGradedModule:
    """Free submodule ``(+) R(c_i)`` of an ambient ``(+) R(a_j)``.

    ``generators[i]`` is the image of the i-th basis element: a column of
    forms of degree ``a_j - c_i``.  ``presentation`` records the map whose
    kernel this is, when there is one.
    """

    field: FieldSpec
    generator_twists: Tuple[int, ...]
    generators: Tuple[Vector, ...]
    ambient_twists: Tuple[int, ...]
    presentation: Optional[GradedMap] = dc_field(default=None, compare=False)

    @classmethod
    def split(cls, field: FieldSpec, twists: Sequence[int]) -> "FreeGradedModule":
        """``(+) O(c_i)`` embedded in itself by the identity."""
        twists = tuple(twists)
        one, zero = BinaryForm.constant(field, 1), BinaryForm.zero(field)
        gens = tuple(tuple(one if i == j else zero for j in range(len(twists))) for i in range(len(twists)))
        return cls(field, twists, gens, twists)

    @property
    def rank(self) -> int:
        return len(self.generator_twists)

    @property
    def embedding(self) -> GradedMap:
        cols = self.generators
        rows = [[cols[i][j] for i in range(len(cols))] for j in range(len(self.ambient_twists))]
        return GradedMap(self.field, self.generator_twists, self.ambient_twists, rows)

    def generators_at(self, point) -> List[list]:
        """Generator values in the ambient fiber; row ``i`` is generator ``i``."""
        s, t = _st(point)
        return [[g.evaluate(s, t) for g in gen] for gen in self.generators]

    def to_json(self) -> dict:
        return {"generator_twists": list(self.generator_twists),
                "ambient_twists": list(self.ambient_twists),
                "generators": [[g.to_json() for g in gen] for gen in self.generators]}

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "FreeGradedModule":
        return cls(field, tuple(obj["generator_twists"]),
                   tuple(tuple(BinaryForm.from_json(field, g) for g in gen) for gen in obj["generators"]),
                   tuple(obj["ambient_twists"]))


@dataclass(frozen=True)
class ModificationDatum:
    """A point of the line and a fiber direction in generator coordinates."""

    point: ProjectivePoint
    direction: Tuple

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(self.direction))
        if not any(self.direction):
            raise ZeroDirection("modification direction is zero")


def _st(point):
    if isinstance(point, ProjectivePoint):
        if point.ambient_dim != 1:
            raise ValueError("point is not on the projective line")
        return point.coords
    s, t = point
    return s, t


# ---------------------------------------------------------------------------
# degree-by-degree linear systems


def _layout(twists: Sequence[int], k: int) -> List[Tuple[int, int]]:
    """(index, offset) for each unknown block of forms of degree ``twist + k``."""
    out = []
    offset = 0
    for j, a in enumerate(twists):
        out.append((a + k, offset))
        offset += max(a + k + 1, 0)
    return out


def _level_matrix(phi: GradedMap, k: int):
    """Matrix of ``g -> phi(g)`` on sections of ``(+) O(a_j + k)``; returns (rows, ncols, layout)."""
    f = phi.field
    lay = _layout(phi.domain_twists, k)
    ncols = sum(max(d + 1, 0) for d, _ in lay)
    rows = []
    for i, b in enumerate(phi.codomain_twists):
        out_deg = b + k
        if out_deg < 0:
            continue
        block = [[f.zero] * ncols for _ in range(out_deg + 1)]
        for j, (deg_j, off) in enumerate(lay):
            entry = phi.matrix[i][j]
            if deg_j < 0 or not entry.coeffs:
                continue
            for m in range(deg_j + 1):
                for r, c in enumerate(entry.coeffs):
                    if c:
                        block[m + r][off + m] = c
        rows.extend(block)
    return rows, ncols, lay


def _unpack(field: FieldSpec, vec: Sequence, lay) -> Vector:
    out = []
    for deg, off in lay:
        if deg < 0:
            out.append(BinaryForm.zero(field))
        else:
            out.append(BinaryForm(field, vec[off:off + deg + 1]))
    return tuple(out)


def _pack(field: FieldSpec, forms: Sequence[BinaryForm], lay) -> list:
    out = []
    for g, (deg, _) in zip(forms, lay):
        if deg >= 0:
            out.extend(g.padded(deg))
        elif g.coeffs:
            raise ValueError("nonzero form in a negative-degree slot")
    return out


def h0_twist(obj, k: int) -> int:
    """``h^0`` of the kernel sheaf twisted by ``O(k)``.

    For a :class:`GradedMap` (or a module carrying its presentation) this is
    the dimension of the solution space of the degree-``k`` linear system,
    computed directly and independently of any kernel basis.
    """
    phi = obj if isinstance(obj, GradedMap) else obj.presentation
    if phi is None:
        return sum(max(0, c + k + 1) for c in obj.generator_twists)
    rows, ncols, _ = _level_matrix(phi, k)
    if ncols == 0:
        return 0
    return ncols - mat_rank(phi.field, rows, ncols)


def det(field: FieldSpec, matrix: Sequence[Sequence[BinaryForm]]) -> BinaryForm:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = BinaryForm.zero(field)
    for j in range(n):
        if not matrix[0][j].coeffs:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * det(field, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def maximal_minor_gcd(phi: GradedMap) -> Optional[BinaryForm]:
    """gcd of all ``l x l`` minors, or None when every minor vanishes."""
    l, m = phi.shape
    minors = []
    for cols in itertools.combinations(range(m), l):
        sub = [[phi.matrix[i][j] for j in cols] for i in range(l)]
        d = det(phi.field, [list(r) for r in sub])
        if d.coeffs:
            minors.append(d)
            if d.degree == 0:
                break
    if not minors:
        return None
    return binary_gcd(minors)


def is_fiberwise_surjective(phi: GradedMap) -> bool:
    if phi.shape[0] == 0:
        return True
    g = maximal_minor_gcd(phi)
    return g is not None and g.degree == 0


def _scan_cap(phi: GradedMap, r: int, saturated: bool) -> int:
    a, b = phi.domain_twists, phi.codomain_twists
    k0 = -max(a)
    spec_cap = (max(b) if b else 0) - min(a) + abs(sum(a) - sum(b)) + 4
    if saturated:
        max_entry = max((b_i - a_j for b_i in b for a_j in a), default=0)
        bound = -min(a) + len(b) * max(max_entry, 0) + 4
    else:
        # every kernel twist is <= max(a) and the twists sum to sum(a) - sum(b)
        bound = (r - 1) * max(a) - sum(a) + sum(b) + 4
    return max(k0 + spec_cap, bound)


def syzygy_kernel(phi: GradedMap, saturated: bool = False, rank: Optional[int] = None) -> FreeGradedModule:
    """Kernel of ``phi`` as a free graded module with minimal generators.

    Generators are found one degree at a time: at level ``k`` the sections of
    ``ker(phi)(k)`` are solved for, and those not in the span of
    ``(s, t)``-multiples of earlier generators become new generators of
    twist ``-k``.

    Unless ``saturated`` is set, ``phi`` must be fiberwise surjective.  With
    ``saturated=True`` the caller supplies the kernel ``rank``.
    """
    f = phi.field
    l, m = phi.shape
    if not saturated:
        if not is_fiberwise_surjective(phi):
            raise NotSurjective("maximal minors of the map have a common zero")
        r = m - l
    else:
        if rank is None:
            raise ValueError("saturated kernels need an explicit rank")
        r = rank
    if r == 0:
        return FreeGradedModule(f, (), (), phi.domain_twists, phi)
    a = phi.domain_twists
    k = -max(a)
    cap = _scan_cap(phi, r, saturated)
    gens: List[Vector] = []
    twists: List[int] = []
    while len(gens) < r:
        if k > cap:
            raise CapExceeded(f"no complete kernel basis by degree {cap}")
        rows, ncols, lay = _level_matrix(phi, k)
        if ncols:
            sols = nullspace(f, rows, ncols) if rows else nullspace(f, [], ncols)
            if sols:
                basis = EchelonBasis(f, ncols)
                for g, c in zip(gens, twists):
                    mult = k + c
                    for e in range(mult + 1):
                        mono = BinaryForm.monomial(f, mult, e)
                        basis.add(_pack(f, [x * mono for x in g], lay))
                for v in sols:
                    if basis.add(v):
                        gens.append(_unpack(f, v, lay))
                        twists.append(-k)
        k += 1
    if not saturated and sum(twists) != sum(a) - sum(phi.codomain_twists):
        raise RuntimeError("kernel twists do not add up to the expected degree")
    return FreeGradedModule(f, tuple(twists), tuple(gens), a, phi)


def splitting_type(M: FreeGradedModule) -> SplittingType:
    """For a free module the generator twists are the splitting type."""
    return SplittingType(M.generator_twists)


def splitting_from_h0(h: Callable[[int], int], rank: int, k_start: int, k_cap: int) -> SplittingType:
    """Reconstruct ``{e_i}`` from ``h(k) = h^0(E(k))``.

    ``k_start`` must satisfy ``h(k_start - 1) == 0``.  Uses
    ``h(k) - h(k-1) = #{e_i >= -k}``.
    """
    if rank == 0:
        return SplittingType(())
    degrees: List[int] = []
    prev_h = h(k_start - 1)
    if prev_h != 0:
        raise ValueError("scan must start below the first section")
    prev_count = 0
    k = k_start
    while prev_count < rank:
        if k > k_cap:
            raise CapExceeded("h0 profile did not stabilise")
        hk = h(k)
        count = hk - prev_h
        if count < prev_count or count > rank:
            raise RuntimeError("h0 profile is not that of a vector bundle of this rank")
        degrees.extend([-k] * (count - prev_count))
        prev_h, prev_count = hk, count
        k += 1
    return SplittingType(degrees)


def oracle_splitting(phi: GradedMap, rank: Optional[int] = None) -> SplittingType:
    """Splitting of ``ker(phi)`` from its h0 profile alone (no kernel basis)."""
    if rank is None:
        rank = phi.shape[1] - phi.shape[0]
    k0 = -max(phi.domain_twists)
    cap = _scan_cap(phi, max(rank, 1), True) + abs(k0)
    return splitting_from_h0(lambda k: h0_twist(phi, k), rank, k0, cap)


def section_coordinates(M: FreeGradedModule, vec: Sequence[BinaryForm], twist: int = 0) -> Vector:
    """Express an ambient section ``O(twist) -> M`` in M's generators."""
    f = M.field
    lay = _layout(M.generator_twists, -twist)
    ncols = sum(max(d + 1, 0) for d, _ in lay)
    rows = []
    rhs = []
    for j, a in enumerate(M.ambient_twists):
        deg = a - twist
        if deg < 0:
            if vec[j].coeffs:
                raise ValueError("section entry in negative degree")
            continue
        block = [[f.zero] * ncols for _ in range(deg + 1)]
        for i, (deg_i, off) in enumerate(lay):
            gen_entry = M.generators[i][j]
            if deg_i < 0 or not gen_entry.coeffs:
                continue
            for mm in range(deg_i + 1):
                for r, c in enumerate(gen_entry.coeffs):
                    if c:
                        block[mm + r][off + mm] = c
        rows.extend(block)
        rhs.extend(vec[j].padded(deg))
    x = solve(f, rows, rhs, ncols) if ncols else ([] if not any(rhs) else None)
    if x is None:
        raise ValueError("vector is not a section of the module")
    return _unpack(f, x, lay)


def dual_and_quotient_kernel(M: FreeGradedModule, coords: Sequence[BinaryForm], twist: int = 0) -> FreeGradedModule:
    """Present ``E^dual`` for ``E = M / <s>`` where ``s: O(twist) -> M``.

    ``coords`` are the coordinates of ``s`` in M's generators (degrees
    ``c_i - twist``).  Negating the returned twists gives the splitting of E.
    """
    f = M.field
    coords = tuple(coords)
    nonzero = [h for h in coords if h.coeffs]
    if not nonzero or binary_gcd(nonzero).degree > 0:
        raise SectionVanishes("section has a zero on the line")
    phi = GradedMap(f, tuple(-c for c in M.generator_twists), (-twist,), [coords])
    return syzygy_kernel(phi)


def quotient_splitting(M: FreeGradedModule, coords: Sequence[BinaryForm], twist: int = 0) -> SplittingType:
    return splitting_type(dual_and_quotient_kernel(M, coords, twist)).dual()


def global_sections(M: FreeGradedModule) -> List[Vector]:
    """Basis of sections ``O -> M`` as ambient vectors."""
    f = M.field
    out = []
    for gen, c in zip(M.generators, M.generator_twists):
        for e in range(c + 1):
            mono = BinaryForm.monomial(f, c, e)
            out.append(tuple(x * mono for x in gen))
    return out


def evaluate_at_point(vectors: Sequence[Sequence[BinaryForm]], point) -> List[list]:
    """Evaluate each vector of forms at a point of the line; one row per vector."""
    s, t = _st(point)
    return [[g.evaluate(s, t) for g in vec] for vec in vectors]


def elementary_modification_splitting(M: FreeGradedModule, data: Sequence[ModificationDatum]) -> SplittingType:
    """Splitting of the upper modification of M along ``data``.

    Sections of ``E'(k)`` are rational sections of ``E(k)`` with at most a
    simple pole at each ``p_j`` whose polar part lies along ``direction_j``.
    Clearing denominators, they are sections ``g`` of ``E(k + m)`` with
    ``g(p_j)`` in the line spanned by ``direction_j``.
    """
    f = M.field
    r = M.rank
    pts = [d.point for d in data]
    if len(set(pts)) != len(pts):
        raise DuplicatePoint("modification points must be distinct")
    for d in data:
        if len(d.direction) != r:
            raise ValueError("direction has the wrong length")
    m = len(data)
    constraints = []
    for d in data:
        ann = nullspace(f, [list(d.direction)], r)
        constraints.append((_st(d.point), ann))

    def h(k: int) -> int:
        lay = _layout(M.generator_twists, k + m)
        ncols = sum(max(deg + 1, 0) for deg, _ in lay)
        if ncols == 0:
            return 0
        rows = []
        for (s, t), ann in constraints:
            evals = []
            for deg, off in lay:
                evals.append([f.mul(f.pow(s, deg - e), f.pow(t, e)) for e in range(deg + 1)] if deg >= 0 else [])
            for w in ann:
                row = [f.zero] * ncols
                for i, (deg, off) in enumerate(lay):
                    if w[i] == 0 or deg < 0:
                        continue
                    for e, val in enumerate(evals[i]):
                        row[off + e] = f.mul(w[i], val)
                rows.append(row)
        return ncols - (mat_rank(f, rows, ncols) if rows else 0)

    c = M.generator_twists
    if r == 0:
        return SplittingType(())
    k_start = -(max(c) + m)
    result = splitting_from_h0(h, r, k_start, -min(c) + 2)
    if result.c1 != sum(c) + m:
        raise RuntimeError("modified bundle has unexpected degree")
    return result
