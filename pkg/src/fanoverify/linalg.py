"""Dense exact linear algebra over a :class:`FieldSpec`.

Matrices are lists of rows (lists of field elements).  Pivoting takes the
first nonzero entry; nothing here depends on magnitudes.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .field import FieldSpec


def _normalize_row(field: FieldSpec, row: list, col: int) -> list:
    inv = field.inv(row[col])
    p = field.p
    if p:
        return [(x * inv) % p for x in row]
    return [x * inv for x in row]


def _axpy(field: FieldSpec, target: list, factor, source: list, start: int = 0) -> None:
    """``target -= factor * source`` in place, from column ``start``."""
    p = field.p
    if p:
        for j in range(start, len(target)):
            s = source[j]
            if s:
                target[j] = (target[j] - factor * s) % p
    else:
        for j in range(start, len(target)):
            s = source[j]
            if s:
                target[j] = target[j] - factor * s


def rref(field: FieldSpec, matrix: Sequence[Sequence], ncols: int | None = None) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = _normalize_row(field, rows[r], c)
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                _axpy(field, rows[i], rows[i][c], prow, c)
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(field: FieldSpec, matrix: Sequence[Sequence], ncols: int | None = None) -> int:
    if not matrix:
        return 0
    return len(rref(field, matrix, ncols)[1])


def nullspace(field: FieldSpec, matrix: Sequence[Sequence], ncols: int) -> List[list]:
    """Basis of ``{x : matrix @ x = 0}``, one vector per free column."""
    if not matrix:
        basis = []
        for j in range(ncols):
            v = [field.zero] * ncols
            v[j] = field.one
            basis.append(v)
        return basis
    rows, pivots = rref(field, matrix, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, pc in zip(rows, pivots):
            if row[free] != 0:
                v[pc] = field.neg(row[free])
        basis.append(v)
    return basis


def solve(field: FieldSpec, matrix: Sequence[Sequence], rhs: Sequence, ncols: int):
    """One solution of ``matrix @ x = rhs`` or ``None`` when inconsistent."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(field, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(rows, pivots):
        x[pc] = row[ncols]
    return x


def mat_vec(field: FieldSpec, matrix: Sequence[Sequence], vec: Sequence) -> list:
    out = []
    for row in matrix:
        acc = field.zero
        for a, b in zip(row, vec):
            if a and b:
                acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return out


def mat_mul(field: FieldSpec, a: Sequence[Sequence], b: Sequence[Sequence]) -> List[list]:
    cols = list(zip(*b)) if b else []
    return [[_dot(field, row, col) for col in cols] for row in a]


def _dot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        if a and b:
            acc = field.add(acc, field.mul(a, b))
    return acc


def inverse(field: FieldSpec, matrix: Sequence[Sequence]) -> List[list]:
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]


def same_span(field: FieldSpec, a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    ra, rb = rank(field, a, ncols), rank(field, b, ncols)
    return ra == rb == rank(field, list(a) + list(b), ncols)


def in_span(field: FieldSpec, vec: Sequence, rows: Sequence[Sequence], ncols: int) -> bool:
    return rank(field, list(rows) + [vec], ncols) == rank(field, rows, ncols)


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of ``field^ncols``."""

    def __init__(self, field: FieldSpec, ncols: int):
        self.field = field
        self.ncols = ncols
        self._rows: dict[int, list] = {}

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec: Sequence) -> list:
        v = list(vec)
        for col in sorted(self._rows):
            if v[col] != 0:
                _axpy(self.field, v, v[col], self._rows[col], col)
        return v

    def contains(self, vec: Sequence) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        v = self.reduce(vec)
        for col, x in enumerate(v):
            if x != 0:
                self._rows[col] = _normalize_row(self.field, v, col)
                return True
        return False
