"""Exact linear algebra over the rationals.

Scalars are ``fractions.Fraction`` (always reduced, positive denominator).
Matrices are dense, immutable and row-major.  Subspaces of Q^d are stored
by their unique reduced-row-echelon basis, so subspace equality is plain
structural equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class AmbientMismatch(ValueError):
    """Operands live in spaces of different ambient dimension."""


class NotCompatible(ValueError):
    """A map does not respect the requested sub/quotient structure."""


class SingularMatrix(ValueError):
    """Inverse requested of a non-invertible matrix."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of Fraction

    @staticmethod
    def from_rows(rows_data: Iterable[Sequence], cols: int | None = None) -> "QMatrix":
        rows = tuple(tuple(_q(x) for x in row) for row in rows_data)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != ncols:
                raise ValueError("cols does not match row length")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = cols
        return QMatrix(len(rows), ncols, rows)

    @staticmethod
    def zero(rows: int, cols: int) -> "QMatrix":
        z = Fraction(0)
        return QMatrix(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix(n, n, tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)))

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise AmbientMismatch("vector length does not match column count")
        return tuple(sum((r[j] * v[j] for j in range(self.cols)), Fraction(0))
                     for r in self.entries)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise AmbientMismatch("inner dimensions do not match")
        bt = other.transpose().entries
        return QMatrix(self.rows, other.cols, tuple(
            tuple(sum((r[k] * c[k] for k in range(self.cols)), Fraction(0)) for c in bt)
            for r in self.entries))

    def power(self, k: int) -> "QMatrix":
        if self.rows != self.cols:
            raise AmbientMismatch("power of a non-square matrix")
        result = QMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def to_lists(self) -> list:
        return [list(r) for r in self.entries]


def _rref_rows(rows: list) -> tuple[list, list]:
    """In-place style RREF on a list of row lists; returns (nonzero rows, pivot cols)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rref(m: QMatrix) -> QMatrix:
    """Reduced row echelon form, same shape (zero rows at the bottom)."""
    nz, _ = _rref_rows([list(r) for r in m.entries])
    pad = [[Fraction(0)] * m.cols for _ in range(m.rows - len(nz))]
    return QMatrix.from_rows(nz + pad, cols=m.cols)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: QMatrix  # dim x ambient_dim, RREF with no zero rows

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [tuple(_q(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise AmbientMismatch("vector length does not match ambient dimension")
        nz, _ = _rref_rows(vecs)
        return Subspace(ambient_dim, QMatrix.from_rows(nz, cols=ambient_dim))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, QMatrix.from_rows([], cols=ambient_dim))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, QMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple:
        piv = []
        for row in self.basis.entries:
            for j, x in enumerate(row):
                if x != 0:
                    piv.append(j)
                    break
        return tuple(piv)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def contains_vector(self, v: Sequence) -> bool:
        r = self.reduce_vector(v)
        return all(x == 0 for x in r)

    def reduce_vector(self, v: Sequence) -> tuple:
        """Canonical representative of v modulo this subspace (zeros at the pivots)."""
        v = [_q(x) for x in v]
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector length does not match ambient dimension")
        for row, p in zip(self.basis.entries, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def coords(self, v: Sequence) -> tuple:
        """Coordinates of v in the RREF basis; raises if v is not in the subspace."""
        v = tuple(_q(x) for x in v)
        if not self.contains_vector(v):
            raise NotCompatible("vector not contained in subspace")
        return tuple(v[p] for p in self.pivots)

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("ambient dimensions differ")
        return all(self.contains_vector(r) for r in other.basis.entries)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("ambient dimensions differ")
        return Subspace.from_vectors(
            self.ambient_dim, list(self.basis.entries) + list(other.basis.entries))

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)


def kernel(m: QMatrix) -> Subspace:
    """Null space {v : m v = 0} as a subspace of Q^cols."""
    nz, pivots = _rref_rows([list(r) for r in m.entries])
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    vecs = []
    for j in free:
        v = [Fraction(0)] * m.cols
        v[j] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -nz[r][j]
        vecs.append(v)
    return Subspace.from_vectors(m.cols, vecs)


def image(m: QMatrix) -> Subspace:
    """Column space of m as a subspace of Q^rows."""
    return Subspace.from_vectors(m.rows, [m.col(j) for j in range(m.cols)])


def annihilator(s: Subspace) -> Subspace:
    """Orthogonal complement w.r.t. the standard bilinear form."""
    return kernel(s.basis)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("ambient dimensions differ")
    if a.is_full():
        return b
    if b.is_full():
        return a
    perp = list(annihilator(a).basis.entries) + list(annihilator(b).basis.entries)
    return kernel(QMatrix.from_rows(perp, cols=a.ambient_dim))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def apply_to_subspace(m: QMatrix, s: Subspace) -> Subspace:
    """Image m(s) as a subspace of the codomain."""
    if m.cols != s.ambient_dim:
        raise AmbientMismatch("matrix columns do not match ambient dimension")
    return Subspace.from_vectors(m.rows, [m.matvec(r) for r in s.basis.entries])


def preimage(m: QMatrix, s: Subspace) -> Subspace:
    """{v : m v in s} as a subspace of the domain."""
    if s.ambient_dim != m.rows:
        raise AmbientMismatch("subspace does not live in the codomain")
    ann = annihilator(s)
    if ann.is_zero():
        return Subspace.full(m.cols)
    return kernel(ann.basis @ m)


def quotient_coords(quot: Subspace, sub: Subspace, v: Sequence) -> tuple:
    """Coordinates of the class of v in the canonical basis of quot/sub.

    The basis consists of the classes of the RREF rows of quot whose pivot
    is not a pivot of sub; coordinates are read off the canonical (sub-reduced)
    representative at those pivot positions.
    """
    if not quot.contains_vector(v):
        raise NotCompatible("vector not contained in the larger subspace")
    r = sub.reduce_vector(v)
    sub_piv = set(sub.pivots)
    return tuple(r[p] for p in quot.pivots if p not in sub_piv)


def quotient_lift(quot: Subspace, sub: Subspace, coords: Sequence) -> tuple:
    """A representative in quot for the given quotient coordinates."""
    free_rows = [row for row, p in zip(quot.basis.entries, quot.pivots)
                 if p not in set(sub.pivots)]
    coords = [_q(x) for x in coords]
    if len(coords) != len(free_rows):
        raise AmbientMismatch("wrong number of quotient coordinates")
    v = [Fraction(0)] * quot.ambient_dim
    for c, row in zip(coords, free_rows):
        v = [a + c * b for a, b in zip(v, row)]
    return tuple(v)


def induced_map_on_quotient(m: QMatrix, sub_dom: Subspace, sub_cod: Subspace,
                            quot_dom: Subspace, quot_cod: Subspace) -> QMatrix:
    """Matrix of the induced map quot_dom/sub_dom -> quot_cod/sub_cod.

    Bases are the canonical complement bases derived from RREF pivots.
    Raises NotCompatible if m does not map sub into sub or quot into quot.
    """
    if not quot_dom.contains(sub_dom) or not quot_cod.contains(sub_cod):
        raise NotCompatible("sub is not contained in quot")
    if not sub_cod.contains(apply_to_subspace(m, sub_dom)):
        raise NotCompatible("map does not send sub_dom into sub_cod")
    if not quot_cod.contains(apply_to_subspace(m, quot_dom)):
        raise NotCompatible("map does not send quot_dom into quot_cod")
    sub_piv = set(sub_dom.pivots)
    dom_basis = [row for row, p in zip(quot_dom.basis.entries, quot_dom.pivots)
                 if p not in sub_piv]
    cols = [quotient_coords(quot_cod, sub_cod, m.matvec(b)) for b in dom_basis]
    out_rows = quot_cod.dim - sub_cod.dim
    return QMatrix.from_rows(
        [[cols[j][i] for j in range(len(cols))] for i in range(out_rows)],
        cols=len(cols))


def quotient_projection(s: Subspace) -> QMatrix:
    """Matrix of the projection Q^d -> Q^d / s in complement coordinates.

    Coordinates are the non-pivot positions of s's RREF, applied to the
    canonical (s-reduced) representative.
    """
    d = s.ambient_dim
    piv = set(s.pivots)
    free = [j for j in range(d) if j not in piv]
    cols = []
    for j in range(d):
        r = s.reduce_vector([Fraction(1 if t == j else 0) for t in range(d)])
        cols.append([r[f] for f in free])
    return QMatrix.from_rows(
        [[cols[j][i] for j in range(d)] for i in range(len(free))], cols=d)


def inverse(m: QMatrix) -> QMatrix:
    if m.rows != m.cols:
        raise SingularMatrix("non-square matrix")
    n = m.rows
    aug = [list(m.entries[i]) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    nz, pivots = _rref_rows(aug)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return QMatrix.from_rows([r[n:] for r in nz], cols=n)


def rank(m: QMatrix) -> int:
    _, pivots = _rref_rows([list(r) for r in m.entries])
    return len(pivots)
