"""Deterministic exact linear algebra over Q(zeta_N), plus mod-p wrappers.

Pivoting is always "first nonzero in column order": over an exact field
magnitude heuristics are meaningless, and fixed pivoting makes every kernel
basis canonical and reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gfp
from .cyclotomic import CycScalar, CyclotomicField, PrimeEmbedding, multiplicative_order
from .errors import (
    ConductorMismatch,
    NonInvertible,
    NotFiniteOrder,
    NotSquare,
    OrderCapExceeded,
    ShapeMismatch,
)

__all__ = [
    "ExactMatrix",
    "ModMatrix",
    "kernel_basis",
    "determinant",
    "projective_order_and_tau",
    "mat_action_compose",
    "rref",
    "rank",
    "reduce_matrix_mod_p",
    "projective_canonical",
]

Entry = "CycScalar | int | Fraction"


class ExactMatrix:
    """Immutable dense matrix with CycScalar entries sharing one conductor."""

    __slots__ = ("field", "rows", "nrows", "ncols", "_h")

    def __init__(self, field: CyclotomicField, rows: Sequence[Sequence]) -> None:
        coerced: list[tuple[CycScalar, ...]] = []
        width = None
        for row in rows:
            out = []
            for e in row:
                if isinstance(e, CycScalar):
                    if e.field is not field:
                        raise ConductorMismatch(
                            f"entry conductor {e.field.N} in matrix over {field.N}"
                        )
                    out.append(e)
                else:
                    out.append(field.rational(e))
            if width is None:
                width = len(out)
            elif len(out) != width:
                raise ShapeMismatch("ragged rows")
            coerced.append(tuple(out))
        self.field = field
        self.rows = tuple(coerced)
        self.nrows = len(coerced)
        self.ncols = width or 0
        self._h = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, field: CyclotomicField, n: int) -> "ExactMatrix":
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, field: CyclotomicField, entries: Sequence) -> "ExactMatrix":
        n = len(entries)
        zero = field.zero
        return cls(
            field,
            [[entries[i] if i == j else zero for j in range(n)] for i in range(n)],
        )

    # -- basic structure -------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> CycScalar:
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field is other.field and self.rows == other.rows

    def __hash__(self) -> int:
        h = self._h
        if h is None:
            h = self._h = hash((self.field.N, self.rows))
        return h

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols} @ N={self.field.N})"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, list(zip(*self.rows)))

    def scale(self, s) -> "ExactMatrix":
        if not isinstance(s, CycScalar):
            s = self.field.rational(s)
        return ExactMatrix(self.field, [[s * e for e in row] for row in self.rows])

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return mat_action_compose(self, other)

    def __pow__(self, e: int) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise NotSquare("matrix power needs a square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        result = ExactMatrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            if e > 1:
                base = base * base
            e >>= 1
        return result

    def apply(self, vec: Sequence[CycScalar]) -> list[CycScalar]:
        if len(vec) != self.ncols:
            raise ShapeMismatch(f"vector length {len(vec)} vs {self.ncols} columns")
        zero = self.field.zero
        out = []
        for row in self.rows:
            acc = zero
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return all(not e for row in self.rows for e in row)

    def scalar_of(self) -> "CycScalar | None":
        """If the matrix equals c * identity, return c, else None."""
        if self.nrows != self.ncols:
            return None
        d = self.rows[0][0]
        for i, row in enumerate(self.rows):
            for j, e in enumerate(row):
                if i == j:
                    if e != d:
                        return None
                elif e:
                    return None
        return d

    def lift_to(self, target: CyclotomicField) -> "ExactMatrix":
        if target is self.field:
            return self
        return ExactMatrix(
            target, [[e.lift_to(target) for e in row] for row in self.rows]
        )

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise NotSquare("inverse needs a square matrix")
        n = self.nrows
        field = self.field
        ident = ExactMatrix.identity(field, n)
        work = [list(row) + list(idrow) for row, idrow in zip(self.rows, ident.rows)]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if work[i][c]), None)
            if piv is None:
                raise NonInvertible("matrix is singular")
            work[r], work[piv] = work[piv], work[r]
            inv = work[r][c].inverse()
            work[r] = [inv * e for e in work[r]]
            for i in range(n):
                if i != r and work[i][c]:
                    f = work[i][c]
                    work[i] = [a - f * b for a, b in zip(work[i], work[r])]
            r += 1
        return ExactMatrix(field, [row[n:] for row in work])


def mat_action_compose(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Ordinary matrix product a @ b."""
    if a.field is not b.field:
        raise ConductorMismatch(f"conductor {a.field.N} vs {b.field.N}")
    if a.ncols != b.nrows:
        raise ShapeMismatch(f"{a.nrows}x{a.ncols} times {b.nrows}x{b.ncols}")
    bt = list(zip(*b.rows))
    zero = a.field.zero
    out = []
    for arow in a.rows:
        orow = []
        for bcol in bt:
            acc = zero
            for x, y in zip(arow, bcol):
                if x and y:
                    acc = acc + x * y
            orow.append(acc)
        out.append(tuple(orow))
    return ExactMatrix(a.field, out)


def rref(m: ExactMatrix) -> tuple[list[list[CycScalar]], list[int]]:
    """Reduced row echelon form (leading 1s, zeros above and below pivots)
    with deterministic first-nonzero pivoting. Returns (nonzero rows, pivot
    columns)."""
    rows = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * e for e in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows[:r], pivots


def rank(m: ExactMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: ExactMatrix) -> list[tuple[CycScalar, ...]]:
    """Canonical basis of the right null space: the special solutions,
    re-reduced to row echelon form with leading coefficient 1 and rows
    ordered by pivot column. Empty list for a trivial kernel."""
    rows, pivots = rref(m)
    nc = m.ncols
    field = m.field
    zero, one = field.zero, field.one
    free = [c for c in range(nc) if c not in set(pivots)]
    if not free:
        return []
    vecs = []
    for j in free:
        v = [zero] * nc
        v[j] = one
        for t, pc in enumerate(pivots):
            e = rows[t][j]
            if e:
                v[pc] = -e
        vecs.append(v)
    canon, _ = rref(ExactMatrix(field, vecs))
    return [tuple(row) for row in canon]


def determinant(m: "ExactMatrix | ModMatrix"):
    """Exact determinant; Bareiss fraction-free elimination over Q(zeta_N),
    ordinary elimination over F_p."""
    if isinstance(m, ModMatrix):
        return m.determinant()
    if m.nrows != m.ncols:
        raise NotSquare(f"{m.nrows}x{m.ncols}")
    n = m.nrows
    field = m.field
    if n == 0:
        return field.one
    a = [list(row) for row in m.rows]
    sign = 1
    prev = field.one
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return field.zero
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pkk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pkk * a[i][j] - aik * a[k][j]
                a[i][j] = num / prev
            a[i][k] = field.zero
        prev = pkk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def projective_order_and_tau(a: ExactMatrix, cap: int = 256) -> tuple[int, CycScalar]:
    """Least s >= 1 with a^s scalar, and that scalar tau (verified to be a
    root of unity within the cap)."""
    if a.nrows != a.ncols:
        raise NotSquare("projective order needs a square matrix")
    power = a
    for s in range(1, cap + 1):
        tau = power.scalar_of()
        if tau is not None:
            if not tau:
                raise NonInvertible("matrix power collapsed to zero")
            if multiplicative_order(tau, cap) is None:
                raise NotFiniteOrder(
                    f"scalar from A^{s} is not a root of unity within cap {cap}"
                )
            return s, tau
        power = power * a
    raise OrderCapExceeded(f"no scalar power found up to cap {cap}")


def projective_canonical(m: ExactMatrix) -> ExactMatrix:
    """Scale so the first nonzero entry in row-major order equals 1."""
    for row in m.rows:
        for e in row:
            if e:
                if e == m.field.one:
                    return m
                return m.scale(e.inverse())
    return m


def reduce_matrix_mod_p(m: ExactMatrix, e: PrimeEmbedding) -> np.ndarray:
    return np.array(
        [[e.reduce_scalar(x) for x in row] for row in m.rows], dtype=np.int64
    )


class ModMatrix:
    """Dense matrix over F_p backed by numpy."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, entries) -> None:
        self.p = p
        self.a = np.asarray(entries, dtype=np.int64) % p
        if self.a.ndim != 2:
            raise ShapeMismatch("ModMatrix needs a 2-d array")

    @classmethod
    def from_exact(cls, m: ExactMatrix, e: PrimeEmbedding) -> "ModMatrix":
        return cls(e.p, reduce_matrix_mod_p(m, e))

    def determinant(self) -> int:
        if self.a.shape[0] != self.a.shape[1]:
            raise NotSquare(str(self.a.shape))
        return int(gfp.det_batch(self.a[None, :, :], self.p)[0])

    def rank(self) -> int:
        return gfp.rank_mod(self.a, self.p)

    def kernel_dimension(self) -> int:
        return self.a.shape[1] - self.rank()

    def kernel_basis(self) -> np.ndarray:
        return gfp.kernel_basis_mod(self.a, self.p)
