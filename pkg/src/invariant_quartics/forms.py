"""Homogeneous forms of degree d in n+1 variables over Q(zeta_N).

Monomials are indexed graded-lexicographically with x0 greatest, so x0^d is
basis element 0. Coefficients are kept sparse and nonzero, which lets the
singularity tests read supports directly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycScalar, CyclotomicField
from .errors import ConductorMismatch, ShapeMismatch, ZeroForm
from .linalg import ExactMatrix

__all__ = [
    "MonomialBasis",
    "Form",
    "monomial_basis",
    "act",
    "operator_matrix_B",
    "projective_invariance_factor",
    "form_to_expr",
]


class MonomialBasis:
    __slots__ = ("n_plus_1", "degree", "exponents", "index")

    def __init__(self, n_plus_1: int, degree: int) -> None:
        if n_plus_1 < 1 or degree < 0:
            raise ValueError("need n_plus_1 >= 1 and degree >= 0")
        self.n_plus_1 = n_plus_1
        self.degree = degree
        exps = set()
        for combo in combinations_with_replacement(range(n_plus_1), degree):
            e = [0] * n_plus_1
            for v in combo:
                e[v] += 1
            exps.add(tuple(e))
        self.exponents: tuple[tuple[int, ...], ...] = tuple(sorted(exps, reverse=True))
        self.index: dict[tuple[int, ...], int] = {
            e: i for i, e in enumerate(self.exponents)
        }

    def __len__(self) -> int:
        return len(self.exponents)

    def __repr__(self) -> str:
        return f"MonomialBasis(n_plus_1={self.n_plus_1}, degree={self.degree}, size={len(self)})"


@lru_cache(maxsize=None)
def monomial_basis(n_plus_1: int, degree: int) -> MonomialBasis:
    return MonomialBasis(n_plus_1, degree)


class Form:
    """Sparse homogeneous polynomial; immutable once built."""

    __slots__ = ("field", "basis", "coeffs", "_h")

    def __init__(
        self,
        field: CyclotomicField,
        basis: MonomialBasis,
        coeffs: Mapping[int, CycScalar],
    ) -> None:
        clean: dict[int, CycScalar] = {}
        for idx, c in coeffs.items():
            if not isinstance(c, CycScalar):
                c = field.rational(c)
            elif c.field is not field:
                raise ConductorMismatch(
                    f"coefficient conductor {c.field.N} in form over {field.N}"
                )
            if c:
                clean[idx] = c
        self.field = field
        self.basis = basis
        self.coeffs = clean
        self._h = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field: CyclotomicField, basis: MonomialBasis) -> "Form":
        return cls(field, basis, {})

    @classmethod
    def from_coeff_vector(
        cls, field: CyclotomicField, basis: MonomialBasis, vec: Sequence
    ) -> "Form":
        if len(vec) != len(basis):
            raise ShapeMismatch(f"vector length {len(vec)} vs basis size {len(basis)}")
        return cls(field, basis, {i: c for i, c in enumerate(vec)})

    @classmethod
    def from_exponent_dict(
        cls,
        field: CyclotomicField,
        n_plus_1: int,
        degree: int,
        entries: Mapping[tuple[int, ...], object],
    ) -> "Form":
        basis = monomial_basis(n_plus_1, degree)
        coeffs = {}
        for exps, c in entries.items():
            idx = basis.index.get(tuple(exps))
            if idx is None:
                raise ShapeMismatch(f"exponent {exps} is not degree {degree}")
            coeffs[idx] = c
        return cls(field, basis, coeffs)

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.basis.degree

    @property
    def n_plus_1(self) -> int:
        return self.basis.n_plus_1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def support(self) -> list[tuple[int, ...]]:
        return [self.basis.exponents[i] for i in sorted(self.coeffs)]

    def coeff_vector(self) -> list[CycScalar]:
        zero = self.field.zero
        vec = [zero] * len(self.basis)
        for i, c in self.coeffs.items():
            vec[i] = c
        return vec

    def coefficient(self, exps: tuple[int, ...]) -> CycScalar:
        idx = self.basis.index.get(tuple(exps))
        if idx is None:
            return self.field.zero
        return self.coeffs.get(idx, self.field.zero)

    def lift_to(self, target: CyclotomicField) -> "Form":
        if target is self.field:
            return self
        return Form(
            target, self.basis, {i: c.lift_to(target) for i, c in self.coeffs.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.field is other.field
            and self.basis is other.basis
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        h = self._h
        if h is None:
            h = self._h = hash(
                (self.field.N, self.basis.n_plus_1, self.basis.degree)
                + tuple(sorted(self.coeffs.items()))
            )
        return h

    def __repr__(self) -> str:
        return f"<{form_to_expr(self)} @ N={self.field.N}>"

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Form") -> None:
        if self.field is not other.field:
            raise ConductorMismatch(
                f"conductor {self.field.N} vs {other.field.N}"
            )
        if self.basis is not other.basis:
            raise ShapeMismatch("forms live in different monomial bases")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            cur = out.get(i)
            out[i] = c if cur is None else cur + c
        return Form(self.field, self.basis, out)

    def __sub__(self, other: "Form") -> "Form":
        return self.__add__(other.scale(-1))

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def scale(self, s) -> "Form":
        if not isinstance(s, CycScalar):
            s = self.field.rational(s)
        return Form(self.field, self.basis, {i: s * c for i, c in self.coeffs.items()})

    def __mul__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        if self.field is not other.field:
            raise ConductorMismatch(
                f"conductor {self.field.N} vs {other.field.N}"
            )
        if self.basis.n_plus_1 != other.basis.n_plus_1:
            raise ShapeMismatch("variable counts differ")
        prod: dict[tuple[int, ...], CycScalar] = {}
        bex, oex = self.basis.exponents, other.basis.exponents
        for i, a in self.coeffs.items():
            ea = bex[i]
            for j, b in other.coeffs.items():
                eb = oex[j]
                key = tuple(x + y for x, y in zip(ea, eb))
                cur = prod.get(key)
                term = a * b
                prod[key] = term if cur is None else cur + term
        return Form.from_exponent_dict(
            self.field, self.n_plus_1, self.degree + other.degree, prod
        )

    # -- calculus -----------------------------------------------------------

    def partial(self, i: int) -> "Form":
        """Partial derivative with respect to x_i (degree drops by one)."""
        if self.degree == 0:
            return Form.zero(self.field, monomial_basis(self.n_plus_1, 0))
        target = monomial_basis(self.n_plus_1, self.degree - 1)
        out: dict[int, CycScalar] = {}
        for idx, c in self.coeffs.items():
            e = self.basis.exponents[idx]
            if e[i] == 0:
                continue
            shifted = list(e)
            shifted[i] -= 1
            out[target.index[tuple(shifted)]] = c * e[i]
        return Form(self.field, target, out)

    def evaluate(self, point: Sequence) -> CycScalar:
        field = self.field
        pt = [
            c if isinstance(c, CycScalar) else field.rational(c) for c in point
        ]
        if len(pt) != self.n_plus_1:
            raise ShapeMismatch("point arity mismatch")
        # memoized coordinate powers
        pows: list[list[CycScalar]] = []
        for v in pt:
            col = [field.one]
            for _ in range(self.degree):
                col.append(col[-1] * v)
            pows.append(col)
        acc = field.zero
        for idx, c in self.coeffs.items():
            e = self.basis.exponents[idx]
            term = c
            for j, ej in enumerate(e):
                if ej:
                    term = term * pows[j][ej]
            acc = acc + term
        return acc


# -- substitution action ------------------------------------------------------


def _poly_pow(
    base: dict[tuple[int, ...], CycScalar], e: int, nvars: int, field: CyclotomicField
) -> dict[tuple[int, ...], CycScalar]:
    unit = {(0,) * nvars: field.one}
    if e == 0:
        return unit
    acc = unit
    for _ in range(e):
        nxt: dict[tuple[int, ...], CycScalar] = {}
        for ea, a in acc.items():
            for eb, b in base.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                cur = nxt.get(key)
                term = a * b
                nxt[key] = term if cur is None else cur + term
        acc = {k: v for k, v in nxt.items() if v}
    return acc


def _variable_images(a: ExactMatrix) -> list[dict[tuple[int, ...], CycScalar]]:
    """Row j of A as the linear form (Ax)_j, sparse over exponent tuples."""
    n = a.ncols
    images = []
    for row in a.rows:
        img: dict[tuple[int, ...], CycScalar] = {}
        for k, c in enumerate(row):
            if c:
                e = [0] * n
                e[k] = 1
                img[tuple(e)] = c
        images.append(img)
    return images


def act(a: ExactMatrix, f: Form) -> Form:
    """The substituted form (Af)(x) = f(Ax), expanded exactly."""
    if a.field is not f.field:
        raise ConductorMismatch(f"conductor {a.field.N} vs {f.field.N}")
    if a.nrows != a.ncols or a.nrows != f.n_plus_1:
        raise ShapeMismatch(
            f"matrix {a.nrows}x{a.ncols} acting on forms in {f.n_plus_1} variables"
        )
    field = f.field
    n = f.n_plus_1
    images = _variable_images(a)
    # powers of each variable image up to the degree actually used
    max_e = [0] * n
    for idx in f.coeffs:
        e = f.basis.exponents[idx]
        for j in range(n):
            max_e[j] = max(max_e[j], e[j])
    pows: list[list[dict]] = []
    for j in range(n):
        col = [{(0,) * n: field.one}]
        for _ in range(max_e[j]):
            col.append(_poly_mul_sparse(col[-1], images[j], field))
        pows.append(col)
    total: dict[tuple[int, ...], CycScalar] = {}
    for idx, c in f.coeffs.items():
        e = f.basis.exponents[idx]
        term = {(0,) * n: c}
        for j, ej in enumerate(e):
            if ej:
                term = _poly_mul_sparse(term, pows[j][ej], field)
        for key, v in term.items():
            cur = total.get(key)
            total[key] = v if cur is None else cur + v
    return Form.from_exponent_dict(field, n, f.degree, total)


def _poly_mul_sparse(
    a: dict[tuple[int, ...], CycScalar],
    b: dict[tuple[int, ...], CycScalar],
    field: CyclotomicField,
) -> dict[tuple[int, ...], CycScalar]:
    out: dict[tuple[int, ...], CycScalar] = {}
    for ea, x in a.items():
        for eb, y in b.items():
            key = tuple(s + t for s, t in zip(ea, eb))
            cur = out.get(key)
            term = x * y
            out[key] = term if cur is None else cur + term
    return {k: v for k, v in out.items() if v}


def operator_matrix_B(a: ExactMatrix, kj, d: int) -> ExactMatrix:
    """Matrix of f -> act(A, f) - kj * f on the degree-d monomial basis.

    Column j holds the coefficient vector of the image of basis monomial j.
    """
    field = a.field
    if not isinstance(kj, CycScalar):
        kj = field.rational(kj)
    elif kj.field is not field:
        raise ConductorMismatch(f"kj conductor {kj.field.N} vs matrix {field.N}")
    n = a.nrows
    basis = monomial_basis(n, d)
    D = len(basis)
    images = _variable_images(a)
    pows: list[list[dict]] = []
    for j in range(n):
        col = [{(0,) * n: field.one}]
        for _ in range(d):
            col.append(_poly_mul_sparse(col[-1], images[j], field))
        pows.append(col)
    zero = field.zero
    cols: list[list[CycScalar]] = []
    for jcol, e in enumerate(basis.exponents):
        term = {(0,) * n: field.one}
        for j, ej in enumerate(e):
            if ej:
                term = _poly_mul_sparse(term, pows[j][ej], field)
        col = [zero] * D
        for key, v in term.items():
            col[basis.index[key]] = v
        col[jcol] = col[jcol] - kj
        cols.append(col)
    rows = [tuple(cols[j][i] for j in range(D)) for i in range(D)]
    return ExactMatrix(field, rows)


def projective_invariance_factor(a: ExactMatrix, f: Form) -> "CycScalar | None":
    """lambda with act(A, f) = lambda * f, or None when f is not an
    eigenform; exact on all coefficients."""
    if f.is_zero():
        raise ZeroForm("invariance factor of the zero form")
    g = act(a, f)
    pivot = min(f.coeffs)
    gc = g.coeffs.get(pivot)
    if gc is None:
        return None
    lam = gc / f.coeffs[pivot]
    return lam if g == f.scale(lam) else None


# -- serialization -------------------------------------------------------------


def _monomial_expr(e: tuple[int, ...]) -> str:
    parts = []
    for j, ej in enumerate(e):
        if ej == 1:
            parts.append(f"x{j}")
        elif ej > 1:
            parts.append(f"x{j}^{ej}")
    return "*".join(parts) if parts else "1"


def form_to_expr(f: Form) -> str:
    """Canonical expression string, terms in monomial order."""
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for idx in sorted(f.coeffs):
        c = f.coeffs[idx]
        mono = _monomial_expr(f.basis.exponents[idx])
        if c.is_rational():
            q = c.as_fraction()
            mag = abs(q)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            negative = q < 0
        else:
            from .cyclotomic import scalar_to_expr

            body = f"({scalar_to_expr(c)})" if mono == "1" else f"({scalar_to_expr(c)})*{mono}"
            negative = False
        if not parts:
            if not negative:
                parts.append(body)
            elif "^" in body.split("*", 1)[0]:
                # grammar binds ^ outside unary minus: -x0^2 means (-x0)^2
                parts.append(f"-1*{body}")
            else:
                parts.append(f"-{body}")
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)
