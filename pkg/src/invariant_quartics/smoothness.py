"""Singular-versus-smooth decisions for exact projective hypersurfaces.

Three certificate sources, combined into one verdict pipeline:

* monomial-ideal witnesses: membership of the support in
  (x_{i_1},..,x_{i_a}) + (x_{j_1},..,x_{j_b})^2 with 2a + b <= n proves
  a singular point exists (the classical sufficient condition);
* exact singular points: all n+1 partial derivatives vanishing at a
  concrete nonzero point;
* resultant discriminants over F_p: the determinant ratio of the two
  Macaulay matrices of the partials, normalized so the shifted Fermat
  form d^{-1} sum(x_i^d) has discriminant 1.  Nonvanishing mod p is a
  sound smoothness certificate; vanishing at several primes is treated
  as strong evidence only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import lcm

import numpy as np

from . import gfp
from .cyclotomic import (
    CycScalar,
    CyclotomicField,
    PrimeEmbedding,
    cyclotomic_field,
    prime_embeddings,
    scalar_to_json,
)
from .errors import (
    BadPrime,
    InterpolationDegenerate,
    NonInvertible,
    NotAPencil,
    ShapeMismatch,
    ZeroForm,
    ZeroPoint,
)
from .forms import Form, act, monomial_basis
from .linalg import ExactMatrix, determinant, kernel_basis, rank
from .registry import GroupSpec

__all__ = [
    "MSCWitness",
    "MacaulaySystem",
    "macaulay_system",
    "VerdictPolicy",
    "SmoothnessVerdict",
    "PencilQuery",
    "msc_test",
    "singular_point_check",
    "macaulay_disc_mod_p",
    "smoothness_verdict",
    "pencil_disc_poly_mod_p",
    "verify_equivalence_witness",
    "forms_proportional",
    "verdict_to_json",
]


# -- monomial-ideal singularity witnesses -------------------------------------


@dataclass(frozen=True)
class MSCWitness:
    """Support containment f in (linear vars) + (squared vars)^2."""

    linear: tuple[int, ...]
    squared: tuple[int, ...]


def _ideal_clauses(n: int, nvars: int):
    """(a, b) shapes with 2a + b <= n, ordered a ascending then b ascending."""
    for a in range(n // 2 + 1):
        b_min = 1 if a == 0 else 0
        for b in range(b_min, n - 2 * a + 1):
            if a + b == 0 or a + b > nvars:
                continue
            yield a, b


def msc_test(f: Form) -> "MSCWitness | None":
    """First monomial-ideal singularity witness in deterministic order.

    Tries every clause shape and variable choice; a hit proves the
    hypersurface singular.  The degenerate-coordinate-point clause
    (no monomial x_i^{d-1} x_j at all for some i) appears here as the
    b = n case on the complementary variables.
    """
    nvars = f.n_plus_1
    n = nvars - 1
    support = f.support()
    for a, b in _ideal_clauses(n, nvars):
        for linear in itertools.combinations(range(nvars), a):
            rest = [v for v in range(nvars) if v not in linear]
            for squared in itertools.combinations(rest, b):
                ok = True
                for e in support:
                    if any(e[v] for v in linear):
                        continue
                    if sum(e[v] for v in squared) >= 2:
                        continue
                    ok = False
                    break
                if ok:
                    return MSCWitness(tuple(linear), tuple(squared))
    return None


def singular_point_check(f: Form, point) -> bool:
    """True iff every partial derivative of f vanishes exactly at the point."""
    pts = list(point)
    if len(pts) != f.n_plus_1:
        raise ShapeMismatch(f"point has {len(pts)} coordinates, form has {f.n_plus_1}")
    conductor = f.field.N
    for c in pts:
        if isinstance(c, CycScalar):
            conductor = lcm(conductor, c.field.N)
    fld = cyclotomic_field(conductor)
    lifted_pt = [
        c.lift_to(fld) if isinstance(c, CycScalar) else fld.rational(c) for c in pts
    ]
    if not any(lifted_pt):
        raise ZeroPoint("singular-point test requires a nonzero point")
    lifted_f = f.lift_to(fld)
    return all(
        lifted_f.partial(i).evaluate(lifted_pt).is_zero() for i in range(f.n_plus_1)
    )


# -- Macaulay matrices over F_p ------------------------------------------------


class MacaulaySystem:
    """Index bookkeeping for the resultant matrices of the n+1 partials.

    Columns are the degree-t monomials (t = (n+1)(d-2)+1 for equal degrees
    d-1).  The row for column monomial x^gamma is (x^gamma / x_i^{d-1}) times
    the i-th partial, where i is the least index with gamma_i >= d-1.  The
    designated submatrix keeps the rows and columns whose monomial has at
    least two such indices.
    """

    __slots__ = (
        "n_plus_1",
        "degree",
        "critical_degree",
        "columns",
        "owners",
        "non_reduced",
        "_scatter",
    )

    def __init__(self, n_plus_1: int, degree: int) -> None:
        if degree < 2:
            raise ValueError("discriminant matrices need degree >= 2")
        n = n_plus_1 - 1
        t = (n + 1) * (degree - 2) + 1
        cols = monomial_basis(n_plus_1, t)
        self.n_plus_1 = n_plus_1
        self.degree = degree
        self.critical_degree = t
        self.columns = cols
        owners = []
        non_reduced = []
        for r, gamma in enumerate(cols.exponents):
            big = [i for i in range(n_plus_1) if gamma[i] >= degree - 1]
            owners.append(big[0])
            if len(big) >= 2:
                non_reduced.append(r)
        self.owners = tuple(owners)
        self.non_reduced = np.array(non_reduced, dtype=np.int64)
        # scatter[i] = (row indices owned by i, their column index grid):
        # entry [r, j] is the column of multiplier(gamma_r) * (j-th monomial
        # of a degree d-1 form)
        part_basis = monomial_basis(n_plus_1, degree - 1)
        scatter = []
        for i in range(n_plus_1):
            rows_i = [r for r in range(len(cols)) if owners[r] == i]
            grid = np.empty((len(rows_i), len(part_basis)), dtype=np.int64)
            for a, r in enumerate(rows_i):
                gamma = list(cols.exponents[r])
                gamma[i] -= degree - 1
                for j, e in enumerate(part_basis.exponents):
                    grid[a, j] = cols.index[
                        tuple(g + ej for g, ej in zip(gamma, e))
                    ]
            scatter.append((np.array(rows_i, dtype=np.int64), grid))
        self._scatter = tuple(scatter)

    @property
    def size(self) -> int:
        return len(self.columns)

    def matrix_mod_p(self, f: Form, e: PrimeEmbedding) -> np.ndarray:
        """The full square matrix of the partials of f, reduced mod p."""
        if f.n_plus_1 != self.n_plus_1 or f.degree != self.degree:
            raise ShapeMismatch("form does not match this Macaulay system")
        q = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.n_plus_1):
            part = f.partial(i)
            vec = np.array(
                [e.reduce_scalar(c) for c in part.coeff_vector()], dtype=np.int64
            )
            rows_i, grid = self._scatter[i]
            if len(rows_i):
                q[rows_i[:, None], grid] = vec[None, :]
        return q

    def submatrix(self, q: np.ndarray) -> np.ndarray:
        idx = self.non_reduced
        return q[np.ix_(idx, idx)]


@lru_cache(maxsize=4)
def macaulay_system(n_plus_1: int, degree: int) -> MacaulaySystem:
    return MacaulaySystem(n_plus_1, degree)


def _det_mod(a: np.ndarray, p: int) -> int:
    return int(gfp.det_batch(a[None, :, :], p)[0])


# extra interpolation samples kept aside to re-check the fitted polynomial
_HELD_OUT = 10

# pencil fits use a margin over the degree-108 bound (108 + 1 would suffice)
_PENCIL_FIT_SAMPLES = 120


def _disc_degree(n_plus_1: int, degree: int) -> int:
    return n_plus_1 * (degree - 1) ** (n_plus_1 - 1)


def macaulay_disc_mod_p(f: Form, e: PrimeEmbedding) -> int:
    """Discriminant of f reduced mod p, normalized to 1 on the shifted
    Fermat form.

    When the designated submatrix is singular mod p the value is recovered
    from the pencil f + s*phi: both matrices gain s on the diagonal, the
    determinant ratio is a polynomial in s of degree at most the
    discriminant degree, and its value at 0 is read off by interpolation.
    """
    if f.is_zero():
        raise ZeroForm("the zero form has no discriminant")
    if f.degree % e.p == 0:
        raise BadPrime(f"p={e.p} divides the degree {f.degree}")
    sys = macaulay_system(f.n_plus_1, f.degree)
    p = e.p
    q = sys.matrix_mod_p(f, e)
    qq = sys.submatrix(q)
    dqq = _det_mod(qq, p)
    if dqq:
        return _det_mod(q, p) * pow(dqq, p - 2, p) % p
    bound = _disc_degree(f.n_plus_1, f.degree)
    need = bound + 1
    samples_x: list[int] = []
    samples_y: list[int] = []
    eye_full = np.eye(sys.size, dtype=np.int64)
    eye_sub = np.eye(len(sys.non_reduced), dtype=np.int64)
    chunk = 32
    s = 1
    while len(samples_x) < need + _HELD_OUT and s < p:
        ss = np.arange(s, min(s + chunk, p), dtype=np.int64)
        s += chunk
        subs = (qq[None, :, :] + ss[:, None, None] * eye_sub[None, :, :]) % p
        dsub = gfp.det_batch(subs, p)
        good = dsub != 0
        if not good.any():
            continue
        fulls = (q[None, :, :] + ss[good, None, None] * eye_full[None, :, :]) % p
        dfull = gfp.det_batch(fulls, p)
        ratios = dfull * gfp.modinv_vec(dsub[good], p) % p
        samples_x.extend(int(v) for v in ss[good])
        samples_y.extend(int(v) for v in ratios)
    if len(samples_x) < need:
        raise InterpolationDegenerate(
            f"only {len(samples_x)} usable diagonal shifts mod {p}"
        )
    xs = np.array(samples_x[:need], dtype=np.int64)
    ys = np.array(samples_y[:need], dtype=np.int64)
    poly = gfp.newton_interpolate(xs, ys, p)
    hx = np.array(samples_x[need : need + _HELD_OUT], dtype=np.int64)
    if len(hx):
        hy = np.array(samples_y[need : need + _HELD_OUT], dtype=np.int64)
        if (gfp.polyval_vec(poly, hx, p) != hy % p).any():
            raise InterpolationDegenerate(
                "ratio interpolation failed its held-out re-check"
            )
    return int(poly[0])


# -- the verdict pipeline -------------------------------------------------------


@dataclass(frozen=True)
class VerdictPolicy:
    primes_to_try: int = 5
    point_search_budget: int = 4096
    group: "GroupSpec | None" = None


@dataclass(frozen=True)
class SmoothnessVerdict:
    status: str  # smooth | singular | singular_probable | unknown
    prime: "int | None" = None
    disc: "int | None" = None
    witness: "MSCWitness | None" = None
    point: "tuple[CycScalar, ...] | None" = None
    primes: tuple[int, ...] = ()

    def is_smooth(self) -> bool:
        return self.status == "smooth"

    def is_singular(self) -> bool:
        return self.status == "singular"


def _normalize_point(vec) -> "tuple[CycScalar, ...] | None":
    lead = next((c for c in vec if c), None)
    if lead is None:
        return None
    inv = lead.inverse()
    return tuple(inv * c for c in vec)


def _pattern_points(fld: CyclotomicField):
    """Nonzero {0, 1, -1, i, -i} patterns, one per projective class."""
    if fld.N % 4 == 0:
        i = fld.zeta_pow(fld.N // 4)
        values = [fld.zero, fld.one, -fld.one, i, -i]
    else:
        values = [fld.zero, fld.one, -fld.one]
    seen = set()
    for combo in itertools.product(values, repeat=4):
        pt = _normalize_point(combo)
        if pt is not None and pt not in seen:
            seen.add(pt)
            yield pt


def _generator_eigenvectors(spec: GroupSpec, fld: CyclotomicField):
    """Multiplicity-one eigenvectors of each generator, exact."""
    m = fld.N
    for gen in spec.generators:
        a = gen.matrix.lift_to(fld)
        tau = gen.tau.lift_to(fld)
        sigma = gen.projective_order
        t = next((j for j in range(m) if fld.zeta_pow(j) == tau), None)
        if t is None:
            continue
        for j in range(m):
            if (j * sigma - t) % m:
                continue
            lam = fld.zeta_pow(j)
            rows = [
                [a[r, c] - (lam if r == c else fld.zero) for c in range(a.ncols)]
                for r in range(a.nrows)
            ]
            kern = kernel_basis(ExactMatrix(fld, rows))
            if len(kern) == 1:
                pt = _normalize_point(kern[0])
                if pt is not None:
                    yield pt


def _candidate_points(f: Form, policy: VerdictPolicy):
    conductor = lcm(f.field.N, 4)
    if policy.group is not None:
        # eigenvalue search needs the same extension the character search uses
        from .solver import working_conductor

        conductor = lcm(conductor, working_conductor(policy.group))
    fld = cyclotomic_field(conductor)
    for i in range(f.n_plus_1):
        coords = [fld.zero] * f.n_plus_1
        coords[i] = fld.one
        yield tuple(coords)
    yield from _pattern_points(fld)
    if policy.group is None:
        return
    seeds = list(_generator_eigenvectors(policy.group, fld))
    seen = set(seeds)
    yield from seeds
    # orbit closure: the singular locus is invariant, so images of
    # eigenvectors under the group are candidates too
    mats = [g.matrix.lift_to(fld) for g in policy.group.generators]
    frontier = list(seeds)
    emitted = len(seeds)
    while frontier and emitted < policy.point_search_budget:
        v = frontier.pop()
        for a in mats:
            w = _normalize_point(a.apply(list(v)))
            if w is not None and w not in seen:
                seen.add(w)
                frontier.append(w)
                emitted += 1
                yield w


def _search_singular_point(f: Form, policy: VerdictPolicy):
    budget = policy.point_search_budget
    for count, pt in enumerate(_candidate_points(f, policy)):
        if count >= budget:
            return None
        if singular_point_check(f, pt):
            return pt
    return None


def smoothness_verdict(
    f: Form, policy: "VerdictPolicy | None" = None
) -> SmoothnessVerdict:
    """Classify {f = 0}: exact certificates first, then mod-p discriminants.

    Order: monomial-ideal witness; discriminant at one prime (nonzero is a
    proof of smoothness); exact singular-point search; more primes.  All
    primes vanishing yields only "singular_probable" since reduction can
    kill a nonzero discriminant.
    """
    if f.is_zero():
        raise ZeroForm("the zero form defines no hypersurface")
    if policy is None:
        policy = VerdictPolicy()
    w = msc_test(f)
    if w is not None:
        return SmoothnessVerdict(status="singular", witness=w)
    avoid = sorted({c.den for c in f.coeffs.values()} | {f.degree})
    embeddings = prime_embeddings(f.field.N, avoid=avoid)
    zero_primes: list[int] = []
    searched = False
    for _ in range(policy.primes_to_try):
        e = next(embeddings)
        try:
            d = macaulay_disc_mod_p(f, e)
        except InterpolationDegenerate:
            continue
        if d:
            return SmoothnessVerdict(status="smooth", prime=e.p, disc=d)
        zero_primes.append(e.p)
        if not searched:
            searched = True
            pt = _search_singular_point(f, policy)
            if pt is not None:
                return SmoothnessVerdict(status="singular", point=pt)
    if zero_primes:
        return SmoothnessVerdict(
            status="singular_probable", primes=tuple(zero_primes)
        )
    return SmoothnessVerdict(status="unknown")


# -- pencils --------------------------------------------------------------------


@dataclass(frozen=True)
class PencilQuery:
    f0: Form
    f1: Form

    def __post_init__(self):
        a, b = self.f0, self.f1
        if a.basis is not b.basis:
            raise ShapeMismatch("pencil members must share degree and variable count")
        if a.field is not b.field:
            fld = cyclotomic_field(lcm(a.field.N, b.field.N))
            a, b = a.lift_to(fld), b.lift_to(fld)
            object.__setattr__(self, "f0", a)
            object.__setattr__(self, "f1", b)
        stack = ExactMatrix(a.field, [a.coeff_vector(), b.coeff_vector()])
        if rank(stack) != 2:
            raise NotAPencil("pencil members are linearly dependent")


def _pencil_sample_pass(f0: Form, f1: Form, e: PrimeEmbedding, need: int):
    """Determinant-ratio samples of Disc(f0 + t*f1) at usable t mod p.

    Returns (xs, ys) with up to need + _HELD_OUT entries; a node t is
    usable when the designated submatrix of f0 + t*f1 is invertible.
    """
    p = e.p
    sys = macaulay_system(f0.n_plus_1, f0.degree)
    q0 = sys.matrix_mod_p(f0, e)
    q1 = sys.matrix_mod_p(f1, e)
    q0s = sys.submatrix(q0)
    q1s = sys.submatrix(q1)
    xs: list[int] = []
    ys: list[int] = []
    t = 0
    chunk = 32
    while len(xs) < need + _HELD_OUT and t < p:
        ts = np.arange(t, min(t + chunk, p), dtype=np.int64)
        t += chunk
        subs = (q0s[None, :, :] + ts[:, None, None] * q1s[None, :, :]) % p
        dsub = gfp.det_batch(subs, p)
        good = dsub != 0
        if not good.any():
            continue
        fulls = (q0[None, :, :] + ts[good, None, None] * q1[None, :, :]) % p
        dfull = gfp.det_batch(fulls, p)
        ratios = dfull * gfp.modinv_vec(dsub[good], p) % p
        xs.extend(int(v) for v in ts[good])
        ys.extend(int(v) for v in ratios)
    return xs, ys


def _unimodular_substitutions(fld: CyclotomicField, nvars: int):
    """Deterministic invertible coordinate changes to dodge degenerate
    designated submatrices. Identity first, then single shears, then two
    dense triangular maps. All have determinant 1, so the discriminant
    values (weight det^108) are unchanged."""
    yield ExactMatrix.identity(fld, nvars)
    for i in range(nvars):
        for j in range(nvars):
            if i == j:
                continue
            rows = [
                [fld.one if r == c else fld.zero for c in range(nvars)]
                for r in range(nvars)
            ]
            rows[i][j] = fld.one
            yield ExactMatrix(fld, rows)
    upper = [
        [fld.one if c >= r else fld.zero for c in range(nvars)] for r in range(nvars)
    ]
    yield ExactMatrix(fld, upper)
    lower = [
        [fld.one if c <= r else fld.zero for c in range(nvars)] for r in range(nvars)
    ]
    yield ExactMatrix(fld, lower)


def pencil_disc_poly_mod_p(query: PencilQuery, e: PrimeEmbedding) -> np.ndarray:
    """Coefficients (ascending, length = degree bound + 1) of the
    discriminant of f0 + t*f1 as a polynomial in t over F_p.

    Interpolated from pointwise determinant ratios. Pencils whose
    designated submatrix is singular along the entire line (both catalog
    two-dimensional subspaces have this defect) are rerun in sheared
    coordinates: a determinant-one substitution leaves every Disc value
    unchanged but moves the submatrix off its degenerate locus. The top
    coefficient is the fiber at t = infinity and is re-checked against a
    direct discriminant evaluation of f1.
    """
    p = e.p
    if p <= 109:
        raise BadPrime("pencil interpolation needs p > 109")
    f0, f1 = query.f0, query.f1
    bound = _disc_degree(f0.n_plus_1, f0.degree)
    # fit on a margin above the degree bound, then re-check on held-out nodes;
    # small primes near the bound cannot supply the full margin, so shrink the
    # fit toward the bound before giving up
    xs: list[int] = []
    ys: list[int] = []
    for t_sub in _unimodular_substitutions(f0.field, f0.n_plus_1):
        xs, ys = _pencil_sample_pass(
            act(t_sub, f0), act(t_sub, f1), e, _PENCIL_FIT_SAMPLES
        )
        if len(xs) >= _PENCIL_FIT_SAMPLES:
            break
    if len(xs) < bound + 1:
        raise InterpolationDegenerate(
            f"only {len(xs)} usable pencil samples mod {p}"
        )
    n_fit = max(bound + 1, min(_PENCIL_FIT_SAMPLES, len(xs) - _HELD_OUT))
    poly = gfp.newton_interpolate(
        np.array(xs[:n_fit], dtype=np.int64), np.array(ys[:n_fit], dtype=np.int64), p
    )
    held_x = np.array(xs[n_fit : n_fit + _HELD_OUT], dtype=np.int64)
    if len(held_x):
        held_y = np.array(ys[n_fit : n_fit + _HELD_OUT], dtype=np.int64)
        if (gfp.polyval_vec(poly, held_x, p) != held_y).any():
            raise InterpolationDegenerate(
                "pencil interpolation failed its held-out re-check"
            )
    if len(poly) > bound + 1 and poly[bound + 1 :].any():
        raise InterpolationDegenerate(
            "fitted polynomial exceeds the discriminant degree bound"
        )
    out = np.zeros(bound + 1, dtype=np.int64)
    cut = min(len(poly), bound + 1)
    out[:cut] = poly[:cut]
    infinity = macaulay_disc_mod_p(f1, e)
    if int(out[bound]) != infinity:
        raise InterpolationDegenerate(
            "top coefficient disagrees with the direct t=infinity fiber"
        )
    return out


# -- projective equivalence ------------------------------------------------------


def forms_proportional(f: Form, g: Form) -> bool:
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    fld = cyclotomic_field(lcm(f.field.N, g.field.N))
    a, b = f.lift_to(fld), g.lift_to(fld)
    if set(a.coeffs) != set(b.coeffs):
        return False
    idx = next(iter(a.coeffs))
    ratio = a.coeffs[idx] / b.coeffs[idx]
    return all(c == ratio * b.coeffs[i] for i, c in a.coeffs.items())


def verify_equivalence_witness(t: ExactMatrix, f: Form, g: Form) -> bool:
    """True iff substituting the witness matrix carries f onto a scalar
    multiple of g."""
    if not determinant(t):
        raise NonInvertible("equivalence witness must be invertible")
    fld = cyclotomic_field(lcm(t.field.N, f.field.N, g.field.N))
    image = act(t.lift_to(fld), f.lift_to(fld))
    return forms_proportional(image, g.lift_to(fld))


# -- serialization ----------------------------------------------------------------


def verdict_to_json(v: SmoothnessVerdict) -> dict:
    cert = None
    if v.status == "smooth":
        cert = {"kind": "discriminant_nonzero", "prime": v.prime, "disc": v.disc}
        primes = [v.prime]
    elif v.status == "singular":
        if v.witness is not None:
            cert = {
                "kind": "monomial_ideal",
                "linear": [f"x{i}" for i in v.witness.linear],
                "squared": [f"x{i}" for i in v.witness.squared],
            }
        else:
            cert = {
                "kind": "singular_point",
                "point": [scalar_to_json(c) for c in v.point],
            }
        primes = []
    else:
        primes = list(v.primes)
    return {"verdict": v.status, "certificate": cert, "primes": primes}
