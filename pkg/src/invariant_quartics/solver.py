"""Maximal invariant subspaces of degree-d forms under a finite matrix group.

If a nonzero form satisfies act(A, f) = k f for a generator A with
A^sigma = tau E, then k^sigma = tau^d.  Each generator therefore admits
finitely many character values, all roots of unity of the (possibly
extended) coefficient field; stacking the shifted substitution operators
for one character tuple and taking the exact kernel yields a maximal
invariant subspace, and ranging over all tuples yields every one of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm

import numpy as np

from .cyclotomic import (
    CyclotomicField,
    CycScalar,
    cyclotomic_field,
    find_prime_embedding,
    multiplicative_order,
    scalar_to_json,
)
from .errors import ConductorExtensionFailed, ShapeMismatch, ZeroForm
from .forms import (
    Form,
    act,
    form_to_expr,
    monomial_basis,
    operator_matrix_B,
    projective_invariance_factor,
)
from .gfp import rank_mod
from .linalg import ExactMatrix, kernel_basis, rank, reduce_matrix_mod_p
from .registry import GroupSpec

__all__ = [
    "CharacterTuple",
    "InvariantSubspace",
    "working_conductor",
    "character_candidates",
    "invariant_subspaces",
    "contains_form",
    "is_group_invariant",
    "subspaces_to_json",
]


@dataclass(frozen=True)
class CharacterTuple:
    """One candidate eigenvalue per generator, in generator order."""

    components: tuple[CycScalar, ...]

    def sort_key(self):
        return tuple(c.coefficients() for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class InvariantSubspace:
    character: CharacterTuple
    basis: tuple[Form, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def degree(self) -> int:
        return self.basis[0].degree

    @property
    def field(self) -> CyclotomicField:
        return self.basis[0].field


def working_conductor(spec: GroupSpec) -> int:
    """Smallest conductor containing every candidate character value.

    A candidate k for generator A satisfies k^sigma = tau^d, so its order
    divides sigma * ord(tau); extending the group conductor by that factor
    for each generator is enough.
    """
    m = spec.conductor
    # roots of unity in Q(zeta_N) have order dividing lcm(2, N)
    cap = lcm(2, spec.conductor)
    for g in spec.generators:
        r = multiplicative_order(g.tau, cap)
        if r is None:
            raise ConductorExtensionFailed(
                f"generator {g.name} of {spec.name} rescales by a non-root of "
                "unity; its character values lie in no cyclotomic field"
            )
        m = lcm(m, g.projective_order * r)
    return m


def character_candidates(
    spec: GroupSpec, degree: int, *, coarse: bool = False
) -> list[CharacterTuple]:
    """All character tuples a nonzero eigenform could realize.

    The default set is cut out by k_i^{sigma_i} = tau_i^degree, which is
    exact for arbitrary invertible generators.  `coarse` keeps only the
    classical constraint k_i^{kappa sigma_i} = 1 (valid when every
    generator is rescaled to determinant one); it is a superset whenever
    the tau_i^degree are trivial and exists for cross-checking.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    m = working_conductor(spec)
    if coarse:
        if degree == 0:
            raise ValueError("coarse candidate set is undefined for degree 0")
        nvars = spec.generators[0].matrix.ncols
        kappa = lcm(nvars, degree) // degree
        for g in spec.generators:
            m = lcm(m, kappa * g.projective_order)
    field = cyclotomic_field(m)
    per_gen: list[list[CycScalar]] = []
    for g in spec.generators:
        sigma = g.projective_order
        if coarse:
            e = kappa * sigma
            cand = [field.zeta_pow(j) for j in range(m) if (j * e) % m == 0]
        else:
            target = g.tau.lift_to(field) ** degree
            t = next(j for j in range(m) if field.zeta_pow(j) == target)
            cand = [
                field.zeta_pow(j) for j in range(m) if (j * sigma - t) % m == 0
            ]
        per_gen.append(cand)
    tuples = [CharacterTuple(combo) for combo in itertools.product(*per_gen)]
    tuples.sort(key=CharacterTuple.sort_key)
    return tuples


def _shifted_stack(
    act_mats: list[ExactMatrix], character: CharacterTuple
) -> ExactMatrix:
    field = act_mats[0].field
    rows: list[list[CycScalar]] = []
    for am, k in zip(act_mats, character):
        for i, row in enumerate(am.rows):
            shifted = list(row)
            shifted[i] = shifted[i] - k
            rows.append(shifted)
    return ExactMatrix(field, rows)


def invariant_subspaces(
    spec: GroupSpec, degree: int, *, coarse: bool = False
) -> list[InvariantSubspace]:
    """Every maximal invariant subspace of degree-`degree` forms, sorted by
    character (lexicographic in scalar coefficient vectors).

    An empty result certifies that only the zero form satisfies
    act(A, f) = k f for all generators simultaneously.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    nvars = spec.generators[0].matrix.ncols
    if degree == 0:
        field = spec.field
        constants = Form.from_coeff_vector(field, monomial_basis(nvars, 0), [1])
        trivial = CharacterTuple((field.one,) * len(spec.generators))
        return [InvariantSubspace(trivial, (constants,))]

    candidates = character_candidates(spec, degree, coarse=coarse)
    field = candidates[0].components[0].field if candidates else spec.field
    basis = monomial_basis(nvars, degree)
    dim = len(basis)
    mats = [g.matrix.lift_to(field) for g in spec.generators]
    act_mats = [operator_matrix_B(a, field.zero, degree) for a in mats]

    # one rank check mod p rejects almost every candidate before exact work;
    # sound because reduction can only lower the rank
    dens = {e.den for am in act_mats for row in am.rows for e in row}
    emb = find_prime_embedding(field.N, avoid=sorted(dens))
    act_mod = [reduce_matrix_mod_p(am, emb) for am in act_mats]
    eye = np.eye(dim, dtype=np.int64)

    out: list[InvariantSubspace] = []
    for cand in candidates:
        shifts = [emb.reduce_scalar(k) for k in cand]
        stacked_mod = np.concatenate(
            [(am - kp * eye) % emb.p for am, kp in zip(act_mod, shifts)]
        )
        if rank_mod(stacked_mod, emb.p) == dim:
            continue
        kern = kernel_basis(_shifted_stack(act_mats, cand))
        if not kern:
            continue
        forms = tuple(Form.from_coeff_vector(field, basis, v) for v in kern)
        for f in forms:
            for a, k in zip(mats, cand):
                if act(a, f) != f.scale(k):
                    raise AssertionError(
                        f"kernel form fails eigen check for {spec.name}"
                    )
        out.append(InvariantSubspace(cand, forms))
    out.sort(key=lambda s: s.character.sort_key())
    return out


def _common_field(f: Form, spec_or_form) -> CyclotomicField:
    other_n = (
        spec_or_form.conductor
        if isinstance(spec_or_form, GroupSpec)
        else spec_or_form.field.N
    )
    return cyclotomic_field(lcm(f.field.N, other_n))


def contains_form(sub: InvariantSubspace, f: Form) -> bool:
    """Exact span membership test against the subspace basis."""
    if f.is_zero():
        return True
    ref = sub.basis[0]
    if f.degree != ref.degree or f.n_plus_1 != ref.n_plus_1:
        raise ShapeMismatch("form does not live in the subspace's ambient space")
    field = cyclotomic_field(lcm(f.field.N, ref.field.N))
    rows = [g.lift_to(field).coeff_vector() for g in sub.basis]
    base = ExactMatrix(field, rows)
    extended = ExactMatrix(field, rows + [f.lift_to(field).coeff_vector()])
    return rank(extended) == rank(base)


def is_group_invariant(spec: GroupSpec, f: Form) -> bool:
    """True iff every generator maps f to a scalar multiple of itself."""
    if f.is_zero():
        raise ZeroForm("invariance of the zero form is vacuous")
    field = _common_field(f, spec)
    lifted = f.lift_to(field)
    for g in spec.generators:
        if projective_invariance_factor(g.matrix.lift_to(field), lifted) is None:
            return False
    return True


def subspaces_to_json(
    spec: GroupSpec, degree: int, subs: list[InvariantSubspace]
) -> dict:
    return {
        "group": spec.name,
        "degree": degree,
        "subspaces": [
            {
                "character": [scalar_to_json(k) for k in sub.character],
                "dimension": sub.dimension,
                "basis": [form_to_expr(f) for f in sub.basis],
            }
            for sub in subs
        ],
    }
