from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from invariant_quartics import gfp
from invariant_quartics.cyclotomic import (
    PrimeEmbedding,
    cyclotomic_field,
    find_prime_embedding,
    prime_embeddings,
)
from invariant_quartics.errors import (
    BadPrime,
    NonInvertible,
    NotAPencil,
    ShapeMismatch,
    ZeroForm,
    ZeroPoint,
)
from invariant_quartics.expressions import parse_form, parse_scalar
from invariant_quartics.forms import Form, act, monomial_basis
from invariant_quartics.linalg import ExactMatrix
from invariant_quartics.registry import lookup
from invariant_quartics.smoothness import (
    PencilQuery,
    VerdictPolicy,
    macaulay_disc_mod_p,
    macaulay_system,
    msc_test,
    pencil_disc_poly_mod_p,
    singular_point_check,
    smoothness_verdict,
    verdict_to_json,
    verify_equivalence_witness,
)

Q1 = cyclotomic_field(1)

FERMAT = "x0^4 + x1^4 + x2^4 + x3^4"
H12 = "x0^4 + x1^4 + x2^4 + x3^4 + 12*x0*x1*x2*x3"


def F(expr: str, conductor: int = 1) -> Form:
    return parse_form(expr, conductor, degree=None)


def phi_shift(n_plus_1: int = 4, degree: int = 4) -> Form:
    basis = monomial_basis(n_plus_1, degree)
    coeffs = {}
    for i, e in enumerate(basis.exponents):
        if max(e) == degree:
            coeffs[i] = Q1.rational(Fraction(1, degree))
    return Form(Q1, basis, coeffs)


# -- monomial-ideal certificates ------------------------------------------------


def test_msc_squared_quadric():
    w = msc_test(F("(x1*x2 - x0*x3)^2"))
    assert w is not None
    # the witness must actually cover the support
    f = F("(x1*x2 - x0*x3)^2")
    for e in f.support():
        in_linear = any(e[v] for v in w.linear)
        in_squared = sum(e[v] for v in w.squared) >= 2
        assert in_linear or in_squared


def test_msc_double_line():
    w = msc_test(F("x0^2*x3^2"))
    assert w is not None


def test_msc_cone():
    # no x0 anywhere: vertex at (1,0,0,0)
    w = msc_test(F("x1^4 + x2^4 + x3^4"))
    assert w is not None
    assert 0 not in w.linear and 0 not in w.squared


def test_msc_none_for_smooth_members():
    assert msc_test(F(FERMAT)) is None
    assert msc_test(F(H12)) is None


def test_msc_implies_zero_discriminant():
    for expr in ("(x1*x2 - x0*x3)^2", "x1^4 + x2^4 + x3^4", "x0^2*x3^2"):
        f = F(expr)
        assert msc_test(f) is not None
        for e, _ in zip(prime_embeddings(1), range(2)):
            assert macaulay_disc_mod_p(f, e) == 0


# -- exact singular points --------------------------------------------------------


def test_singular_point_check_cone_vertex():
    f = F("x1^4 + x2^4 + x3^4")
    assert singular_point_check(f, [1, 0, 0, 0])
    assert not singular_point_check(f, [0, 1, 0, 0])


def test_singular_point_check_rejects_zero_point():
    with pytest.raises(ZeroPoint):
        singular_point_check(F(FERMAT), [0, 0, 0, 0])


def test_singular_point_check_shape():
    with pytest.raises(ShapeMismatch):
        singular_point_check(F(FERMAT), [1, 0, 0])


def test_singular_point_check_with_scalars():
    fld = cyclotomic_field(8)
    f = F("x0^2*x1^2 - x2^4", 8)
    # gradient vanishes on the line x0 = x2 = 0? partials:
    # 2 x0 x1^2, 2 x0^2 x1, -4 x2^3 -> at (0, t, 0, u) all vanish
    assert singular_point_check(f, [fld.zero, fld.one, fld.zero, fld.zeta])


# -- the Macaulay discriminant ----------------------------------------------------


def test_macaulay_dimensions():
    sys = macaulay_system(4, 4)
    assert sys.size == 220
    assert len(sys.non_reduced) == 112


def test_disc_normalized_on_shifted_fermat():
    phi = phi_shift()
    for e, _ in zip(prime_embeddings(1), range(3)):
        assert macaulay_disc_mod_p(phi, e) == 1


def test_disc_scaling_homogeneity():
    f = F(FERMAT)
    e = find_prime_embedding(1)
    base = macaulay_disc_mod_p(f, e)
    for c in (2, 3, 5):
        scaled = f.scale(Q1.rational(c))
        want = base * pow(c, 108, e.p) % e.p
        assert macaulay_disc_mod_p(scaled, e) == want


def test_disc_transformation_rule():
    # Disc(f o T) = det(T)^108 * Disc(f) mod p for invertible T
    rng = random.Random(7)
    f = F(H12)
    e = find_prime_embedding(1)
    base = macaulay_disc_mod_p(f, e)
    for _ in range(3):
        while True:
            rows = [
                [Q1.rational(rng.randint(-2, 2)) for _ in range(4)] for _ in range(4)
            ]
            t = ExactMatrix(Q1, rows)
            from invariant_quartics.linalg import determinant

            d = determinant(t)
            if d:
                break
        g = act(t, f)
        dm = e.reduce_scalar(d)
        assert macaulay_disc_mod_p(g, e) == base * pow(dm, 108, e.p) % e.p


def test_disc_rejects_zero_form():
    z = Form.zero(Q1, monomial_basis(4, 4))
    with pytest.raises(ZeroForm):
        e = find_prime_embedding(1)
        macaulay_disc_mod_p(z, e)


def test_bad_prime_congruence():
    with pytest.raises(BadPrime):
        PrimeEmbedding(8, 11, 3)
    with pytest.raises(BadPrime):
        PrimeEmbedding(8, 113, 1)  # image of order 1, not 8


def test_disc_rejects_prime_dividing_degree():
    f = F("x0^2 + x1^2 + x2^2 + x3^2")
    with pytest.raises(BadPrime):
        macaulay_disc_mod_p(f, PrimeEmbedding(1, 2, 1))


# -- verdicts ---------------------------------------------------------------------


def test_verdict_smooth_fermat():
    v = smoothness_verdict(F(FERMAT))
    assert v.is_smooth()
    assert v.disc != 0
    assert v.prime is not None and v.prime > 109


def test_verdict_smooth_mixed_term():
    v = smoothness_verdict(F(H12))
    assert v.is_smooth()


def test_verdict_singular_with_monomial_witness():
    v = smoothness_verdict(F("(x1*x2 - x0*x3)^2"))
    assert v.is_singular()
    assert v.witness is not None
    payload = verdict_to_json(v)
    assert payload["certificate"]["kind"] == "monomial_ideal"


def test_verdict_singular_with_point():
    # node at (1,1,1,1); all four pure powers present, so no monomial-ideal
    # clause can cover the support
    f = F("x0^4 + x1^4 + x2^4 + x3^4 - 4*x0*x1*x2*x3")
    assert msc_test(f) is None
    assert singular_point_check(f, [1, 1, 1, 1])
    v = smoothness_verdict(f)
    assert v.status == "singular"
    assert v.point is not None
    assert singular_point_check(f, v.point)


def test_verdict_group_aware_point_search():
    # the icosahedral family's distinguished members are singular; a generic
    # member of the same pencil is smooth
    import json
    from pathlib import Path

    cat = json.loads(
        (
            Path(__file__).resolve().parents[1]
            / "src/invariant_quartics/data/catalog.json"
        ).read_text()
    )
    entry = next(g for g in cat["groups"] if g["group"] == "B")
    g0 = next(m for m in entry["members"] if m["label"] == "g0")
    f = parse_form(g0["expr"], g0["conductor"], degree=4)
    spec = lookup("B")
    v = smoothness_verdict(f, VerdictPolicy(primes_to_try=3, group=spec))
    assert v.status in ("singular", "singular_probable")
    generic = smoothness_verdict(
        f + parse_form(
            next(m for m in entry["members"] if m["label"] == "g1")["expr"],
            g0["conductor"],
            degree=4,
        ),
        VerdictPolicy(primes_to_try=2),
    )
    assert generic.is_smooth()


def test_verdict_zero_form():
    z = Form.zero(Q1, monomial_basis(4, 4))
    with pytest.raises(ZeroForm):
        smoothness_verdict(z)


def test_verdict_json_round_trip_fields():
    v = smoothness_verdict(F(FERMAT))
    payload = verdict_to_json(v)
    assert payload["verdict"] == "smooth"
    assert payload["certificate"]["prime"] == v.prime
    assert payload["primes"] == [v.prime]


def test_smooth_verdict_consistent_across_primes():
    # soundness spot check: a second prime agrees with the first
    f = F(FERMAT)
    disc = []
    for e, _ in zip(prime_embeddings(1), range(2)):
        disc.append(macaulay_disc_mod_p(f, e))
    assert all(d != 0 for d in disc)


# -- pencils ---------------------------------------------------------------------


def klein_pencil() -> PencilQuery:
    f0 = F("x0^4")
    f1 = F("x2*x1^3 + x3^3*x1 + x2^3*x3")
    return PencilQuery(f0, f1)


def test_pencil_axes_only_discriminant():
    q = klein_pencil()
    for e, _ in zip(prime_embeddings(1), range(2)):
        poly = pencil_disc_poly_mod_p(q, e)
        support = {i for i, c in enumerate(poly) if c}
        assert support == {81}
        assert gfp.poly_roots(poly, e.p) == [0]


def test_pencil_value_matches_direct_disc():
    q = klein_pencil()
    e = find_prime_embedding(1)
    poly = pencil_disc_poly_mod_p(q, e)
    fld = q.f0.field
    for t in (1, 2, 5):
        member = q.f0.lift_to(fld) + q.f1.lift_to(fld).scale(fld.rational(t))
        want = macaulay_disc_mod_p(member, e)
        got = int(gfp.polyval_vec(poly, np.array([t], dtype=np.int64), e.p)[0])
        assert got == want


def test_pencil_rejects_dependent_members():
    f0 = F(FERMAT)
    with pytest.raises(NotAPencil):
        PencilQuery(f0, f0.scale(Q1.rational(2)))
    z = Form.zero(Q1, monomial_basis(4, 4))
    with pytest.raises(NotAPencil):
        PencilQuery(f0, z)


def test_pencil_quintic_factor():
    # the A5-symmetric pencil: its degree-108 discriminant is divisible by
    # the quintic with the five singular parameters
    spec = lookup("B")
    from invariant_quartics.solver import invariant_subspaces

    subs = invariant_subspaces(spec, 4)
    q = PencilQuery(subs[0].basis[0], subs[0].basis[1])
    n = q.f0.field.N
    e = find_prime_embedding(n)
    poly = pencil_disc_poly_mod_p(q, e)
    roots = gfp.poly_roots(poly, e.p)
    assert len(roots) in (3, 4)  # five fibers, one of them at infinity
    assert int(poly[-1]) == 0  # [0:1] is singular


# -- equivalence witnesses ---------------------------------------------------------


def test_equivalence_witness_sign_flip():
    t = ExactMatrix(
        Q1,
        [
            [Q1.one, Q1.zero, Q1.zero, Q1.zero],
            [Q1.zero, Q1.one, Q1.zero, Q1.zero],
            [Q1.zero, Q1.zero, Q1.one, Q1.zero],
            [Q1.zero, Q1.zero, Q1.zero, -Q1.one],
        ],
    )
    f = F(H12)
    g = F("x0^4 + x1^4 + x2^4 + x3^4 - 12*x0*x1*x2*x3")
    assert verify_equivalence_witness(t, f, g)
    assert not verify_equivalence_witness(t, f, F(FERMAT))


def test_equivalence_witness_scalar_tolerance():
    # proportional images count: scaling the target must not matter
    t = ExactMatrix.identity(Q1, 4)
    f = F(FERMAT)
    g = f.scale(Q1.rational(7))
    assert verify_equivalence_witness(t, f, g)


def test_equivalence_witness_permutation():
    rng = random.Random(11)
    perm = [0, 1, 2, 3]
    rng.shuffle(perm)
    rows = [
        [Q1.one if j == perm[i] else Q1.zero for j in range(4)] for i in range(4)
    ]
    t = ExactMatrix(Q1, rows)
    assert verify_equivalence_witness(t, F(FERMAT), F(FERMAT))


def test_equivalence_witness_rejects_singular_matrix():
    rows = [[Q1.zero] * 4 for _ in range(4)]
    t = ExactMatrix(Q1, rows)
    with pytest.raises(NonInvertible):
        verify_equivalence_witness(t, F(FERMAT), F(FERMAT))
