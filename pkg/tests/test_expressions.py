from __future__ import annotations

import pytest

from invariant_quartics.cyclotomic import CyclotomicField, sqrt_int
from invariant_quartics.errors import NotInField, ParseError
from invariant_quartics.expressions import parse_form, parse_scalar, tokenize


def test_tokenize_kinds():
    toks = tokenize('group 13deg "a b" { 1/2 } # trailing comment\nx')
    kinds = [(t.kind, t.value) for t in toks]
    assert ("NAME", "group") in kinds
    assert ("NAME", "13deg") in kinds  # alnum run with letters is a NAME
    assert ("STRING", "a b") in kinds
    assert ("INT", 1) in kinds
    assert kinds[-1] == ("EOF", None)
    assert ("NAME", "x") in kinds  # comment skipped up to newline


def test_tokenize_position_tracking():
    with pytest.raises(ParseError) as err:
        tokenize("a\n  ?")
    assert err.value.line == 2
    assert err.value.col == 3


def test_scalar_expressions():
    f = CyclotomicField(8)
    assert parse_scalar("1/2 + 3/4", 8) == f.rational(5) / 4
    assert parse_scalar("z^2", 8) == f.zeta_pow(2)
    assert parse_scalar("sqrt(2)*sqrt(2)", 8) == f.rational(2)
    assert parse_scalar("2^10", 8) == f.rational(1024)
    assert parse_scalar("-(z + 1)", 8) == -(f.zeta + 1)
    assert parse_scalar("(1+z)^2", 8) == (f.one + f.zeta) ** 2


def test_unary_minus_binds_outside_power():
    # unary minus binds looser than the exponent
    f = CyclotomicField(8)
    assert parse_scalar("-z^2", 8) == -f.zeta_pow(2)
    assert parse_scalar("-1*z^2", 8) == -f.zeta_pow(2)
    assert parse_scalar("(-z)^2", 8) == f.zeta_pow(2)
    assert parse_scalar("-2^2", 8) == f.rational(-4)


def test_division_only_by_constants():
    with pytest.raises(ParseError):
        parse_form("x0/x1", 8)
    with pytest.raises(ParseError):
        parse_scalar("1/0", 8)
    assert parse_form("x0^4/4", 8).coefficient((4, 0, 0, 0)).as_fraction() == 0.25


def test_sqrt_not_in_field():
    with pytest.raises(ParseError):
        parse_scalar("sqrt(3)", 8)


def test_form_parsing_homogeneity():
    q = parse_form("x0^2*x1^2 - x2*x3^3", 8)
    assert q.degree == 4
    with pytest.raises(ParseError):
        parse_form("x0 + x1^2", 8)
    with pytest.raises(ParseError):
        parse_form("x0^2", 8, degree=4)
    with pytest.raises(ParseError):
        parse_form("x9", 8)


def test_form_parsing_collects_terms():
    q = parse_form("x0*x1 + x1*x0", 8)
    assert q.coefficient((1, 1, 0, 0)).as_fraction() == 2
    assert parse_form("x0*x1 - x1*x0", 8, degree=2).is_zero()


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_scalar("1 +", 8)
    assert err.value.line == 1
    with pytest.raises(ParseError) as err2:
        parse_scalar("q", 8)
    assert "unknown name" in str(err2.value)


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_scalar("1 2", 8)


def test_nested_parens_and_mixed():
    f = CyclotomicField(120)
    nu_plus = parse_scalar("(sqrt(3)+z^30*sqrt(5))/(2*sqrt(2))", 120)
    nu_minus = parse_scalar("(sqrt(3)-z^30*sqrt(5))/(2*sqrt(2))", 120)
    assert nu_plus * nu_minus == f.one
