from __future__ import annotations

import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tiltstab.exactnum import (
    DomainError,
    MixedRadicalError,
    Polynomial,
    QuadraticNumber,
    continued_fraction_terms,
    convergents_from_terms,
    dirichlet_convergents,
    format_quadratic,
    lagrange_interpolate,
    parse_scalar,
    quad_floor,
    quad_sign,
    quad_sqrt,
    simplify,
    within_dirichlet_bound,
)

from conftest import fractions

getcontext().prec = 60
RADICANDS = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


def Q(a, b, d):
    return QuadraticNumber(Fraction(a), Fraction(b), d)


def dec(x) -> Decimal:
    """High-precision decimal oracle, independent of the exact sign logic."""
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    return dec(x.a) + dec(x.b) * Decimal(x.d).sqrt()


quads = st.builds(Q, fractions(), fractions(nonzero=True), RADICANDS)


def test_radicand_is_made_squarefree():
    x = Q(1, 1, 8)
    assert (x.a, x.b, x.d) == (1, 2, 2)


def test_rational_collapse_and_hash():
    assert simplify(Q(3, 0, 2)) == Fraction(3)
    assert isinstance(simplify(Q(3, 0, 2)), Fraction)
    assert Q(3, 0, 5) == Fraction(3)
    assert hash(Q(3, 0, 5)) == hash(Fraction(3))


def test_mixed_radicals_raise():
    with pytest.raises(MixedRadicalError):
        Q(0, 1, 2) + Q(0, 1, 3)


def test_sqrt_of_negative_is_domain_error():
    with pytest.raises(DomainError):
        quad_sqrt(Fraction(-1))


def test_sqrt_values():
    assert quad_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert quad_sqrt(Fraction(2)) == Q(0, 1, 2)
    assert quad_sqrt(Fraction(1, 8)) == Q(0, Fraction(1, 4), 2)


@given(quads, quads.filter(lambda q: True))
def test_field_operations_match_decimal_oracle(x, y):
    y = Q(y.a, y.b, x.d)
    for got, want in (
        (x + y, dec(x) + dec(y)),
        (x - y, dec(x) - dec(y)),
        (x * y, dec(x) * dec(y)),
    ):
        assert abs(dec(simplify(got) if isinstance(simplify(got), Fraction) else got) - want) < Decimal("1e-40")
    q = x / y
    q = q if isinstance(q, QuadraticNumber) else QuadraticNumber.coerce(q)
    assert abs(dec(q) - dec(x) / dec(y)) < Decimal("1e-40")


@given(quads)
def test_sign_and_floor_match_oracle(x):
    v = dec(x)
    assert quad_sign(x) == (v > 0) - (v < 0)
    assert quad_floor(x) == math.floor(v)


@given(quads)
def test_inverse_and_norm(x):
    assert x * x.inverse() == 1
    assert x.norm() == x.a**2 - x.b**2 * x.d
    assert x.conjugate().conjugate() == x


@given(quads, quads)
def test_ordering_is_total_and_consistent(x, y):
    y = Q(y.a, y.b, x.d)
    assert (x < y) == (dec(x) < dec(y))
    assert (x == y) == (x.a == y.a and x.b == y.b)


@given(st.one_of(fractions(), quads))
def test_format_parse_round_trip(x):
    text = format_quadratic(x) if isinstance(x, QuadraticNumber) else str(x)
    assert parse_scalar(text) == x


@pytest.mark.parametrize(
    "text, value",
    [
        ("3/4", Fraction(3, 4)),
        ("-2", Fraction(-2)),
        ("sqrt(2)", Q(0, 1, 2)),
        ("-sqrt(2)", Q(0, -1, 2)),
        ("1/2+1/2*sqrt(5)", Q(Fraction(1, 2), Fraction(1, 2), 5)),
        ("1 - 3*sqrt(7)", Q(1, -3, 7)),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "x", "1/0", "sqrt(-2)", "1//2", "sqrt(2)+sqrt(3)"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


# continued fractions


def test_sqrt2_terms():
    terms, done = continued_fraction_terms(Q(0, 1, 2), 6)
    assert terms == [1, 2, 2, 2, 2, 2] and not done


def test_golden_ratio_terms_and_convergents():
    phi = Q(Fraction(1, 2), Fraction(1, 2), 5)
    terms, _ = continued_fraction_terms(phi, 8)
    assert terms == [1] * 8
    assert convergents_from_terms(terms)[:5] == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]


def test_negative_irrational_terms():
    terms, _ = continued_fraction_terms(Q(0, -1, 2), 4)
    # -sqrt(2) = -2 + (2 - sqrt(2)) = [-2; 1, 1, 2, ...]
    assert terms == [-2, 1, 1, 2]


def test_rational_input_terminates():
    assert dirichlet_convergents(Fraction(7, 3), 10) == ([(7, 3)], True)


@given(quads, st.integers(1, 12))
def test_convergents_satisfy_dirichlet(x, n):
    pairs, terminated = dirichlet_convergents(x, n)
    assert not terminated and len(pairs) == n
    for p, q in pairs:
        assert math.gcd(p, q) == 1
        assert within_dirichlet_bound(x, p, q)
        assert abs(dec(x) - Decimal(p) / Decimal(q)) < Decimal(1) / Decimal(q * q)
    qs = [q for _, q in pairs]
    # q_0 = 1 may repeat once (q_1 = 1 when the first partial quotient is 1)
    assert all(a <= b for a, b in zip(qs, qs[1:]))
    assert all(a < b for a, b in zip(qs[1:], qs[2:]))


def test_bound_rejects_poor_approximation():
    assert not within_dirichlet_bound(Q(0, 1, 2), 3, 1)


# polynomials


def test_polynomial_arithmetic():
    m = Polynomial.variable("m")
    p = (m + 1) ** 2
    assert p.coefficients == {0: 1, 1: 2, 2: 1}
    assert p(Fraction(2)) == 9
    assert (p - p).is_zero()
    assert str(Fraction(1, 2) * m**6 + Fraction(3, 2) * m**4 + m**2) == "1/2*m^6 + 3/2*m^4 + m^2"


def test_polynomial_variable_mismatch():
    with pytest.raises(ValueError):
        Polynomial.variable("m") + Polynomial.variable("alpha")


@given(st.lists(fractions(), min_size=1, max_size=6))
def test_lagrange_recovers_polynomial(coeffs):
    p = Polynomial(dict(enumerate(coeffs)), "m")
    pts = [(Fraction(i), p(Fraction(i))) for i in range(len(coeffs))]
    assert lagrange_interpolate(pts) == p
