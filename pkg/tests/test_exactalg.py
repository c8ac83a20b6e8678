from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import laurent, positive_points
from lvint.exactalg import (
    EvaluationDomainError,
    LaurentPolynomial as LP,
    VariableCountError,
    evaluate_float,
    exact_rank,
)
from lvint.integrals import K_poly
from lvint.poisson import SystemSpec


def x(i, n=3):
    return LP.variable(n, i)


def test_additive_inverse_is_empty():
    p = x(1) + (-x(1))
    assert p.is_zero() and p.terms == ()


def test_doubling():
    assert (x(1) * x(2) + x(1) * x(2)).terms == (((1, 1, 0), Fraction(2)),)


def test_laurent_sum_keeps_both_exponents():
    p = x(1) * x(3) ** -1 + x(2)
    assert {e for e, _ in p.terms} == {(1, 0, -1), (0, 1, 0)}


def test_products():
    assert (x(1) + x(2)) * (x(1) - x(2)) == x(1) ** 2 - x(2) ** 2
    assert (x(1) * x(2) ** -1) * (x(2) * x(1) ** -1) == LP.one(3)
    sq = (x(1) + x(2) + x(3)) ** 2
    assert sorted(c for _, c in sq.terms) == [1, 1, 1, 2, 2, 2]


def test_derivatives():
    assert (x(1) ** 2 * x(2)).partial_derivative(1) == 2 * x(1) * x(2)
    assert (x(1) * x(3) ** -1).partial_derivative(3) == -x(1) * x(3) ** -2
    K1 = K_poly(SystemSpec(5, 1), 1)
    assert K1.partial_derivative(2).evaluate([1] * 5) == 1


def test_evaluation_examples():
    c = LP.monomial((1, 1, -1, 1, 1))
    assert c.evaluate([1] * 5) == 1
    assert (x(1, 2) - x(2, 2)).evaluate([Fraction(3, 2)] * 2) == 0
    with pytest.raises(EvaluationDomainError) as err:
        (x(1, 2) * x(2, 2) ** -1).evaluate([1, 0])
    assert err.value.var_index == 2
    with pytest.raises(EvaluationDomainError):
        evaluate_float(x(1, 2) * x(2, 2) ** -1, [1.0, 0.0])


def test_mismatched_variable_counts():
    with pytest.raises(VariableCountError):
        x(1, 2) + x(1, 3)
    with pytest.raises(VariableCountError):
        x(1).evaluate([1, 2])


def test_floats_are_rejected_as_coefficients():
    with pytest.raises(TypeError):
        LP(1, {(1,): 0.5})


def test_negative_power_of_sum_rejected():
    with pytest.raises(ValueError):
        (x(1) + x(2)) ** -1


def test_text_syntax():
    p = LP.parse("3/2*x1^2*x3^-1 - x2 + 1", 3)
    assert p.coefficient((2, 0, -1)) == Fraction(3, 2)
    assert LP.parse(str(p), 3) == p
    assert str(LP.zero(2)) == "0"


def test_substitute_zero_refuses_negative_exponents():
    with pytest.raises(EvaluationDomainError):
        (x(1) * x(2) ** -1).substitute_zero([2])
    assert (x(1) * x(2) + x(3)).substitute_zero([2]) == LP.variable(2, 2)


# ring axioms


@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LP.zero(3)
    assert a * LP.one(3) == a


@given(laurent(), laurent(), st.integers(1, 3))
def test_leibniz(a, b, i):
    d = lambda p: p.partial_derivative(i)
    assert d(a * b) == d(a) * b + a * d(b)


@given(laurent(), laurent(), positive_points())
def test_evaluation_is_a_ring_morphism(a, b, pt):
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)


@given(laurent(), positive_points())
def test_float_evaluation_matches_exact(a, pt):
    exact = float(a.evaluate(pt))
    assert a.evaluate_float([float(v) for v in pt]) == pytest.approx(exact, rel=1e-12, abs=1e-12)


@given(laurent())
def test_text_and_record_round_trips(a):
    assert LP.parse(str(a), 3) == a
    assert LP.from_records(3, a.to_records()) == a
    assert hash(LP.parse(str(a), 3)) == hash(a)


def _gauss_rank(rows):
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    for col in range(len(m[0]) if m else 0):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@settings(max_examples=200)
@given(
    st.integers(1, 5).flatmap(
        lambda cols: st.lists(
            st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=cols, max_size=cols),
            min_size=1,
            max_size=5,
        )
    )
)
def test_bareiss_rank_matches_gaussian_oracle(rows):
    assert exact_rank(rows) == _gauss_rank(rows)
