from fractions import Fraction

from hypothesis import strategies as st

from lvint.exactalg import LaurentPolynomial

NV = 3


def laurent(nvars=NV, max_terms=4, max_exp=2):
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * nvars)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: LaurentPolynomial(nvars, d))


def positive_points(nvars=NV):
    return st.lists(
        st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5), min_size=nvars, max_size=nvars
    )
