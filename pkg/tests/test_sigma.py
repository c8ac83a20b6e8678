from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lvint.integrals import enumerate_S
from lvint.poisson import SystemSpec
from lvint.sigma import (
    K_matrix,
    difference_binomial,
    difference_product,
    hat_S,
    plateau,
    rho_lift,
    sigma,
    sigma_identity_checks,
    sigma_table,
)


def test_sigma_examples():
    assert sigma(3, 2, 1) == 4 == comb(4, 3)
    assert sigma(3, 2, 2) == 3
    assert sigma_table(3)[1] == [4, 3, 3]
    assert list(plateau(3, 2)) == [2]
    assert sigma_table(2) == [[2, 1], [1, 1]]
    assert sigma_table(2, "brute") == [[2, 1], [1, 1]]
    for k in range(1, 7):
        assert sigma_table(k)[k - 1] == [1] * k


def test_sigma_rejects_bad_indices():
    with pytest.raises(ValueError):
        sigma(3, 0, 1)
    with pytest.raises(ValueError):
        sigma(3, 1, 2, "closed_row1")
    with pytest.raises(ValueError):
        sigma(3, 1, 1, "nope")


@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.integers(1, k), st.integers(1, k))))
def test_methods_agree(kij):
    k, i, j = kij
    assert sigma(k, i, j) == sigma(k, i, j, "brute")
    if j == 1:
        assert sigma(k, i, 1) == sigma(k, i, 1, "closed_row1")


@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.integers(1, k), st.integers(1, max(k - 1, 1)))))
def test_difference_forms(kij):
    k, i, j = kij
    if k < 2:
        return
    diff = sigma(k, i, j) - sigma(k, i, j + 1)
    assert diff == difference_product(k, i, j) == difference_binomial(k, i, j)
    if i == 1:
        assert diff == 1


@pytest.mark.parametrize("k", range(2, 9))
def test_identity_report(k):
    rep = sigma_identity_checks(k)
    assert rep.passed, rep.summary()


def test_identity_report_needs_k2():
    with pytest.raises(ValueError):
        sigma_identity_checks(1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hat_counts_do_not_depend_on_n(k):
    for n in range(2 * k + 1, 2 * k + 5):
        spec = SystemSpec(n, k)
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                assert len(hat_S(spec, i, j)) == sigma(k, i, j)


def test_rho_lift():
    assert rho_lift((1, 2, 5), SystemSpec(5, 1)) == (1, 2, 6)
    for m in enumerate_S(SystemSpec(6, 2), 1):
        assert rho_lift(m, SystemSpec(6, 2)) in enumerate_S(SystemSpec(7, 2), 1)
    with pytest.raises(ValueError):
        rho_lift((1, 2, 3), SystemSpec(5, 1))


def test_K_matrix_difference_is_sigma():
    a, b = K_matrix(SystemSpec(6, 2)), K_matrix(SystemSpec(5, 2))
    assert [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)] == sigma_table(2)
    for n in range(8, 11):
        a, b = K_matrix(SystemSpec(n, 3)), K_matrix(SystemSpec(n - 1, 3))
        assert [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)] == sigma_table(3)
