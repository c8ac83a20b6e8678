import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import laurent
from lvint.exactalg import LaurentPolynomial as LP
from lvint.integrals import K_poly, base_integrals
from lvint.poisson import (
    InvalidSpecError,
    ReductionError,
    SystemSpec,
    apply_psi,
    bracket,
    bracket_by_derivation,
    build_A,
    casimir,
    hamiltonian,
    is_matrix_of,
    pullback_phi,
    rank_and_nullvector,
    reduce_iota,
    reduced_matrix,
    reduction_chain,
)

specs = st.integers(1, 9).flatmap(lambda n: st.integers(0, (n - 1) // 2).map(lambda k: SystemSpec(n, k)))


def test_spec_validation():
    with pytest.raises(InvalidSpecError):
        SystemSpec(4, 2)
    with pytest.raises(InvalidSpecError):
        SystemSpec(0, 0)
    assert SystemSpec(7, 2).m == 3


def test_matrix_examples():
    assert build_A(SystemSpec(5, 2)).rows()[0] == [0, 1, 1, -1, -1]
    assert build_A(SystemSpec(4, 1)).rows() == [[0, 1, 1, -1], [-1, 0, 1, 1], [-1, -1, 0, 1], [1, -1, -1, 0]]
    A = build_A(SystemSpec(3, 0)).rows()
    assert all(A[i][j] == 1 for i in range(3) for j in range(i + 1, 3))


@given(specs)
def test_matrix_is_skew_toeplitz(spec):
    A = build_A(spec).rows()
    n = spec.n
    for i in range(n):
        for j in range(n):
            assert A[i][j] == -A[j][i]
            if i + 1 < n and j + 1 < n:
                assert A[i][j] == A[i + 1][j + 1]
    assert A[0][1:].count(-1) == spec.k


def test_bracket_examples():
    s = SystemSpec(5, 2)
    x1, x2 = LP.variable(5, 1), LP.variable(5, 2)
    assert bracket(x1, x2, s) == x1 * x2
    C = casimir(SystemSpec(5, 1))
    for i in range(1, 6):
        assert bracket(LP.variable(5, i), C, SystemSpec(5, 1)).is_zero()


@settings(max_examples=60, deadline=None)
@given(laurent(), laurent(), laurent(), st.integers(0, 1))
def test_bracket_axioms(f, g, h, k):
    spec = SystemSpec(3, k)
    assert bracket(f, f, spec).is_zero()
    assert bracket(f, g, spec) == -bracket(g, f, spec)
    assert bracket(f, g, spec) == bracket_by_derivation(f, g, spec)
    jac = bracket(f, bracket(g, h, spec), spec) + bracket(g, bracket(h, f, spec), spec) + bracket(h, bracket(f, g, spec), spec)
    assert jac.is_zero()
    assert bracket(f, g * h, spec) == bracket(f, g, spec) * h + g * bracket(f, h, spec)


def test_casimir_examples():
    assert casimir(SystemSpec(5, 1)) == LP.monomial((1, 1, -1, 1, 1))
    assert casimir(SystemSpec(3, 0)) == LP.monomial((1, -1, 1))
    assert casimir(SystemSpec(7, 1)) == LP.monomial((1, 1, -1, 1, -1, 1, 1))
    with pytest.raises(InvalidSpecError):
        casimir(SystemSpec(6, 1))


@pytest.mark.parametrize("n", range(1, 13))
def test_rank_and_kernel(n):
    for k in range((n - 1) // 2 + 1):
        spec = SystemSpec(n, k)
        rank, v = rank_and_nullvector(spec)
        assert rank == (n if n % 2 == 0 else n - 1)
        if n % 2:
            A = build_A(spec).rows()
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in A)
            for i in range(1, n + 1):
                assert bracket(LP.variable(n, i), casimir(spec), spec).is_zero()
        else:
            assert v is None


def test_rank_examples():
    assert rank_and_nullvector(SystemSpec(6, 2)) == (6, None)
    assert rank_and_nullvector(SystemSpec(5, 1)) == (4, (1, 1, -1, 1, 1))
    assert rank_and_nullvector(SystemSpec(3, 0)) == (2, (1, -1, 1))


def test_pullback_examples():
    s = SystemSpec(5, 1)
    assert pullback_phi(LP.monomial((1, -1, 1)), s) == LP.monomial((1, 1, -1, 1, 1))
    assert pullback_phi(hamiltonian(3), s) == K_poly(s, 1)
    assert pullback_phi(LP.one(3), s) == LP.one(5)
    with pytest.raises(InvalidSpecError):
        pullback_phi(LP.one(1), SystemSpec(3, 0))


@settings(max_examples=30, deadline=None)
@given(laurent(), laurent(), st.sampled_from([SystemSpec(5, 1), SystemSpec(7, 2), SystemSpec(9, 3)]))
def test_phi_is_poisson(f, g, spec):
    # every spec here has m = 3, matching the 3-variable strategy
    base = SystemSpec(3, 0)
    lhs = pullback_phi(bracket(f, g, base), spec)
    assert lhs == bracket(pullback_phi(f, spec), pullback_phi(g, spec), spec)


@settings(max_examples=30, deadline=None)
@given(laurent(), laurent())
def test_psi_is_anti_poisson(f, g):
    s = SystemSpec(3, 0)
    assert apply_psi(bracket(f, g, s)) == -bracket(apply_psi(f), apply_psi(g), s)


def test_psi_examples():
    assert apply_psi(LP.variable(3, 1)) == LP.variable(3, 3)
    assert apply_psi(hamiltonian(4)) == hamiltonian(4)
    F1 = base_integrals(5)[0].poly()
    assert F1 == LP.monomial((1, -1, 1, -1, 1))
    # y5 * y3 y1 / (y4 y2): same monomial, reached by reversal
    assert apply_psi(F1) == LP.monomial((1, -1, 1, -1, 1))
    F2 = base_integrals(5)[1].poly()
    assert apply_psi(F2) == LP.linear_sum(5, [3, 4, 5]) * LP.monomial((1, -1, 0, 0, 0))


def test_reduction_case_c():
    # zeroing x5 of LV(5,2) (removal index 4 in the 0-based slot convention)
    red, spec = reduce_iota(K_poly(SystemSpec(5, 2), 1), 4, SystemSpec(5, 2))
    assert spec == SystemSpec(4, 1)
    assert red == K_poly(SystemSpec(4, 1), 1)
    assert is_matrix_of(reduced_matrix(SystemSpec(5, 2), 4), SystemSpec(4, 1))


@pytest.mark.parametrize("n, k", [(6, 1), (7, 2), (8, 0), (9, 3)])
def test_hamiltonian_reduces_anywhere_valid(n, k):
    src = SystemSpec(n, k)
    for ell in range(n):
        try:
            red, spec = reduce_iota(hamiltonian(n), ell, src)
        except ReductionError:
            assert k > 0 and not (k < ell <= n - 1 - k) and ell != n - 1
            continue
        assert red == hamiltonian(n - 1)
        assert is_matrix_of(reduced_matrix(src, ell), spec)


def test_reduction_refuses_negative_exponent():
    with pytest.raises(ReductionError):
        reduce_iota(casimir(SystemSpec(5, 1)), 2, SystemSpec(5, 1))


def test_reduction_chain():
    chain = reduction_chain(SystemSpec(9, 4))
    assert chain == [SystemSpec(9, 4), SystemSpec(8, 3), SystemSpec(7, 2), SystemSpec(6, 1), SystemSpec(5, 0)]


def test_random_pairs_are_deterministic():
    from lvint.poisson import random_poisson_check_pairs

    a = random_poisson_check_pairs(SystemSpec(5, 1), random.Random(3), 4)
    b = random_poisson_check_pairs(SystemSpec(5, 1), random.Random(3), 4)
    assert a == b
