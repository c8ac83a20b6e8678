"""Bogoyavlenskij's Lax triple for LV(2K+1, K) and its spectral invariants.

Matrices are plain lists of lists of :class:`LaurentPolynomial`.  The
spectral parameters lambda and mu are appended as variables N+1 and N+2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactalg import LaurentPolynomial
from .integrals import K_poly
from .poisson import SystemSpec, build_A

__all__ = [
    "LaxTriple",
    "build_lax",
    "sparse_det",
    "char_poly",
    "char_poly_K",
    "lax_residual",
    "StructureError",
]

Matrix = list[list[LaurentPolynomial]]


class StructureError(ArithmeticError):
    """The characteristic polynomial does not have the expected lambda/mu shape."""


@dataclass(frozen=True)
class LaxTriple:
    kappa: int
    X: Matrix
    M: Matrix
    B: Matrix

    @property
    def size(self) -> int:
        return 2 * self.kappa + 1


def _zeros(size: int, nvars: int) -> Matrix:
    z = LaurentPolynomial.zero(nvars)
    return [[z] * size for _ in range(size)]


def build_lax(kappa: int, nvars: int | None = None) -> LaxTriple:
    """X, M, B with ``X_{i,i-K} = x_i``, ``M_{i,i+1} = 1``, ``b_i = -(x_i + ... + x_{i+K})``.

    Indices wrap modulo ``N = 2K+1``.  ``nvars`` may exceed N to leave room
    for extra variables (the spectral parameters).
    """
    if kappa < 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    N = 2 * kappa + 1
    nv = N if nvars is None else nvars
    X, M, B = _zeros(N, nv), _zeros(N, nv), _zeros(N, nv)
    one = LaurentPolynomial.one(nv)
    for i in range(N):
        X[i][(i - kappa) % N] = LaurentPolynomial.variable(nv, i + 1)
        M[i][(i + 1) % N] = one
        B[i][i] = -LaurentPolynomial.linear_sum(nv, [(i + t) % N + 1 for t in range(kappa + 1)])
    return LaxTriple(kappa, X, M, B)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    size = len(A)
    nv = A[0][0].nvars
    out = _zeros(size, nv)
    for i in range(size):
        for j in range(size):
            acc = LaurentPolynomial.zero(nv)
            for t in range(size):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            out[i][j] = acc
    return out


def matsub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return matsub(matmul(A, B), matmul(B, A))


def is_zero_matrix(A: Matrix) -> bool:
    return all(e.is_zero() for row in A for e in row)


def sparse_det(A: Matrix) -> LaurentPolynomial:
    """Determinant by summing over permutations supported on nonzero entries.

    Depth-first over rows, pruning on zero entries, so the cost is the
    number of surviving permutations rather than n!.
    """
    size = len(A)
    nv = A[0][0].nvars
    support = [[j for j in range(size) if A[i][j]] for i in range(size)]
    total = LaurentPolynomial.zero(nv)
    perm: list[int] = []
    used = [False] * size

    def sign(p):
        s, seen = 1, [False] * size
        for start in range(size):
            if seen[start]:
                continue
            length, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def rec(row: int, acc: LaurentPolynomial):
        nonlocal total
        if row == size:
            total = total + sign(perm) * acc
            return
        for j in support[row]:
            if not used[j]:
                used[j] = True
                perm.append(j)
                rec(row + 1, acc * A[row][j])
                perm.pop()
                used[j] = False

    rec(0, LaurentPolynomial.one(nv))
    return total


def char_poly(kappa: int) -> LaurentPolynomial:
    """``det(X + lambda M - mu Id)`` over ``x_1..x_N, lambda, mu``."""
    N = 2 * kappa + 1
    nv = N + 2
    lam = LaurentPolynomial.variable(nv, N + 1)
    mu = LaurentPolynomial.variable(nv, N + 2)
    lax = build_lax(kappa, nvars=nv)
    L = [
        [lax.X[i][j] + lam * lax.M[i][j] - (mu if i == j else 0) for j in range(N)]
        for i in range(N)
    ]
    return sparse_det(L)


def char_poly_K(kappa: int, zero_tail: int = 0) -> list[LaurentPolynomial]:
    """Spectral invariants ``K_0..K_kappa`` of the (reduced) Lax operator.

    The last ``zero_tail`` variables are set to zero before reading off the
    coefficients, which lands in LV(N - zero_tail, kappa - zero_tail).  The
    returned polynomials live in the surviving N - zero_tail variables;
    entries above the reduced k are the zero polynomial.
    """
    if not 0 <= zero_tail <= kappa:
        raise ValueError(f"zero_tail must lie in 0..{kappa}")
    N = 2 * kappa + 1
    det = char_poly(kappa)
    if zero_tail:
        det = det.substitute_zero(range(N - zero_tail + 1, N + 1))
    n_red = N - zero_tail
    lam_slot, mu_slot = n_red + 1, n_red + 2
    coeffs = det.collect([lam_slot, mu_slot])
    one = LaurentPolynomial.one(n_red)
    expected_keys = {(N, 0), (0, N)} | {(kappa - i, kappa - i) for i in range(kappa + 1)}
    for key, c in coeffs.items():
        if key not in expected_keys:
            raise StructureError(f"unexpected term lambda^{key[0]} mu^{key[1]} with coefficient {c}")
    if coeffs.get((N, 0)) != one:
        raise StructureError(f"coefficient of lambda^{N} is {coeffs.get((N, 0))}, expected 1")
    if coeffs.get((0, N)) != -one:
        raise StructureError(f"coefficient of mu^{N} is {coeffs.get((0, N))}, expected -1")
    zero = LaurentPolynomial.zero(n_red)
    return [coeffs.get((kappa - i, kappa - i), zero) for i in range(kappa + 1)]


def reduced_spec(kappa: int, zero_tail: int) -> SystemSpec:
    return SystemSpec(2 * kappa + 1 - zero_tail, kappa - zero_tail)


def expected_K(kappa: int, zero_tail: int) -> list[LaurentPolynomial]:
    spec = reduced_spec(kappa, zero_tail)
    return [K_poly(spec, i) for i in range(kappa + 1)]


def lax_residual(kappa: int) -> tuple[Matrix, Matrix]:
    """``([M,B] - [X, M^{K+1}],  Xdot - [X,B])`` with Xdot from the LV(2K+1, K) field."""
    lax = build_lax(kappa)
    N = lax.size
    spec = SystemSpec(N, kappa)
    Mp = lax.M
    for _ in range(kappa):
        Mp = matmul(Mp, lax.M)
    R1 = matsub(commutator(lax.M, lax.B), commutator(lax.X, Mp))

    A = build_A(spec).rows()
    x = [LaurentPolynomial.variable(N, i + 1) for i in range(N)]
    Xdot = _zeros(N, N)
    for i in range(N):
        xdot = LaurentPolynomial.zero(N)
        for j in range(N):
            if A[i][j]:
                xdot = xdot + A[i][j] * x[i] * x[j]
        Xdot[i][(i - kappa) % N] = xdot
    R2 = matsub(Xdot, commutator(lax.X, lax.B))
    return R1, R2
