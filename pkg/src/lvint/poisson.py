"""Diagonal Poisson structures pi_k on R^n and the maps between them.

``{x_i, x_j}_k = (A_k)_{ij} x_i x_j`` where ``A_k`` is the skew Toeplitz sign
matrix whose first row is ``(0, 1, ..., 1, -1, ..., -1)`` with ``k`` trailing
minus ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactalg import LaurentPolynomial, VariableCountError, exact_rank

__all__ = [
    "SystemSpec",
    "SkewToeplitz",
    "InvalidSpecError",
    "ReductionError",
    "build_A",
    "bracket",
    "bracket_by_derivation",
    "casimir",
    "rank_and_nullvector",
    "pullback_phi",
    "apply_psi",
    "reduce_iota",
    "reduction_chain",
    "hamiltonian",
]


class InvalidSpecError(ValueError):
    pass


class ReductionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SystemSpec:
    """The pair (n, k) labelling LV(n, k); requires ``2k + 1 <= n``."""

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise InvalidSpecError("n and k must be integers")
        if self.n < 1 or self.k < 0:
            raise InvalidSpecError(f"need n >= 1 and k >= 0, got (n, k) = ({self.n}, {self.k})")
        if 2 * self.k + 1 > self.n:
            raise InvalidSpecError(f"need 2k+1 <= n, got (n, k) = ({self.n}, {self.k})")

    @property
    def m(self) -> int:
        return self.n - 2 * self.k

    @property
    def r(self) -> int:
        return (self.n + 1) // 2 - self.k

    @property
    def is_boundary(self) -> bool:
        """Bogoyavlenskij-Itoh case n = 2k+1."""
        return self.n == 2 * self.k + 1

    def __str__(self):
        return f"LV({self.n},{self.k})"


@dataclass(frozen=True)
class SkewToeplitz:
    n: int
    first_row: tuple[int, ...]

    def entry(self, i: int, j: int) -> int:
        """1-based entry."""
        if i == j:
            return 0
        if i < j:
            return self.first_row[j - i]
        return -self.first_row[i - j]

    def rows(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def dump(self) -> str:
        return "\n".join(" ".join(f"{v:2d}" for v in row) for row in self.rows())


def _eps(a: int, b: int) -> int:
    return 1 if a > b else -1


@lru_cache(maxsize=None)
def build_A(spec: SystemSpec) -> SkewToeplitz:
    n, k = spec.n, spec.k
    # (A_k)_{1,j} = eps(n+1, k+j)
    row = (0,) + tuple(_eps(n + 1, k + j) for j in range(2, n + 1))
    return SkewToeplitz(n, row)


@lru_cache(maxsize=None)
def _matrix(spec: SystemSpec) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in build_A(spec).rows())


def _pairing(A, ea: tuple[int, ...], eb: tuple[int, ...]) -> int:
    # {x^a, x^b} = (a^T A b) x^{a+b}
    total = 0
    for i, ai in enumerate(ea):
        if ai:
            row = A[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(eb) if bj)
    return total


def bracket(f: LaurentPolynomial, g: LaurentPolynomial, spec: SystemSpec) -> LaurentPolynomial:
    """Poisson bracket ``{f, g}_k`` of two Laurent polynomials.

    For a diagonal bracket the derivation rule collapses to a bilinear form
    on exponent vectors, which is what is summed here.
    """
    if f.nvars != spec.n or g.nvars != spec.n:
        raise VariableCountError(f"bracket on {spec} needs {spec.n} variables")
    A = _matrix(spec)
    terms: dict[tuple[int, ...], Fraction] = {}
    for ea, ca in f.items():
        for eb, cb in g.items():
            w = _pairing(A, ea, eb)
            if w:
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, 0) + w * ca * cb
    return LaurentPolynomial(spec.n, terms)


def bracket_by_derivation(f: LaurentPolynomial, g: LaurentPolynomial, spec: SystemSpec) -> LaurentPolynomial:
    """Same bracket written as ``sum_{i<j} A_ij x_i x_j (f_i g_j - f_j g_i)``.

    Slow; kept as an independent route for testing :func:`bracket`.
    """
    n = spec.n
    A = _matrix(spec)
    df = [f.partial_derivative(i) for i in range(1, n + 1)]
    dg = [g.partial_derivative(i) for i in range(1, n + 1)]
    x = [LaurentPolynomial.variable(n, i) for i in range(1, n + 1)]
    out = LaurentPolynomial.zero(n)
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j]:
                out = out + A[i][j] * x[i] * x[j] * (df[i] * dg[j] - df[j] * dg[i])
    return out


def hamiltonian(n: int) -> LaurentPolynomial:
    return LaurentPolynomial.linear_sum(n, range(1, n + 1))


def casimir(spec: SystemSpec) -> LaurentPolynomial:
    n, k = spec.n, spec.k
    if n % 2 == 0:
        raise InvalidSpecError(f"{spec}: pi_k is symplectic for even n, no Casimir")
    exp = [1] * n
    # middle block x_{k+1} .. x_{n-k} alternates +1, -1 starting with +1
    for idx in range(k + 1, n - k + 1):
        exp[idx - 1] = 1 if (idx - k) % 2 == 1 else -1
    return LaurentPolynomial.monomial(exp)


def rank_and_nullvector(spec: SystemSpec) -> tuple[int, tuple[int, ...] | None]:
    """Exact rank of ``A_k``; for odd ``n`` also a checked null vector."""
    A = build_A(spec).rows()
    rank = exact_rank(A)
    if spec.n % 2 == 0:
        return rank, None
    n, k = spec.n, spec.k
    mid = [1 if t % 2 == 0 else -1 for t in range(n - 2 * k - 1)]
    v = (1,) * k + tuple(mid) + (1,) + (1,) * k
    if any(sum(a * b for a, b in zip(row, v)) for row in A):
        raise ArithmeticError(f"{spec}: expected null vector {v} is not in the kernel")
    return rank, v


def pullback_phi(f: LaurentPolynomial, spec: SystemSpec) -> LaurentPolynomial:
    """Pull ``f(y_1..y_m)`` back along ``y_i = P_k x_{i+k}``.

    ``P_k`` is the product of the first and last ``k`` coordinates.
    """
    n, k = spec.n, spec.k
    if k == 0 or 2 * k >= n:
        raise InvalidSpecError(f"phi_k needs 0 < 2k < n, got {spec}")
    m = n - 2 * k
    if f.nvars != m:
        raise VariableCountError(f"phi_{k}^* expects {m} variables, got {f.nvars}")

    def fn(e):
        d = sum(e)
        return (d,) * k + tuple(e) + (d,) * k

    return f.map_monomials(n, fn)


def apply_psi(f: LaurentPolynomial) -> LaurentPolynomial:
    """Reverse the variable order, ``x_i -> x_{n+1-i}``."""
    return f.map_monomials(f.nvars, lambda e: e[::-1])


def reduce_iota(f: LaurentPolynomial, ell: int, source: SystemSpec) -> tuple[LaurentPolynomial, SystemSpec]:
    """Restrict ``f`` on R^{n+1} to the hyperplane ``x_{ell+1} = 0``.

    ``source`` is the spec of the ambient (n+1)-dimensional system.  Only the
    three cases where the reduced bracket is again some ``pi_{k'}`` are
    accepted: ``k < ell <= n-k`` and ``k = 0`` keep ``k``; ``ell = n`` with
    ``k > 0`` lowers it by one.
    """
    if f.nvars != source.n:
        raise VariableCountError(f"expected {source.n} variables, got {f.nvars}")
    n, k = source.n - 1, source.k
    if not 0 <= ell <= n:
        raise ReductionError(f"ell = {ell} outside 0..{n}")
    if k == 0:
        target = (n, 0)
    elif ell == n:
        target = (n, k - 1)
    elif k < ell <= n - k:
        target = (n, k)
    else:
        raise ReductionError(f"no known reduced structure for ell = {ell} on {source}")
    try:
        reduced_spec = SystemSpec(*target)
    except InvalidSpecError as exc:
        raise ReductionError(str(exc)) from exc
    if any(e[ell] < 0 for e, _ in f.items()):
        raise ReductionError(f"x{ell + 1} appears with a negative exponent; cannot set it to 0")
    return f.substitute_zero([ell + 1]), reduced_spec


def reduced_matrix(source: SystemSpec, ell: int) -> list[list[int]]:
    """``A_k^{(n+1)}`` with row and column ``ell+1`` deleted."""
    rows = build_A(source).rows()
    keep = [i for i in range(source.n) if i != ell]
    return [[rows[i][j] for j in keep] for i in keep]


def reduction_chain(spec: SystemSpec) -> list[SystemSpec]:
    """Specs met by repeatedly zeroing the last variable until k = 0."""
    chain = [spec]
    while chain[-1].k > 0:
        cur = chain[-1]
        _, nxt = reduce_iota(LaurentPolynomial.zero(cur.n), cur.n - 1, cur)
        chain.append(nxt)
    return chain


def random_poisson_check_pairs(spec: SystemSpec, rng, count: int, max_exp: int = 2) -> list:
    """Random Laurent monomial pairs with small exponents, for identity checks."""
    out = []
    for _ in range(count):
        a = [rng.randint(-max_exp, max_exp) for _ in range(spec.n)]
        b = [rng.randint(-max_exp, max_exp) for _ in range(spec.n)]
        ca, cb = rng.randint(1, 5), rng.randint(-5, -1)
        out.append((LaurentPolynomial.monomial(a, ca), LaurentPolynomial.monomial(b, cb)))
    return out


def is_matrix_of(rows: Sequence[Sequence[int]], spec: SystemSpec) -> bool:
    return [list(r) for r in rows] == build_A(spec).rows()
