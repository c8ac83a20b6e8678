"""The counts sigma^{(k)}_{i,j} behind the independence argument.

``sigma^{(k)}_{i,j}`` is the number of middle-erased tuples of
``S_i^{(2k+1,k)}`` whose first ``i`` entries contain ``j``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod

from .integrals import enumerate_S
from .poisson import SystemSpec

__all__ = [
    "sigma",
    "sigma_table",
    "hat_S",
    "S_ij",
    "K_matrix",
    "rho_lift",
    "plateau",
    "difference_product",
    "difference_binomial",
    "sigma_identity_checks",
]


def hat_S(spec: SystemSpec, i: int, j: int | None = None) -> set[tuple[int, ...]]:
    """Middle-erased tuples; with ``j``, only those whose first half holds ``j``."""
    out = set()
    for m in enumerate_S(spec, i):
        h = m[:i] + m[i + 1:]
        if j is None or j in m[:i]:
            out.add(h)
    return out


def S_ij(spec: SystemSpec, i: int, j: int) -> list[tuple[int, ...]]:
    """Tuples of ``S_i`` whose first i+1 entries contain ``j``."""
    return [m for m in enumerate_S(spec, i) if j in m[: i + 1]]


@lru_cache(maxsize=None)
def _brute(k: int, i: int, j: int) -> int:
    return len(hat_S(SystemSpec(2 * k + 1, k), i, j))


@lru_cache(maxsize=None)
def _weighted(k: int, i: int, j: int) -> int:
    if i > k or i < 1:
        return 0
    total = 0
    for ms in combinations(range(1, k + 1), i):
        if j in ms:
            total += prod(b - a for a, b in zip(ms, ms[1:] + (k + 1,)))
    return total


def sigma(k: int, i: int, j: int, method: str = "weighted_sum") -> int:
    if not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"need 1 <= i, j <= k, got k={k}, i={i}, j={j}")
    if method == "weighted_sum":
        return _weighted(k, i, j)
    if method == "brute":
        return _brute(k, i, j)
    if method == "closed_row1":
        if j != 1:
            raise ValueError("closed_row1 only applies to j = 1")
        return comb(k + i - 1, 2 * i - 1)
    raise ValueError(f"unknown method {method!r}")


def _sigma0(k: int, i: int, j: int) -> int:
    # zero-extended: empty sets outside the index range
    if k < 1 or not (1 <= i <= k and 1 <= j <= k):
        return 0
    return _weighted(k, i, j)


def sigma_table(k: int, method: str = "weighted_sum") -> list[list[int]]:
    return [[sigma(k, i, j, method) for j in range(1, k + 1)] for i in range(1, k + 1)]


def K_matrix(spec: SystemSpec) -> list[list[int]]:
    """``#S_{i,j}^{(n,k)}`` for ``i, j = 1..k``."""
    k = spec.k
    return [[len(S_ij(spec, i, j)) for j in range(1, k + 1)] for i in range(1, k + 1)]


def rho_lift(m: tuple[int, ...], source: SystemSpec) -> tuple[int, ...]:
    """Shift the entries after the middle one up by one: S_i^{(n-1,k)} -> S_i^{(n,k)}."""
    i = len(m) // 2
    if tuple(m) not in set(enumerate_S(source, i)):
        raise ValueError(f"{m} is not in S_{i} of {source}")
    return tuple(m[: i + 1]) + tuple(v + 1 for v in m[i + 1:])


def plateau(k: int, i: int) -> range:
    """Values of j with ``sigma_{i,j} == sigma_{i,j+1}``."""
    return range((k - i + 3) // 2, (k + i + 1) // 2)


def difference_product(k: int, i: int, j: int) -> int:
    num = prod(2 * j - k + s for s in range(1 - i, i - 1))
    q, rem = divmod(num, factorial(2 * i - 2))
    if rem:
        raise ArithmeticError(f"product for k={k}, i={i}, j={j} not divisible")
    return q


def difference_binomial(k: int, i: int, j: int) -> int:
    top = 2 * j - k + i - 2
    if top >= 0:
        return comb(top, 2 * i - 2)
    return comb(-2 * j + k + i - 1, 2 * i - 2)


def sigma_identity_checks(k: int):
    """Every sigma identity for one k, as a VerificationReport."""
    from .verify import VerificationReport

    if k < 2:
        raise ValueError("identity checks need k >= 2")
    rep = VerificationReport(suite="sigma", spec=f"k={k}")
    table = sigma_table(k)
    brute = sigma_table(k, "brute")
    rep.check("brute == weighted_sum", brute == table, witness=(brute, table))
    for i in range(1, k + 1):
        row1 = comb(k + i - 1, 2 * i - 1)
        rep.check(f"row1 binomial i={i}", table[i - 1][0] == row1, witness=(table[i - 1][0], row1))
    rep.check("sigma_1j = k-j+1", all(table[0][j - 1] == k - j + 1 for j in range(1, k + 1)), witness=table[0])
    rep.check("sigma_kj = 1", all(v == 1 for v in table[k - 1]), witness=table[k - 1])

    for i in range(2, k + 1):
        rhs = sum(t * _sigma0(k - t, i - 1, 1) for t in range(1, k - i + 2))
        rep.check(f"recurrence 1 i={i}", table[i - 1][0] == rhs, witness=(table[i - 1][0], rhs))
        for j in range(2, k + 1):
            rhs2 = _sigma0(k - 1, i, j - 1) + sum(_sigma0(k - t, i - 1, j - t) for t in range(1, j))
            rep.check(f"recurrence 2 i={i} j={j}", table[i - 1][j - 1] == rhs2,
                      witness=(table[i - 1][j - 1], rhs2))

    for i in range(1, k + 1):
        flat = plateau(k, i)
        for j in range(1, k):
            diff = table[i - 1][j - 1] - table[i - 1][j]
            prod_form = difference_product(k, i, j)
            binom_form = difference_binomial(k, i, j)
            rep.check(f"difference product i={i} j={j}", diff == prod_form, witness=(diff, prod_form))
            rep.check(f"difference binomial i={i} j={j}", diff == binom_form, witness=(diff, binom_form))
            ok = diff >= 0 and ((diff == 0) == (j in flat))
            rep.check(f"plateau i={i} j={j}", ok, witness=(diff, list(flat)))
    return rep
