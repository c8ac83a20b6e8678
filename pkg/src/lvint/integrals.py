"""First integrals of LV(n, k): Itoh-type polynomials K_i and pulled-back rational integrals H_l."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .exactalg import LaurentPolynomial
from .poisson import SystemSpec, apply_psi, build_A, pullback_phi

__all__ = [
    "enumerate_S",
    "in_S",
    "K_poly",
    "BaseIntegral",
    "base_rational_integrals",
    "RationalIntegral",
    "H_list",
    "excluded_pullback",
    "shift_constants",
    "IntegralFamily",
    "integral_family",
    "ConsistencyError",
]


class ConsistencyError(ArithmeticError):
    pass


def in_S(m: tuple[int, ...], spec: SystemSpec) -> bool:
    """Membership test via the defining submatrix ``B_m = A_i^{(2i+1)}``."""
    size = len(m)
    if size % 2 == 0 or list(m) != sorted(set(m)) or not m or m[0] < 1 or m[-1] > spec.n:
        return False
    i = size // 2
    big = build_A(spec)
    small = build_A(SystemSpec(size, i))
    return all(
        big.entry(m[s], m[t]) == small.entry(s + 1, t + 1)
        for s in range(size)
        for t in range(s + 1, size)
    )


def _enum_submatrix(spec: SystemSpec, i: int) -> list[tuple[int, ...]]:
    return [m for m in combinations(range(1, spec.n + 1), 2 * i + 1) if in_S(m, spec)]


def _enum_inequalities(spec: SystemSpec, i: int) -> list[tuple[int, ...]]:
    # position t (1-based) must satisfy, with d = n - k:
    #   m_t < m_{t-i} + d          for t >= i+1 (i >= 1)
    #   m_t >= m_{t-i-1} + d       for t >= i+2
    n, d = spec.n, spec.n - spec.k
    size = 2 * i + 1
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec(t: int):
        if t > size:
            out.append(tuple(cur))
            return
        lo = cur[-1] + 1 if cur else 1
        hi = n - (size - t)
        if i >= 1 and t >= i + 1:
            hi = min(hi, cur[t - i - 1] + d - 1)
        if t >= i + 2:
            lo = max(lo, cur[t - i - 2] + d)
        for v in range(lo, hi + 1):
            cur.append(v)
            rec(t + 1)
            cur.pop()

    rec(1)
    return out


@lru_cache(maxsize=None)
def _enumerate(spec: SystemSpec, i: int, method: str) -> tuple[tuple[int, ...], ...]:
    if i < 0:
        raise ValueError("i must be non-negative")
    if i > spec.k:
        return ()
    if method == "inequalities":
        found = _enum_inequalities(spec, i)
    elif method == "submatrix":
        found = _enum_submatrix(spec, i)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    return tuple(sorted(found))


def enumerate_S(spec: SystemSpec, i: int, method: str = "inequalities") -> list[tuple[int, ...]]:
    """Index tuples of ``S_i^{(n,k)}``, lexicographically sorted.

    ``inequalities`` walks the interval bounds position by position;
    ``submatrix`` checks every increasing tuple against the defining
    submatrix and is exponential, so use it only for small n.
    """
    return list(_enumerate(spec, i, method))


@lru_cache(maxsize=None)
def K_poly(spec: SystemSpec, i: int) -> LaurentPolynomial:
    n = spec.n
    terms = {}
    for m in enumerate_S(spec, i):
        e = [0] * n
        for idx in m:
            e[idx - 1] = 1
        terms[tuple(e)] = 1
    return LaurentPolynomial(n, terms)


@dataclass(frozen=True)
class BaseIntegral:
    """``(sum of y_j over sum_indices) * monomial`` on R^m.

    ``family`` is ``"F"`` or ``"G"`` and ``index`` the subscript l, so the
    function is ``F_l`` or ``G_l = psi^* F_l``.
    """

    m: int
    family: str
    index: int
    sum_indices: tuple[int, ...]
    cofactor: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.family}{self.index}"

    def poly(self) -> LaurentPolynomial:
        return LaurentPolynomial.linear_sum(self.m, self.sum_indices) * LaurentPolynomial.monomial(self.cofactor)


def _F(m: int, ell: int) -> BaseIntegral:
    width = 2 * ell - 1 if m % 2 else 2 * ell
    cof = [0] * m
    # ratio y_{w+2} y_{w+4} ... y_m / (y_{w+1} y_{w+3} ... y_{m-1})
    for idx in range(width + 1, m + 1):
        cof[idx - 1] = 1 if (idx - width) % 2 == 0 else -1
    return BaseIntegral(m, "F", ell, tuple(range(1, width + 1)), tuple(cof))


def _G(m: int, ell: int) -> BaseIntegral:
    f = _F(m, ell)
    return BaseIntegral(
        m, "G", ell, tuple(sorted(m + 1 - j for j in f.sum_indices)), f.cofactor[::-1]
    )


def base_integrals(m: int) -> list[BaseIntegral]:
    """Ordered list of the m-1 rational integrals of LV(m, 0), with structure."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    r = (m + 1) // 2
    if m % 2:
        order = [_F(m, 1)] + [_F(m, l) for l in range(2, r)] + [_G(m, l) for l in range(2, r)] + [_F(m, r)]
    else:
        order = [_F(m, l) for l in range(1, r)] + [_G(m, l) for l in range(1, r)] + [_F(m, r)]
    return order


def base_rational_integrals(m: int) -> list[LaurentPolynomial]:
    return [b.poly() for b in base_integrals(m)]


@dataclass(frozen=True)
class RationalIntegral:
    """``H_l = hat * (x_j summed over sum_indices)`` on R^n."""

    label: str
    source: BaseIntegral
    poly: LaurentPolynomial
    hat: LaurentPolynomial
    sum_indices: tuple[int, ...]

    @property
    def partial_sum(self) -> LaurentPolynomial:
        return LaurentPolynomial.linear_sum(self.poly.nvars, self.sum_indices)


def _lift(b: BaseIntegral, spec: SystemSpec) -> RationalIntegral:
    k = spec.k
    poly = pullback_phi(b.poly(), spec)
    # phi^*(sum y_j * c) = (P_k sum x_{j+k}) * P_k^{deg c} c(x_{k+.}), so the hat is a monomial
    d = sum(b.cofactor) + 1
    hat = LaurentPolynomial.monomial((d,) * k + b.cofactor + (d,) * k)
    return RationalIntegral(
        label=b.label,
        source=b,
        poly=poly,
        hat=hat,
        sum_indices=tuple(j + k for j in b.sum_indices),
    )


@lru_cache(maxsize=None)
def _h_list(spec: SystemSpec) -> tuple[RationalIntegral, ...]:
    if 2 * spec.k >= spec.n:
        raise ValueError(f"{spec}: rational integrals need 2k < n")
    if spec.m < 3:
        return ()
    bases = base_integrals(spec.m)[:-1]
    if spec.k == 0:
        out = []
        for b in bases:
            p = b.poly()
            out.append(RationalIntegral(b.label, b, p, LaurentPolynomial.monomial(b.cofactor), b.sum_indices))
        return tuple(out)
    return tuple(_lift(b, spec) for b in bases)


def H_list(spec: SystemSpec, with_structure: bool = False):
    """The n-2k-2 rational integrals ``H_1 .. H_{n-2k-2}`` of LV(n, k).

    The final pullback (of the Hamiltonian of LV(m, 0)) is left out; see
    :func:`excluded_pullback`.  Empty when ``n = 2k+2`` or ``n = 2k+1``.
    """
    if spec.is_boundary:
        return []
    items = list(_h_list(spec))
    return items if with_structure else [h.poly for h in items]


def excluded_pullback(spec: SystemSpec) -> LaurentPolynomial:
    """``phi_k^*(y_1 + ... + y_m)``; coincides with K_k."""
    ham = LaurentPolynomial.linear_sum(spec.m, range(1, spec.m + 1))
    if spec.k == 0:
        return ham
    return pullback_phi(ham, spec)


def _q_counts(spec: SystemSpec, i: int) -> dict[int, int]:
    n, k = spec.n, spec.k
    S = enumerate_S(spec, i)
    return {j: sum(1 for m in S if j in m) for j in range(k + 1, n - k + 1)}


@lru_cache(maxsize=None)
def shift_constants(spec: SystemSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Constants p_l, q_i that zero the off-diagonal Jacobian blocks at **1**.

    ``p_l`` is the number of summands in the partial sum of ``H_l`` (this is
    ``dH_l/dx_j`` at the all-ones point for every ``j <= k``).  ``q_i`` is the
    number of monomials of ``K_i`` containing a fixed middle variable ``x_j``,
    ``k < j <= n-k``, which must not depend on ``j``.
    """
    if spec.n <= 2 * spec.k + 1:
        raise ValueError(f"{spec}: shift constants need n > 2k+1")
    p = tuple(len(h.sum_indices) for h in H_list(spec, with_structure=True))
    q = []
    for i in range(1, spec.k + 1):
        counts = _q_counts(spec, i)
        values = set(counts.values())
        if len(values) != 1:
            raise ConsistencyError(f"{spec}: K_{i} middle-variable counts differ: {counts}")
        q.append(values.pop())
    return p, tuple(q)


def uniform_p(spec: SystemSpec) -> tuple[int, ...]:
    """The uniform choice 2l-1 (n odd) / 2l (n even); right only on the F-half of the list."""
    off = 1 if spec.n % 2 else 0
    return tuple(2 * l - off for l in range(1, spec.n - 2 * spec.k - 1))


@dataclass
class IntegralFamily:
    spec: SystemSpec
    polys: list[LaurentPolynomial]
    rationals: list[RationalIntegral]
    p: tuple[int, ...] = ()
    q: tuple[int, ...] = ()
    casimir: LaurentPolynomial | None = None
    names: list[str] = field(default_factory=list)

    def members(self) -> list[tuple[str, LaurentPolynomial]]:
        """(name, polynomial) for every K_i and H_l, in that order."""
        out = [(f"K{i}", K) for i, K in enumerate(self.polys)]
        out += [(f"H{l}", h.poly) for l, h in enumerate(self.rationals, start=1)]
        return out

    def monitored(self) -> list[tuple[str, LaurentPolynomial]]:
        """Members plus the Casimir for odd n."""
        out = self.members()
        if self.casimir is not None:
            out.append(("C", self.casimir))
        return out

    def liouville(self) -> list[LaurentPolynomial]:
        r = self.spec.r
        return list(self.polys) + [h.poly for h in self.rationals[: max(r - 1, 0)]]

    def to_dict(self) -> dict:
        n = self.spec.n
        return {
            "spec": {"n": n, "k": self.spec.k, "m": self.spec.m, "r": self.spec.r},
            "nvars": n,
            "K": [{"name": f"K{i}", "terms": K.to_records()} for i, K in enumerate(self.polys)],
            "H": [
                {
                    "name": f"H{l}",
                    "source": h.label,
                    "terms": h.poly.to_records(),
                    "hat": h.hat.to_records(),
                    "sum_indices": list(h.sum_indices),
                }
                for l, h in enumerate(self.rationals, start=1)
            ],
            "casimir": self.casimir.to_records() if self.casimir is not None else None,
            "p": list(self.p),
            "q": list(self.q),
        }


def integral_family(spec: SystemSpec) -> IntegralFamily:
    from .poisson import casimir

    polys = [K_poly(spec, i) for i in range(spec.k + 1)]
    rationals = H_list(spec, with_structure=True)
    p, q = shift_constants(spec) if spec.n > 2 * spec.k + 1 else ((), ())
    C = casimir(spec) if spec.n % 2 else None
    fam = IntegralFamily(spec, polys, rationals, p, q, C)
    fam.names = [name for name, _ in fam.members()]
    return fam
