"""Verification suites for the integrability claims of LV(n, k).

Each suite returns a :class:`VerificationReport`; every check is an exact
identity in the Laurent-polynomial ring or an exact rank over Q.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exactalg import LaurentPolynomial, exact_rank
from .integrals import (
    K_poly,
    enumerate_S,
    excluded_pullback,
    integral_family,
    shift_constants,
)
from .poisson import (
    SystemSpec,
    apply_psi,
    bracket,
    build_A,
    casimir,
    hamiltonian,
    pullback_phi,
    rank_and_nullvector,
    reduce_iota,
    reduced_matrix,
    reduction_chain,
)

__all__ = [
    "Check",
    "VerificationReport",
    "involution_suite",
    "independence_suite",
    "noncommutative_rank_suite",
    "structure_suite",
    "SUITES",
    "all_specs",
    "random_rational_point",
    "jacobian",
]

DEFAULT_SEED = 20240101


@dataclass
class Check:
    identity: str
    status: str  # "exact-pass" | "numeric-pass" | "fail"
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {"identity": self.identity, "status": self.status, "witness": _jsonable(self.witness)}


@dataclass
class VerificationReport:
    suite: str
    spec: object
    checks: list[Check] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, identity: str, ok: bool, witness=None, numeric: bool = False) -> bool:
        status = ("numeric-pass" if numeric else "exact-pass") if ok else "fail"
        self.checks.append(Check(identity, status, None if ok else witness))
        return ok

    def check_zero(self, identity: str, poly: LaurentPolynomial) -> bool:
        return self.check(identity, poly.is_zero(), witness=poly)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = False) -> dict:
        spec = self.spec
        if isinstance(spec, SystemSpec):
            spec = {"n": spec.n, "k": spec.k}
        out = {
            "suite": self.suite,
            "spec": spec,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out

    def summary(self) -> str:
        bad = self.failures()
        head = f"[{'PASS' if not bad else 'FAIL'}] {self.suite} {self.spec}: {len(self.checks) - len(bad)}/{len(self.checks)} checks"
        lines = [head] + [f"    FAIL {c.identity}: {_short(c.witness)}" for c in bad]
        return "\n".join(lines)


def _short(w, limit: int = 200) -> str:
    s = str(w)
    return s if len(s) <= limit else s[:limit] + "..."


def _jsonable(w):
    if w is None or isinstance(w, (bool, int, str)):
        return w
    if isinstance(w, float):
        return w
    if isinstance(w, Fraction):
        return f"{w.numerator}/{w.denominator}"
    if isinstance(w, LaurentPolynomial):
        return {"nvars": w.nvars, "terms": w.to_records()}
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    if isinstance(w, (list, tuple, set, range)):
        return [_jsonable(v) for v in w]
    return str(w)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_rational_point(n: int, rng: random.Random, max_den: int = 7) -> list[Fraction]:
    """A point of the open positive orthant with small-height rational coordinates."""
    return [Fraction(rng.randint(1, 3 * max_den), rng.randint(1, max_den)) for _ in range(n)]


def jacobian(funcs: list[LaurentPolynomial], variables: list[int], point) -> list[list[Fraction]]:
    return [[f.partial_derivative(j).evaluate(point) for j in variables] for f in funcs]


# ---------------------------------------------------------------------------


@_timed
def involution_suite(spec: SystemSpec) -> VerificationReport:
    """Pairwise brackets among the K_i, between K_i and all H_l, and inside the Liouville list."""
    rep = VerificationReport("involution", spec)
    fam = integral_family(spec)
    K = fam.polys
    for i, j in combinations(range(len(K)), 2):
        rep.check_zero(f"{{K{i},K{j}}}", bracket(K[i], K[j], spec))
    if spec.is_boundary:
        return rep
    H = [h.poly for h in fam.rationals]
    for i, Ki in enumerate(K):
        for l, Hl in enumerate(H, start=1):
            rep.check_zero(f"{{K{i},H{l}}}", bracket(Ki, Hl, spec))
    lv = max(spec.r - 1, 0)
    for a, b in combinations(range(lv), 2):
        rep.check_zero(f"{{H{a + 1},H{b + 1}}}", bracket(H[a], H[b], spec))
    rep.check("count n-k-1", len(fam.members()) == spec.n - spec.k - 1, witness=len(fam.members()))
    rep.check("Liouville count [(n+1)/2]", len(fam.liouville()) == (spec.n + 1) // 2,
              witness=len(fam.liouville()))
    return rep


def _plateau_rows(L: list[list[Fraction]], k: int) -> tuple[bool, object]:
    for i in range(1, k + 1):
        row = L[i - 1]
        lo, hi = (k - i + 3) // 2, (k + i + 1) // 2
        for j in range(1, k):
            d = row[j - 1] - row[j]
            if d < 0 or (d == 0) != (lo <= j < hi):
                return False, {"row": i, "j": j, "values": row}
    return True, None


@_timed
def independence_suite(spec: SystemSpec, seed: int = DEFAULT_SEED) -> VerificationReport:
    """Exact Jacobian rank n-k-1 at the all-ones point, with its block shape."""
    if spec.n <= 2 * spec.k + 1:
        raise ValueError(f"{spec}: independence suite needs n > 2k+1")
    n, k = spec.n, spec.k
    rep = VerificationReport("independence", spec)
    fam = integral_family(spec)
    p, q = shift_constants(spec)
    H = hamiltonian(n)
    Hs = [h.poly for h in fam.rationals]
    funcs = [Hl - pl * H for Hl, pl in zip(Hs, p)] + [H] + [Ki - qi * H for Ki, qi in zip(fam.polys[1:], q)]
    ones = [1] * n
    J = jacobian(funcs, list(range(1, n - k + 1)), ones)
    nr = len(Hs)

    top_left = [row[:k] for row in J[:nr]]
    rep.check("zero block (H_l - p_l H) vs x_1..x_k", all(v == 0 for r in top_left for v in r), witness=top_left)
    rep.check("ones row (H)", all(v == 1 for v in J[nr]), witness=J[nr])
    bottom_right = [row[k:] for row in J[nr + 1:]]
    rep.check("zero block (K_i - q_i H) vs middle variables", all(v == 0 for r in bottom_right for v in r),
              witness=bottom_right)
    Lam = [row[:k] for row in J[nr + 1:]]
    ok, w = _plateau_rows(Lam, k)
    rep.check("Lambda row plateau structure", ok, witness=w)
    rep.check("Lambda full rank", exact_rank(Lam) == k, witness=Lam)
    rk = exact_rank(J)
    rep.check("Jacobian rank n-k-1 at 1", rk == n - k - 1, witness={"rank": rk, "jacobian": J})

    members = [P for _, P in fam.members()]
    rng = random.Random(seed)
    pt = random_rational_point(n, rng)
    Jr = jacobian(members, list(range(1, n + 1)), pt)
    rkr = exact_rank(Jr)
    rep.check("full Jacobian rank n-k-1 at random point", rkr == n - k - 1,
              witness={"rank": rkr, "point": pt})
    return rep


def hamiltonian_vector_field(f: LaurentPolynomial, spec: SystemSpec) -> list[LaurentPolynomial]:
    """Components ``{x_i, f}``."""
    return [bracket(LaurentPolynomial.variable(spec.n, i), f, spec) for i in range(1, spec.n + 1)]


@_timed
def noncommutative_rank_suite(spec: SystemSpec, seed: int = DEFAULT_SEED, attempts: int = 5) -> VerificationReport:
    """Hamiltonian vector fields of K_0..K_k span k+1 dimensions at a sampled point."""
    if spec.n <= 2 * spec.k + 1:
        raise ValueError(f"{spec}: rank suite needs n > 2k+1")
    from .dynamics import vector_field

    rep = VerificationReport("rank", spec)
    n = spec.n
    fields = [hamiltonian_vector_field(K_poly(spec, i), spec) for i in range(spec.k + 1)]
    rng = random.Random(seed)
    rank = None
    for attempt in range(attempts):
        pt = random_rational_point(n, rng)
        rows = [[c.evaluate(pt) for c in vf] for vf in fields]
        rank = exact_rank(rows)
        if rank == spec.k + 1:
            break
    rep.check("Hamiltonian vector fields of K_0..K_k independent", rank == spec.k + 1,
              witness={"rank": rank, "attempts": attempts})
    ones = [1] * n
    XH = [float(c.evaluate(ones)) for c in fields[0]]
    A1 = [float(sum(row)) for row in build_A(spec).rows()]
    vf = [float(v) for v in vector_field(spec, ones)]
    rep.check("X_H(1) = A_k 1 = vector_field(1)", XH == A1 == vf, witness={"X_H": XH, "A1": A1, "field": vf})
    return rep


@_timed
def structure_suite(spec: SystemSpec, seed: int = DEFAULT_SEED) -> VerificationReport:
    """Casimir, the maps phi_k / psi / iota, the excluded pullback and cyclic symmetry."""
    rep = VerificationReport("structure", spec)
    n, k = spec.n, spec.k
    x = [LaurentPolynomial.variable(n, i) for i in range(1, n + 1)]

    rank, null = rank_and_nullvector(spec)
    rep.check("rank A_k = n - (n mod 2)", rank == n - n % 2, witness=rank)
    if n % 2:
        C = casimir(spec)
        for i in range(n):
            rep.check_zero(f"{{x{i + 1},C}}", bracket(x[i], C, spec))
        rep.check("null vector = exponents of C", tuple(e for e in C.terms[0][0]) == null,
                  witness={"C": str(C), "null": null})

    if 0 < 2 * k < n:
        m = n - 2 * k
        y = [LaurentPolynomial.variable(m, i) for i in range(1, m + 1)]
        base = SystemSpec(m, 0)
        for i in range(m):
            for j in range(i + 1, m):
                lhs = bracket(pullback_phi(y[i], spec), pullback_phi(y[j], spec), spec)
                rhs = pullback_phi(bracket(y[i], y[j], base), spec)
                rep.check_zero(f"phi Poisson y{i + 1},y{j + 1}", lhs - rhs)
    if 2 * k < n:
        rep.check_zero("phi^*(sum y) - K_k", excluded_pullback(spec) - K_poly(spec, k))

    for i in range(n):
        for j in range(i + 1, n):
            lhs = bracket(apply_psi(x[i]), apply_psi(x[j]), spec)
            rep.check_zero(f"psi anti-Poisson x{i + 1},x{j + 1}", lhs + apply_psi(bracket(x[i], x[j], spec)))
    rng = random.Random(seed)
    for t in range(3):
        a = LaurentPolynomial.monomial([rng.randint(-2, 2) for _ in range(n)], rng.randint(1, 4))
        b = LaurentPolynomial.monomial([rng.randint(-2, 2) for _ in range(n)], rng.randint(1, 4))
        f, g = a + x[0], b + x[-1]
        rep.check_zero(f"psi anti-Poisson random pair {t}",
                       bracket(apply_psi(f), apply_psi(g), spec) + apply_psi(bracket(f, g, spec)))

    chain = reduction_chain(spec)
    want = [SystemSpec(n - t, k - t) for t in range(k + 1)]
    rep.check("reduction chain specs", chain == want, witness=[str(s) for s in chain])
    for src, dst in zip(chain, chain[1:]):
        rep.check(f"reduced matrix {src}->{dst}", reduced_matrix(src, src.n - 1) == build_A(dst).rows(),
                  witness=str(dst))
        for i in range(src.k + 1):
            red, _ = reduce_iota(K_poly(src, i), src.n - 1, src)
            rep.check_zero(f"iota^* K{i} of {src} - K{i} of {dst}", red - K_poly(dst, i))
        red, _ = reduce_iota(hamiltonian(src.n), src.n - 1, src)
        rep.check_zero(f"iota^* H of {src} - H of {dst}", red - hamiltonian(dst.n))

    for i in range(k + 1):
        S = enumerate_S(spec, i)
        K = K_poly(spec, i)
        rep.check(f"K{i} homogeneous of degree {2 * i + 1}", K.degrees() <= {2 * i + 1}
                  and all(c == 1 for _, c in K.items()), witness=sorted(K.degrees()))
        rep.check(f"S{i} method equivalence", (S == enumerate_S(spec, i, "submatrix")) if n <= 11 else True,
                  witness=S)
        bad = [mm for mm in S if i >= 1 and not (mm[i - 1] <= k and mm[i + 1] > n - k)]
        rep.check(f"S{i} corollary bounds", not bad, witness=bad)

    if spec.is_boundary and k >= 1:
        cyc = [(i % n) + 1 for i in range(1, n + 1)]
        for i in range(k + 1):
            K = K_poly(spec, i)
            rep.check_zero(f"cyclic invariance K{i}", K.permute(cyc) - K)
    return rep


SUITES = {
    "involution": involution_suite,
    "independence": independence_suite,
    "rank": noncommutative_rank_suite,
    "structure": structure_suite,
}


def suite_applies(name: str, spec: SystemSpec) -> bool:
    if name in ("independence", "rank"):
        return spec.n > 2 * spec.k + 1
    return True


def all_specs(max_n: int, min_n: int = 1) -> list[SystemSpec]:
    return [SystemSpec(n, k) for n in range(min_n, max_n + 1) for k in range((n - 1) // 2 + 1)]
