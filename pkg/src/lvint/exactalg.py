"""Exact multivariate Laurent polynomials over the rationals.

A polynomial is an immutable mapping from integer exponent vectors (negative
entries allowed) to nonzero :class:`fractions.Fraction` coefficients.  Every
symbolic object in the package (integrals, brackets, Lax entries) is one of
these, so equality checks are exact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "LaurentPolynomial",
    "VariableCountError",
    "EvaluationDomainError",
    "add",
    "mul",
    "partial_derivative",
    "evaluate",
    "evaluate_float",
    "exact_rank",
    "as_fraction",
]


class VariableCountError(ValueError):
    pass


class EvaluationDomainError(ZeroDivisionError):
    """A zero coordinate was raised to a negative power."""

    def __init__(self, var_index: int):
        super().__init__(f"x{var_index} = 0 appears with a negative exponent")
        self.var_index = var_index


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("float coefficients are not exact; pass a Fraction or str")
    return Fraction(value)


class LaurentPolynomial:
    """Laurent polynomial in ``x1..x{nvars}`` with rational coefficients.

    Parameters
    ----------
    nvars : int
        Number of variables.
    terms : mapping, optional
        ``{exponent tuple: coefficient}``.  Zero coefficients are dropped and
        repeated keys are impossible, so the stored form is canonical.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = int(nvars)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.nvars:
                    raise VariableCountError(
                        f"exponent vector {exp} has length {len(exp)}, expected {self.nvars}"
                    )
                c = as_fraction(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> LaurentPolynomial:
        # trusted constructor: keys are tuples of correct length, values nonzero Fractions
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> LaurentPolynomial:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value=1) -> LaurentPolynomial:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int) -> LaurentPolynomial:
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> LaurentPolynomial:
        """The coordinate ``x_index`` (1-based)."""
        _check_index(index, nvars)
        exp = [0] * nvars
        exp[index - 1] = 1
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> LaurentPolynomial:
        return cls(len(exponents), {tuple(exponents): coeff})

    @classmethod
    def linear_sum(cls, nvars: int, indices: Iterable[int]) -> LaurentPolynomial:
        """``sum(x_i for i in indices)`` with 1-based indices."""
        out = cls.zero(nvars)
        for i in indices:
            out = out + cls.variable(nvars, i)
        return out

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        """Terms sorted by descending lexicographic exponent order."""
        return tuple(sorted(self._terms.items(), reverse=True))

    def items(self):
        return self._terms.items()

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(min(e, default=0) >= 0 for e in self._terms)

    def degrees(self) -> set[int]:
        return {sum(e) for e in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def variables(self) -> set[int]:
        """1-based indices of variables that occur with a nonzero exponent."""
        out = set()
        for e in self._terms:
            out.update(i + 1 for i, v in enumerate(e) if v)
        return out

    # ring operations ------------------------------------------------------

    def _check(self, other: LaurentPolynomial):
        if self.nvars != other.nvars:
            raise VariableCountError(f"{self.nvars} variables vs {other.nvars}")

    def _coerce(self, other) -> LaurentPolynomial | None:
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return LaurentPolynomial.constant(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPolynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            c = as_fraction(other)
            if not c:
                return LaurentPolynomial.zero(self.nvars)
            return LaurentPolynomial._raw(self.nvars, {e: c * v for e, v in self._terms.items()})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, 0) + ca * cb
        return LaurentPolynomial._raw(self.nvars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPolynomial._raw(
                self.nvars, {tuple(power * v for v in e): c ** power}
            )
        out = LaurentPolynomial.one(self.nvars)
        base = self
        while power:
            if power & 1:
                out = out * base
            base = base * base
            power >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPolynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # calculus and evaluation ---------------------------------------------

    def partial_derivative(self, var_index: int) -> LaurentPolynomial:
        _check_index(var_index, self.nvars)
        s = var_index - 1
        terms = {}
        for e, c in self._terms.items():
            p = e[s]
            if p:
                ne = list(e)
                ne[s] = p - 1
                terms[tuple(ne)] = c * p
        return LaurentPolynomial._raw(self.nvars, terms)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise VariableCountError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [as_fraction(v) for v in point]
        for e in self._terms:
            for i, p in enumerate(e):
                if p < 0 and pt[i] == 0:
                    raise EvaluationDomainError(i + 1)
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, p in zip(pt, e):
                if p:
                    v *= x ** p
            total += v
        return total

    def compile(self) -> FloatEvaluator:
        return FloatEvaluator(self)

    def evaluate_float(self, point) -> float:
        return float(self.compile()(np.asarray(point, dtype=float)))

    # structural maps -----------------------------------------------------

    def map_monomials(self, nvars: int, fn) -> LaurentPolynomial:
        """Apply ``fn`` to every exponent vector; coefficients are summed on collision."""
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self._terms.items():
            ne = tuple(fn(e))
            if len(ne) != nvars:
                raise VariableCountError("monomial map produced wrong length")
            terms[ne] = terms.get(ne, 0) + c
        return LaurentPolynomial._raw(nvars, {e: c for e, c in terms.items() if c})

    def permute(self, perm: Sequence[int]) -> LaurentPolynomial:
        """Substitute ``x_i -> x_{perm[i-1]}`` (1-based targets)."""
        if sorted(perm) != list(range(1, self.nvars + 1)):
            raise ValueError("not a permutation of 1..nvars")

        def fn(e):
            out = [0] * self.nvars
            for i, p in enumerate(e):
                out[perm[i] - 1] += p
            return out

        return self.map_monomials(self.nvars, fn)

    def substitute_zero(self, var_indices: Iterable[int], drop: bool = True) -> LaurentPolynomial:
        """Set the given variables to 0.

        Terms containing a positive power of a zeroed variable vanish; a
        negative power is a pole and raises :class:`EvaluationDomainError`.
        With ``drop`` the zeroed slots are removed and the remaining
        variables renumbered in order.
        """
        idx = sorted({i - 1 for i in var_indices})
        for i in idx:
            _check_index(i + 1, self.nvars)
        keep = [i for i in range(self.nvars) if i not in set(idx)]
        terms = {}
        for e, c in self._terms.items():
            killed = False
            for i in idx:
                if e[i] < 0:
                    raise EvaluationDomainError(i + 1)
                if e[i] > 0:
                    killed = True
            if killed:
                continue
            ne = tuple(e[i] for i in keep) if drop else e
            terms[ne] = c
        return LaurentPolynomial._raw(len(keep) if drop else self.nvars, terms)

    def extend(self, nvars: int) -> LaurentPolynomial:
        """Embed into a ring with extra trailing variables."""
        if nvars < self.nvars:
            raise VariableCountError("cannot shrink")
        pad = (0,) * (nvars - self.nvars)
        return LaurentPolynomial._raw(nvars, {e + pad: c for e, c in self._terms.items()})

    def collect(self, slots: Sequence[int]) -> dict[tuple[int, ...], LaurentPolynomial]:
        """Split off the given 1-based variables as a coefficient dictionary.

        Returns ``{exponents of slots: coefficient polynomial in the rest}``.
        """
        sl = [s - 1 for s in slots]
        rest = [i for i in range(self.nvars) if i not in set(sl)]
        out: dict[tuple[int, ...], dict] = {}
        for e, c in self._terms.items():
            key = tuple(e[i] for i in sl)
            out.setdefault(key, {})[tuple(e[i] for i in rest)] = c
        return {k: LaurentPolynomial._raw(len(rest), v) for k, v in out.items()}

    # serialization --------------------------------------------------------

    def to_records(self) -> list[dict]:
        return [{"coeff": _fmt_fraction(c), "exp": list(e)} for e, c in self.terms]

    @classmethod
    def from_records(cls, nvars: int, records: Iterable[Mapping]) -> LaurentPolynomial:
        terms: dict[tuple[int, ...], Fraction] = {}
        for r in records:
            e = tuple(int(v) for v in r["exp"])
            terms[e] = terms.get(e, 0) + Fraction(str(r["coeff"]))
        return cls(nvars, terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.terms:
            mono = "*".join(
                f"x{i + 1}" if p == 1 else f"x{i + 1}^{p}" for i, p in enumerate(e) if p
            )
            mag = abs(c)
            if not mono:
                body = _fmt_fraction(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_fraction(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.nvars}, {str(self)!r})"

    @classmethod
    def parse(cls, text: str, nvars: int) -> LaurentPolynomial:
        """Inverse of ``str``: ``"3/2*x1^2*x3^-1 - x2 + 1"``."""
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty polynomial text")
        if src == "0":
            return cls.zero(nvars)
        if src[0] not in "+-":
            src = "+" + src
        # split at +/- that are not part of an exponent (x1^-2)
        chunks = re.findall(r"[+-](?:[^+\-^]|\^-?)+", src)
        if "".join(chunks) != src:
            raise ValueError(f"cannot parse polynomial {text!r}")
        out = cls.zero(nvars)
        for chunk in chunks:
            sign = -1 if chunk[0] == "-" else 1
            coeff = Fraction(sign)
            exp = [0] * nvars
            for factor in chunk[1:].split("*"):
                m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", factor)
                if m:
                    i = int(m.group(1))
                    _check_index(i, nvars)
                    exp[i - 1] += int(m.group(2) or 1)
                elif re.fullmatch(r"\d+(?:/\d+)?", factor):
                    coeff *= Fraction(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            out = out + cls(nvars, {tuple(exp): coeff})
        return out


class FloatEvaluator:
    """Vectorised IEEE-double evaluation of a fixed polynomial."""

    def __init__(self, poly: LaurentPolynomial):
        self.nvars = poly.nvars
        items = poly.terms
        self.exps = np.array([e for e, _ in items], dtype=float).reshape(len(items), poly.nvars)
        self.coeffs = np.array([float(c) for _, c in items], dtype=float)

    def __call__(self, x: np.ndarray):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.nvars:
            raise VariableCountError(f"point has {x.shape[-1]} coordinates, expected {self.nvars}")
        if not len(self.coeffs):
            return np.zeros(x.shape[:-1])
        with np.errstate(divide="ignore"):
            mon = np.prod(x[..., None, :] ** self.exps, axis=-1)
        return mon @ self.coeffs


def _check_index(index: int, nvars: int):
    if not 1 <= index <= nvars:
        raise IndexError(f"variable index {index} outside 1..{nvars}")


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def add(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    a._check(b)
    return a + b


def mul(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    a._check(b)
    return a * b


def partial_derivative(a: LaurentPolynomial, var_index: int) -> LaurentPolynomial:
    return a.partial_derivative(var_index)


def evaluate(a: LaurentPolynomial, point: Sequence) -> Fraction:
    return a.evaluate(point)


def evaluate_float(a: LaurentPolynomial, point) -> float:
    if not np.all(np.isfinite(np.asarray(point, dtype=float))):
        raise ValueError("non-finite evaluation point")
    for e in a._terms:
        for i, p in enumerate(e):
            if p < 0 and point[i] == 0:
                raise EvaluationDomainError(i + 1)
    return a.evaluate_float(point)


def exact_rank(matrix: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Rows are first cleared of denominators, which does not change the rank,
    so the elimination runs entirely in integers.
    """
    rows = []
    for row in matrix:
        fr = [as_fraction(v) for v in row]
        den = math.lcm(*(v.denominator for v in fr)) if fr else 1
        rows.append([int(v * den) for v in fr])
    if not rows or not rows[0]:
        return 0
    m = [r[:] for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (p * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank
