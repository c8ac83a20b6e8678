"""Numerical flow of LV(n, k) and conservation monitoring of its integrals."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exactalg import FloatEvaluator
from .integrals import integral_family
from .poisson import SystemSpec, build_A

__all__ = [
    "vector_field",
    "dopri5",
    "integrate",
    "TrajectoryRecord",
    "IntegrationError",
    "StepSizeUnderflow",
    "StateOverflow",
    "DomainWarning",
    "random_initial_points",
    "gradient_rate",
]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A_ROWS = [np.array(row) for row in _A]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4
# continuous extension: y(t + th*h) = y + h * K^T (P @ [th, th^2, th^3, th^4])
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

TINY = 1e-300


class IntegrationError(RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    def __init__(self, last_time: float):
        super().__init__(f"step size underflow; last accepted time t = {last_time!r}")
        self.last_time = last_time


class StateOverflow(IntegrationError):
    def __init__(self, last_time: float):
        super().__init__(f"state left the finite range after t = {last_time!r}")
        self.last_time = last_time


class DomainWarning(UserWarning):
    pass


def vector_field(spec: SystemSpec, state) -> np.ndarray:
    """``xdot_i = x_i * sum_j (A_k)_{ij} x_j``."""
    x = np.asarray(state, dtype=float)
    if x.shape != (spec.n,):
        raise ValueError(f"state must have {spec.n} coordinates")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite state")
    return x * (_float_matrix(spec) @ x)


_MATS: dict[SystemSpec, np.ndarray] = {}


def _float_matrix(spec: SystemSpec) -> np.ndarray:
    if spec not in _MATS:
        _MATS[spec] = np.array(build_A(spec).rows(), dtype=float)
    return _MATS[spec]


@dataclass
class _Solution:
    t: np.ndarray
    y: np.ndarray
    nsteps: int
    nrejected: int
    aborted: bool = False


def _initial_step(f, t0, y0, f0, direction, rtol, atol):
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = f(t0 + h0 * direction, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def dopri5(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t_end: float,
    rtol: float,
    atol: float | None = None,
    t_eval: Sequence[float] | None = None,
    guard: Callable[[np.ndarray], bool] | None = None,
) -> _Solution:
    """Adaptive Dormand-Prince 5(4) with local extrapolation and dense output.

    ``t_eval`` (monotone in the direction of integration) is filled from the
    continuous extension.  ``guard(y)`` returning True stops the run early
    (``aborted`` is set); samples past that point are dropped.
    """
    atol = rtol if atol is None else atol
    y = np.array(y0, dtype=float)
    t = float(t0)
    direction = 1.0 if t_end >= t0 else -1.0
    if t_eval is None:
        t_eval = [t0, t_end]
    t_eval = np.asarray(t_eval, dtype=float)
    out_t, out_y = [], []
    idx = 0
    while idx < len(t_eval) and direction * (t_eval[idx] - t) <= 0:
        out_t.append(t_eval[idx])
        out_y.append(y.copy())
        idx += 1

    fy = f(t, y)
    h = _initial_step(f, t, y, fy, direction, rtol, atol)
    K = np.empty((7, y.size))
    nsteps = nrej = 0
    while direction * (t_end - t) > 0:
        min_h = 16 * np.spacing(max(abs(t), 1.0))
        if h < min_h:
            raise StepSizeUnderflow(t)
        h = min(h, abs(t_end - t))
        hs = h * direction
        K[0] = fy
        for s in range(1, 7):
            K[s] = f(t + _C[s] * hs, y + hs * (_A_ROWS[s] @ K[:s]))
        y_new = y + hs * (_B5 @ K)
        if not np.all(np.isfinite(y_new)):
            if h <= min_h:
                raise StateOverflow(t)
            h *= 0.2
            nrej += 1
            continue
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((hs * (_E @ K) / scale) ** 2))
        if err <= 1.0:
            t_new = t + hs if abs(t_end - (t + hs)) > min_h else t_end
            Q = None
            while idx < len(t_eval) and direction * (t_eval[idx] - t_new) <= 0:
                th = (t_eval[idx] - t) / hs
                if Q is None:
                    Q = K.T @ _P
                out_t.append(t_eval[idx])
                out_y.append(y + hs * (Q @ np.array([th, th**2, th**3, th**4])))
                idx += 1
            t, y = t_new, y_new
            fy = K[6]  # first same as last
            nsteps += 1
            fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            h *= fac
            if guard is not None and guard(y):
                return _Solution(np.array(out_t), np.array(out_y), nsteps, nrej, aborted=True)
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
            nrej += 1
    return _Solution(np.array(out_t), np.array(out_y).reshape(-1, y.size), nsteps, nrej)


@dataclass
class TrajectoryRecord:
    spec: SystemSpec
    times: np.ndarray
    states: np.ndarray
    names: list[str] = field(default_factory=list)
    values: np.ndarray | None = None
    drifts: np.ndarray | None = None
    nsteps: int = 0
    nrejected: int = 0
    aborted: bool = False

    def max_drift(self) -> dict[str, float]:
        return {name: float(np.max(self.drifts[:, c])) for c, name in enumerate(self.names)}

    def write_csv(self, path) -> None:
        n = self.spec.n
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"x{i}" for i in range(1, n + 1)] + list(self.names))
            for r in range(len(self.times)):
                w.writerow(
                    [repr(float(self.times[r]))]
                    + [repr(float(v)) for v in self.states[r]]
                    + [repr(float(v)) for v in self.drifts[r]]
                )


def integrate(
    spec: SystemSpec,
    x0,
    t_end: float,
    tol: float = 1e-12,
    samples: int = 201,
    integrals: list[tuple[str, object]] | None = None,
) -> TrajectoryRecord:
    """Integrate LV(n, k) from ``x0`` over ``[0, t_end]`` and record drifts.

    Relative drift of an integral ``I`` is ``|I(x(t)) - I(x0)| / max(1, |I(x0)|)``.
    By default every member of the integral family is monitored, plus the
    Casimir for odd ``n``.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (spec.n,) or not np.all(np.isfinite(x0)):
        raise ValueError(f"x0 must be {spec.n} finite numbers")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not 1e-14 <= tol <= 1e-3:
        raise ValueError("tol must lie in [1e-14, 1e-3]")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    A = _float_matrix(spec)

    def rhs(_t, x):
        return x * (A @ x)

    def guard(y):
        return bool(np.any(np.abs(y) < TINY))

    # purely relative control: coordinates may decay exponentially yet stay in denominators
    sol = dopri5(rhs, 0.0, x0, t_end, tol, 0.0, np.linspace(0.0, t_end, samples), guard)
    if sol.aborted:
        warnings.warn(
            f"{spec}: a coordinate dropped below {TINY:g}; trajectory truncated at t = {sol.t[-1]}",
            DomainWarning,
            stacklevel=2,
        )
    if integrals is None:
        integrals = integral_family(spec).monitored()
    names = [name for name, _ in integrals]
    evals = [FloatEvaluator(p) for _, p in integrals]
    values = np.column_stack([ev(sol.y) for ev in evals]) if evals else np.zeros((len(sol.t), 0))
    ref = values[0]
    drifts = np.abs(values - ref) / np.maximum(1.0, np.abs(ref))
    return TrajectoryRecord(spec, sol.t, sol.y, names, values, drifts, sol.nsteps, sol.nrejected, sol.aborted)


def integrate_back(spec: SystemSpec, x_end, t_end: float, tol: float) -> np.ndarray:
    """State at time 0 from the state at ``t_end`` (reverse-time run)."""
    A = _float_matrix(spec)
    sol = dopri5(lambda _t, x: x * (A @ x), t_end, x_end, 0.0, tol, 0.0, [t_end, 0.0])
    return sol.y[-1]


def random_initial_points(n: int, count: int, seed: int, low: float = 0.5, high: float = 1.5) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(low, high, size=(count, n))


def gradient_rate(spec: SystemSpec, poly, states: np.ndarray) -> np.ndarray:
    """``dI/dt = grad I . f`` along ``states``, with the exact gradient of ``I``."""
    grads = [FloatEvaluator(poly.partial_derivative(i)) for i in range(1, spec.n + 1)]
    A = _float_matrix(spec)
    states = np.atleast_2d(states)
    field_vals = states * (states @ A.T)
    g = np.column_stack([ev(states) for ev in grads])
    return np.sum(g * field_vals, axis=1)
