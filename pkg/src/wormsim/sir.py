"""Deterministic mass-action SIR dynamics of a worm outbreak.

    dS/dt = -beta S I / N
    dI/dt =  beta S I / N - delta I
    dP/dt =  delta I

with beta derived from the mobility model (see :mod:`wormsim.kinetics`) rather
than fitted. Also provides the outbreak threshold test and the final-size
root P_inf = N (1 - exp(-(beta/(delta N)) P_inf)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinetics import KineticParams, beta_chord

__all__ = [
    "SirParams",
    "SirState",
    "SirSeries",
    "sir_derivative",
    "integrate_sir",
    "epidemic_threshold",
    "final_size",
    "peak_infectives",
]


@dataclass(frozen=True)
class SirParams:
    beta: float   # transmission rate, /day
    delta: float  # recovery/patch rate, /day
    n: float      # total population size

    def __post_init__(self):
        if self.beta < 0 or self.delta < 0:
            raise ValueError("beta and delta must be nonnegative")
        if self.n < 1:
            raise ValueError(f"population must be >= 1, got {self.n}")


@dataclass(frozen=True)
class SirState:
    s: float
    i: float
    p_rec: float

    def __post_init__(self):
        if min(self.s, self.i, self.p_rec) < -1e-9:
            raise ValueError(f"negative compartment in {self}")

    @property
    def total(self) -> float:
        return self.s + self.i + self.p_rec


@dataclass(frozen=True)
class SirSeries:
    """Time-indexed (S, I, P) trajectory. Immutable once produced."""

    times: np.ndarray  # (k,), days, strictly increasing
    s: np.ndarray
    i: np.ndarray
    p_rec: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> SirState:
        return SirState(float(self.s[k]), float(self.i[k]), float(self.p_rec[k]))

    def to_csv(self, path) -> None:
        data = np.column_stack([self.times, self.s, self.i, self.p_rec])
        np.savetxt(path, data, delimiter=",", header="t,s,i,p", comments="", fmt="%.10g")

    @classmethod
    def from_csv(cls, path) -> "SirSeries":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3])


def sir_derivative(state: SirState, params: SirParams) -> tuple[float, float, float]:
    """Right-hand side (dS/dt, dI/dt, dP/dt); components sum to zero exactly."""
    infection = params.beta * state.s * state.i / params.n
    recovery = params.delta * state.i
    return (-infection, infection - recovery, recovery)


def _rhs(y: np.ndarray, beta: float, delta: float, n: float) -> np.ndarray:
    infection = beta * y[0] * y[1] / n
    recovery = delta * y[1]
    return np.array([-infection, infection - recovery, recovery])


def integrate_sir(params: SirParams, init: SirState, t_end: float,
                  dt: float | None = None) -> SirSeries:
    """Integrate the SIR system with the classical fixed-step 4th-order
    Runge-Kutta scheme.

    The default step is 0.01/max(beta, delta): the system is smooth and
    low-dimensional, and a fixed step keeps runs bit-reproducible. The final
    partial step is shortened so the series ends exactly at t_end.
    """
    if dt is None:
        dt = 0.01 / max(params.beta, params.delta, 1e-12)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < dt:
        raise ValueError(f"t_end must be >= dt, got t_end={t_end}, dt={dt}")

    n_steps = int(math.ceil(t_end / dt - 1e-12))
    times = np.minimum(np.arange(n_steps + 1) * dt, t_end)
    out = np.empty((n_steps + 1, 3))
    y = np.array([init.s, init.i, init.p_rec], dtype=float)
    out[0] = y
    beta, delta, n = params.beta, params.delta, params.n
    for k in range(n_steps):
        h = times[k + 1] - times[k]
        k1 = _rhs(y, beta, delta, n)
        k2 = _rhs(y + 0.5 * h * k1, beta, delta, n)
        k3 = _rhs(y + 0.5 * h * k2, beta, delta, n)
        k4 = _rhs(y + h * k3, beta, delta, n)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    out = np.clip(out, 0.0, None)
    return SirSeries(times, out[:, 0], out[:, 1], out[:, 2])


def epidemic_threshold(params: KineticParams) -> bool:
    """True iff the chord-model transmission rate strictly exceeds the
    recovery rate, 2 R rho v_bar p > delta (equivalently rho > rho_c)."""
    return beta_chord(params) > params.delta


def final_size(params: SirParams) -> float:
    """Largest nonnegative root of P = N (1 - exp(-(beta/(delta N)) P)),
    the total ever-infected count. Returns 0 at or below threshold.

    Solved in the fraction z = P/N by damped fixed-point iteration of
    z <- 1 - exp(-r0 z) seeded at z = 1, with a bisection fallback; the map
    is a contraction near the upper root for r0 > 1.
    """
    if params.beta == 0.0:
        return 0.0
    if params.delta <= 0.0:
        return params.n  # no recovery: the r0 -> inf limit, z -> 1
    ratio = params.beta / params.delta
    if ratio <= 1.0:
        return 0.0

    def g(z: float) -> float:
        return 1.0 - math.exp(-ratio * z)

    z = 1.0
    for _ in range(200):
        z_new = 0.5 * (z + g(z))
        if abs(z_new - z) < 1e-15:
            z = z_new
            break
        z = z_new
    if abs(g(z) - z) > 1e-12:
        # bisection on f(z) = g(z) - z, which is positive just above 0 and
        # negative at 1 for r0 > 1
        lo, hi = 1e-12, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) - mid > 0.0:
                lo = mid
            else:
                hi = mid
        z = 0.5 * (lo + hi)
    return params.n * z


def peak_infectives(series: SirSeries) -> tuple[float, float]:
    """(t_peak, i_peak): earliest sample with maximal infective count."""
    if len(series) == 0:
        raise ValueError("empty series")
    k = int(np.argmax(series.i))
    return float(series.times[k]), float(series.i[k])
