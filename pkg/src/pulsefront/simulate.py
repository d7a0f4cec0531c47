"""Direct simulation of ``u_t = (a(x/L) u_x)_x + mu(x/L) u (1 - u)``.

Explicit Euler in conservation form on a fixed domain with zero-flux ends.
Step initial data (``u = 1`` on the left half) produce a front that invades
to the right; its level crossings give the realized speed, which for the
KPP nonlinearity should approach the minimal speed ``c*_L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BlowUp, FrontExited, InsufficientTrace, ValidationError
from .profiles import ProfilePair

CFL_FACTOR = 0.45
DEFAULT_CFL = 0.4
MIN_CROSSINGS = 20
EDGE_CELLS = 10

__all__ = ["SimConfig", "FrontTrace", "SimResult", "run_front", "measure_speed"]


@dataclass
class SimConfig:
    """Simulation parameters.

    Parameters
    ----------
    profiles : ProfilePair
        Unit-cell coefficients; the simulated medium is ``a(x/L)``, ``mu(x/L)``.
    L : float
        Period of the medium.
    domain_length : float
        Length of ``[0, domain_length]``; at least ``50 max(L, 1)``.
    dx : float
        Grid spacing.
    t_end : float
        Final time.
    dt : float, optional
        Time step; defaults to ``0.4 dx^2 / a_M``.
    front_level : float
        Level whose crossing defines the front position.
    records : int
        Number of recorded front positions over ``[0, t_end]``.
    strict : bool
        Enforce the stability and domain-size invariants. Turning this off
        is only meant for probing failure modes.
    """

    profiles: ProfilePair
    L: float
    domain_length: float
    dx: float
    t_end: float
    dt: float | None = None
    front_level: float = 0.5
    records: int = 400
    strict: bool = True

    def __post_init__(self):
        for name in ("L", "domain_length", "dx", "t_end"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be > 0")
        if not 0 < self.front_level < 1:
            raise ValidationError("front_level must lie in (0, 1)")
        limit = CFL_FACTOR * self.dx ** 2 / self.profiles.a_max
        if self.dt is None:
            self.dt = DEFAULT_CFL * self.dx ** 2 / self.profiles.a_max
        if not self.dt > 0:
            raise ValidationError("dt must be > 0")
        if self.strict:
            if self.dt > limit * (1 + 1e-12):
                raise ValidationError(f"dt={self.dt:g} exceeds the stability bound 0.45 dx^2/a_M = {limit:g}")
            if self.domain_length < 50 * max(self.L, 1.0):
                raise ValidationError("domain_length must be >= 50 max(L, 1)")
        if self.records < MIN_CROSSINGS:
            raise ValidationError(f"records must be >= {MIN_CROSSINGS}")


@dataclass
class FrontTrace:
    times: np.ndarray
    positions: np.ndarray

    def __len__(self) -> int:
        return self.times.size


@dataclass
class SimResult:
    measured_speed: float
    fit_residual: float
    pulsation_defect: float
    checkpoints: list[float] = field(default_factory=list)
    steps: int = 0
    u_min: float = float("nan")
    u_max: float = float("nan")


def _crossing(x: np.ndarray, u: np.ndarray, level: float) -> float:
    """Rightmost location where ``u`` drops through ``level`` (linear interpolation)."""
    above = np.nonzero(u >= level)[0]
    if above.size == 0:
        return float("nan")
    i = above[-1]
    if i == u.size - 1:
        return float(x[-1])
    t = (u[i] - level) / (u[i] - u[i + 1])
    return float(x[i] + t * (x[i + 1] - x[i]))


def measure_speed(trace: FrontTrace, window: float = 0.5) -> tuple[float, float]:
    """Least-squares slope of position against time over the trailing window.

    Returns
    -------
    speed, residual
        ``residual`` is the RMS deviation from the fitted line.
    """
    t = np.asarray(trace.times, dtype=float)
    x = np.asarray(trace.positions, dtype=float)
    ok = np.isfinite(x)
    t, x = t[ok], x[ok]
    if t.size < MIN_CROSSINGS:
        raise InsufficientTrace(f"need >= {MIN_CROSSINGS} recorded crossings, got {t.size}")
    keep = t >= t[0] + (1.0 - window) * (t[-1] - t[0])
    t, x = t[keep], x[keep]
    A = np.column_stack((t, np.ones_like(t)))
    coef, *_ = np.linalg.lstsq(A, x, rcond=None)
    resid = x - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


class _Snapshots:
    """Stored states with time derivatives for cubic Hermite interpolation."""

    def __init__(self):
        self.t: list[float] = []
        self.u: list[np.ndarray] = []
        self.du: list[np.ndarray] = []

    def add(self, t, u, du):
        self.t.append(t)
        self.u.append(u.copy())
        self.du.append(du.copy())

    def at(self, t: float) -> np.ndarray:
        ts = np.asarray(self.t)
        j = int(np.clip(np.searchsorted(ts, t) - 1, 0, ts.size - 2))
        t0, t1 = ts[j], ts[j + 1]
        h = t1 - t0
        s = (t - t0) / h
        h00 = 2 * s ** 3 - 3 * s ** 2 + 1
        h10 = s ** 3 - 2 * s ** 2 + s
        h01 = -2 * s ** 3 + 3 * s ** 2
        h11 = s ** 3 - s ** 2
        return h00 * self.u[j] + h10 * h * self.du[j] + h01 * self.u[j + 1] + h11 * h * self.du[j + 1]


def run_front(cfg: SimConfig) -> tuple[FrontTrace, SimResult]:
    """Integrate from step data and measure the front.

    The pulsation defect compares ``u(t + L/c, x + L)`` with ``u(t, x)`` at
    three checkpoint times in the second half of the run (the rightward form
    of the pulsating relation), using the measured ``c``.

    Raises
    ------
    BlowUp
        ``max |u| > 2``.
    FrontExited
        The front comes within 10 cells of either boundary.
    """
    n = int(round(cfg.domain_length / cfg.dx))
    x = np.arange(n + 1) * cfg.dx
    dx, dt = cfg.dx, cfg.dt
    a_face = cfg.profiles.a((x[:-1] + 0.5 * dx) / cfg.L)
    mu = cfg.profiles.mu(x / cfg.L)
    u = np.where(x < 0.5 * cfg.domain_length, 1.0, 0.0)
    # a half-cell value at the step removes the ambiguity of which node holds the jump
    u[np.isclose(x, 0.5 * cfg.domain_length)] = 0.5

    steps = int(math.ceil(cfg.t_end / dt - 1e-9))
    every = max(1, steps // cfg.records)
    coef = a_face / dx ** 2
    flux = np.empty(n)
    rhs = np.empty(n + 1)

    def rate(u):
        np.subtract(u[1:], u[:-1], out=flux)
        np.multiply(flux, coef, out=flux)
        rhs[:-1] = flux
        rhs[-1] = 0.0
        rhs[1:] -= flux
        np.add(rhs, mu * u * (1.0 - u), out=rhs)
        return rhs

    times, positions = [0.0], [_crossing(x, u, cfg.front_level)]
    snaps = _Snapshots()
    edge = EDGE_CELLS * dx
    lo, hi = float(u.min()), float(u.max())
    t = 0.0
    for step in range(1, steps + 1):
        u += dt * rate(u)
        t = step * dt
        if step % every == 0 or step == steps:
            if not np.all(np.abs(u) <= 2.0):
                raise BlowUp(f"max|u| exceeded 2 at t={t:.4g}; the time step is unstable")
            lo, hi = min(lo, float(u.min())), max(hi, float(u.max()))
            pos = _crossing(x, u, cfg.front_level)
            if not (edge < pos < x[-1] - edge):
                raise FrontExited(f"front reached the boundary at t={t:.4g}; enlarge domain_length")
            times.append(t)
            positions.append(pos)
            if t >= 0.5 * cfg.t_end:
                snaps.add(t, u, rate(u))

    trace = FrontTrace(np.array(times), np.array(positions))
    speed, resid = measure_speed(trace)
    defect, checks = _pulsation_defect(cfg, x, snaps, speed)
    return trace, SimResult(speed, resid, defect, checks, steps, lo, hi)


def _pulsation_defect(cfg: SimConfig, x, snaps: _Snapshots, speed: float):
    if speed <= 0 or len(snaps.t) < 2:
        return float("nan"), []
    shift = cfg.L / speed
    t_first, t_last = snaps.t[0], snaps.t[-1]
    if t_last - shift <= t_first:
        return float("nan"), []
    checks = list(np.linspace(t_first, t_last - shift, 5)[1:4])
    inside = x + cfg.L <= x[-1]
    worst = 0.0
    for tc in checks:
        now = snaps.at(tc)
        later = np.interp(x[inside] + cfg.L, x, snaps.at(tc + shift))
        worst = max(worst, float(np.max(np.abs(later - now[inside]))))
    return worst, [float(c) for c in checks]
