"""Minimal front speed ``c*_L = min_{lam > 0} k(lam, L) / lam`` and sweeps in ``L``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .eigen import default_grid, principal_eigenvalue
from .exceptions import BracketFailure, ValidationError
from .profiles import ProfilePair, arithmetic_mean, harmonic_mean

LAMBDA_START = (0.05, 8.0)
LAMBDA_LIMITS = (1e-6, 1e6)
GOLDEN_RTOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

__all__ = [
    "SpeedResult",
    "SweepReport",
    "minimize_ratio",
    "minimal_speed",
    "sweep_L",
    "lambda_star_limit_check",
]


@dataclass
class SpeedResult:
    """Minimizer of ``lam -> k(lam) / lam``.

    ``c_star`` is computed as ``k_at_min / lambda_star`` from the stored
    values, so the identity holds bit for bit.
    """

    c_star: float
    lambda_star: float
    k_at_min: float
    L: float
    bracket: tuple[float, float]
    evals: int
    n_grid: int | None = None

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "c_star": self.c_star,
            "lambda_star": self.lambda_star,
            "k_at_min": self.k_at_min,
            "n_grid": self.n_grid,
            "bracket": list(self.bracket),
            "evals": self.evals,
        }


@dataclass
class SweepReport:
    rows: list[SpeedResult]
    d1: float = float("nan")
    d2: float = float("nan")
    c_limit: float = float("nan")

    columns = ("L", "c_star", "lambda_star", "k_at_min", "n_grid")

    @property
    def L(self) -> np.ndarray:
        return np.array([r.L for r in self.rows])

    @property
    def c_star(self) -> np.ndarray:
        return np.array([r.c_star for r in self.rows])

    @property
    def lambda_star(self) -> np.ndarray:
        return np.array([r.lambda_star for r in self.rows])

    def table(self) -> list[tuple]:
        return [(r.L, r.c_star, r.lambda_star, r.k_at_min, r.n_grid) for r in self.rows]


@dataclass
class _Counter:
    fn: Callable[[float], float]
    calls: int = 0
    cache: dict = field(default_factory=dict)

    def __call__(self, lam: float) -> float:
        if lam not in self.cache:
            self.calls += 1
            self.cache[lam] = self.fn(lam)
        return self.cache[lam]


def minimize_ratio(k_of_lambda: Callable[[float], float], start: tuple[float, float] = LAMBDA_START,
                   limits: tuple[float, float] = LAMBDA_LIMITS, rtol: float = GOLDEN_RTOL,
                   probes: int = 9):
    """Minimize ``q(lam) = k(lam) / lam`` over ``lam > 0``.

    A geometric probe grid over ``start`` is extended (upper end doubled,
    lower end halved) until the smallest probe is interior, then refined by
    golden-section search on the two neighbouring probes.

    Returns
    -------
    lam, k, bracket, evals
    """
    k = _Counter(k_of_lambda)
    q = lambda lam: k(lam) / lam  # noqa: E731
    grid = list(np.geomspace(start[0], start[1], probes))
    vals = [q(x) for x in grid]
    while True:
        i = int(np.argmin(vals))
        if 0 < i < len(grid) - 1:
            break
        if i == 0:
            x = grid[0] / 2.0
            if x < limits[0]:
                raise BracketFailure(f"q(lam) still decreasing toward lam={grid[0]:.3g}")
            grid.insert(0, x)
            vals.insert(0, q(x))
        else:
            x = grid[-1] * 2.0
            if x > limits[1]:
                raise BracketFailure(f"q(lam) still decreasing toward lam={grid[-1]:.3g}")
            grid.append(x)
            vals.append(q(x))
    lo, hi = float(grid[i - 1]), float(grid[i + 1])
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    qc, qd = q(c), q(d)
    while b - a > rtol * 0.5 * (a + b):
        if qc <= qd:
            b, d, qd = d, c, qc
            c = b - _INVPHI * (b - a)
            qc = q(c)
        else:
            a, c, qc = c, d, qd
            d = a + _INVPHI * (b - a)
            qd = q(d)
    best = min(k.cache, key=lambda x: (k.cache[x] / x, x))
    return float(best), float(k.cache[best]), (lo, hi), k.calls


def _initial_lambda(profiles: ProfilePair) -> float:
    mu_a = arithmetic_mean(profiles.mu)
    if mu_a <= 0:
        return 1.0
    return math.sqrt(mu_a / harmonic_mean(profiles.a))


def _pick_grid(profiles: ProfilePair, L: float, n: int | None) -> int:
    if n is not None:
        return n
    return principal_eigenvalue(profiles, _initial_lambda(profiles), L, vectors=False).n


def _check_L(L: float) -> float:
    L = float(L)
    if not np.isfinite(L) or L <= 0:
        raise ValidationError("L must be > 0")
    return L


def minimal_speed(profiles: ProfilePair, L: float, n: int | None = None, *,
                  start: tuple[float, float] = LAMBDA_START) -> SpeedResult:
    """Minimal pulsating-front speed for period ``L``.

    Parameters
    ----------
    profiles : ProfilePair
    L : float
        Period (> 0).
    n : int, optional
        Eigen grid size. When omitted it is chosen once by the eigen module's
        refinement policy at the homogenized minimizer and then held fixed so
        that ``q`` is a smooth function of ``lam`` during the search.
    start : (float, float)
        Initial lambda probe interval.

    Raises
    ------
    BracketFailure
        No interior minimum inside ``[1e-6, 1e6]``.
    """
    L = _check_L(L)
    n = _pick_grid(profiles, L, n)
    kfun = lambda lam: principal_eigenvalue(profiles, lam, L, n, vectors=False).k  # noqa: E731
    lam, kmin, bracket, evals = minimize_ratio(kfun, start=start)
    return SpeedResult(c_star=kmin / lam, lambda_star=lam, k_at_min=kmin, L=L,
                       bracket=bracket, evals=evals, n_grid=n)


def _quadratic_fit(L: Sequence[float], c: Sequence[float]) -> np.ndarray:
    """Coefficients ``(p0, p1, p2)`` of the parabola through three points."""
    V = np.vander(np.asarray(L, dtype=float), 3, increasing=True)
    return np.linalg.solve(V, np.asarray(c, dtype=float))


def sweep_L(profiles: ProfilePair, L_values: Sequence[float], n: int | None = None) -> SweepReport:
    """``c*_L`` over a set of periods with derivative estimates at ``L -> 0``.

    The grid ``n`` is shared by every row. ``d1`` and ``d2`` come from the
    parabola through the three smallest periods, i.e. Richardson
    extrapolation of the first and second derivatives to ``L = 0``;
    ``c_limit`` is its intercept.
    """
    L_values = [_check_L(L) for L in L_values]
    if not L_values:
        raise ValidationError("L_values must be non-empty")
    if any(b <= a for a, b in zip(L_values, L_values[1:])):
        raise ValidationError("L_values must be strictly increasing")
    if n is None:
        n = max(_pick_grid(profiles, L_values[-1], None), default_grid())
    rows = [minimal_speed(profiles, L, n) for L in L_values]
    report = SweepReport(rows=rows)
    if len(rows) >= 3:
        p = _quadratic_fit(L_values[:3], [r.c_star for r in rows[:3]])
        report.c_limit, report.d1, report.d2 = float(p[0]), float(p[1]), float(2.0 * p[2])
    return report


def lambda_star_limit_check(profiles: ProfilePair, L_values: Sequence[float],
                            n: int | None = None) -> list[dict]:
    """``lambda*_L`` next to its homogenized limit ``sqrt(<mu>_A / <a>_H)``."""
    target = _initial_lambda(profiles)
    rows = []
    for L in L_values:
        res = minimal_speed(profiles, L, n)
        rows.append({"L": res.L, "lambda_star": res.lambda_star, "lambda_hom": target,
                     "gap": abs(res.lambda_star - target)})
    return rows
