"""Small-period analytics: homogenized speed, the curvature coefficient
``gamma`` of ``c*_L`` at ``L = 0``, the mean-zero slope, and the first
corrector ``phi1`` of the rescaled eigenfunction.

With ``a_H`` the harmonic mean of ``a`` and ``mu_A`` the mean of ``mu``::

    A(x)  = int_0^x mu + mu_A a_H int_0^x 1/a - 2 mu_A x
    gamma = 2 sqrt(a_H / mu_A) * [ int A^2/a - a_H (int A/a)^2 ]

``gamma >= 0`` by Cauchy-Schwarz, with equality exactly when
``mu / mu_A + a_H / a`` is identically 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .exceptions import IdenticallyZeroGrowth, NonPositiveMeanGrowth, NotMeanZero
from .profiles import (
    DEFAULT_QUADRATURE_POINTS,
    Constant,
    PiecewiseConstant,
    ProfilePair,
    arithmetic_mean,
    cumulative_integral,
    harmonic_mean,
    midpoint_grid,
)

DEGENERACY_TOL = 1e-9
MEAN_ZERO_TOL = 1e-12

__all__ = [
    "HomogReport",
    "MeanZeroReport",
    "gamma",
    "beta_mean_zero",
    "phi1_closed_form",
    "degeneracy_function",
]


@dataclass
class HomogReport:
    a_H: float
    mu_A: float
    c_hom: float
    lambda_hom: float
    gamma: float
    degenerate: bool
    degeneracy_defect: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MeanZeroReport:
    beta: float
    slope: float
    lambda_slope: float
    a_H: float

    def to_dict(self) -> dict:
        return asdict(self)


def _segment_edges(profiles: ProfilePair) -> np.ndarray | None:
    """Common breakpoints when both profiles are piecewise constant, else None."""
    edges = {0.0, 1.0}
    for prof in (profiles.a, profiles.mu):
        if isinstance(prof, PiecewiseConstant):
            edges.update(float(b) for b in prof.breakpoints)
        elif not isinstance(prof, Constant):
            return None
    return np.array(sorted(edges))


class _Cell:
    """Quadrature data shared by the coupled integrals.

    On the segment path every integrand is a polynomial of degree <= 2 on
    each segment and is integrated exactly; otherwise the midpoint rule with
    spectrally integrated antiderivatives is used.
    """

    def __init__(self, profiles: ProfilePair, n: int):
        self.profiles = profiles
        self.edges = _segment_edges(profiles)
        if self.edges is not None:
            mid = 0.5 * (self.edges[1:] + self.edges[:-1])
            self.width = np.diff(self.edges)
            self.inv_a = 1.0 / profiles.a(mid)
            self.mu = profiles.mu(mid)
            self.x = self.edges
            self.cum_mu = np.concatenate(([0.0], np.cumsum(self.mu * self.width)))
            self.cum_inv_a = np.concatenate(([0.0], np.cumsum(self.inv_a * self.width)))
            self.mu_A = float(self.cum_mu[-1])
            self.a_H = 1.0 / float(self.cum_inv_a[-1])
        else:
            self.x = midpoint_grid(n)
            self.inv_a = 1.0 / profiles.a(self.x)
            self.mu = profiles.mu(self.x)
            self.cum_mu = cumulative_integral(profiles.mu, self.x, n=n)
            self.cum_inv_a = cumulative_integral(profiles.a, self.x, reciprocal=True, n=n)
            self.mu_A = arithmetic_mean(profiles.mu, n)
            self.a_H = harmonic_mean(profiles.a, n)

    def weighted(self, A: np.ndarray) -> tuple[float, float]:
        """``(int A/a, int A^2/a)`` for ``A`` given at the cell's points."""
        if self.edges is None:
            return float(np.mean(A * self.inv_a)), float(np.mean(A * A * self.inv_a))
        A0, A1 = A[:-1], A[1:]
        first = np.sum(self.inv_a * self.width * 0.5 * (A0 + A1))
        second = np.sum(self.inv_a * self.width * (A0 * A0 + A0 * A1 + A1 * A1) / 3.0)
        return float(first), float(second)

    def mean(self, f: np.ndarray) -> float:
        """``int_0^1 f`` for ``f`` linear on segments (or sampled at midpoints)."""
        if self.edges is None:
            return float(np.mean(f))
        return float(np.sum(self.width * 0.5 * (f[:-1] + f[1:])))


def degeneracy_function(profiles: ProfilePair, x) -> np.ndarray:
    """``mu / mu_A + a_H / a``; identically 2 exactly when ``gamma = 0``."""
    mu_A = arithmetic_mean(profiles.mu)
    a_H = harmonic_mean(profiles.a)
    x = np.asarray(x, dtype=float)
    return profiles.mu(x) / mu_A + a_H / profiles.a(x)


def gamma(profiles: ProfilePair, n: int = DEFAULT_QUADRATURE_POINTS) -> HomogReport:
    """Homogenized speed and the curvature coefficient of ``c*_L`` at ``L = 0``.

    Parameters
    ----------
    profiles : ProfilePair
        Must have strictly positive mean growth.
    n : int
        Midpoint quadrature points (ignored on the exact piecewise path).

    Returns
    -------
    HomogReport
        ``degenerate`` is set when ``max |mu/mu_A + a_H/a - 2|`` over the
        quadrature points is at most ``1e-9``; ``gamma`` is then reported
        as exactly 0.
    """
    cell = _Cell(profiles, n)
    mu_A, a_H = cell.mu_A, cell.a_H
    if not mu_A > MEAN_ZERO_TOL * max(1.0, profiles.mu_max, -profiles.mu_min):
        raise NonPositiveMeanGrowth(
            f"gamma needs <mu>_A > 0 (got {mu_A:.3g}); use beta_mean_zero for zero-mean growth"
        )
    A = cell.cum_mu + mu_A * a_H * cell.cum_inv_a - 2.0 * mu_A * cell.x
    first, second = cell.weighted(A)
    g = 2.0 * math.sqrt(a_H / mu_A) * (second - a_H * first * first)
    defect = float(np.max(np.abs(cell.mu / mu_A + a_H * cell.inv_a - 2.0)))
    degenerate = defect <= DEGENERACY_TOL
    if degenerate:
        g = 0.0
    return HomogReport(
        a_H=a_H,
        mu_A=mu_A,
        c_hom=2.0 * math.sqrt(a_H * mu_A),
        lambda_hom=math.sqrt(mu_A / a_H),
        gamma=float(g),
        degenerate=bool(degenerate),
        degeneracy_defect=defect,
    )


def beta_mean_zero(profiles: ProfilePair, n: int = DEFAULT_QUADRATURE_POINTS) -> MeanZeroReport:
    """First-order slope of ``c*_L`` at ``L = 0`` when ``mu`` has zero mean.

    Here ``c*_L ~ 2 sqrt(beta a_H) L`` with
    ``beta = int A^2/a - a_H (int A/a)^2`` and ``A = int_0^x mu``.

    Raises
    ------
    NotMeanZero
        ``|<mu>_A| > 1e-12`` (relative to the size of ``mu``).
    IdenticallyZeroGrowth
        ``mu`` vanishes identically.
    """
    scale = max(abs(profiles.mu_max), abs(profiles.mu_min))
    if scale == 0.0:
        raise IdenticallyZeroGrowth("mu is identically zero: no front propagates")
    cell = _Cell(profiles, n)
    if abs(cell.mu_A) > MEAN_ZERO_TOL * max(1.0, scale):
        raise NotMeanZero(f"<mu>_A = {cell.mu_A:.3g} is not zero; use gamma instead")
    first, second = cell.weighted(cell.cum_mu)
    beta = second - cell.a_H * first * first
    a_H = cell.a_H
    return MeanZeroReport(beta=float(beta), slope=2.0 * math.sqrt(max(beta, 0.0) * a_H),
                          lambda_slope=math.sqrt(max(beta, 0.0) / a_H), a_H=a_H)


def phi1_closed_form(profiles: ProfilePair, x, n: int = DEFAULT_QUADRATURE_POINTS):
    """First-order corrector of the rescaled eigenfunction at ``lambda_hom``.

    ``phi1(x) = lam (-x + a_H B(x) - 1/2 + a_H int_0^1 y/a(y) dy)`` with
    ``B(x) = int_0^x 1/a``. It is 1-periodic, has zero mean and solves
    ``(a phi1')' + lam a' = 0``, so ``phi ~ 1 + L phi1`` for small ``L``.
    """
    cell = _Cell(profiles, n)
    a_H, mu_A = cell.a_H, cell.mu_A
    lam = math.sqrt(mu_A / a_H) if mu_A > 0 else 0.0
    # int_0^1 y/a = B(1) - int_0^1 B, with B(1) = 1/a_H
    if cell.edges is None:
        # B - x/a_H is periodic, so its midpoint mean is spectrally accurate
        int_B = 0.5 / a_H + cell.mean(cell.cum_inv_a - cell.x / a_H)
    else:
        int_B = cell.mean(cell.cum_inv_a)
    moment = 1.0 / a_H - int_B
    xs = np.asarray(x, dtype=float)
    B = cumulative_integral(profiles.a, np.atleast_1d(xs), reciprocal=True, n=n)
    out = lam * (-np.atleast_1d(xs) + a_H * B - 0.5 + a_H * moment)
    return float(out[0]) if xs.ndim == 0 else out
