"""Closed-form dispersion relation of the two-fragment patch model.

Period ``L0``, diffusivity 1, growth ``m`` on two habitat fragments of
length ``l/2`` separated by a gap ``z``, zero elsewhere. With
``p = sqrt(s - m)``, ``r = sqrt(s)``, ``alpha = L0 - l`` and
``beta = L0 - l - 2z``::

    F(z, lam, s) = 4 (2s - m) r p sinh(l p) sinh(alpha r)
                 + m^2 cosh(beta r) (1 - cosh(l p))
                 + 8 (s^2 - m s) [cosh(l p) cosh(alpha r) - cosh(lam L0)]
                 + m^2 cosh(alpha r) (cosh(l p) - 1)

and, whenever ``k_z(lam) > m``, the principal eigenvalue ``k_z(lam)`` is
the largest real root of ``F(z, lam, .)``. Both ``F`` and ``G`` are
evaluated divided by ``exp(l p + alpha r)`` so that large periods do not
overflow; the factor is positive and leaves signs and roots unchanged.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .eigen import principal_eigenvalue
from .exceptions import DomainError, NoRootAboveM, RegimeWarning, ValidationError
from .profiles import PatchConfig, build_patch_profiles
from .speed import SpeedResult, minimize_ratio

SCAN_POINTS = 2000
ROOT_RTOL = 1e-13
FALLBACK_GRID = 1024

__all__ = [
    "PatchDispersion",
    "FragSweepReport",
    "F_eval",
    "G_eval",
    "dF_dz",
    "k_patch",
    "c_star_patch",
    "frag_sweep",
    "in_regime",
]


@dataclass
class PatchDispersion:
    cfg: PatchConfig
    lam: float
    k: float
    bracket: tuple[float, float]
    f_residual: float


@dataclass
class FragSweepReport:
    """Speeds over a uniform grid of gap offsets ``z`` in ``[0, L0 - l]``."""

    cfg: PatchConfig
    rows: list[SpeedResult]
    z: np.ndarray
    monotone_decreasing: bool
    monotone_increasing: bool
    symmetry_defect: float
    regime_warning: bool
    columns: tuple = field(default=("z", "c_star", "lambda_star", "k_at_min", "regime_warning"),
                           repr=False)

    @property
    def c_star(self) -> np.ndarray:
        return np.array([r.c_star for r in self.rows])

    @property
    def z_min(self) -> float:
        return float(self.z[int(np.argmin(self.c_star))])

    def table(self) -> list[tuple]:
        return [(float(z), r.c_star, r.lambda_star, r.k_at_min, int(self.regime_warning))
                for z, r in zip(self.z, self.rows)]


def in_regime(cfg: PatchConfig) -> bool:
    """True when ``l > 3 L0 / 4``, where ``k_z(lam*_z) > m`` is guaranteed."""
    return cfg.l > 0.75 * cfg.L0


def _geometry(cfg: PatchConfig, z: float | None):
    z = cfg.z if z is None else float(z)
    if not (-1e-12 * cfg.L0 <= z <= cfg.L0 - cfg.l + 1e-12 * cfg.L0):
        raise ValidationError(f"z={z:g} outside [0, L0 - l]")
    alpha = cfg.L0 - cfg.l
    beta = abs(alpha - 2.0 * z)
    return alpha, min(beta, alpha)


def _roots(cfg: PatchConfig, s, strict: bool):
    s = np.asarray(s, dtype=float)
    bad = s <= cfg.m if strict else s < cfg.m
    if np.any(bad):
        op = ">" if strict else ">="
        raise DomainError(f"s must be {op} m = {cfg.m:g}")
    return s, np.sqrt(s - cfg.m), np.sqrt(s)


def _half_decay(x):
    """``(1 - exp(-2x)) / 2 = sinh(x) / exp(x)``."""
    return -0.5 * np.expm1(-2.0 * x)


def _bump(x):
    """``(cosh(x) - 1) / exp(x)``."""
    return 0.5 * np.expm1(-x) ** 2


def F_eval(cfg: PatchConfig, z_override: float | None, lam: float, s):
    """Scaled dispersion function ``F(z, lam, s) / exp(l sqrt(s-m) + alpha sqrt(s))``.

    Parameters
    ----------
    cfg : PatchConfig
    z_override : float or None
        Gap offset to use instead of ``cfg.z``.
    lam : float
        Decay rate.
    s : float or array
        Spectral parameter, ``s >= m``.
    """
    alpha, beta = _geometry(cfg, z_override)
    s, p, r = _roots(cfg, s, strict=False)
    m, l = cfg.m, cfg.l
    lp, ar = l * p, alpha * r
    cosh_a = 0.5 * (1.0 + np.exp(-2.0 * ar))
    cosh_b = 0.5 * (np.exp((beta - alpha) * r) + np.exp(-(beta + alpha) * r))
    cosh_l = 0.5 * (1.0 + np.exp(-2.0 * lp))
    cosh_lam = 0.5 * (np.exp(abs(lam) * cfg.L0 - lp - ar) + np.exp(-abs(lam) * cfg.L0 - lp - ar))
    bump = _bump(lp)
    out = (4.0 * (2.0 * s - m) * r * p * _half_decay(lp) * _half_decay(ar)
           - m * m * cosh_b * bump
           + 8.0 * s * (s - m) * (cosh_l * cosh_a - cosh_lam)
           + m * m * cosh_a * bump)
    return float(out) if out.ndim == 0 else out


def dF_dz(cfg: PatchConfig, z_override: float | None, s):
    """Scaled ``dF/dz = 2 m^2 sqrt(s) sinh(sqrt(s) beta) (cosh(l sqrt(s-m)) - 1)`` (signed beta)."""
    z = cfg.z if z_override is None else float(z_override)
    alpha, _ = _geometry(cfg, z)
    beta = alpha - 2.0 * z
    s, p, r = _roots(cfg, s, strict=False)
    sinh_b = 0.5 * (np.exp((beta - alpha) * r) - np.exp(-(beta + alpha) * r))
    out = 2.0 * cfg.m ** 2 * r * sinh_b * _bump(cfg.l * p)
    return float(out) if out.ndim == 0 else out


def G_eval(cfg: PatchConfig, z_override: float | None, s):
    """Scaled denominator ``G(z, s)``; positive for ``s > m``."""
    z = cfg.z if z_override is None else float(z_override)
    alpha, _ = _geometry(cfg, z)
    beta = alpha - 2.0 * z
    s, p, r = _roots(cfg, s, strict=True)
    m, l = cfg.m, cfg.l
    lp, ar = l * p, alpha * r
    cosh_l = 0.5 * (1.0 + np.exp(-2.0 * lp))
    sinh_a = _half_decay(ar)
    sinh_b = 0.5 * (np.exp((beta - alpha) * r) - np.exp(-(beta + alpha) * r))
    cosh_a = 0.5 * (1.0 + np.exp(-2.0 * ar))
    cosh_b = 0.5 * (np.exp((abs(beta) - alpha) * r) + np.exp(-(abs(beta) + alpha) * r))
    # cosh(lp) (1 - 1/cosh(lp)) = cosh(lp) - 1
    first = m * r * (4.0 * sinh_a * cosh_l * (s / m - 1.0) + (sinh_a - sinh_b) * _bump(lp))
    second = m * p * _half_decay(lp) * ((4.0 * s / m - 1.0) * cosh_a + cosh_b)
    out = first + second
    return float(out) if out.ndim == 0 else out


def k_patch(cfg: PatchConfig, lam: float) -> PatchDispersion:
    """Principal eigenvalue ``k_z(lam)`` as the largest root of ``F`` above ``m``.

    The search interval is ``[max(m (1 + 1e-9), lam^2 + m l / L0), lam^2 + m]``,
    scanned downward on 2000 subdivisions for the first sign change.

    Raises
    ------
    NoRootAboveM
        No sign change above ``m``: the closed form does not apply and the
        grid eigen solver must be used instead.
    """
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError("lambda must be > 0")
    m = cfg.m
    lo = max(m * (1.0 + 1e-9), lam * lam + m * cfg.l / cfg.L0)
    hi = lam * lam + m
    if lo >= hi:
        raise NoRootAboveM(f"empty bracket above m at lambda={lam:g}")
    grid = np.linspace(hi, lo, SCAN_POINTS + 1)
    vals = F_eval(cfg, None, lam, grid)
    if vals[0] == 0.0:
        return PatchDispersion(cfg, lam, float(hi), (float(lo), float(hi)), 0.0)
    change = np.nonzero(np.sign(vals[1:]) != np.sign(vals[0]))[0]
    if change.size == 0:
        raise NoRootAboveM(
            f"F has no sign change in [{lo:.6g}, {hi:.6g}] at lambda={lam:g}; k_z(lambda) <= m"
        )
    i = change[0] + 1
    if vals[i] == 0.0:
        root = float(grid[i])
    else:
        root = brentq(lambda s: F_eval(cfg, None, lam, s), grid[i], grid[i - 1],
                      xtol=1e-300, rtol=ROOT_RTOL, maxiter=200)
    resid = abs(F_eval(cfg, None, lam, root))
    return PatchDispersion(cfg, lam, float(root), (float(lo), float(hi)), float(resid))


def c_star_patch(cfg: PatchConfig, *, fallback_grid: int = FALLBACK_GRID) -> SpeedResult:
    """Minimal speed of the patch model from the closed-form dispersion relation.

    For ``lam`` where the closed form has no root above ``m`` the grid eigen
    solver on the cell-averaged profile is used instead, and the result's
    ``n_grid`` records that grid. Emits ``RegimeWarning`` when
    ``l <= 3 L0 / 4``.
    """
    if not in_regime(cfg):
        warnings.warn(f"l/L0 = {cfg.l / cfg.L0:.3g} <= 3/4: k_z(lambda*_z) > m is not guaranteed",
                      RegimeWarning, stacklevel=2)
    used_grid = []

    def k_of(lam):
        try:
            return k_patch(cfg, lam).k
        except NoRootAboveM:
            used_grid.append(lam)
            profiles = build_patch_profiles(cfg)
            return principal_eigenvalue(profiles, lam, cfg.L0, fallback_grid, vectors=False).k

    lam, k, bracket, evals = minimize_ratio(k_of)
    return SpeedResult(c_star=k / lam, lambda_star=lam, k_at_min=k, L=cfg.L0, bracket=bracket,
                       evals=evals, n_grid=fallback_grid if used_grid else None)


def frag_sweep(cfg_base: PatchConfig, z_count: int = 41) -> FragSweepReport:
    """``c*_z`` on ``z_count`` equispaced gap offsets covering ``[0, L0 - l]``.

    ``z_count`` must be odd and at least 5 so the midpoint is sampled.
    Monotonicity flags are strict and computed on the sampled sequence.
    """
    z_count = int(z_count)
    if z_count < 5 or z_count % 2 == 0:
        raise ValidationError("z_count must be an odd integer >= 5")
    gap = cfg_base.L0 - cfg_base.l
    z = np.linspace(0.0, gap, z_count)
    regime = not in_regime(cfg_base)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        rows = [c_star_patch(cfg_base.with_z(float(zi))) for zi in z]
    if regime:
        warnings.warn("fragmentation sweep outside l > 3 L0 / 4; flags are informational",
                      RegimeWarning, stacklevel=2)
    c = np.array([r.c_star for r in rows])
    mid = z_count // 2
    return FragSweepReport(
        cfg=cfg_base,
        rows=rows,
        z=z,
        monotone_decreasing=bool(np.all(np.diff(c[:mid + 1]) < 0)),
        monotone_increasing=bool(np.all(np.diff(c[mid:]) > 0)),
        symmetry_defect=float(np.max(np.abs(c - c[::-1]))),
        regime_warning=regime,
    )
