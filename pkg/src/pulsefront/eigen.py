"""Principal eigenvalue ``k(lambda, L)`` of the exponentially weighted operator.

The unit-cell problem

    (a phi')' + 2 L lam a phi' + L lam a' phi + L^2 lam^2 a phi + L^2 mu phi = kt phi

has the principal eigenvalue ``kt = L^2 k(lam, L)`` with a positive 1-periodic
eigenfunction. It is discretized on ``n`` uniform nodes ``x_j = j/n`` with the
diffusivity sampled on the faces ``x_{j+1/2}``::

    (M phi)_j = [a+ (phi_{j+1} - phi_j) - a- (phi_j - phi_{j-1})] / h^2
              + L lam [a+ phi_{j+1} - a- phi_{j-1}] / h
              + L^2 (lam^2 a_j + mu_j) phi_j

The first-order part is exactly skew-symmetric, so ``M(-lam) = M(lam)^T``
and the discrete spectrum is even in ``lam``. For ``|L lam| h < 1`` the
off-diagonals are positive and ``M`` is an irreducible Metzler matrix whose
Perron root is the only eigenvalue with a positive eigenvector.

The Perron root is located as the largest real zero of ``det(P(s) - I)``,
where ``P(s)`` is the discrete transfer matrix of the three-term recurrence
written in flux variables and accumulated as ``I + E`` so that the small
eigenvalues of the homogenization regime keep full relative precision. The
eigenvector then comes from shifted inverse iteration on ``sigma I - M``,
whose inverse is entrywise positive (a nonsingular M-matrix). A second,
fully iterative route (``method="power"``) runs Noda's shifted inverse power
iteration with Collatz-Wielandt shift updates.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq
from scipy.sparse.linalg import splu

from .exceptions import NonConvergence, PerronFailure, ValidationError
from .profiles import GridProfile, PiecewiseConstant, ProfilePair

DEFAULT_GRID = 256
MAX_AUTO_GRID = 2048
AUTO_REFINE_RTOL = 1e-6
GRID_ENV_VAR = "PULSEFRONT_GRID_N"

__all__ = [
    "EigenResult",
    "principal_eigenvalue",
    "rho1",
    "operator_matrix",
    "default_grid",
    "check_grid",
]


@dataclass
class EigenResult:
    """Principal eigenpair at ``(lam, L)``.

    ``k`` is in physical units (``k = kt / L^2``); ``phi`` holds the positive
    eigenfunction on ``x_j = j/n`` normalized by ``h * sum(phi^2) = 1``.
    ``residual`` is the normwise backward error
    ``|M phi - kt phi|_inf / (|M|_inf |phi|_inf)``.
    """

    k: float
    lam: float
    L: float
    n: int
    phi: np.ndarray | None = field(default=None, repr=False)
    residual: float = float("nan")
    rho1: float | None = None
    method: str = "transfer"

    @property
    def k_tilde(self) -> float:
        return self.k * self.L ** 2

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) / self.n


def default_grid() -> int:
    raw = os.environ.get(GRID_ENV_VAR)
    if raw is None:
        return DEFAULT_GRID
    try:
        return check_grid(int(raw))
    except ValueError as exc:
        raise ValidationError(f"{GRID_ENV_VAR}={raw!r} is not a valid grid size") from exc


def check_grid(n: int) -> int:
    n = int(n)
    if n < 16 or n & (n - 1):
        raise ValidationError(f"grid size must be a power of two >= 16, got {n}")
    return n


@dataclass(frozen=True)
class _Cell:
    h: float
    a_face: np.ndarray  # a at x_{j+1/2}
    a_back: np.ndarray  # a at x_{j-1/2}
    a_node: np.ndarray
    mu_node: np.ndarray


@functools.lru_cache(maxsize=64)
def _cell(profiles: ProfilePair, n: int) -> _Cell:
    h = 1.0 / n
    x = np.arange(n) * h
    a, mu = profiles.a, profiles.mu
    if isinstance(a, PiecewiseConstant):
        # conservative treatment of jumps: harmonic average of a over [x_j, x_{j+1}]
        inv = a.reciprocal()
        a_face = h / np.diff(inv.antiderivative(np.append(x, 1.0)))
    else:
        a_face = a(x + 0.5 * h)
    return _Cell(
        h=h,
        a_face=a_face,
        a_back=np.roll(a_face, 1),
        a_node=_node_values(a, x, h),
        mu_node=_node_values(mu, x, h),
    )


def _node_values(profile, x, h):
    if isinstance(profile, (PiecewiseConstant, GridProfile)):
        edges = np.append(x - 0.5 * h, 1.0 - 0.5 * h)
        return np.diff(profile.antiderivative(edges)) / h
    return profile(x)


def operator_matrix(profiles: ProfilePair, lam: float, L: float, n: int) -> sp.csr_matrix:
    """Sparse periodic matrix ``M`` of the discrete unit-cell operator."""
    c = _cell(profiles, check_grid(n))
    h, ll = c.h, L * lam
    upper = c.a_face / h ** 2 + ll * c.a_face / h
    lower = c.a_back / h ** 2 - ll * c.a_back / h
    diag = -(c.a_face + c.a_back) / h ** 2 + L ** 2 * (lam ** 2 * c.a_node + c.mu_node)
    j = np.arange(n)
    rows = np.concatenate((j, j, j))
    cols = np.concatenate((j, (j + 1) % n, (j - 1) % n))
    return sp.csr_matrix((np.concatenate((diag, upper, lower)), (rows, cols)), shape=(n, n))


def _char_function(c: _Cell, lam: float, L: float, s: np.ndarray) -> np.ndarray:
    """``det(P(s) - I)`` for each shift in ``s``; negative above the Perron root."""
    h, ll = c.h, L * lam
    theta = ll * h
    weight = L ** 2 * (lam ** 2 * c.a_node + c.mu_node)
    s = np.atleast_1d(np.asarray(s, dtype=float))[:, None]
    g = h * (s - weight) - ll * (c.a_face - c.a_back)
    den = 1.0 + theta
    E = np.empty((s.shape[0], c.a_face.size, 2, 2))
    E[..., 0, 0] = h * g / (den * c.a_face)
    E[..., 0, 1] = h * (1.0 - theta) / (den * c.a_face)
    E[..., 1, 0] = g / den
    E[..., 1, 1] = -2.0 * theta / den
    # (I + B)(I + A) = I + A + B + BA, pairwise so every level is vectorized
    with np.errstate(over="ignore", invalid="ignore"):
        while E.shape[1] > 1:
            A = E[:, 0::2]
            B = E[:, 1::2]
            E = A + B + B @ A
        E = E[:, 0]
        direct = E[:, 0, 0] * E[:, 1, 1] - E[:, 0, 1] * E[:, 1, 0]
        # every step has det(I + E_j) = (1 - theta)/(1 + theta), so
        # det(E) = det(I + E) - 1 - tr(E) avoids cancelling huge products
        d1 = np.expm1(c.a_face.size * (np.log1p(-theta) - np.log1p(theta)))
        traced = d1 - (E[:, 0, 0] + E[:, 1, 1])
        big = np.max(np.abs(E.reshape(E.shape[0], 4)), axis=1) > 1.0
        f = np.where(big, traced, direct)
    # overflow only happens far above the root, where f < 0
    return np.where(np.isfinite(f), f, -np.inf)


def _perron_root_transfer(c: _Cell, lam: float, L: float, certify, scan: int = 32) -> float:
    """Largest real root of the characteristic function.

    ``certify(s)`` must return True when ``s`` is (to round-off) at or above
    the Perron root; a failed certificate means the scan stepped over a
    close pair of roots, and the interval above is rescanned more finely.
    """
    ll = L * lam
    rows = ll * (c.a_face - c.a_back) / c.h + L ** 2 * (lam ** 2 * c.a_node + c.mu_node)
    lo, hi = float(rows.min()), float(rows.max())
    if hi - lo <= 8 * np.finfo(float).eps * max(abs(lo), abs(hi)):
        # equal row sums: the constant vector is the Perron vector
        return hi
    # the skew first-order part drops out of v^T M v, so the symmetric
    # part bounds the root: k~ <= max of the diagonal potential
    hi = min(hi, float(np.max(L ** 2 * (lam ** 2 * c.a_node + c.mu_node))))
    pad = 1e-9 * (hi - lo) + 1e-300
    top, bottom, points = hi + pad, lo - pad, scan
    f = lambda s: float(_char_function(c, lam, L, s)[0])  # noqa: E731
    while points <= 4096 * scan:
        grid = np.linspace(top, bottom, points + 1)
        vals = _char_function(c, lam, L, grid)
        above = np.nonzero(vals > 0)[0]
        if above.size == 0 or above[0] == 0:
            points *= 8
            continue
        i = above[0]
        if vals[i - 1] == 0.0:
            root = float(grid[i - 1])
        else:
            root = brentq(f, grid[i], grid[i - 1], xtol=1e-300, rtol=4 * np.finfo(float).eps,
                          maxiter=300)
        if certify(root):
            return root
        bottom, points = root, 8 * points
    raise PerronFailure(f"no Perron root found in [{lo:g}, {hi:g}] at lam={lam:g}, L={L:g}")


def _check_metzler(lam: float, L: float, n: int):
    if abs(L * lam) / n >= 1.0:
        raise PerronFailure(
            f"grid n={n} too coarse for lam*L={lam * L:g}: off-diagonal entries turn negative"
        )


def _positive_vector(solver, M: sp.spmatrix, kt: float, norm: float, maxiter: int = 60):
    """Inverse iteration with a factorized ``sigma I - M``, sigma above the root.

    Stops on the backward error ``max|M v - kt v| / (||M|| max v)`` rather
    than on the change of the iterate: in strongly drifting media the
    eigenvector spans many decades and its smallest entries are pure noise.
    """
    v = np.full(M.shape[0], 1.0)
    best, best_err, stale = None, np.inf, 0
    for _ in range(maxiter):
        v = solver.solve(v)
        if not np.all(v > 0):
            raise PerronFailure("positivity of the inverse-iteration iterate was lost")
        v /= np.max(v)
        err = float(np.max(np.abs(M @ v - kt * v)) / norm)
        if err < best_err:
            best, best_err, stale = v.copy(), err, 0
        else:
            stale += 1
        if best_err <= 64 * np.finfo(float).eps or stale >= 4:
            break
    if best_err > 1e-8:
        raise NonConvergence(f"eigenvector backward error stalled at {best_err:.2e}")
    return best


def _perron_noda(M: sp.spmatrix, maxiter: int = 500):
    """Noda iteration: inverse power steps with Collatz-Wielandt shifts."""
    n = M.shape[0]
    norm = float(abs(M).sum(axis=1).max())
    ident = sp.identity(n, format="csc")
    v = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(maxiter):
        ratios = (M @ v) / v
        hi, lo = float(ratios.max()), float(ratios.min())
        if hi - lo <= 64 * np.finfo(float).eps * norm:
            return 0.5 * (hi + lo), v
        sigma = hi + 4 * np.finfo(float).eps * norm
        w = splu(sp.csc_matrix(sigma * ident - M)).solve(v)
        if not np.all(w > 0):
            raise PerronFailure("positivity of the power-iteration iterate was lost")
        w /= np.linalg.norm(w)
        change = np.max(np.abs(w - v))
        v = w
        if change < 1e-13:
            ratios = (M @ v) / v
            return 0.5 * (float(ratios.max()) + float(ratios.min())), v
    raise NonConvergence(f"power iteration did not converge within {maxiter} steps")


def _margin(kt: float, norm: float) -> float:
    # far enough from the root for the sign test to beat the LU backward error
    return max(1e-10 * max(1.0, abs(kt)), 256 * np.finfo(float).eps * norm)


def _above_perron(M: sp.spmatrix, sigma: float):
    """LU of ``sigma I - M`` if ``sigma`` lies above the Perron root, else None.

    For an irreducible Metzler ``M`` the solution of ``(sigma I - M) x = 1``
    is positive exactly when ``sigma`` exceeds the root, so this is a
    two-sided test.
    """
    solver = splu(sp.csc_matrix(sigma * sp.identity(M.shape[0]) - M))
    x = solver.solve(np.ones(M.shape[0]))
    return solver if np.all(x > 0) else None


def _solve(profiles, lam, L, n, method, vectors):
    _check_metzler(lam, L, n)
    c = _cell(profiles, n)
    M = operator_matrix(profiles, lam, L, n)
    norm = float(abs(M).sum(axis=1).max())
    if method not in ("transfer", "power"):
        raise ValidationError(f"unknown eigen method {method!r}")
    phi = None
    if method == "transfer":
        solvers = {}

        def certify(s):
            solvers[s] = _above_perron(M, s + _margin(s, norm))
            return solvers[s] is not None

        kt = _perron_root_transfer(c, lam, L, certify)
        if _above_perron(M, kt - _margin(kt, norm)) is None:
            if vectors:
                phi = _positive_vector(solvers.get(kt) or _above_perron(M, kt + _margin(kt, norm)),
                                       M, kt, norm)
        else:
            # round-off produced a spurious sign change above the root; this
            # happens once the transfer products span hundreds of decades
            method = "power"
    if method == "power":
        kt, phi = _perron_noda(M)
    res = EigenResult(k=kt / L ** 2, lam=lam, L=L, n=n, method=method)
    if phi is not None:
        phi = phi / np.sqrt(c.h * np.sum(phi ** 2))
        res.phi = phi
        res.residual = float(np.max(np.abs(M @ phi - kt * phi)) / (norm * np.max(phi)))
    if lam == 0:
        res.rho1 = -res.k
    return res


def principal_eigenvalue(profiles: ProfilePair, lam: float, L: float, n: int | None = None, *,
                         method: str = "transfer", vectors: bool = True) -> EigenResult:
    """Principal eigenvalue ``k(lam, L)`` and its positive eigenfunction.

    Parameters
    ----------
    profiles : ProfilePair
    lam : float
        Exponential decay rate (1/length); any real value.
    L : float
        Period, > 0.
    n : int, optional
        Grid size (power of two, >= 16). When omitted the grid starts at
        ``$PULSEFRONT_GRID_N`` (default 256) and is doubled up to 2048 while
        the Richardson error estimate exceeds ``1e-6`` relative.
    method : {"transfer", "power"}
        Perron root from the transfer-matrix characteristic function, or
        from shifted inverse power iteration. A transfer root that fails
        the two-sided M-matrix test falls back to the power route, and
        ``EigenResult.method`` records the route actually used.
    vectors : bool
        Also compute the eigenfunction and residual.

    Raises
    ------
    PerronFailure
        The discrete operator is not Metzler (``|lam L| >= n``) or the
        positive eigenvector could not be produced.
    """
    lam = float(lam)
    L = float(L)
    if not (np.isfinite(lam) and np.isfinite(L)):
        raise ValidationError("lam and L must be finite")
    if L <= 0:
        raise ValidationError("L must be > 0")
    if n is not None:
        return _solve(profiles, lam, L, check_grid(n), method, vectors)

    n = default_grid()
    while abs(L * lam) / n >= 1.0 and n < MAX_AUTO_GRID:
        n *= 2
    coarse = _solve(profiles, lam, L, n, method, vectors=False)
    while n < MAX_AUTO_GRID:
        fine = _solve(profiles, lam, L, 2 * n, method, vectors=False)
        n *= 2
        if abs(fine.k - coarse.k) / 3 <= AUTO_REFINE_RTOL * max(abs(fine.k), 1e-300):
            break
        coarse = fine
    return _solve(profiles, lam, L, n, method, vectors)


def rho1(profiles: ProfilePair, L: float, n: int | None = None) -> float:
    """Persistence eigenvalue ``rho_{1,L} = -k(0, L)``."""
    return -principal_eigenvalue(profiles, 0.0, L, n, vectors=False).k
