"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pulsefront.eigen import principal_eigenvalue  # noqa: E402
from pulsefront.homog import beta_mean_zero, gamma  # noqa: E402
from pulsefront.patch import frag_sweep, k_patch  # noqa: E402
from pulsefront.profiles import (  # noqa: E402
    Constant,
    GridProfile,
    PatchConfig,
    PiecewiseConstant,
    ProfilePair,
    ReciprocalSinusoid,
    Sinusoid,
    arithmetic_mean,
    build_patch_profiles,
)
from pulsefront.simulate import SimConfig, run_front  # noqa: E402
from pulsefront.speed import minimal_speed, sweep_L  # noqa: E402

RESULTS: list[str] = []

SINUSOID = ProfilePair(ReciprocalSinusoid(0.3), Sinusoid(1.0, 0.5, 1))
GROWTH_ONLY = ProfilePair(Constant(1.0), Sinusoid(1.0, 0.5, 1))
DEGENERATE = ProfilePair(ReciprocalSinusoid(0.4), Sinusoid(1.0, -0.4, 1))
LAYERED = ProfilePair(PiecewiseConstant([0.0, 0.5], [1.0, 4.0]), Constant(1.0))
SMALL_L = [0.01, 0.02, 0.04, 0.08]

_cache: dict = {}


def report(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def sinusoid_sweep():
    if "sweep" not in _cache:
        _cache["sweep"] = sweep_L(SINUSOID, SMALL_L)
    return _cache["sweep"]


def test_c01_homogenization_limit():
    rep = sinusoid_sweep()
    err = np.abs(rep.c_star - 2.0)
    # errors listed from L = 0.08 down to L = 0.01
    shrinking = bool(np.all(np.diff(err[::-1]) < 0))
    ok = err[0] <= 0.02 and shrinking
    report(1, "homogenization limit", ok,
           f"|c*_0.01 - 2| = {err[0]:.3e} (<= 0.02), errors {np.array2string(err[::-1], precision=3)} "
           f"decreasing={shrinking}")


def test_c02_flat_first_derivative():
    d1 = sinusoid_sweep().d1
    report(2, "flat first derivative", abs(d1) <= 0.05, f"Richardson dc*/dL at 0 = {d1:.3e} (|.| <= 0.05)")


def test_c03_second_order_coefficient():
    g = gamma(GROWTH_ONLY).gamma
    exact = 1 / (16 * math.pi ** 2)
    d2 = sweep_L(GROWTH_ONLY, SMALL_L[:3]).d2
    ok = abs(g - exact) <= 1e-6 and abs(d2 - g) <= 0.05 * g
    report(3, "second-order coefficient", ok,
           f"gamma = {g:.8f} vs 1/(16 pi^2) = {exact:.8f}; sweep d2 = {d2:.6f} "
           f"(rel gap {abs(d2 - g) / g:.2%}, <= 5%)")


def test_c04_degeneracy_criterion():
    rep = gamma(DEGENERATE)
    d2 = sweep_L(DEGENERATE, SMALL_L[:3]).d2
    ok = rep.gamma <= 1e-9 and rep.degenerate and abs(d2) <= 1e-3
    report(4, "degeneracy criterion", ok,
           f"gamma = {rep.gamma:.1e} (degenerate={rep.degenerate}), sweep d2 = {d2:.2e} (|.| <= 1e-3)")


def test_c05_minimizer_limit():
    pairs = {
        "sinusoid": SINUSOID,
        "growth-only": GROWTH_ONLY,
        "degenerate": DEGENERATE,
        "layered (1,4)": LAYERED,
    }
    parts, ok = [], True
    for name, pair in pairs.items():
        target = gamma(pair).lambda_hom
        lam = minimal_speed(pair, 0.01).lambda_star
        gap = abs(lam - target) / target
        ok &= gap <= 0.02
        parts.append(f"{name} {gap:.1e}")
    ok &= abs(gamma(LAYERED).lambda_hom - 1 / math.sqrt(1.6)) <= 1e-12
    report(5, "minimizer limit", bool(ok), "lambda*_0.01 rel gaps: " + ", ".join(parts) + " (<= 0.02)")


def random_profile(rng, positive: bool):
    kind = rng.integers(5)
    if kind == 0:
        return Constant(float(rng.uniform(0.3, 3.0)))
    if kind == 1:
        mean = float(rng.uniform(0.5, 2.5))
        return Sinusoid(mean, float(rng.uniform(0.0, 0.9) * mean), int(rng.integers(1, 4)))
    if kind == 2:
        eps = float(rng.uniform(-0.8, 0.8))
        return ReciprocalSinusoid(eps) if positive else Sinusoid(1.0, eps, 1)
    if kind == 3:
        k = int(rng.integers(2, 5))
        br = np.sort(np.concatenate(([0.0], rng.uniform(0.05, 0.95, k - 1))))
        return PiecewiseConstant(br.tolist(), rng.uniform(0.3, 3.0, k).tolist())
    return GridProfile(rng.uniform(0.3, 3.0, int(rng.integers(3, 9))).tolist())


def test_c06_bounds_suite():
    rng = np.random.default_rng(20240611)
    n = 256
    lams = np.linspace(0.0, 3.0, 13)
    violations = []
    checks = 0
    for case in range(20):
        pair = ProfilePair(random_profile(rng, True), random_profile(rng, False))
        mu_A = arithmetic_mean(pair.mu)
        for L in (0.1, 0.5, 1.0, 2.0):
            k = np.array([principal_eigenvalue(pair, lam, L, n, vectors=False).k for lam in lams])
            k_neg = np.array([principal_eigenvalue(pair, -lam, L, n, vectors=False).k for lam in lams[1::3]])
            scale = max(1.0, float(np.max(np.abs(k))))
            tests = {
                "mean growth <= k(0)": mu_A <= k[0] + 1e-9 * scale,
                "k <= lam^2 a_M + mu_M": bool(np.all(k <= lams ** 2 * pair.a_max + pair.mu_max + 1e-9 * scale)),
                "evenness": bool(np.all(np.abs(k_neg - k[1::3]) <= 1e-9 * scale)),
                "convexity": bool(np.all(np.diff(k, 2) >= -1e-9 * scale)),
            }
            c = minimal_speed(pair, L, n).c_star
            tests["0 < c* <= 2 sqrt(a_M mu_M)"] = 0 < c <= 2 * math.sqrt(pair.a_max * pair.mu_max) * (1 + 1e-12)
            checks += len(tests)
            violations += [f"case {case} L={L}: {name}" for name, good in tests.items() if not good]
    report(6, "bounds suite", not violations,
           f"{checks} checks over 20 random media x 4 periods, {len(violations)} violations"
           + (f" ({'; '.join(violations[:3])})" if violations else ""))


def test_c07_fragmentation():
    rep = frag_sweep(PatchConfig(1.0, 0.8, 0.0, 1.0), 41)
    bound = 2 * (1 - math.sqrt(0.2))
    k_min = min(r.k_at_min for r in rep.rows)
    ok = (rep.monotone_decreasing and rep.monotone_increasing and abs(rep.z_min - 0.1) <= 1e-12
          and rep.symmetry_defect <= 1e-9 and k_min >= bound)
    report(7, "fragmentation", ok,
           f"decreasing={rep.monotone_decreasing} increasing={rep.monotone_increasing} "
           f"z_min={rep.z_min:.3f} symmetry defect={rep.symmetry_defect:.1e} "
           f"min k at lambda* = {k_min:.4f} >= {bound:.5f}")


def test_c08_closed_form_vs_grid():
    worst = 0.0
    for z in (0.0, 0.1):
        cfg = PatchConfig(1.0, 0.8, z, 1.0)
        profiles = build_patch_profiles(cfg)
        for lam in (0.8, 1.2):
            grid = principal_eigenvalue(profiles, lam, cfg.L0, 1024, vectors=False).k
            worst = max(worst, abs(k_patch(cfg, lam).k - grid))
    report(8, "closed form vs grid eigen", worst <= 5e-3, f"max |k_patch - k_grid| = {worst:.2e} (<= 5e-3)")


def test_c09_mean_zero_slope():
    pair = ProfilePair(Constant(1.0), Sinusoid(0.0, 0.5, 1))
    beta = beta_mean_zero(pair).beta
    exact = 1 / (32 * math.pi ** 2)
    d1 = sweep_L(pair, [0.005, 0.01, 0.02]).d1
    slope = 2 * math.sqrt(exact)
    ok = abs(beta - exact) <= 1e-8 and abs(d1 - slope) <= 0.1 * slope
    report(9, "mean-zero slope", ok,
           f"beta = {beta:.10f} vs {exact:.10f}; sweep slope {d1:.5f} vs 2 sqrt(beta) = {slope:.5f} "
           f"(rel gap {abs(d1 - slope) / slope:.2%}, <= 10%)")


@pytest.mark.slow
def test_c10_simulation_oracle():
    flat = ProfilePair(Constant(1.0), Constant(1.0))
    _, hom = run_front(SimConfig(flat, 1.0, 640.0, 0.05, 150.0))
    _, het = run_front(SimConfig(SINUSOID, 0.25, 340.0, 0.025, 80.0))
    c_ref = minimal_speed(SINUSOID, 0.25).c_star
    gap = abs(het.measured_speed - c_ref) / c_ref
    ok = abs(hom.measured_speed - 2.0) <= 0.1 and gap <= 0.05 and het.pulsation_defect <= 0.02
    report(10, "simulation oracle", ok,
           f"homogeneous speed {hom.measured_speed:.4f} (2 +- 0.1); heterogeneous {het.measured_speed:.4f} "
           f"vs c* = {c_ref:.4f} (gap {gap:.2%}, <= 5%); pulsation defect {het.pulsation_defect:.1e} (<= 0.02)")


def test_c11_grid_convergence():
    cases = [(SINUSOID, 1.0, 0.5), (ProfilePair(Sinusoid(1.0, 0.3, 2), Sinusoid(1.0, 0.5, 1)), 0.7, 1.0),
             (GROWTH_ONLY, 1.3, 2.0)]
    ratios = []
    for pair, lam, L in cases:
        k = [principal_eigenvalue(pair, lam, L, n, vectors=False).k for n in (128, 256, 512)]
        ratios.append((k[0] - k[1]) / (k[1] - k[2]))
    ok = all(abs(r - 4.0) <= 1.0 for r in ratios)
    report(11, "grid convergence", ok,
           "Richardson ratios " + ", ".join(f"{r:.4f}" for r in ratios) + " (4 +- 25%)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
