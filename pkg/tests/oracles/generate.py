"""Independent reference values frozen into ``tests/oracle_values.py``.

Nothing here imports ``pulsefront``. Run ``python3 tests/oracles/generate.py``
to regenerate; the output is a Python module written to stdout.

* dense: full nonsymmetric eigendecomposition of the finite-difference
  matrix, keeping the eigenvalue whose eigenvector has one sign;
* quad: 30-digit ``mpmath`` quadrature of the homogenization integrals;
* patch: 30-digit roots of the Floquet condition ``tr(T(s))/2 = cosh(lam L0)``
  for ``phi'' = (s - mu) phi`` with ``T`` the product of interval propagators,
  then a golden-section minimization of ``k/lam`` in ``mpmath``.
"""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 30


# dense eigen oracle ---------------------------------------------------------

def recip_sin(eps):
    return lambda x: 1.0 / (1.0 + eps * np.sin(2 * np.pi * x))


def sinus(mean, amp, k=1):
    return lambda x: mean + amp * np.sin(2 * np.pi * k * x)


def dense_k(a, mu, lam, L, n):
    h = 1.0 / n
    x = np.arange(n) * h
    ap = a(x + h / 2)
    am = a(x - h / 2)
    M = np.zeros((n, n))
    for j in range(n):
        M[j, (j + 1) % n] += ap[j] / h**2 + L * lam * ap[j] / h
        M[j, (j - 1) % n] += am[j] / h**2 - L * lam * am[j] / h
        M[j, j] += -(ap[j] + am[j]) / h**2 + L**2 * (lam**2 * a(x[j]) + mu(x[j]))
    w, V = np.linalg.eig(M)
    for i in np.argsort(-w.real):
        v = V[:, i].real
        if abs(w[i].imag) < 1e-9 and (np.all(v > 0) or np.all(v < 0)):
            return w[i].real / L**2
    raise RuntimeError("no positive eigenvector")


# homogenization quadrature --------------------------------------------------

def gamma_quad(a, mu, int_mu, int_inv_a, breaks=()):
    pts = [0] + list(breaks) + [1]
    q = lambda f: mp.fsum(mp.quad(f, [pts[i], pts[i + 1]]) for i in range(len(pts) - 1))
    mu_A = q(mu)
    a_H = 1 / q(lambda x: 1 / a(x))
    A = lambda x: int_mu(x) + mu_A * a_H * int_inv_a(x) - 2 * mu_A * x
    i1 = q(lambda x: A(x) / a(x))
    i2 = q(lambda x: A(x) ** 2 / a(x))
    return 2 * mp.sqrt(a_H / mu_A) * (i2 - a_H * i1**2)


def gamma_oracles():
    tp = 2 * mp.pi
    out = {}
    # a = 1/(1 + 0.3 sin), mu = 1 + 0.5 sin
    out["GAMMA_RECIP03_SIN05"] = gamma_quad(
        lambda x: 1 / (1 + mp.mpf("0.3") * mp.sin(tp * x)),
        lambda x: 1 + mp.mpf("0.5") * mp.sin(tp * x),
        lambda x: x + mp.mpf("0.5") * (1 - mp.cos(tp * x)) / tp,
        lambda x: x + mp.mpf("0.3") * (1 - mp.cos(tp * x)) / tp,
    )
    # a piecewise (1 on [0, 1/2), 4 on [1/2, 1)), mu = 1
    a_pw = lambda x: mp.mpf(1) if x < mp.mpf("0.5") else mp.mpf(4)
    inv_pw = lambda x: x if x < mp.mpf("0.5") else mp.mpf("0.5") + (x - mp.mpf("0.5")) / 4
    out["GAMMA_PIECEWISE14_MU1"] = gamma_quad(a_pw, lambda x: mp.mpf(1), lambda x: x, inv_pw,
                                              breaks=[mp.mpf("0.5")])
    # a = 1 + 0.3 sin(4 pi x), mu = 1 + 0.5 sin(2 pi x): no closed-form reciprocal antiderivative
    a2 = lambda x: 1 + mp.mpf("0.3") * mp.sin(2 * tp * x)
    out["GAMMA_SIN2_SIN1"] = gamma_quad(
        a2,
        lambda x: 1 + mp.mpf("0.5") * mp.sin(tp * x),
        lambda x: x + mp.mpf("0.5") * (1 - mp.cos(tp * x)) / tp,
        lambda x: mp.quad(lambda y: 1 / a2(y), [0, x]),
    )
    return out


# patch model ----------------------------------------------------------------

def half_trace(L0, l, z, m, s):
    segs = [(l / 2, s - m), (z, s), (l / 2, s - m), (L0 - l - z, s)]
    T = mp.eye(2)
    for d, q in segs:
        if d == 0:
            continue
        k = mp.sqrt(q)
        T = mp.matrix([[mp.cosh(k * d), mp.sinh(k * d) / k], [k * mp.sinh(k * d), mp.cosh(k * d)]]) * T
    return (T[0, 0] + T[1, 1]) / 2


def patch_k(L0, l, z, m, lam):
    f = lambda s: half_trace(L0, l, z, m, s) - mp.cosh(lam * L0)
    lo = lam**2 + m * l / L0
    hi = lam**2 + m
    # largest root: scan down from the upper bound
    N = 400
    prev = hi
    fprev = f(hi)
    for i in range(1, N + 1):
        s = hi - (hi - lo) * i / N
        fs = f(s)
        if mp.sign(fs) != mp.sign(fprev):
            return mp.findroot(f, (s, prev), solver="anderson")
        prev, fprev = s, fs
    raise RuntimeError("no root")


def patch_cstar(L0, l, z, m):
    q = lambda lam: patch_k(L0, l, z, m, lam) / lam
    a, b = mp.mpf("0.5"), mp.mpf("1.5")
    g = (mp.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    qc, qd = q(c), q(d)
    while b - a > mp.mpf("1e-12"):
        if qc <= qd:
            b, d, qd = d, c, qc
            c = b - g * (b - a)
            qc = q(c)
        else:
            a, c, qc = c, d, qd
            d = a + g * (b - a)
            qd = q(d)
    lam = (a + b) / 2
    return q(lam), lam, patch_k(L0, l, z, m, lam)


def main():
    print('"""Frozen reference values; regenerate with tests/oracles/generate.py."""\n')
    a, mu = recip_sin(0.3), sinus(1.0, 0.5)
    for n in (128, 256, 512, 1024):
        print(f"DENSE_K_RECIP03_SIN05_LAM1_L05_N{n} = {float(dense_k(a, mu, 1.0, 0.5, n))!r}")
    a2, mu2 = sinus(1.0, 0.3, 2), sinus(1.0, 0.5)
    for n in (128, 256, 512):
        print(f"DENSE_K_SIN2_SIN1_LAM07_L1_N{n} = {float(dense_k(a2, mu2, 0.7, 1.0, n))!r}")
    for name, val in gamma_oracles().items():
        print(f"{name} = {float(val)!r}")
    for z in ("0", "0.1"):
        for lam in ("0.8", "1.2"):
            k = patch_k(mp.mpf(1), mp.mpf("0.8"), mp.mpf(z), mp.mpf(1), mp.mpf(lam))
            tag = f"Z{z.replace('.', '')}_LAM{lam.replace('.', '')}"
            print(f"PATCH_K_{tag} = {float(k)!r}")
    for z in ("0", "0.05", "0.1"):
        c, lam, k = patch_cstar(mp.mpf(1), mp.mpf("0.8"), mp.mpf(z), mp.mpf(1))
        tag = z.replace(".", "")
        print(f"PATCH_CSTAR_Z{tag} = {float(c)!r}")
        print(f"PATCH_LAMSTAR_Z{tag} = {float(lam)!r}")
    print(f"GAMMA_SIN05_EXACT = {1 / (16 * math.pi**2)!r}")
    print(f"BETA_SIN05_EXACT = {1 / (32 * math.pi**2)!r}")


if __name__ == "__main__":
    main()
