"""1-periodic coefficient profiles and their means.

A profile is a function on the unit cell extended periodically. The
diffusivity ``a`` and the growth rate ``mu`` of the model are both stored
this way; the period ``L`` is applied by the consumers, never stored here.

Five kinds are supported::

    constant             x -> value
    sinusoid             x -> mean + amplitude * sin(2 pi k x)
    reciprocal-sinusoid  x -> 1 / (1 + eps * sin(2 pi x))
    piecewise-constant   breakpoints b_0 < ... < b_{K-1} in [0, 1), value v_i on
                         [b_i, b_{i+1}); v_{K-1} also covers [0, b_0) by wrap-around
    grid                 samples on x_j = j / N, linear interpolation
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .exceptions import (
    InvalidPatchGeometry,
    InvalidProfile,
    NonPositiveMeanGrowth,
    NonPositiveProfile,
)

DEFAULT_QUADRATURE_POINTS = 4096
VALIDATION_SAMPLES = 8192

__all__ = [
    "PeriodicProfile",
    "Constant",
    "Sinusoid",
    "ReciprocalSinusoid",
    "PiecewiseConstant",
    "GridProfile",
    "ProfilePair",
    "PatchConfig",
    "profile_from_dict",
    "pair_from_dict",
    "eval_profile",
    "arithmetic_mean",
    "harmonic_mean",
    "cumulative_integral",
    "build_patch_profiles",
    "midpoint_grid",
]


def midpoint_grid(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


class PeriodicProfile:
    """Base class. Subclasses implement ``_eval_cell`` on ``[0, 1)``."""

    kind = "abstract"
    #: True when the midpoint rule is spectrally accurate for this kind.
    smooth = True

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        frac = x - np.floor(x)
        # tiny negative x rounds to frac == 1.0; fold it back onto the cell
        return self._eval_cell(np.where(frac >= 1.0, 0.0, frac))

    def _eval_cell(self, x):
        raise NotImplementedError

    def minimum(self) -> float:
        raise NotImplementedError

    def maximum(self) -> float:
        raise NotImplementedError

    def antiderivative(self, x):
        """Exact ``int_0^x f``, or ``None`` if the kind has no cheap closed form."""
        return None

    def reciprocal(self) -> PeriodicProfile | None:
        """Exact representation of ``1 / f`` when one exists in the catalog."""
        return None

    def is_constant(self) -> bool:
        return self.maximum() - self.minimum() == 0.0

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        body = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items() if k != "kind")
        return f"{type(self).__name__}({body})"

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self))


class Constant(PeriodicProfile):
    kind = "constant"

    def __init__(self, value: float):
        self.value = _finite(value, "value")

    def _eval_cell(self, x):
        return np.full_like(x, self.value, dtype=float)

    def minimum(self):
        return self.value

    def maximum(self):
        return self.value

    def antiderivative(self, x):
        return self.value * np.asarray(x, dtype=float)

    def reciprocal(self):
        if self.value == 0.0:
            return None
        return Constant(1.0 / self.value)

    def to_dict(self):
        return {"kind": self.kind, "value": self.value}


class Sinusoid(PeriodicProfile):
    kind = "sinusoid"

    def __init__(self, mean: float, amplitude: float, harmonic: int = 1):
        self.mean = _finite(mean, "mean")
        self.amplitude = _finite(amplitude, "amplitude")
        if int(harmonic) != harmonic or harmonic < 1:
            raise InvalidProfile(f"harmonic index must be a positive integer, got {harmonic}")
        self.harmonic = int(harmonic)

    def _eval_cell(self, x):
        return self.mean + self.amplitude * np.sin(2 * np.pi * self.harmonic * x)

    def minimum(self):
        return self.mean - abs(self.amplitude)

    def maximum(self):
        return self.mean + abs(self.amplitude)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        w = 2 * np.pi * self.harmonic
        return self.mean * x + self.amplitude * (1.0 - np.cos(w * x)) / w

    def reciprocal(self):
        if self.amplitude == 0.0 and self.mean != 0.0:
            return Constant(1.0 / self.mean)
        if self.mean == 1.0 and self.harmonic == 1 and abs(self.amplitude) < 1:
            return ReciprocalSinusoid(self.amplitude)
        return None

    def to_dict(self):
        return {
            "kind": self.kind,
            "mean": self.mean,
            "amplitude": self.amplitude,
            "harmonic": self.harmonic,
        }


class ReciprocalSinusoid(PeriodicProfile):
    """``x -> 1 / (1 + eps sin 2 pi x)``; harmonic mean is exactly 1."""

    kind = "reciprocal-sinusoid"

    def __init__(self, eps: float):
        eps = _finite(eps, "eps")
        if not abs(eps) < 1:
            raise InvalidProfile(f"reciprocal-sinusoid needs |eps| < 1, got {eps}")
        self.eps = eps

    def _eval_cell(self, x):
        return 1.0 / (1.0 + self.eps * np.sin(2 * np.pi * x))

    def minimum(self):
        return 1.0 / (1.0 + abs(self.eps))

    def maximum(self):
        return 1.0 / (1.0 - abs(self.eps))

    def reciprocal(self):
        return Sinusoid(1.0, self.eps, 1)

    def to_dict(self):
        return {"kind": self.kind, "eps": self.eps}


class PiecewiseConstant(PeriodicProfile):
    kind = "piecewise-constant"
    smooth = False

    def __init__(self, breakpoints, values):
        b = np.asarray(breakpoints, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if b.size == 0 or b.size != v.size:
            raise InvalidProfile("piecewise-constant needs equally many breakpoints and values")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(v))):
            raise InvalidProfile("piecewise-constant entries must be finite")
        if b[0] < 0 or b[-1] >= 1 or np.any(np.diff(b) <= 0):
            raise InvalidProfile("breakpoints must be strictly ascending in [0, 1)")
        self.breakpoints = b
        self.values = v
        # segment table covering [0, 1): the head [0, b_0) wraps to the last value
        self._edges = np.concatenate(([0.0], b, [1.0]))
        self._seg_values = np.concatenate(([v[-1]], v))
        widths = np.diff(self._edges)
        self._cum = np.concatenate(([0.0], np.cumsum(widths * self._seg_values)))

    def _eval_cell(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return self.values[idx]  # idx == -1 is the wrapped head segment

    def minimum(self):
        return float(self.values.min())

    def maximum(self):
        return float(self.values.max())

    def segments(self):
        """``(left, right, value)`` triples tiling ``[0, 1)``, zero widths dropped."""
        out = []
        for lo, hi, val in zip(self._edges[:-1], self._edges[1:], self._seg_values):
            if hi > lo:
                out.append((float(lo), float(hi), float(val)))
        return out

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        whole = np.floor(x)
        frac = x - whole
        i = np.clip(np.searchsorted(self._edges, frac, side="right") - 1, 0, len(self._seg_values) - 1)
        return whole * self._cum[-1] + self._cum[i] + self._seg_values[i] * (frac - self._edges[i])

    def reciprocal(self):
        if np.any(self.values == 0):
            return None
        return PiecewiseConstant(self.breakpoints, 1.0 / self.values)

    def to_dict(self):
        return {
            "kind": self.kind,
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }


class GridProfile(PeriodicProfile):
    kind = "grid"
    smooth = False

    def __init__(self, samples):
        s = np.asarray(samples, dtype=float).ravel()
        if s.size < 2 or not np.all(np.isfinite(s)):
            raise InvalidProfile("grid profile needs at least two finite samples")
        self.samples = s

    def _eval_cell(self, x):
        n = self.samples.size
        t = x * n
        j = np.minimum(np.floor(t).astype(int), n - 1)
        w = t - j
        return (1 - w) * self.samples[j] + w * self.samples[(j + 1) % n]

    def minimum(self):
        return float(self.samples.min())

    def maximum(self):
        return float(self.samples.max())

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        s = self.samples
        n = s.size
        h = 1.0 / n
        nxt = np.roll(s, -1)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * h * (s + nxt))))
        whole = np.floor(x)
        t = (x - whole) * n
        j = np.minimum(np.floor(t).astype(int), n - 1)
        w = t - j
        partial = h * (s[j] * w + 0.5 * (nxt[j] - s[j]) * w * w)
        return whole * cum[-1] + cum[j] + partial

    def to_dict(self):
        return {"kind": self.kind, "samples": self.samples.tolist()}


def _finite(value, name):
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidProfile(f"{name} must be a real number") from exc
    if not np.isfinite(out):
        raise InvalidProfile(f"{name} must be finite")
    return out


_KIND_ALIASES = {
    "constant": "constant",
    "sinusoid": "sinusoid",
    "reciprocal-sinusoid": "reciprocal-sinusoid",
    "reciprocal_sinusoid": "reciprocal-sinusoid",
    "piecewise-constant": "piecewise-constant",
    "piecewise_constant": "piecewise-constant",
    "piecewise": "piecewise-constant",
    "grid": "grid",
}


def profile_from_dict(desc: Mapping[str, Any]) -> PeriodicProfile:
    """Build a profile from its JSON descriptor, e.g. ``{"kind": "constant", "value": 1}``."""
    if not isinstance(desc, Mapping) or "kind" not in desc:
        raise InvalidProfile("profile descriptor must be an object with a 'kind' field")
    kind = _KIND_ALIASES.get(str(desc["kind"]).lower())
    try:
        if kind == "constant":
            return Constant(desc["value"])
        if kind == "sinusoid":
            return Sinusoid(desc["mean"], desc["amplitude"], desc.get("harmonic", 1))
        if kind == "reciprocal-sinusoid":
            return ReciprocalSinusoid(desc["eps"])
        if kind == "piecewise-constant":
            return PiecewiseConstant(desc["breakpoints"], desc["values"])
        if kind == "grid":
            return GridProfile(desc["samples"])
    except KeyError as exc:
        raise InvalidProfile(f"profile of kind {desc['kind']!r} is missing field {exc}") from exc
    raise InvalidProfile(f"unknown profile kind {desc['kind']!r}")


@dataclass(frozen=True, eq=False)
class ProfilePair:
    """Diffusivity ``a`` and growth rate ``mu`` on the unit cell.

    ``a`` must be bounded below by a positive constant and ``mu`` must have
    a nonnegative mean. A zero mean is admitted (with ``mu`` not identically
    zero) because the minimal speed stays well defined there.
    """

    a: PeriodicProfile
    mu: PeriodicProfile

    def __post_init__(self):
        if not isinstance(self.a, PeriodicProfile) or not isinstance(self.mu, PeriodicProfile):
            raise InvalidProfile("ProfilePair fields must be PeriodicProfile instances")
        if not self.a.minimum() > 0:
            raise NonPositiveProfile(f"diffusivity must be positive, min a = {self.a.minimum():g}")
        mean = arithmetic_mean(self.mu)
        scale = max(abs(self.mu.minimum()), abs(self.mu.maximum()), 1e-300)
        if mean < -1e-12 * scale:
            raise NonPositiveMeanGrowth(f"mean growth rate must be >= 0, got {mean:g}")

    @property
    def a_min(self) -> float:
        return self.a.minimum()

    @property
    def a_max(self) -> float:
        return self.a.maximum()

    @property
    def mu_min(self) -> float:
        return self.mu.minimum()

    @property
    def mu_max(self) -> float:
        return self.mu.maximum()

    def to_dict(self) -> dict:
        return {"a": self.a.to_dict(), "mu": self.mu.to_dict()}


def pair_from_dict(desc: Mapping[str, Any]) -> ProfilePair:
    """Read ``{"a": {...}, "mu": {...}}`` or a patch descriptor ``{"L0", "l", "z", "m"}``."""
    if isinstance(desc, Mapping) and "a" in desc and "mu" in desc:
        return ProfilePair(profile_from_dict(desc["a"]), profile_from_dict(desc["mu"]))
    if isinstance(desc, Mapping) and {"L0", "l", "m"} <= set(desc):
        return build_patch_profiles(PatchConfig.from_dict(desc))
    raise InvalidProfile("config must hold 'a' and 'mu' descriptors or a patch descriptor")


@dataclass(frozen=True)
class PatchConfig:
    """Two-valued habitat: growth ``m`` on two fragments of length ``l/2``
    separated by a gap ``z``, zero elsewhere in the period ``L0``."""

    L0: float
    l: float
    z: float
    m: float

    def __post_init__(self):
        vals = (self.L0, self.l, self.z, self.m)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidPatchGeometry("patch parameters must be finite")
        if self.L0 <= 0 or self.m <= 0:
            raise InvalidPatchGeometry(f"need L0 > 0 and m > 0, got L0={self.L0}, m={self.m}")
        if not 0 < self.l < self.L0:
            raise InvalidPatchGeometry(f"need 0 < l < L0, got l={self.l}, L0={self.L0}")
        if self.z < 0 or self.l + self.z > self.L0 * (1 + 1e-12):
            raise InvalidPatchGeometry(
                f"need 0 <= z <= L0 - l, got z={self.z} with L0 - l = {self.L0 - self.l}"
            )

    @property
    def gap_max(self) -> float:
        return self.L0 - self.l

    def with_z(self, z: float) -> PatchConfig:
        return PatchConfig(self.L0, self.l, z, self.m)

    @classmethod
    def from_dict(cls, desc: Mapping[str, Any]) -> PatchConfig:
        try:
            return cls(float(desc["L0"]), float(desc["l"]), float(desc.get("z", 0.0)), float(desc["m"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidPatchGeometry(f"bad patch descriptor: {exc}") from exc

    def to_dict(self) -> dict:
        return {"L0": self.L0, "l": self.l, "z": self.z, "m": self.m}


def eval_profile(profile: PeriodicProfile, x):
    """Periodic evaluation; returns a float for scalar input."""
    out = profile(x)
    return float(out) if np.ndim(out) == 0 else out


def _sample_mean(profile, n, reciprocal=False):
    vals = profile(midpoint_grid(n))
    if reciprocal:
        vals = 1.0 / vals
    return float(np.mean(vals))


def arithmetic_mean(profile: PeriodicProfile, n: int = DEFAULT_QUADRATURE_POINTS) -> float:
    """``int_0^1 f``; exact for piecewise kinds, midpoint rule otherwise."""
    if isinstance(profile, Constant):
        return profile.value
    if isinstance(profile, (PiecewiseConstant, GridProfile)):
        return float(profile.antiderivative(1.0))
    return _sample_mean(profile, n)


def harmonic_mean(profile: PeriodicProfile, n: int = DEFAULT_QUADRATURE_POINTS) -> float:
    """``(int_0^1 1/f)^-1`` for a strictly positive profile."""
    if not profile.minimum() > 0:
        raise NonPositiveProfile(f"harmonic mean needs a positive profile, min = {profile.minimum():g}")
    inv = profile.reciprocal()
    if inv is not None:
        return 1.0 / arithmetic_mean(inv, n)
    return 1.0 / _sample_mean(profile, n, reciprocal=True)


def _spectral_antiderivative(samples: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``int_0^x f`` from midpoint samples of a smooth periodic ``f`` (Fourier integration)."""
    n = samples.size
    coef = np.fft.rfft(samples) / n
    k = np.arange(coef.size)
    coef = coef * np.exp(-1j * np.pi * k / n)  # undo the half-cell shift of the sample grid
    c0 = coef[0].real
    if n % 2 == 0:
        coef[-1] = 0.0  # Nyquist mode has no well-defined antiderivative
    kk = k[1:]
    g = coef[1:] / (2j * np.pi * kk)
    out = np.empty(x.size)
    chunk = 512
    for start in range(0, x.size, chunk):
        xs = x[start:start + chunk]
        phase = np.exp(2j * np.pi * np.outer(xs, kk))
        out[start:start + chunk] = c0 * xs + 2.0 * ((phase - 1.0) @ g).real
    return out


def cumulative_integral(profile: PeriodicProfile, x, *, reciprocal: bool = False,
                        n: int = DEFAULT_QUADRATURE_POINTS) -> np.ndarray:
    """``int_0^x f(y) dy`` (or of ``1/f`` when ``reciprocal``) at the points ``x``.

    Exact antiderivatives are used when the kind has one; smooth kinds
    otherwise go through Fourier integration of ``n`` midpoint samples.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    target = profile.reciprocal() if reciprocal else profile
    if target is not None:
        exact = target.antiderivative(x)
        if exact is not None:
            return exact
    samples = profile(midpoint_grid(n))
    if reciprocal:
        samples = 1.0 / samples
    whole = np.floor(x)
    frac = x - whole
    return whole * float(np.mean(samples)) + _spectral_antiderivative(samples, frac)


def build_patch_profiles(cfg: PatchConfig) -> ProfilePair:
    """Unit-cell profiles of the patch model: ``a = 1`` and a two-valued ``mu``."""
    L0, l, z, m = cfg.L0, cfg.l, cfg.z, cfg.m
    edges = [0.0, 0.5 * l / L0, (0.5 * l + z) / L0, (l + z) / L0, 1.0]
    values = [m, 0.0, m, 0.0]
    segs = [(lo, hi, v) for lo, hi, v in zip(edges[:-1], edges[1:], values) if hi - lo > 1e-14]
    merged = []
    for lo, hi, v in segs:
        if merged and merged[-1][2] == v:
            merged[-1] = (merged[-1][0], hi, v)
        else:
            merged.append((lo, hi, v))
    if len(merged) > 1 and merged[0][2] == merged[-1][2]:
        # wrap-around merge: the head segment is absorbed by the tail value
        merged = merged[1:]
    breakpoints = [lo for lo, _, _ in merged]
    vals = [v for _, _, v in merged]
    return ProfilePair(Constant(1.0), PiecewiseConstant(breakpoints, vals))
