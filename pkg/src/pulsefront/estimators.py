"""scikit-learn style wrappers.

The fitted "model" is the map from a period (or a gap offset) to the minimal
front speed. ``fit`` validates the medium and caches the homogenized
constants; ``predict`` evaluates the variational formula at each input.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import ValidationError
from .homog import gamma
from .patch import c_star_patch, in_regime
from .profiles import PatchConfig, PeriodicProfile, ProfilePair, profile_from_dict
from .speed import minimal_speed

__all__ = ["PulsatingSpeedRegressor", "PatchSpeedRegressor", "check_column"]


def check_column(X) -> np.ndarray:
    """Accept a 1-D array or a single-column 2-D array; return it flattened."""
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValidationError(f"expected a single feature column, got {X.shape[1]}")
        X = X[:, 0]
    return X


def _as_profile(p) -> PeriodicProfile:
    if isinstance(p, PeriodicProfile):
        return p
    if isinstance(p, dict):
        return profile_from_dict(p)
    raise ValidationError(f"expected a profile or profile descriptor, got {type(p).__name__}")


class PulsatingSpeedRegressor(RegressorMixin, BaseEstimator):
    """Minimal speed ``c*_L`` as a function of the period ``L``.

    Parameters
    ----------
    a, mu : PeriodicProfile or dict
        Unit-cell diffusivity and growth rate (descriptors as in the JSON
        config format are accepted).
    n_grid : int, optional
        Eigen grid size; chosen automatically when omitted.

    Attributes
    ----------
    profiles_ : ProfilePair
    a_H_, mu_A_, c_hom_, gamma_ : float
        Homogenized constants (``gamma_`` is NaN for zero-mean growth).
    """

    def __init__(self, a=None, mu=None, n_grid=None):
        self.a = a
        self.mu = mu
        self.n_grid = n_grid

    def fit(self, X=None, y=None):
        if self.a is None or self.mu is None:
            raise ValidationError("both a and mu must be given")
        self.profiles_ = ProfilePair(_as_profile(self.a), _as_profile(self.mu))
        try:
            rep = gamma(self.profiles_)
            self.a_H_, self.mu_A_, self.c_hom_, self.gamma_ = rep.a_H, rep.mu_A, rep.c_hom, rep.gamma
        except ValidationError:
            self.a_H_, self.mu_A_, self.c_hom_, self.gamma_ = np.nan, 0.0, 0.0, np.nan
        return self

    def _results(self, X):
        check_is_fitted(self, "profiles_")
        return [minimal_speed(self.profiles_, float(L), self.n_grid) for L in check_column(X)]

    def predict(self, X) -> np.ndarray:
        """``c*_L`` for each period in ``X``."""
        return np.array([r.c_star for r in self._results(X)])

    def transform(self, X) -> np.ndarray:
        """Columns ``(c_star, lambda_star, k_at_min)`` for each period."""
        return np.array([[r.c_star, r.lambda_star, r.k_at_min] for r in self._results(X)])


class PatchSpeedRegressor(RegressorMixin, BaseEstimator):
    """Patch-model minimal speed ``c*_z`` as a function of the gap offset ``z``."""

    def __init__(self, L0=1.0, l=0.8, m=1.0):
        self.L0 = L0
        self.l = l
        self.m = m

    def fit(self, X=None, y=None):
        self.config_ = PatchConfig(float(self.L0), float(self.l), 0.0, float(self.m))
        self.in_regime_ = in_regime(self.config_)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "config_")
        return np.array([c_star_patch(self.config_.with_z(float(z))).c_star for z in check_column(X)])
