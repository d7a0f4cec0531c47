"""Minimal speeds of pulsating Fisher-KPP fronts in one-dimensional periodic media."""

__version__ = "0.1.0"

from .eigen import EigenResult, principal_eigenvalue, rho1
from .exceptions import (
    BlowUp,
    BracketFailure,
    DomainError,
    FrontExited,
    IdenticallyZeroGrowth,
    InsufficientTrace,
    InvalidPatchGeometry,
    InvalidProfile,
    MissingColumn,
    NonConvergence,
    NonPositiveMeanGrowth,
    NonPositiveProfile,
    NoRootAboveM,
    NotMeanZero,
    NumericalError,
    PerronFailure,
    PulsefrontError,
    RegimeWarning,
    ValidationError,
)
from .homog import HomogReport, MeanZeroReport, beta_mean_zero, gamma, phi1_closed_form
from .patch import FragSweepReport, PatchDispersion, F_eval, G_eval, c_star_patch, frag_sweep, k_patch
from .profiles import (
    Constant,
    GridProfile,
    PatchConfig,
    PeriodicProfile,
    PiecewiseConstant,
    ProfilePair,
    ReciprocalSinusoid,
    Sinusoid,
    arithmetic_mean,
    build_patch_profiles,
    eval_profile,
    harmonic_mean,
    pair_from_dict,
    profile_from_dict,
)
from .simulate import FrontTrace, SimConfig, SimResult, measure_speed, run_front
from .speed import SpeedResult, SweepReport, lambda_star_limit_check, minimal_speed, sweep_L
