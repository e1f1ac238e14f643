"""Rate-region toolkit for the two-user Gaussian interference channel with
correlated additive states known noncausally at both transmitters.

The package computes exact mutual informations over linear Gaussian scenes,
classifies interference regimes, evaluates the capacity-achievability
conditions of the cooperative dirty-paper schemes in each regime, and
cross-validates every closed form against a Monte-Carlo plug-in estimator.
"""

from .channel import (
    ChannelKind,
    DecompDirection,
    IcParams,
    Regime,
    RegimeKind,
    SceneVariant,
    StateDecomp,
    build_scene,
    classify,
    decompose,
    rho_from_slope,
)
from .errors import (
    BadFactorization,
    BadSplit,
    DegenerateCovariance,
    GateViolated,
    InternalInconsistency,
    InvalidParams,
    InvalidZIC,
    OrderingViolated,
    SdicError,
    SingularDenominator,
    UnknownVariable,
    UsageError,
    WrongRegime,
)
from .gaussian import (
    Basis,
    GaussianScene,
    RandVec,
    cond_mutual_info,
    covariance,
    entropy,
    mutual_info,
)
from .mc import McPair, McReport, sample_covariance, validate
from .report import CAPACITY_TOL, Condition, ConditionReport, RateBounds
from .strong import (
    SegmentResult,
    StrongScheme,
    SumRatePoint,
    ic_layered_region,
    strong_ic_check,
    strong_ic_rate_point,
    strong_scene,
    strong_scheme,
    strong_zic_check,
    strong_zic_segment,
    zic_layered_region,
)
from .sweep import Axis, SweepGrid, SweepSpec, run_sweep
from .verystrong import (
    VsIcCoefficients,
    VsZicCoefficients,
    ic_gp_region,
    vs_ic_check,
    vs_ic_coefficients,
    vs_ic_curves,
    vs_ic_scene,
    vs_zic_check,
    vs_zic_coefficients,
    vs_zic_scene,
    zic_gp_region,
)
from .weak import weak_ic_sum_capacity, weak_zic_sum_capacity

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BadFactorization",
    "BadSplit",
    "Basis",
    "CAPACITY_TOL",
    "ChannelKind",
    "Condition",
    "ConditionReport",
    "DecompDirection",
    "DegenerateCovariance",
    "GateViolated",
    "GaussianScene",
    "IcParams",
    "InternalInconsistency",
    "InvalidParams",
    "InvalidZIC",
    "McPair",
    "McReport",
    "OrderingViolated",
    "RandVec",
    "RateBounds",
    "Regime",
    "RegimeKind",
    "SceneVariant",
    "SdicError",
    "SegmentResult",
    "SingularDenominator",
    "StateDecomp",
    "StrongScheme",
    "SumRatePoint",
    "SweepGrid",
    "SweepSpec",
    "UnknownVariable",
    "UsageError",
    "VsIcCoefficients",
    "VsZicCoefficients",
    "WrongRegime",
    "build_scene",
    "classify",
    "cond_mutual_info",
    "covariance",
    "decompose",
    "entropy",
    "ic_gp_region",
    "ic_layered_region",
    "mutual_info",
    "rho_from_slope",
    "run_sweep",
    "sample_covariance",
    "strong_ic_check",
    "strong_ic_rate_point",
    "strong_scene",
    "strong_scheme",
    "strong_zic_check",
    "strong_zic_segment",
    "validate",
    "vs_ic_check",
    "vs_ic_coefficients",
    "vs_ic_curves",
    "vs_ic_scene",
    "vs_zic_check",
    "vs_zic_coefficients",
    "vs_zic_scene",
    "weak_ic_sum_capacity",
    "weak_zic_sum_capacity",
    "zic_gp_region",
    "zic_layered_region",
]
