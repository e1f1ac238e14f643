"""Channel parameterization, state decompositions, regime classification.

The two-user channel has outputs

    Y1 = X1 + a*X2 + S1 + N1
    Y2 = b*X1 + X2 + S2 + N2

with unit-variance noises, transmit powers P1 and P2, and zero-mean jointly
Gaussian states S1 ~ (0, Q1), S2 ~ (0, Q2) with correlation coefficient rho.
Both states are known noncausally at both transmitters.  The Z variant has
b = 0 (receiver 2 is interference free).

Because the states are jointly Gaussian, either can be regressed on the
other with an independent residual:

    S1 = d*S2 + S1'   with d = rho*sqrt(Q1/Q2),  var(S1') = Q1*(1 - rho^2)
    S2 = c*S1 + S2'   with c = rho*sqrt(Q2/Q1),  var(S2') = Q2*(1 - rho^2)

Scenes for the very strong regime use the first decomposition; scenes for
the strong regime use the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping

from .errors import BadSplit, InvalidParams, InvalidZIC
from .gaussian import Basis, GaussianScene

__all__ = [
    "IcParams",
    "DecompDirection",
    "StateDecomp",
    "ChannelKind",
    "RegimeKind",
    "Regime",
    "SceneVariant",
    "decompose",
    "rho_from_slope",
    "classify",
    "build_scene",
]

#: tolerance band applied to the non-strict regime comparisons
_TIE_REL = 1e-12


@dataclass(frozen=True)
class IcParams:
    """Channel parameter tuple (a, b, P1, P2, Q1, Q2, rho).

    ``b`` is the receiver-2 cross gain and must be 0 for the Z variant.
    Powers and state variances are strictly positive; |rho| <= 1.
    """

    a: float
    b: float
    p1: float
    p2: float
    q1: float
    q2: float
    rho: float

    def __post_init__(self):
        for name in ("a", "b", "p1", "p2", "q1", "q2", "rho"):
            value = getattr(self, name)
            object.__setattr__(self, name, float(value))
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"parameter {name} must be finite, got {value}")
        for name in ("p1", "p2", "q1", "q2"):
            if getattr(self, name) <= 0.0:
                raise InvalidParams(f"parameter {name} must be > 0, got {getattr(self, name)}")
        if abs(self.rho) > 1.0:
            raise InvalidParams(f"|rho| must be <= 1, got {self.rho}")

    def replace(self, **changes) -> "IcParams":
        return replace(self, **changes)


class DecompDirection(Enum):
    S1_ON_S2 = "S1_on_S2"
    S2_ON_S1 = "S2_on_S1"


@dataclass(frozen=True)
class StateDecomp:
    """One state regressed on the other: slope plus independent residual variance."""

    direction: DecompDirection
    slope: float
    residual_var: float


def decompose(params: IcParams, direction: DecompDirection) -> StateDecomp:
    """Regression decomposition of one state on the other.

    ``S1_ON_S2`` returns slope d = rho*sqrt(Q1/Q2) and residual variance
    Q1*(1-rho^2), so that d^2*Q2 + residual = Q1 exactly; ``S2_ON_S1`` is the
    mirror image.
    """
    residual_scale = 1.0 - params.rho * params.rho
    if direction is DecompDirection.S1_ON_S2:
        slope = params.rho * math.sqrt(params.q1 / params.q2)
        return StateDecomp(direction, slope, params.q1 * residual_scale)
    if direction is DecompDirection.S2_ON_S1:
        slope = params.rho * math.sqrt(params.q2 / params.q1)
        return StateDecomp(direction, slope, params.q2 * residual_scale)
    raise ValueError(f"unknown decomposition direction {direction!r}")


def rho_from_slope(direction: DecompDirection, slope: float, q1: float, q2: float) -> float:
    """Correlation coefficient implied by a regression slope (inverse of decompose)."""
    if q1 <= 0.0 or q2 <= 0.0:
        raise InvalidParams("state variances must be > 0")
    if direction is DecompDirection.S1_ON_S2:
        rho = slope * math.sqrt(q2 / q1)
    elif direction is DecompDirection.S2_ON_S1:
        rho = slope * math.sqrt(q1 / q2)
    else:
        raise ValueError(f"unknown decomposition direction {direction!r}")
    if abs(rho) > 1.0 + 1e-12:
        raise InvalidParams(
            f"slope {slope:g} implies |rho| = {abs(rho):g} > 1 for Q1={q1:g}, Q2={q2:g}"
        )
    return max(-1.0, min(1.0, rho))


class ChannelKind(Enum):
    IC = "IC"
    ZIC = "ZIC"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value).upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown channel kind {value!r}") from None


class RegimeKind(Enum):
    VERY_STRONG_IC = "VeryStrongIC"
    STRONG_NOT_VERY_STRONG_IC = "StrongNotVeryStrongIC"
    WEAK_IC = "WeakIC"
    VERY_STRONG_ZIC = "VeryStrongZIC"
    STRONG_NOT_VERY_STRONG_ZIC = "StrongNotVeryStrongZIC"
    WEAK_ZIC = "WeakZIC"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class Regime:
    """Classification outcome plus the signed slacks of every defining inequality."""

    kind: RegimeKind
    margins: Mapping[str, float]
    needs_index_swap: bool = False


def _le(lhs: float, rhs: float) -> bool:
    """Non-strict comparison with a relative tie band."""
    return lhs <= rhs + _TIE_REL * max(1.0, abs(lhs), abs(rhs))


def classify(params: IcParams, channel: ChannelKind | str = ChannelKind.IC) -> Regime:
    """Interference regime of the parameter point.

    No regime is extrapolated: parameter points whose defining inequalities
    all fail (e.g. mixed interference) come back ``Unclassified``.  For the
    strong regular channel the receiver power ordering
    ``P1 + a^2 P2 <= b^2 P1 + P2`` is recorded via ``needs_index_swap``
    rather than silently relabeling the transmitters.
    """
    channel = ChannelKind.parse(channel)
    a, b, p1, p2 = params.a, params.b, params.p1, params.p2

    if channel is ChannelKind.ZIC:
        if b != 0.0:
            raise InvalidZIC(f"Z channel requires b = 0, got b = {b}")
        a2 = a * a
        margins = {
            "very_strong": a2 - (1.0 + p1),
            "strong_lower": a2 - 1.0,
            "strong_upper": (1.0 + p1) - a2,
            "weak": 1.0 - a2,
        }
        # the a = 1 tie satisfies both the weak and the strong definitions;
        # resolve to weak, where the sum capacity result is exact
        if _le(a2, 1.0):
            kind = RegimeKind.WEAK_ZIC
        elif a2 > 1.0 + p1:
            kind = RegimeKind.VERY_STRONG_ZIC
        elif a2 < 1.0 + p1:
            kind = RegimeKind.STRONG_NOT_VERY_STRONG_ZIC
        else:
            kind = RegimeKind.UNCLASSIFIED
        return Regime(kind, margins)

    prod = (1.0 + p1) * (1.0 + p2)
    mac1 = p1 + a * a * p2 + 1.0
    mac2 = b * b * p1 + p2 + 1.0
    weak_sum = abs(a * (1.0 + b * b * p1)) + abs(b * (1.0 + a * a * p2))
    margins = {
        "very_strong_rx1": mac1 - prod,
        "very_strong_rx2": mac2 - prod,
        "strong_gain_a": a - 1.0,
        "strong_gain_b": b - 1.0,
        "strong_mac_bound": prod - min(mac1, mac2),
        "weak_tin": 1.0 - weak_sum,
        "rx_power_ordering": mac2 - mac1,
    }
    needs_swap = False
    if mac1 > prod and mac2 > prod:
        kind = RegimeKind.VERY_STRONG_IC
    elif _le(1.0, a) and _le(1.0, b) and _le(min(mac1, mac2), prod):
        kind = RegimeKind.STRONG_NOT_VERY_STRONG_IC
        needs_swap = not _le(mac1, mac2)
    elif _le(weak_sum, 1.0):
        kind = RegimeKind.WEAK_IC
    else:
        kind = RegimeKind.UNCLASSIFIED
    return Regime(kind, margins, needs_index_swap=needs_swap)


class SceneVariant(Enum):
    VS_IC = "vs-ic"
    VS_ZIC = "vs-zic"
    STRONG_IC = "strong-ic"
    STRONG_ZIC = "strong-zic"

    @classmethod
    def parse(cls, value) -> "SceneVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("_", "-"))
        except ValueError:
            raise ValueError(f"unknown scene variant {value!r}") from None


def _split_powers(params: IcParams, split: float) -> tuple[float, float]:
    split = float(split)
    slack = 1e-12 * params.p1
    if not math.isfinite(split) or split < -slack or split > params.p1 + slack:
        raise BadSplit(f"power split P1'' must lie in [0, {params.p1:g}], got {split}")
    split = min(max(split, 0.0), params.p1)
    return params.p1 - split, split


def build_scene(params: IcParams, variant: SceneVariant | str, split: float | None = None) -> GaussianScene:
    """Assemble the channel scene for a regime variant.

    Very strong variants use the S1-on-S2 decomposition with basis
    (X1, X2, S2, S1p, N1, N2) and the reconstructed S1 as a derived
    variable.  Strong variants need a power split ``split`` = P1'' and use
    the S2-on-S1 decomposition with basis
    (X1p, X1dp, X2, S1, S2p, N1, N2) plus derived X1 and S2.  Z variants
    require b = 0 and give Y2 no X1 component.
    """
    variant = SceneVariant.parse(variant)
    a, b = params.a, params.b
    if variant in (SceneVariant.VS_ZIC, SceneVariant.STRONG_ZIC):
        if b != 0.0:
            raise InvalidZIC(f"Z scene requires b = 0, got b = {b}")
    if variant in (SceneVariant.VS_IC, SceneVariant.VS_ZIC):
        if split is not None:
            raise ValueError("power split only applies to strong variants")
        dec = decompose(params, DecompDirection.S1_ON_S2)
        basis = Basis(
            [
                ("X1", params.p1),
                ("X2", params.p2),
                ("S2", params.q2),
                ("S1p", dec.residual_var),
                ("N1", 1.0),
                ("N2", 1.0),
            ]
        )
        scene = GaussianScene(basis)
        scene = scene.define("S1", {"S2": dec.slope, "S1p": 1.0})
        scene = scene.define("Y1", {"X1": 1.0, "X2": a, "S2": dec.slope, "S1p": 1.0, "N1": 1.0})
        y2 = {"X2": 1.0, "S2": 1.0, "N2": 1.0}
        if variant is SceneVariant.VS_IC:
            y2["X1"] = b
        return scene.define("Y2", y2)

    if split is None:
        raise BadSplit("strong variants require a power split P1''")
    p1_prime, p1_dprime = _split_powers(params, split)
    dec = decompose(params, DecompDirection.S2_ON_S1)
    basis = Basis(
        [
            ("X1p", p1_prime),
            ("X1dp", p1_dprime),
            ("X2", params.p2),
            ("S1", params.q1),
            ("S2p", dec.residual_var),
            ("N1", 1.0),
            ("N2", 1.0),
        ]
    )
    scene = GaussianScene(basis)
    scene = scene.define("X1", {"X1p": 1.0, "X1dp": 1.0})
    scene = scene.define("S2", {"S1": dec.slope, "S2p": 1.0})
    scene = scene.define(
        "Y1", {"X1p": 1.0, "X1dp": 1.0, "X2": a, "S1": 1.0, "N1": 1.0}
    )
    y2 = {"X2": 1.0, "S1": dec.slope, "S2p": 1.0, "N2": 1.0}
    if variant is SceneVariant.STRONG_IC:
        y2["X1p"] = b
        y2["X1dp"] = b
    return scene.define("Y2", y2)
