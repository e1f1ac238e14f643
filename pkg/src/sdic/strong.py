"""Strong (not very strong) regime: rate splitting plus layered dirty paper.

Transmitter 1 splits its power P1 = P1' + P1'' across two layers X1' and
X1''; transmitter 2 contributes through the scaled auxiliary V = a*X2 +
beta*S1.  Receiver 1 decodes U1, then V, then U2, each layer dirty-paper
coded against the state left over by the previous subtraction:

    U1 = X1'  + alpha1*S1      alpha1 = P1'    / (P1 + a^2 P2 + 1)
    U2 = X1'' + alpha2*S1      alpha2 = P1''   / (P1 + a^2 P2 + 1)
    V  = a*X2 + beta*S1        beta   = a^2 P2 / (P1 + a^2 P2 + 1)

With these weights the three receiver-1 decoding rates telescope to the
no-state sum capacity 0.5*log(1 + P1 + a^2 P2), so every split exposes one
point of the sum-rate boundary.  The point survives as an achievable point
of the state-dependent channel iff receiver 2 can keep up; those are the
reported conditions (an explicit closed form for the Z variant, three MI
inequalities for the regular channel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

from .channel import (
    ChannelKind,
    DecompDirection,
    IcParams,
    RegimeKind,
    SceneVariant,
    build_scene,
    classify,
    decompose,
)
from .errors import BadSplit, GateViolated, BadFactorization, OrderingViolated, WrongRegime
from .gaussian import GaussianScene, cond_mutual_info, mutual_info
from .report import CAPACITY_TOL, ConditionReport, RateBounds, clamp_bounds, make_condition

__all__ = [
    "StrongScheme",
    "SumRatePoint",
    "SegmentResult",
    "strong_scheme",
    "strong_ic_rate_point",
    "strong_scene",
    "strong_ic_check",
    "strong_zic_check",
    "strong_ic_evaluate",
    "strong_zic_evaluate",
    "strong_zic_closed_form",
    "strong_zic_segment",
    "ic_layered_region",
    "zic_layered_region",
]

AuxSpec = Union[str, Mapping[str, float]]

#: below this interference power a^2*P2 the boundary point degenerates to
#: the single-user corner and the threshold ratio loses meaning
_DEGENERATE_CROSS_POWER = 1e-12


def _half_log1p(x: float, base: float) -> float:
    return 0.5 * math.log1p(x) / math.log(base)


@dataclass(frozen=True)
class StrongScheme:
    """Power split and layered dirty-paper weights for one boundary point."""

    p1_prime: float
    p1_dprime: float
    alpha1: float
    alpha2: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "p1_prime": self.p1_prime,
            "p1_dprime": self.p1_dprime,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class SumRatePoint:
    """A point on the no-state sum-capacity line, parameterized by P1''."""

    r1: float
    r2: float
    p1_dprime: float

    def to_dict(self) -> dict:
        return {"r1": self.r1, "r2": self.r2, "p1_dprime": self.p1_dprime}


@dataclass(frozen=True)
class SegmentResult:
    """Grid scan of the certified portion of the sum-capacity line."""

    p1dp_min: float | None
    rates: tuple[SumRatePoint, ...]
    grid_steps: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "p1dp_min": self.p1dp_min,
            "grid_steps": self.grid_steps,
            "degenerate": self.degenerate,
            "rates": [p.to_dict() for p in self.rates],
        }


def _require_strong(params: IcParams) -> RegimeKind:
    channel = ChannelKind.ZIC if params.b == 0.0 else ChannelKind.IC
    regime = classify(params, channel)
    if regime.kind not in (
        RegimeKind.STRONG_NOT_VERY_STRONG_IC,
        RegimeKind.STRONG_NOT_VERY_STRONG_ZIC,
    ):
        raise WrongRegime(
            f"strong (not very strong) interference required, classified as {regime.kind.value}"
        )
    return regime.kind


def _split(params: IcParams, p1_dprime: float) -> tuple[float, float]:
    slack = 1e-12 * params.p1
    p1dp = float(p1_dprime)
    if not math.isfinite(p1dp) or p1dp < -slack or p1dp > params.p1 + slack:
        raise BadSplit(f"P1'' must lie in [0, {params.p1:g}], got {p1_dprime}")
    p1dp = min(max(p1dp, 0.0), params.p1)
    return params.p1 - p1dp, p1dp


def _coefficients(params: IcParams, p1_dprime: float) -> StrongScheme:
    p1p, p1dp = _split(params, p1_dprime)
    total = params.p1 + params.a * params.a * params.p2 + 1.0
    return StrongScheme(
        p1_prime=p1p,
        p1_dprime=p1dp,
        alpha1=p1p / total,
        alpha2=p1dp / total,
        beta=params.a * params.a * params.p2 / total,
    )


def strong_scheme(params: IcParams, p1_dprime: float) -> StrongScheme:
    """Layered dirty-paper weights for the split P1'' (strong regime only)."""
    _require_strong(params)
    return _coefficients(params, p1_dprime)


def _rate_point(params: IcParams, p1_dprime: float, base: float) -> SumRatePoint:
    p1p, p1dp = _split(params, p1_dprime)
    a2p2 = params.a * params.a * params.p2
    r1 = _half_log1p(p1p / (a2p2 + p1dp + 1.0), base) + _half_log1p(p1dp, base)
    r2 = _half_log1p(a2p2 / (p1dp + 1.0), base)
    return SumRatePoint(r1=r1, r2=r2, p1_dprime=p1dp)


def strong_ic_rate_point(params: IcParams, p1_dprime: float, log_base: float = 2.0) -> SumRatePoint:
    """The sum-capacity-line point selected by P1''.

        R1 = 0.5*log(1 + P1'/(a^2 P2 + P1'' + 1)) + 0.5*log(1 + P1'')
        R2 = 0.5*log(1 + a^2 P2/(P1'' + 1))

    R1 + R2 telescopes to 0.5*log(1 + P1 + a^2 P2) for every split.
    """
    _require_strong(params)
    return _rate_point(params, p1_dprime, log_base)


def strong_scene(params: IcParams, p1_dprime: float, scheme: StrongScheme | None = None) -> GaussianScene:
    """Channel scene plus the layered auxiliaries U1, U2, V."""
    if scheme is None:
        scheme = _coefficients(params, p1_dprime)
    variant = SceneVariant.STRONG_ZIC if params.b == 0.0 else SceneVariant.STRONG_IC
    scene = build_scene(params, variant, split=scheme.p1_dprime)
    scene = scene.define("U1", {"X1p": 1.0, "S1": scheme.alpha1})
    scene = scene.define("U2", {"X1dp": 1.0, "S1": scheme.alpha2})
    return scene.define("V", {"X2": params.a, "S1": scheme.beta})


def strong_ic_evaluate(
    params: IcParams, p1_dprime: float, log_base: float = 2.0, tol: float = CAPACITY_TOL
) -> ConditionReport:
    """Evaluate the regular-channel boundary-point conditions without gates.

    Receiver 2 must decode, in order, U1, its own V given U1, and U2 given
    (U1, V), each at least as fast as receiver 1 does net of binning:

        I(U1;Y2) - I(U1;S1)              >= 0.5*log(1 + P1'/(a^2 P2 + P1'' + 1))
        I(V;U1,Y2) - I(V;S1)             >= 0.5*log(1 + a^2 P2/(P1'' + 1))
        I(U2;V,Y2|U1) - I(U2;S1|U1)      >= 0.5*log(1 + P1'')
    """
    scheme = _coefficients(params, p1_dprime)
    scene = strong_scene(params, p1_dprime, scheme)
    point = _rate_point(params, p1_dprime, log_base)
    a2p2 = params.a * params.a * params.p2
    layer1_rate = _half_log1p(scheme.p1_prime / (a2p2 + scheme.p1_dprime + 1.0), log_base)
    layer2_rate = _half_log1p(scheme.p1_dprime, log_base)
    cross_rate = _half_log1p(a2p2 / (scheme.p1_dprime + 1.0), log_base)

    lhs_u1 = mutual_info(scene, "U1", "Y2", log_base) - mutual_info(scene, "U1", "S1", log_base)
    lhs_v = mutual_info(scene, "V", ("U1", "Y2"), log_base) - mutual_info(scene, "V", "S1", log_base)
    lhs_u2 = cond_mutual_info(scene, "U2", ("V", "Y2"), "U1", log_base) - cond_mutual_info(
        scene, "U2", "S1", "U1", log_base
    )
    conditions = (
        make_condition("u1_at_rx2", ">=", lhs_u1, layer1_rate, tol),
        make_condition("v_at_rx2", ">=", lhs_v, cross_rate, tol),
        make_condition("u2_at_rx2", ">=", lhs_u2, layer2_rate, tol),
    )
    achieves = all(c.holds for c in conditions)
    return ConditionReport(conditions, achieves, rate_point=point if achieves else None)


def strong_ic_check(
    params: IcParams, p1_dprime: float, log_base: float = 2.0, tol: float = CAPACITY_TOL
) -> ConditionReport:
    """Boundary-point achievability check for the regular channel.

    Requires the strong (not very strong) regime and the receiver power
    ordering P1 + a^2 P2 <= b^2 P1 + P2 under which the scheme is stated.
    When the ordering fails, raise rather than silently swapping the
    transmitter roles; see the README for the manual relabeling.
    """
    regime = classify(params, ChannelKind.IC)
    if regime.kind is not RegimeKind.STRONG_NOT_VERY_STRONG_IC:
        raise WrongRegime(
            f"strong (not very strong) interference required, classified as {regime.kind.value}"
        )
    if regime.needs_index_swap:
        raise OrderingViolated(
            "receiver power ordering P1 + a^2 P2 + 1 <= b^2 P1 + P2 + 1 violated; "
            "swap the transmitter roles (a<->b, P1<->P2, Q1<->Q2) and rerun"
        )
    return strong_ic_evaluate(params, p1_dprime, log_base, tol)


def strong_zic_closed_form(params: IcParams, p1_dprime: float) -> tuple[float, float]:
    """Closed-form threshold (lhs, rhs) for the Z-variant boundary point.

    lhs >= rhs is algebraically equivalent to the cross-decoding gate
    I(V;U1,Y1) <= I(V;Y2):

        lhs = a^2 P2 (P2 + c^2 Q1 + Q2' + 1)
              / ((a c - beta)^2 Q1 P2 + (a^2 P2 + beta^2 Q1)(Q2' + 1))
        rhs = 1 + a^2 P2 / (P1'' + 1)
    """
    dec = decompose(params, DecompDirection.S2_ON_S1)
    _, p1dp = _split(params, p1_dprime)
    a, p2, q1 = params.a, params.p2, params.q1
    c, q2p = dec.slope, dec.residual_var
    a2p2 = a * a * p2
    beta = a2p2 / (params.p1 + a2p2 + 1.0)
    num = a2p2 * (p2 + c * c * q1 + q2p + 1.0)
    den = (a * c - beta) ** 2 * q1 * p2 + (a2p2 + beta * beta * q1) * (q2p + 1.0)
    return num / den, 1.0 + a2p2 / (p1dp + 1.0)


def strong_zic_evaluate(
    params: IcParams, p1_dprime: float, log_base: float = 2.0, tol: float = CAPACITY_TOL
) -> ConditionReport:
    """Evaluate the Z-variant boundary-point condition without the regime gate."""
    lhs, rhs = strong_zic_closed_form(params, p1_dprime)
    closed = make_condition("closed_form", ">=", lhs, rhs, tol)
    scene = strong_scene(params, p1_dprime)
    gate = make_condition(
        "mi_gate",
        "<=",
        mutual_info(scene, "V", ("U1", "Y1"), log_base),
        mutual_info(scene, "V", "Y2", log_base),
        tol,
    )
    achieves = closed.holds
    point = _rate_point(params, p1_dprime, log_base)
    return ConditionReport((closed, gate), achieves, rate_point=point if achieves else None)


def strong_zic_check(
    params: IcParams, p1_dprime: float, log_base: float = 2.0, tol: float = CAPACITY_TOL
) -> ConditionReport:
    """Boundary-point achievability check for the Z variant.

    Reports the closed-form threshold and the MI gate I(V;U1,Y1) <= I(V;Y2);
    the verdict follows the closed form.  On success the attached rate point
    sits on the sum-capacity boundary of the state-dependent channel.
    """
    regime = classify(params, ChannelKind.ZIC)
    if regime.kind is not RegimeKind.STRONG_NOT_VERY_STRONG_ZIC:
        raise WrongRegime(
            f"strong (not very strong) interference required (1 <= a^2 < 1+P1), "
            f"classified as {regime.kind.value}"
        )
    return strong_zic_evaluate(params, p1_dprime, log_base, tol)


def strong_zic_segment(
    params: IcParams, grid_steps: int = 201, log_base: float = 2.0, tol: float = CAPACITY_TOL
) -> SegmentResult:
    """Certified portion of the sum-capacity line on a uniform P1'' grid.

    The closed-form threshold is free of P1'' on its left side and its right
    side shrinks as P1'' grows, so certification at one grid point extends to
    every larger split; the scan reports the smallest passing split and all
    certified points from there to P1'' = P1.
    """
    regime = classify(params, ChannelKind.ZIC)
    if regime.kind is not RegimeKind.STRONG_NOT_VERY_STRONG_ZIC:
        raise WrongRegime(
            f"strong (not very strong) interference required, classified as {regime.kind.value}"
        )
    if grid_steps < 2:
        raise ValueError("grid_steps must be >= 2")
    if params.a * params.a * params.p2 <= _DEGENERATE_CROSS_POWER:
        return SegmentResult(None, (), grid_steps, degenerate=True)
    step = params.p1 / (grid_steps - 1)
    p1dp_min = None
    rates: list[SumRatePoint] = []
    for i in range(grid_steps):
        p1dp = min(i * step, params.p1)
        lhs, rhs = strong_zic_closed_form(params, p1dp)
        if lhs - rhs >= -tol:
            if p1dp_min is None:
                p1dp_min = p1dp
            rates.append(_rate_point(params, p1dp, log_base))
    return SegmentResult(p1dp_min, tuple(rates), grid_steps)


def _resolve_aux(scene: GaussianScene, name: str, spec: AuxSpec) -> tuple[GaussianScene, str]:
    if isinstance(spec, str):
        if not scene.has(spec):
            raise ValueError(f"auxiliary {spec!r} is not defined in the scene")
        return scene, spec
    k = 2
    while scene.has(name):
        name = f"{name.rstrip('0123456789_')}_{k}"
        k += 1
    return scene.define(name, spec), name


def _check_s1_side(scene: GaussianScene, name: str, forbidden: tuple[str, ...]):
    row = scene.var(name).coeffs
    bad = [f for f in forbidden if f in scene.basis.names and row[scene.basis.index(f)] != 0.0]
    if bad:
        raise BadFactorization(
            f"auxiliary {name!r} must not load on {bad}; its factorization forbids it"
        )


def ic_layered_region(
    scene: GaussianScene,
    u1_spec: AuxSpec,
    u2_spec: AuxSpec,
    v_spec: AuxSpec,
    log_base: float = 2.0,
) -> RateBounds:
    """Layered-scheme rate ceilings for arbitrary Gaussian auxiliaries.

        R1 <= min(I(U1;Y1), I(U1;Y2))
              + min(I(U2;V,Y1|U1), I(U2;V,Y2|U1)) - I(U1,U2;S1)
        R2 <= min(I(V;U1,Y1), I(V;U1,Y2)) - I(V;S1)

    The second-stage decoders know the previously decoded codeword, so the
    V bounds condition on it jointly; with the scheme weights the Y1
    branches collapse exactly to the boundary-point rates.  Auxiliaries must
    factor through the receiver-1 state side only (no residual S2', no
    noise, own inputs only).
    """
    scene, u1 = _resolve_aux(scene, "U1", u1_spec)
    scene, u2 = _resolve_aux(scene, "U2", u2_spec)
    scene, v = _resolve_aux(scene, "V", v_spec)
    _check_s1_side(scene, u1, ("X2", "S2p", "N1", "N2"))
    _check_s1_side(scene, u2, ("X2", "S2p", "N1", "N2"))
    _check_s1_side(scene, v, ("X1p", "X1dp", "S2p", "N1", "N2"))
    r1 = (
        min(
            mutual_info(scene, u1, "Y1", log_base),
            mutual_info(scene, u1, "Y2", log_base),
        )
        + min(
            cond_mutual_info(scene, u2, (v, "Y1"), u1, log_base),
            cond_mutual_info(scene, u2, (v, "Y2"), u1, log_base),
        )
        - mutual_info(scene, (u1, u2), "S1", log_base)
    )
    r2 = min(
        mutual_info(scene, v, (u1, "Y1"), log_base),
        mutual_info(scene, v, (u1, "Y2"), log_base),
    ) - mutual_info(scene, v, "S1", log_base)
    return clamp_bounds(r1, r2)


def zic_layered_region(
    scene: GaussianScene,
    u1_spec: AuxSpec,
    u2_spec: AuxSpec,
    v_spec: AuxSpec,
    log_base: float = 2.0,
    tol: float = CAPACITY_TOL,
) -> RateBounds:
    """Layered-scheme rate ceilings for the Z variant.

        R1 <= I(U1;Y1) + I(U2;V,Y1|U1) - I(S1;U1,U2)
        R2 <= I(V;U1,Y1) - I(S1;V)

    Valid only under the cross-decoding gate I(V;U1,Y1) <= I(V;Y2);
    otherwise :class:`GateViolated` is raised carrying both sides.
    """
    scene, u1 = _resolve_aux(scene, "U1", u1_spec)
    scene, u2 = _resolve_aux(scene, "U2", u2_spec)
    scene, v = _resolve_aux(scene, "V", v_spec)
    gate_lhs = mutual_info(scene, v, (u1, "Y1"), log_base)
    gate_rhs = mutual_info(scene, v, "Y2", log_base)
    if gate_lhs > gate_rhs + tol:
        raise GateViolated(
            f"cross-decoding gate fails: I(V;U1,Y1) = {gate_lhs:.9g} > I(V;Y2) = {gate_rhs:.9g}",
            lhs=gate_lhs,
            rhs=gate_rhs,
        )
    r1 = (
        mutual_info(scene, u1, "Y1", log_base)
        + cond_mutual_info(scene, u2, (v, "Y1"), u1, log_base)
        - mutual_info(scene, "S1", (u1, u2), log_base)
    )
    r2 = gate_lhs - mutual_info(scene, "S1", v, log_base)
    return clamp_bounds(r1, r2)
