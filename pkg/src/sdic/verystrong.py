"""Very strong interference regime: cooperative dirty-paper capacity checks.

Both transmitters know both states, so each encodes its message into an
auxiliary variable that mixes its input with scaled state components:

    U = X1 + alpha1*S1' + alpha2*S2        (regular channel)
    V = X2 + beta1*S1'  + beta2*S2

Each receiver first decodes the other user's auxiliary, subtracts it to
cancel the cross input plus part of the state, and then decodes its own
codeword dirty-paper style.  The coefficient systems below make the
residual state cancellation exact, which pins the own-codeword rate at the
interference-free point-to-point value 0.5*log(1+P).  Capacity of the
no-state channel is then achieved iff the *first* (cross) decoding step at
each receiver is not the bottleneck; those are the reported conditions.

For the Z variant receiver 2 is interference free, V is designed against
S2 alone (the classic single-user weight P2/(P2+1)), and the only extra
requirement is that receiver 1 out-decodes receiver 2 on V.
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
    StateDecomp,
    build_scene,
    classify,
    decompose,
)
from .errors import (
    BadFactorization,
    InternalInconsistency,
    SingularDenominator,
    WrongRegime,
)
from .gaussian import GaussianScene, entropy, mutual_info
from .report import CAPACITY_TOL, ConditionReport, RateBounds, clamp_bounds, make_condition

__all__ = [
    "VsIcCoefficients",
    "VsZicCoefficients",
    "vs_ic_coefficients",
    "vs_zic_coefficients",
    "vs_ic_scene",
    "vs_zic_scene",
    "vs_ic_check",
    "vs_zic_check",
    "vs_ic_evaluate",
    "vs_zic_evaluate",
    "vs_ic_curves",
    "ic_gp_region",
    "zic_gp_region",
]

AuxSpec = Union[str, Mapping[str, float]]


def _half_log1p(x: float, base: float) -> float:
    return 0.5 * math.log1p(x) / math.log(base)


@dataclass(frozen=True)
class VsIcCoefficients:
    """Dirty-paper weights of the cooperative scheme for the regular channel."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float


@dataclass(frozen=True)
class VsZicCoefficients:
    """Dirty-paper weights for the Z variant.

    ``alpha1`` scales S2 and ``alpha2`` scales the residual S1' inside U;
    ``beta`` is the single-user weight P2/(P2+1) inside V = X2 + beta*S2.
    """

    alpha1: float
    alpha2: float
    beta: float


def vs_ic_coefficients(params: IcParams, decomp: StateDecomp | None = None) -> VsIcCoefficients:
    """Solve the joint state-cancellation system for (alpha1, alpha2, beta1, beta2).

    The closed forms share the denominator (P1+1)(P2+1) - a*b*P1*P2; they
    satisfy the cancellation ratios
    alpha1/(1-a*beta1) = alpha2/(d-a*beta2) = P1/(P1+1) and
    beta1/(-b*alpha1) = beta2/(1-b*alpha2) = P2/(P2+1).
    """
    if decomp is None:
        decomp = decompose(params, DecompDirection.S1_ON_S2)
    elif decomp.direction is not DecompDirection.S1_ON_S2:
        raise ValueError("vs_ic_coefficients needs the S1-on-S2 decomposition")
    a, b, p1, p2 = params.a, params.b, params.p1, params.p2
    d = decomp.slope
    den = (p1 + 1.0) * (p2 + 1.0) - a * b * p1 * p2
    if abs(den) <= 1e-9:
        raise SingularDenominator(
            f"(P1+1)(P2+1) - a*b*P1*P2 = {den:.3e} is too close to zero"
        )
    return VsIcCoefficients(
        alpha1=p1 * (1.0 + p2) / den,
        alpha2=p1 * (d + d * p2 - a * p2) / den,
        beta1=-b * p1 * p2 / den,
        beta2=p2 * (p1 + 1.0 - b * d * p1) / den,
    )


def vs_zic_coefficients(params: IcParams, decomp: StateDecomp | None = None) -> VsZicCoefficients:
    """Closed-form weights for the Z variant.

    beta = P2/(P2+1) is the single-user weight for receiver 2's own channel;
    alpha2 = P1/(P1+1) cancels the residual state, and alpha1 cancels
    whatever S2 component survives in Y1 after subtracting a*V:
    alpha1 = P1/(P1+1) * (d - a*beta).
    """
    if decomp is None:
        decomp = decompose(params, DecompDirection.S1_ON_S2)
    elif decomp.direction is not DecompDirection.S1_ON_S2:
        raise ValueError("vs_zic_coefficients needs the S1-on-S2 decomposition")
    p1, p2 = params.p1, params.p2
    d = decomp.slope
    beta = p2 / (p2 + 1.0)
    w1 = p1 / (p1 + 1.0)
    return VsZicCoefficients(alpha1=w1 * (d - params.a * beta), alpha2=w1, beta=beta)


def vs_ic_scene(params: IcParams, coeffs: VsIcCoefficients | None = None) -> GaussianScene:
    """Channel scene plus the scheme auxiliaries U and V."""
    if coeffs is None:
        coeffs = vs_ic_coefficients(params)
    scene = build_scene(params, SceneVariant.VS_IC)
    scene = scene.define("U", {"X1": 1.0, "S1p": coeffs.alpha1, "S2": coeffs.alpha2})
    return scene.define("V", {"X2": 1.0, "S1p": coeffs.beta1, "S2": coeffs.beta2})


def vs_zic_scene(params: IcParams, coeffs: VsZicCoefficients | None = None) -> GaussianScene:
    """Z-channel scene plus the scheme auxiliaries U and V."""
    if coeffs is None:
        coeffs = vs_zic_coefficients(params)
    scene = build_scene(params, SceneVariant.VS_ZIC)
    scene = scene.define("U", {"X1": 1.0, "S2": coeffs.alpha1, "S1p": coeffs.alpha2})
    return scene.define("V", {"X2": 1.0, "S2": coeffs.beta})


def _cross_decode_value(scene, own, aux, other_y, states, base) -> tuple[float, float]:
    """Cross-decoding net rate in MI form and entropy form.

    MI form: I(aux; other_y) - I(states; aux).  Entropy form:
    h(own) - h(aux, other_y) + h(other_y).  The two are algebraically equal
    because conditioning the auxiliary on both states leaves only the own
    input random.
    """
    mi_form = mutual_info(scene, aux, other_y, base) - mutual_info(scene, states, aux, base)
    h_form = (
        entropy(scene, own, base)
        - entropy(scene, (aux, other_y), base)
        + entropy(scene, other_y, base)
    )
    if abs(mi_form - h_form) > 1e-9:
        raise InternalInconsistency(
            f"entropy-form and MI-form cross-decoding rates disagree for {aux}: "
            f"{h_form!r} vs {mi_form!r}"
        )
    return mi_form, h_form


def vs_ic_evaluate(params: IcParams, log_base: float = 2.0, tol: float = CAPACITY_TOL) -> ConditionReport:
    """Evaluate the regular-channel capacity conditions without the regime gate."""
    scene = vs_ic_scene(params)
    rate1 = _half_log1p(params.p1, log_base)
    rate2 = _half_log1p(params.p2, log_base)
    cross1, _ = _cross_decode_value(scene, "X1", "U", "Y2", ("S1", "S2"), log_base)
    cross2, _ = _cross_decode_value(scene, "X2", "V", "Y1", ("S1", "S2"), log_base)
    conditions = (
        make_condition("rate1_at_rx2", "<=", rate1, cross1, tol),
        make_condition("rate2_at_rx1", "<=", rate2, cross2, tol),
    )
    achieves = all(c.holds for c in conditions)
    rect = (rate1, rate2) if achieves else None
    return ConditionReport(conditions, achieves, capacity_rect=rect)


def vs_ic_check(params: IcParams, log_base: float = 2.0, tol: float = CAPACITY_TOL) -> ConditionReport:
    """Capacity-achievability check for the regular channel.

    Requires the very strong regime.  Both conditions compare a point-to-
    point rate against the net rate at which the *other* receiver can
    pre-decode the corresponding codeword; capacity of the no-state channel
    is achieved iff both hold, and the certified region is the rectangle
    (0.5*log(1+P1), 0.5*log(1+P2)).
    """
    regime = classify(params, ChannelKind.IC)
    if regime.kind is not RegimeKind.VERY_STRONG_IC:
        raise WrongRegime(
            f"very strong interference required, classified as {regime.kind.value}"
        )
    return vs_ic_evaluate(params, log_base, tol)


def vs_ic_curves(params: IcParams) -> dict[str, float]:
    """Exponentiated sides of the two capacity conditions (for curve plots).

    Returns lhs1 = 1+P1, rhs1 = exp(2*(h(X1)-h(U,Y2)+h(Y2))) and the mirror
    pair for the second condition; the exponentiated values are independent
    of the log base.
    """
    scene = vs_ic_scene(params)
    e = math.e
    _, h1 = _cross_decode_value(scene, "X1", "U", "Y2", ("S1", "S2"), e)
    _, h2 = _cross_decode_value(scene, "X2", "V", "Y1", ("S1", "S2"), e)
    return {
        "lhs1": 1.0 + params.p1,
        "rhs1": math.exp(2.0 * h1),
        "lhs2": 1.0 + params.p2,
        "rhs2": math.exp(2.0 * h2),
    }


def vs_zic_closed_form(params: IcParams) -> tuple[float, float]:
    """Closed-form threshold ratio (lhs, rhs) for the Z-variant check.

    lhs = var(Y1) / (var(V)var(Y1) - cov(V,Y1)^2) expanded in channel
    parameters; the condition lhs >= (P2+1)/P2 is algebraically equivalent
    to the cross-decoding gate I(V;Y2) <= I(V;Y1).
    """
    dec = decompose(params, DecompDirection.S1_ON_S2)
    a, p1, p2, q2 = params.a, params.p1, params.p2, params.q2
    d, q1p = dec.slope, dec.residual_var
    beta = p2 / (p2 + 1.0)
    num = p1 + a * a * p2 + d * d * q2 + q1p + 1.0
    den = (d - a * beta) ** 2 * q2 * p2 + (p2 + beta * beta * q2) * (p1 + q1p + 1.0)
    return num / den, (p2 + 1.0) / p2


def vs_zic_evaluate(params: IcParams, log_base: float = 2.0, tol: float = CAPACITY_TOL) -> ConditionReport:
    """Evaluate the Z-variant capacity condition without the regime gate."""
    lhs, rhs = vs_zic_closed_form(params)
    closed = make_condition("closed_form", ">=", lhs, rhs, tol)
    scene = vs_zic_scene(params)
    gate = make_condition(
        "mi_gate",
        "<=",
        mutual_info(scene, "V", "Y2", log_base),
        mutual_info(scene, "V", "Y1", log_base),
        tol,
    )
    achieves = closed.holds
    rate1 = _half_log1p(params.p1, log_base)
    rate2 = _half_log1p(params.p2, log_base)
    rect = (rate1, rate2) if achieves else None
    return ConditionReport((closed, gate), achieves, capacity_rect=rect)


def vs_zic_check(params: IcParams, log_base: float = 2.0, tol: float = CAPACITY_TOL) -> ConditionReport:
    """Capacity-achievability check for the Z variant (very strong regime).

    Reports both the closed-form threshold ratio and the cross-decoding MI
    gate I(V;Y2) <= I(V;Y1); the verdict follows the closed form.
    """
    regime = classify(params, ChannelKind.ZIC)
    if regime.kind is not RegimeKind.VERY_STRONG_ZIC:
        raise WrongRegime(
            f"very strong interference required (a^2 > 1+P1), classified as {regime.kind.value}"
        )
    return vs_zic_evaluate(params, log_base, tol)


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


def _forbid_loads(scene: GaussianScene, name: str, forbidden: tuple[str, ...]):
    row = scene.var(name).coeffs
    bad = [
        f for f in forbidden if scene.basis.names.count(f) and row[scene.basis.index(f)] != 0.0
    ]
    if bad:
        raise BadFactorization(
            f"auxiliary {name!r} must not load on {bad}; its factorization forbids it"
        )


def ic_gp_region(scene: GaussianScene, u_spec: AuxSpec, v_spec: AuxSpec, log_base: float = 2.0) -> RateBounds:
    """Binning-region rate ceilings for arbitrary Gaussian auxiliaries (regular channel).

        R1 <= min(I(U; V,Y1), I(U; Y2)) - I(S1,S2; U)
        R2 <= min(I(V; U,Y2), I(V; Y1)) - I(S1,S2; V)

    ``u_spec``/``v_spec`` are coefficient mappings over the scene (or names
    of variables already defined in it).  Negative ceilings clamp to zero
    with a flag.
    """
    scene, u = _resolve_aux(scene, "U", u_spec)
    scene, v = _resolve_aux(scene, "V", v_spec)
    states = ("S1", "S2")
    r1 = min(
        mutual_info(scene, u, (v, "Y1"), log_base),
        mutual_info(scene, u, "Y2", log_base),
    ) - mutual_info(scene, states, u, log_base)
    r2 = min(
        mutual_info(scene, v, (u, "Y2"), log_base),
        mutual_info(scene, v, "Y1", log_base),
    ) - mutual_info(scene, states, v, log_base)
    return clamp_bounds(r1, r2)


def zic_gp_region(scene: GaussianScene, u_spec: AuxSpec, v_spec: AuxSpec, log_base: float = 2.0) -> RateBounds:
    """Binning-region rate ceilings for the Z variant.

        R1 <= I(U; V,Y1) - I(S1,S2; U)
        R2 <= min(I(V; Y2), I(V; Y1)) - I(S2; V)

    V must factor through (X2, S2) only: zero coefficients on X1 and on the
    residual state S1'.
    """
    scene, u = _resolve_aux(scene, "U", u_spec)
    scene, v = _resolve_aux(scene, "V", v_spec)
    _forbid_loads(scene, v, ("X1", "S1p"))
    r1 = mutual_info(scene, u, (v, "Y1"), log_base) - mutual_info(scene, ("S1", "S2"), u, log_base)
    r2 = min(
        mutual_info(scene, v, "Y2", log_base),
        mutual_info(scene, v, "Y1", log_base),
    ) - mutual_info(scene, "S2", v, log_base)
    return clamp_bounds(r1, r2)
