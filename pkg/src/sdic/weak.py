"""Weak interference regime: sum capacities with interference treated as noise.

Each transmitter dirty-paper codes against its own receiver's state, so the
states drop out entirely and the sum capacity never depends on their
correlation.  The cross signals are simply absorbed into the noise floor.
"""

from __future__ import annotations

import math

from .channel import ChannelKind, IcParams, RegimeKind, classify
from .errors import WrongRegime

__all__ = ["weak_ic_sum_capacity", "weak_zic_sum_capacity"]


def _half_log1p(x: float, base: float) -> float:
    return 0.5 * math.log1p(x) / math.log(base)


def weak_ic_sum_capacity(params: IcParams, log_base: float = 2.0) -> float:
    """Sum capacity 0.5*log(1 + P1/(a^2 P2 + 1)) + 0.5*log(1 + P2/(b^2 P1 + 1)).

    Requires |a(1 + b^2 P1)| + |b(1 + a^2 P2)| <= 1.
    """
    regime = classify(params, ChannelKind.IC)
    if regime.kind is not RegimeKind.WEAK_IC:
        raise WrongRegime(f"weak interference required, classified as {regime.kind.value}")
    a2p2 = params.a * params.a * params.p2
    b2p1 = params.b * params.b * params.p1
    return _half_log1p(params.p1 / (a2p2 + 1.0), log_base) + _half_log1p(
        params.p2 / (b2p1 + 1.0), log_base
    )


def weak_zic_sum_capacity(params: IcParams, log_base: float = 2.0) -> float:
    """Sum capacity 0.5*log(1 + P1/(a^2 P2 + 1)) + 0.5*log(1 + P2) for a^2 <= 1, b = 0."""
    regime = classify(params, ChannelKind.ZIC)
    if regime.kind is not RegimeKind.WEAK_ZIC:
        raise WrongRegime(f"weak interference required (a^2 <= 1), classified as {regime.kind.value}")
    a2p2 = params.a * params.a * params.p2
    return _half_log1p(params.p1 / (a2p2 + 1.0), log_base) + _half_log1p(params.p2, log_base)
