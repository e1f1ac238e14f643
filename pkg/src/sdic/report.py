"""Shared result containers for theorem-style achievability checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

__all__ = ["CAPACITY_TOL", "Condition", "ConditionReport", "RateBounds", "json_safe"]

#: a condition is reported as holding when its signed margin is >= -CAPACITY_TOL
CAPACITY_TOL = 1e-9


def json_safe(value):
    """Recursively replace non-finite floats so output stays strict JSON."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


@dataclass(frozen=True)
class Condition:
    """One evaluated inequality: lhs <relation> rhs with a signed slack.

    ``margin`` is oriented so that the condition holds iff
    ``margin >= -CAPACITY_TOL`` (rhs - lhs for "<=", lhs - rhs for ">=").
    """

    name: str
    relation: str
    lhs: float
    rhs: float
    margin: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
        }


def make_condition(name: str, relation: str, lhs: float, rhs: float, tol: float = CAPACITY_TOL) -> Condition:
    if relation == "<=":
        margin = rhs - lhs
    elif relation == ">=":
        margin = lhs - rhs
    else:
        raise ValueError(f"relation must be '<=' or '>=', got {relation!r}")
    return Condition(name, relation, lhs, rhs, margin, margin >= -tol)


@dataclass(frozen=True)
class ConditionReport:
    """Evaluated achievability conditions of one capacity check.

    ``capacity_rect`` carries the certified per-user rate ceilings when the
    check certifies the full rectangular region; ``rate_point`` carries the
    certified sum-rate boundary point for the rate-splitting checks.
    """

    conditions: tuple[Condition, ...]
    achieves_capacity: bool
    capacity_rect: Optional[tuple[float, float]] = None
    rate_point: Optional[object] = None

    def condition(self, name: str) -> Condition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(f"no condition named {name!r}")

    def to_dict(self) -> dict:
        out = {
            "conditions": [c.to_dict() for c in self.conditions],
            "achieves_capacity": self.achieves_capacity,
            "capacity_rect": list(self.capacity_rect) if self.capacity_rect else None,
        }
        if self.rate_point is not None:
            out["rate_point"] = self.rate_point.to_dict()
        return out


@dataclass(frozen=True)
class RateBounds:
    """Per-user rate ceilings of an achievable region evaluation.

    Negative raw bounds are clamped to zero with the corresponding flag set;
    a bad auxiliary choice can price itself out of any positive rate.
    """

    r1: float
    r2: float
    r1_clamped: bool = False
    r2_clamped: bool = False

    def to_dict(self) -> dict:
        return {
            "r1": self.r1,
            "r2": self.r2,
            "r1_clamped": self.r1_clamped,
            "r2_clamped": self.r2_clamped,
        }


def clamp_bounds(r1: float, r2: float) -> RateBounds:
    return RateBounds(
        r1=max(r1, 0.0),
        r2=max(r2, 0.0),
        r1_clamped=r1 < 0.0,
        r2_clamped=r2 < 0.0,
    )
