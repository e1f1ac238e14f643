"""Parameter sweeps over 1-D and 2-D grids with CSV emission.

Grids reproduce the figure pipelines: a check is evaluated on every cell of
an axis product, and each cell records the regime flag, the signed condition
margins, and the candidate rates.  Cells are stored and written in row-major
axis order regardless of how they were computed, and floats are printed with
12 significant digits, so identical inputs give byte-identical CSV.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .channel import ChannelKind, DecompDirection, IcParams, RegimeKind, classify, rho_from_slope
from .errors import InvalidParams, SdicError, UsageError
from .strong import strong_ic_evaluate, strong_zic_evaluate, _rate_point
from .verystrong import vs_ic_curves, vs_ic_evaluate, vs_zic_evaluate
from .weak import weak_ic_sum_capacity, weak_zic_sum_capacity

__all__ = ["Axis", "SweepSpec", "SweepGrid", "run_sweep", "SWEEP_CHECKS", "worker_count"]

SCHEMA_VERSION = "1"

SWEEP_CHECKS = ("vs-ic", "vs-ic-curves", "vs-zic", "strong-ic", "strong-zic", "weak")

_AXIS_NAMES = ("a", "b", "p1", "p2", "q1", "q2", "rho", "d", "c", "p1dp")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.name not in _AXIS_NAMES:
            raise UsageError(f"unknown axis parameter {self.name!r}; choose from {_AXIS_NAMES}")
        if self.steps < 2:
            raise UsageError("axis steps must be >= 2")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise UsageError("axis range must satisfy lo < hi")

    def values(self) -> list[float]:
        step = (self.hi - self.lo) / (self.steps - 1)
        vals = [self.lo + i * step for i in range(self.steps)]
        vals[-1] = self.hi
        return vals

    def to_dict(self) -> dict:
        return {"name": self.name, "lo": self.lo, "hi": self.hi, "steps": self.steps}


@dataclass(frozen=True)
class SweepSpec:
    """Grid description: base parameters plus one or two swept axes.

    ``q1_resid`` / ``q2_resid`` switch the correlation axes to the
    regression-native parameterization: with ``q1_resid`` set, a ``d`` axis
    holds the residual variance fixed and derives Q1 = d^2 Q2 + Q1' per
    cell (any real d is then admissible); ``q2_resid`` does the same for a
    ``c`` axis with Q2 = c^2 Q1 + Q2'.  Without them the state variances
    stay fixed and the axis moves the correlation coefficient.
    """

    check: str
    axes: tuple[Axis, ...]
    params: IcParams
    p1_dprime: float | None = None
    channel: ChannelKind = ChannelKind.IC
    log_base: float = 2.0
    q1_resid: float | None = None
    q2_resid: float | None = None

    def __post_init__(self):
        if self.check not in SWEEP_CHECKS:
            raise UsageError(f"unknown sweep check {self.check!r}; choose from {SWEEP_CHECKS}")
        if not 1 <= len(self.axes) <= 2:
            raise UsageError("sweeps take one or two axes")
        if len({ax.name for ax in self.axes}) != len(self.axes):
            raise UsageError("axis parameters must differ")
        if len({ax.name for ax in self.axes} & {"rho", "d", "c"}) > 1:
            raise UsageError("at most one correlation axis")


def _apply_axis(spec: SweepSpec, params: IcParams, p1dp: float | None, name: str, value: float):
    if name == "p1dp":
        return params, value
    if name == "d":
        if spec.q1_resid is not None:
            q1 = value * value * params.q2 + spec.q1_resid
            if q1 <= 0.0:
                raise InvalidParams("derived Q1 must be > 0")
            return params.replace(q1=q1, rho=value * math.sqrt(params.q2 / q1)), p1dp
        rho = rho_from_slope(DecompDirection.S1_ON_S2, value, params.q1, params.q2)
        return params.replace(rho=rho), p1dp
    if name == "c":
        if spec.q2_resid is not None:
            q2 = value * value * params.q1 + spec.q2_resid
            if q2 <= 0.0:
                raise InvalidParams("derived Q2 must be > 0")
            return params.replace(q2=q2, rho=value * math.sqrt(params.q1 / q2)), p1dp
        rho = rho_from_slope(DecompDirection.S2_ON_S1, value, params.q1, params.q2)
        return params.replace(rho=rho), p1dp
    return params.replace(**{name: value}), p1dp


def _value_columns(check: str) -> tuple[str, ...]:
    if check == "vs-ic":
        return ("in_regime", "margin_rate1_at_rx2", "margin_rate2_at_rx1")
    if check == "vs-ic-curves":
        return ("in_regime", "lhs1", "rhs1", "lhs2", "rhs2")
    if check in ("vs-zic", "strong-zic"):
        return ("in_regime", "margin_closed_form", "margin_mi_gate")
    if check == "strong-ic":
        return ("in_regime", "margin_u1_at_rx2", "margin_v_at_rx2", "margin_u2_at_rx2")
    return ("in_regime", "margin_weak", "csum")


def _rate_columns(check: str) -> tuple[str, ...]:
    return () if check in ("vs-ic-curves", "weak") else ("r1", "r2")


_NAN = float("nan")


def _evaluate_cell(spec: SweepSpec, coords: Sequence[float]) -> tuple[bool, tuple[float, ...]]:
    """Verdict plus value columns for one grid cell.

    Parameter combinations that fall outside a check's regime are ordinary
    false cells; combinations that are not even valid channel parameters
    (e.g. a slope implying |rho| > 1) yield false with NaN columns.
    """
    check = spec.check
    ncols = len(_value_columns(check)) + len(_rate_columns(check))
    try:
        params, p1dp = spec.params, spec.p1_dprime
        for ax, value in zip(spec.axes, coords):
            params, p1dp = _apply_axis(spec, params, p1dp, ax.name, value)

        if check in ("vs-ic", "vs-ic-curves"):
            regime = classify(params, ChannelKind.IC)
            in_regime = regime.kind is RegimeKind.VERY_STRONG_IC
            report = vs_ic_evaluate(params, spec.log_base)
            verdict = in_regime and report.achieves_capacity
            rates = (
                0.5 * math.log1p(params.p1) / math.log(spec.log_base),
                0.5 * math.log1p(params.p2) / math.log(spec.log_base),
            )
            if check == "vs-ic":
                margins = tuple(c.margin for c in report.conditions)
                return verdict, (float(in_regime), *margins, *rates)
            curves = vs_ic_curves(params)
            return verdict, (
                float(in_regime),
                curves["lhs1"],
                curves["rhs1"],
                curves["lhs2"],
                curves["rhs2"],
            )

        if check == "vs-zic":
            regime = classify(params, ChannelKind.ZIC)
            in_regime = regime.kind is RegimeKind.VERY_STRONG_ZIC
            report = vs_zic_evaluate(params, spec.log_base)
            verdict = in_regime and report.achieves_capacity
            margins = tuple(c.margin for c in report.conditions)
            rates = (
                0.5 * math.log1p(params.p1) / math.log(spec.log_base),
                0.5 * math.log1p(params.p2) / math.log(spec.log_base),
            )
            return verdict, (float(in_regime), *margins, *rates)

        if check in ("strong-ic", "strong-zic"):
            if p1dp is None:
                raise UsageError(f"{check} sweeps need p1dp as a flag or an axis")
            if check == "strong-ic":
                regime = classify(params, ChannelKind.IC)
                in_regime = (
                    regime.kind is RegimeKind.STRONG_NOT_VERY_STRONG_IC
                    and not regime.needs_index_swap
                )
                report = strong_ic_evaluate(params, p1dp, spec.log_base)
            else:
                regime = classify(params, ChannelKind.ZIC)
                in_regime = regime.kind is RegimeKind.STRONG_NOT_VERY_STRONG_ZIC
                report = strong_zic_evaluate(params, p1dp, spec.log_base)
            verdict = in_regime and report.achieves_capacity
            margins = tuple(c.margin for c in report.conditions)
            point = _rate_point(params, p1dp, spec.log_base)
            return verdict, (float(in_regime), *margins, point.r1, point.r2)

        # weak: the sum capacity is the payload, the regime flag the verdict
        regime = classify(params, spec.channel)
        if spec.channel is ChannelKind.ZIC:
            in_regime = regime.kind is RegimeKind.WEAK_ZIC
            margin = regime.margins["weak"]
            csum = weak_zic_sum_capacity(params, spec.log_base) if in_regime else _NAN
        else:
            in_regime = regime.kind is RegimeKind.WEAK_IC
            margin = regime.margins["weak_tin"]
            csum = weak_ic_sum_capacity(params, spec.log_base) if in_regime else _NAN
        return in_regime, (float(in_regime), margin, csum)
    except SdicError:
        return False, (_NAN,) * ncols


# module-level hook so process pools can pickle the work function
_POOL_SPEC: SweepSpec | None = None


def _pool_init(spec: SweepSpec):
    global _POOL_SPEC
    _POOL_SPEC = spec


def _pool_eval(coords):
    return _evaluate_cell(_POOL_SPEC, coords)


def worker_count() -> int:
    """Parallel workers for sweeps, capped by the SDIC_THREADS env var."""
    cap = os.environ.get("SDIC_THREADS", "1")
    try:
        cap_n = max(1, int(cap))
    except ValueError:
        raise UsageError(f"SDIC_THREADS must be an integer, got {cap!r}") from None
    return max(1, min(os.cpu_count() or 1, cap_n))


@dataclass(frozen=True)
class SweepGrid:
    """Evaluated grid: row-major cells of (coords, verdict, value columns)."""

    spec: SweepSpec
    columns: tuple[str, ...]
    coords: tuple[tuple[float, ...], ...]
    verdicts: tuple[bool, ...]
    values: tuple[tuple[float, ...], ...]

    def rows(self) -> Iterable[tuple]:
        for coord, verdict, vals in zip(self.coords, self.verdicts, self.values):
            yield (*coord, verdict, *vals)

    def to_csv(self, fh):
        fh.write(",".join(self.columns) + "\n")
        for coord, verdict, vals in zip(self.coords, self.verdicts, self.values):
            cells = ["%.12g" % x for x in coord]
            cells.append("true" if verdict else "false")
            cells.extend("%.12g" % x for x in vals)
            cells.append(SCHEMA_VERSION)
            fh.write(",".join(cells) + "\n")

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "check": self.spec.check,
            "axes": [ax.to_dict() for ax in self.spec.axes],
            "columns": list(self.columns),
            "cells": [
                [*coord, verdict, *vals]
                for coord, verdict, vals in zip(self.coords, self.verdicts, self.values)
            ],
        }


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepGrid:
    """Evaluate the grid; cell order is row-major in the axis product."""
    grids = [ax.values() for ax in spec.axes]
    if len(grids) == 1:
        coords = [(v,) for v in grids[0]]
    else:
        coords = [(u, v) for u in grids[0] for v in grids[1]]
    if workers is None:
        workers = worker_count()
    if workers > 1 and len(coords) >= 256:
        import multiprocessing as mp

        chunk = max(16, len(coords) // (workers * 8))
        with mp.get_context("fork").Pool(workers, _pool_init, (spec,)) as pool:
            results = pool.map(_pool_eval, coords, chunksize=chunk)
    else:
        results = [_evaluate_cell(spec, c) for c in coords]
    columns = (
        tuple(ax.name for ax in spec.axes)
        + ("verdict",)
        + _value_columns(spec.check)
        + _rate_columns(spec.check)
        + ("schema_version",)
    )
    return SweepGrid(
        spec=spec,
        columns=columns,
        coords=tuple(coords),
        verdicts=tuple(r[0] for r in results),
        values=tuple(tuple(r[1]) for r in results),
    )
