import io
import math

import numpy as np
import pytest

from sdic import (
    Axis,
    ChannelKind,
    IcParams,
    RegimeKind,
    SweepSpec,
    UsageError,
    classify,
    run_sweep,
)
from sdic.strong import strong_zic_evaluate
from sdic.verystrong import vs_zic_evaluate


BASE = IcParams(a=2.0, b=0.0, p1=2.0, p2=2.0, q1=1.0, q2=1.0, rho=0.0)


def small_vs_zic_spec():
    return SweepSpec(
        check="vs-zic",
        axes=(Axis("a", 1.5, 6.0, 10), Axis("d", 0.0, 1.0, 7)),
        params=BASE,
    )


def test_axis_validation():
    with pytest.raises(UsageError):
        Axis("nope", 0, 1, 5)
    with pytest.raises(UsageError):
        Axis("a", 1.0, 1.0, 5)
    with pytest.raises(UsageError):
        Axis("a", 0.0, 1.0, 1)


def test_axis_values_inclusive_endpoints():
    vals = Axis("a", 1.0, 2.0, 5).values()
    assert vals[0] == 1.0 and vals[-1] == 2.0 and len(vals) == 5


def test_spec_validation():
    with pytest.raises(UsageError):
        SweepSpec(check="bogus", axes=(Axis("a", 0, 1, 3),), params=BASE)
    with pytest.raises(UsageError):
        SweepSpec(
            check="vs-zic",
            axes=(Axis("d", 0, 1, 3), Axis("rho", 0, 1, 3)),
            params=BASE,
        )


def test_grid_row_major_order_and_count():
    grid = run_sweep(small_vs_zic_spec())
    assert len(grid.coords) == 70
    avals = Axis("a", 1.5, 6.0, 10).values()
    dvals = Axis("d", 0.0, 1.0, 7).values()
    assert grid.coords[0] == (avals[0], dvals[0])
    assert grid.coords[1] == (avals[0], dvals[1])
    assert grid.coords[7] == (avals[1], dvals[0])


def test_cells_match_direct_library_calls():
    grid = run_sweep(small_vs_zic_spec())
    for coord, verdict in zip(grid.coords, grid.verdicts):
        a, d = coord
        pr = BASE.replace(a=a, rho=d)  # q1 = q2 = 1 makes rho = d
        in_regime = classify(pr, ChannelKind.ZIC).kind is RegimeKind.VERY_STRONG_ZIC
        expected = in_regime and vs_zic_evaluate(pr).achieves_capacity
        assert verdict == expected


def test_out_of_regime_cells_are_false_not_errors():
    grid = run_sweep(small_vs_zic_spec())
    idx = [i for i, c in enumerate(grid.coords) if c[0] < math.sqrt(3.0)]
    assert idx and all(not grid.verdicts[i] for i in idx)
    value_names = grid.columns[3:-1]  # axes, verdict, <values...>, schema_version
    in_regime_at = value_names.index("in_regime")
    assert all(grid.values[i][in_regime_at] == 0.0 for i in idx)


def test_invalid_cells_get_nan_columns():
    spec = SweepSpec(
        check="vs-zic",
        axes=(Axis("d", 0.0, 2.0, 5),),  # d > 1 impossible at q1 = q2
        params=BASE,
    )
    grid = run_sweep(spec)
    bad = [v for c, v in zip(grid.coords, grid.values) if c[0] > 1.0]
    assert bad and all(math.isnan(x) for row in bad for x in row)


def test_residual_held_c_axis():
    spec = SweepSpec(
        check="strong-zic",
        axes=(Axis("c", 0.0, 4.0, 9),),
        params=IcParams(a=1.2, b=0.0, p1=2.0, p2=0.7, q1=0.4, q2=0.5, rho=0.0),
        p1_dprime=1.0,
        q2_resid=0.5,
    )
    grid = run_sweep(spec)
    for (c,), verdict in zip(grid.coords, grid.verdicts):
        q2 = c * c * 0.4 + 0.5
        pr = IcParams(
            a=1.2, b=0.0, p1=2.0, p2=0.7, q1=0.4, q2=q2, rho=c * math.sqrt(0.4 / q2)
        )
        assert verdict == strong_zic_evaluate(pr, 1.0).achieves_capacity


def test_strong_sweep_requires_split():
    spec = SweepSpec(check="strong-zic", axes=(Axis("a", 1.05, 1.4, 4),), params=BASE)
    grid = run_sweep(spec)
    assert all(math.isnan(v[0]) for v in grid.values)


def test_csv_layout_and_precision():
    grid = run_sweep(small_vs_zic_spec())
    buf = io.StringIO()
    grid.to_csv(buf)
    lines = buf.getvalue().splitlines()
    header = lines[0].split(",")
    assert header[:3] == ["a", "d", "verdict"]
    assert header[-1] == "schema_version"
    assert header[3:-1] == [
        "in_regime", "margin_closed_form", "margin_mi_gate", "r1", "r2",
    ]
    assert len(lines) == 71
    row = lines[1].split(",")
    assert row[2] in ("true", "false")
    assert row[-1] == "1"


def test_csv_deterministic():
    a = io.StringIO()
    b = io.StringIO()
    run_sweep(small_vs_zic_spec()).to_csv(a)
    run_sweep(small_vs_zic_spec()).to_csv(b)
    assert a.getvalue() == b.getvalue()


def test_parallel_matches_serial():
    spec = SweepSpec(
        check="vs-zic",
        axes=(Axis("a", 1.5, 6.0, 32), Axis("d", 0.0, 1.0, 16)),
        params=BASE,
    )
    serial = run_sweep(spec, workers=1)
    parallel = run_sweep(spec, workers=2)
    assert serial.verdicts == parallel.verdicts
    assert serial.values == parallel.values


def test_vs_ic_curves_columns():
    spec = SweepSpec(
        check="vs-ic-curves",
        axes=(Axis("b", 0.0, 4.0, 9),),
        params=IcParams(a=1.6, b=0.0, p1=1.0, p2=1.0, q1=0.9, q2=0.9, rho=0.99),
    )
    grid = run_sweep(spec)
    assert grid.columns == (
        "b", "verdict", "in_regime", "lhs1", "rhs1", "lhs2", "rhs2", "schema_version",
    )
    lhs1 = [v[1] for v in grid.values]
    assert all(x == 2.0 or math.isnan(x) for x in lhs1)


def test_worker_count_env(monkeypatch):
    from sdic.sweep import worker_count

    monkeypatch.delenv("SDIC_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("SDIC_THREADS", "2")
    assert worker_count() == 2
    monkeypatch.setenv("SDIC_THREADS", "frog")
    with pytest.raises(UsageError):
        worker_count()


def test_weak_sweep_channel_choice():
    spec = SweepSpec(
        check="weak",
        axes=(Axis("a", 0.1, 0.9, 5),),
        params=IcParams(a=0.5, b=0.0, p1=1.0, p2=1.0, q1=1.0, q2=1.0, rho=0.0),
        channel=ChannelKind.ZIC,
    )
    grid = run_sweep(spec)
    assert all(grid.verdicts)
    csum = [v[-1] for v in grid.values]
    assert all(b < a for a, b in zip(csum, csum[1:]))  # interference hurts
