import math

import numpy as np
import pytest

from sdic import (
    BadFactorization,
    BadSplit,
    GateViolated,
    IcParams,
    OrderingViolated,
    WrongRegime,
    cond_mutual_info,
    ic_layered_region,
    mutual_info,
    strong_ic_check,
    strong_ic_rate_point,
    strong_scene,
    strong_scheme,
    strong_zic_check,
    strong_zic_segment,
    zic_layered_region,
)
from sdic.strong import _coefficients, strong_zic_closed_form, strong_zic_evaluate
from helpers import fig7_zic_params, random_strong_zic_params


FIG7 = IcParams(a=1.2, b=0.0, p1=2.0, p2=0.7, q1=0.4, q2=0.5, rho=0.3)


def test_scheme_endpoint_splits():
    sch0 = strong_scheme(FIG7, 0.0)
    assert sch0.alpha2 == 0.0 and sch0.p1_dprime == 0.0
    sch1 = strong_scheme(FIG7, FIG7.p1)
    assert sch1.alpha1 == 0.0 and sch1.p1_prime == 0.0


def test_scheme_direct_evaluation():
    pr = FIG7
    sch = strong_scheme(pr, 1.0)
    assert sch.alpha1 == pytest.approx(1.0 / 4.008, rel=1e-12)
    assert sch.alpha2 == pytest.approx(1.0 / 4.008, rel=1e-12)
    assert sch.beta == pytest.approx(1.008 / 4.008, rel=1e-12)


def test_scheme_weights_sum_below_one():
    rng = np.random.default_rng(3)
    for pr in random_strong_zic_params(rng, 100):
        p1dp = rng.uniform(0, pr.p1)
        sch = strong_scheme(pr, p1dp)
        total = pr.p1 + pr.a**2 * pr.p2
        assert sch.alpha1 + sch.alpha2 + sch.beta == pytest.approx(
            total / (total + 1.0), rel=1e-12
        )


def test_scheme_ratio_conditions():
    # alpha1 = P1'/(P1 + a^2 P2 + 1); beta/(1-alpha1) matches the
    # cross-layer weight; alpha2/(1-alpha1-beta) matches the own-layer
    # weight P1''/(P1''+1) of the final subtraction stage
    rng = np.random.default_rng(5)
    for pr in random_strong_zic_params(rng, 300):
        p1dp = rng.uniform(0, pr.p1)
        sch = _coefficients(pr, p1dp)
        a2p2 = pr.a**2 * pr.p2
        total = pr.p1 + a2p2 + 1.0
        assert sch.alpha1 == pytest.approx(sch.p1_prime / total, abs=1e-12)
        assert sch.beta / (1.0 - sch.alpha1) == pytest.approx(
            a2p2 / (sch.p1_dprime + a2p2 + 1.0), abs=1e-9
        )
        denom = 1.0 - sch.alpha1 - sch.beta
        assert sch.alpha2 / denom == pytest.approx(
            sch.p1_dprime / (sch.p1_dprime + 1.0), abs=1e-9
        )


def test_scheme_regime_and_split_gates():
    weak = IcParams(a=0.5, b=0.0, p1=2.0, p2=0.7, q1=0.4, q2=0.5, rho=0.3)
    with pytest.raises(WrongRegime):
        strong_scheme(weak, 1.0)
    with pytest.raises(BadSplit):
        strong_scheme(FIG7, 2.5)


def test_rate_point_endpoint_is_single_user_corner():
    pt = strong_ic_rate_point(FIG7, FIG7.p1)
    assert pt.r1 == pytest.approx(0.5 * math.log2(1 + FIG7.p1), abs=1e-12)
    assert pt.r2 == pytest.approx(
        0.5 * math.log2(1 + FIG7.a**2 * FIG7.p2 / (FIG7.p1 + 1)), abs=1e-12
    )


def test_rate_point_sum_is_constant():
    total = 0.5 * math.log2(1 + FIG7.p1 + FIG7.a**2 * FIG7.p2)
    assert total == pytest.approx(0.5 * math.log2(4.008))
    for p1dp in np.linspace(0, FIG7.p1, 31):
        pt = strong_ic_rate_point(FIG7, p1dp)
        assert pt.r1 + pt.r2 == pytest.approx(total, abs=1e-9)


def test_rate_point_r2_decreasing_in_split():
    values = [strong_ic_rate_point(FIG7, x).r2 for x in np.linspace(0, FIG7.p1, 21)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_layered_cancellation_identities():
    rng = np.random.default_rng(7)
    for pr in random_strong_zic_params(rng, 300):
        p1dp = rng.uniform(0, pr.p1)
        sch = _coefficients(pr, p1dp)
        scene = strong_scene(pr, p1dp, sch)
        a2p2 = pr.a**2 * pr.p2
        first = mutual_info(scene, "U1", "Y1") - mutual_info(scene, "U1", "S1")
        assert first == pytest.approx(
            0.5 * math.log2(1 + sch.p1_prime / (a2p2 + sch.p1_dprime + 1)), abs=1e-9
        )
        second = cond_mutual_info(scene, "U2", ("V", "Y1"), "U1") - cond_mutual_info(
            scene, "U2", "S1", "U1"
        )
        assert second == pytest.approx(0.5 * math.log2(1 + sch.p1_dprime), abs=1e-9)
        cross = mutual_info(scene, "V", ("U1", "Y1")) - mutual_info(scene, "V", "S1")
        assert cross == pytest.approx(
            0.5 * math.log2(1 + a2p2 / (sch.p1_dprime + 1)), abs=1e-9
        )


def test_cross_identity_conditional_form():
    # conditioning both the decode and binning terms on the first layer is
    # equivalent to the joint form; the shared layer correlation cancels
    pr = FIG7
    scene = strong_scene(pr, 0.8)
    joint = mutual_info(scene, "V", ("U1", "Y1")) - mutual_info(scene, "V", "S1")
    both_cond = cond_mutual_info(scene, "V", "Y1", "U1") - cond_mutual_info(
        scene, "V", "S1", "U1"
    )
    assert joint == pytest.approx(both_cond, abs=1e-9)


def test_second_layer_decode_without_state_matches_clean_mac():
    # with a vanishing state the second-layer conditional decode rate is the
    # plain successive-cancellation value
    pr = IcParams(a=1.2, b=0.0, p1=2.0, p2=0.7, q1=1e-9, q2=0.5, rho=0.0)
    scene = strong_scene(pr, 1.0)
    value = cond_mutual_info(scene, "U2", ("V", "Y1"), "U1")
    assert value == pytest.approx(0.5 * math.log2(2.0), abs=1e-6)


def test_telescoping_sum_of_stage_rates():
    for p1dp in np.linspace(0, FIG7.p1, 201):
        sch = _coefficients(FIG7, p1dp)
        a2p2 = FIG7.a**2 * FIG7.p2
        stages = (
            0.5 * math.log2(1 + sch.p1_prime / (a2p2 + sch.p1_dprime + 1))
            + 0.5 * math.log2(1 + sch.p1_dprime)
            + 0.5 * math.log2(1 + a2p2 / (sch.p1_dprime + 1))
        )
        assert stages == pytest.approx(0.5 * math.log2(1 + FIG7.p1 + a2p2), abs=1e-9)


def test_strong_zic_closed_form_equals_gate():
    rng = np.random.default_rng(11)
    for pr in random_strong_zic_params(rng, 150):
        p1dp = rng.uniform(0, pr.p1)
        rep = strong_zic_evaluate(pr, p1dp)
        closed = rep.condition("closed_form")
        gate = rep.condition("mi_gate")
        if abs(closed.margin) > 1e-9 and abs(gate.margin) > 1e-9:
            assert closed.holds == gate.holds


def test_strong_zic_rhs_monotone_certification():
    # the threshold's right side shrinks with the split, so passing extends up
    for c in (0.0, 0.4, 0.8, 1.2):
        pr = fig7_zic_params(c)
        grid = np.linspace(0, pr.p1, 101)
        verdicts = [strong_zic_check(pr, x).achieves_capacity for x in grid]
        first = next((i for i, v in enumerate(verdicts) if v), None)
        if first is not None:
            assert all(verdicts[first:])


def test_strong_zic_check_wrong_regime():
    vs = IcParams(a=2.0, b=0.0, p1=2.0, p2=0.7, q1=0.4, q2=0.5, rho=0.3)
    with pytest.raises(WrongRegime):
        strong_zic_check(vs, 1.0)


def test_strong_ic_check_requires_ordering():
    # rx1 carries the larger load here, so the stated scheme does not apply
    pr = IcParams(a=2.0, b=1.0, p1=1.0, p2=3.0, q1=1.0, q2=1.0, rho=0.2)
    from sdic import ChannelKind, RegimeKind, classify

    if classify(pr, ChannelKind.IC).kind is RegimeKind.STRONG_NOT_VERY_STRONG_IC:
        with pytest.raises(OrderingViolated):
            strong_ic_check(pr, 0.5)


def test_strong_ic_check_huge_cross_gain_fails():
    pr = IcParams(a=1.2, b=40.0, p1=2.0, p2=0.7, q1=0.4, q2=0.5, rho=0.3)
    rep = strong_ic_check(pr, 1.0)
    assert not rep.achieves_capacity
    assert not rep.condition("v_at_rx2").holds


def test_strong_ic_layered_region_y1_branch_is_rate_point():
    pr = FIG7.replace(b=1.2)
    for p1dp in (0.3, 1.0, 1.7):
        sch = _coefficients(pr, p1dp)
        scene = strong_scene(pr, p1dp, sch)
        pt = strong_ic_rate_point(pr, p1dp)
        r1_branch = (
            mutual_info(scene, "U1", "Y1")
            + cond_mutual_info(scene, "U2", ("V", "Y1"), "U1")
            - mutual_info(scene, ("U1", "U2"), "S1")
        )
        r2_branch = mutual_info(scene, "V", ("U1", "Y1")) - mutual_info(scene, "V", "S1")
        assert r1_branch == pytest.approx(pt.r1, abs=1e-9)
        assert r2_branch == pytest.approx(pt.r2, abs=1e-9)
        bounds = ic_layered_region(scene, "U1", "U2", "V")
        assert bounds.r1 <= pt.r1 + 1e-9
        assert bounds.r2 <= pt.r2 + 1e-9


def test_binning_cost_chain_rule():
    pr = FIG7
    scene = strong_scene(pr, 0.6)
    joint = mutual_info(scene, ("U1", "U2"), "S1")
    split = mutual_info(scene, "U1", "S1") + cond_mutual_info(scene, "U2", "S1", "U1")
    assert joint == pytest.approx(split, abs=1e-9)


def test_layered_region_zero_auxiliaries():
    pr = FIG7.replace(b=1.2)
    scene = strong_scene(pr, 1.0)
    bounds = ic_layered_region(scene, {"X1p": 0.0}, {"X1dp": 0.0}, {"X2": 0.0})
    assert bounds.r1 == 0.0 and bounds.r2 == 0.0


def test_layered_region_rejects_cross_side_loads():
    pr = FIG7.replace(b=1.2)
    scene = strong_scene(pr, 1.0)
    with pytest.raises(BadFactorization):
        ic_layered_region(scene, {"X1p": 1.0, "S2p": 0.3}, "U2", "V")
    with pytest.raises(BadFactorization):
        ic_layered_region(scene, "U1", "U2", {"X2": 1.0, "X1p": 0.2})


def test_zic_layered_region_certified_point():
    rng = np.random.default_rng(13)
    hits = 0
    for pr in random_strong_zic_params(rng, 200):
        p1dp = rng.uniform(0, pr.p1)
        rep = strong_zic_evaluate(pr, p1dp)
        if not rep.achieves_capacity:
            continue
        scene = strong_scene(pr, p1dp)
        bounds = zic_layered_region(scene, "U1", "U2", "V")
        assert bounds.r1 == pytest.approx(rep.rate_point.r1, abs=1e-9)
        assert bounds.r2 == pytest.approx(rep.rate_point.r2, abs=1e-9)
        hits += 1
    assert hits > 5


def test_zic_layered_region_gate_violation():
    pr = fig7_zic_params(3.5)  # far past the unimodal peak: the gate fails
    scene = strong_scene(pr, 1.0)
    with pytest.raises(GateViolated) as err:
        zic_layered_region(scene, "U1", "U2", "V")
    assert err.value.slack is not None and err.value.slack < 0


def test_segment_monotone_prefix():
    pr = fig7_zic_params(0.6)
    seg = strong_zic_segment(pr, grid_steps=101)
    assert not seg.degenerate
    assert seg.p1dp_min is not None
    step = pr.p1 / 100
    expected = [seg.p1dp_min + i * step for i in range(len(seg.rates))]
    got = [p.p1_dprime for p in seg.rates]
    assert got == pytest.approx(expected, abs=1e-9)
    assert got[-1] == pytest.approx(pr.p1)


def test_segment_empty_when_nothing_passes():
    pr = fig7_zic_params(4.0)
    seg = strong_zic_segment(pr, grid_steps=51)
    assert seg.p1dp_min is None and seg.rates == ()


def test_segment_degenerate_cross_power():
    pr = IcParams(a=1.2, b=0.0, p1=2.0, p2=1e-13, q1=0.4, q2=0.5, rho=0.3)
    from sdic import ChannelKind, RegimeKind, classify

    assert classify(pr, ChannelKind.ZIC).kind is RegimeKind.STRONG_NOT_VERY_STRONG_ZIC
    seg = strong_zic_segment(pr)
    assert seg.degenerate and seg.rates == ()


def test_ic_check_pass_implies_zic_gate():
    # receiver 2 in the regular channel faces strictly more interference, so
    # its conditions certifying a point implies the Z gate at the same point
    rng = np.random.default_rng(17)
    from sdic import ChannelKind, RegimeKind, classify
    from sdic.strong import strong_ic_evaluate

    for pr in random_strong_zic_params(rng, 100):
        bmin = math.sqrt(max(1.0, (pr.p1 + pr.a**2 * pr.p2 - pr.p2) / pr.p1))
        pi = pr.replace(b=bmin * rng.uniform(1.0, 1.5))
        regime = classify(pi, ChannelKind.IC)
        if regime.kind is not RegimeKind.STRONG_NOT_VERY_STRONG_IC or regime.needs_index_swap:
            continue
        p1dp = rng.uniform(0, pr.p1)
        if strong_ic_evaluate(pi, p1dp).achieves_capacity:
            assert strong_zic_evaluate(pr, p1dp).condition("mi_gate").holds
