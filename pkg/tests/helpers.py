"""Shared draw generators for the randomized suites."""

import math

import numpy as np

from sdic import ChannelKind, IcParams, RegimeKind, classify


def random_vs_ic_params(rng: np.random.Generator, n: int, signed_gains: bool = True):
    """Parameter points classified VeryStrongIC, gains inflated past the bound."""
    out = []
    while len(out) < n:
        p1 = rng.uniform(0.2, 3.0)
        p2 = rng.uniform(0.2, 3.0)
        q1 = rng.uniform(0.05, 2.0)
        q2 = rng.uniform(0.05, 2.0)
        rho = rng.uniform(-0.999, 0.999)
        prod = (1 + p1) * (1 + p2)
        a = math.sqrt((prod - 1 - p1) / p2 * rng.uniform(1.02, 4.0))
        b = math.sqrt((prod - 1 - p2) / p1 * rng.uniform(1.02, 4.0))
        if signed_gains and rng.random() < 0.5:
            a = -a
        if signed_gains and rng.random() < 0.5:
            b = -b
        params = IcParams(a=a, b=b, p1=p1, p2=p2, q1=q1, q2=q2, rho=rho)
        if classify(params, ChannelKind.IC).kind is RegimeKind.VERY_STRONG_IC:
            out.append(params)
    return out


def random_vs_zic_params(rng: np.random.Generator, n: int):
    """Parameter points classified VeryStrongZIC (a^2 > 1 + P1, b = 0)."""
    out = []
    while len(out) < n:
        p1 = rng.uniform(0.2, 3.0)
        p2 = rng.uniform(0.2, 3.0)
        a = math.sqrt((1 + p1) * rng.uniform(1.02, 6.0))
        q1 = rng.uniform(0.05, 2.0)
        q2 = rng.uniform(0.05, 2.0)
        rho = rng.uniform(-0.999, 0.999)
        params = IcParams(a=a, b=0.0, p1=p1, p2=p2, q1=q1, q2=q2, rho=rho)
        if classify(params, ChannelKind.ZIC).kind is RegimeKind.VERY_STRONG_ZIC:
            out.append(params)
    return out


def random_strong_zic_params(rng: np.random.Generator, n: int):
    """Parameter points classified StrongNotVeryStrongZIC (1 <= a^2 < 1 + P1)."""
    out = []
    while len(out) < n:
        p1 = rng.uniform(0.3, 4.0)
        p2 = rng.uniform(0.1, 2.0)
        a2 = rng.uniform(1.0, 1.0 + p1) * rng.uniform(0.9, 0.999)
        if a2 < 1.0:
            continue
        q1 = rng.uniform(0.1, 2.0)
        q2 = rng.uniform(0.1, 2.0)
        rho = rng.uniform(-0.99, 0.99)
        params = IcParams(a=math.sqrt(a2), b=0.0, p1=p1, p2=p2, q1=q1, q2=q2, rho=rho)
        if classify(params, ChannelKind.ZIC).kind is RegimeKind.STRONG_NOT_VERY_STRONG_ZIC:
            out.append(params)
    return out


def random_scene(rng: np.random.Generator, max_dim: int = 6):
    """Random basis plus a few dense derived variables, well conditioned."""
    from sdic import Basis, GaussianScene

    m = int(rng.integers(2, max_dim + 1))
    names = [f"Z{i}" for i in range(m)]
    variances = rng.uniform(0.3, 3.0, size=m)
    scene = GaussianScene(Basis(list(zip(names, variances))))
    n_derived = int(rng.integers(1, 4))
    for j in range(n_derived):
        coeffs = {nm: float(c) for nm, c in zip(names, rng.uniform(-1.5, 1.5, size=m))}
        # keep a firm own-noise component so joints stay comfortably regular
        coeffs[names[j % m]] = coeffs.get(names[j % m], 0.0) + 2.0
        scene = scene.define(f"W{j}", coeffs)
    return scene


def fig7_zic_params(c: float) -> IcParams:
    """Boundary-sweep parameter set with the residual variance held at 0.5."""
    q1, q2_resid = 0.4, 0.5
    q2 = c * c * q1 + q2_resid
    return IcParams(
        a=1.2, b=0.0, p1=2.0, p2=0.7, q1=q1, q2=q2, rho=c * math.sqrt(q1 / q2)
    )
