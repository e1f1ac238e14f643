"""Monte-Carlo cross-validation of the closed-form Gaussian engine.

Scenes are sampled directly from their linear construction and the sample
covariance is plugged into self-contained determinant formulas, giving an
estimator of every covariance / entropy / mutual information that shares no
code with the analytic path in :mod:`sdic.gaussian`.  Agreement within the
plug-in estimator's statistical error therefore guards both the scene
covariance propagation and the determinant algebra.

Sampling uses the counter-based Philox generator; each sample block draws
from an independent substream keyed by (seed, block index), so results are
reproducible regardless of how blocks would be scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gaussian import GaussianScene, cond_mutual_info, mutual_info

__all__ = ["GENERATOR", "McPair", "McReport", "sample_covariance", "validate", "describe_query"]

GENERATOR = "Philox4x64"

_BLOCK = 1 << 17

#: an empirical joint correlation determinant below this is treated as the
#: sampled image of an exactly dependent selection
_EMPIRICAL_SINGULAR = 1e-9


@dataclass(frozen=True)
class McPair:
    description: str
    analytic: float
    empirical: float
    abs_err: float

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "analytic": self.analytic,
            "empirical": self.empirical,
            "abs_err": self.abs_err,
        }


@dataclass(frozen=True)
class McReport:
    """Analytic-vs-empirical comparison for a batch of MI queries."""

    pairs: tuple[McPair, ...]
    n_samples: int
    seed: int
    tolerance: float
    passed: bool
    generator: str = GENERATOR

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def _group(names) -> tuple[str, ...]:
    return (names,) if isinstance(names, str) else tuple(names)


def describe_query(query) -> str:
    """Human-readable label, e.g. ``I(U;V,Y1|U1)``."""
    a, b = _group(query[0]), _group(query[1])
    c = _group(query[2]) if len(query) > 2 and query[2] else ()
    label = f"I({','.join(a)};{','.join(b)}"
    if c:
        label += f"|{','.join(c)}"
    return label + ")"


def sample_covariance(
    scene: GaussianScene, names: Sequence[str], n: int, seed: int, block: int = _BLOCK
) -> np.ndarray:
    """Sample covariance of ``n`` i.i.d. scene draws (deterministic in seed).

    Basis components are drawn block by block from Philox substreams, mapped
    through the coefficient rows, and accumulated into first and second
    moments; the usual unbiased estimator is returned.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    names = _group(names)
    coeffs = scene.coeff_matrix(names)
    scale = np.sqrt(scene.basis.variances)
    k = len(names)
    total = np.zeros(k)
    outer = np.zeros((k, k))
    done = 0
    index = 0
    root = np.random.Philox(seed)
    while done < n:
        take = min(block, n - done)
        # jumped(i) yields the (seed, block-index) substream without touching root
        rng = np.random.Generator(root.jumped(index))
        z = rng.standard_normal((take, len(scale))) * scale
        x = z @ coeffs.T
        total += x.sum(axis=0)
        outer += x.T @ x
        done += take
        index += 1
    mean = total / n
    cov = (outer - n * np.outer(mean, mean)) / (n - 1)
    return 0.5 * (cov + cov.T)


def _plugin_logdet(sigma: np.ndarray) -> tuple[float, float]:
    sign, ld = np.linalg.slogdet(sigma)
    return (0.0, -math.inf) if sign <= 0 else (math.exp(ld), float(ld))


def _plugin_degenerate(sigma: np.ndarray) -> bool:
    diag = np.diag(sigma)
    if np.any(diag <= 0.0):
        return True
    det, _ = _plugin_logdet(sigma)
    return det <= _EMPIRICAL_SINGULAR * float(np.exp(np.mean(np.log(diag))))


def _plugin_mi(cov: np.ndarray, ia: Sequence[int], ib: Sequence[int], base: float) -> float:
    joint = list(ia) + list(ib)
    s_ab = cov[np.ix_(joint, joint)]
    if _plugin_degenerate(s_ab):
        return math.inf
    _, ld_a = _plugin_logdet(cov[np.ix_(ia, ia)])
    _, ld_b = _plugin_logdet(cov[np.ix_(ib, ib)])
    _, ld_ab = _plugin_logdet(s_ab)
    return 0.5 * (ld_a + ld_b - ld_ab) / math.log(base)


def _plugin_cmi(cov, ia, ib, ic, base: float) -> float:
    if not ic:
        return _plugin_mi(cov, ia, ib, base)
    iac = list(ia) + list(ic)
    ibc = list(ib) + list(ic)
    iabc = list(ia) + list(ib) + list(ic)
    s_abc = cov[np.ix_(iabc, iabc)]
    if _plugin_degenerate(s_abc):
        return math.inf
    _, ld_ac = _plugin_logdet(cov[np.ix_(iac, iac)])
    _, ld_bc = _plugin_logdet(cov[np.ix_(ibc, ibc)])
    _, ld_abc = _plugin_logdet(s_abc)
    _, ld_c = _plugin_logdet(cov[np.ix_(ic, ic)])
    return 0.5 * (ld_ac + ld_bc - ld_abc - ld_c) / math.log(base)


def validate(
    scene: GaussianScene,
    mi_queries: Sequence,
    n: int = 10**6,
    seed: int = 0,
    tol: float = 0.01,
    log_base: float = 2.0,
) -> McReport:
    """Compare analytic MI values against their Gaussian plug-in estimates.

    Each query is ``(A, B)`` or ``(A, B, C)`` with string or tuple groups.
    One shared sample covariance over the union of queried variables feeds
    every estimate.  An infinite analytic value must coincide with a
    singular empirical covariance (and vice versa counts as error);
    disagreements are data in the report, never exceptions.
    """
    queries = []
    union: list[str] = []
    for q in mi_queries:
        a, b = _group(q[0]), _group(q[1])
        c = _group(q[2]) if len(q) > 2 and q[2] else ()
        queries.append((a, b, c))
        for name in (*a, *b, *c):
            if name not in union:
                union.append(name)
    cov = sample_covariance(scene, union, n, seed)
    pos = {name: i for i, name in enumerate(union)}

    pairs = []
    all_ok = True
    for a, b, c in queries:
        analytic = cond_mutual_info(scene, a, b, c, log_base) if c else mutual_info(scene, a, b, log_base)
        ia = [pos[x] for x in a]
        ib = [pos[x] for x in b]
        ic = [pos[x] for x in c]
        empirical = _plugin_cmi(cov, ia, ib, ic, log_base)
        if math.isinf(analytic) or math.isinf(empirical):
            # exact linear dependence survives sampling exactly, so the two
            # sides must agree on infiniteness
            err = 0.0 if math.isinf(analytic) and math.isinf(empirical) else math.inf
        else:
            err = abs(analytic - empirical)
        ok = err <= tol
        all_ok = all_ok and ok
        pairs.append(McPair(describe_query((a, b, c)), analytic, empirical, err))
    return McReport(tuple(pairs), n, seed, tol, all_ok)
