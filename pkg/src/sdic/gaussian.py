"""Exact Gaussian information measures over linear scenes.

A :class:`GaussianScene` declares a basis of independent zero-mean Gaussian
components and a set of named random variables, each a linear combination of
those components.  Every covariance is then an exact matrix product
``C diag(var) C^T``, and differential entropies and (conditional) mutual
informations reduce to log-determinants of small covariance blocks.

Computation is carried out in natural log and converted to the requested
base on output (base 2, i.e. bits, by default).  Degenerate covariances are
reported explicitly rather than clamped: :func:`entropy` raises
:class:`DegenerateCovariance`, and :func:`mutual_info` returns ``math.inf``
when the joint covariance collapses while both marginal blocks are sound.
Zero-variance basis components are legal; information measures are then
evaluated on the supported subspace, so perfectly correlated states keep
every quantity finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateCovariance, UnknownVariable

__all__ = [
    "Basis",
    "RandVec",
    "GaussianScene",
    "covariance",
    "entropy",
    "mutual_info",
    "cond_mutual_info",
    "SINGULARITY_REL",
]

LN_2PIE = math.log(2.0 * math.pi * math.e)

#: relative singularity threshold: a covariance with determinant at or below
#: SINGULARITY_REL times the geometric mean of its diagonal is degenerate
SINGULARITY_REL = 1e-12

#: a squared canonical correlation this close to 1 is treated as exact
#: linear dependence between the two groups
_PERFECT_CORR = 1.0 - 1e-12

_SUPPORT_REL = 1e-12


class Basis:
    """Ordered independent Gaussian components, each with a variance in power units.

    Names must be unique; variances must be finite and >= 0.  Zero-variance
    components are retained (they contribute nothing to any covariance) so
    that limiting parameterizations need no special casing.
    """

    __slots__ = ("_names", "_variances", "_index")

    def __init__(self, elements: Iterable[tuple[str, float]]):
        names = []
        variances = []
        for name, var in elements:
            if not isinstance(name, str) or not name:
                raise ValueError("basis element names must be nonempty strings")
            var = float(var)
            if not math.isfinite(var) or var < 0.0:
                raise ValueError(f"variance of {name!r} must be finite and >= 0, got {var}")
            names.append(name)
            variances.append(var)
        if len(set(names)) != len(names):
            raise ValueError("basis element names must be unique")
        self._names = tuple(names)
        self._variances = np.asarray(variances, dtype=float)
        self._variances.flags.writeable = False
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def variances(self) -> np.ndarray:
        return self._variances

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown basis element {name!r}") from None

    def __len__(self) -> int:
        return len(self._names)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{v:g}" for n, v in zip(self._names, self._variances))
        return f"Basis({inner})"


@dataclass(frozen=True, eq=False)
class RandVec:
    """A named random variable: a coefficient row over the scene basis."""

    name: str
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)


class GaussianScene:
    """Immutable set of named jointly Gaussian variables over a shared basis.

    Every basis element is automatically available as a variable of the same
    name.  :meth:`define` returns a new scene with one more variable; the
    coefficients may reference basis elements and previously defined
    variables, which are resolved down to basis rows.
    """

    __slots__ = ("_basis", "_rows", "_order")

    def __init__(self, basis: Basis, variables: Mapping[str, Mapping[str, float]] | None = None):
        self._basis = basis
        rows: dict[str, np.ndarray] = {}
        eye = np.eye(len(basis))
        for i, name in enumerate(basis.names):
            row = eye[i]
            row.flags.writeable = False
            rows[name] = row
        self._rows = rows
        self._order = {n: i for i, n in enumerate(rows)}
        if variables:
            scene = self
            for name, coeffs in variables.items():
                scene = scene.define(name, coeffs)
            self._rows = scene._rows
            self._order = scene._order

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._rows)

    def has(self, name: str) -> bool:
        return name in self._rows

    def define(self, name: str, coeffs: Mapping[str, float]) -> "GaussianScene":
        """Return a new scene with ``name`` defined as a linear combination.

        ``coeffs`` maps existing variable names (basis or derived) to real
        weights.
        """
        if not isinstance(name, str) or not name:
            raise ValueError("variable names must be nonempty strings")
        if name in self._rows:
            raise ValueError(f"variable {name!r} already defined")
        row = np.zeros(len(self._basis))
        for ref, weight in coeffs.items():
            if ref not in self._rows:
                raise UnknownVariable(f"unknown variable {ref!r} in definition of {name!r}")
            weight = float(weight)
            if not math.isfinite(weight):
                raise ValueError(f"coefficient of {ref!r} in {name!r} must be finite")
            row = row + weight * self._rows[ref]
        clone = object.__new__(GaussianScene)
        clone._basis = self._basis
        clone._rows = dict(self._rows)
        row.flags.writeable = False
        clone._rows[name] = row
        clone._order = dict(self._order)
        clone._order[name] = len(clone._order)
        return clone

    def var(self, name: str) -> RandVec:
        if name not in self._rows:
            raise UnknownVariable(f"unknown variable {name!r}")
        return RandVec(name, self._rows[name].copy())

    def coeff_matrix(self, names: Sequence[str]) -> np.ndarray:
        """Stack coefficient rows for ``names`` in the order given."""
        rows = []
        for name in names:
            if name not in self._rows:
                raise UnknownVariable(f"unknown variable {name!r}")
            rows.append(self._rows[name])
        return np.asarray(rows)

    def _rank(self, name: str) -> int:
        return self._order[name]

    def __repr__(self) -> str:
        return f"GaussianScene({len(self._basis)} basis, vars={list(self._rows)})"


def _as_group(names) -> tuple[str, ...]:
    if isinstance(names, str):
        return (names,)
    group = tuple(names)
    if not all(isinstance(n, str) for n in group):
        raise TypeError("variable groups must be names or sequences of names")
    return group


def _canonical_group(scene: GaussianScene, names, what: str) -> tuple[str, ...]:
    group = _as_group(names)
    if len(set(group)) != len(group):
        raise ValueError(f"duplicate names in {what}: {group}")
    for n in group:
        if not scene.has(n):
            raise UnknownVariable(f"unknown variable {n!r} in {what}")
    return tuple(sorted(group, key=scene._rank))


def covariance(scene: GaussianScene, names: Sequence[str]) -> np.ndarray:
    """Exact covariance matrix of the selected variables, in caller order."""
    group = _as_group(names)
    if not group:
        raise ValueError("covariance requires at least one variable")
    c = scene.coeff_matrix(group)
    sigma = (c * scene.basis.variances) @ c.T
    return 0.5 * (sigma + sigma.T)


def _singularity_threshold(sigma: np.ndarray) -> float:
    diag = np.diag(sigma)
    lo = float(diag.min(initial=np.inf))
    if not math.isfinite(lo) or lo <= 0.0:
        return 0.0
    return SINGULARITY_REL * float(np.exp(np.mean(np.log(diag))))


def _logdet(sigma: np.ndarray) -> tuple[float, float]:
    """Return (det, logdet); det is 0 for non-positive determinants."""
    sign, ld = np.linalg.slogdet(sigma)
    if sign <= 0.0:
        return 0.0, -math.inf
    return math.exp(ld), float(ld)


def entropy(scene: GaussianScene, names, log_base: float = 2.0) -> float:
    """Differential entropy ``0.5 * log((2 pi e)^n det Sigma)`` of a selection.

    Raises :class:`DegenerateCovariance` when the joint covariance is
    singular relative to the scale of its diagonal; the true differential
    entropy is then -inf.
    """
    group = _canonical_group(scene, names, "entropy selection")
    if not group:
        raise ValueError("entropy requires at least one variable")
    sigma = covariance(scene, group)
    det, ld = _logdet(sigma)
    threshold = _singularity_threshold(sigma)
    if det <= threshold:
        raise DegenerateCovariance(
            f"covariance of {group} is singular (det={det:.3e} <= {threshold:.3e}); "
            "the selection is linearly dependent",
            det=det,
            threshold=threshold,
        )
    return 0.5 * (len(group) * LN_2PIE + ld) / math.log(log_base)


def _support_whitener(sigma: np.ndarray) -> np.ndarray:
    """Columns spanning the supported subspace of a PSD matrix, whitened."""
    w, v = np.linalg.eigh(sigma)
    top = float(w.max(initial=0.0))
    if top <= 0.0:
        return np.empty((sigma.shape[0], 0))
    keep = w > top * _SUPPORT_REL
    return v[:, keep] / np.sqrt(w[keep])


def _support_mi_nats(sigma: np.ndarray, n_first: int) -> float:
    """Mutual information between the two blocks of ``sigma`` on their supports.

    Equivalent to the determinant-ratio formula whenever the blocks are
    nonsingular; extends it continuously when they are not (almost surely
    constant directions carry no information).
    """
    wa = _support_whitener(sigma[:n_first, :n_first])
    wb = _support_whitener(sigma[n_first:, n_first:])
    if wa.shape[1] == 0 or wb.shape[1] == 0:
        return 0.0
    m = wa.T @ sigma[:n_first, n_first:] @ wb
    svals = np.linalg.svd(m, compute_uv=False)
    s2 = np.clip(svals, 0.0, 1.0) ** 2
    if np.any(s2 >= _PERFECT_CORR):
        return math.inf
    return -0.5 * float(np.sum(np.log1p(-s2)))


def _mi_from_cov_nats(sigma: np.ndarray, n_first: int) -> float:
    a = sigma[:n_first, :n_first]
    b = sigma[n_first:, n_first:]
    det_a, ld_a = _logdet(a)
    det_b, ld_b = _logdet(b)
    det_ab, ld_ab = _logdet(sigma)
    if det_a > _singularity_threshold(a) and det_b > _singularity_threshold(b):
        if det_ab > _singularity_threshold(sigma):
            return 0.5 * (ld_a + ld_b - ld_ab)
        # joint degenerate while both marginals are sound: the groups are
        # linearly dependent on each other and the MI is genuinely infinite
        return math.inf
    return _support_mi_nats(sigma, n_first)


def mutual_info(scene: GaussianScene, a, b, log_base: float = 2.0) -> float:
    """Mutual information ``h(A) + h(B) - h(A u B)`` via a determinant ratio.

    The ``(2 pi e)^n`` factors cancel, so the result is exact determinant
    algebra.  Returns ``math.inf`` when the two groups are linearly
    dependent on each other.  Groups are canonically ordered internally, so
    ``mutual_info(A, B)`` and ``mutual_info(B, A)`` evaluate the identical
    float expression.
    """
    ga = _canonical_group(scene, a, "first group")
    gb = _canonical_group(scene, b, "second group")
    if not ga or not gb:
        raise ValueError("mutual_info requires two nonempty groups")
    if set(ga) & set(gb):
        raise ValueError(f"groups must be disjoint, both contain {sorted(set(ga) & set(gb))}")
    if tuple(scene._rank(n) for n in gb) < tuple(scene._rank(n) for n in ga):
        ga, gb = gb, ga
    sigma = covariance(scene, ga + gb)
    return _mi_from_cov_nats(sigma, len(ga)) / math.log(log_base)


def cond_mutual_info(scene: GaussianScene, a, b, c, log_base: float = 2.0) -> float:
    """Conditional mutual information ``h(AC) + h(BC) - h(ABC) - h(C)``.

    An empty conditioning group reduces to :func:`mutual_info`.  Degenerate
    conditioning covariances are handled by conditioning on the supported
    subspace (Schur complement through the pseudo-inverse).
    """
    ga = _canonical_group(scene, a, "first group")
    gb = _canonical_group(scene, b, "second group")
    gc = _canonical_group(scene, c, "conditioning group") if c else ()
    if not gc:
        return mutual_info(scene, ga, gb, log_base)
    if not ga or not gb:
        raise ValueError("cond_mutual_info requires two nonempty groups")
    for x, y, what in ((ga, gb, "A/B"), (ga, gc, "A/C"), (gb, gc, "B/C")):
        if set(x) & set(y):
            raise ValueError(f"groups must be pairwise disjoint, overlap in {what}")
    if tuple(scene._rank(n) for n in gb) < tuple(scene._rank(n) for n in ga):
        ga, gb = gb, ga
    na, nb = len(ga), len(gb)
    sigma = covariance(scene, ga + gb + gc)

    idx_ac = list(range(na)) + list(range(na + nb, len(sigma)))
    idx_bc = list(range(na, len(sigma)))
    idx_c = list(range(na + nb, len(sigma)))
    s_ac = sigma[np.ix_(idx_ac, idx_ac)]
    s_bc = sigma[np.ix_(idx_bc, idx_bc)]
    s_c = sigma[np.ix_(idx_c, idx_c)]
    det_ac, ld_ac = _logdet(s_ac)
    det_bc, ld_bc = _logdet(s_bc)
    det_abc, ld_abc = _logdet(sigma)
    det_c, ld_c = _logdet(s_c)
    sound = (
        det_ac > _singularity_threshold(s_ac)
        and det_bc > _singularity_threshold(s_bc)
        and det_c > _singularity_threshold(s_c)
    )
    if sound:
        if det_abc > _singularity_threshold(sigma):
            return 0.5 * (ld_ac + ld_bc - ld_abc - ld_c) / math.log(log_base)
        return math.inf

    # condition on the support of C, then fall back to the block MI routine
    k = na + nb
    w, v = np.linalg.eigh(s_c)
    top = float(w.max(initial=0.0))
    if top > 0.0:
        keep = w > top * _SUPPORT_REL
        pinv = (v[:, keep] / w[keep]) @ v[:, keep].T
        cross = sigma[:k, k:]
        cond = sigma[:k, :k] - cross @ pinv @ cross.T
        cond = 0.5 * (cond + cond.T)
    else:
        cond = sigma[:k, :k]
    return _mi_from_cov_nats(cond, na) / math.log(log_base)
