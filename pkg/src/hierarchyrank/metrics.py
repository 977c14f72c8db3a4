"""Inequality of faculty production and mobility relative to prestige.

Gini/Lorenz operate on any non-negative production vector (out-degrees in
the hiring pipeline); rank changes score each placement by how far down the
consensus hierarchy it moved, normalized by the number of ranked
institutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import UndefinedMetricError
from .network import HiringRecord

KS_SERIES_TERMS = 100

_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # renamed in numpy 2.0


@dataclass(frozen=True)
class LorenzCurve:
    """Cumulative-share curve from (0,0) to (1,1); lies on or below the diagonal."""

    points: np.ndarray  # shape (n+1, 2): (cum population fraction, cum production fraction)

    def area(self) -> float:
        """Trapezoidal area under the curve."""
        return float(_trapezoid(self.points[:, 1], self.points[:, 0]))


@dataclass(frozen=True)
class RankChangeSample:
    """Relative rank changes for a record set; negative values moved up-hierarchy."""

    values: np.ndarray
    n_total: int
    n_up: int      # strictly negative values
    n_dropped: int  # records referencing unranked institutions


def _production_array(production) -> np.ndarray:
    x = np.asarray(production, dtype=np.float64)
    if x.ndim != 1 or len(x) == 0:
        raise ValueError("production must be a nonempty 1-D sequence")
    if (x < 0).any():
        raise ValueError("production values must be non-negative")
    if x.sum() == 0:
        raise UndefinedMetricError("Gini/Lorenz undefined for an all-zero vector")
    return x


def gini(production) -> float:
    """Population Gini: mean absolute difference over twice the mean, no (n-1) correction.

    Equals sum_ij |x_i - x_j| / (2 n^2 xbar), computed by the sorted-rank
    identity; G = 0 for equal values, at most 1 - 1/n.
    """
    x = _production_array(production)
    xs = np.sort(x)
    n = len(xs)
    i = np.arange(1, n + 1, dtype=np.float64)
    total = xs.sum()
    return float((2.0 * (i * xs).sum() - (n + 1) * total) / (n * total))


def lorenz(production) -> LorenzCurve:
    """Lorenz curve: nodes sorted ascending by production, cumulative shares."""
    x = _production_array(production)
    xs = np.sort(x)
    n = len(xs)
    cum = np.concatenate(([0.0], np.cumsum(xs) / xs.sum()))
    pop = np.arange(n + 1, dtype=np.float64) / n
    points = np.column_stack((pop, cum))
    points.setflags(write=False)
    return LorenzCurve(points)


def gini_from_lorenz(curve: LorenzCurve) -> float:
    return 1.0 - 2.0 * curve.area()


def relative_rank_change(records: Sequence[HiringRecord],
                         rank_by_name: Mapping[str, int]) -> RankChangeSample:
    """Per record: (rank of hire - rank of phd) / N, N = ranked institution count.

    Positive means the person moved down the hierarchy; self-hires score 0
    and stay in n_total. Records whose institutions are not ranked are
    dropped and counted in n_dropped.
    """
    n = len(rank_by_name)
    if n == 0:
        raise ValueError("rank table is empty")
    values = []
    dropped = 0
    for rec in records:
        pr = rank_by_name.get(rec.phd_institution)
        hr = rank_by_name.get(rec.hire_institution)
        if pr is None or hr is None:
            dropped += 1
            continue
        values.append((hr - pr) / n)
    if not values:
        raise ValueError("no records reference ranked institutions")
    arr = np.asarray(values, dtype=np.float64)
    arr.setflags(write=False)
    return RankChangeSample(
        values=arr,
        n_total=len(arr),
        n_up=int((arr < 0).sum()),
        n_dropped=dropped,
    )


def upward_fraction(sample: RankChangeSample) -> float:
    """Fraction of placements at a strictly more prestigious institution."""
    if sample.n_total < 1:
        raise ValueError("empty sample")
    return sample.n_up / sample.n_total


def _kolmogorov_sf(lam: float) -> float:
    """Asymptotic two-sided KS survival function, 100-term alternating series."""
    if lam <= 0.0:
        return 1.0
    s = 0.0
    for k in range(1, KS_SERIES_TERMS + 1):
        s += (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
    return min(1.0, max(0.0, 2.0 * s))


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sided Kolmogorov-Smirnov test.

    D is the sup of |ECDF_a - ECDF_b|; p comes from the asymptotic
    Kolmogorov distribution at sqrt(n_a n_b / (n_a + n_b)) * D.
    """
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be nonempty")
    both = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, both, side="right") / len(a)
    cdf_b = np.searchsorted(b, both, side="right") / len(b)
    d = float(np.abs(cdf_a - cdf_b).max())
    n_eff = len(a) * len(b) / (len(a) + len(b))
    p = _kolmogorov_sf(math.sqrt(n_eff) * d)
    return d, p
