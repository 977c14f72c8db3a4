"""Degree-preserving null models and bootstrap significance for hierarchy strength.

The null model double-edge-swaps the unit-edge multiset (one edge per
placement), which preserves every node's weighted in- and out-degree exactly
while scrambling who hires from whom. Bootstrap replicates resample unit
edges with replacement, keeping placements as the observation unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import stdtr

from .errors import DegenerateTestError, UndefinedMetricError
from .mvr import SamplerConfig, sample_mvr
from .network import HiringNetwork
from .seeding import derive_seed

REWIRE_SWAPS_PER_EDGE = 20   # standard mixing heuristic for double-edge swaps
MAX_REDRAWS = 100            # cap on rejecting all-self-loop bootstrap replicates

# stream tags for derive_seed, so nested randomness never aliases
_STREAM_BOOT_RESAMPLE = 0
_STREAM_BOOT_SAMPLER = 1
_STREAM_NULL_REWIRE = 2
_STREAM_NULL_SAMPLER = 3


@dataclass(frozen=True)
class RhoDistribution:
    """A sequence of hierarchy-strength values with summary statistics."""

    values: np.ndarray
    mean: float
    std: float
    n: int

    @classmethod
    def from_values(cls, values) -> "RhoDistribution":
        values = np.asarray(values, dtype=np.float64)
        if len(values) < 2:
            raise ValueError("need at least 2 values for a sample standard deviation")
        values.setflags(write=False)
        return cls(values=values, mean=float(values.mean()),
                   std=float(values.std(ddof=1)), n=len(values))


@dataclass(frozen=True)
class SignificanceReport:
    t_statistic: float
    p_value_t: float
    p_value_empirical: float
    empirical_mean: float
    null_mean: float


def degree_preserving_rewire(net: HiringNetwork, n_swaps: int, seed: int) -> HiringNetwork:
    """Randomize connections by double-edge swaps on the unit-edge multiset.

    Each swap picks two distinct unit edges (a->b), (c->d) uniformly and
    rewires them to (a->d), (c->b), unconditionally; multi-edges and
    self-loops are permitted, as self-hires exist empirically. In- and
    out-degrees are preserved exactly; n_swaps=0 returns an equal network.
    """
    if n_swaps < 0:
        raise ValueError("n_swaps must be >= 0")
    usrc, udst = net.unit_edges()
    if int((usrc != udst).sum()) < 2:
        raise ValueError("rewiring needs at least 2 non-self-loop unit edges")
    m = len(usrc)
    dst = udst.astype(np.int64).tolist()
    if n_swaps:
        rng = np.random.default_rng(seed)
        first = rng.integers(0, m, size=n_swaps)
        second = rng.integers(0, m - 1, size=n_swaps)
        second = second + (second >= first)  # distinct slot, uniform over the rest
        for i, j in zip(first.tolist(), second.tolist()):
            dst[i], dst[j] = dst[j], dst[i]
    return HiringNetwork.from_unit_edges(net.registry, usrc, np.asarray(dst, dtype=np.int64))


def bootstrap_rho(net: HiringNetwork, replicates: int, sampler: SamplerConfig,
                  seed: int) -> RhoDistribution:
    """Resample placements with replacement B times; record each replicate's best rho.

    A replicate that draws only self-loops is redrawn (up to MAX_REDRAWS)
    since rho is undefined there.
    """
    if replicates < 2:
        raise ValueError("need at least 2 bootstrap replicates")
    usrc, udst = net.unit_edges()
    m = net.total_weight
    values = []
    for rep in range(replicates):
        rng = np.random.default_rng(derive_seed(seed, _STREAM_BOOT_RESAMPLE, rep))
        for _ in range(MAX_REDRAWS):
            idx = rng.integers(0, m, size=m)
            rs, rd = usrc[idx], udst[idx]
            if (rs != rd).any():
                break
        else:
            raise UndefinedMetricError(
                f"bootstrap replicate {rep} drew only self-loops {MAX_REDRAWS} times"
            )
        boot_net = HiringNetwork.from_unit_edges(net.registry, rs, rd)
        cfg = replace(sampler, seed=derive_seed(seed, _STREAM_BOOT_SAMPLER, rep))
        values.append(sample_mvr(boot_net, cfg).best_rho)
    return RhoDistribution.from_values(values)


def null_rho_distribution(net: HiringNetwork, replicates: int, sampler: SamplerConfig,
                          seed: int) -> RhoDistribution:
    """Best rho of B degree-preserving randomizations (20 swaps per unit edge)."""
    if replicates < 2:
        raise ValueError("need at least 2 null replicates")
    n_swaps = REWIRE_SWAPS_PER_EDGE * net.total_weight
    values = []
    for rep in range(replicates):
        rewired = degree_preserving_rewire(net, n_swaps, derive_seed(seed, _STREAM_NULL_REWIRE, rep))
        cfg = replace(sampler, seed=derive_seed(seed, _STREAM_NULL_SAMPLER, rep))
        values.append(sample_mvr(rewired, cfg).best_rho)
    return RhoDistribution.from_values(values)


def significance(empirical: RhoDistribution, null: RhoDistribution) -> SignificanceReport:
    """Welch one-sided t-test (empirical mean > null mean) plus an empirical p.

    The empirical p counts null values reaching the smallest empirical value:
    (1 + #{null >= min(empirical)}) / (B_null + 1), bounded below by 1/(B+1).
    """
    me, mn = empirical.mean, null.mean
    ve, vn = empirical.std ** 2, null.std ** 2
    denom = ve / empirical.n + vn / null.n
    if denom == 0.0:
        if me == mn:
            raise DegenerateTestError("both samples constant with equal means")
        t = math.inf if me > mn else -math.inf
        p_t = 0.0 if me > mn else 1.0
    else:
        t = (me - mn) / math.sqrt(denom)
        df = denom ** 2 / (
            (ve / empirical.n) ** 2 / (empirical.n - 1)
            + (vn / null.n) ** 2 / (null.n - 1)
        )
        p_t = float(stdtr(df, -t))
    n_reach = int((null.values >= empirical.values.min()).sum())
    p_emp = (1 + n_reach) / (null.n + 1)
    return SignificanceReport(
        t_statistic=float(t),
        p_value_t=p_t,
        p_value_empirical=p_emp,
        empirical_mean=me,
        null_mean=mn,
    )
