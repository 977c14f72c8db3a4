"""Minimum-violation-ranking engine.

S scores a ranking by the net weight of edges pointing down the hierarchy
minus those pointing up; hierarchy strength rho is the downward fraction of
non-self-loop edge weight. Rankings maximizing S are sampled with a
zero-temperature Metropolis chain over pair swaps, and the retained optima
are averaged into per-institution prestige scores.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import run_chain_kernel
from .errors import SizeLimitError, UndefinedMetricError
from .network import HiringNetwork
from .seeding import derive_seed

MASK64 = (1 << 64) - 1
_INIT_STREAM = 11  # derive_seed tag for restart starting states


class Ranking:
    """A permutation of the network's nodes; rank 1 is the most prestigious.

    ``rank_of[i]`` is node i's rank in [1, N]; ``node_at[k]`` is the node
    holding rank k+1. The two arrays are exact inverses.
    """

    __slots__ = ("rank_of", "node_at")

    def __init__(self, rank_of):
        rank_of = np.ascontiguousarray(rank_of, dtype=np.int32)
        n = len(rank_of)
        if n == 0:
            raise ValueError("ranking must cover at least one node")
        if rank_of.min() < 1 or rank_of.max() > n:
            raise ValueError("rank_of must be a bijection onto 1..N")
        node_at = np.empty(n, dtype=np.int32)
        node_at[rank_of - 1] = np.arange(n, dtype=np.int32)
        # duplicate ranks overwrite in the scatter; the inverse check catches them
        if not np.array_equal(rank_of[node_at], np.arange(1, n + 1, dtype=np.int32)):
            raise ValueError("rank_of must be a bijection onto 1..N")
        rank_of.setflags(write=False)
        node_at.setflags(write=False)
        self.rank_of = rank_of
        self.node_at = node_at

    @classmethod
    def from_order(cls, node_at) -> "Ranking":
        """Build from the node sequence in rank order (most prestigious first)."""
        node_at = np.asarray(node_at, dtype=np.int32)
        rank_of = np.empty(len(node_at), dtype=np.int32)
        rank_of[node_at] = np.arange(1, len(node_at) + 1, dtype=np.int32)
        return cls(rank_of)

    def reverse(self) -> "Ranking":
        return Ranking(len(self.rank_of) + 1 - self.rank_of)

    def __len__(self) -> int:
        return len(self.rank_of)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ranking) and np.array_equal(self.rank_of, other.rank_of)

    def __repr__(self):
        return f"Ranking(N={len(self)})"


@dataclass(frozen=True)
class SamplerConfig:
    """Chain parameters. Iterations count proposal attempts, not accepted moves."""

    total_iterations: int = 100_000
    burn_in: int = 20_000
    sample_interval: int = 100
    restarts: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.total_iterations < 1:
            raise ValueError("total_iterations must be positive")
        if not 0 < self.burn_in < self.total_iterations:
            raise ValueError("burn_in must be positive and < total_iterations")
        if self.sample_interval < 1:
            raise ValueError("sample_interval must be positive")
        if self.burn_in + self.sample_interval > self.total_iterations:
            raise ValueError("burn_in + sample_interval must be <= total_iterations")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative 64-bit integer")
        object.__setattr__(self, "seed", self.seed & MASK64)

    @classmethod
    def from_kv_file(cls, path: str) -> "SamplerConfig":
        """Parse a flat key=value file; keys are the field names above."""
        fields = {}
        with open(path, "r", encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{ln}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in cls.__dataclass_fields__:
                    raise ValueError(f"{path}:{ln}: unknown sampler key {key!r}")
                fields[key] = int(value.strip())
        return cls(**fields)


@dataclass
class MvrResult:
    """Pooled sampler output: retained optimal rankings and their consensus."""

    samples: list[Ranking]
    best_score: int
    best_rho: float
    prestige_score: np.ndarray  # per-node mean rank over retained samples
    ci95: np.ndarray            # per-node (low, high) percentile bounds, shape (N, 2)
    consensus: Ranking


def _check_ranking(net: HiringNetwork, r: Ranking):
    if len(r) != net.n_nodes:
        raise ValueError(f"ranking covers {len(r)} nodes, network has {net.n_nodes}")


def net_score(net: HiringNetwork, r: Ranking) -> int:
    """S = sum of m_ij * sign(rank(j) - rank(i)); self-loops contribute 0."""
    _check_ranking(net, r)
    ranks = r.rank_of.astype(np.int64)
    diff = np.sign(ranks[net.dst] - ranks[net.src])
    return int((net.weight * diff).sum())


def rho(net: HiringNetwork, r: Ranking) -> float:
    """Downward fraction of non-self-loop edge weight under ranking r."""
    _check_ranking(net, r)
    w_ns = net.nonloop_weight()
    if w_ns == 0:
        raise UndefinedMetricError("rho undefined: every edge is a self-loop")
    return (w_ns + net_score(net, r)) / (2 * w_ns)


def score_to_rho(net: HiringNetwork, s: int) -> float:
    w_ns = net.nonloop_weight()
    if w_ns == 0:
        raise UndefinedMetricError("rho undefined: every edge is a self-loop")
    return (w_ns + s) / (2 * w_ns)


def delta_swap(net: HiringNetwork, r: Ranking, a: int, b: int) -> int:
    """Exact S change if nodes a and b exchange ranks; examines only incident edges."""
    _check_ranking(net, r)
    if a == b:
        raise ValueError("delta_swap requires two distinct nodes")
    if not (0 <= a < net.n_nodes and 0 <= b < net.n_nodes):
        raise ValueError("node id out of range")
    sel = (net.src == a) | (net.src == b) | (net.dst == a) | (net.dst == b)
    src, dst, w = net.src[sel], net.dst[sel], net.weight[sel]
    ranks = r.rank_of.astype(np.int64)
    before = np.sign(ranks[dst] - ranks[src])
    swapped = ranks.copy()
    swapped[[a, b]] = swapped[[b, a]]
    after = np.sign(swapped[dst] - swapped[src])
    return int((w * (after - before)).sum())


def initial_ranking(net: HiringNetwork) -> Ranking:
    """Chain start state: descending weighted out-degree, ties by ascending node id."""
    out_deg, _ = net.degree_sequences()
    order = np.lexsort((np.arange(net.n_nodes), -out_deg))
    return Ranking.from_order(order)


def _seeded_positions(n: int, seed: int) -> np.ndarray:
    """Uniform random 0-based positions via a splitmix64-driven Fisher-Yates.

    Pure-Python on purpose: restart starting states must not depend on which
    chain kernel is active.
    """
    from ._mvr_py import splitmix64

    state = seed & MASK64
    pos = list(range(n))
    for i in range(n - 1, 0, -1):
        state, r = splitmix64(state)
        j = r % (i + 1)
        pos[i], pos[j] = pos[j], pos[i]
    return np.asarray(pos, dtype=np.int32)


def _check_sampleable(net: HiringNetwork):
    if net.n_nodes < 2:
        raise ValueError("sampling requires at least 2 nodes")
    if net.nonloop_weight() == 0:
        raise UndefinedMetricError("sampling requires at least one non-self-loop edge")


def _run_chain_raw(net: HiringNetwork, cfg: SamplerConfig, chain_seed: int,
                   collect_trace: bool = False, init_pos: np.ndarray | None = None):
    if init_pos is None:
        init_pos = (initial_ranking(net).rank_of.astype(np.int32) - 1).copy()
    oip, oix, ow, iip, iix, iw = net.csr()
    return run_chain_kernel(
        net.n_nodes, oip, oix, ow, iip, iix, iw, init_pos,
        cfg.total_iterations, cfg.burn_in, cfg.sample_interval,
        chain_seed & MASK64, collect_trace,
    )


def run_chain(net: HiringNetwork, cfg: SamplerConfig, chain_seed: int):
    """Run one chain; returns (recorded rankings, best S, best rho over recordings)."""
    _check_sampleable(net)
    samples, scores, _ = _run_chain_raw(net, cfg, chain_seed)
    best = int(scores.max())
    rankings = [Ranking(row + 1) for row in samples]
    return rankings, best, score_to_rho(net, best)


def _thread_count() -> int:
    env = os.environ.get("HIERARCHYRANK_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sample_mvr(net: HiringNetwork, cfg: SamplerConfig) -> MvrResult:
    """Pool ``cfg.restarts`` chains, keep the samples attaining the best S, and
    form consensus prestige scores.

    Chain k uses seed ``cfg.seed + k``. The first chain starts from the
    out-degree ordering; later chains start from seeded random permutations,
    otherwise every restart would explore the same never-worsen basin and
    pooling could not escape local optima. Results are merged in chain order,
    so output is independent of thread scheduling; the same config always
    yields the same result.
    """
    _check_sampleable(net)
    net.csr()  # build once before the pool; chains share the read-only arrays
    seeds = [(cfg.seed + k) & MASK64 for k in range(cfg.restarts)]

    def one(item):
        k, seed = item
        init = None if k == 0 else _seeded_positions(net.n_nodes, derive_seed(seed, _INIT_STREAM))
        samples, scores, _ = _run_chain_raw(net, cfg, seed, init_pos=init)
        return samples, scores

    workers = min(_thread_count(), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, enumerate(seeds)))
    else:
        results = [one(item) for item in enumerate(seeds)]

    all_pos = np.vstack([r[0] for r in results])
    all_scores = np.concatenate([r[1] for r in results])
    best = int(all_scores.max())
    retained = all_pos[all_scores == best]

    ranks = retained.astype(np.float64) + 1.0
    prestige = ranks.mean(axis=0)
    ci = np.percentile(ranks, [2.5, 97.5], axis=0).T

    out_deg, _ = net.degree_sequences()
    order = np.lexsort((np.arange(net.n_nodes), -out_deg, prestige))
    consensus = Ranking.from_order(order)

    return MvrResult(
        samples=[Ranking(row + 1) for row in retained],
        best_score=best,
        best_rho=score_to_rho(net, best),
        prestige_score=prestige,
        ci95=ci,
        consensus=consensus,
    )


BRUTE_FORCE_MAX_NODES = 10
_CHUNK = 20_000


def brute_force_mvr(net: HiringNetwork):
    """Exhaustive MVR over all N! permutations (N <= 10).

    Returns (optimal S, its rho, every optimal Ranking) with the optima in
    lexicographic position order.
    """
    n = net.n_nodes
    if n > BRUTE_FORCE_MAX_NODES:
        raise SizeLimitError(
            f"brute force limited to {BRUTE_FORCE_MAX_NODES} nodes, got {n}"
        )
    src = net.src.astype(np.int64)
    dst = net.dst.astype(np.int64)
    w = net.weight
    best = None
    best_pos: list[np.ndarray] = []
    perms = itertools.permutations(range(n))
    while True:
        chunk = list(itertools.islice(perms, _CHUNK))
        if not chunk:
            break
        pos = np.asarray(chunk, dtype=np.int64)  # pos[p, i] = position of node i
        scores = (np.sign(pos[:, dst] - pos[:, src]) * w).sum(axis=1)
        top = int(scores.max())
        if best is None or top > best:
            best = top
            best_pos = [pos[scores == top]]
        elif top == best:
            best_pos.append(pos[scores == best])
    optima_pos = np.vstack(best_pos)
    optima = [Ranking((row + 1).astype(np.int32)) for row in optima_pos]
    return best, score_to_rho(net, best), optima
