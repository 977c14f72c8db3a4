"""Synthetic hiring networks with a planted prestige hierarchy.

Ground truth for recovery and significance tests: every unit edge picks a
producer (Zipf-skewed so out-degrees look like real faculty production) and
goes to a strictly lower-ranked employer with probability p_down, else to a
strictly higher-ranked one. Self-loops are never generated, so the downward
fraction against the planted ranking concentrates at p_down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mvr import Ranking
from .network import HiringNetwork, NodeRegistry


@dataclass(frozen=True)
class PlantedConfig:
    n_nodes: int
    n_edges: int
    p_down: float = 0.9
    producer_skew: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be >= 2")
        if self.n_edges < 1:
            raise ValueError("n_edges must be >= 1")
        if not 0.5 <= self.p_down <= 1.0:
            raise ValueError("p_down must lie in [0.5, 1]")
        if self.producer_skew < 0:
            raise ValueError("producer_skew must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def node_names(n: int) -> list[str]:
    # zero-padded so lexicographic registry order equals planted rank order
    width = max(4, len(str(n)))
    return [f"inst_{i + 1:0{width}d}" for i in range(n)]


def generate_planted(cfg: PlantedConfig) -> tuple[HiringNetwork, Ranking]:
    """Generate a network plus its planted ranking (identity over node ids).

    The edge direction is drawn first and always honored, so the downward
    count is exactly Binomial(E, p_down): a downward edge draws its producer
    among nodes with someone ranked below them (everyone but the bottom),
    an upward edge among nodes with someone above (everyone but the top).
    """
    n, e = cfg.n_nodes, cfg.n_edges
    rng = np.random.default_rng(cfg.seed)

    weights = np.arange(1, n + 1, dtype=np.float64) ** -cfg.producer_skew
    go_down = rng.random(e) < cfg.p_down
    idx_down = np.flatnonzero(go_down)
    idx_up = np.flatnonzero(~go_down)

    producers = np.empty(e, dtype=np.int64)
    if len(idx_down):
        w = weights[: n - 1]
        producers[idx_down] = rng.choice(n - 1, size=len(idx_down), p=w / w.sum())
    if len(idx_up):
        w = weights[1:]
        producers[idx_up] = 1 + rng.choice(n - 1, size=len(idx_up), p=w / w.sum())

    u = rng.random(e)
    below = n - 1 - producers            # nodes ranked strictly below each producer
    above = producers                    # nodes ranked strictly above
    down_emp = producers + 1 + (u * below).astype(np.int64)
    up_emp = (u * above).astype(np.int64)
    employers = np.where(go_down, down_emp, up_emp)

    registry = NodeRegistry(node_names(n))
    net = HiringNetwork.from_unit_edges(registry, producers, employers)
    truth = Ranking(np.arange(1, n + 1, dtype=np.int32))
    return net, truth
