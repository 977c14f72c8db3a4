"""Shared test helpers: tiny network builders and synthetic record fixtures."""

from __future__ import annotations

import numpy as np

from hierarchyrank import HiringNetwork, HiringRecord
from hierarchyrank.network import write_records_csv


def net_from_edges(edges):
    """Build a network from (src, dst, weight) triples with string names."""
    return HiringNetwork.from_edges(edges)


def letter_net(weighted_pairs):
    """{(i, j): w} over integer-labeled nodes 1..k -> network with names n01, n02, ..."""
    edges = [(f"n{i:02d}", f"n{j:02d}", w) for (i, j), w in weighted_pairs.items()]
    return HiringNetwork.from_edges(edges)


def random_network(rng: np.random.Generator, n_min=3, n_max=20, e_max=40,
                   w_max=3, allow_self=True):
    """Random weighted directed network with at least one non-self-loop edge."""
    n = int(rng.integers(n_min, n_max + 1))
    n_edges = int(rng.integers(1, e_max + 1))
    counts = {}
    for _ in range(n_edges):
        i = int(rng.integers(0, n))
        j = int(rng.integers(0, n)) if allow_self else int((i + 1 + rng.integers(0, n - 1)) % n)
        w = int(rng.integers(1, w_max + 1))
        counts[(i, j)] = counts.get((i, j), 0) + w
    if all(i == j for i, j in counts):
        i = int(rng.integers(0, n))
        j = (i + 1) % n
        counts[(i, j)] = counts.get((i, j), 0) + 1
    return letter_net(counts)


def random_ranking(rng: np.random.Generator, n: int):
    from hierarchyrank import Ranking

    return Ranking.from_order(rng.permutation(n))


def records_from_network(net: HiringNetwork, year=2005, discipline="synthetic",
                         year_by_edge=None):
    """One HiringRecord per unit edge of the network."""
    usrc, udst = net.unit_edges()
    names = net.registry.names
    records = []
    for k, (i, j) in enumerate(zip(usrc, udst)):
        y = year if year_by_edge is None else year_by_edge(k)
        records.append(
            HiringRecord(f"p{k + 1:05d}", names[i], y, discipline, names[j])
        )
    return records


def write_records(path, records) -> str:
    write_records_csv(records, str(path))
    return str(path)
