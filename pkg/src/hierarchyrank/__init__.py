"""Prestige hierarchies in weighted directed hiring networks.

Builds the institution-level hiring network from person-level records,
samples minimum violation rankings with a zero-temperature Metropolis chain,
validates hierarchy strength against degree-preserving null models, and
quantifies inequality (Gini/Lorenz) and mobility (rank changes, KS).
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .errors import (
    DegenerateTestError,
    EmptyNetworkError,
    HierarchyRankError,
    RecordFormatError,
    SizeLimitError,
    UndefinedMetricError,
)
from .metrics import (
    LorenzCurve,
    RankChangeSample,
    gini,
    gini_from_lorenz,
    ks_two_sample,
    lorenz,
    relative_rank_change,
    upward_fraction,
)
from .mvr import (
    MvrResult,
    Ranking,
    SamplerConfig,
    brute_force_mvr,
    delta_swap,
    initial_ranking,
    net_score,
    rho,
    run_chain,
    sample_mvr,
)
from .network import (
    HiringNetwork,
    HiringRecord,
    NetworkFilter,
    NodeRegistry,
    build_network,
    degree_sequences,
    load_edge_csv,
    load_records,
    load_whitelist,
    write_edge_csv,
)
from .nullmodel import (
    RhoDistribution,
    SignificanceReport,
    bootstrap_rho,
    degree_preserving_rewire,
    null_rho_distribution,
    significance,
)
from .synth import PlantedConfig, generate_planted

__all__ = [
    "__version__",
    "backend_name",
    "HierarchyRankError",
    "RecordFormatError",
    "EmptyNetworkError",
    "UndefinedMetricError",
    "SizeLimitError",
    "DegenerateTestError",
    "HiringRecord",
    "NetworkFilter",
    "NodeRegistry",
    "HiringNetwork",
    "build_network",
    "degree_sequences",
    "load_records",
    "load_whitelist",
    "load_edge_csv",
    "write_edge_csv",
    "Ranking",
    "SamplerConfig",
    "MvrResult",
    "net_score",
    "rho",
    "delta_swap",
    "initial_ranking",
    "run_chain",
    "sample_mvr",
    "brute_force_mvr",
    "RhoDistribution",
    "SignificanceReport",
    "degree_preserving_rewire",
    "bootstrap_rho",
    "null_rho_distribution",
    "significance",
    "gini",
    "lorenz",
    "gini_from_lorenz",
    "LorenzCurve",
    "RankChangeSample",
    "relative_rank_change",
    "upward_fraction",
    "ks_two_sample",
    "PlantedConfig",
    "generate_planted",
]
