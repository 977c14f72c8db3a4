"""Deterministic seed derivation for replicate and resampling streams.

Chains inside one sampler run use ``cfg.seed + chain_index`` directly; the
helpers here derive well-separated streams for bootstrap and null-model
replicates so that nested randomness never aliases.
"""

MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit avalanche."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Fold stream/replicate indices into ``base``, avalanching at each step."""
    s = base & MASK64
    for i in indices:
        s = mix64((s + 0x9E3779B97F4A7C15 * (int(i) + 1)) & MASK64)
    return s
