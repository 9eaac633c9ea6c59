"""Reproducible Monte Carlo plumbing.

Every stochastic computation splits its samples into fixed-size chunks.  Chunk
``c`` draws from a Philox generator keyed by ``(seed, c)``, so a result depends
only on the seed and the chunk plan, never on how chunks are scheduled.
Per-chunk statistics are merged with the pairwise (Chan et al.) update.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = ["McConfig", "substream", "chunk_sizes", "RunningStats", "McEstimate", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 1 << 16


def substream(seed: int, chunk: int) -> np.random.Generator:
    """Independent generator for chunk ``chunk`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def chunk_sizes(samples: int, chunk: int = DEFAULT_CHUNK) -> Iterator[tuple[int, int]]:
    """Yield ``(chunk_index, size)`` pairs covering ``samples`` draws."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    idx = 0
    left = samples
    while left > 0:
        size = min(chunk, left)
        yield idx, size
        idx += 1
        left -= size


@dataclass(frozen=True)
class McConfig:
    """Sample count and seed for one Monte Carlo estimate."""

    samples: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_err: float
    samples: int

    def within(self, value: float, n_se: float = 4.0, floor: float = 0.0) -> bool:
        return abs(self.mean - value) <= n_se * self.std_err + floor


class RunningStats:
    """Mean and variance of a stream of (possibly vector-valued) observations."""

    def __init__(self, shape=()):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    def add_batch(self, values: np.ndarray) -> None:
        """Merge a batch; the first axis indexes observations."""
        values = np.asarray(values, dtype=float)
        nb = values.shape[0]
        if nb == 0:
            return
        mb = values.mean(axis=0)
        m2b = ((values - mb) ** 2).sum(axis=0)
        self._merge(nb, mb, m2b)

    def merge(self, other: "RunningStats") -> None:
        self._merge(other.count, other.mean, other.m2)

    def _merge(self, nb, mb, m2b) -> None:
        na = self.count
        n = na + nb
        delta = mb - self.mean
        self.mean = self.mean + delta * (nb / n)
        self.m2 = self.m2 + m2b + delta**2 * (na * nb / n)
        self.count = n

    @property
    def variance(self):
        return self.m2 / (self.count - 1) if self.count > 1 else np.zeros_like(self.m2)

    @property
    def std_err(self):
        return np.sqrt(self.variance / max(self.count, 1))

    def estimate(self) -> McEstimate:
        return McEstimate(float(self.mean), float(self.std_err), self.count)
