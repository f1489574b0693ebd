"""Reproducible random streams."""

import math

import numpy as np
from numpy.typing import NDArray

from wlandelay.core.exceptions import DomainError

_BLOCK = 4096


class RngStream:
    """Random stream identified by (master_seed, stream_id).

    Streams are spawned from one ``numpy.random.SeedSequence`` per master seed, so
    equal identifiers give equal sequences and distinct stream ids give
    independent ones. Scalar uniforms are served from pre-drawn blocks.
    """

    def __init__(self, master_seed: int, stream_id: int = 0):
        if master_seed < 0 or stream_id < 0:
            raise DomainError("seed and stream id must be nonnegative")
        self.master_seed = master_seed
        self.stream_id = stream_id
        seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(seq))
        self._block: list[float] = []
        self._pos = 0

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def uniform(self) -> float:
        """Uniform sample on [0, 1)."""
        if self._pos >= len(self._block):
            self._block = self.generator.random(_BLOCK).tolist()
            self._pos = 0
        u = self._block[self._pos]
        self._pos += 1
        return u

    def exponential(self, mean: float) -> float:
        """Exponential sample with the given mean."""
        # 1 - U lies in (0, 1]
        return -math.log(1.0 - self.uniform()) * mean

    def integer_below(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return min(int(self.uniform() * high), high - 1)

    def choice_index(self, cumulative: list[float]) -> int:
        """Index drawn from a discrete distribution given by its cumulative sums."""
        u = self.uniform() * cumulative[-1]
        for index, edge in enumerate(cumulative):
            if u < edge:
                return index
        return len(cumulative) - 1

    def multinomial(self, count: int, probabilities: list[float]) -> list[int]:
        """Split count draws over categories."""
        return self.generator.multinomial(count, probabilities).tolist()

    def poisson(self, mean: float) -> int:
        """Poisson sample."""
        return int(self.generator.poisson(mean))


def sample_exponential(
    stream: RngStream, rate: float, size: int | None = None
) -> float | NDArray[np.float64]:
    """Inverse-CDF exponential sample(s) -ln(U)/rate."""
    if not rate > 0:
        raise DomainError(f"exponential rate must be > 0, got {rate}")
    if size is None:
        return stream.exponential(1.0 / rate)
    u = 1.0 - stream.generator.random(size)
    return -np.log(u) / rate
