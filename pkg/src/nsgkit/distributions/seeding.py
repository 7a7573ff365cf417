"""Seed streams: reproducible, independent numpy generators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SeedStream:
    """A (seed, stream_index) pair naming one independent random stream.

    The generator is built from ``SeedSequence(seed, spawn_key=(stream_index,))``
    so equal pairs give bit-identical draws and distinct stream indices give
    statistically independent streams.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_index"):
            value = getattr(self, name)
            if int(value) != value or not (0 <= value <= _UINT64_MAX):
                raise ValidationError(f"SeedStream.{name} must be a 64-bit unsigned integer, got {value!r}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream_index),))
        return np.random.Generator(np.random.PCG64(seq))

    def batch_generator(self, batch: int) -> np.random.Generator:
        """Generator for trial batch ``batch`` nested under this stream."""
        seq = np.random.SeedSequence(
            entropy=int(self.seed), spawn_key=(int(self.stream_index), int(batch))
        )
        return np.random.Generator(np.random.PCG64(seq))
