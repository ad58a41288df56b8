"""Seeded, stream-splittable random number generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Identity of one reproducible random stream.

    Streams with the same seed and different ids are statistically
    independent, so parallel workers can each own one without
    coordination; a given (seed, stream_id) always reproduces the same
    draw sequence.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((int(self.seed), int(self.stream_id))))
        )


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for the given seed and stream index."""
    return RngStream(seed, stream_id).generator()


def as_generator(rng) -> np.random.Generator:
    """Accept either an RngStream or a ready generator.

    An RngStream is opened fresh, so passing the same stream twice repeats
    the draws; pass a generator when state should carry across calls.
    """
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")
