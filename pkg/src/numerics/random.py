"""Seeded Gaussian sampling.

Every stream is a Philox counter-based generator keyed by a base seed and a
spawn key, so a (seed, key) pair always reproduces the same draws regardless
of how many other streams exist or in which order they are consumed.
"""

from __future__ import annotations

import numpy as np

from .linalg import DenseVector

SEED_MASK = (1 << 64) - 1


class RngStream:
    """Single-owner stream of standard normal draws.

    Concurrent use needs one stream per worker, derived with :meth:`child`.

    Attributes:
        seed: 64-bit base seed.
        spawn_key: Path of child indices that identifies this stream.
        draws: Number of scalars drawn so far.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()) -> None:
        self.seed = int(seed) & SEED_MASK
        self.spawn_key = tuple(int(k) for k in spawn_key)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self._generator = np.random.Generator(np.random.Philox(sequence))
        self.draws = 0

    def child(self, *key: int) -> RngStream:
        """Derive an independent stream for (seed, *spawn_key, *key)."""
        return RngStream(self.seed, self.spawn_key + key)

    def standard_normal(self, shape: int | tuple[int, ...]) -> np.ndarray:
        """Draw an array of i.i.d. N(0, 1) values and advance the stream."""
        out = self._generator.standard_normal(shape)
        self.draws += int(out.size)
        return out

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, spawn_key={self.spawn_key}, draws={self.draws})"


def sample_std_normal(rng: RngStream, length: int) -> DenseVector:
    """Draw a vector of ``length`` i.i.d. standard normal values.

    A zero length yields an empty vector (unconstrained players have no
    dual block to perturb).
    """
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    return rng.standard_normal(length)
