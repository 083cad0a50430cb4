"""Reproducible Bernoulli photon grids from a counter-based generator.

The estimator's determinism contract requires that grid ``i`` depend only on
``(seed, i)`` and the grid shape, never on chunk boundaries or which worker
draws it.  Philox provides random access into its stream in increments of
4-word counter blocks, so each sample is padded to a whole number of blocks:
sample ``i`` owns blocks ``[i*B, (i+1)*B)`` where ``B = ceil(cells/4)``.
Jumping to any sample is then an ``advance`` call, and any partition of the
sample range yields bit-identical grids.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .config import SetupConfig

# Domain separation labels mixed into the Philox key next to the user seed.
GRID_STREAM_LABEL = 0x67726964  # "grid"
M_SCAN_LABEL = 0x6d7363616e  # "mscan"


def derive_seed(seed: int, label: int, index: int) -> int:
    """A 64-bit sub-seed for an independent stream, e.g. one per scanned m."""
    return int(SeedSequence(entropy=[seed, label, index]).generate_state(1, np.uint64)[0])


class GridStream:
    """Addressable stream of occupancy grids for one config.

    ``chunk(start, count)`` returns grids ``start .. start+count-1`` as a
    boolean array of shape ``(count, F, T)``; any chunking of the index
    range produces the same grids.
    """

    def __init__(self, config: SetupConfig, seed: int):
        self.shape = config.grid_shape
        self.p = config.p
        self.seed = seed
        self._cells = self.shape[0] * self.shape[1]
        self._blocks_per_sample = -(-self._cells // 4)  # 4 draws per counter block
        self._key = SeedSequence(entropy=[seed, GRID_STREAM_LABEL]).generate_state(2, np.uint64)

    def chunk(self, start: int, count: int) -> np.ndarray:
        if start < 0 or count < 0:
            raise ValueError(f"invalid chunk [{start}, {start + count})")
        bit_gen = Philox(key=self._key)
        bit_gen.advance(start * self._blocks_per_sample)
        width = 4 * self._blocks_per_sample
        uniforms = Generator(bit_gen).random((count, width))
        occupied = uniforms[:, : self._cells] < self.p
        return occupied.reshape(count, *self.shape)

    def grid(self, index: int) -> np.ndarray:
        """Single sample, shape (F, T)."""
        return self.chunk(index, 1)[0]


def sample_grid(config: SetupConfig, rng_stream: GridStream, index: int = 0) -> np.ndarray:
    """One occupancy grid; cell (f, t) holds a photon with probability p."""
    if rng_stream.shape != config.grid_shape:
        raise ValueError(
            f"stream built for grid {rng_stream.shape}, config needs {config.grid_shape}"
        )
    return rng_stream.grid(index)
