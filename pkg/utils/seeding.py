"""Counter-based random streams.

A stream is addressed by (master seed, stream name, counters...). The same address always
yields the same generator, whatever order or thread requests it.
"""

import zlib
from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator, None]


def _stream_id(stream: str) -> int:
    return zlib.crc32(stream.encode("utf-8"))


def stream_seed(master_seed: int, stream: str, *counters: int) -> np.random.SeedSequence:
    """SeedSequence for one addressed stream."""
    return np.random.SeedSequence(
        int(master_seed), spawn_key=(_stream_id(stream), *(int(c) for c in counters))
    )


def stream_rng(master_seed: int, stream: str, *counters: int) -> np.random.Generator:
    """Generator for one addressed stream."""
    return np.random.default_rng(stream_seed(master_seed, stream, *counters))


def sample_seed(master_seed: int, sample_index: int) -> int:
    """Integer seed recorded next to every per-sample row."""
    return int(stream_seed(master_seed, "sample", sample_index).generate_state(1, dtype=np.uint32)[0])


def as_rng(seed: SeedLike) -> np.random.Generator:
    """Accept an int seed, an existing generator, or None."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
