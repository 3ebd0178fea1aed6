"""Reproducible random streams derived from a single root seed.

Every source of randomness in the toolkit draws from a generator obtained
through :func:`derive_rng` so that one recorded root seed reproduces a whole
run, no matter which subset of operations executes.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream_key(name: str, index: int = 0) -> int:
    """Stable 32-bit key for a named substream."""
    return (zlib.crc32(name.encode("utf-8")) ^ (index * 0x9E3779B9)) & 0xFFFFFFFF


def derive_rng(root_seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Generator for substream ``name``/``index`` of ``root_seed``.

    Distinct (name, index) pairs give statistically independent streams;
    identical arguments always give the identical stream.
    """
    ss = np.random.SeedSequence([int(root_seed) & 0xFFFFFFFFFFFFFFFF, stream_key(name, index)])
    return np.random.default_rng(ss)


def derive_int_seed(root_seed: int, name: str, index: int = 0) -> int:
    """A 32-bit integer seed for kernels that take a plain seed value."""
    ss = np.random.SeedSequence([int(root_seed) & 0xFFFFFFFFFFFFFFFF, stream_key(name, index)])
    return int(ss.generate_state(1, dtype=np.uint32)[0])
