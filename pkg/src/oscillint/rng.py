"""Labelled sub-streams of one counter-based generator.

Every randomized routine asks for ``stream(seed, "label")``; the label is
hashed into the seed sequence's spawn key, so adding a new consumer never
shifts the numbers drawn by an existing one.
"""

from __future__ import annotations

import zlib

import numpy as np

DEFAULT_SEED = 20240601


def stream(seed: int, label: str) -> np.random.Generator:
    key = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence(int(seed), spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))
