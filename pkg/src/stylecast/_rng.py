"""Portable random streams.

All randomness in stylecast comes from NumPy's PCG64 bit generator (PCG-XSL-RR
128/64). Only its raw 64-bit output is consumed; conversion to doubles is done
here with the usual 53-bit construction so results do not depend on how a
given NumPy release implements ``Generator.random`` or ``integers``.
"""
from __future__ import annotations

import numpy as np

_TWO_POW_64 = 1 << 64


class Stream:
    def __init__(self, seed: int):
        self.seed = int(seed) % _TWO_POW_64
        self._bits = np.random.PCG64(self.seed)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1)."""
        raw = self._bits.random_raw(n)
        return (np.asarray(raw, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)

    def below(self, bound: int, n: int) -> np.ndarray:
        """``n`` integers in [0, bound)."""
        out = np.floor(self.uniform(n) * bound).astype(np.int64)
        return np.minimum(out, bound - 1)
