"""Per-trial uniform streams that can be consumed in lock-step across a stack of trials."""
from __future__ import annotations

from typing import Sequence

import numpy as np


class TrialStreams:
    """One independent generator per trial, read through a shared buffer.

    ``random(size)`` returns one uniform per trial.  Draws are fetched from each
    generator in fixed-size chunks, so what trial ``i`` sees depends only on its
    own generator, never on how many other trials share the stack.
    """

    def __init__(self, generators: Sequence[np.random.Generator], chunk: int = 4096):
        if len(generators) == 0:
            raise ValueError("need at least one generator")
        self.generators = list(generators)
        self.chunk = int(chunk)
        self._buf = np.empty((len(self.generators), 0))
        self._pos = 0

    @classmethod
    def from_seeds(cls, seeds: Sequence[int], chunk: int = 4096) -> "TrialStreams":
        return cls([np.random.default_rng(int(s)) for s in seeds], chunk=chunk)

    @property
    def n_trials(self) -> int:
        return len(self.generators)

    def _refill(self):
        self._buf = np.stack([g.random(self.chunk) for g in self.generators])
        self._pos = 0

    def random(self, size=None) -> np.ndarray:
        if size is not None and tuple(np.atleast_1d(size)) != (self.n_trials,):
            raise ValueError(f"streams serve {self.n_trials} trials, asked for shape {size}")
        if self._pos >= self._buf.shape[1]:
            self._refill()
        out = self._buf[:, self._pos]
        self._pos += 1
        return out
