"""Reproducible random number streams.

Streams are backed by numpy's counter-based Philox generator keyed through
``SeedSequence`` spawn keys, so distinct ``(seed, stream_id)`` pairs give
statistically independent, non-overlapping streams and the mapping from
(seed, stream_id, draw index) to output is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Identifier of one reproducible random stream.

    ``derive`` builds child streams (used for worker shards and for
    independent draw sequences inside one operation); children with
    distinct keys never overlap with each other or with the parent.
    """

    seed: int
    stream_id: int = 0
    subkey: tuple = field(default=())

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(
            self.seed, spawn_key=(self.stream_id, *self.subkey)
        )
        return np.random.Generator(np.random.Philox(ss))

    def derive(self, *key: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.subkey + key)
