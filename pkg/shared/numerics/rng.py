"""
Random Streams
Counter-based random number streams keyed by (seed, stream_id, key).

Each stream wraps a Philox generator seeded from a numpy SeedSequence,
so identical keys reproduce identical draws and distinct keys give
statistically independent streams.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr


class RngStream(BaseModel):
    """
    Reproducible random stream.

    The key fields are immutable. The underlying generator is created
    lazily and advances only when its owner draws from it; derived
    streams from child() never touch the parent's state.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(
        ...,
        description="64-bit master seed",
        ge=0,
        lt=2**64
    )

    stream_id: int = Field(
        0,
        description="64-bit stream counter",
        ge=0,
        lt=2**64
    )

    key: Tuple[int, ...] = Field(
        default=(),
        description="Extra spawn key for derived sub-streams"
    )

    _generator: np.random.Generator = PrivateAttr(default=None)

    @property
    def generator(self) -> np.random.Generator:
        """The numpy generator backing this stream (created on first use)."""
        if self._generator is None:
            seq = np.random.SeedSequence(
                entropy=self.seed,
                spawn_key=(self.stream_id,) + tuple(self.key)
            )
            self._generator = np.random.Generator(np.random.Philox(seq))
        return self._generator

    def child(self, *keys: int) -> "RngStream":
        """
        Derive an independent sub-stream.

        Args:
            keys: Non-negative integers appended to this stream's key

        Returns:
            New RngStream with a fresh generator
        """
        return RngStream(
            seed=self.seed,
            stream_id=self.stream_id,
            key=tuple(self.key) + tuple(int(k) for k in keys)
        )

    def int_seed(self) -> int:
        """Draw-free 32-bit seed derived from the key (for libraries that take an int)."""
        seq = np.random.SeedSequence(
            entropy=self.seed,
            spawn_key=(self.stream_id,) + tuple(self.key)
        )
        return int(seq.generate_state(1)[0])
