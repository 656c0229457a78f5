"""Uniformly sampled time series container."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled real-valued series.

    ``meta`` records provenance (generator name, parameters, seed) so that
    an identical series can be regenerated bit-for-bit.
    """

    values: np.ndarray
    dt: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("values must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must all be finite")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def head(self, n: int) -> "TimeSeries":
        """Prefix window x[0..n], keeping dt and provenance."""
        if not 1 <= n <= self.n:
            raise ValueError(f"window {n} outside [1, {self.n}]")
        meta = dict(self.meta, window=n)
        return TimeSeries(self.values[:n], dt=self.dt, meta=meta)
