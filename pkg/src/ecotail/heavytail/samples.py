"""Sample containers for tail fitting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ecotail.errors import DegenerateDataError

__all__ = ["SampleSet", "ccdf"]


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Positive observations plus a support declaration.

    ``kind`` is "discrete" (integer counts: commits, importers, ...) or
    "continuous".  Discrete values must be integral; everything must be
    positive and finite.
    """

    values: np.ndarray
    kind: str = "discrete"
    _sorted: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("discrete", "continuous"):
            raise ValueError(f"unknown sample kind: {self.kind!r}")
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if len(vals) == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sample contains non-finite values")
        if vals.min() <= 0:
            raise ValueError("sample values must be positive")
        if self.kind == "discrete":
            rounded = np.rint(vals)
            if not np.allclose(vals, rounded, rtol=0, atol=1e-9):
                raise ValueError("discrete sample contains non-integral values")
            vals = rounded
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_sorted", np.sort(vals))

    @property
    def n(self) -> int:
        return len(self.values)

    def tail(self, xmin: float) -> np.ndarray:
        """Values >= xmin, ascending.  Fewer than two such values is an error."""
        if not np.isfinite(xmin) or xmin <= 0:
            raise ValueError(f"xmin must be positive and finite, got {xmin}")
        start = np.searchsorted(self._sorted, xmin, side="left")
        out = self._sorted[start:]
        if len(out) < 2:
            raise DegenerateDataError(
                f"only {len(out)} value(s) at or above xmin={xmin:g}; need at least 2"
            )
        return out


def ccdf(sample: SampleSet):
    """Empirical complementary CDF.

    Returns (x, frac) arrays with x the distinct values ascending and frac
    the fraction of observations >= x.  frac starts at 1.0 and is
    non-increasing.
    """
    uniq, counts = np.unique(sample.values, return_counts=True)
    below = np.concatenate(([0], np.cumsum(counts)[:-1]))
    frac = 1.0 - below / sample.n
    return uniq, frac
