"""Tail threshold selection by Kolmogorov-Smirnov minimization.

Standard procedure: every distinct sample value (except the maximum, whose
tail cannot be fitted) is a candidate xmin; a power law is fitted to the
tail above each candidate and the candidate minimizing the KS distance
between the fitted and empirical tail CDFs wins.  Ties go to the smallest
candidate, so the result is deterministic.
"""

from __future__ import annotations

import numpy as np

from ecotail.errors import DegenerateDataError, FitError
from ecotail.heavytail.families import fit_power_law
from ecotail.heavytail.samples import SampleSet

__all__ = ["select_xmin"]


def select_xmin(sample: SampleSet) -> float:
    """xmin over distinct sample values minimizing the power-law KS distance."""
    uniq = np.unique(sample.values)
    if len(uniq) < 2:
        raise DegenerateDataError("all values identical; no fittable tail")
    best_d = np.inf
    best_xmin = None
    for candidate in uniq[:-1]:
        try:
            fit = fit_power_law(sample, float(candidate))
        except (DegenerateDataError, FitError):
            continue
        if fit.ks_distance < best_d:
            best_d = fit.ks_distance
            best_xmin = fit.xmin
    if best_xmin is None:
        raise DegenerateDataError("no candidate xmin admits a power-law fit")
    return float(best_xmin)
