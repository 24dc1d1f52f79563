"""Pairwise model comparison and the four-family tournament.

The comparison statistic is Vuong's normalized log-likelihood ratio.  For
fits a and b sharing a tail of n observations with pointwise log-likelihood
difference d_i = l_a(x_i) - l_b(x_i):

    R = sum(d) / (sigma * sqrt(n)),   sigma = population std of d
    p = erfc(|R| / sqrt(2))           (two-sided normal significance)

Positive R favours a.  When the pointwise likelihoods coincide everywhere
(sigma = 0 and sum ~ 0) the models are indistinguishable: R = 0, p = 1.

``best_fit`` fits every family at a common xmin, runs all pairwise
comparisons in fixed family order, and declares as winner the family that
is never significantly beaten, breaking ties by log-likelihood.  If every
family has been beaten (a significance cycle), the highest log-likelihood
overall wins; either way the outcome is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ecotail.errors import DegenerateDataError, FitError
from ecotail.heavytail.families import FAMILIES, FitResult, fit_family, pointwise_loglik
from ecotail.heavytail.samples import SampleSet
from ecotail.heavytail.select import select_xmin

__all__ = ["ComparisonResult", "TournamentEntry", "BestFit",
           "loglikelihood_ratio", "best_fit"]


@dataclass(frozen=True)
class ComparisonResult:
    family_a: str
    family_b: str
    R: float
    p: float


def loglikelihood_ratio(sample: SampleSet, a: FitResult, b: FitResult) -> ComparisonResult:
    """Vuong comparison of two fits sharing the same sample and xmin."""
    if a.xmin != b.xmin:
        raise ValueError(f"fits disagree on xmin: {a.xmin} vs {b.xmin}")
    la = pointwise_loglik(sample, a)
    lb = pointwise_loglik(sample, b)
    diff = la - lb
    n = len(diff)
    total = float(diff.sum())
    scale = float(diff.std()) * math.sqrt(n)
    if scale < 1e-300:
        if abs(total) < 1e-9:
            r = 0.0
        else:
            r = math.inf if total > 0 else -math.inf
    else:
        r = total / scale
    p = math.erfc(abs(r) / math.sqrt(2.0)) if math.isfinite(r) else 0.0
    return ComparisonResult(a.family, b.family, float(r), float(p))


@dataclass(frozen=True)
class TournamentEntry:
    family: str
    fit: FitResult
    beaten_by: tuple


@dataclass(frozen=True)
class BestFit:
    xmin: float
    significance: float
    entries: tuple  # TournamentEntry, winner first
    comparisons: tuple
    failures: dict  # family -> reason it could not be fitted

    @property
    def winner(self) -> str:
        return self.entries[0].family

    @property
    def fits(self) -> dict:
        return {e.family: e.fit for e in self.entries}


def best_fit(sample: SampleSet, xmin: float | None = None,
             significance: float = 0.1, families=FAMILIES) -> BestFit:
    """Fit all families at a common xmin and rank them by tournament.

    xmin defaults to KS selection (:func:`select_xmin`); pass a value to pin
    it (e.g. the sample minimum for a full-support fit).  Families that fail
    to fit (degenerate tails, non-convergence) are recorded in ``failures``
    and sit out the tournament; if none fits, DegenerateDataError is raised
    listing the per-family causes.
    """
    for fam in families:
        if fam not in FAMILIES:
            raise ValueError(f"unknown family: {fam!r}")
    if xmin is None:
        xmin = select_xmin(sample)
    fits: dict = {}
    failures: dict = {}
    for fam in FAMILIES:
        if fam not in families:
            continue
        try:
            fits[fam] = fit_family(sample, fam, xmin)
        except (DegenerateDataError, FitError) as exc:
            failures[fam] = str(exc)
    if not fits:
        causes = "; ".join(f"{fam}: {msg}" for fam, msg in failures.items())
        raise DegenerateDataError(f"no family could be fitted at xmin={xmin:g} ({causes})")
    order = [f for f in FAMILIES if f in fits]
    comparisons = []
    beaten: dict = {f: [] for f in order}
    for i, fam_a in enumerate(order):
        for fam_b in order[i + 1:]:
            comp = loglikelihood_ratio(sample, fits[fam_a], fits[fam_b])
            comparisons.append(comp)
            if comp.p < significance and comp.R != 0.0:
                if comp.R > 0:
                    beaten[fam_b].append(fam_a)
                else:
                    beaten[fam_a].append(fam_b)

    def rank_key(fam):
        return (1 if beaten[fam] else 0, -fits[fam].loglik, FAMILIES.index(fam))

    ranked = sorted(order, key=rank_key)
    entries = tuple(TournamentEntry(f, fits[f], tuple(beaten[f])) for f in ranked)
    return BestFit(float(xmin), float(significance), entries,
                   tuple(comparisons), dict(failures))
