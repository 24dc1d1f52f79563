from ecotail.heavytail.compare import (
    BestFit,
    ComparisonResult,
    TournamentEntry,
    best_fit,
    loglikelihood_ratio,
)
from ecotail.heavytail.families import (
    FAMILIES,
    FitResult,
    fit_exponential,
    fit_family,
    fit_lognormal,
    fit_power_law,
    fit_truncated_power_law,
    pointwise_loglik,
)
from ecotail.heavytail.samples import SampleSet, ccdf
from ecotail.heavytail.select import select_xmin

__all__ = [
    "FAMILIES",
    "SampleSet",
    "ccdf",
    "FitResult",
    "fit_family",
    "fit_power_law",
    "fit_truncated_power_law",
    "fit_lognormal",
    "fit_exponential",
    "pointwise_loglik",
    "select_xmin",
    "ComparisonResult",
    "TournamentEntry",
    "BestFit",
    "loglikelihood_ratio",
    "best_fit",
]
