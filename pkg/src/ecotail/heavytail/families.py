"""Maximum-likelihood tail fits for four candidate families.

Each family is fitted to the sample values at or above a threshold xmin, in
either discrete (integer support) or continuous form:

* power_law:             p(x) ~ x^-alpha,                    alpha > 1
* truncated_power_law:   p(x) ~ x^-alpha * exp(-lambda x),   alpha real, lambda > 0
* lognormal:             p(x) ~ (1/x) exp(-(ln x - mu)^2 / (2 sigma^2)), sigma > 0
* exponential:           p(x) ~ exp(-lambda x),              lambda > 0

All densities are normalized over [xmin, inf) (continuous) or over the
integers {xmin, xmin+1, ...} (discrete).  Discrete normalizers with no
closed form are evaluated as an explicit partial sum plus an
Euler-Maclaurin tail (integral + f/2 - f'/12), which is accurate to close
to machine precision for these smooth, eventually-decreasing summands.

Where the MLE has a closed form it is used directly; otherwise the
likelihood is maximized with a bounded scalar search (one parameter) or
Nelder-Mead (two parameters), both deterministic.  The truncated power law
additionally evaluates the boundary candidate (alpha_hat_PL, lambda ~ 0) so
its likelihood can never fall below the nested pure power law's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import optimize, special

from ecotail.errors import DegenerateDataError, FitError
from ecotail.heavytail.samples import SampleSet

__all__ = ["FAMILIES", "FitResult", "fit_family", "fit_power_law",
           "fit_truncated_power_law", "fit_lognormal", "fit_exponential",
           "pointwise_loglik"]

FAMILIES = ("power_law", "truncated_power_law", "lognormal", "exponential")

_EM_HEAD = 2048          # explicit terms before the Euler-Maclaurin tail
_ALPHA_MAX = 64.0        # search bound for discrete power-law exponents
_LAMBDA_FLOOR = 1e-12    # "effectively zero" decay rate for the TPL boundary
_NM_OPTIONS = {"xatol": 1e-8, "fatol": 1e-10, "maxfev": 10000}


@dataclass(frozen=True)
class FitResult:
    """A fitted family: parameters, log-likelihood and KS distance on the tail."""

    family: str
    kind: str
    xmin: float
    params: dict
    loglik: float
    n_tail: int
    ks_distance: float


# ---------------------------------------------------------------------------
# normalizers


def _log_zeta(alpha: float, q: float) -> float:
    """log of the Hurwitz zeta sum_{k>=q} k^-alpha, robust to underflow."""
    z = special.zeta(alpha, q)
    if np.isfinite(z) and z > 0:
        return math.log(z)
    with mpmath.workdps(30):
        return float(mpmath.log(mpmath.zeta(alpha, q)))


def _log_norm_tpl_discrete(alpha: float, lam: float, xmin: int) -> float:
    """log sum_{k>=xmin} k^-alpha exp(-lam k)."""
    k = xmin + np.arange(_EM_HEAD, dtype=np.float64)
    logf = -alpha * np.log(k) - lam * k
    mx = float(logf.max())  # interior maximum when alpha < 0
    head = float(np.exp(logf - mx).sum())
    x_cut = float(xmin + _EM_HEAD)
    log_fx = -alpha * math.log(x_cut) - lam * x_cut
    fx = math.exp(log_fx - mx)
    # integral_{x_cut}^inf x^-alpha e^(-lam x) dx = lam^(alpha-1) Gamma(1-alpha, lam*x_cut)
    with mpmath.workdps(30):
        integral = mpmath.gammainc(1.0 - alpha, a=lam * x_cut) * mpmath.power(lam, alpha - 1.0)
        tail_int = float(integral * mpmath.exp(-mx))
    fpx = fx * (-alpha / x_cut - lam)
    total = head + tail_int + fx / 2.0 - fpx / 12.0
    if not (total > 0 and math.isfinite(total)):
        raise FitError(f"truncated power-law normalizer failed at alpha={alpha}, lambda={lam}")
    return math.log(total) + mx


def _log_norm_lognormal_discrete(mu: float, sigma: float, xmin: int) -> float:
    """log sum_{k>=xmin} (1/k) exp(-(ln k - mu)^2 / (2 sigma^2))."""
    k = xmin + np.arange(_EM_HEAD, dtype=np.float64)
    logk = np.log(k)
    logf = -logk - (logk - mu) ** 2 / (2.0 * sigma**2)
    mx = float(logf.max())
    head = float(np.exp(logf - mx).sum())
    x_cut = float(xmin + _EM_HEAD)
    l_cut = math.log(x_cut)
    log_fx = -l_cut - (l_cut - mu) ** 2 / (2.0 * sigma**2)
    fx = math.exp(log_fx - mx)
    # integral_{x_cut}^inf f = sigma * sqrt(pi/2) * erfc((ln x_cut - mu) / (sigma sqrt(2)))
    z = (l_cut - mu) / sigma
    log_integral = math.log(sigma) + 0.5 * math.log(2.0 * math.pi) + special.log_ndtr(-z)
    tail_int = math.exp(log_integral - mx)
    fpx = fx * (-(1.0 + (l_cut - mu) / sigma**2) / x_cut)
    total = head + tail_int + fx / 2.0 - fpx / 12.0
    if not (total > 0 and math.isfinite(total)):
        raise FitError(f"lognormal normalizer failed at mu={mu}, sigma={sigma}")
    return math.log(total) + mx


def _log_z_tpl_continuous(alpha: float, lam: float, xmin: float) -> float:
    """log integral_xmin^inf x^-alpha exp(-lam x) dx."""
    with mpmath.workdps(30):
        g = mpmath.gammainc(1.0 - alpha, a=lam * xmin)
        if g <= 0:
            raise FitError(f"truncated power-law normalizer failed at alpha={alpha}, lambda={lam}")
        return float((alpha - 1.0) * mpmath.log(lam) + mpmath.log(g))


# ---------------------------------------------------------------------------
# pointwise log-likelihood


def _pointwise(family: str, kind: str, params: dict, xmin: float, x: np.ndarray) -> np.ndarray:
    if family == "power_law":
        a = params["alpha"]
        if kind == "discrete":
            return -a * np.log(x) - _log_zeta(a, xmin)
        return math.log(a - 1.0) - math.log(xmin) - a * np.log(x / xmin)
    if family == "truncated_power_law":
        a, lam = params["alpha"], params["lambda"]
        if kind == "discrete":
            log_z = _log_norm_tpl_discrete(a, lam, int(xmin))
        else:
            log_z = _log_z_tpl_continuous(a, lam, xmin)
        return -a * np.log(x) - lam * x - log_z
    if family == "lognormal":
        mu, sigma = params["mu"], params["sigma"]
        lx = np.log(x)
        if kind == "discrete":
            log_z = _log_norm_lognormal_discrete(mu, sigma, int(xmin))
            return -lx - (lx - mu) ** 2 / (2.0 * sigma**2) - log_z
        z0 = (math.log(xmin) - mu) / sigma
        log_survival = special.log_ndtr(-z0)
        return (-lx - math.log(sigma) - 0.5 * math.log(2.0 * math.pi)
                - (lx - mu) ** 2 / (2.0 * sigma**2) - log_survival)
    if family == "exponential":
        lam = params["lambda"]
        if kind == "discrete":
            return math.log(-math.expm1(-lam)) - lam * (x - xmin)
        return math.log(lam) - lam * (x - xmin)
    raise ValueError(f"unknown family: {family!r}")


def pointwise_loglik(sample: SampleSet, fit: FitResult) -> np.ndarray:
    """Per-observation log-likelihood of the fit on the sample's tail (ascending)."""
    x = sample.tail(fit.xmin)
    return _pointwise(fit.family, fit.kind, fit.params, fit.xmin, x)


# ---------------------------------------------------------------------------
# KS distance helpers


def _discrete_cdf_by_summation(logpmf, xmin: int, v: np.ndarray) -> np.ndarray:
    """CDF at the integer points v (ascending) by direct pmf summation."""
    vmax = int(v[-1])
    if vmax - xmin > 1_000_000_000:
        raise FitError("support too wide for discrete CDF evaluation")
    out = np.empty(len(v), dtype=np.float64)
    acc = 0.0
    lo = xmin
    j = 0
    chunk = 1_000_000
    while lo <= vmax:
        hi = min(lo + chunk - 1, vmax)
        ks = np.arange(lo, hi + 1, dtype=np.float64)
        csum = np.cumsum(np.exp(logpmf(ks)))
        while j < len(v) and v[j] <= hi:
            out[j] = acc + csum[int(v[j]) - lo]
            j += 1
        acc += float(csum[-1])
        lo = hi + 1
    return out


def _cdf_values(family: str, kind: str, params: dict, xmin: float, v: np.ndarray) -> np.ndarray:
    """Model CDF P(X <= v) for distinct tail values v (ascending)."""
    if kind == "discrete":
        xmin_i = int(xmin)
        if family == "power_law":
            a = params["alpha"]
            den = special.zeta(a, xmin_i)
            if np.isfinite(den) and den > 0:
                with np.errstate(over="ignore"):
                    return 1.0 - special.zeta(a, v + 1.0) / den
            log_den = _log_zeta(a, xmin_i)
            return 1.0 - np.array(
                [math.exp(_log_zeta(a, vi + 1.0) - log_den) for vi in v]
            )
        if family == "exponential":
            lam = params["lambda"]
            return 1.0 - np.exp(-lam * (v + 1.0 - xmin_i))
        logpmf = lambda ks: _pointwise(family, kind, params, xmin_i, ks)  # noqa: E731
        return _discrete_cdf_by_summation(logpmf, xmin_i, v)
    if family == "power_law":
        a = params["alpha"]
        return 1.0 - (v / xmin) ** (1.0 - a)
    if family == "exponential":
        lam = params["lambda"]
        return 1.0 - np.exp(-lam * (v - xmin))
    if family == "lognormal":
        mu, sigma = params["mu"], params["sigma"]
        z = (np.log(v) - mu) / sigma
        z0 = (math.log(xmin) - mu) / sigma
        s0 = special.ndtr(-z0)
        return (special.ndtr(z) - special.ndtr(z0)) / s0
    if family == "truncated_power_law":
        a, lam = params["alpha"], params["lambda"]
        with mpmath.workdps(30):
            g0 = mpmath.gammainc(1.0 - a, a=lam * xmin)
            return np.array([float(1.0 - mpmath.gammainc(1.0 - a, a=lam * vi) / g0) for vi in v])
    raise ValueError(f"unknown family: {family!r}")


def _ks_distance(family: str, kind: str, params: dict, xmin: float, tail: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance between the fit and the empirical tail."""
    n = len(tail)
    if kind == "discrete":
        uniq, counts = np.unique(tail, return_counts=True)
        ecdf = np.cumsum(counts) / n
        model = _cdf_values(family, kind, params, xmin, uniq)
        return float(np.abs(model - ecdf).max())
    uniq = np.unique(tail)
    model_u = _cdf_values(family, kind, params, xmin, uniq)
    model = model_u[np.searchsorted(uniq, tail)]
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(max(np.abs(model - lo).max(), np.abs(hi - model).max()))


# ---------------------------------------------------------------------------
# fitters


def _prepare(sample: SampleSet, xmin: float):
    if sample.kind == "discrete":
        if abs(xmin - round(xmin)) > 1e-9:
            raise ValueError(f"discrete sample requires integer xmin, got {xmin}")
        xmin = float(round(xmin))
    x = sample.tail(xmin)
    return x, xmin


def _result(sample, family, xmin, params, x) -> FitResult:
    ll = float(_pointwise(family, sample.kind, params, xmin, x).sum())
    ks = _ks_distance(family, sample.kind, params, xmin, x)
    return FitResult(family, sample.kind, float(xmin), params, ll, len(x), ks)


def fit_power_law(sample: SampleSet, xmin: float) -> FitResult:
    x, xmin = _prepare(sample, xmin)
    if np.all(x == xmin):
        raise DegenerateDataError("power law: all tail values equal xmin")
    n = len(x)
    if sample.kind == "continuous":
        alpha = 1.0 + n / float(np.log(x / xmin).sum())
    else:
        logsum = float(np.log(x).sum())

        def nll(a):
            return a * logsum + n * _log_zeta(a, xmin)

        res = optimize.minimize_scalar(
            nll, bounds=(1.0 + 1e-9, _ALPHA_MAX), method="bounded",
            options={"xatol": 1e-10, "maxiter": 1000},
        )
        alpha = float(res.x)
    return _result(sample, "power_law", xmin, {"alpha": float(alpha)}, x)


def fit_exponential(sample: SampleSet, xmin: float) -> FitResult:
    x, xmin = _prepare(sample, xmin)
    if x[0] == x[-1]:
        raise DegenerateDataError("exponential: tail has zero spread")
    m = float(x.mean()) - xmin
    if m <= 0:
        raise DegenerateDataError("exponential: mean(tail) equals xmin")
    if sample.kind == "continuous":
        lam = 1.0 / m
    else:
        # geometric MLE: e^-lam / (1 - e^-lam) = m
        lam = math.log1p(1.0 / m)
    return _result(sample, "exponential", xmin, {"lambda": float(lam)}, x)


def fit_lognormal(sample: SampleSet, xmin: float) -> FitResult:
    x, xmin = _prepare(sample, xmin)
    lx = np.log(x)
    if lx.max() - lx.min() <= 0:
        raise DegenerateDataError("lognormal: tail has zero spread")
    mu0, sigma0 = float(lx.mean()), float(lx.std())
    kind = sample.kind

    def nll(theta):
        mu, sigma = theta
        if sigma < 1e-12:
            return np.inf
        try:
            return -float(_pointwise("lognormal", kind, {"mu": mu, "sigma": sigma}, xmin, x).sum())
        except (FitError, OverflowError):
            return np.inf

    res = optimize.minimize(nll, x0=np.array([mu0, sigma0]),
                            method="Nelder-Mead", options=_NM_OPTIONS)
    mu, sigma = res.x
    if not np.isfinite(nll(res.x)):
        raise FitError("lognormal fit did not converge")
    return _result(sample, "lognormal", xmin, {"mu": float(mu), "sigma": float(sigma)}, x)


def fit_truncated_power_law(sample: SampleSet, xmin: float) -> FitResult:
    x, xmin = _prepare(sample, xmin)
    if np.all(x == xmin):
        raise DegenerateDataError("truncated power law: all tail values equal xmin")
    pl_alpha = fit_power_law(sample, xmin).params["alpha"]
    lam0 = 1.0 / float(x.mean())
    kind = sample.kind

    # alpha is unconstrained here (the exponential factor normalizes the
    # density for any exponent); only lambda > 0 is required.  Optimizing
    # log(lambda) keeps that boundary out of the simplex's reach -- a hard
    # wall makes Nelder-Mead terminate early with lambda half-converged.
    def nll(theta):
        a = float(theta[0])
        lam = float(np.exp(theta[1]))
        if lam < _LAMBDA_FLOOR:
            return np.inf
        try:
            val = float(_pointwise("truncated_power_law", kind,
                                   {"alpha": a, "lambda": lam}, xmin, x).sum())
        except (FitError, OverflowError):
            return np.inf
        return -val if np.isfinite(val) else np.inf

    candidates = []
    for a0, l0 in ((pl_alpha, lam0), (pl_alpha, max(lam0 * 1e-3, 1e-9))):
        res = optimize.minimize(nll, x0=np.array([a0, np.log(l0)]),
                                method="Nelder-Mead", options=_NM_OPTIONS)
        if np.isfinite(res.fun):
            candidates.append((float(res.fun),
                               (float(res.x[0]), float(np.exp(res.x[1])))))
    # Boundary candidate: the nested pure power law with a vanishing cutoff.
    boundary = (max(pl_alpha, 1.0 + 2e-9), _LAMBDA_FLOOR)
    f_boundary = nll(np.array(boundary))
    if np.isfinite(f_boundary):
        candidates.append((float(f_boundary), boundary))
    if not candidates:
        raise FitError("truncated power-law fit did not converge")
    _, (alpha, lam) = min(candidates, key=lambda c: c[0])
    return _result(sample, "truncated_power_law", xmin,
                   {"alpha": float(alpha), "lambda": float(lam)}, x)


_FITTERS = {
    "power_law": fit_power_law,
    "truncated_power_law": fit_truncated_power_law,
    "lognormal": fit_lognormal,
    "exponential": fit_exponential,
}


def fit_family(sample: SampleSet, family: str, xmin: float) -> FitResult:
    """Fit one family by name; see the module docstring for the catalogue."""
    try:
        fitter = _FITTERS[family]
    except KeyError:
        raise ValueError(f"unknown family: {family!r}") from None
    return fitter(sample, xmin)
