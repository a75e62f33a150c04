"""
Distribution primitives — descriptive statistics, Gaussian and skew-normal
densities and fits, Gaussian intersections, bracketed root finding.

Loss kernels use the unbiased (ddof=1) standard deviation; the class fits used
for cutoff inference use the population (ddof=0) one.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special
from scipy import stats as sps

from analysis.errors import (
    DegenerateInput,
    DegenerateSample,
    FitFailed,
    InsufficientData,
    InvalidInput,
    NoConvergence,
    NoSignChange,
)

logger = logging.getLogger(__name__)

PDF_FLOOR = 1e-300
LOG_PDF_FLOOR = math.log(PDF_FLOOR)
SKEWNORM_MIN_SAMPLES = 8
# Largest |skewness| a skew-normal can reach (alpha -> infinity).
SKEWNORM_MAX_SKEW = math.sqrt(2.0) * (4.0 - math.pi) / (math.pi - 2.0) ** 1.5

_LOG_2 = math.log(2.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


# ── Domain types ───────────────────────────────────────────────────

@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    std: float
    count: int
    ddof: int = 1


@dataclass(frozen=True)
class GaussianParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInput(f"Gaussian needs finite mu and sigma > 0, got ({self.mu}, {self.sigma})")


@dataclass(frozen=True)
class SkewNormalParams:
    shape: float
    loc: float
    scale: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.shape, self.loc, self.scale)) or self.scale <= 0:
            raise InvalidInput(
                f"Skew-normal needs finite parameters and scale > 0, got "
                f"({self.shape}, {self.loc}, {self.scale})"
            )


def _as_array(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(-1)


# ── Descriptive statistics ─────────────────────────────────────────

def mean_std(values: Sequence[float], ddof: int = 1) -> DescriptiveStats:
    """Mean and standard deviation with an explicit ddof (0 = population, 1 = unbiased)."""
    arr = _as_array(values)
    if arr.size == 0:
        raise InvalidInput("mean_std needs at least one value")
    if ddof not in (0, 1):
        raise InvalidInput(f"ddof must be 0 or 1, got {ddof}")
    if ddof == 1 and arr.size < 2:
        raise DegenerateSample("Unbiased standard deviation is undefined for a single value")
    return DescriptiveStats(
        mean=float(arr.mean()),
        std=float(arr.std(ddof=ddof)),
        count=int(arr.size),
        ddof=ddof,
    )


def z_scores(values: Sequence[float], stats: DescriptiveStats, eps: float = 1e-8) -> np.ndarray:
    if eps < 0:
        raise InvalidInput("eps must be non-negative")
    return (_as_array(values) - stats.mean) / (stats.std + eps)


# ── Densities ──────────────────────────────────────────────────────

def gaussian_pdf(x, p: GaussianParams):
    return sps.norm.pdf(x, loc=p.mu, scale=p.sigma)


def skewnorm_pdf(x, p: SkewNormalParams):
    """(2/ω)·φ(z)·Φ(αz) with z = (x − ξ)/ω."""
    return sps.skewnorm.pdf(x, p.shape, loc=p.loc, scale=p.scale)


def sigmoid(x):
    return special.expit(x)


def logit(p):
    arr = np.asarray(p, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise InvalidInput("logit is only defined on the open interval (0, 1)")
    return special.logit(p)


def _gaussian_logpdf(arr: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    return sps.norm.logpdf(arr, loc=mu, scale=sigma)


def _skewnorm_logpdf(arr: np.ndarray, shape: float, loc: float, scale: float) -> np.ndarray:
    z = (arr - loc) / scale
    return _LOG_2 - math.log(scale) - 0.5 * z * z - _HALF_LOG_2PI + special.log_ndtr(shape * z)


def log_likelihood(samples: Sequence[float], params, kind: str | None = None) -> float:
    """
    Σ ln pdf(xᵢ) under a Gaussian or skew-normal. Densities are floored at
    PDF_FLOOR before the log so a far-out sample cannot drive the sum to −∞.
    `kind` ("gaussian" / "skewnormal") defaults to the type of `params`.
    """
    arr = _as_array(samples)
    if arr.size == 0:
        raise InvalidInput("log_likelihood needs at least one sample")

    inferred = "gaussian" if isinstance(params, GaussianParams) else "skewnormal"
    if not isinstance(params, (GaussianParams, SkewNormalParams)):
        raise InvalidInput(f"Unsupported distribution parameters: {type(params).__name__}")
    if kind is not None and kind != inferred:
        raise InvalidInput(f"kind={kind!r} does not match {type(params).__name__}")

    if inferred == "gaussian":
        logpdf = _gaussian_logpdf(arr, params.mu, params.sigma)
    else:
        logpdf = _skewnorm_logpdf(arr, params.shape, params.loc, params.scale)
    return float(np.sum(np.maximum(logpdf, LOG_PDF_FLOOR)))


# ── Fits ───────────────────────────────────────────────────────────

def fit_gaussian(samples: Sequence[float]) -> GaussianParams:
    """Sample mean and population (ddof=0) standard deviation."""
    arr = _as_array(samples)
    if arr.size < 2:
        raise InsufficientData(f"Not enough points to fit a Gaussian (got {arr.size}, need 2).")
    sigma = float(arr.std())
    if sigma == 0.0:
        raise DegenerateSample("Cannot fit a Gaussian to a constant sample")
    return GaussianParams(mu=float(arr.mean()), sigma=sigma)


def _moment_start(arr: np.ndarray) -> np.ndarray:
    """Method-of-moments (alpha, loc, log scale) from the clamped sample skewness."""
    mean = arr.mean()
    sd = arr.std()
    gamma1 = float(sps.skew(arr))
    limit = 0.99 * SKEWNORM_MAX_SKEW
    gamma1 = max(-limit, min(limit, gamma1))

    b = math.sqrt(2.0 / math.pi)
    r = math.copysign(1.0, gamma1) * (2.0 * abs(gamma1) / (4.0 - math.pi)) ** (1.0 / 3.0)
    delta = r / (b * math.sqrt(1.0 + r * r))
    alpha = delta / math.sqrt(1.0 - delta * delta)
    mu_z = b * delta
    omega = sd / math.sqrt(1.0 - mu_z * mu_z)
    xi = mean - omega * mu_z
    return np.array([alpha, xi, math.log(omega)])


def fit_skewnorm(
    samples: Sequence[float],
    max_iter: int = 500,
    xtol: float = 1e-8,
) -> SkewNormalParams:
    """
    Maximum-likelihood skew-normal fit.

    A Nelder-Mead simplex over (alpha, loc, log scale) is started twice: from the
    moment-matched estimate and from the Gaussian fit (alpha = 0). The better
    optimum wins, so the result never scores below the Gaussian fit.
    """
    arr = _as_array(samples)
    if arr.size < SKEWNORM_MIN_SAMPLES or np.ptp(arr) == 0.0:
        raise InsufficientData(
            f"Skew-normal fit needs at least {SKEWNORM_MIN_SAMPLES} non-constant samples "
            f"(got {arr.size})."
        )

    def neg_loglik(theta: np.ndarray) -> float:
        shape, loc, log_scale = theta
        if not np.isfinite(log_scale) or abs(log_scale) > 700:
            return np.inf
        logpdf = _skewnorm_logpdf(arr, shape, loc, math.exp(log_scale))
        value = -float(np.sum(np.maximum(logpdf, LOG_PDF_FLOOR)))
        return value if np.isfinite(value) else np.inf

    starts = [
        _moment_start(arr),
        np.array([0.0, arr.mean(), math.log(arr.std())]),
    ]
    best = None
    for x0 in starts:
        res = optimize.minimize(
            neg_loglik,
            x0,
            method="Nelder-Mead",
            options={"maxiter": max_iter, "xatol": xtol, "fatol": xtol},
        )
        if not res.success:
            logger.warning("skewnorm_fit_not_converged | n=%d | message=%s", arr.size, res.message)
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res

    if best is None:
        raise FitFailed("Skew-normal likelihood maximisation produced no finite optimum")
    shape, loc, log_scale = best.x
    return SkewNormalParams(shape=float(shape), loc=float(loc), scale=float(math.exp(log_scale)))


# ── Intersections and roots ────────────────────────────────────────

def gauss_intersection(p0: GaussianParams, p1: GaussianParams) -> list[float]:
    """
    Points where the two Gaussian densities are equal, ascending.
    Equal sigmas make the equation linear and give exactly one root.
    """
    v0 = p0.sigma ** 2
    v1 = p1.sigma ** 2
    a = 1.0 / (2.0 * v0) - 1.0 / (2.0 * v1)
    b = p1.mu / v1 - p0.mu / v0
    c = p0.mu ** 2 / (2.0 * v0) - p1.mu ** 2 / (2.0 * v1) - math.log(p1.sigma / p0.sigma)

    if a == 0.0:
        if b == 0.0:
            raise DegenerateInput("Identical distributions have no intersection")
        return [-c / b]

    roots = np.roots([a, b, c])
    real = [
        float(r.real)
        for r in roots
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real))
    ]
    return sorted(real)


def brent_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> float:
    """Brent's bracketed root search. The caller decides what to do on NoSignChange."""
    if not lo < hi:
        raise InvalidInput(f"Bracket must satisfy lo < hi, got [{lo}, {hi}]")
    if tol <= 0 or max_iter < 1:
        raise InvalidInput("tol must be positive and max_iter at least 1")

    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo * f_hi > 0:
        raise NoSignChange(f"f has the same sign at both ends of [{lo}, {hi}]")

    root, info = optimize.brentq(
        f, lo, hi, xtol=tol, maxiter=max_iter, full_output=True, disp=False
    )
    if not info.converged:
        raise NoConvergence(f"Brent search did not converge in {max_iter} iterations")
    return float(root)
