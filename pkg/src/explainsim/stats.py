"""Summary statistics, the pooled two-sample t-test, and density estimates.

Random draws use numpy's PCG64 bit generator seeded through
:class:`numpy.random.SeedSequence`; both are documented, portable
algorithms, so a seed reproduces the same stream on every platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .exceptions import DataError, NumericAssertionError
from .metrics import _d_max_numerator

__all__ = [
    "SummaryStats",
    "TTestResult",
    "DensityCurve",
    "summarize",
    "pooled_ttest",
    "ttest_from_summary",
    "student_t_cdf",
    "student_t_pvalue",
    "kde",
    "silverman_bandwidth",
    "sample_metric_distribution",
    "make_rng",
]

SAMPLE_BLOCK = 256
MAX_GRID = 20_000


def make_rng(*seed: int) -> np.random.Generator:
    """PCG64 generator keyed by one or more non-negative integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(seed))))


@dataclass(frozen=True)
class SummaryStats:
    minmax: tuple[float, float]
    mean: float
    variance: float
    skewness: float
    kurtosis: float
    n: int
    degenerate: bool = False


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p_two_sided: float
    alpha: float
    reject_null: bool

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "df": self.df,
            "p_two_sided": self.p_two_sided,
            "alpha": self.alpha,
            "reject_null": self.reject_null,
        }


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))

    def mode(self) -> float:
        return float(self.grid[np.argmax(self.density)])


def summarize(sample: Sequence[float]) -> SummaryStats:
    """Moments in the style of ``scipy.stats.describe``.

    Variance uses the ``n - 1`` denominator. Skewness ``m3 / m2**1.5`` and
    excess kurtosis ``m4 / m2**2 - 3`` use biased central moments.
    """
    a = np.asarray(sample, dtype=float).reshape(-1)
    n = a.size
    if n < 2:
        raise DataError("need at least 2 values to summarize")
    if not np.all(np.isfinite(a)):
        raise DataError("sample contains non-finite values")
    mean = float(a.mean())
    dev = a - mean
    m2 = float(np.mean(dev**2))
    variance = m2 * n / (n - 1)
    lo, hi = float(a.min()), float(a.max())
    if m2 == 0.0 or hi == lo:
        return SummaryStats((lo, hi), mean, 0.0, 0.0, 0.0, n, degenerate=True)
    m3 = float(np.mean(dev**3))
    m4 = float(np.mean(dev**4))
    return SummaryStats(
        minmax=(lo, hi),
        mean=mean,
        variance=variance,
        skewness=m3 / m2**1.5,
        kurtosis=m4 / m2**2 - 3.0,
        n=n,
    )


def student_t_cdf(t: float, df: float) -> float:
    """Student-t distribution function through the regularized incomplete beta."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    tail = 0.5 * special.betainc(df / 2.0, 0.5, df / (df + t * t))
    return float(1.0 - tail if t > 0 else tail)


def student_t_pvalue(t: float, df: float) -> float:
    """Two-sided p-value ``P(|T| >= |t|)``."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0:
        return 1.0
    return float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))


def ttest_from_summary(
    mean1: float,
    var1: float,
    n1: int,
    mean2: float,
    var2: float,
    n2: int,
    alpha: float = 0.05,
) -> TTestResult:
    """Equal-variance two-sample t-test from means, sample variances and sizes."""
    if n1 < 2 or n2 < 2:
        raise DataError("each sample needs at least 2 observations")
    if var1 < 0 or var2 < 0:
        raise DataError("variances must be non-negative")
    df = n1 + n2 - 2
    pooled = ((n1 - 1) * var1 + (n2 - 1) * var2) / df
    diff = mean1 - mean2
    if pooled == 0.0:
        if diff == 0.0:
            return TTestResult(0.0, float(df), 1.0, alpha, False)
        raise DataError("degenerate samples: zero variance with unequal means")
    t = diff / math.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    p = student_t_pvalue(t, df)
    return TTestResult(float(t), float(df), p, alpha, p < alpha)


def pooled_ttest(a: Sequence[float], b: Sequence[float], alpha: float = 0.05) -> TTestResult:
    """Two-sided pooled-variance t-test for a difference in means."""
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size < 2 or b.size < 2:
        raise DataError("each sample needs at least 2 observations")
    return ttest_from_summary(
        float(a.mean()), float(a.var(ddof=1)), a.size,
        float(b.mean()), float(b.var(ddof=1)), b.size,
        alpha,
    )


def silverman_bandwidth(sample: Sequence[float]) -> float:
    a = np.asarray(sample, dtype=float).reshape(-1)
    sd = float(a.std(ddof=1))
    q75, q25 = np.percentile(a, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0:
        # IQR collapses on heavily tied samples; fall back to sd
        spread = sd
    return 0.9 * spread * a.size ** (-0.2)


def kde(sample: Sequence[float], n_grid: int = 200) -> DensityCurve:
    """Gaussian kernel density estimate with Silverman's rule-of-thumb bandwidth.

    The grid spans three bandwidths beyond the sample range on each side. It
    has ``n_grid`` points unless that would space them wider than half a
    bandwidth, in which case it is refined (up to ``MAX_GRID`` points) so
    the curve still integrates to one.
    """
    a = np.asarray(sample, dtype=float).reshape(-1)
    if a.size < 2:
        raise DataError("need at least 2 values for a density estimate")
    if not np.all(np.isfinite(a)):
        raise DataError("sample contains non-finite values")
    if a.max() == a.min():
        raise DataError("degenerate sample")
    h = silverman_bandwidth(a)
    lo, hi = a.min() - 3 * h, a.max() + 3 * h
    n_grid = max(n_grid, min(int(math.ceil((hi - lo) / (0.5 * h))) + 1, MAX_GRID))
    grid = np.linspace(lo, hi, n_grid)
    density = np.empty(n_grid)
    step = max(1, 2**22 // a.size)
    for start in range(0, n_grid, step):
        z = (grid[start:start + step, None] - a[None, :]) / h
        density[start:start + step] = np.exp(-0.5 * z**2).sum(axis=1)
    density /= a.size * h * math.sqrt(2 * math.pi)
    return DensityCurve(grid, density, h)


def _shreyan_rows(q: np.ndarray) -> np.ndarray:
    """Shreyan values of ``(identity, q)`` for each row ``q``."""
    x = q.shape[1]
    num = np.abs(q - np.arange(1, x + 1)) @ np.arange(x, 0, -1)
    max_num = _d_max_numerator(x)
    if np.any(num > max_num):
        raise NumericAssertionError(f"weighted difference exceeds d_max({x})")
    return 1.0 - num / max_num


def _pearson_rows(q: np.ndarray) -> np.ndarray:
    x = q.shape[1]
    a = np.arange(1, x + 1) - (x + 1) / 2.0
    b = q - q.mean(axis=1, keepdims=True)
    rho = (b @ a) / np.sqrt((a @ a) * (b * b).sum(axis=1))
    return (np.clip(rho, -1.0, 1.0) + 1.0) / 2.0


def sample_metric_distribution(
    x: int, n_samples: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Shreyan and normalized-Pearson values for random permutation pairs.

    Each pair is two independent uniform permutations of ``1..x``, scored
    in canonical form: the first list is relabelled to the identity and the
    second becomes ``r^-1 o r_star``. Draws are made in fixed blocks of
    ``SAMPLE_BLOCK`` pairs, block ``k`` using its own stream keyed by
    ``(seed, k)``, so any split of blocks across workers gives identical
    output.
    """
    if x < 2:
        raise ValueError("x must be at least 2")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    base = np.arange(1, x + 1)
    shreyan, pearson = [], []
    for k, start in enumerate(range(0, n_samples, SAMPLE_BLOCK)):
        m = min(SAMPLE_BLOCK, n_samples - start)
        rng = make_rng(seed, k)
        r = rng.permuted(np.tile(base, (m, 1)), axis=1)
        r_star = rng.permuted(np.tile(base, (m, 1)), axis=1)
        # canonical relabelling: q[i] = position of r_star[i] within r
        inv = np.empty_like(r)
        np.put_along_axis(inv, r - 1, np.arange(1, x + 1)[None, :].repeat(m, 0), axis=1)
        q = np.take_along_axis(inv, r_star - 1, axis=1)
        shreyan.append(_shreyan_rows(q))
        pearson.append(_pearson_rows(q))
    return np.concatenate(shreyan), np.concatenate(pearson)
