"""Confidence intervals for the three variance components.

Approximate (normal-theory) intervals:

* chi-square interval for ``sigma_r2``, exact because ``SSE / sigma_r2`` is
  chi-square with ``phi_E`` degrees of freedom;
* Moriguchi's interval for ``sigma_L2``, a first-order corrected inversion of
  ``MSA / MSE``;
* Satterthwaite's interval for ``sigma_R2`` using effective degrees of freedom.

Bootstrap intervals (normal, percentile, BCa) work on the replicate triples of
a :class:`~labprec.resampling.BootstrapDistribution`, either as drawn or after
the scheme's adjustment map.

Quantile orientation: ``chi_square_quantile(df, p)`` is the lower-tail
``p``-quantile.  The small quantile goes in the denominator of the upper limit
and vice versa, so ``lower < upper`` for every chi-square-based interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import chi_square_quantile, f_quantile, normal_cdf, normal_quantile
from .model import AnovaSums, anova_estimates
from .resampling import (
    BootstrapDistribution,
    adjusted_estimates,
    adjusted_replicates,
)


class Component(enum.Enum):
    REPEATABILITY = "sigma_r2"
    BETWEEN_LAB = "sigma_L2"
    REPRODUCIBILITY = "sigma_R2"


COMPONENTS = tuple(Component)


class Method(enum.Enum):
    APPROX_CHI2 = "approx-chi2"
    APPROX_MORIGUCHI = "approx-moriguchi"
    APPROX_SATTERTHWAITE = "approx-satterthwaite"
    BOOT_NORMAL = "normal"
    BOOT_PERCENTILE = "percentile"
    BOOT_BCA = "bca"

    @property
    def is_bootstrap(self) -> bool:
        return self in BOOTSTRAP_METHODS


BOOTSTRAP_METHODS = (Method.BOOT_NORMAL, Method.BOOT_PERCENTILE, Method.BOOT_BCA)
APPROX_METHODS = (Method.APPROX_CHI2, Method.APPROX_MORIGUCHI, Method.APPROX_SATTERTHWAITE)


class Flavor(enum.Enum):
    """Which point estimator a bootstrap result is reported for."""

    RAW_MEAN = "raw"
    BIAS_CORRECTED = "bias-corrected"
    ADJUSTED = "adjusted"


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    method: Method
    alpha: float
    target: Component
    flags: tuple = field(default=())

    def __post_init__(self):
        _check_alpha(self.alpha)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class MoriguchiTerms:
    f_lower: float
    f_upper: float
    b_lower: float
    b_upper: float


@dataclass(frozen=True)
class BcaParams:
    z0: float
    a: float
    flags: tuple = field(default=())


# ------------------------------------------------------------ approximate


def chi2_interval_sigma_r(sums: AnovaSums, alpha: float) -> Interval:
    _check_alpha(alpha)
    hi_q = chi_square_quantile(sums.phi_E, 1.0 - alpha / 2.0)
    lo_q = chi_square_quantile(sums.phi_E, alpha / 2.0)
    return Interval(sums.sse / hi_q, sums.sse / lo_q, Method.APPROX_CHI2, alpha, Component.REPEATABILITY)


def moriguchi_terms(sums: AnovaSums, alpha: float) -> MoriguchiTerms:
    """F_L is the larger (upper-tail) point of F(phi_A, inf), F_U the smaller."""
    _check_alpha(alpha)
    pa, pe = sums.phi_A, sums.phi_E
    f_l = f_quantile(pa, math.inf, 1.0 - alpha / 2.0)
    f_u = f_quantile(pa, math.inf, alpha / 2.0)
    b_l = f_l / pe * (pa * f_l / 2.0 - (pa - 2.0) / 2.0)
    b_u = f_u / pe * ((pa - 2.0) / 2.0 - pa * f_u / 2.0)
    return MoriguchiTerms(f_l, f_u, b_l, b_u)


def moriguchi_interval_sigma_L(sums: AnovaSums, n: int, alpha: float) -> Interval:
    if not sums.msa > 0.0:
        raise ValueError("Moriguchi interval needs MSA > 0")
    t = moriguchi_terms(sums, alpha)
    q = sums.mse / sums.msa
    scale = sums.msa / n
    lower = scale * (1.0 / t.f_lower - q - t.b_lower * q * q)
    upper = scale * (1.0 / t.f_upper - q + t.b_upper * q * q)
    # cannot happen for 0 < F_U < F_L, since b_L + b_U > 0; kept as a guard
    flags = ("inverted",) if lower > upper else ()
    return Interval(lower, upper, Method.APPROX_MORIGUCHI, alpha, Component.BETWEEN_LAB, flags)


def satterthwaite_df(sums: AnovaSums, n: int) -> float:
    num = (sums.msa + (n - 1) * sums.mse) ** 2
    den = sums.msa ** 2 / sums.phi_A + (n - 1) ** 2 * sums.mse ** 2 / sums.phi_E
    return num / den


def satterthwaite_interval_sigma_R(sums: AnovaSums, n: int, alpha: float) -> Interval:
    _check_alpha(alpha)
    est = anova_estimates(sums, n).sigma_R2
    if not est > 0.0:
        raise ValueError("Satterthwaite interval needs a positive reproducibility estimate")
    phi = satterthwaite_df(sums, n)
    lower = phi * est / chi_square_quantile(phi, 1.0 - alpha / 2.0)
    upper = phi * est / chi_square_quantile(phi, alpha / 2.0)
    return Interval(lower, upper, Method.APPROX_SATTERTHWAITE, alpha, Component.REPRODUCIBILITY)


def approximate_intervals(sums: AnovaSums, n: int, alpha: float):
    """The three approximate intervals; a component whose interval is undefined
    (``MSA = 0`` or ``sigma_R2 <= 0``) is returned as ``None``."""
    out = [chi2_interval_sigma_r(sums, alpha)]
    for fn in (moriguchi_interval_sigma_L, satterthwaite_interval_sigma_R):
        try:
            out.append(fn(sums, n, alpha))
        except ValueError:
            out.append(None)
    return tuple(out)


# -------------------------------------------------------------- bootstrap


def _rank(q, m):
    # 1-based index ceil(q m), rounded first so that q m = 25.000000000000004
    # still selects the 25th order statistic
    return min(max(math.ceil(round(q * m, 9)), 1), m)


def order_statistic(sorted_values, q):
    return sorted_values[_rank(q, len(sorted_values)) - 1]


def normal_interval(center: float, se: float, alpha: float, target=Component.REPEATABILITY) -> Interval:
    _check_alpha(alpha)
    if se < 0.0:
        raise ValueError("standard error must be nonnegative")
    z = normal_quantile(1.0 - alpha / 2.0)
    return Interval(center - z * se, center + z * se, Method.BOOT_NORMAL, alpha, target)


def percentile_interval(replicates, alpha: float, target=Component.REPEATABILITY) -> Interval:
    _check_alpha(alpha)
    s = np.sort(np.asarray(replicates, dtype=float))
    if s.size < 2:
        raise ValueError("need at least 2 replicates")
    return Interval(float(order_statistic(s, alpha / 2.0)), float(order_statistic(s, 1.0 - alpha / 2.0)),
                    Method.BOOT_PERCENTILE, alpha, target)


def bca_params(replicates, origin: float) -> BcaParams:
    """Bias correction ``z0`` and acceleration ``a`` from the replicates.

    A count of 0 or M replicates below ``origin`` is clamped to 1 or M - 1
    (flag ``z0-clamped``).  If all replicates are equal, ``a`` is NaN and the
    flag ``degenerate`` is set.
    """
    x = np.asarray(replicates, dtype=float)
    m = x.size
    flags = []
    count = int(np.count_nonzero(x <= origin))
    if count == 0 or count == m:
        count = min(max(count, 1), m - 1)
        flags.append("z0-clamped")
    z0 = normal_quantile(count / m)
    if x.min() == x.max():
        return BcaParams(z0, math.nan, tuple(flags) + ("degenerate",))
    d = x - x.mean()
    d = d / np.abs(d).max()  # the ratio is scale-free; this avoids underflow
    a = float(np.sum(d * d * d)) / (6.0 * float(np.dot(d, d)) ** 1.5)
    return BcaParams(z0, a, tuple(flags))


def bca_levels(params: BcaParams, alpha: float):
    """Adjusted tail probabilities ``(beta_lower, beta_upper)`` and flags."""
    flags = []
    out = []
    for z in (normal_quantile(alpha / 2.0), normal_quantile(1.0 - alpha / 2.0)):
        s = params.z0 + z
        den = 1.0 - params.a * s
        if den <= 0.0:
            # acceleration too large for this level: drop it rather than
            # wrap around the normal CDF
            flags.append("acceleration-breakdown")
            den = 1.0
        out.append(normal_cdf(params.z0 + s / den))
    return out[0], out[1], tuple(flags)


def bca_interval(replicates, origin: float, alpha: float, target=Component.REPEATABILITY) -> Interval:
    _check_alpha(alpha)
    s = np.sort(np.asarray(replicates, dtype=float))
    if s.size < 2:
        raise ValueError("need at least 2 replicates")
    p = bca_params(s, origin)
    if "degenerate" in p.flags:
        c = float(s[0])
        return Interval(c, c, Method.BOOT_BCA, alpha, target, p.flags)
    b_lo, b_hi, lvl_flags = bca_levels(p, alpha)
    return Interval(float(order_statistic(s, b_lo)), float(order_statistic(s, b_hi)),
                    Method.BOOT_BCA, alpha, target, p.flags + lvl_flags)


def flavor_view(dist: BootstrapDistribution, flavor: Flavor, k: int, n: int):
    """``(replicates, center)`` a flavor's intervals are built from."""
    if flavor is Flavor.RAW_MEAN:
        return dist.replicates, dist.means.as_array()
    if flavor is Flavor.ADJUSTED:
        return adjusted_replicates(dist, k, n), adjusted_estimates(dist, k, n).as_array()
    raise ValueError("bias-corrected estimates have no bootstrap intervals")


def interval_suite(replicates, center, alpha: float, method: Method):
    """One interval per column of an ``(M, 3)`` replicate array.

    ``center`` is the flavor's point estimate: the centre of the normal
    interval and the reference value for the BCa bias correction.
    """
    reps = np.asarray(replicates, dtype=float)
    center = np.asarray(center, dtype=float)
    out = []
    for c, comp in enumerate(COMPONENTS):
        col = reps[:, c]
        if method is Method.BOOT_NORMAL:
            out.append(normal_interval(float(center[c]), float(col.std(ddof=1)), alpha, comp))
        elif method is Method.BOOT_PERCENTILE:
            out.append(percentile_interval(col, alpha, comp))
        elif method is Method.BOOT_BCA:
            out.append(bca_interval(col, float(center[c]), alpha, comp))
        else:
            raise ValueError(f"{method.value} is not a bootstrap interval")
    return tuple(out)


def bootstrap_interval_suite(dist: BootstrapDistribution, flavor: Flavor, method: Method, alpha: float,
                             k: int, n: int):
    reps, center = flavor_view(dist, flavor, k, n)
    return interval_suite(reps, center, alpha, method)
