"""Bootstrap resampling schemes for balanced interlaboratory data.

Five schemes differ in which index of ``Y[i, j]`` is resampled:

``boot-i``
    laboratories (rows) drawn with replacement, row contents intact.
``boot-j_s``
    one column-index vector of length ``n`` per replicate, shared by every
    laboratory.
``boot-j_r``
    an independent column-index vector for each laboratory.
``boot-ij_r``
    rows drawn with replacement, then an independent column-index vector
    for each selected row.
``boot-ij_s``
    one row-index vector and one shared column-index vector.

The adjusted estimators rescale the bootstrap means to remove the bias the
resampling itself introduces; the map depends on the scheme.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .model import (
    Dataset,
    SeTriple,
    VarianceComponents,
    anova_estimates,
    compute_sums,
)
from .rng import SeedSpec


class Scheme(enum.Enum):
    BOOT_I = "boot-i"
    BOOT_J_SINGLE = "boot-j_s"
    BOOT_J_REPEATED = "boot-j_r"
    BOOT_IJ_REPEATED = "boot-ij_r"
    BOOT_IJ_SINGLE = "boot-ij_s"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def parse(cls, label: str) -> "Scheme":
        key = label.strip().lower().replace("boot-", "").replace("_", "")
        try:
            return _ALIASES[key]
        except KeyError:
            raise ValueError(f"unknown resampling scheme {label!r}") from None


_CODES = {s: i for i, s in enumerate(Scheme)}
_ALIASES = {s.value.replace("boot-", "").replace("_", ""): s for s in Scheme}

ALL_SCHEMES = tuple(Scheme)


@dataclass(frozen=True)
class BootstrapDistribution:
    """Replicate variance triples from one scheme.

    ``replicates`` is an ``(M, 3)`` array with columns (sigma_r2, sigma_L2,
    sigma_R2); ``origin`` holds the ANOVA estimates of the original data.
    """

    scheme: Scheme
    m: int
    replicates: np.ndarray
    means: VarianceComponents
    ses: SeTriple
    origin: VarianceComponents

    @classmethod
    def from_replicates(cls, scheme, replicates, origin):
        reps = np.array(replicates, dtype=float)
        if reps.ndim != 2 or reps.shape[1] != 3 or reps.shape[0] < 2:
            raise ValueError("replicates must be an (M, 3) array with M >= 2")
        reps.setflags(write=False)
        mean = reps.mean(axis=0)
        sd = reps.std(axis=0, ddof=1)
        return cls(
            scheme=scheme,
            m=reps.shape[0],
            replicates=reps,
            means=VarianceComponents.from_parts(mean[0], mean[1]),
            ses=SeTriple(*sd),
            origin=origin,
        )


def resample_once(dataset: Dataset, scheme: Scheme, seed: SeedSpec) -> Dataset:
    out = kernels.resample(dataset.values, scheme.code, seed.master_seed, seed.stream_index)
    return Dataset(out)


def run_bootstrap(dataset: Dataset, scheme: Scheme, m: int, seed: SeedSpec) -> BootstrapDistribution:
    """Draw ``m`` resamples and collect their ANOVA estimates.

    Replicate ``t`` uses the stream ``SeedSpec(seed.master_seed,
    seed.stream_index + t)``, so the result does not depend on how the
    replicates are scheduled.
    """
    if m < 2:
        raise ValueError("need at least 2 bootstrap replicates")
    origin = anova_estimates(compute_sums(dataset), dataset.n)
    reps = kernels.bootstrap_replicates(dataset.values, scheme.code, seed.master_seed, seed.stream_index, m)
    return BootstrapDistribution.from_replicates(scheme, reps, origin)


def bias_corrected(dist: BootstrapDistribution) -> VarianceComponents:
    """``2 * origin - bootstrap mean`` for each component."""
    o, b = dist.origin, dist.means
    return VarianceComponents.from_parts(2.0 * o.sigma_r2 - b.sigma_r2, 2.0 * o.sigma_L2 - b.sigma_L2)


def adjustment_coefficients(scheme: Scheme, k: int, n: int):
    """``(c_r, c_L, d)`` of the map ``r -> c_r r``, ``L -> c_L (L - d r)``."""
    if k < 2 or n < 2:
        raise ValueError("adjustment needs k >= 2 and n >= 2")
    fk = k / (k - 1)
    fn = n / (n - 1)
    if scheme is Scheme.BOOT_I:
        return fk, fk, 0.0
    if scheme in (Scheme.BOOT_J_SINGLE, Scheme.BOOT_J_REPEATED):
        return fn, 1.0, 1.0 / (n - 1)
    return fk * fn, fk, 1.0 / (n - 1)


def adjust(scheme: Scheme, k: int, n: int, sigma_r2, sigma_L2):
    """Apply the scheme's adjustment to (arrays of) bootstrap estimates.

    Returns ``(r_ad, L_ad, R_ad)`` with ``R_ad = r_ad + L_ad``.
    """
    c_r, c_L, d = adjustment_coefficients(scheme, k, n)
    r_ad = c_r * sigma_r2
    l_ad = c_L * (sigma_L2 - d * sigma_r2)
    return r_ad, l_ad, r_ad + l_ad


def adjusted_replicates(dist: BootstrapDistribution, k: int, n: int) -> np.ndarray:
    reps = dist.replicates
    return np.column_stack(adjust(dist.scheme, k, n, reps[:, 0], reps[:, 1]))


def adjusted_estimates(dist: BootstrapDistribution, k: int, n: int) -> VarianceComponents:
    r_ad, l_ad, _ = adjust(dist.scheme, k, n, dist.means.sigma_r2, dist.means.sigma_L2)
    return VarianceComponents.from_parts(r_ad, l_ad)


def adjusted_standard_errors(dist: BootstrapDistribution, k: int, n: int) -> SeTriple:
    # the maps are linear, so the SD of mapped replicates is the mapped SE
    return SeTriple(*adjusted_replicates(dist, k, n).std(axis=0, ddof=1))
