"""One-way random-effects model: sums of squares, variance components, SEs.

A balanced interlaboratory study has ``k`` laboratories each reporting ``n``
replicate measurements ``Y[i, j] = mu + L_i + E_ij``.  The repeatability
variance ``sigma_r2`` is the within-laboratory variance, ``sigma_L2`` the
variance of the laboratory effect and ``sigma_R2 = sigma_r2 + sigma_L2`` the
reproducibility variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

# Denominators of the plug-in standard errors.  The between-laboratory term
# divides by (k + 1) rather than the textbook (k - 1); the reference SE
# values are reproduced only with (k + 1), so it is kept.  Change here to
# switch conventions.
SE_BETWEEN_LAB_DF_OFFSET = +1
# Multiplier of the sigma_r^4 / (kn(n-1) + 2) cross term in SE(sigma_R2).
# A factor of 4 (not 2) reproduces the tabulated reproducibility SEs.
SE_REPRODUCIBILITY_CROSS_FACTOR = 4.0


@dataclass(frozen=True)
class Dataset:
    """Balanced ``k x n`` table of measurements, ``values[i, j] = Y_ij``."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DataError("unbalanced", f"expected a non-empty k x n table, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DataError("non-finite", "dataset contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def scaled(self, factor: float) -> "Dataset":
        return Dataset(self.values * factor)


@dataclass(frozen=True)
class AnovaSums:
    ssa: float
    sse: float
    msa: float
    mse: float
    phi_A: int
    phi_E: int


@dataclass(frozen=True)
class VarianceComponents:
    """Repeatability, between-laboratory and reproducibility variances.

    Build with :meth:`from_parts` so that ``sigma_R2`` is exactly the sum of
    the other two.  ``sigma_L2`` may be negative.
    """

    sigma_r2: float
    sigma_L2: float
    sigma_R2: float

    @classmethod
    def from_parts(cls, sigma_r2, sigma_L2):
        sigma_r2 = float(sigma_r2)
        sigma_L2 = float(sigma_L2)
        return cls(sigma_r2, sigma_L2, sigma_r2 + sigma_L2)

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma_r2, self.sigma_L2, self.sigma_R2])


@dataclass(frozen=True)
class SeTriple:
    se_r: float
    se_L: float
    se_R: float
    # e.g. "clamped-radicand" when the SE(sigma_R2) radicand went negative
    flags: tuple = field(default=())

    def as_array(self) -> np.ndarray:
        return np.array([self.se_r, self.se_L, self.se_R])


def canonical_sums(y):
    """Sums of squares for one or many ``k x n`` tables (leading axes batch).

    Accumulation order is fixed (row means left to right, then rows top to
    bottom) so the compiled kernel can reproduce it bit for bit.

    Returns ``(ssa, sse)`` with the batch shape.
    """
    y = np.asarray(y, dtype=float)
    k, n = y.shape[-2], y.shape[-1]
    s = np.zeros(y.shape[:-1])
    for j in range(n):
        s = s + y[..., j]
    row_mean = s / n
    gm = np.zeros(y.shape[:-2])
    for i in range(k):
        gm = gm + row_mean[..., i]
    gm = gm / k
    ssa = np.zeros(y.shape[:-2])
    for i in range(k):
        d = row_mean[..., i] - gm
        ssa = ssa + d * d
    ssa = ssa * n
    row_sse = np.zeros(y.shape[:-1])
    for j in range(n):
        d = y[..., j] - row_mean
        row_sse = row_sse + d * d
    sse = np.zeros(y.shape[:-2])
    for i in range(k):
        sse = sse + row_sse[..., i]
    return ssa, sse


def compute_sums(dataset: Dataset) -> AnovaSums:
    k, n = dataset.k, dataset.n
    if k < 2:
        raise DataError("too-few-labs", f"need at least 2 laboratories, got {k}")
    if n < 2:
        raise DataError("too-few-replicates", f"need at least 2 replicates per laboratory, got {n}")
    ssa, sse = canonical_sums(dataset.values)
    phi_A = k - 1
    phi_E = k * (n - 1)
    ssa, sse = float(ssa), float(sse)
    return AnovaSums(ssa=ssa, sse=sse, msa=ssa / phi_A, mse=sse / phi_E, phi_A=phi_A, phi_E=phi_E)


def anova_estimates(sums: AnovaSums, n: int) -> VarianceComponents:
    """Unbiased ANOVA estimators; ``sigma_L2`` is not truncated at zero."""
    return VarianceComponents.from_parts(sums.mse, (sums.msa - sums.mse) / n)


def anova_standard_errors(components: VarianceComponents, k: int, n: int) -> SeTriple:
    """Plug-in standard errors of the ANOVA estimators.

    The estimated variances replace the true ones; a negative ``sigma_L2``
    is used as is.
    """
    r = components.sigma_r2
    L = components.sigma_L2
    phi_E2 = k * (n - 1) + 2
    var_r = 2.0 * r * r / phi_E2
    var_L = (2.0 / (n * n)) * ((n * L + r) ** 2 / (k + SE_BETWEEN_LAB_DF_OFFSET) + r * r / phi_E2)
    var_R = var_r + var_L - SE_REPRODUCIBILITY_CROSS_FACTOR * r * r / (k * n * (n - 1) + 2)
    flags = ()
    if var_R < 0.0:
        var_R = 0.0
        flags = ("clamped-radicand",)
    return SeTriple(math.sqrt(var_r), math.sqrt(var_L), math.sqrt(var_R), flags)
