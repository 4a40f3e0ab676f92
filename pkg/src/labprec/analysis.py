"""Full precision analysis of one dataset, laid out as report tables."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .intervals import (
    APPROX_METHODS,
    BOOTSTRAP_METHODS,
    COMPONENTS,
    Flavor,
    Method,
    approximate_intervals,
    bootstrap_interval_suite,
)
from .model import Dataset, anova_estimates, anova_standard_errors, compute_sums
from .report import Table
from .resampling import (
    ALL_SCHEMES,
    Scheme,
    adjusted_estimates,
    adjusted_standard_errors,
    bias_corrected,
    run_bootstrap,
)
from .rng import SeedSpec, derive_seed
from .simulation import DEFAULT_SEED

_SHORT = {"sigma_r2": "r", "sigma_L2": "L", "sigma_R2": "R"}


@dataclass(frozen=True)
class AnalysisConfig:
    alpha: float = 0.05
    m_boot: int = 1000
    schemes: tuple = ALL_SCHEMES
    flavors: tuple = tuple(Flavor)
    methods: tuple = APPROX_METHODS + BOOTSTRAP_METHODS
    seed: int = DEFAULT_SEED
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.m_boot < 2:
            raise ConfigError("the number of bootstrap replicates must be at least 2")
        if not self.scale > 0.0:
            raise ConfigError("scale must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


def scheme_seed(seed: int, scheme: Scheme) -> SeedSpec:
    return SeedSpec(derive_seed(seed, 0, 1 + scheme.code))


def _point_row(block, label, vc, se, s):
    cells = []
    for c in range(3):
        cells.append(vc[c] * s)
        cells.append(None if se is None else se[c] * s)
    return (block, label, *cells)


def _interval_cells(intervals, s):
    cells = []
    for iv in intervals:
        if iv is None:
            cells.extend([None, None, None])
        else:
            cells.extend([iv.lower * s, iv.upper * s, (iv.upper - iv.lower) * s])
    return cells


def analyze(dataset: Dataset, config: AnalysisConfig = AnalysisConfig()):
    """Point-estimate and interval tables plus a list of warning strings."""
    k, n, s = dataset.k, dataset.n, config.scale
    warnings = []
    sums = compute_sums(dataset)
    est = anova_estimates(sums, n)
    se = anova_standard_errors(est, k, n)
    warnings.extend(f"ANOVA standard errors: {f}" for f in se.flags)

    point_rows = [_point_row("ANOVA", "ANOVA", est.as_array(), se.as_array(), s)]
    ci_rows = []

    approx = [m for m in config.methods if m in APPROX_METHODS]
    if approx:
        ivs = list(approximate_intervals(sums, n, config.alpha))
        for c, m in enumerate(APPROX_METHODS):
            if m not in approx:
                ivs[c] = None
            elif ivs[c] is None:
                warnings.append(f"approximate interval for {COMPONENTS[c].value} is undefined for this dataset")
            elif ivs[c].flags:
                warnings.append(f"approximate interval for {COMPONENTS[c].value}: {', '.join(ivs[c].flags)}")
        ci_rows.append(("ANOVA", "approx", "approx", *_interval_cells(ivs, s)))

    dists = {sc: run_bootstrap(dataset, sc, config.m_boot, scheme_seed(config.seed, sc)) for sc in config.schemes}
    blocks = {
        Flavor.RAW_MEAN: ("bootstrap mean", lambda d: (d.means.as_array(), d.ses.as_array())),
        Flavor.BIAS_CORRECTED: ("bias-corrected", lambda d: (bias_corrected(d).as_array(), None)),
        Flavor.ADJUSTED: ("adjusted", lambda d: (adjusted_estimates(d, k, n).as_array(),
                                                 adjusted_standard_errors(d, k, n).as_array())),
    }
    for flavor in (Flavor.RAW_MEAN, Flavor.BIAS_CORRECTED, Flavor.ADJUSTED):
        if flavor not in config.flavors:
            continue
        block, fn = blocks[flavor]
        for sc, dist in dists.items():
            point_rows.append(_point_row(block, sc.value, *fn(dist), s))

    for flavor in (Flavor.RAW_MEAN, Flavor.ADJUSTED):
        if flavor not in config.flavors:
            continue
        for method in (m for m in BOOTSTRAP_METHODS if m in config.methods):
            for sc, dist in dists.items():
                ivs = bootstrap_interval_suite(dist, flavor, method, config.alpha, k, n)
                for iv in ivs:
                    if iv.flags:
                        warnings.append(f"{sc.value} {flavor.value} {method.value} {iv.target.value}: "
                                        f"{', '.join(iv.flags)}")
                ci_rows.append((sc.value, flavor.value, method.value, *_interval_cells(ivs, s)))

    point_cols = ["block", "estimator"]
    ci_cols = ["estimator", "flavor", "method"]
    for comp in COMPONENTS:
        x = _SHORT[comp.value]
        point_cols += [comp.value, f"se_{x}"]
        ci_cols += [f"{x}_lower", f"{x}_upper", f"{x}_range"]

    design = Table("design", ("k", "n", "m_boot", "alpha", "seed", "scale"),
                   ((k, n, config.m_boot, config.alpha, config.seed, config.scale),))
    tables = [
        design,
        Table("point_estimates", tuple(point_cols), tuple(point_rows)),
        Table("intervals", tuple(ci_cols), tuple(ci_rows)),
    ]
    return tables, warnings


def parse_methods(text: str):
    out = []
    for part in _split(text):
        if part == "all":
            out.extend(APPROX_METHODS + BOOTSTRAP_METHODS)
        elif part == "approx":
            out.extend(APPROX_METHODS)
        else:
            try:
                out.append(Method(part))
            except ValueError:
                raise ConfigError(f"unknown interval method {part!r}") from None
    return _unique(out)


def parse_schemes(text: str):
    out = []
    for part in _split(text):
        if part == "all":
            out.extend(ALL_SCHEMES)
            continue
        try:
            out.append(Scheme.parse(part))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return _unique(out)


def parse_flavors(text: str):
    out = []
    for part in _split(text):
        if part == "all":
            out.extend(Flavor)
            continue
        try:
            out.append(Flavor(part))
        except ValueError:
            raise ConfigError(f"unknown estimator flavor {part!r}") from None
    return _unique(out)


def _split(text):
    parts = [p.strip().lower() for p in text.split(",") if p.strip()]
    if not parts:
        raise ConfigError("empty selection")
    return parts


def _unique(items):
    return tuple(dict.fromkeys(items))
