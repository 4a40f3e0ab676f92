"""Repeatability and reproducibility analysis for balanced interlaboratory
studies: ANOVA variance components, bootstrap resampling schemes with
bias-corrected and adjusted estimators, approximate and bootstrap confidence
intervals, and a Monte Carlo harness for coverage studies."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import ConfigError, DataError
from .ingest import ingest, load_manganese
from .intervals import (
    BcaParams,
    Component,
    Flavor,
    Interval,
    Method,
    MoriguchiTerms,
    bca_interval,
    bootstrap_interval_suite,
    chi2_interval_sigma_r,
    moriguchi_interval_sigma_L,
    normal_interval,
    percentile_interval,
    satterthwaite_df,
    satterthwaite_interval_sigma_R,
)
from .model import (
    AnovaSums,
    Dataset,
    SeTriple,
    VarianceComponents,
    anova_estimates,
    anova_standard_errors,
    compute_sums,
)
from .resampling import (
    BootstrapDistribution,
    Scheme,
    adjusted_estimates,
    adjusted_standard_errors,
    bias_corrected,
    resample_once,
    run_bootstrap,
)
from .rng import SeedSpec
from .simulation import Scenario, Selection, SummaryRow, coverage, run_study, simulate_dataset
