"""Monte Carlo evaluation of the estimators and intervals.

Each scenario fixes the true variance components and the design ``(k, n)``.
For every Monte Carlo replication a dataset is drawn from the normal one-way
model, the ANOVA benchmark and every selected bootstrap scheme/flavor/method
are evaluated, and the results are averaged into :class:`SummaryRow` records.

Seeding.  Replication ``rep`` of a scenario draws its data from the stream
``SeedSpec(master_seed, rep)``: the first ``k`` standard normals are the
laboratory effects, the next ``k * n`` (row-major) the errors.  Scenarios
sharing a master seed therefore share random numbers, which makes
between-scenario comparisons less noisy.  The bootstrap for scheme ``s`` uses
``SeedSpec(derive_seed(master_seed, rep, 1 + s.code))``.  Nothing depends on
the order in which replications are executed, and results are folded in
replication order, so the output is identical for any worker count.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._backend import kernels
from .distributions import normal_quantile
from .errors import ConfigError
from .intervals import (
    APPROX_METHODS,
    BOOTSTRAP_METHODS,
    Flavor,
    Method,
    approximate_intervals,
    flavor_view,
    interval_suite,
)
from .model import Dataset, anova_estimates, anova_standard_errors, compute_sums
from .resampling import ALL_SCHEMES, Scheme, bias_corrected, run_bootstrap
from .rng import MASK64, SeedSpec, derive_seed

DEFAULT_SEED = 20240601
ANOVA_LABEL = "ANOVA"
APPROX_LABEL = "approx"


@dataclass(frozen=True)
class Scenario:
    ratio: float
    k: int
    n: int
    mu: float = 0.0
    sigma_r2: float = 1.0
    m_boot: int = 1000
    r_mc: int = 1000
    alpha: float = 0.05
    master_seed: int = DEFAULT_SEED

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.mu)):
            problems.append("mu must be finite")
        if not (self.sigma_r2 >= 0.0 and math.isfinite(self.sigma_r2)):
            problems.append("sigma_r2 must be finite and nonnegative")
        if not (self.ratio >= 0.0 and math.isfinite(self.ratio)):
            problems.append("ratio must be finite and nonnegative")
        if self.k < 2 or self.n < 2:
            problems.append("k and n must both be at least 2")
        if self.m_boot < 2:
            problems.append("m_boot must be at least 2")
        if self.r_mc < 1:
            problems.append("r_mc must be positive")
        if not 0.0 < self.alpha < 1.0:
            problems.append("alpha must lie in (0, 1)")
        if not 0 <= self.master_seed <= MASK64:
            problems.append("seed must be an unsigned 64-bit integer")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def sigma_L2(self) -> float:
        return self.ratio * self.sigma_r2

    @property
    def truth(self) -> np.ndarray:
        return np.array([self.sigma_r2, self.sigma_L2, self.sigma_r2 + self.sigma_L2])

    @property
    def label(self) -> str:
        return f"k={self.k},n={self.n},ratio={self.ratio:g}"


@dataclass(frozen=True)
class Selection:
    """Which schemes, flavors and interval methods a study evaluates."""

    schemes: tuple = ALL_SCHEMES
    flavors: tuple = tuple(Flavor)
    methods: tuple = APPROX_METHODS + BOOTSTRAP_METHODS

    @property
    def bootstrap_methods(self):
        return tuple(m for m in self.methods if m.is_bootstrap)

    @property
    def wants_approx(self) -> bool:
        return any(not m.is_bootstrap for m in self.methods)


@dataclass(frozen=True)
class IntervalSummary:
    method: str
    mean_lower: tuple
    mean_upper: tuple
    mean_width: tuple
    coverage: tuple
    n_valid: tuple


@dataclass(frozen=True)
class SummaryRow:
    scenario: Scenario
    estimator: str
    scheme: Scheme | None
    flavor: Flavor | None
    mean_estimate: tuple
    mean_se: tuple
    intervals: tuple = ()
    flag_counts: tuple = ()

    def interval(self, method: str) -> IntervalSummary:
        for s in self.intervals:
            if s.method == method:
                return s
        raise KeyError(method)


@dataclass(frozen=True)
class ScenarioFailure:
    scenario: object
    reason: str


@dataclass(frozen=True)
class StudyResult:
    rows: tuple
    failures: tuple = ()


@dataclass
class _Record:
    estimate: np.ndarray
    se: np.ndarray
    bounds: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)


def estimator_label(scheme: Scheme, flavor: Flavor) -> str:
    return f"{scheme.value}:{flavor.value}"


def simulate_dataset(scenario: Scenario, rep_index: int) -> Dataset:
    k, n = scenario.k, scenario.n
    u = kernels.unit_uniforms(scenario.master_seed, rep_index, k + k * n)
    z = normal_quantile(u)
    lab = math.sqrt(scenario.sigma_L2) * z[:k]
    err = math.sqrt(scenario.sigma_r2) * z[k:].reshape(k, n)
    return Dataset(scenario.mu + lab[:, None] + err)


def coverage(intervals, truth: float) -> float:
    intervals = list(intervals)
    if not intervals:
        raise ValueError("coverage of an empty set of intervals")
    return sum(iv.lower <= truth <= iv.upper for iv in intervals) / len(intervals)


def _bounds(intervals):
    lo = np.full(3, np.nan)
    hi = np.full(3, np.nan)
    flags = []
    for c, iv in enumerate(intervals):
        if iv is None:
            flags.append("undefined-interval")
            continue
        lo[c], hi[c] = iv.lower, iv.upper
        flags.extend(iv.flags)
    return (lo, hi), flags


def evaluate_replication(scenario: Scenario, rep_index: int, selection: Selection = Selection()):
    """All selected estimators on one simulated dataset, keyed by label."""
    data = simulate_dataset(scenario, rep_index)
    k, n, alpha = scenario.k, scenario.n, scenario.alpha
    sums = compute_sums(data)
    est = anova_estimates(sums, n)
    se = anova_standard_errors(est, k, n)
    anova = _Record(est.as_array(), se.as_array(), flags=list(se.flags))
    if selection.wants_approx:
        anova.bounds[APPROX_LABEL], flags = _bounds(approximate_intervals(sums, n, alpha))
        anova.flags.extend(flags)
    out = {ANOVA_LABEL: anova}

    methods = selection.bootstrap_methods
    for scheme in selection.schemes:
        seed = SeedSpec(derive_seed(scenario.master_seed, rep_index, 1 + scheme.code))
        dist = run_bootstrap(data, scheme, scenario.m_boot, seed)
        for flavor in selection.flavors:
            if flavor is Flavor.BIAS_CORRECTED:
                rec = _Record(bias_corrected(dist).as_array(), dist.ses.as_array())
            else:
                reps, center = flavor_view(dist, flavor, k, n)
                rec = _Record(center, reps.std(axis=0, ddof=1))
                for method in methods:
                    rec.bounds[method.value], flags = _bounds(interval_suite(reps, center, alpha, method))
                    rec.flags.extend(flags)
            out[estimator_label(scheme, flavor)] = rec
    return out


def _count_flags(records):
    counts = {}
    for rec in records:
        for f in rec.flags:
            counts[f] = counts.get(f, 0) + 1
    return tuple(sorted(counts.items()))


def _summarize(scenario, label, records):
    truth = scenario.truth
    est = np.array([r.estimate for r in records])
    se = np.array([r.se for r in records])
    summaries = []
    for method in records[0].bounds:
        lo = np.array([r.bounds[method][0] for r in records])
        hi = np.array([r.bounds[method][1] for r in records])
        valid = ~(np.isnan(lo) | np.isnan(hi))
        nv = valid.sum(axis=0)
        hit = ((lo <= truth) & (truth <= hi) & valid).sum(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            mean_lo = np.where(nv > 0, np.where(valid, lo, 0.0).sum(axis=0) / nv, np.nan)
            mean_hi = np.where(nv > 0, np.where(valid, hi, 0.0).sum(axis=0) / nv, np.nan)
            mean_w = np.where(nv > 0, np.where(valid, hi - lo, 0.0).sum(axis=0) / nv, np.nan)
            cp = np.where(nv > 0, hit / nv, np.nan)
        summaries.append(IntervalSummary(method, tuple(mean_lo), tuple(mean_hi), tuple(mean_w), tuple(cp),
                                         tuple(int(x) for x in nv)))
    if label == ANOVA_LABEL:
        scheme = flavor = None
    else:
        s, f = label.split(":")
        scheme, flavor = Scheme(s), Flavor(f)
    mean_est = est.mean(axis=0)
    # keep sigma_R2 = sigma_r2 + sigma_L2 exactly for the averaged estimates too
    mean_est[2] = mean_est[0] + mean_est[1]
    return SummaryRow(scenario, label, scheme, flavor, tuple(mean_est), tuple(se.mean(axis=0)),
                      tuple(summaries), _count_flags(records))


def run_scenario(scenario: Scenario, selection: Selection = Selection(), workers: int = 1):
    def task(rep):
        return evaluate_replication(scenario, rep, selection)

    reps = range(scenario.r_mc)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, reps))
    else:
        results = [task(r) for r in reps]
    return [_summarize(scenario, label, [res[label] for res in results]) for label in results[0]]


def run_study(scenarios, selection: Selection = Selection(), workers: int = 1) -> StudyResult:
    """Run every scenario; a scenario that raises is recorded, not fatal."""
    rows = []
    failures = []
    for sc in scenarios:
        if isinstance(sc, ScenarioFailure):
            failures.append(sc)
            continue
        try:
            rows.extend(run_scenario(sc, selection, workers))
        except (ValueError, ArithmeticError) as exc:
            failures.append(ScenarioFailure(sc, str(exc)))
    return StudyResult(tuple(rows), tuple(failures))


# ------------------------------------------------------------------ grids

FULL_RATIOS = (0.25, 0.5, 1.0, 2.0)
FULL_SIZES = (3, 5, 10, 50)


def full_grid(seed: int = DEFAULT_SEED, m_boot: int = 1000, r_mc: int = 1000):
    return [Scenario(ratio=r, k=k, n=n, m_boot=m_boot, r_mc=r_mc, master_seed=seed)
            for r in FULL_RATIOS for k in FULL_SIZES for n in FULL_SIZES]


def quick_grid(seed: int = DEFAULT_SEED):
    """Three small cells with reduced M and R, for smoke runs."""
    return [Scenario(ratio=r, k=k, n=n, m_boot=200, r_mc=100, master_seed=seed)
            for k, n, r in ((5, 5, 0.5), (3, 3, 0.25), (3, 3, 2.0))]


GRID_COLUMNS = ("mu", "sigma_r2", "ratio", "k", "n", "m_boot", "r_mc", "alpha", "seed")


def read_grid(path):
    """Scenarios from a CSV grid file.

    Rows that do not describe a valid scenario become
    :class:`ScenarioFailure` entries; a file without any rows, or without the
    required columns, raises :class:`ConfigError`.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = set(GRID_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise ConfigError(f"grid file lacks columns: {', '.join(sorted(missing))}")
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read grid file: {exc}") from exc
    if not rows:
        raise ConfigError("grid file contains no scenarios")
    out = []
    for line, row in enumerate(rows, start=2):
        try:
            out.append(Scenario(
                mu=float(row["mu"]), sigma_r2=float(row["sigma_r2"]), ratio=float(row["ratio"]),
                k=int(row["k"]), n=int(row["n"]), m_boot=int(row["m_boot"]), r_mc=int(row["r_mc"]),
                alpha=float(row["alpha"]), master_seed=int(row["seed"]),
            ))
        except (ValueError, TypeError) as exc:
            out.append(ScenarioFailure(f"line {line}", str(exc)))
    return out


def with_overrides(scenarios, **changes):
    """Copies of ``scenarios`` with the given fields replaced (``None`` skipped)."""
    changes = {k: v for k, v in changes.items() if v is not None}
    return [s if isinstance(s, ScenarioFailure) else replace(s, **changes) for s in scenarios]
