"""Exit criteria, each at its stated tolerance.

Stochastic criteria run once with the package default seed.  Every check is
recorded, so the terminal summary shows one verdict line per criterion even
when an assertion fails.
"""

import math
import time

import numpy as np
import pytest

from labprec.cli import main
from labprec.distributions import (
    chi_square_cdf,
    chi_square_quantile,
    f_cdf,
    f_quantile,
    normal_cdf,
    normal_quantile,
)
from labprec.ingest import load_manganese
from labprec.intervals import (
    Flavor,
    Method,
    approximate_intervals,
    bca_interval,
    bca_params,
    chi2_interval_sigma_r,
    percentile_interval,
)
from labprec.model import Dataset, anova_estimates, anova_standard_errors, compute_sums
from labprec.report import parse_csv
from labprec.resampling import Scheme, adjust, adjusted_estimates, adjusted_standard_errors, run_bootstrap
from labprec.analysis import scheme_seed
from labprec.simulation import DEFAULT_SEED, ANOVA_LABEL, Scenario, Selection, run_scenario, simulate_dataset

from oracles import enumerate_outcomes, triples

pytestmark = pytest.mark.acceptance

E7 = 1e7


def within(got, want, tol):
    return all(abs(g - w) <= tol for g, w in zip(got, want))


def fmt(xs, digits=4):
    return "(" + ", ".join(f"{x:.{digits}f}" for x in xs) + ")"


# ---------------------------------------------------------------- 1


def test_criterion_1_manganese_anova(record):
    t0 = time.perf_counter()
    ds = load_manganese()
    est = anova_estimates(compute_sums(ds), ds.n)
    se = anova_standard_errors(est, ds.k, ds.n)
    elapsed = time.perf_counter() - t0
    got_est = est.as_array() * E7
    got_se = se.as_array() * E7
    ok_est = within(got_est, (10.77, 42.73, 53.51), 0.01)
    ok_se = within(got_se, (2.47, 17.83, 17.91), 0.02)
    record(1, "estimates ±0.01", ok_est, fmt(got_est))
    record(1, "standard errors ±0.02", ok_se, fmt(got_se))
    record(1, "runtime < 1 s", elapsed < 1.0, f"{elapsed:.4f} s")
    assert ok_est and ok_se and elapsed < 1.0


# ---------------------------------------------------------------- 2


def _quantile_round_trip_error():
    worst = 0.0
    ps = (1e-6, 0.001, 0.005, 0.025, 0.05, 0.3, 0.5, 0.7, 0.95, 0.975, 0.995, 0.999, 1 - 1e-6)
    for p in ps:
        worst = max(worst, abs(normal_cdf(normal_quantile(p)) - p))
        for df in (1, 2, 3, 4, 11, 36, 47.3, 200):
            worst = max(worst, abs(chi_square_cdf(chi_square_quantile(df, p), df) - p))
        for d1, d2 in ((1, 1), (3, 7), (11, 36), (5, 200)):
            worst = max(worst, abs(f_cdf(f_quantile(d1, d2, p), d1, d2) - p))
    return worst


def test_criterion_2_approximate_intervals(record):
    err = _quantile_round_trip_error()
    gate = err <= 1e-10
    record(2, "quantile round trip <= 1e-10", gate, f"max error {err:.2e}")
    ds = load_manganese()
    ivs = approximate_intervals(compute_sums(ds), ds.n, 0.05)
    want = ((7.13, 18.18), (20.05, 128.30), (29.25, 127.60))
    ok = True
    for iv, w, name in zip(ivs, want, ("sigma_r2 chi-square", "sigma_L2 Moriguchi", "sigma_R2 Satterthwaite")):
        got = (iv.lower * E7, iv.upper * E7)
        hit = within(got, w, 0.05)
        ok &= hit
        record(2, f"{name} ±0.05", hit, f"[{got[0]:.4f}, {got[1]:.4f}] vs {list(w)}")
    assert gate and ok


# ---------------------------------------------------------------- 3


def test_criterion_3_manganese_bootstrap(record):
    ds = load_manganese()
    k, n = ds.k, ds.n
    t0 = time.perf_counter()
    dists = {s: run_bootstrap(ds, s, 1000, scheme_seed(DEFAULT_SEED, s)) for s in Scheme}
    elapsed = time.perf_counter() - t0
    want = {Scheme.BOOT_J_REPEATED: (10.72, 42.93, 53.66), Scheme.BOOT_J_SINGLE: (10.88, 42.85, 53.73)}
    ok = True
    for s, w in want.items():
        got = adjusted_estimates(dists[s], k, n).as_array() * E7
        hit = within(got, w, 0.6)
        ok &= hit
        record(3, f"adjusted {s.value} ±0.6", hit, f"{fmt(got, 3)} vs {w}")

    se = {s: adjusted_standard_errors(d, k, n).as_array() * E7 for s, d in dists.items()}
    anova_se = anova_standard_errors(anova_estimates(compute_sums(ds), n), k, n).as_array() * E7
    j = np.maximum(se[Scheme.BOOT_J_REPEATED], se[Scheme.BOOT_J_SINGLE])
    ij = np.minimum(se[Scheme.BOOT_IJ_REPEATED], se[Scheme.BOOT_IJ_SINGLE])
    order = bool(np.all(j < se[Scheme.BOOT_I]) and np.all(se[Scheme.BOOT_I] < ij)
                 and np.all(j[1:] < anova_se[1:]))
    detail = (f"max j* {fmt(j, 2)} < boot-i {fmt(se[Scheme.BOOT_I], 2)} < min ij* {fmt(ij, 2)}; "
              f"ANOVA {fmt(anova_se, 2)}")
    record(3, "SE ordering j* < boot-i/ANOVA < ij*", order, detail)
    record(3, "runtime < 10 s", elapsed < 10.0, f"{elapsed:.3f} s for all five schemes")
    assert ok and order and elapsed < 10.0


# ---------------------------------------------------------------- 4 and 5


def _rows(scenario, schemes):
    sel = Selection(schemes=schemes, flavors=(Flavor.ADJUSTED,), methods=(Method.BOOT_BCA,))
    return {r.estimator: r for r in run_scenario(scenario, sel)}


def test_criterion_4_simulation_5x5(record):
    sc = Scenario(ratio=0.5, k=5, n=5, m_boot=1000, r_mc=1000)
    t0 = time.perf_counter()
    rows = _rows(sc, (Scheme.BOOT_J_REPEATED, Scheme.BOOT_IJ_REPEATED))
    elapsed = time.perf_counter() - t0
    checks = [
        ("ANOVA means ±0.03", rows[ANOVA_LABEL].mean_estimate, (1.000, 0.499, 1.499), 0.03),
        ("adjusted boot-j_r means ±0.03", rows["boot-j_r:adjusted"].mean_estimate, (1.008, 0.505, 1.513), 0.03),
        ("adjusted boot-ij_r BCa CP ±0.02", rows["boot-ij_r:adjusted"].interval("bca").coverage,
         (0.963, 0.973, 0.961), 0.02),
        ("adjusted boot-j_r BCa sigma_R2 CP ±0.03", rows["boot-j_r:adjusted"].interval("bca").coverage[2:],
         (0.795,), 0.03),
    ]
    ok = True
    for name, got, want, tol in checks:
        hit = within(got, want, tol)
        ok &= hit
        record(4, name, hit, f"{fmt(got, 3)} vs {want}")
    record(4, "runtime < 10 min", elapsed < 600, f"{elapsed:.1f} s")
    assert ok and elapsed < 600


@pytest.mark.parametrize("k,n,ratio,scheme,comp,want", [
    (50, 50, 2.0, Scheme.BOOT_J_REPEATED, 1, 0.227),
    (3, 3, 0.25, Scheme.BOOT_IJ_REPEATED, 2, 0.958),
])
def test_criterion_5_extreme_designs(record, k, n, ratio, scheme, comp, want):
    sc = Scenario(ratio=ratio, k=k, n=n, m_boot=1000, r_mc=500)
    got = _rows(sc, (scheme,))[f"{scheme.value}:adjusted"].interval("bca").coverage[comp]
    hit = abs(got - want) <= 0.05
    name = ("sigma_r2", "sigma_L2", "sigma_R2")[comp]
    record(5, f"{sc.label} {scheme.value} BCa {name} CP ±0.05 (R=500)", hit, f"{got:.3f} vs {want}")
    assert hit


# ---------------------------------------------------------------- 6


@pytest.mark.parametrize("k,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_criterion_6a_enumeration(record, k, n):
    y = np.random.default_rng(100 + 10 * k + n).normal(size=(k, n)) * 3.0 + np.arange(k)[:, None]
    sigma_r = compute_sums(Dataset(y)).mse
    mean_i = triples(enumerate_outcomes(y, Scheme.BOOT_I)).mean(axis=0)[0]
    mean_j = triples(enumerate_outcomes(y, Scheme.BOOT_J_REPEATED)).mean(axis=0)[0]
    err = max(abs(mean_i - sigma_r), abs(mean_j - (n - 1) / n * sigma_r)) / max(1.0, sigma_r)
    r_ad = adjust(Scheme.BOOT_J_REPEATED, k, n, mean_j, 0.0)[0]
    err = max(err, abs(r_ad - sigma_r) / max(1.0, sigma_r))
    record(6, f"(a) enumeration k={k} n={n}", err <= 1e-12, f"max rel error {err:.1e}")
    assert err <= 1e-12


def test_criterion_6b_bca_reduces_to_percentile(record):
    # symmetric about 0 with half the replicates at or below it: z0 = a = 0
    half = np.linspace(0.01, 3.0, 500)
    x = np.concatenate([-half, half])
    params = bca_params(x, 0.0)
    ok = params.z0 == 0.0 and abs(params.a) < 1e-15
    for alpha in (0.05, 0.1, 0.3):
        b = bca_interval(x, 0.0, alpha)
        pc = percentile_interval(x, alpha)
        ok &= (b.lower, b.upper) == (pc.lower, pc.upper)
    record(6, "(b) BCa equals percentile when z0 = a = 0", ok,
           f"M={x.size}, z0={params.z0}, a={params.a:.1e}, alpha 0.05/0.1/0.3")
    assert ok


def test_criterion_6c_affine_equivariance(record, capsys, tmp_path):
    ds = load_manganese()
    c, shift = 3.0, 12.5
    path = tmp_path / "scaled.csv"
    with open(path, "w") as fh:
        fh.write("lab,replicate,value\n")
        for i, row in enumerate(ds.values):
            for j, v in enumerate(row):
                fh.write(f"{i + 1},{j + 1},{float(c * v + shift)!r}\n")
    common = ["--boot", "300", "--seed", "7"]
    assert main(["analyze", "--input", "builtin:manganese", "--scale", str(1e7), *common]) == 0
    base = parse_csv(capsys.readouterr().out)
    assert main(["analyze", "--input", str(path), "--scale", repr(1e7 / c ** 2), *common]) == 0
    moved = parse_csv(capsys.readouterr().out)
    worst = 0.0
    for ta, tb in zip(base[1:], moved[1:]):
        for ra, rb in zip(ta.rows, tb.rows):
            for a, b in zip(ra, rb):
                if isinstance(a, float):
                    worst = max(worst, abs(a - b) / max(abs(a), 1e-12))
                else:
                    assert a == b
    ok = worst <= 1e-9
    record(6, "(c) affine equivariance through the CLI", ok, f"c={c}, shift={shift}, max rel diff {worst:.1e}")
    assert ok


def test_criterion_6d_chi2_coverage(record):
    sc = Scenario(ratio=0.5, k=5, n=5, r_mc=2000)
    hits = sum(chi2_interval_sigma_r(compute_sums(simulate_dataset(sc, rep)), 0.05).contains(1.0)
               for rep in range(sc.r_mc))
    cp = hits / sc.r_mc
    tol = 2.0 * math.sqrt(0.05 * 0.95 / sc.r_mc)
    ok = abs(cp - 0.95) <= tol
    record(6, "(d) chi-square interval coverage", ok, f"{cp:.4f} vs 0.95 ± {tol:.4f} (R=2000)")
    assert ok


def test_criterion_6e_worker_determinism(record):
    sc = Scenario(ratio=1.0, k=4, n=3, m_boot=100, r_mc=24)
    results = [run_scenario(sc, Selection(), workers=w) for w in (1, 2, 5)]
    ok = results[0] == results[1] == results[2]
    record(6, "(e) identical results for 1, 2 and 5 workers", ok, f"{len(results[0])} summary rows")
    assert ok
