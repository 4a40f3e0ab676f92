"""Normal, chi-square and F distribution functions.

CDFs use the usual series / continued-fraction expansions of the
regularized incomplete gamma and beta functions; quantiles invert them with
a bracketed Newton iteration.  Only the standard library (and numpy for the
vectorized normal quantile) is needed.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _check_probability(p):
    if not (0.0 < p < 1.0):
        raise ValueError(f"probability must lie in (0, 1), got {p!r}")


# ---------------------------------------------------------------- normal


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Wichura (1988), algorithm AS 241, PPND16.
_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coef, x):
    acc = coef[-1]
    for c in coef[-2::-1]:
        acc = acc * x + c
    return acc


def _ppnd16(p):
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0.0 else val


def normal_quantile(p):
    """Inverse standard-normal CDF.  Accepts a float or an ndarray."""
    if np.ndim(p) == 0:
        p = float(p)
        _check_probability(p)
        return _ppnd16(p)
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("probabilities must lie in (0, 1)")
    q = p - 0.5
    central = np.abs(q) <= 0.425
    r_c = 0.180625 - q * q
    out = q * _poly(_A, r_c) / _poly(_B, r_c)
    tail = ~central
    if np.any(tail):
        pt = p[tail]
        qt = q[tail]
        r = np.sqrt(-np.log(np.where(qt < 0.0, pt, 1.0 - pt)))
        near = r <= 5.0
        val = np.where(near,
                       _poly(_C, r - 1.6) / _poly(_D, r - 1.6),
                       _poly(_E, r - 5.0) / _poly(_F, r - 5.0))
        out[tail] = np.where(qt < 0.0, -val, val)
    return out


# ---------------------------------------------------- incomplete gamma


def _gamma_log_prefactor(a, x):
    return -x + a * math.log(x) - math.lgamma(a)


def _gamma_p_series(a, x):
    ap = a
    term = total = 1.0 / a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(_gamma_log_prefactor(a, x))


def _gamma_q_cf(a, x):
    # modified Lentz evaluation of the continued fraction for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(_gamma_log_prefactor(a, x)) * h


def gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x)."""
    if a <= 0.0:
        raise ValueError("shape must be positive")
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x)."""
    if a <= 0.0:
        raise ValueError("shape must be positive")
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


def chi_square_cdf(x: float, df: float) -> float:
    return gamma_p(0.5 * df, 0.5 * x)


# ----------------------------------------------------- incomplete beta


def _beta_cf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta_inc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    return _beta_inc(a, b, x, 1.0 - x)


def _beta_inc(a, b, x, y):
    # y = 1 - x, passed separately so callers can supply it without cancellation
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    front = math.exp(a * math.log(x) + b * math.log(y) - _log_beta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, y) / b


def f_cdf(x: float, df1: float, df2: float) -> float:
    if x <= 0.0:
        return 0.0
    if math.isinf(df2):
        return chi_square_cdf(df1 * x, df1)
    t = df1 * x + df2
    return _beta_inc(0.5 * df1, 0.5 * df2, df1 * x / t, df2 / t)


# ----------------------------------------------------------- quantiles


def _invert(f, fprime, x0, lo, hi, xtol=1e-15):
    """Root of the increasing function ``f`` by Newton steps inside a bracket.

    ``hi`` may be ``inf``; the bracket is tightened on every evaluation and
    a bisection (or doubling) step replaces any Newton step leaving it.
    """
    x = x0
    for _ in range(500):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        dfx = fprime(x)
        step_ok = False
        if dfx > 0.0 and math.isfinite(dfx):
            x_new = x - fx / dfx
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 2.0 * x if math.isinf(hi) else 0.5 * (lo + hi)
        if abs(x_new - x) <= xtol * abs(x) or (not math.isinf(hi) and hi - lo <= xtol * abs(hi)):
            return x_new
        x = x_new
    return x


def chi_square_quantile(df: float, p: float) -> float:
    """``p``-quantile of the chi-square distribution (``df`` may be fractional)."""
    _check_probability(p)
    if not df > 0:
        raise ValueError(f"degrees of freedom must be positive, got {df!r}")
    a = 0.5 * df
    # Wilson-Hilferty start, falling back to the small-x power law
    z = _ppnd16(p)
    c = 2.0 / (9.0 * df)
    wh = df * (1.0 - c + z * math.sqrt(c)) ** 3
    small = 2.0 * math.exp((math.log(p) + math.lgamma(a + 1.0)) / a)
    x0 = 0.5 * (wh if wh > 0.5 * small and wh > 0.0 else small)

    if p <= 0.5:
        def f(y):
            return gamma_p(a, y) - p
    else:
        q = 1.0 - p

        def f(y):
            return q - gamma_q(a, y)

    def fprime(y):
        return math.exp(-y + (a - 1.0) * math.log(y) - math.lgamma(a)) if y > 0.0 else 0.0

    return 2.0 * _invert(f, fprime, x0, 0.0, math.inf)


def _beta_quantile(a, b, p):
    lb = _log_beta(a, b)

    if p <= 0.5:
        def f(w):
            return beta_inc(a, b, w) - p
    else:
        q = 1.0 - p

        def f(w):
            return q - beta_inc(b, a, 1.0 - w)

    def fprime(w):
        if w <= 0.0 or w >= 1.0:
            return 0.0
        return math.exp((a - 1.0) * math.log(w) + (b - 1.0) * math.log1p(-w) - lb)

    return _invert(f, fprime, a / (a + b), 0.0, 1.0)


def f_quantile(df1: float, df2: float, p: float) -> float:
    """``p``-quantile of the F distribution; ``df2`` may be ``math.inf``."""
    _check_probability(p)
    if not (df1 > 0 and df2 > 0):
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(df2):
        return chi_square_quantile(df1, p) / df1
    if p <= 0.5:
        w = _beta_quantile(0.5 * df1, 0.5 * df2, p)
        return df2 * w / (df1 * (1.0 - w))
    # upper tail: solve for 1 - w, which keeps its relative precision near w = 1
    v = _beta_quantile(0.5 * df2, 0.5 * df1, 1.0 - p)
    return df2 * (1.0 - v) / (df1 * v)
