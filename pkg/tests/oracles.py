"""Brute-force reference computations shared by the tests."""

import itertools

import numpy as np

from labprec.resampling import Scheme


def triples(y):
    """Independent (r, L) computation for a batch of k x n tables."""
    y = np.asarray(y, dtype=float)
    k, n = y.shape[-2:]
    rm = y.mean(axis=-1)
    mse = ((y - rm[..., None]) ** 2).sum(axis=(-1, -2)) / (k * (n - 1))
    msa = n * ((rm - rm.mean(axis=-1, keepdims=True)) ** 2).sum(axis=-1) / (k - 1)
    return np.stack([mse, (msa - mse) / n], axis=-1)


def enumerate_outcomes(y, scheme):
    """Every equally likely resample of ``y`` under ``scheme``."""
    k, n = y.shape
    rows_all = list(itertools.product(range(k), repeat=k))
    ident_rows = [tuple(range(k))]
    shared = [tuple(c) * k for c in itertools.product(range(n), repeat=n)]
    repeated = list(itertools.product(range(n), repeat=k * n))
    ident_cols = [tuple(range(n)) * k]
    rows, cols = {
        Scheme.BOOT_I: (rows_all, ident_cols),
        Scheme.BOOT_J_SINGLE: (ident_rows, shared),
        Scheme.BOOT_J_REPEATED: (ident_rows, repeated),
        Scheme.BOOT_IJ_REPEATED: (rows_all, repeated),
        Scheme.BOOT_IJ_SINGLE: (rows_all, shared),
    }[scheme]
    r = np.array(rows)[:, None, :, None]
    c = np.array(cols).reshape(len(cols), k, n)[None]
    return y[r, c].reshape(-1, k, n)
