"""Pure-numpy chunk evaluators, the fallback when numba is unavailable.

Mirrors the numba backend operation for operation: maxima are taken over
the same candidate sets with first-occurrence tie-breaking, and products
accumulate in ascending batch order, so outputs are bit-identical between
the two backends.
"""

from __future__ import annotations

import numpy as np


def fixed_chunk(occ, m, table):
    samples, batches, _ = occ.shape
    ok = np.ones(samples, dtype=np.bool_)
    surv = np.ones(samples, dtype=np.float64)
    for b in range(batches):
        window = occ[:, b, b * m : (b + 1) * m]
        has = window.any(axis=1)
        delay = window[:, ::-1].argmax(axis=1)  # trailing-empty count of the last photon
        ok &= has
        surv = surv * np.where(has, table[b, delay], 0.0)
    surv = np.where(ok, surv, 0.0)
    return ok, surv


def _best_per_batch(occ, m, table, b):
    """Best fill survival of batch b per sample; 0 where unfillable."""
    end = (b + 1) * m - 1
    window = occ[:, b, : end + 1]  # column s = source bin, delay = end - s
    return (window * table[b, end::-1]).max(axis=1)


def partial_unlimited_chunk(occ, m, n_fill, table):
    samples, batches, _ = occ.shape
    best = np.empty((samples, batches), dtype=np.float64)
    for b in range(batches):
        best[:, b] = _best_per_batch(occ, m, table, b)
    ok = (best > 0.0).sum(axis=1) >= n_fill
    # keep the n_fill largest per-batch survivals (ties to the lower batch)
    work = best.copy()
    chosen = np.zeros((samples, batches), dtype=np.bool_)
    rows = np.arange(samples)
    for _ in range(n_fill):
        pick = work.argmax(axis=1)
        chosen[rows, pick] = True
        work[rows, pick] = -1.0
    surv = np.ones(samples, dtype=np.float64)
    for b in range(batches):
        surv = surv * np.where(chosen[:, b], best[:, b], 1.0)
    surv = np.where(ok, surv, 0.0)
    return ok, surv


def partial_single_chunk(occ, m, n_fill, table):
    samples, batches, _ = occ.shape
    # value[b, k]: best product of k fills ending at batch b (see numba twin)
    value = np.zeros((batches, n_fill + 1, samples), dtype=np.float64)
    for b in range(batches):
        end = (b + 1) * m - 1
        value[b, 1] = _best_per_batch(occ, m, table, b)
        for k in range(2, n_fill + 1):
            mx = np.zeros(samples, dtype=np.float64)
            for prev in range(b):
                pv = value[prev, k - 1]
                smin = (prev + 1) * m - 1  # shared endpoint allowed
                window = occ[:, b, smin : end + 1]
                top2 = (window * table[b, end - smin :: -1]).max(axis=1)
                mx = np.maximum(mx, pv * top2)
            value[b, k] = mx
    surv = value[:, n_fill, :].max(axis=0)
    ok = surv > 0.0
    return ok, surv
