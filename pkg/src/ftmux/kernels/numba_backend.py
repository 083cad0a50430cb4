"""JIT-compiled chunk evaluators.

Each function scores a chunk of occupancy grids ``occ`` of shape
(samples, batches, bins) against a precomputed survival table and returns,
per sample, whether a schedule exists and the joint survival of the best
one.  Scan order is fixed (delays ascending, batches ascending, strict-``>``
maxima) so results are reproducible and match the numpy backend bit for bit.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def fixed_chunk(occ, m, table):
    samples, batches, _ = occ.shape
    ok = np.zeros(samples, dtype=np.bool_)
    surv = np.zeros(samples, dtype=np.float64)
    for i in range(samples):
        value = 1.0
        filled = True
        for b in range(batches):
            end = (b + 1) * m - 1
            # last photon of the batch; its trailing gap is the delay
            delay = -1
            for tau in range(m):
                if occ[i, b, end - tau]:
                    delay = tau
                    break
            if delay < 0:
                filled = False
                break
            value *= table[b, delay]
        if filled:
            ok[i] = True
            surv[i] = value
    return ok, surv


@njit(cache=True, nogil=True)
def partial_unlimited_chunk(occ, m, n_fill, table):
    samples, batches, _ = occ.shape
    ok = np.zeros(samples, dtype=np.bool_)
    surv = np.zeros(samples, dtype=np.float64)
    best = np.empty(batches, dtype=np.float64)
    used = np.empty(batches, dtype=np.bool_)
    for i in range(samples):
        fillable = 0
        for b in range(batches):
            end = (b + 1) * m - 1
            top = 0.0
            for tau in range(end + 1):
                if occ[i, b, end - tau]:
                    v = table[b, tau]
                    if v > top:
                        top = v
            best[b] = top
            if top > 0.0:
                fillable += 1
        if fillable < n_fill:
            continue
        # keep the n_fill largest per-batch survivals (ties to the lower batch)
        for b in range(batches):
            used[b] = False
        for _ in range(n_fill):
            pick = -1
            pick_val = 0.0
            for b in range(batches):
                if not used[b] and best[b] > pick_val:
                    pick_val = best[b]
                    pick = b
            used[pick] = True
        value = 1.0
        for b in range(batches):
            if used[b]:
                value *= best[b]
        ok[i] = True
        surv[i] = value
    return ok, surv


@njit(cache=True, nogil=True)
def partial_single_chunk(occ, m, n_fill, table):
    samples, batches, _ = occ.shape
    ok = np.zeros(samples, dtype=np.bool_)
    surv = np.zeros(samples, dtype=np.float64)
    # value[b, k]: best product of k fills ending at batch b, where each
    # fill after batch b must source no earlier than b's final bin
    value = np.empty((batches, n_fill + 1), dtype=np.float64)
    for i in range(samples):
        for b in range(batches):
            for k in range(n_fill + 1):
                value[b, k] = 0.0
        for b in range(batches):
            end = (b + 1) * m - 1
            top = 0.0
            for tau in range(end + 1):
                if occ[i, b, end - tau]:
                    v = table[b, tau]
                    if v > top:
                        top = v
            value[b, 1] = top
            for k in range(2, n_fill + 1):
                mx = 0.0
                for prev in range(b):
                    pv = value[prev, k - 1]
                    if pv <= 0.0:
                        continue
                    smin = (prev + 1) * m - 1  # shared endpoint allowed
                    top2 = 0.0
                    for s in range(end, smin - 1, -1):
                        if occ[i, b, s]:
                            v = table[b, end - s]
                            if v > top2:
                                top2 = v
                    if top2 > 0.0:
                        cand = pv * top2
                        if cand > mx:
                            mx = cand
                value[b, k] = mx
        top_total = 0.0
        for b in range(batches):
            if value[b, n_fill] > top_total:
                top_total = value[b, n_fill]
        if top_total > 0.0:
            ok[i] = True
            surv[i] = top_total
    return ok, surv
