"""Memory switching schedules for sampled photon grids.

A grid is a boolean (frequency x time) occupancy matrix.  Batch ``nu`` can
only ever be served by frequency-``nu`` photons (the grating array is
passive hardware), and the memory can only delay, never advance, so a
photon at global time ``s`` may fill batch ``nu`` iff ``s`` is at most the
batch's final bin.  The FIXED variant fills every batch with its last
in-batch photon; the PARTIAL variant picks which n of 2n batches to fill
and which photon serves each, maximizing the joint survival probability.

These are the slow, obviously-correct reference implementations; the Monte
Carlo driver dispatches to vectorized kernels that must agree with them
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .config import Occupancy, SetupConfig, Variant
from .loss import DelayAssignment, delay_assignment, survival_prob, survival_table

BRUTE_FORCE_MAX_CELLS = 16


@dataclass(frozen=True)
class Schedule:
    """Chosen fills (ascending batch index) and the batches left empty."""

    fills: tuple[DelayAssignment, ...]
    unfilled: tuple[int, ...]


@dataclass(frozen=True)
class BruteForceResult:
    """Exact success probabilities from full grid enumeration."""

    p_lossless: float
    p_lossy: float


def _as_grid(grid: np.ndarray, config: SetupConfig) -> np.ndarray:
    arr = np.asarray(grid, dtype=bool)
    if arr.shape != config.grid_shape:
        raise ValueError(f"grid shape {arr.shape} does not match config {config.grid_shape}")
    return arr


def schedule_fixed(grid: np.ndarray, config: SetupConfig) -> Schedule | None:
    """Fill each batch with its last in-batch photon; None if any batch is empty.

    The delay equals the count of trailing empty bins after that photon.
    """
    if config.variant is not Variant.FIXED:
        raise ValueError("schedule_fixed needs a FIXED-variant config")
    arr = _as_grid(grid, config)
    m = config.m
    fills = []
    for batch in range(config.n):
        window = arr[batch, batch * m : (batch + 1) * m]
        occupied = np.flatnonzero(window)
        if occupied.size == 0:
            return None
        delay = m - 1 - int(occupied[-1])
        fills.append(delay_assignment(config, batch, delay))
    return Schedule(tuple(fills), ())


def _batch_candidates(arr: np.ndarray, config: SetupConfig, batch: int,
                      min_source: int) -> np.ndarray:
    """Source bins that may fill ``batch`` with source >= min_source, ascending."""
    end = config.batch_end(batch)
    row = arr[batch, min_source : end + 1]
    return np.flatnonzero(row) + min_source


def _best_fill(arr: np.ndarray, table: np.ndarray, config: SetupConfig, batch: int,
               min_source: int) -> tuple[float, int]:
    """(survival, delay) of the best candidate, or (0.0, -1) if none.

    Ties in survival go to the smallest delay.
    """
    end = config.batch_end(batch)
    best_surv, best_delay = 0.0, -1
    for source in _batch_candidates(arr, config, batch, min_source)[::-1]:
        delay = end - int(source)
        surv = table[batch, delay]
        if surv > best_surv:
            best_surv, best_delay = surv, delay
    return best_surv, best_delay


def schedule_partial(grid: np.ndarray, config: SetupConfig) -> Schedule | None:
    """Fill exactly n of 2n batches maximizing joint survival; None if infeasible.

    Under UNLIMITED occupancy the batches are independent, so feasibility is
    just "at least n fillable" and the optimum keeps the n best per-batch
    survivals.  Under SINGLE occupancy the chosen storage intervals
    [source bin, batch end] must be pairwise non-overlapping (shared
    endpoints allowed: a photon may be injected the timestep another is
    ejected), which orders the chosen batches into a chain; the optimum is
    found by dynamic programming over (last chosen batch, fills so far).
    """
    if config.variant is not Variant.PARTIAL:
        raise ValueError("schedule_partial needs a PARTIAL-variant config")
    arr = _as_grid(grid, config)
    table = survival_table(config)
    if config.occupancy is Occupancy.UNLIMITED:
        return _partial_unlimited(arr, table, config)
    return _partial_single(arr, table, config)


def _partial_unlimited(arr, table, config: SetupConfig) -> Schedule | None:
    n, total = config.n, config.batches
    best = [_best_fill(arr, table, config, batch, 0) for batch in range(total)]
    fillable = [batch for batch in range(total) if best[batch][1] >= 0]
    if len(fillable) < n:
        return None
    chosen = sorted(sorted(fillable, key=lambda b: (-best[b][0], b))[:n])
    fills = tuple(delay_assignment(config, b, best[b][1]) for b in chosen)
    unfilled = tuple(b for b in range(total) if b not in set(chosen))
    return Schedule(fills, unfilled)


def _partial_single(arr, table, config: SetupConfig) -> Schedule | None:
    n, total = config.n, config.batches
    # value[b][k]: best product using k fills whose last one is batch b,
    # given that a fill after batch b may source no earlier than b's end.
    value = [[0.0] * (n + 1) for _ in range(total)]
    choice: dict[tuple[int, int], tuple[int, int]] = {}  # (b, k) -> (prev, delay)
    for b in range(total):
        surv, delay = _best_fill(arr, table, config, b, 0)
        if delay >= 0:
            value[b][1] = surv
            choice[(b, 1)] = (-1, delay)
        for k in range(2, n + 1):
            best_val, best_prev, best_delay = 0.0, -1, -1
            for prev in range(b):
                if value[prev][k - 1] <= 0.0:
                    continue
                surv, delay = _best_fill(arr, table, config, b, config.batch_end(prev))
                if delay < 0:
                    continue
                cand = value[prev][k - 1] * surv
                if cand > best_val:
                    best_val, best_prev, best_delay = cand, prev, delay
            if best_prev >= 0:
                value[b][k] = best_val
                choice[(b, k)] = (best_prev, best_delay)

    last = max(range(total), key=lambda b: (value[b][n], -b), default=-1)
    if last < 0 or value[last][n] <= 0.0:
        return None
    fills_rev = []
    b, k = last, n
    while b >= 0:
        prev, delay = choice[(b, k)]
        fills_rev.append(delay_assignment(config, b, delay))
        b, k = prev, k - 1
    fills = tuple(reversed(fills_rev))
    chosen = {fill.batch_index for fill in fills}
    unfilled = tuple(b for b in range(total) if b not in chosen)
    return Schedule(fills, unfilled)


def schedule_survival(schedule: Schedule, config: SetupConfig) -> float:
    """Probability that no fill photon is absorbed: product over fills."""
    total = 1.0
    for fill in schedule.fills:  # ascending batch order, same as the kernels
        total *= survival_prob(config, fill.batch_index, fill.delay)
    return total


def storage_intervals(schedule: Schedule, config: SetupConfig) -> list[tuple[int, int]]:
    """[source bin, batch-end bin] per fill, in fill order."""
    out = []
    for fill in schedule.fills:
        end = config.batch_end(fill.batch_index)
        out.append((end - fill.delay, end))
    return out


def intervals_disjoint(intervals: list[tuple[int, int]]) -> bool:
    """True when no two intervals overlap by more than a shared endpoint."""
    ordered = sorted(intervals)
    return all(b[0] >= a[1] for a, b in zip(ordered, ordered[1:]))


def _schedule_for(grid: np.ndarray, config: SetupConfig) -> Schedule | None:
    if config.variant is Variant.FIXED:
        return schedule_fixed(grid, config)
    return schedule_partial(grid, config)


def brute_force_success(config: SetupConfig) -> BruteForceResult:
    """Exact expectations by enumerating every grid, weighted by p^k (1-p)^(N-k).

    The lossless term is the indicator that a schedule exists; the lossy term
    is the survival of the selected schedule.  Capacity-limited to grids of
    at most 16 cells (2^16 enumerations).
    """
    freqs, bins = config.grid_shape
    cells = freqs * bins
    if cells > BRUTE_FORCE_MAX_CELLS:
        raise ValueError(
            f"enumeration needs F*T <= {BRUTE_FORCE_MAX_CELLS} cells, got {cells}"
        )
    p = config.p
    p_lossless = 0.0
    p_lossy = 0.0
    for bits in product((False, True), repeat=cells):
        grid = np.array(bits, dtype=bool).reshape(freqs, bins)
        k = int(grid.sum())
        weight = p ** k * (1.0 - p) ** (cells - k)
        schedule = _schedule_for(grid, config)
        if schedule is not None:
            p_lossless += weight
            p_lossy += weight * schedule_survival(schedule, config)
    return BruteForceResult(p_lossless, p_lossy)


def grid_to_csv(grid: np.ndarray, path: str) -> None:
    """Write a grid as 0/1 rows (one per frequency bin) for inspection."""
    arr = np.asarray(grid, dtype=int)
    if arr.ndim != 2:
        raise ValueError(f"grid must be 2-D, got shape {arr.shape}")
    np.savetxt(path, arr, fmt="%d", delimiter=",")


def grid_from_csv(path: str) -> np.ndarray:
    arr = np.loadtxt(path, delimiter=",", dtype=int, ndmin=2)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("grid cells must be 0 or 1")
    return arr.astype(bool)
