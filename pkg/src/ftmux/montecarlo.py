"""Sampling estimator for success probabilities and rates.

Per sample: draw an occupancy grid, ask the scheduler whether a fill
schedule exists (lossless contribution: the indicator) and, if so, take the
survival probability of the selected schedule (lossy contribution: the
probability itself, not a Bernoulli draw, which mirrors the procedure's
averaging step and cuts variance).  Averages over all samples become
success probabilities; dividing by the scheme duration in bins gives rates.

Determinism contract: results are a pure function of (config, samples,
seed).  Samples are addressed by index into a counter-based stream and
evaluated in fixed-size chunks; chunk partial sums are combined with
exactly-rounded summation, so neither chunk scheduling nor worker count can
change a single bit of the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import Occupancy, SetupConfig, Variant
from .kernels import get_kernels
from .loss import survival_table
from .rates import RateResult
from .sampling import M_SCAN_LABEL, GridStream, derive_seed

CHUNK_SAMPLES = 2048


@dataclass(frozen=True)
class McSettings:
    """Sample count, stream seed, and a worker-count hint.

    ``worker_count`` only affects wall-clock time, never results.
    """

    samples: int = 1_000_000
    seed: int = 0
    worker_count: int = 1

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")


@dataclass(frozen=True)
class McEstimate:
    """Lossless and lossy estimates from one run over the same grids."""

    lossless: RateResult
    lossy: RateResult


def _chunk_spans(samples: int) -> list[tuple[int, int]]:
    return [(start, min(CHUNK_SAMPLES, samples - start))
            for start in range(0, samples, CHUNK_SAMPLES)]


def mc_estimate(config: SetupConfig, settings: McSettings) -> McEstimate:
    """Estimate lossless and lossy success and rates from sampled grids."""
    stream = GridStream(config, settings.seed)
    kernels = get_kernels()
    table = survival_table(config)
    m, n = config.m, config.n

    if config.variant is Variant.FIXED:
        def evaluate(occ):
            return kernels.fixed_chunk(occ, m, table)
    elif config.occupancy is Occupancy.UNLIMITED:
        def evaluate(occ):
            return kernels.partial_unlimited_chunk(occ, m, n, table)
    else:
        def evaluate(occ):
            return kernels.partial_single_chunk(occ, m, n, table)

    def run_chunk(span: tuple[int, int]) -> tuple[int, float, float]:
        start, count = span
        ok, surv = evaluate(stream.chunk(start, count))
        return (int(np.count_nonzero(ok)), float(np.sum(surv)), float(np.sum(surv * surv)))

    spans = _chunk_spans(settings.samples)
    if settings.worker_count == 1 or len(spans) == 1:
        partials = [run_chunk(span) for span in spans]
    else:
        with ThreadPoolExecutor(max_workers=settings.worker_count) as pool:
            partials = list(pool.map(run_chunk, spans))

    total = settings.samples
    ok_total = sum(part[0] for part in partials)
    surv_sum = math.fsum(part[1] for part in partials)
    surv_sq_sum = math.fsum(part[2] for part in partials)

    lossless_mean = ok_total / total
    lossy_mean = surv_sum / total
    if total > 1:
        # indicator samples: sum of squares equals the sum
        var_lossless = max(ok_total - ok_total * ok_total / total, 0.0) / (total - 1)
        var_lossy = max(surv_sq_sum - surv_sum * surv_sum / total, 0.0) / (total - 1)
    else:
        var_lossless = var_lossy = 0.0
    stderr_lossless = math.sqrt(var_lossless / total)
    stderr_lossy = math.sqrt(var_lossy / total)

    bins = config.total_bins

    def result(mean: float, stderr: float) -> RateResult:
        per_bin = mean / bins
        return RateResult(mean, per_bin, per_bin / config.t_bin, float(m), stderr)

    return McEstimate(result(lossless_mean, stderr_lossless),
                      result(lossy_mean, stderr_lossy))


def mc_optimal_m(config: SetupConfig, settings: McSettings,
                 m_max: int) -> tuple[int, McEstimate]:
    """Scan batch sizes 1..m_max by Monte Carlo; argmax of the lossy rate.

    Each m gets its own derived sub-seed so estimates are independent and
    reproducible no matter which subset of the scan is re-run.  Ties go to
    the smaller m.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    best: tuple[int, McEstimate] | None = None
    for m in range(1, m_max + 1):
        sub = replace(settings, seed=derive_seed(settings.seed, M_SCAN_LABEL, m))
        estimate = mc_estimate(replace(config, m=m), sub)
        if best is None or estimate.lossy.rate_per_bin > best[1].lossy.rate_per_bin:
            best = (m, estimate)
    assert best is not None
    return best
