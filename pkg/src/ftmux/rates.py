"""Closed-form success probabilities and rates for the FIXED variant.

Per batch, at least one photon arrives with probability ``1-(1-p)**m``; with
``n`` independent batches the lossless scheme succeeds with probability
``(1-(1-p)**m)**n`` over a duration of ``n*m`` time bins.  The lossy variant
weights each batch by the survival of its fill photon: the fill is the last
photon of the batch, and the number of trailing empty bins after it equals
the delay it must spend in memory, so the per-batch success becomes
``sum_tau p*(1-p)**tau * P(nu, tau)``.  A guarantee-style batch size and
rate (success at least ``1-eps``) and the optimal-batch-size search round
out the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import SetupConfig, Variant
from .loss import survival_table

OBJECTIVES = ("lossless", "lossy")


@dataclass(frozen=True)
class RateResult:
    """A success probability together with both rate denominations.

    ``rate_per_bin`` is success over the scheme duration in time bins and is
    dimensionless; ``rate_hz`` divides by the wall-clock duration instead.
    ``m_used`` records the batch size behind the number; it is real-valued
    because the guarantee-style rate uses the unrounded logarithm.  ``stderr``
    is the standard error of ``success_prob`` and is 0 for closed forms.
    """

    success_prob: float
    rate_per_bin: float
    rate_hz: float
    m_used: float
    stderr: float = 0.0

    def rate_stderr_per_bin(self, batches: int) -> float:
        """stderr rescaled from the success scale to the per-bin rate scale."""
        return self.stderr / (batches * self.m_used)


def _check_pmn(p: float, m: int, n: int) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")


def lossless_success(p: float, m: int, n: int) -> float:
    """Probability every one of ``n`` batches holds at least one photon."""
    _check_pmn(p, m, n)
    return (1.0 - (1.0 - p) ** m) ** n


def lossless_rate(p: float, m: int, n: int, *, t_bin: float = 1.0e-8) -> RateResult:
    """Lossless n-photon rate: success over the ``n*m``-bin duration."""
    _check_pmn(p, m, n)
    if n < 1:
        raise ValueError("rate needs n >= 1")
    success = lossless_success(p, m, n)
    per_bin = success / (m * n)
    return RateResult(success, per_bin, per_bin / t_bin, float(m))


def _batch_log(p: float, n: int, eps: float) -> float:
    """Real-valued batch size log_{1/(1-p)}(n/eps) behind the guarantee."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"guarantee needs 0 < p < 1, got {p}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.log(n / eps) / math.log(1.0 / (1.0 - p))


def epsilon_m(p: float, n: int, eps: float) -> int:
    """Smallest integer batch size guaranteeing success >= 1 - eps."""
    m = max(1, math.ceil(_batch_log(p, n, eps)))
    # ceil can land one short when the log sits within rounding of an integer
    while lossless_success(p, m, n) < 1.0 - eps:
        m += 1
    return m


def epsilon_rate(p: float, n: int, eps: float, *, t_bin: float = 1.0e-8) -> RateResult:
    """Guaranteed-success rate (1-eps)/(n*log_{1/(1-p)}(n/eps)).

    Uses the unrounded logarithm as the batch size, so this is the idealized
    achievable rate rather than the integer-m operating point; see
    :func:`epsilon_m` for the discrete companion.
    """
    m_real = _batch_log(p, n, eps)
    per_bin = (1.0 - eps) / (n * m_real)
    return RateResult(1.0 - eps, per_bin, per_bin / t_bin, m_real)


def lossy_success(config: SetupConfig) -> float:
    """Probability all n batches are filled and no fill photon is absorbed."""
    if config.variant is not Variant.FIXED:
        raise ValueError("closed-form lossy success applies to the FIXED variant")
    m = config.m
    weights = config.p * (1.0 - config.p) ** np.arange(m)
    per_batch = survival_table(config) @ weights
    total = 1.0
    for value in per_batch:  # fixed ascending order keeps the product reproducible
        total *= float(value)
    return total


def lossy_rate(config: SetupConfig) -> RateResult:
    """Lossy n-photon rate over the ``n*m``-bin duration."""
    success = lossy_success(config)
    per_bin = success / config.total_bins
    return RateResult(success, per_bin, per_bin / config.t_bin, float(config.m))


def optimal_m(config: SetupConfig, m_max: int, objective: str = "lossy") -> tuple[int, RateResult]:
    """Exhaustive scan of batch sizes 1..m_max; ties go to the smaller m.

    The scan is exhaustive rather than bracketing because the objective is
    cheap and unimodality is observed, not proven.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    best: tuple[int, RateResult] | None = None
    for m in range(1, m_max + 1):
        if objective == "lossless":
            result = lossless_rate(config.p, m, config.n, t_bin=config.t_bin)
        else:
            result = lossy_rate(replace(config, m=m))
        if best is None or result.rate_per_bin > best[1].rate_per_bin:
            best = (m, result)
    assert best is not None
    return best


def improvement_ratio(config: SetupConfig, m_max: int) -> float:
    """Optimized lossy rate over the no-multiplexing baseline p**n."""
    if config.p <= 0.0:
        raise ValueError("improvement ratio is undefined at p = 0")
    _, result = optimal_m(config, m_max, "lossy")
    return result.rate_per_bin / config.p ** config.n
