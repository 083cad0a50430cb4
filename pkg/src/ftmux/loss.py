"""Per-photon traversal survival from a dB loss ledger.

A photon that fills batch ``nu`` after waiting ``tau`` timesteps in the
memory pays, in dB: the misc budget (one mandatory pass through switches and
common optics), two circulator passes, one loop-pass entry per memory-loop
traversal, and the grating-array path set by its depth ``d``: it transmits
``d`` gratings twice, reflects once, and the round trip over ``d`` pitches of
``m/2`` timesteps each adds ``d*m`` timesteps of fiber.  dB values add along
the path; survival is ``10**(-total_db/10)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SetupConfig


def db_to_survival(loss_db: float) -> float:
    """Survival fraction for a path with total loss ``loss_db`` >= 0 dB."""
    if not loss_db >= 0.0:
        raise ValueError(f"loss must be >= 0 dB, got {loss_db}")
    return 10.0 ** (-loss_db / 10.0)


def loss_percent(loss_db: float) -> float:
    """Loss fraction in percent, the companion column of the dB budget."""
    return 100.0 * (1.0 - db_to_survival(loss_db))


def decompose_delay(tau: int, loop_lengths: tuple[int, ...]) -> tuple[int, ...]:
    """Greedy largest-first pass counts whose weighted sum is ``tau``.

    For loop set (100, 10, 1) this is the base-10 digit expansion, which is
    also pass-minimal.  Greedy is used for every loop set, even ones where
    it is not pass-minimal, because it is deterministic and explainable.
    """
    if tau < 0:
        raise ValueError(f"delay must be >= 0, got {tau}")
    counts = []
    remainder = int(tau)
    for length in loop_lengths:
        passes, remainder = divmod(remainder, length)
        counts.append(passes)
    if remainder:  # loop_lengths did not end in 1
        raise ValueError(f"loop set {loop_lengths} cannot realize delay {tau}")
    return tuple(counts)


@dataclass(frozen=True)
class DelayAssignment:
    """One batch's fill: which batch, how long stored, and the grating depth.

    ``loop_passes`` maps loop length to pass count and must re-sum to
    ``delay``.  ``fbg_depth`` is determined by the batch index (earliest
    batch reflects deepest) and is carried explicitly so a stored schedule
    is self-describing.
    """

    batch_index: int
    delay: int
    fbg_depth: int
    loop_passes: dict[int, int]


def delay_assignment(config: SetupConfig, batch: int, delay: int) -> DelayAssignment:
    """Build the canonical assignment for filling ``batch`` with delay ``delay``."""
    _check_range(config, batch, delay)
    counts = decompose_delay(delay, config.loop_lengths)
    return DelayAssignment(
        batch_index=batch,
        delay=delay,
        fbg_depth=config.fbg_depth(batch),
        loop_passes=dict(zip(config.loop_lengths, counts)),
    )


def path_loss_db(config: SetupConfig, assignment: DelayAssignment) -> float:
    """Total dB along one photon's path, summed from the component budget."""
    _check_range(config, assignment.batch_index, assignment.delay)
    if assignment.fbg_depth != config.fbg_depth(assignment.batch_index):
        raise ValueError(
            f"fbg_depth {assignment.fbg_depth} inconsistent with batch "
            f"{assignment.batch_index} of {config.batches}"
        )
    if set(assignment.loop_passes) != set(config.loop_lengths):
        raise ValueError(
            f"loop_passes keys {sorted(assignment.loop_passes)} do not match "
            f"configured loops {sorted(config.loop_lengths)}"
        )
    realized = sum(count * length for length, count in assignment.loop_passes.items())
    if realized != assignment.delay:
        raise ValueError(
            f"loop passes realize delay {realized}, assignment says {assignment.delay}"
        )
    if any(count < 0 for count in assignment.loop_passes.values()):
        raise ValueError("loop pass counts must be >= 0")

    table = config.loss_table
    d = assignment.fbg_depth
    total = table.misc + 2.0 * table.circulator_pass
    for length, count in assignment.loop_passes.items():
        total += count * table.loop_pass[length]
    total += 2.0 * d * table.fbg_transmission
    total += table.fbg_reflection
    total += d * config.m * table.fiber_per_timestep
    return total


def survival_prob(config: SetupConfig, batch: int, delay: int) -> float:
    """Probability the fill photon traverses the whole apparatus unabsorbed."""
    return db_to_survival(path_loss_db(config, delay_assignment(config, batch, delay)))


def survival_table(config: SetupConfig) -> np.ndarray:
    """Survival for every (batch, delay) pair, shape (batches, max delay + 1).

    Row ``nu`` column ``tau`` equals ``survival_prob(config, nu, tau)`` for
    every delay batch ``nu`` may legally use.  The column count is ``m`` for
    the FIXED variant and ``total_bins`` for PARTIAL (sized for the latest
    batch); earlier PARTIAL rows keep the same ledger formula past their
    usable range so the array stays rectangular.
    """
    table = config.loss_table
    n_delays = config.max_delay(config.batches - 1) + 1
    taus = np.arange(n_delays)
    loop_db = np.zeros(n_delays)
    remainder = taus.copy()
    for length in config.loop_lengths:
        passes, remainder = np.divmod(remainder, length)
        loop_db += passes * table.loop_pass[length]

    depths = (config.batches - 1) - np.arange(config.batches)
    base = table.misc + 2.0 * table.circulator_pass + table.fbg_reflection
    per_batch = base + depths * (2.0 * table.fbg_transmission
                                 + config.m * table.fiber_per_timestep)
    total_db = per_batch[:, None] + loop_db[None, :]
    return 10.0 ** (-total_db / 10.0)


def _check_range(config: SetupConfig, batch: int, delay: int) -> None:
    if not 0 <= batch < config.batches:
        raise ValueError(f"batch index {batch} outside [0, {config.batches})")
    if not 0 <= delay <= config.max_delay(batch):
        raise ValueError(
            f"delay {delay} outside [0, {config.max_delay(batch)}] "
            f"for batch {batch} ({config.variant})"
        )
