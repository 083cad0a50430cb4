"""Rate analysis and simulation for frequency-time multiplexed photon sources.

The scheme heralds photon pairs into discrete frequency-time bins, delays
the last photon of each batch to the batch's final bin with switchable
memory loops, and folds all frequencies onto a common output bin with a
fiber Bragg grating array.  This package evaluates the closed-form n-photon
success probabilities and rates with and without component losses, finds
the optimal batch size, and Monte Carlo-estimates rates for the variant
that accepts any n of 2n frequency bins.
"""

from .config import (
    ConfigError,
    LossTable,
    Occupancy,
    SetupConfig,
    Variant,
    config_from_dict,
    config_to_dict,
    load_config,
    preset,
    save_config,
)
from .loss import (
    DelayAssignment,
    db_to_survival,
    decompose_delay,
    delay_assignment,
    path_loss_db,
    survival_prob,
    survival_table,
)
from .montecarlo import McEstimate, McSettings, mc_estimate, mc_optimal_m
from .rates import (
    RateResult,
    epsilon_m,
    epsilon_rate,
    improvement_ratio,
    lossless_rate,
    lossless_success,
    lossy_rate,
    lossy_success,
    optimal_m,
)
from .sampling import GridStream, derive_seed, sample_grid
from .scheduling import (
    BruteForceResult,
    Schedule,
    brute_force_success,
    grid_from_csv,
    grid_to_csv,
    schedule_fixed,
    schedule_partial,
    schedule_survival,
)

__version__ = "0.1.0"

__all__ = [
    "BruteForceResult",
    "ConfigError",
    "DelayAssignment",
    "GridStream",
    "LossTable",
    "McEstimate",
    "McSettings",
    "Occupancy",
    "RateResult",
    "Schedule",
    "SetupConfig",
    "Variant",
    "brute_force_success",
    "config_from_dict",
    "config_to_dict",
    "db_to_survival",
    "decompose_delay",
    "delay_assignment",
    "derive_seed",
    "epsilon_m",
    "epsilon_rate",
    "grid_from_csv",
    "grid_to_csv",
    "improvement_ratio",
    "load_config",
    "lossless_rate",
    "lossless_success",
    "lossy_rate",
    "lossy_success",
    "mc_estimate",
    "mc_optimal_m",
    "optimal_m",
    "path_loss_db",
    "preset",
    "sample_grid",
    "save_config",
    "schedule_fixed",
    "schedule_partial",
    "schedule_survival",
    "survival_prob",
    "survival_table",
    "__version__",
]
