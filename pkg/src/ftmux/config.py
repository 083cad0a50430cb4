"""Experiment description shared by every other module.

A setup is a photon-pair source heralding into ``n`` (or ``2n``) frequency
bins, each owning a batch of ``m`` time bins, followed by a switchable
delay-loop memory, a circulator, and a fiber Bragg grating array that folds
all batches onto a common output bin.  Everything a rate calculation needs
is captured by :class:`SetupConfig` plus the component loss budget in
:class:`LossTable`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any


class ConfigError(ValueError):
    """Invalid configuration value or malformed config document."""


class Variant(Enum):
    """Which heralding outcomes count as success."""

    FIXED = "fixed"  # n photons in n designated frequency bins
    PARTIAL = "partial"  # n photons in any n of 2n frequency bins

    def __str__(self) -> str:
        return self.value


class Occupancy(Enum):
    """Memory occupancy model used by the partial-variant scheduler."""

    UNLIMITED = "unlimited"  # memory may store any number of photons at once
    SINGLE = "single"  # at most one stored photon; inject-on-eject allowed

    def __str__(self) -> str:
        return self.value


# Default component budget in dB, and the loss percentages each dB value
# must reproduce (vendor best estimates for commercially available parts).
DEFAULT_LOOP_DB: dict[int, float] = {1: 0.106, 10: 0.110, 100: 0.149}
DEFAULT_MISC_DB: dict[int, float] = {1: 0.510, 2: 0.720, 3: 0.931}
DEFAULT_FBG_TRANSMISSION_DB = 0.0436
DEFAULT_FBG_REFLECTION_DB = 0.0436
DEFAULT_FIBER_PER_TIMESTEP_DB = 0.00102
DEFAULT_CIRCULATOR_DB = 0.500

# (component label, dB, reference loss percent) for the validation report.
REFERENCE_LOSS_PERCENT: tuple[tuple[str, float, float], ...] = (
    ("loop_pass[1]", 0.106, 2.41),
    ("loop_pass[10]", 0.110, 2.50),
    ("loop_pass[100]", 0.149, 3.37),
    ("fbg_transmission", 0.0436, 1.00),
    ("fbg_reflection", 0.0436, 1.00),
    ("fiber_per_timestep", 0.00102, 0.0235),
    ("circulator_pass", 0.500, 10.9),
    ("misc[1 loop]", 0.510, 11.1),
    ("misc[2 loops]", 0.720, 15.3),
    ("misc[3 loops]", 0.931, 19.3),
)


@dataclass(frozen=True)
class LossTable:
    """Per-component insertion losses in dB for one concrete setup.

    ``loop_pass`` maps loop length in timesteps to the dB cost of a single
    pass through that loop.  ``misc`` bundles fiber coupling and the one
    mandatory pass through all switches and common-path optics; its value
    depends on how many loops the setup chains, so it is stored already
    resolved for the setup at hand.
    """

    loop_pass: dict[int, float]
    fbg_transmission: float
    fbg_reflection: float
    fiber_per_timestep: float
    circulator_pass: float
    misc: float

    def __post_init__(self) -> None:
        for length, db in self.loop_pass.items():
            if not (isinstance(length, int) and length >= 1):
                raise ConfigError(f"loop length must be a positive integer, got {length!r}")
            _require_db(f"loop_pass[{length}]", db)
        for name in ("fbg_transmission", "fbg_reflection", "fiber_per_timestep",
                     "circulator_pass", "misc"):
            _require_db(name, getattr(self, name))

    @classmethod
    def defaults(cls, loop_lengths: tuple[int, ...]) -> "LossTable":
        """Best-estimate budget for the given loop set."""
        missing = [L for L in loop_lengths if L not in DEFAULT_LOOP_DB]
        if missing:
            raise ConfigError(f"no default loop loss for lengths {missing}")
        if len(loop_lengths) not in DEFAULT_MISC_DB:
            raise ConfigError(f"no default misc loss for {len(loop_lengths)} loops")
        return cls(
            loop_pass={L: DEFAULT_LOOP_DB[L] for L in loop_lengths},
            fbg_transmission=DEFAULT_FBG_TRANSMISSION_DB,
            fbg_reflection=DEFAULT_FBG_REFLECTION_DB,
            fiber_per_timestep=DEFAULT_FIBER_PER_TIMESTEP_DB,
            circulator_pass=DEFAULT_CIRCULATOR_DB,
            misc=DEFAULT_MISC_DB[len(loop_lengths)],
        )

    @classmethod
    def zero(cls, loop_lengths: tuple[int, ...]) -> "LossTable":
        """All-zero budget: every photon survives with probability 1."""
        return cls(
            loop_pass={L: 0.0 for L in loop_lengths},
            fbg_transmission=0.0,
            fbg_reflection=0.0,
            fiber_per_timestep=0.0,
            circulator_pass=0.0,
            misc=0.0,
        )

    @property
    def is_zero(self) -> bool:
        return (
            all(v == 0.0 for v in self.loop_pass.values())
            and self.fbg_transmission == 0.0
            and self.fbg_reflection == 0.0
            and self.fiber_per_timestep == 0.0
            and self.circulator_pass == 0.0
            and self.misc == 0.0
        )


def _require_db(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{name} must be a number in dB, got {value!r}")
    if not value >= 0.0:
        raise ConfigError(f"{name} must be >= 0 dB, got {value}")


@dataclass(frozen=True)
class SetupConfig:
    """Complete description of one multiplexing setup.

    Attributes:
        p: per-cell heralding probability, in [0, 1].
        m: time bins per batch.
        n: output photons = number of target frequency bins.
        loss_table: component budget; must cover exactly ``loop_lengths``.
        t_bin: time-bin duration in seconds.  Affects only Hz-denominated
            outputs, never dimensionless per-bin rates.
        variant: FIXED needs all n designated batches filled; PARTIAL needs
            any n of 2n.
        loop_lengths: available memory-loop lengths in timesteps, strictly
            decreasing and ending in 1 so every delay is decomposable.
        occupancy: memory model for the PARTIAL scheduler.
    """

    p: float
    m: int
    n: int
    loss_table: LossTable
    t_bin: float = 1.0e-8
    variant: Variant = Variant.FIXED
    loop_lengths: tuple[int, ...] = (1,)
    occupancy: Occupancy = Occupancy.UNLIMITED

    def __post_init__(self) -> None:
        object.__setattr__(self, "loop_lengths", tuple(self.loop_lengths))
        object.__setattr__(self, "variant", _coerce_enum(Variant, self.variant))
        object.__setattr__(self, "occupancy", _coerce_enum(Occupancy, self.occupancy))
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ConfigError(f"m must be a positive integer, got {self.m!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not self.t_bin > 0.0:
            raise ConfigError(f"t_bin must be positive, got {self.t_bin}")
        lengths = self.loop_lengths
        if not lengths or lengths[-1] != 1:
            raise ConfigError(f"loop_lengths must end in 1, got {lengths}")
        if any(a <= b for a, b in zip(lengths, lengths[1:])):
            raise ConfigError(f"loop_lengths must be strictly decreasing, got {lengths}")
        if set(self.loss_table.loop_pass) != set(lengths):
            raise ConfigError(
                f"loss_table covers loops {sorted(self.loss_table.loop_pass)}, "
                f"config uses {sorted(lengths)}"
            )

    @property
    def batches(self) -> int:
        """Number of frequency bins / batches: n for FIXED, 2n for PARTIAL."""
        return self.n if self.variant is Variant.FIXED else 2 * self.n

    @property
    def total_bins(self) -> int:
        """Total scheme duration in time bins."""
        return self.batches * self.m

    @property
    def duration_s(self) -> float:
        return self.total_bins * self.t_bin

    @property
    def grid_shape(self) -> tuple[int, int]:
        """(frequency bins, time bins) of one heralded sample."""
        return self.batches, self.total_bins

    def batch_end(self, batch: int) -> int:
        """Global index of the final time bin of ``batch``."""
        return (batch + 1) * self.m - 1

    def fbg_depth(self, batch: int) -> int:
        """Gratings transmitted before reflection; earliest batch is deepest."""
        return (self.batches - 1) - batch

    def max_delay(self, batch: int) -> int:
        """Largest storable delay for a fill of ``batch``.

        FIXED delays stay within the batch; PARTIAL may pull a photon from
        any earlier bin, so the bound is the batch's final global bin.
        """
        if self.variant is Variant.FIXED:
            return self.m - 1
        return self.batch_end(batch)


def _coerce_enum(enum_cls: type, value: Any):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).lower())
    except ValueError:
        names = ", ".join(e.value for e in enum_cls)
        raise ConfigError(
            f"unknown {enum_cls.__name__.lower()} {value!r} (expected one of: {names})"
        ) from None


PRESET_NAMES = ("one-loop-default", "three-loop-default", "lossless")

_PRESET_LOOPS = {
    "one-loop-default": (1,),
    "three-loop-default": (100, 10, 1),
    "lossless": (1,),
}


def preset(
    name: str,
    *,
    m: int = 1,
    n: int = 4,
    variant: Variant = Variant.FIXED,
    occupancy: Occupancy = Occupancy.UNLIMITED,
) -> SetupConfig:
    """Named default setup: p=0.1, 10 ns bins, budget per the component table.

    ``one-loop-default`` uses a single 1-timestep loop, ``three-loop-default``
    chains 100-, 10-, and 1-timestep loops, ``lossless`` zeroes the budget.
    ``m``, ``n``, ``variant``, and ``occupancy`` are sweep parameters rather
    than part of the preset identity, so they are accepted as overrides.
    """
    if name not in _PRESET_LOOPS:
        raise ConfigError(f"unknown preset {name!r} (expected one of: {', '.join(PRESET_NAMES)})")
    loops = _PRESET_LOOPS[name]
    table = LossTable.zero(loops) if name == "lossless" else LossTable.defaults(loops)
    return SetupConfig(
        p=0.1,
        m=m,
        n=n,
        loss_table=table,
        t_bin=1.0e-8,
        variant=variant,
        loop_lengths=loops,
        occupancy=occupancy,
    )


# --- JSON config document ---------------------------------------------------
#
# The on-disk format mirrors the dataclass field names exactly; loop-pass
# keys are stringified loop lengths because JSON objects have string keys.

_LOSS_FIELDS = ("loop_pass", "fbg_transmission", "fbg_reflection",
                "fiber_per_timestep", "circulator_pass", "misc")


def config_to_dict(config: SetupConfig) -> dict[str, Any]:
    return {
        "p": config.p,
        "m": config.m,
        "n": config.n,
        "t_bin": config.t_bin,
        "variant": config.variant.value,
        "loop_lengths": list(config.loop_lengths),
        "occupancy": config.occupancy.value,
        "loss_table": {
            "loop_pass": {str(k): v for k, v in sorted(config.loss_table.loop_pass.items())},
            "fbg_transmission": config.loss_table.fbg_transmission,
            "fbg_reflection": config.loss_table.fbg_reflection,
            "fiber_per_timestep": config.loss_table.fiber_per_timestep,
            "circulator_pass": config.loss_table.circulator_pass,
            "misc": config.loss_table.misc,
        },
    }


def config_from_dict(doc: dict[str, Any]) -> SetupConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"config document must be an object, got {type(doc).__name__}")
    known = {f.name for f in fields(SetupConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = [k for k in ("p", "m", "n", "loss_table") if k not in doc]
    if missing:
        raise ConfigError(f"missing required config keys: {missing}")

    raw_table = doc["loss_table"]
    if not isinstance(raw_table, dict):
        raise ConfigError("loss_table must be an object")
    unknown = set(raw_table) - set(_LOSS_FIELDS)
    if unknown:
        raise ConfigError(f"unknown loss_table keys: {sorted(unknown)}")
    missing = [k for k in _LOSS_FIELDS if k not in raw_table]
    if missing:
        raise ConfigError(f"missing loss_table keys: {missing}")
    try:
        loop_pass = {int(k): float(v) for k, v in raw_table["loop_pass"].items()}
    except (TypeError, ValueError, AttributeError):
        raise ConfigError("loop_pass must map loop lengths to dB values") from None
    table = LossTable(
        loop_pass=loop_pass,
        fbg_transmission=raw_table["fbg_transmission"],
        fbg_reflection=raw_table["fbg_reflection"],
        fiber_per_timestep=raw_table["fiber_per_timestep"],
        circulator_pass=raw_table["circulator_pass"],
        misc=raw_table["misc"],
    )
    kwargs: dict[str, Any] = {
        "p": doc["p"],
        "m": doc["m"],
        "n": doc["n"],
        "loss_table": table,
    }
    if "t_bin" in doc:
        kwargs["t_bin"] = doc["t_bin"]
    if "variant" in doc:
        kwargs["variant"] = doc["variant"]
    if "loop_lengths" in doc:
        lengths = doc["loop_lengths"]
        if not isinstance(lengths, (list, tuple)):
            raise ConfigError("loop_lengths must be a list")
        kwargs["loop_lengths"] = tuple(int(v) for v in lengths)
    if "occupancy" in doc:
        kwargs["occupancy"] = doc["occupancy"]
    return SetupConfig(**kwargs)


def load_config(path: str) -> SetupConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def save_config(config: SetupConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=False)
        fh.write("\n")
