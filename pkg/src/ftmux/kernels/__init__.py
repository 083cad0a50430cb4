"""Chunk-evaluator backends for the Monte Carlo hot loop.

Two interchangeable implementations exist: ``numba_backend`` (JIT-compiled,
used when numba is importable) and ``numpy_backend`` (pure vectorized
fallback).  Selection comes from the ``FTMUX_BACKEND`` environment variable
(``auto``, ``numba``, or ``numpy``; default ``auto`` prefers numba), with a
programmatic override for benchmarks and tests.  The two backends follow the
same scan and reduction order and produce bit-identical outputs.
"""

from __future__ import annotations

import importlib
import os

BACKEND_ENV = "FTMUX_BACKEND"

_override: str | None = None
_numba_usable: bool | None = None


def _numba_available() -> bool:
    global _numba_usable
    if _numba_usable is None:
        try:
            importlib.import_module("numba")
            _numba_usable = True
        except ImportError:
            _numba_usable = False
    return _numba_usable


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if _numba_available() else ("numpy",)


def use_backend(name: str | None) -> None:
    """Force a backend by name; ``None`` restores the environment choice."""
    global _override
    if name is not None and name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    _override = name


def active_backend() -> str:
    choice = _override or os.environ.get(BACKEND_ENV, "").strip().lower() or "auto"
    if choice == "auto":
        return "numba" if _numba_available() else "numpy"
    if choice not in ("numba", "numpy"):
        raise ValueError(
            f"{BACKEND_ENV} must be 'auto', 'numba', or 'numpy', got {choice!r}"
        )
    if choice == "numba" and not _numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    return choice


def get_kernels():
    """Active backend module exposing the three ``*_chunk`` evaluators."""
    if active_backend() == "numba":
        return importlib.import_module(f"{__name__}.numba_backend")
    return importlib.import_module(f"{__name__}.numpy_backend")
