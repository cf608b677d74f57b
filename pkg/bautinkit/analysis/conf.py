"""Numeric defaults of the toolkit, read from Django settings at call time."""

import dataclasses
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Any

from django.conf import settings

from .exceptions import ConfigurationError

_overrides: ContextVar[dict[str, Any] | None] = ContextVar("bautinkit_knob_overrides", default=None)


@dataclass(frozen=True)
class Knobs:
    k_max: int
    samples: int
    seed: int
    safety_factor: float
    central_tolerance: float
    zero_on_contour_tolerance: float
    winding_initial_samples: int
    winding_sample_cap: int
    contour_retries: int
    degree_cap: int
    stability_threshold: float
    growth_threshold: float
    chart_depth: int
    chart_max_exponent: int
    cartan_grid: int
    relative_tolerance: float
    brudnyi_radius: float
    distribute_sweeps: bool
    sweep_chunk_size: int


def knobs() -> Knobs:
    current = Knobs(
        k_max=settings.BAUTINKIT_K_MAX,
        samples=settings.BAUTINKIT_SAMPLES,
        seed=settings.BAUTINKIT_SEED,
        safety_factor=settings.BAUTINKIT_SAFETY_FACTOR,
        central_tolerance=settings.BAUTINKIT_CENTRAL_TOLERANCE,
        zero_on_contour_tolerance=settings.BAUTINKIT_ZERO_ON_CONTOUR_TOLERANCE,
        winding_initial_samples=settings.BAUTINKIT_WINDING_INITIAL_SAMPLES,
        winding_sample_cap=settings.BAUTINKIT_WINDING_SAMPLE_CAP,
        contour_retries=settings.BAUTINKIT_CONTOUR_RETRIES,
        degree_cap=settings.BAUTINKIT_DEGREE_CAP,
        stability_threshold=settings.BAUTINKIT_STABILITY_THRESHOLD,
        growth_threshold=settings.BAUTINKIT_GROWTH_THRESHOLD,
        chart_depth=settings.BAUTINKIT_CHART_DEPTH,
        chart_max_exponent=settings.BAUTINKIT_CHART_MAX_EXPONENT,
        cartan_grid=settings.BAUTINKIT_CARTAN_GRID,
        relative_tolerance=settings.BAUTINKIT_RELATIVE_TOLERANCE,
        brudnyi_radius=settings.BAUTINKIT_BRUDNYI_RADIUS,
        distribute_sweeps=settings.BAUTINKIT_DISTRIBUTE_SWEEPS,
        sweep_chunk_size=settings.BAUTINKIT_SWEEP_CHUNK_SIZE,
    )
    return dataclasses.replace(current, **(_overrides.get() or {}))


@contextmanager
def overridden(**values) -> Iterator[Knobs]:
    """Layer knob values over the settings for the duration of a run; None leaves a knob alone."""
    names = {f.name for f in dataclasses.fields(Knobs)}
    unknown = set(values) - names
    if unknown:
        raise ConfigurationError(f"Unknown knobs {sorted(unknown)}")
    layered = {**(_overrides.get() or {}), **{k: v for k, v in values.items() if v is not None}}
    token = _overrides.set(layered)
    try:
        yield knobs()
    finally:
        _overrides.reset(token)


def active_overrides() -> dict[str, Any]:
    return dict(_overrides.get() or {})
