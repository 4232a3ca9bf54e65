"""Uniform parameter and operating-point sampling.

Every draw is keyed by (master seed, structure, draw index), so regenerating
a dataset is deterministic and independent of execution order.  Parameter
intervals default to the grid-following/grid-forming tables; the constants
xi_n, omega_f, r_v, omega_lpf and the viGFL division filter cutoff are fixed,
not sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from ..errors import ParamOutOfRange
from ..perunit import (GflControlParams, GfmControlParams, Mode,
                       OperatingPoint, StructureId)

GFL_INTERVALS = MappingProxyType({
    "omega_p": (6.0, 38.0),
    "omega_q": (6.0, 38.0),
    "omega_v": (3.0, 15.0),
    "omega_n": (50.0, 1500.0),
    "omega_cc": (1200.0, 3000.0),
    "delay": (50e-6, 200e-6),
})

GFM_INTERVALS = MappingProxyType({
    "inertia_h": (0.5, 5.0),
    "damping_xi": (0.7, 4.0),
    "omega_cc": (1200.0, 3000.0),
    "delay": (50e-6, 200e-6),
})

OP_RANGES = MappingProxyType({
    "p": (-1.0, 1.0),
    "q": (-0.4, 0.4),
    "v": (0.9, 1.1),
})

# stable per-structure stream tags for seeding
_STRUCT_TAG = {s: k + 1 for k, s in enumerate(StructureId)}
_OP_TAG = 97


def _check_intervals(intervals, defaults, label):
    for name, (lo, hi) in intervals.items():
        if name not in defaults:
            raise ParamOutOfRange(f"unknown {label} parameter '{name}'")
        dlo, dhi = defaults[name]
        if not (dlo <= lo < hi <= dhi):
            raise ParamOutOfRange(
                f"{label} interval {name}=({lo}, {hi}) outside table bounds "
                f"({dlo}, {dhi})")


@dataclass(frozen=True)
class SamplingSpec:
    """Sampling plan: seeds, counts per structure and interval overrides."""

    master_seed: int = 2024
    counts: dict = field(default_factory=lambda: {
        StructureId.vcGFM: 2500, StructureId.ccGFM: 2500,
        StructureId.pvGFL: 2500, StructureId.pqGFL: 2500,
    })
    holdout_counts: dict = field(default_factory=lambda: {
        StructureId.viGFL: 2500,
    })
    gfl_intervals: dict = field(default_factory=dict)
    gfm_intervals: dict = field(default_factory=dict)

    def __post_init__(self):
        for c in list(self.counts.values()) + list(self.holdout_counts.values()):
            if c < 0:
                raise ParamOutOfRange("sample counts must be >= 0")
        _check_intervals(self.gfl_intervals, GFL_INTERVALS, "GFL")
        _check_intervals(self.gfm_intervals, GFM_INTERVALS, "GFM")

    def interval(self, structure: StructureId, name: str):
        if structure.mode is Mode.GFL:
            return self.gfl_intervals.get(name, GFL_INTERVALS[name])
        return self.gfm_intervals.get(name, GFM_INTERVALS[name])


def _rng(spec: SamplingSpec, tag: int, draw_index: int) -> np.random.Generator:
    return np.random.default_rng([spec.master_seed, tag, draw_index])


def sample_parameters(spec: SamplingSpec, structure: StructureId,
                      draw_index: int):
    """One uniform draw of the structure family's parameter set."""
    rng = _rng(spec, _STRUCT_TAG[structure], draw_index)
    table = GFL_INTERVALS if structure.mode is Mode.GFL else GFM_INTERVALS
    drawn = {}
    for name in sorted(table):
        lo, hi = spec.interval(structure, name)
        drawn[name] = float(rng.uniform(lo, hi))
    cls = GflControlParams if structure.mode is Mode.GFL else GfmControlParams
    return cls(**drawn)


def sample_operating_point(spec: SamplingSpec, draw_index: int) -> OperatingPoint:
    """Uniform operating point; shared stream across structures."""
    rng = _rng(spec, _OP_TAG, draw_index)
    vals = {k: float(rng.uniform(*OP_RANGES[k])) for k in ("p", "q", "v")}
    return OperatingPoint(**vals)
