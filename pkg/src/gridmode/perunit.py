"""Per-unit bases, circuit parameters, control parameters and operating points.

Conventions used throughout the package:

* dq frame: voltage-aligned synchronous frame rotating at ``omega_base``;
  at the linearization point the PCC voltage is ``(v, 0)``.
* Generator sign convention for the converter current at the operating
  point: ``p = v_d*i_d + v_q*i_q``, ``q = v_q*i_d - v_d*i_q``, both positive
  when the converter exports power.
* Inductances and resistances are per-unit; an inductance L contributes the
  impedance ``r + j*omega*L/omega_base`` at perturbation frequency omega plus
  the synchronous cross-coupling ``+-L`` between the axes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

from .errors import ParamOutOfRange


@dataclass(frozen=True)
class PerUnitBase:
    """System base quantities. Defaults follow a 400 kV / 50 Hz network."""

    s_base: float = 1.044e9     # VA
    u_base: float = 400e3       # line-line RMS V
    f_base: float = 50.0        # Hz

    @property
    def omega_base(self) -> float:
        return 2.0 * math.pi * self.f_base

    def __post_init__(self):
        for name in ("s_base", "u_base", "f_base"):
            if getattr(self, name) <= 0:
                raise ParamOutOfRange(f"{name} must be strictly positive")


@dataclass(frozen=True)
class CircuitParams:
    """Converter RL output filter plus the grid Thevenin branch (all pu)."""

    l_filter: float = 0.15
    r_filter: float = 0.005
    l_grid: float = 0.5
    r_grid: float = 0.05
    scr: float | None = None    # optional; must agree with l_grid when given

    def __post_init__(self):
        if self.l_filter <= 0 or self.l_grid <= 0:
            raise ParamOutOfRange("filter and grid inductances must be positive")
        if self.r_filter < 0 or self.r_grid < 0:
            raise ParamOutOfRange("resistances must be non-negative")
        if self.scr is not None:
            if self.scr <= 0:
                raise ParamOutOfRange("scr must be positive")
            if abs(self.l_grid - 1.0 / self.scr) > 0.01 / self.scr:
                raise ParamOutOfRange(
                    f"l_grid={self.l_grid} inconsistent with scr={self.scr} "
                    "(expected l_grid ~ 1/scr within 1%)")

    @classmethod
    def from_scr(cls, scr: float, l_filter: float = 0.15, r_filter: float = 0.005,
                 x_over_r: float = 10.0) -> "CircuitParams":
        """Grid branch from a short-circuit ratio, X/R = 10 by default."""
        l_grid = 1.0 / scr
        return cls(l_filter=l_filter, r_filter=r_filter,
                   l_grid=l_grid, r_grid=l_grid / x_over_r, scr=scr)


class Mode(str, enum.Enum):
    GFM = "GFM"
    GFL = "GFL"


class StructureId(str, enum.Enum):
    """The five converter control structures."""

    pqGFL = "pqGFL"
    pvGFL = "pvGFL"
    viGFL = "viGFL"
    ccGFM = "ccGFM"
    vcGFM = "vcGFM"

    @property
    def mode(self) -> Mode:
        return Mode.GFL if self.value.endswith("GFL") else Mode.GFM

    @classmethod
    def parse(cls, name: str) -> "StructureId":
        try:
            return cls[name]
        except KeyError:
            raise ParamOutOfRange(
                f"unknown structure '{name}'; valid: {[s.value for s in cls]}")


# Measurement/implementation filters of the modeled control hardware.  These
# are fixed design constants, not sampled parameters: the voltage feedforward
# and the PLL input are low-pass filtered, the current measurement has an
# anti-aliasing filter.  Without them the control would keep acting far above
# its bandwidth and the converter admittance would not roll off onto the
# passive filter admittance at high frequency.
W_FF_FILTER = 100.0        # rad/s, PCC-voltage feedforward low-pass
W_PLL_FILTER = 5000.0      # rad/s, PLL v_q input low-pass
W_IMEAS_FILTER = 20000.0   # rad/s, current-measurement anti-aliasing
W_VMAG_FILTER = 100.0      # rad/s, |V| measurement low-pass (pvGFL)


@dataclass(frozen=True)
class GflControlParams:
    """Grid-following control parameters (rad/s unless noted)."""

    omega_p: float = 22.0          # active power loop bandwidth
    omega_q: float = 22.0          # reactive power loop bandwidth
    omega_v: float = 9.0           # PCC voltage loop bandwidth (pvGFL)
    omega_n: float = 775.0         # PLL natural frequency
    xi_n: float = 1.0              # PLL damping ratio
    omega_cc: float = 2100.0       # current loop bandwidth
    delay: float = 125e-6          # low-level control delay (s)
    omega_lpf_vi: float = 50.0     # viGFL voltage-division low-pass cutoff

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ParamOutOfRange(f"{f.name} must be strictly positive")


@dataclass(frozen=True)
class GfmControlParams:
    """Grid-forming control parameters."""

    inertia_h: float = 2.6         # s
    damping_xi: float = 2.0        # damping ratio of the power mode
    omega_f: float = 60.0          # rad/s, TVR high-pass cutoff (vcGFM)
    r_v: float = 0.09              # pu, transient virtual resistance (vcGFM)
    omega_lpf: float = 83.0        # rad/s, quasi-static model low-pass (ccGFM)
    omega_cc: float = 2100.0       # rad/s, current loop bandwidth (ccGFM)
    delay: float = 125e-6          # s

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ParamOutOfRange(f"{f.name} must be strictly positive")


@dataclass(frozen=True)
class OperatingPoint:
    """PCC operating point in pu (generator convention)."""

    p: float = 0.0
    q: float = 0.0
    v: float = 1.0

    def __post_init__(self):
        if not -1.0 <= self.p <= 1.0:
            raise ParamOutOfRange(f"p={self.p} outside [-1, 1]")
        if not -0.4 <= self.q <= 0.4:
            raise ParamOutOfRange(f"q={self.q} outside [-0.4, 0.4]")
        if not 0.9 <= self.v <= 1.1:
            raise ParamOutOfRange(f"v={self.v} outside [0.9, 1.1]")


def params_for(structure: StructureId, **kwargs):
    """Default control-parameter object of the right family for a structure."""
    if structure.mode is Mode.GFL:
        return GflControlParams(**kwargs)
    return GfmControlParams(**kwargs)
