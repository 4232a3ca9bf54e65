"""Full measurement protocol: sequential d/q injections over stitched bands.

Both axes of one band are excited with the same PRBS in two sequential runs
(the 2x2 per-bin solve needs both runs on identical frequency bins, which
fixes one chip rate per band).  Three bands cover 1 Hz to 10 kHz:

    slow  order 8, f_max 10 Hz     -> bins below 10 Hz (0.078 Hz resolution)
    fast  order 8, f_max 1 kHz     -> bins 10 Hz .. 1 kHz
    hf    order 8, f_max 10 kHz    -> bins above 1 kHz

A single 1 kHz-chip sequence alone cannot reach 1 Hz (7.8 Hz resolution),
hence the slow band; the hf band covers the decade above the control
bandwidth where the admittance settles onto the passive filter.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ParamOutOfRange
from ..models.statespace import AdmittanceSpectrum, StateSpaceModel
from .prbs import PrbsConfig, generate_prbs
from .simulate import MeasurementConfig, simulate_response, upsample_chips
from .solve import RunSpectra, solve_admittance
from .spectrum import TimeSeries, estimate_spectrum


@dataclass(frozen=True)
class BandSpec:
    """One stitched band: PRBS excitation, step size, and the bin range
    (lo inclusive, hi exclusive) this band contributes."""

    name: str
    prbs: PrbsConfig
    dt: float
    f_lo: float
    f_hi: float


@dataclass(frozen=True)
class MeasurementProtocol:
    bands: tuple
    periods_discard: int = 2
    periods_average: int = 4
    shunt_r: float = 20.0

    def config_for(self, band: BandSpec) -> MeasurementConfig:
        return MeasurementConfig(dt=band.dt, periods_discard=self.periods_discard,
                                 periods_average=self.periods_average,
                                 shunt_r=self.shunt_r)


def default_protocol(amplitude: float = 0.02, include_hf: bool = True,
                     periods_discard: int = 2, periods_average: int = 4,
                     shunt_r: float = 20.0) -> MeasurementProtocol:
    bands = [
        BandSpec("slow", PrbsConfig(order=8, f_max=10.0, amplitude=amplitude),
                 dt=1e-4, f_lo=0.0, f_hi=10.0),
        BandSpec("fast", PrbsConfig(order=8, f_max=1000.0, amplitude=amplitude),
                 dt=5e-6, f_lo=10.0, f_hi=1000.1),
    ]
    if include_hf:
        bands[-1] = replace(bands[-1], f_hi=1000.0)
        bands.append(
            BandSpec("hf", PrbsConfig(order=8, f_max=10000.0, amplitude=amplitude),
                     dt=2.5e-6, f_lo=1000.0, f_hi=10000.1))
    return MeasurementProtocol(bands=tuple(bands),
                               periods_discard=periods_discard,
                               periods_average=periods_average, shunt_r=shunt_r)


def measure_band(model: StateSpaceModel, band: BandSpec,
                 protocol: MeasurementProtocol):
    """Two sequential injection runs (d then q) and the per-bin 2x2 solve."""
    cfg = protocol.config_for(band)
    chips = generate_prbs(band.prbs)
    periods = protocol.periods_discard + protocol.periods_average
    inj = upsample_chips(chips, cfg.dt, periods)
    zero = TimeSeries(cfg.dt, np.zeros(len(inj)))
    period_samples = len(inj) // periods

    runs = []
    for axis in ("d", "q"):
        inj_d, inj_q = (inj, zero) if axis == "d" else (zero, inj)
        v, i = simulate_response(model, inj_d, inj_q, cfg, period_samples)
        spectra = [estimate_spectrum(ts, period_samples, protocol.periods_average)
                   for ts in (*v, *i)]
        runs.append(RunSpectra(*spectra))

    freqs = runs[0].frequencies
    usable = (freqs > 0) & (freqs >= band.f_lo) & (freqs < band.f_hi) \
        & (freqs <= band.prbs.f_max * (1 + 1e-9))
    return solve_admittance(runs[0], runs[1], grid=freqs[usable])


def measure_admittance(model: StateSpaceModel,
                       protocol: MeasurementProtocol | None = None):
    """Run every band and stitch the spectra in ascending frequency.

    Returns (AdmittanceSpectrum, info) where info maps band name to the
    dropped (ill-conditioned) bins.
    """
    protocol = protocol or default_protocol()
    if not protocol.bands:
        raise ParamOutOfRange("protocol needs at least one band")
    freqs, values, info = [], [], {}
    for band in protocol.bands:
        spec, dropped = measure_band(model, band, protocol)
        info[band.name] = dropped
        freqs.append(spec.frequencies)
        values.append(spec.values)
    f = np.concatenate(freqs)
    v = np.concatenate(values)
    order = np.argsort(f)
    f, v = f[order], v[order]
    if np.any(np.diff(f) <= 0):
        raise ParamOutOfRange("band bin ranges overlap")
    return AdmittanceSpectrum(frequencies=f, values=v), info
