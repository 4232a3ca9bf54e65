"""Time series container and periodic-averaging spectrum estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LengthMismatch, ParamOutOfRange


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        if self.dt <= 0:
            raise ParamOutOfRange("dt must be positive")
        v = np.asarray(self.values, float)
        if v.ndim != 1 or v.size < 1:
            raise ParamOutOfRange("values must be a non-empty 1-d array")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Spectrum:
    """Complex amplitudes on an ascending frequency grid (Hz)."""

    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, float)
        v = np.asarray(self.values, complex)
        if f.shape != v.shape or f.ndim != 1:
            raise ParamOutOfRange("frequency/value length mismatch")
        if f.size > 1 and not np.all(np.diff(f) > 0):
            raise ParamOutOfRange("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.frequencies.size


def estimate_spectrum(ts: TimeSeries, period_samples: int, periods_average: int) -> Spectrum:
    """Coherently average whole periods, then DFT the averaged period.

    Returned values are amplitudes: a sine of amplitude A at a bin frequency
    gives |value| = A at that bin; the dc bin carries the mean.  Frequency
    resolution is 1/(period_samples*dt).
    """
    if period_samples < 2 or periods_average < 1:
        raise ParamOutOfRange("need period_samples >= 2 and periods_average >= 1")
    n_have = len(ts) // period_samples
    if n_have < periods_average:
        raise LengthMismatch(
            f"need {periods_average} whole periods of {period_samples} samples, "
            f"series has {len(ts)}")
    data = ts.values[:periods_average * period_samples]
    avg = data.reshape(periods_average, period_samples).mean(axis=0)
    coef = np.fft.rfft(avg)
    scale = np.full(coef.size, 2.0 / period_samples)
    scale[0] = 1.0 / period_samples
    if period_samples % 2 == 0:
        scale[-1] = 1.0 / period_samples
    freqs = np.arange(coef.size) / (period_samples * ts.dt)
    return Spectrum(frequencies=freqs, values=coef * scale)
