import numpy as np
import pytest

from gridmode.errors import LengthMismatch, ParamOutOfRange
from gridmode.measure import (PrbsConfig, TimeSeries, estimate_spectrum,
                              generate_prbs)


def test_sine_at_bin_frequency():
    ns, dt = 1000, 1e-4
    t = np.arange(4 * ns) * dt
    x = 0.7 * np.sin(2 * np.pi * 50.0 * t)       # bin 5 of a 10 Hz grid
    sp = estimate_spectrum(TimeSeries(dt, x), ns, 4)
    k = int(np.argmin(np.abs(sp.frequencies - 50.0)))
    assert abs(sp.values[k]) == pytest.approx(0.7, abs=1e-9)
    rest = np.abs(sp.values.copy())
    rest[k] = 0.0
    assert rest.max() < 1e-9


def test_constant_series_only_dc():
    sp = estimate_spectrum(TimeSeries(1e-3, np.full(600, 2.5)), 200, 3)
    assert sp.frequencies[0] == 0.0
    assert abs(sp.values[0]) == pytest.approx(2.5, abs=1e-12)
    assert np.abs(sp.values[1:]).max() < 1e-12


def test_prbs_spectrum_flat_below_fmax():
    cfg = PrbsConfig(order=8, f_max=1000.0, amplitude=0.02)
    chips = generate_prbs(cfg)
    sp = estimate_spectrum(chips, len(chips), 1)
    sel = (sp.frequencies > 0) & (sp.frequencies <= cfg.f_max)
    mags = np.abs(sp.values[sel])
    spread_db = 20 * np.log10(mags.max() / mags.min())
    assert spread_db < 3.0
    # two-valued autocorrelation makes the chip-rate spectrum exactly flat
    assert spread_db < 1e-6


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        estimate_spectrum(TimeSeries(1e-3, np.zeros(500)), 200, 3)


def test_period_average_suppresses_incoherent_content():
    ns, dt = 500, 1e-3
    rng = np.random.default_rng(0)
    periodic = np.tile(np.sin(2 * np.pi * 10.0 * np.arange(ns) * dt), 8)
    noisy = periodic + rng.normal(0, 0.3, periodic.size)
    sp1 = estimate_spectrum(TimeSeries(dt, noisy), ns, 1)
    sp8 = estimate_spectrum(TimeSeries(dt, noisy), ns, 8)
    k = int(np.argmin(np.abs(sp1.frequencies - 10.0)))
    err1 = abs(abs(sp1.values[k]) - 1.0)
    err8 = abs(abs(sp8.values[k]) - 1.0)
    floor1 = np.median(np.abs(sp1.values))
    floor8 = np.median(np.abs(sp8.values))
    assert floor8 < floor1    # averaging suppresses the incoherent floor


def test_types_validate():
    with pytest.raises(ParamOutOfRange):
        TimeSeries(0.0, np.ones(3))
    with pytest.raises(ParamOutOfRange):
        TimeSeries(1e-3, np.ones((2, 2)))
    with pytest.raises(ParamOutOfRange):
        estimate_spectrum(TimeSeries(1e-3, np.ones(10)), 5, 0)
