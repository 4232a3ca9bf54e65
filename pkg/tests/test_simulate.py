import numpy as np
import pytest

from gridmode.errors import NumericalBlowup, ParamOutOfRange
from gridmode.measure import (MeasurementConfig, TimeSeries, delay_steps,
                              estimate_spectrum, simulate_response)
from gridmode.models import filter_admittance, steady_state
from gridmode.models.statespace import StateSpaceModel
from gridmode.perunit import CircuitParams, OperatingPoint, PerUnitBase, StructureId


def plant_only_model(circuit, base=PerUnitBase()):
    """Converter reduced to its passive RL filter (no control response)."""
    r, l, wb = circuit.r_filter, circuit.l_filter, base.omega_base
    a = np.array([[-r * wb / l, wb], [-wb, -r * wb / l]])
    b = np.zeros((2, 4))
    b[:, :2] = -(wb / l) * np.eye(2)
    c = np.zeros((4, 2))
    c[:2] = -np.eye(2)
    eq = steady_state(StructureId.pqGFL, circuit, OperatingPoint(0, 0, 1.0))
    return StateSpaceModel(
        structure=StructureId.pqGFL, a=a, b=b[:, :2], c=c[:2],
        d=np.zeros((2, 2)), delay=1e-4, state_labels=("i_d", "i_q"),
        a_cut=a, b_ports=b, c_ports=c, equilibrium=eq, circuit=circuit,
        base=base)


@pytest.fixture(scope="module")
def cfg():
    return MeasurementConfig(dt=5e-5)


def test_zero_injection_stays_at_equilibrium(vcgfm_table1, cfg):
    zero = TimeSeries(cfg.dt, np.zeros(4000))
    v, i = simulate_response(vcgfm_table1, zero, zero, cfg)
    for ts in (*v, *i):
        assert np.max(np.abs(ts.values)) < 1e-12


def test_linearity_of_response(vcgfm_table1, cfg):
    rng = np.random.default_rng(3)
    u = rng.normal(0, 0.01, 3000)
    zero = TimeSeries(cfg.dt, np.zeros(u.size))
    v1, i1 = simulate_response(vcgfm_table1, TimeSeries(cfg.dt, u), zero, cfg)
    v2, i2 = simulate_response(vcgfm_table1, TimeSeries(cfg.dt, 2 * u), zero, cfg)
    for a, b in zip((*v1, *i1), (*v2, *i2)):
        scale = np.max(np.abs(b.values))
        assert np.max(np.abs(2 * a.values - b.values)) < 1e-10 * max(scale, 1e-30)


def test_filter_model_sine_matches_admittance(table1_circuit):
    """Sinusoidal steady state of the passive filter reproduces the analytic
    admittance within 0.1 percent."""
    model = plant_only_model(table1_circuit)
    f0, dt = 100.0, 5e-6
    ns = int(round(1.0 / f0 / dt))
    periods = 30
    t = np.arange(ns * periods) * dt
    inj = TimeSeries(dt, 0.02 * np.sin(2 * np.pi * f0 * t))
    zero = TimeSeries(dt, np.zeros(t.size))
    cfg = MeasurementConfig(dt=dt)
    v, i = simulate_response(model, inj, zero, cfg)
    # discard transients, keep whole periods
    skip = ns * (periods - 8)
    spectra = [estimate_spectrum(TimeSeries(dt, ts.values[skip:]), ns, 8)
               for ts in (*v, *i)]
    k = int(np.argmin(np.abs(spectra[0].frequencies - f0)))
    vv = np.array([spectra[0].values[k], spectra[1].values[k]])
    ii = np.array([spectra[2].values[k], spectra[3].values[k]])
    y = filter_admittance(table1_circuit, 2 * np.pi * f0).as_array()
    predicted = y @ vv
    assert np.max(np.abs(predicted - ii)) / np.max(np.abs(ii)) < 1e-3


def test_blowup_detected(table1_circuit):
    from dataclasses import replace
    model = plant_only_model(table1_circuit)
    a_bad = np.array(model.a_cut)
    a_bad[0, 0] = +200.0                      # inject an unstable pole
    bad = replace(model, a_cut=a_bad)
    cfg = MeasurementConfig(dt=1e-3, blowup=1e3)
    inj = TimeSeries(cfg.dt, np.full(200000, 0.02))
    with pytest.raises(NumericalBlowup):
        simulate_response(bad, inj, TimeSeries(cfg.dt, np.zeros(len(inj))), cfg)


def test_dt_mismatch_rejected(vcgfm_table1, cfg):
    inj = TimeSeries(1e-3, np.zeros(100))
    with pytest.raises(ParamOutOfRange):
        simulate_response(vcgfm_table1, inj, inj, cfg)


def test_delay_steps_rounding(vcgfm_table1):
    assert delay_steps(vcgfm_table1, 5e-6) == 25      # 125 us exactly
    assert delay_steps(vcgfm_table1, 1e-4) == 1       # rounds, floor 1
