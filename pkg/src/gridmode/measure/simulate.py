"""Virtual measurement rig: converter + grid Thevenin branch + PRBS source.

The perturbation is a shunt current injection at the PCC.  The source has a
finite Norton resistance (an ideal current step into the node between two
inductors would demand a voltage impulse), which carries a small, exactly
accounted share of the node current; the admittance estimate is unaffected
because both the PCC voltage and the converter current are measured
directly.

Everything is simulated in deviation variables around the equilibrium, with
trapezoidal discretization and the control delay as an integer-step buffer
on the modulated-voltage command.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import NumericalBlowup, ParamOutOfRange
from ..models.statespace import StateSpaceModel
from .spectrum import TimeSeries


@dataclass(frozen=True)
class MeasurementConfig:
    """Discretization and averaging settings for one measurement pass."""

    dt: float = 5e-6
    periods_discard: int = 2
    periods_average: int = 4
    injection_mode: str = "shunt-current"
    shunt_r: float = 20.0          # pu Norton resistance of the source
    blowup: float = 1e6            # pu state bound

    def __post_init__(self):
        if self.dt <= 0:
            raise ParamOutOfRange("dt must be positive")
        if self.periods_average < 1 or self.periods_discard < 0:
            raise ParamOutOfRange("invalid period counts")
        if self.injection_mode != "shunt-current":
            raise ParamOutOfRange(
                f"injection mode '{self.injection_mode}' not implemented "
                "(only 'shunt-current')")
        if self.shunt_r <= 0:
            raise ParamOutOfRange("shunt_r must be positive")


def _assemble_rig(model: StateSpaceModel, cfg: MeasurementConfig):
    """Continuous rig matrices, then trapezoidal one-step form."""
    n = model.n_states
    wb = model.base.omega_base
    lg, rg = model.circuit.l_grid, model.circuit.r_grid
    rp = cfg.shunt_r

    nt = n + 2
    a = np.zeros((nt, nt))
    a[:n, :n] = model.a_cut
    a[n:, n:] = np.array([[-rg * wb / lg, wb], [-wb, -rg * wb / lg]])

    b_v = np.zeros((nt, 2))
    b_v[:n] = model.b_ports[:, :2]
    b_v[n:] = (wb / lg) * np.eye(2)

    b_e = np.zeros((nt, 2))
    b_e[:n] = model.b_ports[:, 2:]

    # v_pcc = rp * (i_conv + inj - i_grid); converter current states lead
    sel = np.zeros((2, nt))
    sel[0, 0], sel[1, 1] = 1.0, 1.0
    sel[0, n], sel[1, n + 1] = -1.0, -1.0
    c_v = rp * sel
    d_v = rp * np.eye(2)

    a_sim = a + b_v @ c_v
    b_inj = b_v * rp

    c_cmd = np.zeros((2, nt))
    c_cmd[:, :n] = model.c_ports[2:]
    c_i = np.zeros((2, nt))
    c_i[:, :n] = model.c_ports[:2]

    m = np.linalg.inv(np.eye(nt) - 0.5 * cfg.dt * a_sim)
    ad = m @ (np.eye(nt) + 0.5 * cfg.dt * a_sim)
    bde = m @ (0.5 * cfg.dt * b_e)
    binj = m @ (0.5 * cfg.dt * b_inj)
    return ad, bde, binj, c_cmd, c_v, d_v, c_i


def delay_steps(model: StateSpaceModel, dt: float) -> int:
    return max(1, int(round(model.delay / dt)))


def simulate_response(model: StateSpaceModel, inj_d: TimeSeries, inj_q: TimeSeries,
                      cfg: MeasurementConfig, period_samples: int | None = None):
    """Closed-loop response to a shunt current injection at the PCC.

    inj_d / inj_q are deviation currents sampled at cfg.dt.  Returns
    ((v_d, v_q), (i_d, i_q)) as TimeSeries, with the first
    cfg.periods_discard periods dropped when period_samples is given.
    The measured current uses the load sign convention of the admittance.
    """
    if abs(inj_d.dt - cfg.dt) > 1e-15 or abs(inj_q.dt - cfg.dt) > 1e-15:
        raise ParamOutOfRange("injection series must be sampled at cfg.dt")
    if len(inj_d) != len(inj_q):
        raise ParamOutOfRange("both injection series need equal length")

    nsteps = len(inj_d)
    inj = np.zeros((nsteps + 1, 2))
    inj[:nsteps, 0] = inj_d.values
    inj[:nsteps, 1] = inj_q.values
    inj[nsteps] = inj[nsteps - 1]

    ad, bde, binj, c_cmd, c_v, d_v, c_i = _assemble_rig(model, cfg)
    out_v = np.zeros((nsteps, 2))
    out_i = np.zeros((nsteps, 2))
    status = _kernels.step_lti(
        np.ascontiguousarray(ad), np.ascontiguousarray(bde),
        np.ascontiguousarray(binj), np.ascontiguousarray(c_cmd),
        np.ascontiguousarray(c_v), np.ascontiguousarray(d_v),
        np.ascontiguousarray(c_i), np.ascontiguousarray(inj),
        delay_steps(model, cfg.dt), cfg.blowup, out_v, out_i)
    if status >= 0:
        raise NumericalBlowup(
            f"state exceeded {cfg.blowup:g} pu at step {status} "
            f"(t={status * cfg.dt:.4g}s)")

    skip = 0
    if period_samples is not None:
        skip = cfg.periods_discard * period_samples
        if skip >= nsteps:
            raise ParamOutOfRange("injection shorter than the discarded transient")
    v = tuple(TimeSeries(cfg.dt, out_v[skip:, k]) for k in range(2))
    i = tuple(TimeSeries(cfg.dt, out_i[skip:, k]) for k in range(2))
    return v, i


def upsample_chips(chips: TimeSeries, dt: float, periods: int) -> TimeSeries:
    """Tile whole chip periods and hold each chip for chip_dt/dt steps."""
    ratio = chips.dt / dt
    steps = int(round(ratio))
    if steps < 1 or abs(ratio - steps) > 1e-9 * max(1.0, ratio):
        raise ParamOutOfRange(
            f"dt={dt} does not divide the chip duration {chips.dt} exactly")
    one = np.repeat(chips.values, steps)
    return TimeSeries(dt, np.tile(one, periods))
