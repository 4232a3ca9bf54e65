import numpy as np
import pytest

from gridmode.models import steady_state, steady_state_residual
from gridmode.perunit import (GflControlParams, GfmControlParams, Mode,
                              OperatingPoint, StructureId, params_for)


def test_zero_power_equilibrium(table1_circuit):
    """No current means no filter drop: internal voltage equals the PCC."""
    for s in StructureId:
        eq = steady_state(s, table1_circuit, OperatingPoint(0.0, 0.0, 1.0))
        assert eq.i_d0 == 0.0 and eq.i_q0 == 0.0
        assert eq.e_d0 == 1.0 and eq.e_q0 == 0.0


def test_rated_active_power_current(table1_circuit):
    eq = steady_state(StructureId.pqGFL, table1_circuit,
                      OperatingPoint(1.0, 0.0, 1.0))
    assert eq.i_d0 == pytest.approx(1.0, abs=1e-12)
    assert eq.i_q0 == pytest.approx(0.0, abs=1e-12)
    assert eq.v_q0 == 0.0


def test_power_match_invariant(scr15_circuit):
    for op in (OperatingPoint(0.7, -0.3, 0.95), OperatingPoint(-1.0, 0.4, 1.1)):
        eq = steady_state(StructureId.ccGFM, scr15_circuit, op)
        p = eq.v_d0 * eq.i_d0 + eq.v_q0 * eq.i_q0
        q = eq.v_q0 * eq.i_d0 - eq.v_d0 * eq.i_q0
        assert p == pytest.approx(op.p, abs=1e-9)
        assert q == pytest.approx(op.q, abs=1e-9)


def test_nonlinear_residual_below_1e10(table1_circuit):
    """Substituting the closed-form equilibrium back into the full nonlinear
    steady-state equations leaves residuals below 1e-10."""
    op = OperatingPoint(0.5, 0.2, 1.0)
    for s in StructureId:
        r = steady_state_residual(s, params_for(s), table1_circuit, op)
        assert r < 1e-10, (s, r)


def test_gfm_frame_angles(table1_circuit):
    op = OperatingPoint(0.5, 0.2, 1.0)
    eq_vc = steady_state(StructureId.vcGFM, table1_circuit, op)
    assert eq_vc.theta0 == pytest.approx(np.arctan2(eq_vc.e_q0, eq_vc.e_d0))
    eq_gfl = steady_state(StructureId.pqGFL, table1_circuit, op)
    assert eq_gfl.theta0 == 0.0
