import numpy as np
import pytest

from gridmode.errors import ParamOutOfRange, UnstableLinearization
from gridmode.models import (admittance_at, build_model, filter_admittance,
                             filter_sweep, sweep_admittance)
from gridmode.models.structures import dynamics
from gridmode.perunit import (CircuitParams, GflControlParams,
                              GfmControlParams, OperatingPoint, StructureId)

OP = OperatingPoint(p=0.5, q=0.2, v=1.0)

# normative state inventories for this artifact
STATE_COUNTS = {
    StructureId.pqGFL: 13, StructureId.pvGFL: 14, StructureId.viGFL: 13,
    StructureId.ccGFM: 12, StructureId.vcGFM: 6,
}


def test_filter_admittance_dc_hand_values(table1_circuit):
    # inverse of [[R, -L], [L, R]] worked by hand: R/(R^2+L^2), -L/(R^2+L^2)
    y = filter_admittance(table1_circuit, 0.0)
    assert y.y_dd == pytest.approx(0.22197558268590456, rel=1e-12)
    assert y.y_qd == pytest.approx(-6.659267480577136, rel=1e-12)
    assert y.y_dq == pytest.approx(+6.659267480577136, rel=1e-12)
    assert y.y_qq == y.y_dd


def test_filter_symmetry_and_rolloff(table1_circuit):
    for f in (0.0, 10.0, 313.0, 5000.0):
        y = filter_admittance(table1_circuit, 2 * np.pi * f)
        assert y.y_dd == y.y_qq
        assert y.y_dq == -y.y_qd
    mags = [abs(filter_admittance(table1_circuit, 2 * np.pi * f).y_dd)
            for f in (1e3, 2e3, 4e3, 8e3, 1.6e4)]
    assert all(a > b for a, b in zip(mags, mags[1:]))


def test_state_inventories(models_all):
    for s, m in models_all.items():
        assert m.n_states == STATE_COUNTS[s]
        assert len(m.state_labels) == m.n_states
        assert m.state_labels[:2] == ("i_d", "i_q")


def test_stability_gate(models_all):
    for m in models_all.values():
        assert m.max_eig_real() < 0.0


def test_param_family_mismatch(table1_circuit):
    with pytest.raises(ParamOutOfRange):
        build_model(StructureId.pqGFL, GfmControlParams(), table1_circuit, OP)
    with pytest.raises(ParamOutOfRange):
        build_model(StructureId.vcGFM, GflControlParams(), table1_circuit, OP)


def test_build_deterministic(table1_circuit):
    m1 = build_model(StructureId.viGFL, GflControlParams(), table1_circuit, OP)
    m2 = build_model(StructureId.viGFL, GflControlParams(), table1_circuit, OP)
    for f in ("a", "b", "c", "d", "a_cut", "b_ports", "c_ports"):
        assert np.array_equal(getattr(m1, f), getattr(m2, f))


def test_high_frequency_filter_convergence(models_all, scr15_circuit):
    """Above the control bandwidth the converter admittance lands on the
    passive filter admittance (diagonal entries, 5 percent)."""
    w = 2 * np.pi * 1e4
    yf = filter_admittance(scr15_circuit, w)
    for s, m in models_all.items():
        ya = admittance_at(m, w)
        for attr in ("y_dd", "y_qq"):
            rel = abs(getattr(ya, attr) - getattr(yf, attr)) / abs(getattr(yf, attr))
            assert rel < 0.05, (s, attr, rel)
        # off-diagonals measured against the dominant diagonal scale
        scale = max(abs(yf.y_dd), abs(yf.y_qq))
        assert abs(ya.y_dq - yf.y_dq) < 0.05 * scale
        assert abs(ya.y_qd - yf.y_qd) < 0.05 * scale


def test_gfm_vs_gfl_differ_in_band_agree_above(models_all, scr15_circuit):
    wlow = 2 * np.pi * 10.0
    whigh = 2 * np.pi * 1e4
    y_gfm = admittance_at(models_all[StructureId.vcGFM], wlow)
    y_gfl = admittance_at(models_all[StructureId.pqGFL], wlow)
    assert abs(y_gfm.y_dd - y_gfl.y_dd) / abs(y_gfl.y_dd) > 0.2
    y_gfm = admittance_at(models_all[StructureId.vcGFM], whigh)
    y_gfl = admittance_at(models_all[StructureId.pqGFL], whigh)
    assert abs(y_gfm.y_dd - y_gfl.y_dd) / abs(y_gfl.y_dd) < 0.05


def _synthetic_model(a_cut, b_ports, c_ports, delay, circuit, base, eq):
    from gridmode.models.statespace import StateSpaceModel
    a_cut = np.asarray(a_cut, float)
    b_ports = np.asarray(b_ports, float)
    c_ports = np.asarray(c_ports, float)
    a_cl = a_cut + b_ports[:, 2:] @ c_ports[2:]
    return StateSpaceModel(
        structure=StructureId.pqGFL, a=a_cl, b=b_ports[:, :2], c=c_ports[:2],
        d=np.zeros((2, 2)), delay=delay,
        state_labels=tuple(f"x{k}" for k in range(a_cut.shape[0])),
        a_cut=a_cut, b_ports=b_ports, c_ports=c_ports,
        equilibrium=eq, circuit=circuit, base=base)


def test_open_loop_filter_against_analytic(table1_circuit):
    """admittance_at on a plant-only model equals the closed-form RL inverse."""
    from gridmode.models import steady_state
    from gridmode.perunit import PerUnitBase
    base = PerUnitBase()
    r, l, wb = table1_circuit.r_filter, table1_circuit.l_filter, base.omega_base
    a = np.array([[-r * wb / l, wb], [-wb, -r * wb / l]])
    b = np.zeros((2, 4))
    b[:, :2] = -(wb / l) * np.eye(2)      # v ports
    b[:, 2:] = +(wb / l) * np.eye(2)      # e ports (unused: no command path)
    c = np.zeros((4, 2))
    c[:2] = -np.eye(2)                    # load-convention measured current
    eq = steady_state(StructureId.pqGFL, table1_circuit, OperatingPoint(0, 0, 1.0))
    plant = _synthetic_model(a, b, c, 0.0, table1_circuit, base, eq)
    for f in (0.0, 3.0, 77.0, 1900.0):
        w = 2 * np.pi * f
        got = admittance_at(plant, w).as_array()
        want = filter_admittance(table1_circuit, w).as_array()
        assert np.allclose(got, want, rtol=1e-9, atol=1e-12)


def test_sweep_matches_pointwise(vcgfm_table1):
    grid = np.array([1.0, 11.0, 118.0, 997.0])
    sw = sweep_admittance(vcgfm_table1, grid)
    for k, f in enumerate(grid):
        y = admittance_at(vcgfm_table1, 2 * np.pi * f).as_array()
        assert np.allclose(sw.values[k], y, rtol=1e-12)
    one = sweep_admittance(vcgfm_table1, np.array([118.0]))
    assert np.allclose(one.values[0],
                       admittance_at(vcgfm_table1, 2 * np.pi * 118.0).as_array())


def test_sweep_validates_grid(vcgfm_table1):
    with pytest.raises(ParamOutOfRange):
        sweep_admittance(vcgfm_table1, np.array([10.0, 5.0]))
    with pytest.raises(ParamOutOfRange):
        sweep_admittance(vcgfm_table1, np.array([-1.0, 5.0]))


def test_continuity_grid_refinement(vcgfm_table1):
    """Halving the grid spacing shrinks linear-interpolation error by >= 2x."""
    def interp_err(n):
        f = np.geomspace(1.0, 1000.0, n)
        sw = sweep_admittance(vcgfm_table1, f)
        mid = np.sqrt(f[:-1] * f[1:])
        exact = sweep_admittance(vcgfm_table1, mid).values[:, 0, 0]
        approx = 0.5 * (sw.values[:-1, 0, 0] + sw.values[1:, 0, 0])
        return np.max(np.abs(exact - approx))

    coarse, fine = interp_err(60), interp_err(119)
    assert coarse / fine >= 2.0


def test_delay_factor_phase_doubling(table1_circuit):
    """Isolated control path (v -> command -> delay -> current, no loop):
    doubling the delay adds exactly w*d of extra phase lag and leaves the
    magnitude untouched."""
    from gridmode.models import steady_state
    from gridmode.perunit import PerUnitBase
    base = PerUnitBase()
    # x0 integrates v into the command; x1 integrates e_app into the current
    a = np.diag([-40.0, -40.0, -900.0, -900.0])
    b = np.zeros((4, 4))
    b[0, 0] = b[1, 1] = 1.0               # v ports drive the command states
    b[2, 2] = b[3, 3] = 1.0               # e ports drive the output states
    c = np.zeros((4, 4))
    c[0, 2] = c[1, 3] = 1.0               # measured current from x2, x3
    c[2, 0] = c[3, 1] = 1.0               # command from x0, x1
    eq = steady_state(StructureId.pqGFL, table1_circuit, OperatingPoint(0, 0, 1.0))

    w = 2 * np.pi * 130.0
    d = 150e-6

    def path(delay):
        m = _synthetic_model(a, b, c, delay, table1_circuit, base, eq)
        return admittance_at(m, w).as_array()[0, 0]

    c1, c2 = path(d), path(2 * d)
    dphi = np.angle(c1) - np.angle(c2)          # extra lag from doubling
    assert dphi % (2 * np.pi) == pytest.approx(w * d, abs=1e-9)
    assert abs(c1) == pytest.approx(abs(c2), rel=1e-12)


def test_unstable_draw_rejected(scr15_circuit):
    """A destabilizing parameter corner raises UnstableLinearization."""
    bad = GfmControlParams(inertia_h=0.5, damping_xi=0.7, omega_cc=1200.0,
                           delay=2.0e-3)    # 10x the table's worst delay
    with pytest.raises(UnstableLinearization):
        build_model(StructureId.ccGFM, bad, scr15_circuit, OP)


def test_dynamics_cache_is_shared():
    assert dynamics(StructureId.pqGFL) is dynamics(StructureId.pqGFL)
