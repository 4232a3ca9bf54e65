import math

import pytest

from gridmode.errors import ParamOutOfRange
from gridmode.perunit import (CircuitParams, GflControlParams,
                              GfmControlParams, Mode, OperatingPoint,
                              PerUnitBase, StructureId)


def test_omega_base_exact():
    base = PerUnitBase(f_base=50.0)
    assert base.omega_base == 2.0 * math.pi * 50.0


def test_base_positivity():
    with pytest.raises(ParamOutOfRange):
        PerUnitBase(s_base=0.0)


def test_mode_mapping_total():
    assert StructureId.pqGFL.mode is Mode.GFL
    assert StructureId.pvGFL.mode is Mode.GFL
    assert StructureId.viGFL.mode is Mode.GFL
    assert StructureId.ccGFM.mode is Mode.GFM
    assert StructureId.vcGFM.mode is Mode.GFM


def test_structure_parse_error_lists_names():
    with pytest.raises(ParamOutOfRange, match="pqGFL"):
        StructureId.parse("nope")


def test_scr_consistency():
    circ = CircuitParams.from_scr(15.0)
    assert circ.scr == 15.0
    assert abs(circ.l_grid - 1.0 / 15.0) <= 0.01 / 15.0
    with pytest.raises(ParamOutOfRange):
        CircuitParams(l_grid=0.5, scr=15.0)


def test_operating_point_ranges():
    OperatingPoint(p=1.0, q=0.4, v=1.1)
    with pytest.raises(ParamOutOfRange):
        OperatingPoint(p=1.2)
    with pytest.raises(ParamOutOfRange):
        OperatingPoint(q=0.5)
    with pytest.raises(ParamOutOfRange):
        OperatingPoint(v=0.8)


def test_control_params_positive():
    with pytest.raises(ParamOutOfRange):
        GflControlParams(omega_n=-1.0)
    with pytest.raises(ParamOutOfRange):
        GfmControlParams(inertia_h=0.0)


def test_gfm_table_constants():
    p = GfmControlParams()
    assert (p.omega_f, p.r_v, p.omega_lpf) == (60.0, 0.09, 83.0)


def test_pll_damping_default_one():
    assert GflControlParams().xi_n == 1.0
