import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from gridmode.models import build_model
from gridmode.perunit import (CircuitParams, GflControlParams,
                              GfmControlParams, OperatingPoint, StructureId)


@pytest.fixture(scope="session")
def table1_circuit():
    return CircuitParams()


@pytest.fixture(scope="session")
def scr15_circuit():
    return CircuitParams.from_scr(15.0)


@pytest.fixture(scope="session")
def vcgfm_table1(table1_circuit):
    """The measurement-validation scenario model."""
    return build_model(StructureId.vcGFM,
                       GfmControlParams(inertia_h=2.6, damping_xi=2.0),
                       table1_circuit, OperatingPoint(p=0.958, q=0.0, v=1.0))


@pytest.fixture(scope="session")
def models_all(scr15_circuit):
    """One model per structure at a common operating point."""
    op = OperatingPoint(p=0.5, q=0.2, v=1.0)
    out = {}
    for s in StructureId:
        params = GflControlParams() if s.mode.value == "GFL" else GfmControlParams()
        out[s] = build_model(s, params, scr15_circuit, op)
    return out
