from .equilibrium import Equilibrium, steady_state, steady_state_residual
from .statespace import (AdmittanceSpectrum, ComplexMatrix2, StateSpaceModel,
                         admittance_at, build_model, filter_admittance,
                         filter_sweep, sweep_admittance)

__all__ = [
    "Equilibrium", "steady_state", "steady_state_residual",
    "AdmittanceSpectrum", "ComplexMatrix2", "StateSpaceModel",
    "admittance_at", "build_model", "filter_admittance", "filter_sweep",
    "sweep_admittance",
]
