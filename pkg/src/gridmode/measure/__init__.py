from .prbs import DEFAULT_TAPS, PrbsConfig, generate_prbs
from .spectrum import Spectrum, TimeSeries, estimate_spectrum
from .simulate import MeasurementConfig, delay_steps, simulate_response, upsample_chips
from .solve import RunSpectra, solve_admittance
from .validate import (ValidationReport, format_admittance_table,
                       interpolate_admittance, validate_measurement)
from .protocol import (BandSpec, MeasurementProtocol, default_protocol,
                       measure_admittance, measure_band)

__all__ = [
    "DEFAULT_TAPS", "PrbsConfig", "generate_prbs",
    "Spectrum", "TimeSeries", "estimate_spectrum",
    "MeasurementConfig", "delay_steps", "simulate_response", "upsample_chips",
    "RunSpectra", "solve_admittance",
    "ValidationReport", "format_admittance_table", "interpolate_admittance",
    "validate_measurement",
    "BandSpec", "MeasurementProtocol", "default_protocol",
    "measure_admittance", "measure_band",
]
