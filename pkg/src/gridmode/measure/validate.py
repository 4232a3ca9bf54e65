"""Measured-vs-analytical comparison and report/export formats."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParamOutOfRange
from ..models.statespace import AdmittanceSpectrum, StateSpaceModel, sweep_admittance


def _db(x):
    return 20.0 * np.log10(np.abs(x))


def _wrap_deg(x):
    return (np.asarray(x) + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class ValidationReport:
    """Per-bin magnitude/phase agreement of Y_dd and Y_qq."""

    band: tuple
    tol_mag_db: float
    tol_phase_deg: float
    frequencies: np.ndarray
    mag_err_dd_db: np.ndarray
    phase_err_dd_deg: np.ndarray
    mag_err_qq_db: np.ndarray
    phase_err_qq_deg: np.ndarray
    bin_pass: np.ndarray
    pass_fraction: float
    passed: bool

    def to_text(self) -> str:
        lines = [
            f"validation band: {self.band[0]:g} .. {self.band[1]:g} Hz",
            f"tolerance: {self.tol_mag_db:g} dB magnitude, "
            f"{self.tol_phase_deg:g} deg phase",
            f"bins in band: {self.frequencies.size}",
            f"pass fraction: {self.pass_fraction:.4f}",
            f"overall: {'PASS' if self.passed else 'FAIL'}",
            "freq_hz, dmag_dd_db, dphase_dd_deg, dmag_qq_db, dphase_qq_deg, pass",
        ]
        for k, f in enumerate(self.frequencies):
            lines.append(
                f"{f:.17g}, {self.mag_err_dd_db[k]:.6g}, {self.phase_err_dd_deg[k]:.6g}, "
                f"{self.mag_err_qq_db[k]:.6g}, {self.phase_err_qq_deg[k]:.6g}, "
                f"{int(self.bin_pass[k])}")
        return "\n".join(lines) + "\n"


def validate_measurement(measured: AdmittanceSpectrum, model: StateSpaceModel,
                         band=(1.0, 1000.0), tol_mag_db: float = 1.0,
                         tol_phase_deg: float = 5.0,
                         min_pass_fraction: float = 0.95) -> ValidationReport:
    """Compare measured Y_dd/Y_qq against the analytical oracle on a band.

    A bin passes when both axes agree within the magnitude and phase
    tolerances; the validation passes when at least min_pass_fraction of the
    bins in band pass.
    """
    f = measured.frequencies
    lo, hi = band
    if lo >= hi:
        raise ParamOutOfRange("band must be (low, high) with low < high")
    sel = (f >= lo) & (f <= hi)
    fb = f[sel]
    if fb.size == 0:
        raise ParamOutOfRange(
            f"band {band} contains no measured bins "
            f"(measured range [{f[0]:g}, {f[-1]:g}] Hz)")
    analytic = sweep_admittance(model, fb)

    out = {}
    ok = np.ones(fb.size, bool)
    for name, idx in (("dd", (0, 0)), ("qq", (1, 1))):
        ym = measured.values[sel][:, idx[0], idx[1]]
        ya = analytic.values[:, idx[0], idx[1]]
        dmag = _db(ym) - _db(ya)
        dph = _wrap_deg(np.angle(ym, deg=True) - np.angle(ya, deg=True))
        out[f"mag_err_{name}_db"] = dmag
        out[f"phase_err_{name}_deg"] = dph
        ok &= (np.abs(dmag) <= tol_mag_db) & (np.abs(dph) <= tol_phase_deg)

    frac = float(ok.mean()) if fb.size else 0.0
    return ValidationReport(
        band=(float(lo), float(hi)), tol_mag_db=tol_mag_db,
        tol_phase_deg=tol_phase_deg, frequencies=fb, bin_pass=ok,
        pass_fraction=frac, passed=bool(fb.size) and frac >= min_pass_fraction,
        **out)


def interpolate_admittance(spectrum: AdmittanceSpectrum, freqs) -> np.ndarray:
    """Entrywise Bode interpolation (log-frequency, dB magnitude, unwrapped
    phase) of an admittance spectrum at arbitrary frequencies."""
    f = np.asarray(freqs, float)
    if np.any(f < spectrum.frequencies[0]) or np.any(f > spectrum.frequencies[-1]):
        raise ParamOutOfRange("interpolation frequencies outside measured range")
    lf = np.log(f)
    lf0 = np.log(spectrum.frequencies)
    out = np.empty((f.size, 2, 2), complex)
    for r in range(2):
        for c in range(2):
            y = spectrum.values[:, r, c]
            mag = np.interp(lf, lf0, _db(y))
            ph = np.interp(lf, lf0, np.unwrap(np.angle(y)))
            out[:, r, c] = 10.0 ** (mag / 20.0) * np.exp(1j * ph)
    return out


ADMITTANCE_HEADER = ("freq_hz, re(Ydd), im(Ydd), re(Ydq), im(Ydq), "
                     "re(Yqd), im(Yqd), re(Yqq), im(Yqq)")


def format_admittance_table(spectrum: AdmittanceSpectrum) -> str:
    lines = [ADMITTANCE_HEADER]
    for k, f in enumerate(spectrum.frequencies):
        m = spectrum.values[k]
        cells = [f"{f:.17g}"]
        for r, c in ((0, 0), (0, 1), (1, 0), (1, 1)):
            cells.append(f"{m[r, c].real:.17g}")
            cells.append(f"{m[r, c].imag:.17g}")
        lines.append(", ".join(cells))
    return "\n".join(lines) + "\n"
