"""Per-frequency 2x2 admittance solve from two independent excitations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import IllConditioned, MissingFrequency, ParamOutOfRange
from ..models.statespace import AdmittanceSpectrum
from .spectrum import Spectrum


@dataclass(frozen=True)
class RunSpectra:
    """The four measured spectra of one injection run at the PCC."""

    v_d: Spectrum
    v_q: Spectrum
    i_d: Spectrum
    i_q: Spectrum

    def __post_init__(self):
        f = self.v_d.frequencies
        for s in (self.v_q, self.i_d, self.i_q):
            if not np.array_equal(s.frequencies, f):
                raise ParamOutOfRange("run spectra must share frequency bins")

    @property
    def frequencies(self) -> np.ndarray:
        return self.v_d.frequencies


def solve_admittance(run_d: RunSpectra, run_q: RunSpectra, grid=None,
                     cond_limit: float = 1e6):
    """Solve [i] = Y [v] per frequency by stacking the two runs.

    Bins whose 2x2 voltage matrix has condition number above cond_limit are
    dropped and reported; IllConditioned is raised only when nothing
    survives.  Returns (AdmittanceSpectrum, dropped_frequencies).
    """
    if not np.array_equal(run_d.frequencies, run_q.frequencies):
        raise ParamOutOfRange("both runs must share frequency bins")
    freqs = run_d.frequencies
    if grid is not None:
        grid = np.asarray(grid, float)
        idx = np.searchsorted(freqs, grid)
        bad = (idx >= freqs.size) | ~np.isclose(freqs[np.minimum(idx, freqs.size - 1)],
                                                grid, rtol=1e-9, atol=1e-9)
        if np.any(bad):
            raise MissingFrequency(f"bins absent from runs: {grid[bad][:5]}")
    else:
        idx = np.arange(freqs.size)

    kept_f, kept_y, dropped = [], [], []
    for k in idx:
        vm = np.array([[run_d.v_d.values[k], run_q.v_d.values[k]],
                       [run_d.v_q.values[k], run_q.v_q.values[k]]])
        im = np.array([[run_d.i_d.values[k], run_q.i_d.values[k]],
                       [run_d.i_q.values[k], run_q.i_q.values[k]]])
        if not np.all(np.isfinite(vm)) or np.linalg.cond(vm) > cond_limit:
            dropped.append(freqs[k])
            continue
        kept_f.append(freqs[k])
        kept_y.append(im @ np.linalg.inv(vm))
    if not kept_f:
        raise IllConditioned(dropped, "voltage excitation matrix ill-conditioned at every bin")
    spectrum = AdmittanceSpectrum(frequencies=np.array(kept_f),
                                  values=np.array(kept_y))
    return spectrum, np.array(dropped)
