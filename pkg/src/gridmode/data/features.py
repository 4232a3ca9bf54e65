"""Feature grid and admittance feature extraction.

Features are the magnitude (pu) and unwrapped phase (degrees) of Y_dd and
Y_qq on a log-spaced grid between 1 Hz and 1 kHz.  Feature names render the
frequency as an integer (e.g. Pdd118Hz), so the default grid snaps the
log-spaced points to unique integers: below ~20 Hz the log spacing is finer
than 1 Hz and collided points are bumped to the next free integer.
"""

from __future__ import annotations

import numpy as np

from ..errors import MissingFrequency, ParamOutOfRange
from ..models.statespace import AdmittanceSpectrum


def log_feature_grid(n: int = 100, lo: float = 1.0, hi: float = 1000.0) -> np.ndarray:
    """n unique integer frequencies, log-spaced from lo to hi inclusive."""
    if n < 2 or lo < 1 or hi <= lo:
        raise ParamOutOfRange("need n >= 2 and 1 <= lo < hi")
    if hi - lo + 1 < n:
        raise ParamOutOfRange("not enough integers in [lo, hi]")
    targets = np.geomspace(lo, hi, n)
    grid = np.empty(n, dtype=np.int64)
    prev = int(round(lo)) - 1
    for k, t in enumerate(targets):
        v = max(int(round(t)), prev + 1)
        grid[k] = v
        prev = v
    if grid[-1] > hi:
        raise ParamOutOfRange("integer snapping overflowed the upper bound")
    grid[-1] = int(round(hi))
    return grid.astype(float)


def validate_feature_grid(grid) -> np.ndarray:
    g = np.asarray(grid, float)
    if g.ndim != 1 or g.size < 2:
        raise ParamOutOfRange("feature grid must be a 1-d array of >= 2 points")
    if np.any(g < 1.0) or np.any(g > 1000.0):
        raise ParamOutOfRange("feature grid must lie within [1, 1000] Hz")
    if not np.all(np.diff(g) > 0):
        raise ParamOutOfRange("feature grid must be strictly increasing")
    return g


def unwrapped_phase_deg(y: np.ndarray) -> np.ndarray:
    """Phase in degrees, unwrapped along frequency and anchored at the
    highest frequency.

    Every structure converges onto the passive filter at the top of the
    band, so the high end is the one place all samples share a branch;
    anchoring there keeps the whole curve on a branch comparable across
    samples (a 1 Hz anchor near +-180 deg would scatter otherwise identical
    curves by 360 deg).
    """
    return np.degrees(np.unwrap(np.angle(np.asarray(y))[::-1])[::-1])


def feature_name(kind: str, axis: str, freq: float) -> str:
    """Naming rule: kind (M|P) + axis (dd|qq) + rounded frequency + 'Hz'."""
    if kind not in ("M", "P"):
        raise ParamOutOfRange(f"kind must be 'M' or 'P', got {kind!r}")
    if axis not in ("dd", "qq"):
        raise ParamOutOfRange(f"axis must be 'dd' or 'qq', got {axis!r}")
    if freq <= 0:
        raise ParamOutOfRange("freq must be positive")
    return f"{kind}{axis}{int(round(freq))}Hz"


def feature_names(grid) -> list:
    g = validate_feature_grid(grid)
    names = []
    for kind, axis in (("M", "dd"), ("P", "dd"), ("M", "qq"), ("P", "qq")):
        names.extend(feature_name(kind, axis, f) for f in g)
    if len(set(names)) != len(names):
        raise ParamOutOfRange("grid frequencies collide after integer rounding")
    return names


def extract_features(spectrum: AdmittanceSpectrum, grid) -> np.ndarray:
    """Ordered feature vector [Mdd..., Pdd..., Mqq..., Pqq...] by ascending
    frequency; phases unwrapped along frequency, reported in degrees."""
    g = validate_feature_grid(grid)
    idx = np.searchsorted(spectrum.frequencies, g)
    ok = idx < spectrum.frequencies.size
    ok &= np.isclose(spectrum.frequencies[np.minimum(idx, len(spectrum) - 1)],
                     g, rtol=1e-9, atol=1e-9)
    if not np.all(ok):
        raise MissingFrequency(f"grid frequencies absent: {g[~ok][:5]}")
    parts = []
    for r, c in ((0, 0), (1, 1)):
        y = spectrum.values[idx, r, c]
        parts.append(np.abs(y))
        parts.append(unwrapped_phase_deg(y))
    features = np.concatenate([parts[0], parts[1], parts[2], parts[3]])
    if not np.all(np.isfinite(features)):
        raise ParamOutOfRange("non-finite feature encountered")
    return features
