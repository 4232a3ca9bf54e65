"""Per-feature standardization fitted on training data only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParamOutOfRange, WidthMismatch

STD_FLOOR = 1e-12


@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        if x.shape[-1] != self.mean.size:
            raise WidthMismatch(f"expected {self.mean.size} features, "
                                f"got {x.shape[-1]}")
        return (x - self.mean) / self.std


def fit_scaler(x: np.ndarray) -> Scaler:
    x = np.asarray(x, float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ParamOutOfRange("need a non-empty 2-d training matrix")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std < STD_FLOOR, STD_FLOOR, std)
    return Scaler(mean=mean, std=std)
