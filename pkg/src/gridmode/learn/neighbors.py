"""k-nearest-neighbors on standardized features, Euclidean metric.

Candidate neighbors are ordered by (distance, class), which makes the
prediction independent of training-row order even with exactly tied
distances; vote ties fall back to the nearest neighbor's class and then to
GFL (class 0).
"""

from __future__ import annotations

import numpy as np

from ..errors import WidthMismatch
from .tree import check_classes


class KNearest:
    def __init__(self, k: int = 20):
        self.k = k
        self.x = None
        self.y = None

    def fit(self, x: np.ndarray, y: np.ndarray) -> "KNearest":
        x = np.asarray(x, float)
        y = np.asarray(y, np.int64)
        check_classes(y)
        self.x = x
        self.y = y
        return self

    def _neighbor_classes(self, d2_row: np.ndarray, k: int) -> np.ndarray:
        """Classes of the k nearest by (distance, class) order."""
        n = d2_row.size
        m = min(2 * k, n)
        cand = np.argpartition(d2_row, m - 1)[:m] if m < n else np.arange(n)
        if m < n:
            kth = np.partition(d2_row, k - 1)[k - 1]
            if np.partition(d2_row, m - 1)[m - 1] == kth:
                cand = np.arange(n)          # boundary tie wider than window
        order = np.lexsort((self.y[cand], d2_row[cand]))
        return self.y[cand[order[:k]]]

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        if x.shape[1] != self.x.shape[1]:
            raise WidthMismatch(f"expected {self.x.shape[1]} features, "
                                f"got {x.shape[1]}")
        k = min(self.k, self.x.shape[0])
        out = np.empty(x.shape[0], np.int64)
        # squared distances in blocks via the gemm expansion
        x2 = (self.x ** 2).sum(axis=1)
        for lo in range(0, x.shape[0], 512):
            block = x[lo:lo + 512]
            d2 = x2[None, :] - 2.0 * (block @ self.x.T) \
                + (block ** 2).sum(axis=1)[:, None]
            for r in range(block.shape[0]):
                cls = self._neighbor_classes(d2[r], k)
                ones = int(cls.sum())
                if 2 * ones > k:
                    out[lo + r] = 1
                elif 2 * ones < k:
                    out[lo + r] = 0
                else:
                    out[lo + r] = cls[0]      # nearest neighbor breaks the tie
        return out
