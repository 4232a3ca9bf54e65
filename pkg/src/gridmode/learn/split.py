"""Stratified train/test splitting of labeled datasets."""

from __future__ import annotations

import numpy as np

from ..data.dataset import Dataset
from ..errors import ParamOutOfRange, TooFewSamples


def stratified_split(ds: Dataset, train_fraction: float = 0.8, seed: int = 0):
    """Disjoint (train, test) split stratified by (mode, structure).

    Per-stratum proportions are preserved within one sample; every stratum
    keeps at least one sample on each side.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ParamOutOfRange("train_fraction must be in (0, 1)")
    if len(ds) == 0:
        raise TooFewSamples("empty dataset")

    keys = [f"{m}|{s}" for m, s in zip(ds.modes, ds.structures)]
    strata = sorted(set(keys))
    rng = np.random.default_rng([seed, len(ds)])
    keys = np.array(keys, dtype=object)

    train_idx, test_idx = [], []
    for stratum in strata:
        idx = np.nonzero(keys == stratum)[0]
        if idx.size < 2:
            raise TooFewSamples(f"stratum {stratum} has {idx.size} sample(s)")
        perm = rng.permutation(idx)
        n_tr = int(round(train_fraction * idx.size))
        n_tr = min(max(n_tr, 1), idx.size - 1)
        train_idx.append(perm[:n_tr])
        test_idx.append(perm[n_tr:])

    train_idx = np.sort(np.concatenate(train_idx))
    test_idx = np.sort(np.concatenate(test_idx))
    return ds.select(train_idx), ds.select(test_idx)
