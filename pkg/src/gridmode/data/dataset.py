"""Labeled admittance-feature datasets: generation and CSV persistence.

Dataset rows hold the feature vector, the structure tag (kept for
stratification and the held-out-structure protocol, never fed to learners)
and the mode label in the last column.  Features are written with 17
significant digits so a read-back reproduces the arrays exactly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import (GenerationStalled, ParamOutOfRange, SchemaError,
                      UnstableLinearization)
from ..models.statespace import build_model, sweep_admittance
from ..perunit import CircuitParams, PerUnitBase, StructureId
from .features import extract_features, feature_names, validate_feature_grid
from .sampling import SamplingSpec, sample_operating_point, sample_parameters


@dataclass(frozen=True)
class Sample:
    """One labeled row with its draw provenance."""

    features: np.ndarray
    structure: StructureId
    mode: str
    draw_index: int
    params: object = None
    op: object = None


@dataclass
class Dataset:
    feature_names: list
    grid: np.ndarray
    features: np.ndarray          # (n, 4*len(grid))
    structures: np.ndarray        # (n,) of structure names
    modes: np.ndarray             # (n,) of "GFM"/"GFL"
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, float)
        self.structures = np.asarray(self.structures, dtype=object)
        self.modes = np.asarray(self.modes, dtype=object)
        n = self.features.shape[0]
        if self.features.ndim != 2 or self.features.shape[1] != len(self.feature_names):
            raise SchemaError("feature matrix width does not match names")
        if self.structures.shape != (n,) or self.modes.shape != (n,):
            raise SchemaError("label column lengths do not match")

    def __len__(self) -> int:
        return self.features.shape[0]

    def sample(self, k: int) -> Sample:
        prov = self.provenance[k] if k < len(self.provenance) else {}
        return Sample(features=self.features[k],
                      structure=StructureId.parse(self.structures[k]),
                      mode=self.modes[k], draw_index=prov.get("draw_index", -1),
                      params=prov.get("params"), op=prov.get("op"))

    def select(self, mask) -> "Dataset":
        mask = np.asarray(mask)
        idx = np.nonzero(mask)[0] if mask.dtype == bool else mask
        prov = [self.provenance[i] for i in idx] if self.provenance else []
        return Dataset(self.feature_names, self.grid, self.features[idx],
                       self.structures[idx], self.modes[idx], prov)

    def equals(self, other: "Dataset") -> bool:
        return (self.feature_names == other.feature_names
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.structures, other.structures)
                and np.array_equal(self.modes, other.modes))


@dataclass(frozen=True)
class GenerationReport:
    master_seed: int
    per_structure: dict            # name -> dict(accepted, attempts, rejected)

    def to_text(self) -> str:
        lines = [f"master_seed: {self.master_seed}",
                 "structure, accepted, attempts, rejected, rejection_rate"]
        for name, st in self.per_structure.items():
            rate = st["rejected"] / st["attempts"] if st["attempts"] else 0.0
            lines.append(f"{name}, {st['accepted']}, {st['attempts']}, "
                         f"{st['rejected']}, {rate:.4f}")
        return "\n".join(lines) + "\n"


def _one_draw(spec, structure, idx, grid, circuit, base):
    params = sample_parameters(spec, structure, idx)
    op = sample_operating_point(spec, idx)
    try:
        model = build_model(structure, params, circuit, op, base)
    except UnstableLinearization:
        return None
    feats = extract_features(sweep_admittance(model, grid), grid)
    return feats, params, op


def generate_structure_samples(spec: SamplingSpec, structure: StructureId,
                               count: int, grid, circuit: CircuitParams,
                               base: PerUnitBase, threads: int = 1):
    """First `count` stable draws by ascending draw index.

    Unstable linearizations are rejected and the index advances, so the
    accepted set is independent of chunking or thread scheduling.
    """
    accepted, rejected, next_idx = [], 0, 0
    chunk = max(1, 4 * threads)
    while len(accepted) < count:
        idxs = range(next_idx, next_idx + chunk)
        next_idx += chunk
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(
                    lambda i: _one_draw(spec, structure, i, grid, circuit, base),
                    idxs))
        else:
            results = [_one_draw(spec, structure, i, grid, circuit, base)
                       for i in idxs]
        for i, res in zip(idxs, results):
            if res is None:
                rejected += 1
            elif len(accepted) < count:
                feats, params, op = res
                accepted.append((i, feats, params, op))
        attempts = next_idx
        if attempts >= max(50, 2 * count) and rejected > attempts / 2:
            raise GenerationStalled(
                f"{structure.value}: {rejected}/{attempts} draws rejected by "
                "the stability gate")
    return accepted, {"accepted": count, "attempts": len(accepted) + rejected,
                      "rejected": rejected}


def generate_dataset(spec: SamplingSpec, structures, grid,
                     circuit: CircuitParams | None = None,
                     base: PerUnitBase = PerUnitBase(), threads: int = 1,
                     holdout: bool = False):
    """Labeled dataset over the requested structures.

    Uses the SCR-15 grid scenario by default (grid impedance held constant
    during generation).  Returns (Dataset, GenerationReport).
    """
    grid = validate_feature_grid(grid)
    circuit = circuit or CircuitParams.from_scr(15.0)
    counts = spec.holdout_counts if holdout else spec.counts
    names = feature_names(grid)

    rows, structs, modes, prov = [], [], [], []
    report = {}
    for structure in structures:
        structure = StructureId.parse(structure) if isinstance(structure, str) \
            else structure
        count = counts.get(structure, 0)
        got, stats = generate_structure_samples(
            spec, structure, count, grid, circuit, base, threads)
        report[structure.value] = stats
        for idx, feats, params, op in got:
            rows.append(feats)
            structs.append(structure.value)
            modes.append(structure.mode.value)
            prov.append({"draw_index": idx, "params": params, "op": op})

    feats = np.array(rows, float) if rows else np.empty((0, len(names)))
    ds = Dataset(feature_names=names, grid=grid, features=feats,
                 structures=np.array(structs, object),
                 modes=np.array(modes, object), provenance=prov)
    return ds, GenerationReport(master_seed=spec.master_seed, per_structure=report)


def write_dataset(ds: Dataset, path) -> None:
    """CSV with the feature columns, then structure, then mode (last)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join([*ds.feature_names, "structure", "mode"]) + "\n")
        for k in range(len(ds)):
            cells = [f"{x:.17g}" for x in ds.features[k]]
            cells.append(str(ds.structures[k]))
            cells.append(str(ds.modes[k]))
            fh.write(",".join(cells) + "\n")


def read_dataset(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        cols = header.split(",")
        if len(cols) < 3 or cols[-1] != "mode" or cols[-2] != "structure":
            raise SchemaError("expected ..., structure, mode header")
        names = cols[:-2]
        grid = _grid_from_names(names)
        feats, structs, modes = [], [], []
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != len(cols):
                raise SchemaError(f"row {line_no}: {len(cells)} cells, "
                                  f"expected {len(cols)}")
            feats.append([float(x) for x in cells[:-2]])
            structs.append(cells[-2])
            modes.append(cells[-1])
    feats = np.array(feats, float) if feats else np.empty((0, len(names)))
    return Dataset(feature_names=names, grid=grid, features=feats,
                   structures=np.array(structs, object),
                   modes=np.array(modes, object))


def _grid_from_names(names) -> np.ndarray:
    n = len(names)
    if n % 4:
        raise SchemaError("feature count not a multiple of 4")
    g = n // 4
    freqs = []
    for k, prefix in enumerate(("Mdd", "Pdd", "Mqq", "Pqq")):
        for j in range(g):
            name = names[k * g + j]
            if not (name.startswith(prefix) and name.endswith("Hz")):
                raise SchemaError(f"feature name '{name}' violates the naming rule")
            val = float(name[len(prefix):-2])
            if k == 0:
                freqs.append(val)
            elif freqs[j] != val:
                raise SchemaError("feature blocks disagree on frequencies")
    return np.asarray(freqs, float)
