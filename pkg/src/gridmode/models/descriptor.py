"""Model descriptor files (JSON), named scenarios and Bode export."""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from ..errors import ConfigError
from ..perunit import (CircuitParams, GflControlParams, GfmControlParams,
                       Mode, OperatingPoint, PerUnitBase, StructureId)
from .statespace import AdmittanceSpectrum, StateSpaceModel, build_model

BODE_HEADER = "freq_hz, |Ydd|, arg(Ydd)_deg, |Yqq|, arg(Yqq)_deg"


def make_descriptor(structure: StructureId, params, circuit: CircuitParams,
                    op: OperatingPoint, base: PerUnitBase = PerUnitBase()) -> dict:
    return {
        "structure": structure.value,
        "params": dataclasses.asdict(params),
        "circuit": dataclasses.asdict(circuit),
        "operating_point": dataclasses.asdict(op),
        "base": dataclasses.asdict(base),
    }


def parse_descriptor(d: dict):
    """(structure, params, circuit, op, base) from a descriptor dict."""
    try:
        structure = StructureId.parse(d["structure"])
        pcls = GflControlParams if structure.mode is Mode.GFL else GfmControlParams
        params = pcls(**d["params"])
        circuit = CircuitParams(**d["circuit"])
        op = OperatingPoint(**d["operating_point"])
        base = PerUnitBase(**d.get("base", {}))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed model descriptor: {exc}") from exc
    return structure, params, circuit, op, base


def model_from_descriptor(d: dict) -> StateSpaceModel:
    return build_model(*parse_descriptor(d))


def save_descriptor(d: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(d, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_descriptor(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"descriptor {path} is not valid JSON: {exc}") from exc


def scenario(name: str) -> dict:
    """Named scenarios.

    table1-vcgfm: the measurement-validation case (strong-filter circuit
    with the 0.5/0.05 pu grid branch, vcGFM at H=2.6s, xi=2, rated power).
    scr15-<structure>: the dataset-generation circuit (SCR 15 grid) with
    default control parameters at half load.
    """
    if name == "table1-vcgfm":
        return make_descriptor(
            StructureId.vcGFM,
            GfmControlParams(inertia_h=2.6, damping_xi=2.0),
            CircuitParams(),
            OperatingPoint(p=round(1.0 / 1.044, 6), q=0.0, v=1.0))
    if name.startswith("scr15-"):
        structure = StructureId.parse(name[len("scr15-"):])
        params = (GflControlParams() if structure.mode is Mode.GFL
                  else GfmControlParams())
        return make_descriptor(structure, params, CircuitParams.from_scr(15.0),
                               OperatingPoint(p=0.5, q=0.1, v=1.0))
    raise ConfigError(
        f"unknown scenario '{name}'; use table1-vcgfm or scr15-<structure>")


def format_bode(spectrum: AdmittanceSpectrum) -> str:
    lines = [BODE_HEADER]
    ydd = spectrum.values[:, 0, 0]
    yqq = spectrum.values[:, 1, 1]
    ph_dd = np.degrees(np.unwrap(np.angle(ydd)))
    ph_qq = np.degrees(np.unwrap(np.angle(yqq)))
    for k, f in enumerate(spectrum.frequencies):
        lines.append(f"{f:.17g}, {abs(ydd[k]):.17g}, {ph_dd[k]:.17g}, "
                     f"{abs(yqq[k]):.17g}, {ph_qq[k]:.17g}")
    return "\n".join(lines) + "\n"
