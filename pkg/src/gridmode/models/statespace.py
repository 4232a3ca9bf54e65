"""Linearized converter models and their exact frequency-domain admittance.

A model is stored in two equivalent views:

* the spec-facing closed loop ``a, b, c, d`` (2 inputs = PCC voltage, 2
  outputs = measured converter current) valid for zero delay, whose
  eigenvalues define the stability gate, and
* the loop-cut port form ``a_cut, b_ports, c_ports`` with the modulated
  voltage command/application as extra ports, from which ``admittance_at``
  closes the delay loop exactly with e^(-jw*delay).

When delay == 0 both views give identical admittance (covered by tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParamOutOfRange, SingularResolvent, UnstableLinearization
from ..perunit import (CircuitParams, GflControlParams, GfmControlParams, Mode,
                       OperatingPoint, PerUnitBase, StructureId)
from .equilibrium import Equilibrium, steady_state
from . import structures


@dataclass(frozen=True)
class ComplexMatrix2:
    """2x2 dq admittance matrix entry, i_dq = Y * v_dq (load convention)."""

    y_dd: complex
    y_dq: complex
    y_qd: complex
    y_qq: complex

    @classmethod
    def from_array(cls, m) -> "ComplexMatrix2":
        return cls(complex(m[0, 0]), complex(m[0, 1]),
                   complex(m[1, 0]), complex(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.y_dd, self.y_dq], [self.y_qd, self.y_qq]])


@dataclass(frozen=True)
class AdmittanceSpectrum:
    """Admittance matrices sampled on an ascending frequency grid (Hz)."""

    frequencies: np.ndarray          # Hz
    values: np.ndarray               # (n, 2, 2) complex

    def __post_init__(self):
        f = np.asarray(self.frequencies, float)
        v = np.asarray(self.values, complex)
        if f.ndim != 1 or v.shape != (f.size, 2, 2):
            raise ParamOutOfRange("spectrum shape mismatch")
        if f.size > 1 and not np.all(np.diff(f) > 0):
            raise ParamOutOfRange("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.frequencies.size

    def entry(self, k: int) -> ComplexMatrix2:
        return ComplexMatrix2.from_array(self.values[k])


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpaceModel:
    """Linearized converter with input dv_dq (PCC) and output di_dq (measured,
    load convention); the control delay is stored separately and applied
    exactly in the frequency domain."""

    structure: StructureId
    a: np.ndarray                    # (n, n) zero-delay closed loop
    b: np.ndarray                    # (n, 2)
    c: np.ndarray                    # (2, n)
    d: np.ndarray                    # (2, 2)
    delay: float
    state_labels: tuple
    a_cut: np.ndarray                # (n, n) loop cut at the delay
    b_ports: np.ndarray              # (n, 4) inputs (v_d, v_q, ea_d, ea_q)
    c_ports: np.ndarray              # (4, n) outputs (im_d, im_q, ec_d, ec_q)
    equilibrium: Equilibrium
    circuit: CircuitParams
    base: PerUnitBase
    params: object = None
    op: OperatingPoint = None

    @property
    def n_states(self) -> int:
        return self.a.shape[0]

    def max_eig_real(self) -> float:
        return float(np.max(np.real(np.linalg.eigvals(self.a))))


def _pade2_augmented(a_cut, b_e, c_cmd, delay):
    """Closed-loop A with the delay replaced by a 2nd-order Pade model
    (one per axis); used only as an extra stability screen."""
    n = a_cut.shape[0]
    m = n + 4
    aug = np.zeros((m, m))
    aug[:n, :n] = a_cut
    w2 = 12.0 / delay ** 2
    w1 = 6.0 / delay
    g = 12.0 / delay
    for axis in range(2):
        z = n + 2 * axis
        # e_app = e_cmd - g*z2,  z1' = z2,  z2' = -w2 z1 - w1 z2 + e_cmd
        aug[:n, :n] += np.outer(b_e[:, axis], c_cmd[axis])
        aug[:n, z + 1] = -g * b_e[:, axis]
        aug[z, z + 1] = 1.0
        aug[z + 1, z] = -w2
        aug[z + 1, z + 1] = -w1
        aug[z + 1, :n] = c_cmd[axis]
    return aug


def build_model(structure: StructureId, params, circuit: CircuitParams,
                op: OperatingPoint, base: PerUnitBase = PerUnitBase()) -> StateSpaceModel:
    """Linearize one control structure around its equilibrium.

    Raises UnstableLinearization when the zero-delay closed loop (or the
    Pade-screened delayed loop) has an eigenvalue with non-negative real
    part; such draws are rejected and redrawn by the dataset generator.
    """
    expected = GflControlParams if structure.mode is Mode.GFL else GfmControlParams
    if not isinstance(params, expected):
        raise ParamOutOfRange(
            f"{structure.value} needs {expected.__name__}, got {type(params).__name__}")

    eq = steady_state(structure, circuit, op, base)
    dyn = structures.dynamics(structure)
    vals = structures.derived_params(structure, params, circuit, base, eq)
    pvec = structures.param_vector(structure, vals)
    x0 = structures.equilibrium_states(structure, vals, eq)
    u0 = structures.equilibrium_inputs(vals, eq)

    a_cut, b_ports, c_ports, d_ports = dyn.jacobians(pvec, x0, u0)
    if np.any(d_ports):
        raise AssertionError("unexpected direct feedthrough in cut model")

    b_v, b_e = b_ports[:, :2], b_ports[:, 2:]
    c_i, c_cmd = c_ports[:2], c_ports[2:]

    a_closed = a_cut + b_e @ c_cmd
    lam = np.max(np.real(np.linalg.eigvals(a_closed)))
    if lam >= 0:
        raise UnstableLinearization(
            f"{structure.value}: max Re(eig) = {lam:.3e} without delay")
    if params.delay > 0:
        lam_d = np.max(np.real(np.linalg.eigvals(
            _pade2_augmented(a_cut, b_e, c_cmd, params.delay))))
        if lam_d >= 0:
            raise UnstableLinearization(
                f"{structure.value}: max Re(eig) = {lam_d:.3e} with "
                f"delay {params.delay:.1e}s (Pade screen)")

    return StateSpaceModel(
        structure=structure,
        a=_frozen(a_closed), b=_frozen(b_v), c=_frozen(c_i),
        d=_frozen(np.zeros((2, 2))),
        delay=float(params.delay),
        state_labels=dyn.state_labels,
        a_cut=_frozen(a_cut), b_ports=_frozen(b_ports), c_ports=_frozen(c_ports),
        equilibrium=eq, circuit=circuit, base=base, params=params, op=op,
    )


def admittance_at(model: StateSpaceModel, omega: float) -> ComplexMatrix2:
    """Exact admittance at perturbation frequency omega (rad/s, dq frame).

    Evaluates the cut-form transfer G(jw) and closes the delay loop with the
    factor e^(-jw*delay) on the modulated-voltage command path.
    """
    if omega < 0:
        raise ParamOutOfRange("omega must be non-negative")
    return ComplexMatrix2.from_array(
        _admittance_batch(model, np.array([omega]))[0])


def _admittance_batch(model: StateSpaceModel, omegas: np.ndarray) -> np.ndarray:
    """(nf, 2, 2) admittance matrices; stacked LU over all frequencies."""
    n = model.n_states
    lhs = (1j * omegas[:, None, None] * np.eye(n)[None] - model.a_cut[None])
    try:
        x = np.linalg.solve(lhs, np.broadcast_to(
            model.b_ports.astype(complex), (omegas.size, n, 4)))
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent("resolvent singular on the grid") from exc
    g = np.einsum("pn,knm->kpm", model.c_ports, x)
    g_iv, g_ie = g[:, :2, :2], g[:, :2, 2:]
    g_ev, g_ee = g[:, 2:, :2], g[:, 2:, 2:]
    e = np.exp(-1j * omegas * model.delay)[:, None, None]
    m = np.eye(2)[None] - e * g_ee
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    if np.any(np.abs(det) < 1e-300):
        raise SingularResolvent("delay closure singular on the grid")
    inv = np.empty_like(m)
    inv[:, 0, 0], inv[:, 1, 1] = m[:, 1, 1], m[:, 0, 0]
    inv[:, 0, 1], inv[:, 1, 0] = -m[:, 0, 1], -m[:, 1, 0]
    inv /= det[:, None, None]
    return g_iv + e * (g_ie @ inv @ g_ev)


def filter_admittance(circuit: CircuitParams, omega: float,
                      base: PerUnitBase = PerUnitBase()) -> ComplexMatrix2:
    """Exact admittance of the passive series-RL output filter at s = jw."""
    if omega < 0:
        raise ParamOutOfRange("omega must be non-negative")
    r, l = circuit.r_filter, circuit.l_filter
    zx = r + 1j * omega * l / base.omega_base
    det = zx * zx + l * l
    return ComplexMatrix2(y_dd=zx / det, y_dq=l / det,
                          y_qd=-l / det, y_qq=zx / det)


def sweep_admittance(model: StateSpaceModel, freqs_hz) -> AdmittanceSpectrum:
    """Admittance over an ascending positive frequency grid (Hz)."""
    f = np.asarray(freqs_hz, float)
    if f.ndim != 1 or f.size == 0:
        raise ParamOutOfRange("frequency grid must be a non-empty 1-d array")
    if np.any(f <= 0) or (f.size > 1 and not np.all(np.diff(f) > 0)):
        raise ParamOutOfRange("frequency grid must be positive and strictly increasing")
    values = _admittance_batch(model, 2.0 * np.pi * f)
    return AdmittanceSpectrum(frequencies=f, values=values)


def filter_sweep(circuit: CircuitParams, freqs_hz,
                 base: PerUnitBase = PerUnitBase()) -> AdmittanceSpectrum:
    f = np.asarray(freqs_hz, float)
    values = np.empty((f.size, 2, 2), complex)
    for k, fk in enumerate(f):
        values[k] = filter_admittance(circuit, 2.0 * np.pi * fk, base).as_array()
    return AdmittanceSpectrum(frequencies=f, values=values)
