"""Steady-state operating point of the converter at the PCC.

The dq frame is chosen so the equilibrium PCC voltage lies on the d-axis
(v_q0 = 0).  With the operating point defined at the PCC the circuit part of
the equilibrium is closed-form; a Newton polish is kept as a guard for the
generality of the interface (and raises NoConvergence if it ever fails).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoConvergence
from ..perunit import CircuitParams, Mode, OperatingPoint, PerUnitBase, StructureId


@dataclass(frozen=True)
class Equilibrium:
    """Linearization point: PCC voltage, converter current (generator
    convention), internal modulated voltage (grid frame) and control-frame
    angle."""

    v_d0: float
    v_q0: float
    i_d0: float
    i_q0: float
    e_d0: float
    e_q0: float
    theta0: float
    p: float
    q: float

    def as_dict(self) -> dict:
        return {k: float(getattr(self, k)) for k in
                ("v_d0", "v_q0", "i_d0", "i_q0", "e_d0", "e_q0", "theta0", "p", "q")}


def _currents(op: OperatingPoint, tol=1e-12, max_iter=50):
    """Solve p = v*i_d, q = -v*i_q by Newton (closed form start)."""
    v = op.v
    i = np.array([op.p / v, -op.q / v])
    for _ in range(max_iter):
        f = np.array([v * i[0] - op.p, -v * i[1] - op.q])
        if np.max(np.abs(f)) < tol:
            return i
        jac = np.array([[v, 0.0], [0.0, -v]])
        i = i - np.linalg.solve(jac, f)
    raise NoConvergence("steady-state current solve did not converge")


def steady_state(structure: StructureId, circuit: CircuitParams,
                 op: OperatingPoint, base: PerUnitBase = PerUnitBase()) -> Equilibrium:
    """Equilibrium of the converter seen from the PCC.

    The injected P and Q match the operating point exactly; the internal
    voltage follows from the filter drop e = v + (r + jl) i; the control
    frame angle is 0 for GFL (PLL locks v_q to zero), the internal-voltage
    angle for vcGFM and the lossless quasi-static EMF angle for ccGFM.
    """
    v_d0, v_q0 = op.v, 0.0
    i_d0, i_q0 = _currents(op)

    r, l = circuit.r_filter, circuit.l_filter
    # e = v + (r + jl) i  with j(i_d + j i_q) = -i_q + j i_d
    e_d0 = v_d0 + r * i_d0 - l * i_q0
    e_q0 = v_q0 + r * i_q0 + l * i_d0

    if structure.mode is Mode.GFL:
        theta0 = 0.0
    elif structure is StructureId.vcGFM:
        theta0 = float(np.arctan2(e_q0, e_d0))
    else:  # ccGFM: angle of the virtual EMF v + j*l*i used by the QS model
        theta0 = float(np.arctan2(l * i_d0, v_d0 - l * i_q0))

    return Equilibrium(v_d0=v_d0, v_q0=v_q0, i_d0=float(i_d0), i_q0=float(i_q0),
                       e_d0=float(e_d0), e_q0=float(e_q0), theta0=theta0,
                       p=op.p, q=op.q)


def steady_state_residual(structure: StructureId, params, circuit: CircuitParams,
                          op: OperatingPoint, base: PerUnitBase = PerUnitBase()) -> float:
    """Max-norm residual of the full nonlinear steady-state equations.

    Substitutes the closed-form equilibrium (including every controller
    state) back into the structure's ODE right-hand side and also checks the
    injected power against the operating point.
    """
    from . import structures

    eq = steady_state(structure, circuit, op, base)
    dyn = structures.dynamics(structure)
    vals = structures.derived_params(structure, params, circuit, base, eq)
    p = structures.param_vector(structure, vals)
    x0 = structures.equilibrium_states(structure, vals, eq)
    u0 = structures.equilibrium_inputs(vals, eq)

    resid = np.max(np.abs(dyn.rhs(p, x0, u0)))
    p_err = abs(eq.v_d0 * eq.i_d0 + eq.v_q0 * eq.i_q0 - op.p)
    q_err = abs(eq.v_q0 * eq.i_d0 - eq.v_d0 * eq.i_q0 - op.q)
    return float(max(resid, p_err, q_err))
