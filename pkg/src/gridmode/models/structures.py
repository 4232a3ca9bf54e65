"""Symbolic dq-frame dynamics of the five converter control structures.

Each structure is written as a nonlinear ODE system and differentiated
symbolically once (cached per structure); the lambdified Jacobians evaluate
the linearization at any equilibrium in microseconds.

The linear model is kept in *loop-cut* form: the modulated-voltage command
(control frame) is an output port and the applied modulated voltage is an
input port, so the control delay can later be closed exactly as e^(-jw*d)
in the frequency domain, or as an integer-step buffer in the time domain.

Ports:
    inputs  u = (v_d, v_q, ea_d, ea_q)
        v_dq  PCC voltage perturbation, grid frame
        ea_dq applied modulated voltage, control frame (after the delay)
    outputs g = (im_d, im_q, ec_d, ec_q)
        im_dq measured converter current at the PCC, load sign convention
              (positive current flows from the grid into the converter, so
              the admittance converges onto the passive-filter admittance
              at high frequency)
        ec_dq modulated-voltage command, control frame (before the delay)

Frames: the grid frame rotates at omega_base with the equilibrium PCC
voltage on its d-axis.  The control frame sits at angle theta (a state):
the PLL angle for GFL structures, the power-loop angle for GFM structures.

Control laws (normative state inventory for this artifact):

    pqGFL (13): i_d i_q x_pf x_pll theta x_p x_q x_cd x_cq x_ffd x_ffq x_ifd x_ifq
    pvGFL (14): as pqGFL with x_q replaced by x_vf x_v (|V| filter + PI)
    viGFL (13): as pqGFL with x_p replaced by x_vd (division low-pass)
    ccGFM (12): i_d i_q dw theta x_ld x_lq x_cd x_cq x_ffd x_ffq x_ifd x_ifq
    vcGFM  (6): i_d i_q dw theta x_td x_tq

* Current loop (GFL + ccGFM): PI per axis on the anti-alias-filtered current
  with cross-coupling compensation -+L and low-pass-filtered PCC-voltage
  feedforward; kp = omega_cc*L/omega_base, ki = omega_cc*R gives a
  first-order closed current loop at omega_cc.
* PLL: SRF-PLL on low-pass-filtered v_q; kp = 2*xi_n*omega_n/v_d0,
  ki = omega_n^2/v_d0.
* pqGFL outer loops: integral controllers
  i_d* = (omega_p/v_d0) * integral(P* - P), i_q* = -(omega_q/v_d0) * integral(Q* - Q).
* pvGFL q-axis: PI on the filtered voltage magnitude, integral gain
  ki = omega_v/(v_d0*l_grid) (quasi-static design against the scenario grid
  reactance), proportional gain ki/(4*omega_v).
* viGFL d-axis: i_d* = P* / lowpass(v_cd), a feedforward division with no
  active-power feedback.
* GFM power loop: swing equation d(dw)/dt = (P*-P)/(2H) - k_d*dw,
  d(theta)/dt = omega_base*dw, with k_d = 2*xi*sqrt(omega_base*T_sync/(2H))
  so xi is the damping ratio of the dominant power mode
  (T_sync = v_d0*E0/(l_filter+l_grid)).
* vcGFM: modulated voltage (E*, 0) minus the transient virtual resistor
  r_v * (s/(s+omega_f)) applied to the converter current.
* ccGFM: quasi-static current reference (E* - v_c @ complex)/(j*l_filter),
  low-passed at omega_lpf, into the standard current loop.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

import numpy as np
import sympy as sp

from ..perunit import (
    CircuitParams,
    GflControlParams,
    GfmControlParams,
    Mode,
    PerUnitBase,
    StructureId,
    W_FF_FILTER,
    W_IMEAS_FILTER,
    W_PLL_FILTER,
    W_VMAG_FILTER,
)
from .equilibrium import Equilibrium


@dataclass(frozen=True)
class StructureDynamics:
    """Lambdified dynamics and Jacobians of one control structure."""

    structure: StructureId
    state_labels: tuple
    param_names: tuple
    rhs: Callable          # (p, x, u) -> dx/dt, nonlinear
    outputs: Callable      # (p, x, u) -> (im_d, im_q, ec_d, ec_q)
    jacobians: Callable    # (p, x0, u0) -> A, B, C, D (cut form)

    @property
    def n_states(self) -> int:
        return len(self.state_labels)


def _rotations(theta, v_d, v_q, i_d, i_q, ea_d, ea_q):
    """Grid->control measured signals and control->grid applied voltage."""
    c, s = sp.cos(theta), sp.sin(theta)
    v_cd = c * v_d + s * v_q
    v_cq = -s * v_d + c * v_q
    i_cd = c * i_d + s * i_q
    i_cq = -s * i_d + c * i_q
    e_gd = c * ea_d - s * ea_q
    e_gq = s * ea_d + c * ea_q
    return v_cd, v_cq, i_cd, i_cq, e_gd, e_gq


def _build(structure: StructureId):
    """Symbolic states, parameters, RHS and outputs for one structure."""
    v_d, v_q, ea_d, ea_q = sp.symbols("v_d v_q ea_d ea_q")
    w_b, l_c, r_c = sp.symbols("w_b l_c r_c", positive=True)
    i_d, i_q, theta = sp.symbols("i_d i_q theta")

    v_cd, v_cq, i_cd, i_cq, e_gd, e_gq = _rotations(
        theta, v_d, v_q, i_d, i_q, ea_d, ea_q)
    p_pcc = v_d * i_d + v_q * i_q
    q_pcc = v_q * i_d - v_d * i_q

    di_d = (w_b / l_c) * (e_gd - v_d - r_c * i_d + l_c * i_q)
    di_q = (w_b / l_c) * (e_gq - v_q - r_c * i_q - l_c * i_d)

    states = [("i_d", i_d, di_d), ("i_q", i_q, di_q)]
    params = {"w_b": w_b, "l_c": l_c, "r_c": r_c}

    def add_state(name, deriv):
        sym = sp.Symbol(name)
        states.append((name, sym, None))   # deriv patched after it is known
        return sym

    def set_deriv(name, deriv):
        for k, (n, s, _) in enumerate(states):
            if n == name:
                states[k] = (n, s, deriv)
                return
        raise KeyError(name)

    def add_params(*names):
        syms = sp.symbols(" ".join(names))
        if len(names) == 1:
            syms = (syms,)
        for n, s in zip(names, syms):
            params[n] = s
        return syms

    if structure.mode is Mode.GFL:
        (kp_pll, ki_pll, kp_cc, ki_cc, w_ff, w_pllf, w_im, vd0,
         p_ref, q_ref) = add_params(
            "kp_pll", "ki_pll", "kp_cc", "ki_cc", "w_ff", "w_pllf", "w_im",
            "vd0", "p_ref", "q_ref")

        x_pf = add_state("x_pf", None)     # PLL v_q low-pass
        x_pll = add_state("x_pll", None)   # PLL integrator
        set_deriv("x_pf", w_pllf * (v_cq - x_pf))
        set_deriv("x_pll", x_pf)
        states.append(("theta", theta, kp_pll * x_pf + ki_pll * x_pll))

        # d-axis reference
        if structure is StructureId.viGFL:
            (w_lpf_vi,) = add_params("w_lpf_vi")
            x_vd = add_state("x_vd", None)
            set_deriv("x_vd", w_lpf_vi * (v_cd - x_vd))
            i_ref_d = p_ref / x_vd
        else:
            (w_p,) = add_params("w_p")
            x_p = add_state("x_p", None)
            set_deriv("x_p", p_ref - p_pcc)
            i_ref_d = (w_p / vd0) * x_p

        # q-axis reference
        if structure is StructureId.pvGFL:
            kp_v, ki_v, w_vm, v_ref, eps_v = add_params(
                "kp_v", "ki_v", "w_vm", "v_ref", "eps_v")
            x_vf = add_state("x_vf", None)
            x_v = add_state("x_v", None)
            vmag = sp.sqrt(v_d ** 2 + v_q ** 2)
            set_deriv("x_vf", w_vm * (vmag - x_vf))
            # leaky integrator: |V| is exogenous to the converter, so a pure
            # integrator would sit exactly on the imaginary axis; the leak is
            # a finite dc droop three decades below the loop bandwidth
            set_deriv("x_v", v_ref - x_vf - eps_v * x_v)
            i_ref_q = -(kp_v * (v_ref - x_vf) + ki_v * x_v)
        else:
            (w_q,) = add_params("w_q")
            x_q = add_state("x_q", None)
            set_deriv("x_q", q_ref - q_pcc)
            i_ref_q = -(w_q / vd0) * x_q

    else:
        (two_h, k_d, kp_cc, ki_cc, w_ff, w_im, p_ref, e_ref) = add_params(
            "two_h", "k_d", "kp_cc", "ki_cc", "w_ff", "w_im", "p_ref", "e_ref")

        dw = add_state("dw", None)         # pu frequency deviation
        set_deriv("dw", (p_ref - p_pcc) / two_h - k_d * dw)
        states.append(("theta", theta, w_b * dw))

        if structure is StructureId.vcGFM:
            w_f, r_v = add_params("w_f", "r_v")
            x_td = add_state("x_td", None)
            x_tq = add_state("x_tq", None)
            set_deriv("x_td", w_f * (i_cd - x_td))
            set_deriv("x_tq", w_f * (i_cq - x_tq))
            ec_d = e_ref - r_v * (i_cd - x_td)
            ec_q = -r_v * (i_cq - x_tq)
            labels = [n for n, _, _ in states]
            return _finish(structure, states, params, labels,
                           (v_d, v_q, ea_d, ea_q),
                           (-i_d, -i_q, ec_d, ec_q))

        # ccGFM quasi-static current reference, low-passed
        (w_lpf,) = add_params("w_lpf")
        x_ld = add_state("x_ld", None)
        x_lq = add_state("x_lq", None)
        set_deriv("x_ld", w_lpf * (-v_cq / l_c - x_ld))
        set_deriv("x_lq", w_lpf * ((v_cd - e_ref) / l_c - x_lq))
        i_ref_d = x_ld
        i_ref_q = x_lq

    # shared current loop: PI + decoupling + filtered feedforward, all on
    # filtered measurements
    x_cd = add_state("x_cd", None)
    x_cq = add_state("x_cq", None)
    x_ffd = add_state("x_ffd", None)
    x_ffq = add_state("x_ffq", None)
    x_ifd = add_state("x_ifd", None)
    x_ifq = add_state("x_ifq", None)
    set_deriv("x_cd", i_ref_d - x_ifd)
    set_deriv("x_cq", i_ref_q - x_ifq)
    set_deriv("x_ffd", w_ff * (v_cd - x_ffd))
    set_deriv("x_ffq", w_ff * (v_cq - x_ffq))
    set_deriv("x_ifd", w_im * (i_cd - x_ifd))
    set_deriv("x_ifq", w_im * (i_cq - x_ifq))

    ec_d = x_ffd + kp_cc * (i_ref_d - x_ifd) + ki_cc * x_cd - l_c * x_ifq
    ec_q = x_ffq + kp_cc * (i_ref_q - x_ifq) + ki_cc * x_cq + l_c * x_ifd

    labels = [n for n, _, _ in states]
    return _finish(structure, states, params, labels,
                   (v_d, v_q, ea_d, ea_q),
                   (-i_d, -i_q, ec_d, ec_q))


def _finish(structure, states, params, labels, inputs, outputs):
    x_syms = [s for _, s, _ in states]
    f = sp.Matrix([d for _, _, d in states])
    g = sp.Matrix(outputs)
    p_names = tuple(sorted(params))
    p_syms = [params[n] for n in p_names]
    u_syms = list(inputs)

    fx = f.jacobian(x_syms)
    fu = f.jacobian(u_syms)
    gx = g.jacobian(x_syms)
    gu = g.jacobian(u_syms)

    args = (p_syms, x_syms, u_syms)
    rhs = sp.lambdify(args, f, modules="numpy", cse=True)
    out = sp.lambdify(args, g, modules="numpy", cse=True)
    jac = sp.lambdify(args, (fx, fu, gx, gu), modules="numpy", cse=True)

    n = len(x_syms)

    def rhs_fn(p, x, u):
        return np.asarray(rhs(tuple(p), tuple(x), tuple(u)), float).reshape(n)

    def out_fn(p, x, u):
        return np.asarray(out(tuple(p), tuple(x), tuple(u)), float).reshape(4)

    def jac_fn(p, x0, u0):
        a, b, c, d = jac(tuple(p), tuple(x0), tuple(u0))
        return (np.asarray(a, float).reshape(n, n),
                np.asarray(b, float).reshape(n, 4),
                np.asarray(c, float).reshape(4, n),
                np.asarray(d, float).reshape(4, 4))

    return StructureDynamics(structure=structure, state_labels=tuple(labels),
                             param_names=p_names, rhs=rhs_fn, outputs=out_fn,
                             jacobians=jac_fn)


@functools.lru_cache(maxsize=None)
def dynamics(structure: StructureId) -> StructureDynamics:
    """Cached symbolic derivation for one structure."""
    return _build(structure)


def control_frame(theta0: float, xy) -> np.ndarray:
    """Rotate a grid-frame dq pair into the control frame."""
    c, s = np.cos(theta0), np.sin(theta0)
    return np.array([c * xy[0] + s * xy[1], -s * xy[0] + c * xy[1]])


def derived_params(structure: StructureId, params, circuit: CircuitParams,
                   base: PerUnitBase, eq: Equilibrium) -> dict:
    """Numeric values for every symbolic parameter of a structure."""
    w_b = base.omega_base
    vals = {"w_b": w_b, "l_c": circuit.l_filter, "r_c": circuit.r_filter}
    e_c0 = control_frame(eq.theta0, (eq.e_d0, eq.e_q0))

    if structure.mode is Mode.GFL:
        assert isinstance(params, GflControlParams)
        vals.update(
            kp_pll=2.0 * params.xi_n * params.omega_n / eq.v_d0,
            ki_pll=params.omega_n ** 2 / eq.v_d0,
            kp_cc=params.omega_cc * circuit.l_filter / w_b,
            ki_cc=params.omega_cc * circuit.r_filter,
            w_ff=W_FF_FILTER, w_pllf=W_PLL_FILTER, w_im=W_IMEAS_FILTER,
            vd0=eq.v_d0, p_ref=eq.p, q_ref=eq.q,
        )
        if structure is StructureId.viGFL:
            vals["w_lpf_vi"] = params.omega_lpf_vi
        else:
            vals["w_p"] = params.omega_p
        if structure is StructureId.pvGFL:
            ki_v = params.omega_v / (eq.v_d0 * circuit.l_grid)
            kp_v = ki_v / (4.0 * params.omega_v)
            eps_v = 1e-3 * params.omega_v
            # the leak shifts the reference needed to hold Q at the
            # operating point
            x_v0 = -eq.i_q0 / (ki_v + kp_v * eps_v)
            vals.update(kp_v=kp_v, ki_v=ki_v, w_vm=W_VMAG_FILTER,
                        eps_v=eps_v, v_ref=eq.v_d0 + eps_v * x_v0,
                        _x_v0=x_v0)
        else:
            vals["w_q"] = params.omega_q
    else:
        assert isinstance(params, GfmControlParams)
        x_total = circuit.l_filter + circuit.l_grid
        if structure is StructureId.vcGFM:
            e_ref = np.hypot(eq.e_d0, eq.e_q0)
        else:
            # ccGFM virtual EMF behind the (lossless) quasi-static reactance
            e_ref = np.hypot(eq.v_d0 - circuit.l_filter * eq.i_q0,
                             circuit.l_filter * eq.i_d0)
        t_sync = eq.v_d0 * e_ref / x_total
        vals.update(
            two_h=2.0 * params.inertia_h,
            k_d=2.0 * params.damping_xi * np.sqrt(w_b * t_sync /
                                                  (2.0 * params.inertia_h)),
            kp_cc=params.omega_cc * circuit.l_filter / w_b,
            ki_cc=params.omega_cc * circuit.r_filter,
            w_ff=W_FF_FILTER, w_im=W_IMEAS_FILTER,
            p_ref=eq.p, e_ref=e_ref,
        )
        if structure is StructureId.vcGFM:
            vals.update(w_f=params.omega_f, r_v=params.r_v)
        else:
            vals["w_lpf"] = params.omega_lpf

    vals["_e_c0"] = e_c0    # consumed by equilibrium_inputs, not a symbol
    return vals


def param_vector(structure: StructureId, vals: dict) -> np.ndarray:
    dyn = dynamics(structure)
    return np.array([vals[n] for n in dyn.param_names], float)


def equilibrium_inputs(vals: dict, eq: Equilibrium) -> np.ndarray:
    """Port values (v_d, v_q, ea_d, ea_q) at the equilibrium."""
    e_c0 = vals["_e_c0"]
    return np.array([eq.v_d0, eq.v_q0, e_c0[0], e_c0[1]])


def equilibrium_states(structure: StructureId, vals: dict,
                       eq: Equilibrium) -> np.ndarray:
    """Steady-state value of every state, in state_labels order."""
    v_c0 = control_frame(eq.theta0, (eq.v_d0, eq.v_q0))
    i_c0 = control_frame(eq.theta0, (eq.i_d0, eq.i_q0))
    e_c0 = vals["_e_c0"]

    x = {"i_d": eq.i_d0, "i_q": eq.i_q0, "theta": eq.theta0}
    if structure.mode is Mode.GFL:
        x.update(x_pf=0.0, x_pll=0.0)
        if structure is StructureId.viGFL:
            x["x_vd"] = v_c0[0]
        else:
            x["x_p"] = eq.i_d0 * vals["vd0"] / vals["w_p"]
        if structure is StructureId.pvGFL:
            x.update(x_vf=eq.v_d0, x_v=vals["_x_v0"])
        else:
            x["x_q"] = -eq.i_q0 * vals["vd0"] / vals["w_q"]
        _current_loop_states(x, vals, v_c0, i_c0, e_c0)
    else:
        x["dw"] = 0.0
        if structure is StructureId.vcGFM:
            x.update(x_td=i_c0[0], x_tq=i_c0[1])
        else:
            x.update(x_ld=i_c0[0], x_lq=i_c0[1])
            _current_loop_states(x, vals, v_c0, i_c0, e_c0)

    labels = dynamics(structure).state_labels
    return np.array([x[n] for n in labels])


def _current_loop_states(x, vals, v_c0, i_c0, e_c0):
    l_c, ki_cc = vals["l_c"], vals["ki_cc"]
    x["x_ffd"], x["x_ffq"] = v_c0
    x["x_ifd"], x["x_ifq"] = i_c0
    # PI integrators absorb whatever the other terms do not supply
    x["x_cd"] = (e_c0[0] - v_c0[0] + l_c * i_c0[1]) / ki_cc
    x["x_cq"] = (e_c0[1] - v_c0[1] - l_c * i_c0[0]) / ki_cc
