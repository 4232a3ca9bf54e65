# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Discrete-time LTI stepping with an integer-step delayed feedback port.

One trapezoidal step of the measurement rig:

    x[k+1] = Ad x[k] + Bde (e[k] + e[k+1]) + Binj (u[k] + u[k+1])

where e is the modulated-voltage command fed back after n_delay steps and u
the exogenous injection.  Recorded outputs:

    v[k] = Cv x[k] + Dv u[k]      (PCC voltage)
    i[k] = Ci x[k]                (measured converter current)
    ecmd[k] = Ccmd x[k]           (delayed into e)
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def step_lti(double[:, ::1] ad, double[:, ::1] bde, double[:, ::1] binj,
             double[:, ::1] ccmd, double[:, ::1] cv, double[:, ::1] dv,
             double[:, ::1] ci, double[:, ::1] inj, int n_delay,
             double blowup, double[:, ::1] out_v, double[:, ::1] out_i):
    """Run the recursion over inj.shape[0]-1 steps; returns -1 on success or
    the step index where a state exceeded the blowup bound."""
    cdef Py_ssize_t n = ad.shape[0]
    cdef Py_ssize_t nsteps = inj.shape[0] - 1
    cdef Py_ssize_t L = n_delay + 1
    cdef cnp.ndarray[double, ndim=1] x_arr = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] xn_arr = np.zeros(n)
    cdef cnp.ndarray[double, ndim=2] ring_arr = np.zeros((L, 2))
    cdef double[::1] x = x_arr
    cdef double[::1] xn = xn_arr
    cdef double[:, ::1] ring = ring_arr
    cdef Py_ssize_t k, r, cidx, slot0, slot1, slotw
    cdef double acc, e0, e1, u0, u1, cmd0, cmd1, mx
    cdef int status = -1

    with nogil:
        for k in range(nsteps):
            slot0 = k % L
            slot1 = (k + 1) % L
            slotw = (k + n_delay) % L

            # outputs at step k
            for r in range(2):
                acc = dv[r, 0] * inj[k, 0] + dv[r, 1] * inj[k, 1]
                for cidx in range(n):
                    acc += cv[r, cidx] * x[cidx]
                out_v[k, r] = acc
                acc = 0.0
                for cidx in range(n):
                    acc += ci[r, cidx] * x[cidx]
                out_i[k, r] = acc

            cmd0 = 0.0
            cmd1 = 0.0
            for cidx in range(n):
                cmd0 += ccmd[0, cidx] * x[cidx]
                cmd1 += ccmd[1, cidx] * x[cidx]
            ring[slotw, 0] = cmd0
            ring[slotw, 1] = cmd1

            e0 = ring[slot0, 0] + ring[slot1, 0]
            e1 = ring[slot0, 1] + ring[slot1, 1]
            u0 = inj[k, 0] + inj[k + 1, 0]
            u1 = inj[k, 1] + inj[k + 1, 1]

            for r in range(n):
                acc = bde[r, 0] * e0 + bde[r, 1] * e1
                acc += binj[r, 0] * u0 + binj[r, 1] * u1
                for cidx in range(n):
                    acc += ad[r, cidx] * x[cidx]
                xn[r] = acc
            for r in range(n):
                x[r] = xn[r]

            if (k & 255) == 0:
                mx = 0.0
                for r in range(n):
                    if x[r] > mx:
                        mx = x[r]
                    elif -x[r] > mx:
                        mx = -x[r]
                if mx > blowup:
                    status = <int> k
                    break
    return status
