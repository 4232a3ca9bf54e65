"""Pure-numpy twin of the compiled LTI stepping kernel.

Same recursion, same accumulation order per step (matvec via np.dot), so the
results match the compiled kernel to floating-point noise; it is simply much
slower per step.
"""

import numpy as np


def step_lti(ad, bde, binj, ccmd, cv, dv, ci, inj, n_delay, blowup,
             out_v, out_i):
    n = ad.shape[0]
    nsteps = inj.shape[0] - 1
    L = n_delay + 1
    x = np.zeros(n)
    ring = np.zeros((L, 2))

    for k in range(nsteps):
        out_v[k] = cv @ x + dv @ inj[k]
        out_i[k] = ci @ x
        ring[(k + n_delay) % L] = ccmd @ x
        e = ring[k % L] + ring[(k + 1) % L]
        u = inj[k] + inj[k + 1]
        x = ad @ x + bde @ e + binj @ u
        if (k & 255) == 0 and np.max(np.abs(x)) > blowup:
            return k
    return -1
