# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Weighted variance-reduction tree growth on presorted feature columns.

For 0/1 targets and integer weights the split chosen by weighted variance
reduction is exactly the split chosen by weighted Gini impurity (binary Gini
is twice the Bernoulli variance), so one kernel serves the classification
trees, the random forest and the boosted regression trees.

Ties are broken toward the first candidate scanned: features in the order
listed in node_feats[nid], thresholds ascending.  The pure-python twin and
the brute-force oracles in the test-suite follow the same rule and the same
floating-point expression  sse = q - m*m/W  over running sums, so all
implementations pick identical splits.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def grow_tree(double[:, ::1] x, int[:, ::1] sorted_idx, double[::1] y,
              double[::1] w, int[:, ::1] node_feats, int max_depth,
              double min_leaf,
              int[::1] feature, double[::1] threshold,
              int[::1] left, int[::1] right,
              double[::1] node_w, double[::1] node_m, double[::1] node_q,
              int[::1] node_depth, int[::1] node_of):
    """Grow one tree breadth-first.  Returns the number of nodes."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t mtry = node_feats.shape[1]
    cdef Py_ssize_t max_nodes = feature.shape[0]
    cdef cnp.ndarray[int, ndim=1] queue_arr = np.zeros(max_nodes, dtype=np.int32)
    cdef int[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef int n_nodes = 1
    cdef Py_ssize_t nid, fpos, j, i, lid, rid
    cdef int f, bf
    cdef double W, m, q, sse, best_imp, best_thr, wl, ml, ql, prev_x, xv
    cdef double ssl, ssr, imp, wi, yi, wr_, mr, qr
    cdef bint have_prev

    with nogil:
        # root stats
        W = 0.0; m = 0.0; q = 0.0
        for i in range(n):
            node_of[i] = 0
            wi = w[i]
            if wi > 0.0:
                yi = y[i]
                W += wi
                m += wi * yi
                q += wi * yi * yi
        node_w[0] = W; node_m[0] = m; node_q[0] = q
        node_depth[0] = 0
        queue[tail] = 0; tail += 1

        while head < tail:
            nid = queue[head]; head += 1
            feature[nid] = -1
            threshold[nid] = 0.0
            left[nid] = -1
            right[nid] = -1

            W = node_w[nid]; m = node_m[nid]; q = node_q[nid]
            if W <= 0.0 or node_depth[nid] >= max_depth or W < 2.0 * min_leaf:
                continue
            sse = q - m * m / W
            if sse <= 0.0:
                continue

            best_imp = 0.0
            bf = -1
            best_thr = 0.0
            for fpos in range(mtry):
                f = node_feats[nid, fpos]
                if f < 0:
                    continue
                wl = 0.0; ml = 0.0; ql = 0.0
                prev_x = 0.0
                have_prev = False
                for j in range(n):
                    i = sorted_idx[j, f]
                    if node_of[i] != nid or w[i] <= 0.0:
                        continue
                    xv = x[i, f]
                    if have_prev and xv > prev_x:
                        if wl >= min_leaf and W - wl >= min_leaf:
                            ssl = ql - ml * ml / wl
                            ssr = (q - ql) - (m - ml) * (m - ml) / (W - wl)
                            imp = sse - ssl - ssr
                            if imp > best_imp:
                                best_imp = imp
                                bf = f
                                best_thr = 0.5 * (prev_x + xv)
                    wi = w[i]; yi = y[i]
                    wl += wi
                    ml += wi * yi
                    ql += wi * yi * yi
                    prev_x = xv
                    have_prev = True

            if bf < 0 or n_nodes + 2 > max_nodes:
                continue

            lid = n_nodes; rid = n_nodes + 1
            n_nodes += 2
            feature[nid] = bf
            threshold[nid] = best_thr
            left[nid] = <int> lid
            right[nid] = <int> rid
            node_depth[lid] = node_depth[nid] + 1
            node_depth[rid] = node_depth[nid] + 1

            wl = 0.0; ml = 0.0; ql = 0.0
            for i in range(n):
                if node_of[i] != nid:
                    continue
                if x[i, bf] <= best_thr:
                    node_of[i] = <int> lid
                    wi = w[i]
                    if wi > 0.0:
                        yi = y[i]
                        wl += wi
                        ml += wi * yi
                        ql += wi * yi * yi
                else:
                    node_of[i] = <int> rid
            wr_ = W - wl; mr = m - ml; qr = q - ql
            node_w[lid] = wl; node_m[lid] = ml; node_q[lid] = ql
            node_w[rid] = wr_; node_m[rid] = mr; node_q[rid] = qr
            queue[tail] = <int> lid; tail += 1
            queue[tail] = <int> rid; tail += 1

    return n_nodes
