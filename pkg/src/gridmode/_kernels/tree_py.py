"""Pure-numpy twin of the compiled tree-growth kernel.

Vectorizes the per-feature scan with prefix sums.  np.cumsum accumulates
left-to-right like the compiled kernel's running sums and the improvement is
computed with the same floating-point expression, so both backends grow
identical trees (same splits, same thresholds), bit for bit.
"""

import numpy as np


def grow_tree(x, sorted_idx, y, w, node_feats, max_depth, min_leaf,
              feature, threshold, left, right,
              node_w, node_m, node_q, node_depth, node_of):
    n = x.shape[0]
    max_nodes = feature.shape[0]

    node_of[:] = 0
    active = w > 0.0
    node_w[0] = w[active].sum()
    node_m[0] = (w * y)[active].sum()
    node_q[0] = (w * y * y)[active].sum()
    node_depth[0] = 0
    n_nodes = 1
    queue = [0]

    while queue:
        nid = queue.pop(0)
        feature[nid] = -1
        threshold[nid] = 0.0
        left[nid] = -1
        right[nid] = -1

        W, m, q = node_w[nid], node_m[nid], node_q[nid]
        if W <= 0.0 or node_depth[nid] >= max_depth or W < 2.0 * min_leaf:
            continue
        sse = q - m * m / W
        if sse <= 0.0:
            continue

        best_imp, bf, best_thr = 0.0, -1, 0.0
        for f in node_feats[nid]:
            if f < 0:
                continue
            order = sorted_idx[:, f]
            sel = order[(node_of[order] == nid) & (w[order] > 0.0)]
            if sel.size < 2:
                continue
            xv = x[sel, f]
            wv = w[sel]
            yv = y[sel]
            wl = np.cumsum(wv)[:-1]
            ml = np.cumsum(wv * yv)[:-1]
            ql = np.cumsum(wv * yv * yv)[:-1]
            valid = (xv[1:] > xv[:-1]) & (wl >= min_leaf) & (W - wl >= min_leaf)
            if not valid.any():
                continue
            ssl = ql - ml * ml / wl
            ssr = (q - ql) - (m - ml) * (m - ml) / (W - wl)
            imp = np.where(valid, sse - ssl - ssr, -np.inf)
            j = int(np.argmax(imp))          # first maximum: earliest threshold
            if imp[j] > best_imp:
                best_imp = float(imp[j])
                bf = int(f)
                best_thr = 0.5 * (xv[j] + xv[j + 1])

        if bf < 0 or n_nodes + 2 > max_nodes:
            continue

        lid, rid = n_nodes, n_nodes + 1
        n_nodes += 2
        feature[nid] = bf
        threshold[nid] = best_thr
        left[nid] = lid
        right[nid] = rid
        node_depth[lid] = node_depth[nid] + 1
        node_depth[rid] = node_depth[nid] + 1

        in_node = node_of == nid
        go_left = in_node & (x[:, bf] <= best_thr)
        go_right = in_node & ~go_left
        node_of[go_left] = lid
        node_of[go_right] = rid
        lsel = go_left & active
        node_w[lid] = w[lsel].sum()
        node_m[lid] = (w * y)[lsel].sum()
        node_q[lid] = (w * y * y)[lsel].sum()
        node_w[rid] = W - node_w[lid]
        node_m[rid] = m - node_m[lid]
        node_q[rid] = q - node_q[lid]
        queue.append(lid)
        queue.append(rid)

    return n_nodes
