"""Timing comparison of the compiled kernels against their numpy twins.

Runs the same workloads through both backends and reports wall times; also
spot-checks that the two backends produce matching results.
"""

from __future__ import annotations

import time

import numpy as np

from ._kernels import BACKEND, lti_py, tree_py

try:
    from ._kernels import _lti, _tree
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def _lti_workload(n_steps: int, n: int = 16, seed: int = 0):
    rng = np.random.default_rng(seed)
    a = -np.eye(n) * 200.0 + rng.normal(size=(n, n)) * 20.0
    dt = 5e-6
    m = np.linalg.inv(np.eye(n) - 0.5 * dt * a)
    ad = np.ascontiguousarray(m @ (np.eye(n) + 0.5 * dt * a))
    bde = np.ascontiguousarray(m @ (0.5 * dt * rng.normal(size=(n, 2))))
    binj = np.ascontiguousarray(m @ (0.5 * dt * rng.normal(size=(n, 2))))
    ccmd = np.ascontiguousarray(rng.normal(size=(2, n)) * 0.05)
    cv = np.ascontiguousarray(rng.normal(size=(2, n)))
    dv = np.ascontiguousarray(np.eye(2) * 0.5)
    ci = np.ascontiguousarray(rng.normal(size=(2, n)))
    inj = np.ascontiguousarray(rng.normal(size=(n_steps + 1, 2)) * 0.02)
    return ad, bde, binj, ccmd, cv, dv, ci, inj


def _tree_workload(rows: int, cols: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    x = np.ascontiguousarray(rng.normal(size=(rows, cols)))
    y = (x[:, 0] + 0.5 * x[:, 1] > 0).astype(float)
    w = np.bincount(rng.integers(0, rows, rows), minlength=rows).astype(float)
    si = np.ascontiguousarray(np.argsort(x, axis=0, kind="stable").astype(np.int32))
    depth = 6
    max_nodes = 2 ** (depth + 1) - 1
    mtry = max(1, int(np.sqrt(cols)))
    feats = np.ascontiguousarray(
        rng.integers(0, cols, size=(max_nodes, mtry)).astype(np.int32))
    return x, si, y, w, feats, depth


def _time_lti(fn, work, n_steps):
    out_v = np.zeros((n_steps, 2))
    out_i = np.zeros((n_steps, 2))
    t0 = time.perf_counter()
    status = fn(*work, 25, 1e9, out_v, out_i)
    dt = time.perf_counter() - t0
    assert status == -1
    return dt, out_v


def _time_tree(fn, work):
    x, si, y, w, feats, depth = work
    max_nodes = feats.shape[0]
    args = (np.zeros(max_nodes, np.int32), np.zeros(max_nodes),
            np.zeros(max_nodes, np.int32), np.zeros(max_nodes, np.int32),
            np.zeros(max_nodes), np.zeros(max_nodes), np.zeros(max_nodes),
            np.zeros(max_nodes, np.int32), np.zeros(x.shape[0], np.int32))
    t0 = time.perf_counter()
    n_nodes = fn(x, si, y, w, feats, depth, 1.0, *args)
    dt = time.perf_counter() - t0
    return dt, n_nodes, args


def run_benchmark(lti_steps: int = 200000, tree_rows: int = 4000,
                  tree_cols: int = 400) -> str:
    lines = [f"kernel backend at import: {BACKEND}",
             f"compiled extensions available: {HAVE_COMPILED}", ""]

    work = _lti_workload(lti_steps)
    t_py, v_py = _time_lti(lti_py.step_lti, work, lti_steps)
    lines.append(f"lti stepping ({lti_steps} steps, 16 states):")
    lines.append(f"  python   {t_py * 1e3:10.1f} ms")
    if HAVE_COMPILED:
        t_c, v_c = _time_lti(_lti.step_lti, work, lti_steps)
        err = float(np.max(np.abs(v_c - v_py)))
        lines.append(f"  compiled {t_c * 1e3:10.1f} ms   "
                     f"(speedup {t_py / t_c:6.1f}x, max diff {err:.2e})")
    lines.append("")

    work = _tree_workload(tree_rows, tree_cols)
    t_py, n_py, out_py = _time_tree(tree_py.grow_tree, work)
    lines.append(f"tree growth ({tree_rows} rows, {tree_cols} features, depth 6):")
    lines.append(f"  python   {t_py * 1e3:10.1f} ms   ({n_py} nodes)")
    if HAVE_COMPILED:
        t_c, n_c, out_c = _time_tree(_tree.grow_tree, work)
        same = n_c == n_py and all(np.array_equal(a, b)
                                   for a, b in zip(out_c, out_py))
        lines.append(f"  compiled {t_c * 1e3:10.1f} ms   "
                     f"(speedup {t_py / t_c:6.1f}x, trees identical: {same})")
    lines.append("")
    return "\n".join(lines) + "\n"
