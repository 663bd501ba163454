"""Pure-numpy backend, arithmetic-identical to the compiled kernels.

Every operation here performs the same sequence of IEEE multiplies and adds as
_kernels.pyx (ascending-coordinate rank-1 updates, midpoint medians), so the
two backends agree bit for bit; tests/test_backends.py pins that equality.
Selected automatically when the extension is unavailable, or explicitly with
DEPTHFORGE_BACKEND=python.
"""

from __future__ import annotations

import numpy as np

name = "python"


def proj_rect(xt, u, out, j0, j1, i0, i1, d_chunk):
    """out[j0:j1, i0:i1] = rows of u times xt, fixed-order accumulation.

    d_chunk is accepted for signature parity; the ascending coordinate loop
    already realizes every chunking's addition order.
    """
    ob = out[j0:j1, i0:i1]
    ob.fill(0.0)
    ub = u[j0:j1]
    xb = xt[:, i0:i1]
    for l in range(xt.shape[0]):
        ob += ub[:, l, None] * xb[l]


def proj_naive(x, u, out):
    """Single-worker reference product; same accumulation order as proj_rect."""
    out.fill(0.0)
    for l in range(x.shape[1]):
        out += u[:, l][:, None] * x[:, l][None, :]


def proj_point_span(z, u, out, j0, j1):
    acc = np.zeros(j1 - j0)
    ub = u[j0:j1]
    for l in range(u.shape[1]):
        acc += ub[:, l] * z[l]
    out[j0:j1] = acc


def halfspace_span(px, pz, out, j0, j1):
    rows = px[j0:j1]
    y = pz[j0:j1, None]
    cle = (rows <= y).sum(axis=1)
    cge = (rows >= y).sum(axis=1)
    out[j0:j1] = np.minimum(cle, cge) / px.shape[1]


def projection_span(px, pz, out, j0, j1):
    rows = px[j0:j1]
    med = np.median(rows, axis=1)
    mad = np.median(np.abs(rows - med[:, None]), axis=1)
    dev = np.abs(pz[j0:j1] - med)
    res = np.empty(j1 - j0)
    degenerate = mad == 0.0
    ok = ~degenerate
    res[ok] = 1.0 / (1.0 + dev[ok] / mad[ok])
    res[degenerate] = np.where(dev[degenerate] == 0.0, 1.0, 0.0)
    out[j0:j1] = res


def asym_projection_span(px, pz, out, j0, j1):
    rows = px[j0:j1]
    med = np.median(rows, axis=1)
    for t in range(j1 - j0):
        dev = pz[j0 + t] - med[t]
        if dev <= 0.0:
            out[j0 + t] = 1.0
            continue
        deviations = rows[t] - med[t]
        pos = deviations[deviations > 0.0]
        if pos.size == 0:
            out[j0 + t] = 0.0
        else:
            out[j0 + t] = 1.0 / (1.0 + dev / np.median(pos))
