"""Pure NumPy implementations of the numerical core.

Every function here has a twin with the same signature in the compiled
``_core`` extension. ``siml._backend`` picks one of them at import time.
The two are expected to agree to a few ulps, not bitwise: libm and NumPy's
vectorised ``sin``/``cos`` may round differently.
"""

import numpy as np

# Below this |sin(pi r / 2)| the ratio form of the half kernel is replaced by
# its finite cosine sum.
SINGULAR_TOL = 1e-8

# Cap on the number of kernel entries materialised per block (8 bytes each).
_BLOCK_ENTRIES = 1 << 21


def _cos_mean(r, m):
    """(1/m) sum_{l=1}^m cos((l - 1/2) pi r), elementwise, m per element."""
    out = np.zeros_like(r)
    mmax = int(m.max()) if m.size else 0
    for l in range(1, mmax + 1):
        active = m >= l
        out[active] += np.cos((l - 0.5) * np.pi * r[active])
    return out / m


def dirichlet_half(x, m):
    """Half kernel sin(m pi x) / (2 m sin(pi x / 2)) for float arrays x, m."""
    x = np.asarray(x, dtype=np.float64)
    m = np.broadcast_to(np.asarray(m, dtype=np.float64), x.shape)
    k = np.rint(0.5 * x)
    r = x - 2.0 * k
    den = np.sin(0.5 * np.pi * r)
    small = np.abs(den) < SINGULAR_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sin(np.pi * (m * r)) / (2.0 * m * den)
    if np.any(small):
        out = np.where(small, 0.0, out)
        out[small] = _cos_mean(r[small], m[small])
    # D(x + 2) = -D(x)
    return np.where(np.fmod(k, 2.0) == 0.0, out, -out)


def kernel_direct_sum(u, s, m):
    """(2/m) sum_l cos((l - 1/2) pi u) cos((l - 1/2) pi s), elementwise."""
    u, s, m = np.broadcast_arrays(
        np.asarray(u, dtype=np.float64),
        np.asarray(s, dtype=np.float64),
        np.asarray(m, dtype=np.float64),
    )
    pu = np.pi * u
    ps = np.pi * s
    acc = np.zeros(u.shape)
    mmax = int(m.max()) if m.size else 0
    for l in range(1, mmax + 1):
        c = l - 0.5
        acc += np.where(m >= l, np.cos(c * pu) * np.cos(c * ps), 0.0)
    return 2.0 * acc / m


def _kernel(a, b, m):
    return dirichlet_half(a + b, m) + dirichlet_half(a - b, m)


def cos_projections(cosmat, increments):
    """Row r, column l: sum_k cosmat[l, k] * increments[r, k].

    Each output is reduced on its own, so a row never depends on how many
    other rows are in the batch.
    """
    cosmat = np.asarray(cosmat, dtype=np.float64)
    increments = np.atleast_2d(np.asarray(increments, dtype=np.float64))
    out = np.empty((increments.shape[0], cosmat.shape[0]))
    for r in range(increments.shape[0]):
        out[r] = (cosmat * increments[r]).sum(axis=1)
    return out


def pair_product_sum(a1, b1, a2, b2, ws, wu, wdiag, m, triangle):
    """Cell sum of D(a1_p, b1_q) D(a2_p, b2_q) over a square or triangle.

    p indexes the outer variable s, q the inner variable u. The square weight
    is ws_p * wu_q. With ``triangle`` only q < p is kept and the diagonal
    cell p == q gets ``wdiag_p`` (the integral over its lower half).
    """
    a1, b1, a2, b2, ws, wu, wdiag = (
        np.asarray(v, dtype=np.float64) for v in (a1, b1, a2, b2, ws, wu, wdiag)
    )
    n = a1.size
    same = (
        np.array_equal(a1, a2) and np.array_equal(b1, b2)
    )
    block = max(1, _BLOCK_ENTRIES // max(n, 1))
    total = 0.0
    cols = np.arange(n)
    for start in range(0, n, block):
        rows = np.arange(start, min(start + block, n))
        d1 = _kernel(a1[rows, None], b1[None, :], m)
        prod = d1 * d1 if same else d1 * _kernel(a2[rows, None], b2[None, :], m)
        w = ws[rows, None] * wu[None, :]
        if triangle:
            w = np.where(cols[None, :] < rows[:, None], w, 0.0)
            w[rows - start, rows] = wdiag[rows]
        total += float((prod * w).sum())
    return total


def lp_row_integrals(a_s, b_u, wu, m, p):
    """For each a in a_s: sum_q wu_q |D(b_u_q, a)|^p."""
    a_s = np.asarray(a_s, dtype=np.float64)
    b_u = np.asarray(b_u, dtype=np.float64)
    wu = np.asarray(wu, dtype=np.float64)
    out = np.empty(a_s.size)
    block = max(1, _BLOCK_ENTRIES // max(b_u.size, 1))
    for start in range(0, a_s.size, block):
        stop = min(start + block, a_s.size)
        d = np.abs(_kernel(b_u[None, :], a_s[start:stop, None], m))
        vals = d * d if p == 2 else d ** p
        out[start:stop] = (vals * wu[None, :]).sum(axis=1)
    return out
