"""Cosine basis and the Dirichlet-type kernels behind the SIML estimator.

The estimator averages products of cosine transforms over the first ``m``
frequencies ``(l - 1/2) pi``. Expanding that average gives the two-argument
kernel

    D_m(u, s) = (2/m) sum_{l=1}^m cos((l - 1/2) pi u) cos((l - 1/2) pi s)
              = D_m(u + s) + D_m(u - s),

with the one-dimensional half kernel D_m(x) = sin(m pi x) / (2 m sin(pi x / 2)).
The half kernel is even, antiperiodic with period 2 and satisfies
|D_m(x)| <= min(1, 1 / (2 m |x|)) on [-1, 1].
"""

import numbers

import numpy as np
from numpy.polynomial import Polynomial

from siml._backend import core
from siml.errors import ArgumentError
from siml.sampling import common_refinement

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


def check_order(m):
    """Validate a kernel order (scalar or array of positive integers)."""
    arr = np.asarray(m)
    if arr.dtype.kind not in "iuf" or np.any(arr < 1) or np.any(arr != np.floor(arr)):
        raise ArgumentError(f"kernel order must be a positive integer, got {m!r}")
    return int(arr) if arr.ndim == 0 else arr.astype(np.int64)


def cos_basis_weight(n, k, l):
    """Weight sqrt(2/(n+1/2)) cos((l-1/2) pi (k-1/2)/(n+1/2)) for 1 <= k, l <= n."""
    n = check_order(n)
    if not (1 <= k <= n and 1 <= l <= n) or int(k) != k or int(l) != l:
        raise ArgumentError(f"indices must lie in 1..{n}, got k={k!r}, l={l!r}")
    return float(np.sqrt(2.0 / (n + 0.5)) * np.cos((l - 0.5) * np.pi * ((k - 0.5) / (n + 0.5))))


def basis_matrix(n, m):
    """All weights for l = 1..m (rows) and k = 1..n (columns)."""
    n, m = check_order(n), check_order(m)
    k = np.arange(1, n + 1)
    l = np.arange(1, m + 1)
    return np.sqrt(2.0 / (n + 0.5)) * np.cos((l[:, None] - 0.5) * np.pi * ((k[None, :] - 0.5) / (n + 0.5)))


def cosine_matrix(points, m):
    """cos((l - 1/2) pi x) for l = 1..m (rows) and x in ``points`` (columns)."""
    m = check_order(m)
    x = np.asarray(points, dtype=np.float64)
    l = np.arange(1, m + 1)
    return np.cos((l[:, None] - 0.5) * (np.pi * x[None, :]))


def dirichlet_half(x, m):
    """D_m(x), with the removable singularities at x in 2Z filled in."""
    m = check_order(m)
    out = core.dirichlet_half(np.asarray(x, dtype=np.float64), m)
    return float(out) if np.ndim(out) == 0 else out


def kernel_direct_sum(u, s, m):
    m = check_order(m)
    out = core.kernel_direct_sum(u, s, m)
    return float(out) if np.ndim(out) == 0 else out


def kernel_closed_form(u, s, m):
    m = check_order(m)
    u = np.asarray(u, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    out = core.dirichlet_half(u + s, m) + core.dirichlet_half(u - s, m)
    return float(out) if np.ndim(out) == 0 else out


def kernel_sampled(u, s, m, phi_j, phi_jp):
    """D_m(phi_j(u), phi_jp(s)) for u, s in [0, 1]."""
    return kernel_closed_form(phi_j(u), phi_jp(s), m)


def l2_profile(s, m):
    """m * int_0^1 D_m(u, s)^2 du for the identity map, i.e. 1 + D_m(2s)."""
    return 1.0 + dirichlet_half(2.0 * np.asarray(s, dtype=np.float64), m)


def cos_product_integral(l, lp, lo=0.0, hi=1.0):
    """Exact integral of cos((l-1/2) pi s) cos((lp-1/2) pi s) over [lo, hi]."""

    def _cos_integral(freq):
        # int cos(freq * pi * s) ds over [lo, hi]
        if freq == 0:
            return hi - lo
        w = freq * np.pi
        return (np.sin(w * hi) - np.sin(w * lo)) / w

    return 0.5 * (_cos_integral(l + lp - 1) + _cos_integral(l - lp))


def cell_integrals(g, edges):
    """Integral of g over each cell [edges[i], edges[i+1]].

    ``g`` may be None (meaning 1), a real constant, a numpy Polynomial
    (integrated exactly) or a vectorised callable (5-point Gauss-Legendre
    per cell).
    """
    edges = np.asarray(edges, dtype=np.float64)
    lo, hi = edges[:-1], edges[1:]
    if g is None:
        return hi - lo
    if isinstance(g, numbers.Real):
        return float(g) * (hi - lo)
    if isinstance(g, Polynomial):
        antideriv = g.integ()
        return antideriv(hi) - antideriv(lo)
    if not callable(g):
        raise ArgumentError(f"cannot integrate {type(g).__name__}")
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.broadcast_to(np.asarray(g(nodes), dtype=np.float64), nodes.shape)
    return half * (vals @ _GL_WEIGHTS)


def refinement_cells(*maps):
    """Common refinement of the maps' grids and each map's representative per cell."""
    for smap in maps:
        if smap.grid.times[0] != 0.0 or smap.grid.times[-1] != 1.0:
            raise ArgumentError("sampling maps must be defined on the whole of [0, 1]")
    fine = common_refinement(*(smap.grid for smap in maps))
    left = fine.times[:-1]
    reps = [smap.representatives[smap.cell_index(left)] for smap in maps]
    return fine, reps


def diagonal_integral(m, phi_j, phi_jp, g=None):
    """int_0^1 D_m(phi_j(s), phi_jp(s)) g(s) ds, exact per refinement cell."""
    m = check_order(m)
    fine, (a, b) = refinement_cells(phi_j, phi_jp)
    weights = cell_integrals(g, fine.times)
    diag = core.dirichlet_half(a + b, m) + core.dirichlet_half(a - b, m)
    return float(np.sum(diag * weights))
