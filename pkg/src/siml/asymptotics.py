"""Numerical verification of the kernel's limit behaviour.

Everything here is exact up to rounding where the kernel is piecewise
constant: the sampled kernel D(phi^j(s), phi^j'(u)) only changes at the
observation times, so integrals against it reduce to sums over the cells of
the common refinement of the grids involved.

Two routes are available for double integrals of kernel products:

* ``basis``: expand each kernel in the m cosines, which turns the double
  sum over cells into O(m^2 N) work with prefix sums for the triangle;
* ``direct``: sum the kernel product over all N^2 cell pairs in the
  compiled core.

They compute the same number and are cross-checked in the tests.
"""

import math
import numbers
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.stats import qmc

from siml._backend import core
from siml.errors import ArgumentError, RefusalError
from siml.estimator import SimlConfig, choose_m, siml_general, siml_prefactor
from siml.kernel import (
    cell_integrals,
    check_order,
    cos_product_integral,
    cosine_matrix,
    diagonal_integral,
    dirichlet_half,
    kernel_closed_form,
    kernel_direct_sum,
    l2_profile,
    refinement_cells,
)
from siml.sampling import make_uniform_grid, sampling_map
from siml.simulate import observe, simulate_fine

_TRI_NODES, _TRI_WEIGHTS = np.polynomial.legendre.leggauss(8)
_TRI_NODES = 0.5 * (_TRI_NODES + 1.0)
_TRI_WEIGHTS = 0.5 * _TRI_WEIGHTS
_GL3_NODES, _GL3_WEIGHTS = np.polynomial.legendre.leggauss(3)
_BLOCK_ENTRIES = 1 << 20


# ---------------------------------------------------------------------------
# result containers


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    m: int
    statistic: float
    reference: float
    error: float
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ConvergenceTable:
    """Rows sorted by n, with a tag naming the (n, m) regime."""

    rows: list
    regime: str = "custom"
    statistic: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rows", sorted(self.rows, key=lambda r: r.n))

    @property
    def errors(self):
        return np.array([r.error for r in self.rows])

    def column(self, name):
        return np.array([getattr(r, name) if hasattr(r, name) else r.extra[name] for r in self.rows])

    def decreasing(self, name="error"):
        vals = self.column(name)
        return bool(np.all(np.diff(vals) < 0.0))

    def nondecreasing_steps(self, name="error"):
        """Indices i where the value at row i+1 is not below row i."""
        vals = self.column(name)
        return [int(i) for i in np.flatnonzero(np.diff(vals) >= 0.0)]

    def to_records(self):
        return [
            {"n": r.n, "m": r.m, "statistic": r.statistic, "reference": r.reference, "error": r.error, **r.extra}
            for r in self.rows
        ]


def regime_of(alpha):
    """Name of the asymptotic regime for m ~ n^alpha."""
    if alpha >= 1.0:
        return "optimal-rate"
    if alpha < 0.5:
        return "rho-m2"
    return "rho-m"


def _resolve_rule(m_rule):
    if callable(m_rule):
        return m_rule, "custom"
    c, alpha = m_rule
    return (lambda n: choose_m(n, c, alpha)), regime_of(alpha)


def _integral_01(g, cells=1024):
    return float(np.sum(cell_integrals(g, np.arange(cells + 1) / cells)))


def ideal_map(n):
    """Midpoint map on a uniform n-grid: the sampled stand-in for phi(s) = s.

    For n >= m the cosines (l - 1/2) pi x at the midpoints are exactly
    orthogonal, so the sampled kernel reproduces the continuum identities.
    """
    return sampling_map(make_uniform_grid(n), "midpoint")


def sampled_kernel_matrix(m, phi_j, phi_jp):
    """D_m(r^j_k, r^j'_k') for all representative pairs."""
    m = check_order(m)
    a = phi_j.representatives[:, None]
    b = phi_jp.representatives[None, :]
    return core.dirichlet_half(a + b, m) + core.dirichlet_half(a - b, m)


# ---------------------------------------------------------------------------
# diagonal integrals


def diagonal_convergence_study(scheme, g, n_list, m_rule, regime=None, rate=0.5):
    """|int D(s, s) g(s) ds - int g| for one scheme across n.

    ``m_rule`` is a callable n -> m or a (c, alpha) pair; the extra column
    ``scaled`` is m^rate times the error.
    """
    rule, tag = _resolve_rule(m_rule)
    ref = _integral_01(g)
    rows = []
    for n in n_list:
        m = rule(n)
        smap = sampling_map(make_uniform_grid(n), scheme)
        val = diagonal_integral(m, smap, smap, g)
        err = abs(val - ref)
        rows.append(ConvergenceRow(int(n), int(m), val, ref, err, {"scaled": m**rate * err}))
    return ConvergenceTable(rows, regime or tag, f"diagonal-integral[{scheme}]")


def counterexample_integral(n):
    """Left map on one asset, right map on the other, m = 2n: the diagonal mass vanishes."""
    grid = make_uniform_grid(n)
    return diagonal_integral(2 * n, sampling_map(grid, "left"), sampling_map(grid, "right"))


# ---------------------------------------------------------------------------
# double integrals of kernel products


def _as_univariate(g):
    """Callable form of None / constant / Polynomial / callable."""
    if g is None:
        return lambda x: np.ones_like(x)
    if isinstance(g, numbers.Real):
        c = float(g)
        return lambda x: np.full_like(x, c)
    return g


def _separable_weights(g1, g2, edges):
    """Per-cell integrals of g1, g2 and of g1(s) g2(u) over the cell's lower half u < s."""
    ws = cell_integrals(g1, edges)
    wu = cell_integrals(g2, edges)
    lo, h = edges[:-1], np.diff(edges)
    if (g1 is None or isinstance(g1, numbers.Real)) and (g2 is None or isinstance(g2, numbers.Real)):
        c = (1.0 if g1 is None else float(g1)) * (1.0 if g2 is None else float(g2))
        return ws, wu, 0.5 * c * h * h
    f1, f2 = _as_univariate(g1), _as_univariate(g2)
    # s = lo + h x, u = lo + h x y; du ds = h^2 x dx dy on the unit square
    x = _TRI_NODES[:, None]
    y = _TRI_NODES[None, :]
    s = lo[:, None, None] + h[:, None, None] * x[None]
    u = lo[:, None, None] + h[:, None, None] * (x * y)[None]
    vals = f1(s) * f2(u) * x[None]
    w = _TRI_WEIGHTS[:, None] * _TRI_WEIGHTS[None, :]
    wdiag = h * h * np.sum(vals * w[None], axis=(1, 2))
    return ws, wu, wdiag


def _basis_cell_contributions(m, a1, b1, a2, b2, ws, wu, wdiag, triangle):
    """Per s-cell contribution to the double sum, through the cosine expansion."""
    ca1, cb1 = cosine_matrix(a1, m), cosine_matrix(b1, m)
    ca2, cb2 = cosine_matrix(a2, m), cosine_matrix(b2, m)
    contrib = np.zeros(a1.size)
    for l in range(m):
        alpha = ca1[l][None, :] * ca2  # (m, N): c_l(a1_p) c_l'(a2_p)
        beta0 = cb1[l][None, :] * cb2
        beta = beta0 * wu[None, :]
        if triangle:
            inner = np.cumsum(beta, axis=1)
            inner = np.concatenate((np.zeros((m, 1)), inner[:, :-1]), axis=1)
            contrib += np.sum(alpha * (ws[None, :] * inner + wdiag[None, :] * beta0), axis=0)
        else:
            contrib += ws * np.sum(alpha * np.sum(beta, axis=1)[:, None], axis=0)
    return contrib * (4.0 / (m * m))


def _general_g_sum(m, a1, b1, a2, b2, edges, g, triangle):
    """Direct cell sum with per-cell-pair 3x3 Gauss-Legendre weights for g(s, u)."""
    lo, h = edges[:-1], np.diff(edges)
    nodes = (lo[:, None] + 0.5 * h[:, None] * (_GL3_NODES[None, :] + 1.0))  # (N, 3)
    half_w = 0.5 * h[:, None] * _GL3_WEIGHTS[None, :]
    n = a1.size
    block = max(1, _BLOCK_ENTRIES // (9 * n))
    total = 0.0
    cols = np.arange(n)
    for start in range(0, n, block):
        rows = np.arange(start, min(start + block, n))
        d = (core.dirichlet_half(a1[rows, None] + b1[None, :], m) + core.dirichlet_half(a1[rows, None] - b1[None, :], m)) * (
            core.dirichlet_half(a2[rows, None] + b2[None, :], m) + core.dirichlet_half(a2[rows, None] - b2[None, :], m)
        )
        s = nodes[rows][:, None, :, None]
        u = nodes[None, :, None, :]
        gv = np.asarray(g(s, u), dtype=np.float64)
        w = np.sum(gv * half_w[rows][:, None, :, None] * half_w[None, :, None, :], axis=(2, 3))
        if triangle:
            w = np.where(cols[None, :] < rows[:, None], w, 0.0)
            for p in rows:
                x = _TRI_NODES[:, None]
                y = _TRI_NODES[None, :]
                sv = lo[p] + h[p] * x
                uv = lo[p] + h[p] * x * y
                tw = _TRI_WEIGHTS[:, None] * _TRI_WEIGHTS[None, :]
                w[p - start, p] = h[p] * h[p] * float(np.sum(np.asarray(g(sv, uv)) * x * tw))
        total += float(np.sum(d * w))
    return total


def squared_kernel_integral(m, maps, g=None, region="triangle", method="auto", return_cells=False):
    """Double integral of D^{j,j'}(s, u) D^{k,k'}(s, u) g(s, u).

    Parameters
    ----------
    m : int
        Kernel order.
    maps : pair of pairs of SamplingMap
        ``((phi_j, phi_jp), (phi_k, phi_kp))``; the first map of each pair
        acts on s, the second on u.
    g : None, float, (g1, g2) or callable, optional
        Weight. A pair means g(s, u) = g1(s) g2(u), each part being None, a
        constant, a numpy Polynomial or a vectorised callable. A bare
        callable is a general g(s, u) and forces the direct route.
    region : {"triangle", "square"}
        ``triangle`` is 0 <= u <= s <= 1, ``square`` all of [0, 1]^2.
    method : {"auto", "basis", "direct"}
    return_cells : bool
        Also return the fine grid and per-s-cell contributions (basis route
        only); their cumulative sum is the integral over s <= t.
    """
    m = check_order(m)
    if region not in ("triangle", "square"):
        raise ArgumentError(f"region must be 'triangle' or 'square', got {region!r}")
    (pj, pjp), (pk, pkp) = maps
    fine, (a1, b1, a2, b2) = refinement_cells(pj, pjp, pk, pkp)
    triangle = region == "triangle"
    general = callable(g) and not isinstance(g, Polynomial)
    if method == "auto":
        method = "direct" if general or m * m > 4 * fine.n else "basis"
    if general:
        if return_cells:
            raise ArgumentError("per-cell output needs a separable weight")
        return _general_g_sum(m, a1, b1, a2, b2, fine.times, g, triangle)
    g1, g2 = g if isinstance(g, tuple) else (g, None)
    ws, wu, wdiag = _separable_weights(g1, g2, fine.times)
    if method == "basis":
        cells = _basis_cell_contributions(m, a1, b1, a2, b2, ws, wu, wdiag, triangle)
        total = float(np.sum(cells))
        return (total, fine, cells) if return_cells else total
    if method != "direct":
        raise ArgumentError(f"unknown method {method!r}")
    if return_cells:
        raise ArgumentError("per-cell output is only available from the basis route")
    return float(core.pair_product_sum(a1, b1, a2, b2, ws, wu, wdiag, m, triangle))


def lp_sup_integral(m, p, maps):
    """m * max_s int_0^1 |D(phi_j(u), phi_jp(s))|^p du, s over phi_jp's representatives."""
    m = check_order(m)
    if not p > 1:
        raise ArgumentError(f"p must exceed 1, got {p!r}")
    phi_j, phi_jp = maps
    s_points = np.unique(phi_jp.representatives)
    rows = core.lp_row_integrals(s_points, phi_j.representatives, phi_j.grid.widths, m, float(p))
    return float(m * np.max(rows))


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    worst_ratio: float
    violations: int
    worst_m: int
    worst_x: float
    points: int


def pointwise_bound_check(m_list, sample_count, slack=1e-12):
    """|D_m(x)| <= min(1, 1/(2 m x)) at Halton points of (0, 1].

    A point violates the bound when |D_m(x)| exceeds it by more than a
    relative ``slack``; ``worst_ratio`` is max |D| / bound.
    """
    sampler = qmc.Halton(d=1, scramble=False)
    x = sampler.random(sample_count + 1)[1:, 0]  # drop the leading 0
    worst, viol, worst_m, worst_x = 0.0, 0, 0, float("nan")
    for m in m_list:
        m = check_order(m)
        d = np.abs(dirichlet_half(x, m))
        bound = np.minimum(1.0, 1.0 / (2.0 * m * x))
        ratio = d / bound
        viol += int(np.sum(d > bound * (1.0 + slack)))
        i = int(np.argmax(ratio))
        if ratio[i] > worst:
            worst, worst_m, worst_x = float(ratio[i]), m, float(x[i])
    return BoundCheck(viol == 0, worst, viol, worst_m, worst_x, sample_count * len(m_list))


# ---------------------------------------------------------------------------
# gamma tensor


@dataclass(frozen=True, eq=False)
class GammaTensor:
    """m times the kernel-product integral for every pair of ordered asset pairs."""

    entries: np.ndarray
    m: int
    n: list
    region: str = "triangle"
    profile: tuple = None

    @property
    def gbar(self):
        """The scalar value for a single asset (entry 0,0,0,0)."""
        return float(self.entries[0, 0, 0, 0])

    def __getitem__(self, idx):
        return float(self.entries[idx])


def gamma_estimate(m, maps, region="triangle", method="auto", with_profile=False):
    """GammaTensor for J maps; entries (j,j',k,k') and (k,k',j,j') share one computation."""
    m = check_order(m)
    J = len(maps)
    pairs = [(j, jp) for j in range(J) for jp in range(J)]
    entries = np.empty((J,) * 4)
    profile = None
    for a, (j, jp) in enumerate(pairs):
        for b in range(a, len(pairs)):
            k, kp = pairs[b]
            quad = ((maps[j], maps[jp]), (maps[k], maps[kp]))
            if with_profile and a == 0 and b == 0:
                val, fine, cells = squared_kernel_integral(m, quad, None, region, "basis", return_cells=True)
                profile = (fine.times, np.concatenate(([0.0], m * np.cumsum(cells))))
            else:
                val = squared_kernel_integral(m, quad, None, region, method)
            entries[j, jp, k, kp] = entries[k, kp, j, jp] = m * val
    return GammaTensor(entries, m, [smap.grid.n for smap in maps], region, profile)


def weighted_gamma_check(m, smap, g1, g2, method="auto"):
    """m * triangle integral of D^2 g1(s) g2(u) against gbar * int g1(s) g2(s) ds.

    Returns (weighted value, prediction, relative difference).
    """
    gbar = gamma_estimate(m, [smap], method=method).gbar
    weighted = m * squared_kernel_integral(m, ((smap, smap), (smap, smap)), (g1, g2), "triangle", method)
    f1, f2 = _as_univariate(g1), _as_univariate(g2)
    diag = _integral_01(lambda s: f1(s) * f2(s))
    pred = gbar * diag
    return weighted, pred, abs(weighted - pred) / abs(pred)


# ---------------------------------------------------------------------------
# residue terms on simulated paths


@dataclass(frozen=True, eq=False)
class ResidueBreakdown:
    """Terms of the Ito-formula split of (2 / c_{jk}) V^{jk} for one asset pair.

    ``terms`` maps names such as ``"M[j,k]"`` or ``"I1[k,j]"`` to values
    (for j == k the two orderings coincide and ``total`` counts each twice);
    ``discrete_centering`` is the fine-mesh Riemann sum of D(s, s) Sigma(s),
    ``centering`` its exact counterpart.
    """

    pair: tuple
    V: float
    scaled_V: float
    centering: float
    discrete_centering: float
    terms: dict
    total: float
    error: float

    @property
    def relative_error(self):
        return self.error / abs(self.V) if self.V != 0.0 else math.inf

    def term(self, kind, outer, inner):
        return self.terms[f"{kind}[{outer},{inner}]"]


def _step_cells(fine_index, steps):
    """Observation cell (0-based) of each fine step, from the snapped grid indices."""
    return np.clip(np.searchsorted(fine_index, np.arange(steps), side="right") - 1, 0, fine_index.size - 2)


def _excl_kernel_prefix(m, cos_outer, cos_inner, z):
    """For every step i: sum_{i' < i} D(outer_i, inner_i') z_i', via the cosine expansion."""
    acc = np.cumsum(cos_inner * z[None, :], axis=1)
    acc = np.concatenate((np.zeros((m, 1)), acc[:, :-1]), axis=1)
    return (2.0 / m) * np.sum(cos_outer * acc, axis=0)


def residue_breakdown(path, model, cfg, pair=(0, 0)):
    """Split the estimator into centering, martingale and drift terms on one path.

    Each fine step contributes its own diagonal product; half of it goes to
    each ordering (j, k) and (k, j) so the split is exact on the mesh and the
    reconstruction error isolates the gap between the Riemann-sum centering
    and the exact centering integral.
    """
    if path.sigma is None or path.drift is None:
        raise RefusalError("path does not carry its coefficient values")
    j, k = pair
    grids = [smap.grid for smap in cfg.maps]
    obs = observe(path, grids)
    V = float(siml_general(obs, cfg).V[j, k])
    pref = siml_prefactor(grids[j].n, grids[k].n)
    m = cfg.m
    steps = path.steps
    h = 1.0 / steps

    rep = {}
    cos = {}
    for a in {j, k}:
        cells = _step_cells(obs.fine_index[a], steps)
        rep[a] = cfg.maps[a].representatives[cells]
        cos[a] = cosine_matrix(cfg.maps[a].representatives, m)[:, cells]
    noise = np.einsum("kjr,kr->kj", path.sigma, path.dW)  # sigma^a dW per step
    sig_prod = np.einsum("kr,kr->k", path.sigma[:, j, :], path.sigma[:, k, :])
    d_diag = core.dirichlet_half(rep[j] + rep[k], m) + core.dirichlet_half(rep[j] - rep[k], m)

    terms = {}
    total = 0.0
    for outer, inner in ((j, k), (k, j)):
        z_sig = noise[:, inner]
        z_b = path.drift[:, inner] * h
        in_sig = _excl_kernel_prefix(m, cos[outer], cos[inner], z_sig)
        in_b = _excl_kernel_prefix(m, cos[outer], cos[inner], z_b)
        out_sig = noise[:, outer]
        out_b = path.drift[:, outer] * h
        half = 0.5 * d_diag
        terms[f"M[{outer},{inner}]"] = float(
            np.sum(in_sig * out_sig) + np.sum(half * (out_sig * z_sig - sig_prod * h))
        )
        terms[f"I1[{outer},{inner}]"] = float(np.sum(in_b * out_sig) + np.sum(half * z_b * out_sig))
        terms[f"I2[{outer},{inner}]"] = float(np.sum(in_sig * out_b) + np.sum(half * out_b * z_sig))
        terms[f"I3[{outer},{inner}]"] = float(np.sum(in_b * out_b) + np.sum(half * out_b * z_b))
        # for j == k both orderings share keys but each still counts once
        total += sum(terms[f"{kind}[{outer},{inner}]"] for kind in ("M", "I1", "I2", "I3"))

    discrete_centering = float(np.sum(d_diag * sig_prod) * h)
    if model is not None and model.deterministic:
        if model.constant_sigma is not None:
            sig = model.constant_sigma
            g = float(sig[j] @ sig[k])
        else:
            g = lambda s: model.spot_covariance(s)[..., j, k]
        centering = diagonal_integral(m, cfg.maps[j], cfg.maps[k], g)
    else:
        centering = discrete_centering
    scaled = 2.0 * V / pref
    return ResidueBreakdown(
        pair=(j, k),
        V=V,
        scaled_V=scaled,
        centering=centering,
        discrete_centering=discrete_centering,
        terms=terms,
        total=total,
        error=abs(scaled - centering - total),
    )


def _residue_job(args):
    model, n, m, scheme, steps_factor, seed = args
    smap = sampling_map(make_uniform_grid(n), scheme)
    cfg = SimlConfig(m, [smap] * model.n_assets)
    path = simulate_fine(model, steps_factor * n, seed)
    rb = residue_breakdown(path, model, cfg)
    return rb.term("I1", 0, 0) + rb.term("I3", 0, 0), rb.term("M", 0, 0)


def residue_scaling_study(model, n_list, m_rule, seeds, scheme="ksss", steps_factor=20, workers=1):
    """MC estimates of sqrt(m) E|I1 + I3| and m E|M|^2 for asset pair (0, 0).

    ``seeds`` is a list of seeds or a SeedSequence-compatible pair
    ``(master, count)``; per-replication streams never depend on ``workers``.
    """
    rule, tag = _resolve_rule(m_rule)
    if isinstance(seeds, tuple):
        master, count = seeds
        seeds = [np.random.SeedSequence(master, spawn_key=(r,)) for r in range(count)]
    rows = []
    for n in n_list:
        m = rule(n)
        jobs = [(model, n, m, scheme, steps_factor, s) for s in seeds]
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                out = list(pool.map(_residue_job, jobs))
        else:
            out = [_residue_job(a) for a in jobs]
        drift_part = np.abs(np.array([o[0] for o in out]))
        mart = np.array([o[1] for o in out])
        stat = math.sqrt(m) * float(np.mean(drift_part))
        rows.append(
            ConvergenceRow(
                int(n),
                int(m),
                stat,
                0.0,
                stat,
                {
                    "se": math.sqrt(m) * float(np.std(drift_part, ddof=1) / math.sqrt(len(out))) if len(out) > 1 else 0.0,
                    "m-E-M2": m * float(np.mean(mart * mart)),
                },
            )
        )
    return ConvergenceTable(rows, tag, "sqrt(m) E|I1 + I3|")


# ---------------------------------------------------------------------------
# deterministic suite


def _check(name, ok, worst, **params):
    return {"name": name, "status": "pass" if ok else "fail", "worst-error": float(worst), "params": params}


def run_kernel_checks(seed=0, quick=False):
    """Run every deterministic kernel identity and bound; one dict per check."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    checks = []
    max_m = 64 if quick else 512

    u, s = rng.uniform(-2, 2, (2, 10_000))
    m = rng.integers(1, max_m + 1, 10_000)
    err = float(np.max(np.abs(kernel_direct_sum(u, s, m) - kernel_closed_form(u, s, m))))
    checks.append(_check("kernel-identity", err < 1e-10, err, samples=10_000, max_m=max_m))

    x = rng.uniform(-3, 3, 10_000)
    err = float(np.max(np.abs(dirichlet_half(x + 2.0, m) + dirichlet_half(x, m))))
    checks.append(_check("antiperiodicity", err < 1e-12, err, samples=10_000))

    err = float(np.max(np.abs(kernel_closed_form(u, s, m) - kernel_closed_form(s, u, m))))
    checks.append(_check("symmetry", err == 0.0, err, samples=10_000))

    sd = rng.uniform(0, 1, 10_000)
    err = float(np.max(np.abs(kernel_closed_form(sd, sd, m) - l2_profile(sd, m))))
    checks.append(_check("diagonal-formula", err < 1e-12, err, samples=10_000))

    err = max(
        abs(cos_product_integral(l, lp) - (0.5 if l == lp else 0.0)) for l in range(1, 65) for lp in range(1, 65)
    )
    checks.append(_check("orthogonality", err < 1e-12, err, max_l=64))

    ns = range(2, 65)
    err = max(abs(counterexample_integral(n)) for n in ns)
    checks.append(_check("mixed-endpoint-counterexample", err < 1e-12, err, n="2..64"))

    err = 0.0
    for n in range(4, 257):
        left = sampling_map(make_uniform_grid(n), "left")
        err = max(err, abs(diagonal_integral(2 * n, left, left) - (1.0 + 1.0 / n)))
    checks.append(_check("left-endpoint-diagonal", err < 1e-12, err, n="4..256"))

    err_k, err_t = 0.0, 0.0
    for n in range(1, 65):
        smap = sampling_map(make_uniform_grid(n), "ksss")
        mat = sampled_kernel_matrix(2 * n + 1, smap, smap)
        err_k = max(err_k, float(np.max(np.abs(mat - np.eye(n)))))
        tri = squared_kernel_integral(2 * n + 1, ((smap, smap), (smap, smap)))
        err_t = max(err_t, abs(tri - 1.0 / (2 * n)))
    checks.append(_check("ksss-kronecker", err_k < 1e-10, err_k, n="1..64", m="2n+1"))
    checks.append(_check("ksss-triangle", err_t < 1e-12, err_t, n="1..64", m="2n+1"))

    worst = 0.0
    for mm in range(1, max_m + 1):
        worst = max(worst, lp_sup_integral(mm, 2, (ideal_map(mm), ideal_map(mm))))
    checks.append(_check("l2-sup-ideal", worst <= 2.0 + 1e-9, max(0.0, worst - 2.0), max_m=max_m, value=worst))

    ladder = [16, 32, 64, 128] if quick else [16, 32, 64, 128, 256]
    for p in (2, 4):
        vals = [lp_sup_integral(mm, p, (sampling_map(make_uniform_grid(mm), "ksss"),) * 2) for mm in ladder]
        ok = max(vals) <= 2.0 * vals[0]
        checks.append(_check(f"lp-sup-ksss-p{p}", ok, max(vals) / vals[0], ladder=ladder, values=vals))

    bc = pointwise_bound_check(range(1, max_m + 1), 10_000 if quick else 100_000)
    checks.append(_check("pointwise-bound", bc.passed, bc.worst_ratio, violations=bc.violations, points=bc.points))

    n_gamma = 2048 if quick else 8192
    mg = choose_m(n_gamma)
    g_ideal = gamma_estimate(mg, [ideal_map(n_gamma)]).gbar
    checks.append(_check("gamma-small-m", abs(g_ideal - 0.5) < 0.05, abs(g_ideal - 0.5), n=n_gamma, m=mg, gbar=g_ideal))
    err = 0.0
    for n in (4, 16, 64):
        smap = sampling_map(make_uniform_grid(n), "ksss")
        gk = gamma_estimate(2 * n + 1, [smap]).gbar
        err = max(err, abs(gk - (2 * n + 1) / (2 * n)))
    checks.append(_check("gamma-ksss-a2", err < 1e-12, err, n=[4, 16, 64]))

    table = diagonal_convergence_study("ksss", None, [64, 256, 1024, 4096], (1.0, 0.4))
    ok = table.decreasing() and table.rows[-1].error < 1e-2
    checks.append(_check("diagonal-convergence-ksss", ok, table.rows[-1].error, rows=table.to_records()))

    return {"checks": checks, "runtime-seconds": time.perf_counter() - start}
