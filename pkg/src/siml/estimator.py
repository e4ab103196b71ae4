"""SIML integrated-covariance estimator and its baselines.

For asset j with increments dY^j_k on a grid of n_j intervals and sampling
map representatives r^j_k, the l-th cosine projection is

    A^j_l = sum_k cos((l - 1/2) pi r^j_k) dY^j_k,

and the estimator is

    V^{jj'} = c_{jj'} (1/m) sum_{l=1}^m A^j_l A^{j'}_l,
    c_{jj'} = 2 sqrt(n_j n_j') / sqrt((n_j + 1/2)(n_j' + 1/2)).

On uniform grids with the KSSS map this is the same number as the
orthonormal-basis form :func:`siml_equispaced`.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from siml._backend import core
from siml.errors import ArgumentError, RefusalError
from siml.kernel import basis_matrix, check_order, cosine_matrix, diagonal_integral
from siml.sampling import validate_map


@dataclass(frozen=True, eq=False)
class SimlConfig:
    """Kernel order and one sampling map per asset."""

    m: int
    maps: list
    prefactor: str = "symmetric"

    def __post_init__(self):
        object.__setattr__(self, "m", check_order(self.m))
        if not self.maps:
            raise ArgumentError("need at least one sampling map")
        for j, smap in enumerate(self.maps):
            res = validate_map(smap)
            if not res:
                raise ArgumentError(f"map for asset {j} violates {res.condition} at interval {res.index}")
        if self.prefactor != "symmetric":
            raise ArgumentError(f"unknown prefactor convention {self.prefactor!r}")

    @property
    def schemes(self):
        return [smap.rule for smap in self.maps]

    def pair_prefactor(self, j, jp):
        return siml_prefactor(self.maps[j].grid.n, self.maps[jp].grid.n)


@dataclass(frozen=True, eq=False)
class EstimateReport:
    V: np.ndarray
    n: list
    m: int
    schemes: list
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "V": self.V.tolist(),
            "n": list(self.n),
            "m": self.m,
            "schemes": list(self.schemes),
            "elapsed-seconds": self.elapsed,
            **self.extra,
        }


def siml_prefactor(n_j, n_jp):
    """2 sqrt(n_j n_j') / sqrt((n_j + 1/2)(n_j' + 1/2))."""
    return 2.0 * math.sqrt(n_j * n_jp) / math.sqrt((n_j + 0.5) * (n_jp + 0.5))


def choose_m(n, c=1.0, alpha=0.4):
    """m = max(1, floor(c n^alpha)).

    A relative nudge of 1e-12 keeps exact powers such as 32^0.4 = 4 from
    flooring to one less.
    """
    if not 0.0 < alpha < 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not c > 0:
        raise ArgumentError(f"c must be positive, got {c!r}")
    val = c * float(n) ** alpha
    return max(1, int(math.floor(val * (1.0 + 1e-12))))


def cosine_projections(representatives, increments, m):
    """A_l for l = 1..m; ``increments`` may be (N,) or a batch (R, N)."""
    inc = np.asarray(increments, dtype=np.float64)
    out = core.cos_projections(cosine_matrix(representatives, m), np.atleast_2d(inc))
    return out[0] if inc.ndim == 1 else out


def _pair_matrix(proj, prefactors, m):
    J = len(proj)
    V = np.empty((J, J))
    for j in range(J):
        for jp in range(j, J):
            V[j, jp] = prefactors[j][jp] * (np.sum(proj[j] * proj[jp]) / m)
            V[jp, j] = V[j, jp]
    return V


def siml_equispaced(obs, m):
    """Orthonormal-basis form on uniform grids: sqrt(n_j n_j')/m sum_l (P dY^j)_l (P dY^j')_l."""
    start = time.perf_counter()
    m = check_order(m)
    for j, g in enumerate(obs.grids):
        if not g.is_uniform:
            raise RefusalError(f"asset {j} is not on a uniform grid; use siml_general")
        if m > g.n:
            raise ArgumentError(f"m = {m} exceeds n = {g.n} for asset {j}")
    ns = [g.n for g in obs.grids]
    proj = [core.cos_projections(basis_matrix(n, m), obs.increments(j)[None, :])[0] for j, n in enumerate(ns)]
    pref = [[math.sqrt(a * b) for b in ns] for a in ns]
    V = _pair_matrix(proj, pref, m)
    return EstimateReport(V, ns, m, ["orthonormal"] * len(ns), time.perf_counter() - start)


def siml_general(obs, cfg):
    """Estimator for arbitrary grids and sampling maps."""
    start = time.perf_counter()
    if len(cfg.maps) != obs.n_assets:
        raise ArgumentError(f"{len(cfg.maps)} maps for {obs.n_assets} assets")
    for j, (smap, g) in enumerate(zip(cfg.maps, obs.grids)):
        if not smap.grid.same_as(g):
            raise ArgumentError(f"map for asset {j} is built on a different grid")
    proj = [
        cosine_projections(smap.representatives, obs.increments(j), cfg.m)
        for j, smap in enumerate(cfg.maps)
    ]
    ns = [g.n for g in obs.grids]
    pref = [[siml_prefactor(a, b) for b in ns] for a in ns]
    V = _pair_matrix(proj, pref, cfg.m)
    return EstimateReport(V, ns, cfg.m, cfg.schemes, time.perf_counter() - start)


def mmf_estimate(obs, m, q=0, j=0, jp=0):
    """Fourier coefficient estimator with left-endpoint exponentials.

    (1/m) sum_{l=1}^m (sum_k e^{2 pi i (l+q) t^j_{k-1}} dY^j_k)
                      (sum_k e^{-2 pi i l t^j'_{k-1}} dY^j'_k)
    """
    m = check_order(m)
    if int(q) != q:
        raise ArgumentError(f"q must be an integer, got {q!r}")
    l = np.arange(1, m + 1)

    def _transform(asset, freqs, sign):
        t = obs.times(asset)[:-1]
        inc = obs.increments(asset)
        phase = 2.0 * np.pi * freqs[:, None] * t[None, :]
        re = core.cos_projections(np.cos(phase), inc[None, :])[0]
        im = core.cos_projections(np.sin(phase), inc[None, :])[0]
        return re + sign * 1j * im

    a = _transform(j, l + q, 1.0)
    b = _transform(jp, l.astype(np.float64), -1.0)
    prod = a * b
    return complex(np.sum(prod.real) / m, np.sum(prod.imag) / m)


def realized_covariance(obs):
    """sum_k dY^j_k dY^j'_k on a common grid."""
    if not obs.synchronous:
        raise RefusalError("realized covariance needs synchronous observations")
    inc = [obs.increments(j) for j in range(obs.n_assets)]
    J = len(inc)
    V = np.empty((J, J))
    for j in range(J):
        for jp in range(j, J):
            V[j, jp] = V[jp, j] = np.sum(inc[j] * inc[jp])
    return V


def _covariance_entry(model, j, jp):
    if model.constant_sigma is not None:
        sig = model.constant_sigma
        return float(sig[j] @ sig[jp])
    return lambda s: model.spot_covariance(s)[..., j, jp]


def bias_center(model, cfg, exact_mean=False):
    """int_0^1 D^{jj'}_m(s, s) Sigma^{jj'}(s) ds for every asset pair.

    With ``exact_mean`` each entry is multiplied by c_{jj'}/2, which gives
    the exact finite-sample expectation of :func:`siml_general` under a
    deterministic spot covariance and zero drift.
    """
    if not model.deterministic:
        raise RefusalError("the centering term needs a deterministic spot covariance")
    J = len(cfg.maps)
    if J != model.n_assets:
        raise ArgumentError(f"{J} maps for a {model.n_assets}-asset model")
    C = np.empty((J, J))
    for j in range(J):
        for jp in range(j, J):
            val = diagonal_integral(cfg.m, cfg.maps[j], cfg.maps[jp], _covariance_entry(model, j, jp))
            if exact_mean:
                val *= 0.5 * cfg.pair_prefactor(j, jp)
            C[j, jp] = C[jp, j] = val
    return C
