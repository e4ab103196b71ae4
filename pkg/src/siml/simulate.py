"""Euler simulation of multivariate Ito processes and their observation.

Paths live on a fine uniform mesh ``i / steps``. Observation grids are
snapped onto that mesh (left snap), so every observed increment is an exact
sum of fine increments; the residue diagnostics rely on this.

Random streams come from NumPy's PCG64 seeded through ``SeedSequence``; a
path seed and a noise seed never share a stream.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.signal import lfilter

from siml.errors import ArgumentError, RefusalError, SimulationError
from siml.sampling import TimeGrid


def make_rng(seed):
    """PCG64 generator for an int seed or a ``SeedSequence``."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class OUFactor:
    """Log-volatility factor dY = -kappa Y dt + nu dB, B independent of W."""

    mean_reversion: float = 1.0
    vol_of_vol: float = 0.5
    start: float = 0.0


@dataclass(frozen=True, eq=False)
class PathModel:
    """Coefficients of dX = b dt + sigma dW for J assets and d drivers.

    With ``state_dependent=False`` the coefficients are functions of time
    only and must be vectorised: ``diffusion(t)`` maps times of shape (K,)
    to something broadcastable to (K, J, d) and ``drift(t)`` to (K, J).
    With ``state_dependent=True`` they are called once per step as
    ``f(t, x)`` with scalar t and state x of shape (J,).

    A ``vol_factor`` multiplies sigma by exp(Y_t) for an independent
    Ornstein-Uhlenbeck Y, which makes the spot covariance random.
    """

    n_assets: int
    n_drivers: int
    diffusion: Callable
    drift: Optional[Callable] = None
    x0: np.ndarray = None
    state_dependent: bool = False
    vol_factor: Optional[OUFactor] = None
    constant_sigma: Optional[np.ndarray] = None
    name: str = "custom"

    def __post_init__(self):
        x0 = np.zeros(self.n_assets) if self.x0 is None else np.asarray(self.x0, dtype=np.float64)
        x0 = np.broadcast_to(x0, (self.n_assets,)).copy()
        object.__setattr__(self, "x0", x0)

    @property
    def deterministic(self):
        """True when the spot covariance is a known function of time."""
        return not self.state_dependent and self.vol_factor is None

    def diffusion_at(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        sig = np.asarray(self.diffusion(t), dtype=np.float64)
        return np.broadcast_to(sig, t.shape + (self.n_assets, self.n_drivers))

    def drift_at(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.drift is None:
            return np.zeros(t.shape + (self.n_assets,))
        return np.broadcast_to(np.asarray(self.drift(t), dtype=np.float64), t.shape + (self.n_assets,))

    def spot_covariance(self, t):
        """Sigma(t) = sigma(t) sigma(t)^T, shape t.shape + (J, J)."""
        if not self.deterministic:
            raise RefusalError("spot covariance is random for this model")
        t = np.asarray(t, dtype=np.float64)
        sig = self.diffusion_at(t.ravel())
        return np.einsum("kjr,kir->kji", sig, sig).reshape(t.shape + (self.n_assets, self.n_assets))


def constant_model(sigma, drift=0.0, x0=0.0, name=None):
    """Constant coefficients; scalar sigma means one asset and one driver."""
    sig = np.atleast_2d(np.asarray(sigma, dtype=np.float64))
    J, d = sig.shape
    b = np.broadcast_to(np.asarray(drift, dtype=np.float64), (J,)).copy()
    return PathModel(
        n_assets=J,
        n_drivers=d,
        diffusion=lambda t: sig,
        drift=lambda t: b,
        x0=x0,
        constant_sigma=sig,
        name=name or "constant",
    )


def stochastic_vol_model(sigma, factor=None, drift=0.0, x0=0.0):
    """Constant base sigma scaled by exp(Y) for an independent OU factor Y."""
    base = constant_model(sigma, drift, x0)
    return replace(base, vol_factor=factor or OUFactor(), constant_sigma=None, name="stochastic-vol")


@dataclass(frozen=True, eq=False)
class FinePath:
    """One Euler realisation; ``sigma`` and ``drift`` hold the values used per step."""

    times: np.ndarray
    values: np.ndarray
    dW: np.ndarray
    sigma: np.ndarray
    drift: np.ndarray
    seed: object = None

    @property
    def steps(self):
        return self.dW.shape[0]

    @property
    def increments(self):
        return np.diff(self.values, axis=0)


def _first_bad_step(arr):
    bad = ~np.isfinite(arr.reshape(arr.shape[0], -1)).all(axis=1)
    return int(np.argmax(bad)) if bad.any() else None


def simulate_fine(model, steps, seed):
    if int(steps) != steps or steps < 1:
        raise ArgumentError(f"steps must be a positive integer, got {steps!r}")
    steps = int(steps)
    rng = make_rng(seed)
    h = 1.0 / steps
    times = np.arange(steps + 1) / steps
    J, d = model.n_assets, model.n_drivers
    dW = rng.standard_normal((steps, d)) * np.sqrt(h)

    if model.state_dependent:
        return _simulate_state_dependent(model, times, dW, seed)

    sigma = model.diffusion_at(times[:-1])
    if model.vol_factor is not None:
        f = model.vol_factor
        dB = rng.standard_normal(steps) * np.sqrt(h)
        # Y_{i+1} = (1 - kappa h) Y_i + nu dB_i
        a = 1.0 - f.mean_reversion * h
        y, _ = lfilter([f.vol_of_vol], [1.0, -a], dB, zi=[a * f.start])
        y = np.concatenate(([f.start], y[:-1]))
        sigma = sigma * np.exp(y)[:, None, None]
    drift = model.drift_at(times[:-1])
    for name, arr in (("diffusion", sigma), ("drift", drift)):
        bad = _first_bad_step(arr)
        if bad is not None:
            raise SimulationError(f"non-finite {name} at step {bad}", step=bad)
    if model.constant_sigma is not None:
        noise = dW @ model.constant_sigma.T
    else:
        noise = np.einsum("kjr,kr->kj", sigma, dW)
    dX = drift * h + noise
    values = np.empty((steps + 1, J))
    values[0] = model.x0
    np.cumsum(dX, axis=0, out=values[1:])
    values[1:] += model.x0
    return FinePath(times, values, dW, sigma, drift, seed)


def _simulate_state_dependent(model, times, dW, seed):
    steps = dW.shape[0]
    h = 1.0 / steps
    J, d = model.n_assets, model.n_drivers
    values = np.empty((steps + 1, J))
    sigma = np.empty((steps, J, d))
    drift = np.empty((steps, J))
    values[0] = model.x0
    for i in range(steps):
        t, x = times[i], values[i]
        sigma[i] = model.diffusion(t, x)
        drift[i] = 0.0 if model.drift is None else model.drift(t, x)
        if not (np.all(np.isfinite(sigma[i])) and np.all(np.isfinite(drift[i]))):
            raise SimulationError(f"non-finite coefficient at step {i}", step=i)
        values[i + 1] = x + drift[i] * h + sigma[i] @ dW[i]
    return FinePath(times, values, dW, sigma, drift, seed)


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """Per-asset observation grids and observed values.

    ``fine_index`` (set by :func:`observe`) gives, for every grid time, the
    fine-mesh index whose value was recorded.
    """

    grids: list
    values: list
    metadata: dict = field(default_factory=dict)
    fine_index: Optional[list] = None

    def __post_init__(self):
        if len(self.grids) != len(self.values):
            raise ArgumentError("need one value array per grid")
        vals = []
        for j, (g, v) in enumerate(zip(self.grids, self.values)):
            v = np.asarray(v, dtype=np.float64)
            if v.shape != g.times.shape:
                raise ArgumentError(f"asset {j}: {v.size} values for {g.times.size} times")
            vals.append(v)
        object.__setattr__(self, "values", vals)

    @property
    def n_assets(self):
        return len(self.grids)

    def times(self, j):
        return self.grids[j].times

    def increments(self, j):
        return np.diff(self.values[j])

    @property
    def synchronous(self):
        return all(g.same_as(self.grids[0]) for g in self.grids[1:])


def observe(path, grids):
    """Record each asset's value at its grid times (nearest fine time at or before)."""
    if len(grids) != path.values.shape[1]:
        raise ArgumentError(f"need {path.values.shape[1]} grids, got {len(grids)}")
    values, indices = [], []
    max_snap = 0.0
    collapsed = 0
    for j, grid in enumerate(grids):
        if grid.n > path.steps:
            raise RefusalError(
                f"asset {j}: grid has {grid.n} intervals but the fine mesh only {path.steps}; "
                f"simulate with at least {20 * grid.n} steps"
            )
        idx = np.searchsorted(path.times, grid.times, side="right") - 1
        max_snap = max(max_snap, float(np.max(grid.times - path.times[idx])))
        collapsed += int(np.sum(np.diff(idx) == 0))
        values.append(path.values[idx, j])
        indices.append(idx)
    meta = {"fine-steps": path.steps, "max-snap": max_snap, "collapsed-cells": collapsed}
    return ObservationSet(list(grids), values, meta, indices)


@dataclass(frozen=True)
class NoiseSpec:
    """i.i.d. zero-mean observation noise; ``sd`` is in price units."""

    sd: float
    distribution: str = "gaussian"

    def __post_init__(self):
        if not self.sd >= 0:
            raise ArgumentError(f"noise standard deviation must be >= 0, got {self.sd!r}")
        if self.distribution not in ("gaussian", "uniform"):
            raise ArgumentError(f"unknown noise distribution {self.distribution!r}")


def add_noise(obs, spec, seed):
    rng = make_rng(seed)
    noisy = []
    for v in obs.values:
        if spec.sd == 0.0:
            noisy.append(v.copy())
        elif spec.distribution == "gaussian":
            noisy.append(v + spec.sd * rng.standard_normal(v.size))
        else:
            half_width = spec.sd * np.sqrt(3.0)
            noisy.append(v + rng.uniform(-half_width, half_width, v.size))
    meta = dict(obs.metadata, noise={"sd": spec.sd, "distribution": spec.distribution})
    return ObservationSet(list(obs.grids), noisy, meta, obs.fine_index)


_QUAD_PANELS = 64
_QUAD_NODES, _QUAD_WEIGHTS = np.polynomial.legendre.leggauss(10)


def integrated_covariance_true(model):
    """int_0^1 sigma sigma^T ds: exact for constant sigma, composite Gauss-Legendre otherwise."""
    if not model.deterministic:
        raise RefusalError(
            "integrated covariance is random for this model; use path_integrated_covariance"
        )
    if model.constant_sigma is not None:
        sig = model.constant_sigma
        return sig @ sig.T
    edges = np.linspace(0.0, 1.0, _QUAD_PANELS + 1)
    half = 0.5 * np.diff(edges)
    nodes = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * _QUAD_NODES[None, :]
    cov = model.spot_covariance(nodes.ravel()).reshape(nodes.shape + (model.n_assets,) * 2)
    return np.einsum("p,q,pqji->ji", half, _QUAD_WEIGHTS, cov)


def path_integrated_covariance(path, model=None):
    """(1/steps) sum_i sigma_i sigma_i^T along the recorded path."""
    sig = path.sigma
    return np.einsum("kjr,kir->ji", sig, sig) / path.steps
