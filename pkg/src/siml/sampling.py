"""Observation grids on [0, 1] and piecewise-constant sampling maps.

A sampling map assigns to every observation interval ``[t_{k-1}, t_k)`` one
representative point. The estimator evaluates its cosine basis at these
points, so the map fully determines the kernel seen by the data. A map is
admissible when

* (A1) each representative lies in the closed interval it stands for, and
* (A2) neighbouring intervals have different representatives.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from siml.errors import ArgumentError

UNIFORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing observation times starting at 0 and ending at 1."""

    times: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=np.float64)
        if t.ndim != 1 or t.size < 2:
            raise ArgumentError("a grid needs at least the two endpoints 0 and 1")
        if not np.all(np.isfinite(t)):
            raise ArgumentError("grid times must be finite")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise ArgumentError(f"grid must start at 0 and end at 1, got [{t[0]}, {t[-1]}]")
        if np.any(np.diff(t) <= 0.0):
            bad = int(np.argmax(np.diff(t) <= 0.0)) + 1
            raise ArgumentError(f"grid times must be strictly increasing (index {bad})")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @property
    def n(self):
        """Number of intervals."""
        return self.times.size - 1

    @property
    def mesh(self):
        return float(np.max(np.diff(self.times)))

    @property
    def widths(self):
        return np.diff(self.times)

    @property
    def is_uniform(self):
        return bool(np.allclose(self.times, np.arange(self.n + 1) / self.n, rtol=0.0, atol=UNIFORM_TOL))

    def same_as(self, other):
        return self.times.shape == other.times.shape and bool(np.array_equal(self.times, other.times))

    def __len__(self):
        return self.times.size

    def __repr__(self):
        return f"TimeGrid(n={self.n}, mesh={self.mesh:.4g})"


class SchemeRule(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    MIDPOINT = "midpoint"
    KSSS = "ksss"


@dataclass(frozen=True, eq=False)
class SamplingMap:
    """One representative point per interval of ``grid``.

    ``rule`` is informational only; the representatives are authoritative,
    so hand-built maps behave exactly like the canonical ones.
    """

    grid: TimeGrid
    representatives: np.ndarray
    rule: str = "custom"

    def __post_init__(self):
        reps = np.array(self.representatives, dtype=np.float64)
        if reps.shape != (self.grid.n,):
            raise ArgumentError(
                f"need one representative per interval ({self.grid.n}), got shape {reps.shape}"
            )
        reps.setflags(write=False)
        object.__setattr__(self, "representatives", reps)

    def cell_index(self, u):
        """0-based index of the interval containing u; u = 1 maps to the last one."""
        u = np.asarray(u, dtype=np.float64)
        if np.any((u < 0.0) | (u > 1.0)):
            raise ArgumentError("sampling maps are defined on [0, 1] only")
        idx = np.searchsorted(self.grid.times, u, side="right") - 1
        return np.clip(idx, 0, self.grid.n - 1)

    def __call__(self, u):
        return self.representatives[self.cell_index(u)]

    def __repr__(self):
        return f"SamplingMap(rule={self.rule!r}, n={self.grid.n})"


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    condition: str = None
    index: int = None
    message: str = ""

    def __bool__(self):
        return self.valid


def make_uniform_grid(n):
    if int(n) != n or n < 1:
        raise ArgumentError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    return TimeGrid(np.arange(n + 1) / n)


def make_poisson_grid(intensity, seed):
    """Homogeneous Poisson arrival times on (0, 1), with 0 and 1 adjoined."""
    if not intensity > 0:
        raise ArgumentError(f"intensity must be positive, got {intensity!r}")
    rng = np.random.default_rng(seed)
    count = rng.poisson(intensity)
    inner = np.unique(rng.uniform(0.0, 1.0, size=count))
    inner = inner[(inner > 0.0) & (inner < 1.0)]
    return TimeGrid(np.concatenate(([0.0], inner, [1.0])))


def sampling_map(grid, rule):
    """Canonical map for ``rule``: left/right endpoint, midpoint, or KSSS.

    KSSS puts the k-th representative of a uniform n-grid at (2k-1)/(2n+1),
    which makes the cosine basis evaluated there orthogonal.
    """
    rule = SchemeRule(rule)
    t = grid.times
    if rule is SchemeRule.LEFT:
        reps = t[:-1]
    elif rule is SchemeRule.RIGHT:
        reps = t[1:]
    elif rule is SchemeRule.MIDPOINT:
        reps = 0.5 * (t[:-1] + t[1:])
    else:
        if not grid.is_uniform:
            raise ArgumentError("the ksss rule is defined on uniform grids only")
        k = np.arange(1, grid.n + 1)
        reps = (2 * k - 1) / (2 * grid.n + 1)
    return SamplingMap(grid, reps, rule.value)


def validate_map(smap):
    """Check (A1) and (A2) interval by interval; report the first failure (1-based)."""
    t = smap.grid.times
    reps = smap.representatives
    for k in range(1, smap.grid.n + 1):
        r = reps[k - 1]
        if not (t[k - 1] <= r <= t[k]):
            return ValidationResult(
                False, "A1", k, f"representative {r} outside [{t[k - 1]}, {t[k]}]"
            )
        if k > 1 and r == reps[k - 2]:
            return ValidationResult(
                False, "A2", k, f"intervals {k - 1} and {k} share representative {r}"
            )
    return ValidationResult(True)


def common_refinement(*grids):
    """Sorted union of all grid times."""
    if not grids:
        raise ArgumentError("need at least one grid")
    times = grids[0].times
    for g in grids[1:]:
        times = np.union1d(times, g.times)
    return TimeGrid(times)


@dataclass(frozen=True)
class CleanedTicks:
    times: np.ndarray
    values: np.ndarray
    duplicates_dropped: int = 0
    offset: float = 0.0
    scale: float = 1.0
    metadata: dict = field(default_factory=dict)


def clean_ticks(times, values, rescale=False):
    """Sort, collapse duplicate timestamps (last value wins), optionally rescale.

    Rescaling is affine and sends the first tick to 0 and the last to 1;
    ``offset`` and ``scale`` record it (normalised = (raw - offset) / scale).
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(times, kind="stable")
    times, values = times[order], values[order]
    # last occurrence of each timestamp wins
    keep = np.ones(times.size, dtype=bool)
    keep[:-1] = times[1:] != times[:-1]
    dropped = int(times.size - keep.sum())
    times, values = times[keep], values[keep]
    offset, scale = 0.0, 1.0
    if rescale:
        if times.size < 2:
            raise ArgumentError("need at least two distinct timestamps to rescale")
        offset, scale = float(times[0]), float(times[-1] - times[0])
        times = (times - offset) / scale
        times[0], times[-1] = 0.0, 1.0
    return CleanedTicks(times, values, dropped, offset, scale)
