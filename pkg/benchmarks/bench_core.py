"""Time the compiled core against the NumPy fallback on the hot kernels.

Usage: python3 benchmarks/bench_core.py [--repeat 5] [--scale 1.0]
"""

import argparse
import timeit

import numpy as np

from siml._backend import BACKENDS
from siml.kernel import cosine_matrix


def cases(scale):
    rng = np.random.default_rng(0)
    n_pts = int(200_000 * scale)
    x = rng.uniform(-2, 2, n_pts)
    u, s = rng.uniform(-2, 2, (2, int(20_000 * scale)))
    m_small = rng.integers(1, 65, u.size).astype(float)
    n_obs = int(8192 * scale)
    reps = (np.arange(1, n_obs + 1) - 0.5) / n_obs
    cos = cosine_matrix(reps, 36)
    inc = rng.normal(size=(8, n_obs))
    n_cells = int(1500 * scale)
    a = (np.arange(n_cells) + 0.5) / n_cells
    w = np.full(n_cells, 1.0 / n_cells)
    return {
        f"dirichlet_half ({n_pts} pts, m=37)": lambda c: c.dirichlet_half(x, 37.0),
        f"kernel_direct_sum ({u.size} pts, m<=64)": lambda c: c.kernel_direct_sum(u, s, m_small),
        f"cos_projections (36 x {n_obs}, 8 rows)": lambda c: c.cos_projections(cos, inc),
        f"pair_product_sum ({n_cells}^2 cells, triangle)": lambda c: c.pair_product_sum(
            a, a, a, a, w, w, 0.5 * w * w, 20, True
        ),
        f"lp_row_integrals ({n_cells}^2, p=4)": lambda c: c.lp_row_integrals(a, a, w, 20, 4.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args(argv)
    names = list(BACKENDS)
    print(f"{'case':48}" + "".join(f"{n:>14}" for n in names) + ("   speedup" if len(names) == 2 else ""))
    for label, fn in cases(args.scale).items():
        times = []
        results = []
        for name in names:
            core = BACKENDS[name]
            results.append(fn(core))
            times.append(min(timeit.repeat(lambda: fn(core), number=1, repeat=args.repeat)))
        line = f"{label:48}" + "".join(f"{t * 1e3:12.2f}ms" for t in times)
        if len(times) == 2:
            diff = np.max(np.abs(np.asarray(results[0]) - np.asarray(results[1])))
            line += f"   {times[0] / times[1]:6.1f}x  (max diff {diff:.1e})"
        print(line)


if __name__ == "__main__":
    main()
