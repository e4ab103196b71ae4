"""End-to-end acceptance criteria, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line (visible in ``pytest -v`` output)
before asserting, so the summary is readable even when a criterion fails.
"""

import math
import time

import numpy as np
import pytest

from siml.asymptotics import (
    counterexample_integral,
    gamma_estimate,
    ideal_map,
    lp_sup_integral,
    pointwise_bound_check,
    residue_breakdown,
    sampled_kernel_matrix,
    squared_kernel_integral,
)
from siml.estimator import SimlConfig, choose_m, siml_equispaced, siml_general
from siml.harness import ExperimentConfig, build_model, emit_report, run_consistency, run_noise_comparison, run_normality
from siml.kernel import cos_product_integral, diagonal_integral, kernel_closed_form, kernel_direct_sum, l2_profile
from siml.sampling import make_uniform_grid, sampling_map
from siml.simulate import ObservationSet, constant_model, simulate_fine


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def ksss(n):
    return sampling_map(make_uniform_grid(n), "ksss")


def test_01_kernel_identity(capsys):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    u, s = rng.uniform(-2, 2, (2, 10_000))
    m = rng.integers(1, 513, 10_000)
    err = float(np.max(np.abs(kernel_direct_sum(u, s, m) - kernel_closed_form(u, s, m))))
    elapsed = time.perf_counter() - start
    report(capsys, 1, err < 1e-10 and elapsed < 5.0, f"kernel identity max error {err:.2e} in {elapsed:.2f} s")


def test_02_orthogonality(capsys):
    worst = max(
        abs(cos_product_integral(l, lp) - (0.5 if l == lp else 0.0)) for l in range(1, 65) for lp in range(1, 65)
    )
    report(capsys, 2, worst < 1e-12, f"cosine orthogonality worst error {worst:.2e}")


def test_03_counterexample(capsys):
    worst = max(abs(counterexample_integral(n)) for n in range(2, 65))
    report(capsys, 3, worst < 1e-12, f"left/right diagonal at m=2n worst |value| {worst:.2e}")


def test_04_left_endpoint_diagonal(capsys):
    worst = 0.0
    for n in range(4, 257):
        left = sampling_map(make_uniform_grid(n), "left")
        worst = max(worst, abs(diagonal_integral(2 * n, left, left) - (1 + 1 / n)))
    report(capsys, 4, worst < 1e-12, f"left diagonal minus (1 + 1/n) worst {worst:.2e}")


def test_05_ksss_kronecker(capsys):
    kron = max(
        float(np.max(np.abs(sampled_kernel_matrix(2 * n + 1, ksss(n), ksss(n)) - np.eye(n)))) for n in range(1, 65)
    )
    tri = max(
        abs(squared_kernel_integral(2 * n + 1, ((ksss(n), ksss(n)), (ksss(n), ksss(n)))) - 1 / (2 * n))
        for n in range(1, 65)
    )
    report(capsys, 5, kron < 1e-10 and tri < 1e-12, f"sampled kernel vs identity {kron:.2e}, triangle vs 1/(2n) {tri:.2e}")


def test_06_equispaced_equivalence(capsys):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        J = int(rng.integers(1, 4))
        grids = [make_uniform_grid(int(rng.integers(2, 2049))) for _ in range(J)]
        m = int(rng.integers(1, min(g.n for g in grids) + 1))
        obs = ObservationSet(grids, [np.concatenate([[0.0], np.cumsum(rng.normal(0, 0.01, g.n))]) for g in grids])
        a = siml_equispaced(obs, m).V
        b = siml_general(obs, SimlConfig(m, [sampling_map(g, "ksss") for g in grids])).V
        worst = max(worst, float(np.max(np.abs(a - b) / np.max(np.abs(a)))))
    report(capsys, 6, worst < 1e-10, f"orthonormal vs general form worst relative difference {worst:.2e}")


def test_07_l2_boundedness(capsys):
    ideal = max(lp_sup_integral(m, 2, (ideal_map(m), ideal_map(m))) for m in range(1, 513))
    # continuum identity map: the profile 1 + D_m(2s) itself, maximal at s = 0
    s = np.linspace(0.0, 1.0, 4001)
    continuum = max(float(np.max(l2_profile(s, m))) for m in range(1, 513))
    ladder = [lp_sup_integral(m, 2, (ksss(m), ksss(m))) for m in (16, 32, 64, 128, 256)]
    growth = max(ladder) / ladder[0]
    ok = ideal <= 2.0 + 1e-9 and continuum <= 2.0 + 1e-9 and growth <= 2.0
    report(capsys, 7, ok, f"ideal sup {ideal:.6f}, continuum profile sup {continuum:.6f} (<= 2), KSSS ladder {np.round(ladder, 4).tolist()} growth {growth:.3f}")


def test_08_pointwise_bound(capsys):
    res = pointwise_bound_check(range(1, 513), 100_000)
    report(capsys, 8, res.violations == 0, f"{res.points} points, {res.violations} violations, worst ratio {res.worst_ratio:.12f}")


@pytest.fixture(scope="module")
def consistency_cfg():
    return ExperimentConfig.from_dict(
        {"model": {"sigma": 0.2}, "scheme": "ksss", "n-list": [512, 2048, 8192], "m-rule": {"c": 1.0, "alpha": 0.4},
         "reps": 200, "seed": 42, "workers": 1}
    )


@pytest.fixture(scope="module")
def consistency_run(consistency_cfg):
    start = time.perf_counter()
    summary = run_consistency(consistency_cfg)
    return summary, time.perf_counter() - start


def test_09_consistency(capsys, consistency_run):
    summary, elapsed = consistency_run
    rmse = [r.rmse for r in summary.rows]
    last = summary.rows[-1]
    ok = all(b < a for a, b in zip(rmse, rmse[1:])) and abs(last.bias) < 3 * last.se and elapsed < 120
    report(
        capsys, 9, ok,
        f"RMSE {[f'{v:.5f}' for v in rmse]}, bias at n=8192 {last.bias:.2e} vs 3 SE {3 * last.se:.2e}, {elapsed:.1f} s",
    )


def test_10_normality(capsys):
    cfg = ExperimentConfig.from_dict(
        {"model": {"sigma": 0.2}, "n-list": [8192], "m-rule": {"m": 27}, "reps": 1000, "seed": 42}
    )
    start = time.perf_counter()
    row = run_normality(cfg).rows[0]
    elapsed = time.perf_counter() - start
    rel = abs(row.m_var - 0.0032) / 0.0032
    ok = rel < 0.15 and row.ks_p > 0.01 and elapsed < 600
    report(capsys, 10, ok, f"m Var {row.m_var:.6f} vs 0.0032 ({100 * rel:.1f}%), KS p {row.ks_p:.3f}, {elapsed:.1f} s")


def test_11_noise(capsys):
    cfg = ExperimentConfig.from_dict(
        {"model": {"sigma": 0.2}, "n-list": [8192], "m-rule": {"m": 64}, "reps": 200, "seed": 42,
         "noise": {"sd": 0.001, "distribution": "gaussian"}}
    )
    row = run_noise_comparison(cfg).rows[0]
    ok = abs(row.siml_bias) < 0.008 and row.rv_bias > 0.012
    report(capsys, 11, ok, f"SIML bias {row.siml_bias:.2e}, RV bias {row.rv_bias:.5f} (closed form 0.016384)")


def test_12_gamma_regimes(capsys):
    n = 8192
    small_m = gamma_estimate(choose_m(n), [ideal_map(n)]).gbar
    worst = max(abs(gamma_estimate(2 * k + 1, [ksss(k)]).gbar - (2 * k + 1) / (2 * k)) for k in (2, 8, 32, 128))
    ok = abs(small_m - 0.5) < 0.05 and worst < 1e-12
    report(capsys, 12, ok, f"ideal gamma {small_m:.4f} (target 0.5), KSSS a=2 deviation from (2n+1)/(2n) {worst:.1e}")


def test_13_ito_reconstruction(capsys):
    n, m = 512, 16
    cfg = SimlConfig(m, [ksss(n)])
    model = constant_model(0.2, drift=0.5)
    rb = residue_breakdown(simulate_fine(model, 20 * n, 13), model, cfg)
    # refinement is judged with a time-varying volatility, where the fine-grid Riemann error is not zero
    tv = build_model({"sigma": 0.2, "sigma-slope": 1.0, "drift": 0.5})
    errs = [residue_breakdown(simulate_fine(tv, f * n, 13), tv, cfg).error for f in (20, 40, 80)]
    ok = rb.relative_error < 5e-3 and errs[1] < errs[0] and errs[2] < errs[1]
    report(
        capsys, 13, ok,
        f"relative reconstruction error {rb.relative_error:.2e}; under refinement {[f'{e:.2e}' for e in errs]}",
    )


def test_14_determinism(capsys, tmp_path, consistency_cfg, consistency_run):
    summary, _ = consistency_run
    emit_report(summary, tmp_path / "cons-1", timing=False)
    emit_report(run_consistency(ExperimentConfig.from_dict({"workers": 4}, consistency_cfg)), tmp_path / "cons-4",
                timing=False)
    pairs = [("cons-1", "cons-4", ("consistency.csv", "curves.csv", "report.json"))]
    for kind, runner, names in (
        ("norm", run_normality, ("normality.csv", "ecdf.csv", "curves.csv", "report.json")),
        ("noise", run_noise_comparison, ("noise.csv", "curves.csv", "report.json")),
    ):
        base = {"n-list": [1024, 2048], "reps": 60, "m-rule": {"m": 16}, "noise": {"sd": 0.001, "distribution": "gaussian"}}
        for w in (1, 3):
            emit_report(runner(ExperimentConfig.from_dict(dict(base, workers=w))), tmp_path / f"{kind}-{w}", timing=False)
        pairs.append((f"{kind}-1", f"{kind}-3", names))
    mismatched = [
        f"{a}/{name}" for a, b, names in pairs for name in names
        if (tmp_path / a / name).read_bytes() != (tmp_path / b / name).read_bytes()
    ]
    report(capsys, 14, not mismatched, f"{sum(len(p[2]) for p in pairs)} report files compared across worker counts, "
           f"mismatches: {mismatched or 'none'}")
