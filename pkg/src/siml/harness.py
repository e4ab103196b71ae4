"""Monte Carlo experiments, tick-file ingestion and report files.

Replication r of an experiment at observation count n draws its path, grid
and noise streams from ``SeedSequence(seed, spawn_key=(n, r, stream))``, so
results depend only on (seed, n, r) and never on worker count or scheduling.
Replications run on a thread pool; results are collected in replication
order and all reductions run on the ordered arrays.
"""

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy.special import ndtr

import siml
from siml._backend import NAME as BACKEND_NAME
from siml.errors import ArgumentError, ParseError, RefusalError
from siml.estimator import SimlConfig, bias_center, choose_m, realized_covariance, siml_general
from siml.sampling import SchemeRule, TimeGrid, clean_ticks, make_poisson_grid, make_uniform_grid, sampling_map
from siml.simulate import (
    NoiseSpec,
    ObservationSet,
    OUFactor,
    PathModel,
    add_noise,
    constant_model,
    integrated_covariance_true,
    observe,
    path_integrated_covariance,
    simulate_fine,
    stochastic_vol_model,
)
from siml.stats import ks_test

PATH_STREAM, GRID_STREAM, NOISE_STREAM = 0, 1, 2


# ---------------------------------------------------------------------------
# configuration


_MODEL_KEYS = {"sigma", "drift", "x0", "sigma-slope", "stochastic-vol"}
_SV_KEYS = {"mean-reversion", "vol-of-vol", "start"}


def build_model(spec):
    """PathModel from a kebab-case dict.

    ``sigma`` is a scalar or J x d matrix, ``drift`` a scalar or length-J
    list. ``sigma-slope`` makes sigma(s) = sigma (1 + slope s);
    ``stochastic-vol`` adds an OU log-volatility factor.
    """
    unknown = set(spec) - _MODEL_KEYS
    if unknown:
        raise ArgumentError(f"model: unknown keys {sorted(unknown)}")
    sigma = spec.get("sigma", 0.2)
    drift = spec.get("drift", 0.0)
    x0 = spec.get("x0", 0.0)
    slope = spec.get("sigma-slope")
    sv = spec.get("stochastic-vol")
    if slope is not None and sv is not None:
        raise ArgumentError("model: sigma-slope and stochastic-vol are mutually exclusive")
    if sv is not None:
        bad = set(sv) - _SV_KEYS
        if bad:
            raise ArgumentError(f"model.stochastic-vol: unknown keys {sorted(bad)}")
        factor = OUFactor(sv.get("mean-reversion", 1.0), sv.get("vol-of-vol", 0.5), sv.get("start", 0.0))
        return stochastic_vol_model(sigma, factor, drift, x0)
    model = constant_model(sigma, drift, x0)
    if slope is None:
        return model
    base = model.constant_sigma
    slope = float(slope)
    return PathModel(
        n_assets=model.n_assets,
        n_drivers=model.n_drivers,
        diffusion=lambda t: base[None, :, :] * (1.0 + slope * t)[:, None, None],
        drift=model.drift,
        x0=model.x0,
        name="time-varying",
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by the Monte Carlo experiments.

    The m rule is one of ``{"c": c, "alpha": alpha}`` (m = floor(c n^alpha)),
    ``{"m": m}`` (fixed) or ``{"a": a}`` (m = floor(a n), i.e. rho m = a on
    uniform grids).
    """

    model: dict = field(default_factory=lambda: {"sigma": 0.2})
    scheme: object = "ksss"
    grid: str = "uniform"
    n_list: tuple = (512, 2048, 8192)
    m_rule: dict = field(default_factory=lambda: {"c": 1.0, "alpha": 0.4})
    reps: int = 200
    seed: int = 42
    noise: dict = field(default_factory=lambda: {"sd": 0.0, "distribution": "gaussian"})
    steps_factor: int = 20
    centering: str = "bias-center"
    pair: tuple = (0, 0)
    workers: int = 1
    out: str = "siml-out"

    @classmethod
    def from_dict(cls, data, base=None):
        """Overlay kebab-case ``data`` on ``base``; every problem is reported at once."""
        known = {f.name.replace("_", "-"): f.name for f in fields(cls)}
        errors = [f"unknown key {k!r}" for k in data if k not in known]
        values = asdict(base) if base is not None else {}
        values.update({known[k]: v for k, v in data.items() if k in known})
        if errors:
            raise ArgumentError("invalid config: " + "; ".join(errors))
        for key in ("n_list", "pair"):
            if key in values and isinstance(values[key], list):
                values[key] = tuple(values[key])
        cfg = cls(**values)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path, base=None):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ArgumentError(f"cannot read config {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc
        if not isinstance(data, dict):
            raise ArgumentError("config must be a JSON object")
        return cls.from_dict(data, base)

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name.replace("_", "-")] = list(v) if isinstance(v, tuple) else v
        return out

    def validate(self):
        errors = []
        if not isinstance(self.reps, int) or self.reps < 1:
            errors.append("reps: must be an integer >= 1")
        nl = list(self.n_list)
        if not nl or any(not isinstance(n, int) or n < 1 for n in nl):
            errors.append("n-list: must be a nonempty list of positive integers")
        elif any(b <= a for a, b in zip(nl, nl[1:])):
            errors.append("n-list: must be strictly ascending")
        rule = self.m_rule
        if not isinstance(rule, dict) or set(rule) not in ({"c", "alpha"}, {"m"}, {"a"}):
            errors.append("m-rule: use {c, alpha}, {m} or {a}")
        elif "alpha" in rule and not 0.0 < rule["alpha"] < 1.0:
            errors.append("m-rule.alpha: must lie in (0, 1)")
        elif "c" in rule and not rule["c"] > 0:
            errors.append("m-rule.c: must be positive")
        elif "m" in rule and (not isinstance(rule["m"], int) or rule["m"] < 1):
            errors.append("m-rule.m: must be an integer >= 1")
        elif "a" in rule and not rule["a"] > 0:
            errors.append("m-rule.a: must be positive")
        if self.grid not in ("uniform", "poisson"):
            errors.append("grid: must be 'uniform' or 'poisson'")
        try:
            model = build_model(self.model)
        except (ArgumentError, ValueError, TypeError) as exc:
            errors.append(str(exc))
            model = None
        schemes = self.scheme if isinstance(self.scheme, list) else [self.scheme]
        for s in schemes:
            if s not in {r.value for r in SchemeRule}:
                errors.append(f"scheme: unknown rule {s!r}")
        if model is not None:
            if isinstance(self.scheme, list) and len(self.scheme) != model.n_assets:
                errors.append(f"scheme: need one rule per asset ({model.n_assets})")
            if len(self.pair) != 2 or any(not 0 <= p < model.n_assets for p in self.pair):
                errors.append("pair: two asset indices within the model")
        if self.grid == "poisson" and "ksss" in schemes:
            errors.append("scheme: ksss needs uniform grids")
        noise = self.noise if isinstance(self.noise, dict) else {}
        if set(noise) - {"sd", "distribution"}:
            errors.append(f"noise: unknown keys {sorted(set(noise) - {'sd', 'distribution'})}")
        else:
            try:
                NoiseSpec(noise.get("sd", 0.0), noise.get("distribution", "gaussian"))
            except ArgumentError as exc:
                errors.append(f"noise: {exc}")
        if not isinstance(self.steps_factor, int) or self.steps_factor < 1:
            errors.append("steps-factor: must be an integer >= 1")
        if self.centering not in ("bias-center", "truth"):
            errors.append("centering: must be 'bias-center' or 'truth'")
        if not isinstance(self.workers, int) or self.workers < 1:
            errors.append("workers: must be an integer >= 1")
        if errors:
            raise ArgumentError("invalid config: " + "; ".join(errors))

    # derived objects

    def build_model(self):
        return build_model(self.model)

    def m_for(self, n):
        rule = self.m_rule
        if "m" in rule:
            return int(rule["m"])
        if "a" in rule:
            return max(1, int(math.floor(rule["a"] * n)))
        return choose_m(n, rule["c"], rule["alpha"])

    def schemes(self, n_assets):
        return list(self.scheme) if isinstance(self.scheme, list) else [self.scheme] * n_assets

    @property
    def noise_spec(self):
        return NoiseSpec(self.noise.get("sd", 0.0), self.noise.get("distribution", "gaussian"))


# ---------------------------------------------------------------------------
# replications


def replication_streams(seed, n, r):
    """(path, grid, noise) seed sequences for replication r at observation count n."""
    return tuple(np.random.SeedSequence(seed, spawn_key=(n, r, s)) for s in (PATH_STREAM, GRID_STREAM, NOISE_STREAM))


@dataclass(frozen=True)
class _RepResult:
    V: float
    truth: float
    center: float
    rv: float = math.nan
    m: int = 0


class _Experiment:
    """Per-n state shared by all replications (model, maps on uniform grids)."""

    def __init__(self, cfg, n, need_rv=False):
        self.cfg = cfg
        self.n = n
        self.model = cfg.build_model()
        self.m = cfg.m_for(n)
        self.need_rv = need_rv
        self.schemes = cfg.schemes(self.model.n_assets)
        self.noise = cfg.noise_spec
        self.fixed = None
        self.fixed_truth = None
        if self.model.deterministic:
            self.fixed_truth = integrated_covariance_true(self.model)
        if cfg.grid == "uniform":
            grid = make_uniform_grid(n)
            self.fixed = self._config([grid] * self.model.n_assets)
            self.fixed_center = self._center(self.fixed)

    def _config(self, grids):
        return SimlConfig(self.m, [sampling_map(g, s) for g, s in zip(grids, self.schemes)])

    def _center(self, simlcfg):
        if self.model.deterministic:
            return bias_center(self.model, simlcfg)
        return None

    def run(self, r):
        path_ss, grid_ss, noise_ss = replication_streams(self.cfg.seed, self.n, r)
        if self.fixed is not None:
            simlcfg, center = self.fixed, self.fixed_center
        else:
            grid_seeds = grid_ss.spawn(self.model.n_assets)
            grids = [make_poisson_grid(self.n, s) for s in grid_seeds]
            simlcfg = self._config(grids)
            center = self._center(simlcfg)
        grids = [smap.grid for smap in simlcfg.maps]
        steps = self.cfg.steps_factor * max(g.n for g in grids)
        path = simulate_fine(self.model, steps, path_ss)
        obs = observe(path, grids)
        if self.noise.sd > 0.0:
            obs = add_noise(obs, self.noise, noise_ss)
        j, k = self.cfg.pair
        V = siml_general(obs, simlcfg).V[j, k]
        truth = self.fixed_truth if self.fixed_truth is not None else path_integrated_covariance(path)
        c = center[j, k] if center is not None else truth[j, k]
        rv = realized_covariance(obs)[j, k] if self.need_rv else math.nan
        return _RepResult(float(V), float(truth[j, k]), float(c), float(rv), self.m)


def _run_reps(cfg, n, need_rv=False):
    exp = _Experiment(cfg, n, need_rv)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return exp, list(pool.map(exp.run, range(cfg.reps)))
    return exp, [exp.run(r) for r in range(cfg.reps)]


def _mean_se(x):
    x = np.asarray(x, dtype=np.float64)
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return mean, se


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class McRow:
    n: int
    m: int
    mean: float
    truth: float
    center: float
    bias: float
    se: float
    rmse: float
    m_var: float = math.nan
    theory_var: float = math.nan
    ks_stat: float = math.nan
    ks_p: float = math.nan


@dataclass(frozen=True, eq=False)
class McSummary:
    """Per-n Monte Carlo rows; ``scaled_errors`` holds the standardized errors of a normality run."""

    kind: str
    rows: list
    config: ExperimentConfig = None
    scaled_errors: dict = field(default_factory=dict)
    runtime: float = 0.0

    def row(self, n):
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


@dataclass(frozen=True)
class NoiseRow:
    n: int
    m: int
    truth: float
    siml_mean: float
    siml_bias: float
    siml_se: float
    rv_mean: float
    rv_bias: float
    rv_se: float


@dataclass(frozen=True, eq=False)
class NoiseComparison:
    kind: str
    rows: list
    config: ExperimentConfig = None
    runtime: float = 0.0

    def row(self, n):
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


def run_consistency(cfg):
    """Bias, MC standard error and RMSE of the estimator against the truth, per n."""
    start = time.perf_counter()
    rows = []
    for n in cfg.n_list:
        exp, res = _run_reps(cfg, n)
        V = np.array([r.V for r in res])
        truth = np.array([r.truth for r in res])
        err = V - truth
        bias, se = _mean_se(err)
        rows.append(
            McRow(
                n=n,
                m=exp.m,
                mean=float(np.mean(V)),
                truth=float(np.mean(truth)),
                center=float(np.mean([r.center for r in res])),
                bias=bias,
                se=se,
                rmse=float(math.sqrt(np.mean(err * err))),
            )
        )
    return McSummary("consistency", rows, cfg, runtime=time.perf_counter() - start)


def theory_variance(model, pair=(0, 0)):
    """int_0^1 (Sigma^jj Sigma^j'j' + (Sigma^jj')^2) ds for a deterministic model."""
    if not model.deterministic:
        raise RefusalError("the limit variance is random for this model")
    j, k = pair
    nodes, weights = np.polynomial.legendre.leggauss(20)
    edges = np.linspace(0.0, 1.0, 65)
    half = 0.5 * np.diff(edges)
    s = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * nodes[None, :]
    cov = model.spot_covariance(s.ravel())
    vals = (cov[:, j, j] * cov[:, k, k] + cov[:, j, k] ** 2).reshape(s.shape)
    return float(np.sum(half[:, None] * weights[None, :] * vals))


def run_normality(cfg):
    """Distribution of sqrt(m) (V - center) against its Gaussian limit."""
    start = time.perf_counter()
    model = cfg.build_model()
    if not model.deterministic:
        raise RefusalError(
            "normality runs need a deterministic spot covariance: with random Sigma the "
            "limit is mixed normal and a KS test against N(0, 1) is not valid"
        )
    tv = theory_variance(model, cfg.pair)
    rows, scaled = [], {}
    for n in cfg.n_list:
        exp, res = _run_reps(cfg, n)
        V = np.array([r.V for r in res])
        truth = np.array([r.truth for r in res])
        center = truth if cfg.centering == "truth" else np.array([r.center for r in res])
        e = math.sqrt(exp.m) * (V - center)
        z = e / math.sqrt(tv) if tv > 0 else np.zeros_like(e)
        ks = ks_test(z) if tv > 0 else None
        err = V - truth
        bias, se = _mean_se(err)
        scaled[n] = z
        rows.append(
            McRow(
                n=n,
                m=exp.m,
                mean=float(np.mean(V)),
                truth=float(np.mean(truth)),
                center=float(np.mean(center)),
                bias=bias,
                se=se,
                rmse=float(math.sqrt(np.mean(err * err))),
                m_var=float(np.var(e, ddof=1)) if e.size > 1 else math.nan,
                theory_var=tv,
                ks_stat=ks.statistic if ks else math.nan,
                ks_p=ks.pvalue if ks else math.nan,
            )
        )
    return McSummary("normality", rows, cfg, scaled, time.perf_counter() - start)


def run_noise_comparison(cfg):
    """Realized covariance and SIML on the same noisy synchronous data."""
    start = time.perf_counter()
    if cfg.grid != "uniform":
        raise RefusalError("the noise comparison needs synchronous (uniform) grids")
    rows = []
    for n in cfg.n_list:
        exp, res = _run_reps(cfg, n, need_rv=True)
        truth = np.array([r.truth for r in res])
        sm, sse = _mean_se([r.V for r in res])
        rm, rse = _mean_se([r.rv for r in res])
        bs, _ = _mean_se(np.array([r.V for r in res]) - truth)
        br, _ = _mean_se(np.array([r.rv for r in res]) - truth)
        rows.append(NoiseRow(n, exp.m, float(np.mean(truth)), sm, bs, sse, rm, br, rse))
    return NoiseComparison("noise", rows, cfg, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# checks attached to reports


def _status(ok):
    return "pass" if ok else "fail"


def summary_checks(summary):
    """Pass/fail checks for a summary; empty when there is nothing to judge."""
    rows = summary.rows
    if not rows:
        return []
    if summary.kind == "consistency":
        rmse = [r.rmse for r in rows]
        last = rows[-1]
        return [
            {"name": "rmse-decreasing", "status": _status(all(b < a for a, b in zip(rmse, rmse[1:]))), "values": rmse},
            {
                "name": "bias-within-3se",
                "status": _status(abs(last.bias) < 3 * last.se or last.bias == 0.0),
                "n": last.n,
                "bias": last.bias,
                "se": last.se,
            },
        ]
    if summary.kind == "normality":
        out = []
        for r in rows:
            rel = abs(r.m_var - r.theory_var) / r.theory_var if r.theory_var > 0 else math.nan
            out.append({"name": "variance-within-15pct", "status": _status(rel < 0.15), "n": r.n, "relative-error": rel})
            out.append({"name": "ks-p-above-0.01", "status": _status(r.ks_p > 0.01), "n": r.n, "p-value": r.ks_p})
        return out
    out = []
    for r in rows:
        out.append({"name": "siml-bias-below-rv-bias", "status": _status(abs(r.siml_bias) < abs(r.rv_bias)), "n": r.n})
    return out


# ---------------------------------------------------------------------------
# ingestion


def ingest_csv(path, normalize=False):
    """Read ``time,asset,price`` ticks into an ObservationSet.

    Assets keep their order of first appearance. Within an asset ticks are
    sorted by time and duplicate timestamps collapse to the last value. With
    ``normalize`` each asset's times are mapped affinely so that its first
    tick is 0 and its last is 1.
    """
    ticks = {}
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise ArgumentError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["time", "asset", "price"]:
            raise ParseError("header must be 'time,asset,price'", line=1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line=line)
            try:
                t = float(row[0])
                p = float(row[2])
            except ValueError:
                raise ParseError(f"cannot parse number in {','.join(row)!r}", line=line) from None
            if not (math.isfinite(t) and math.isfinite(p)):
                raise ParseError("time and price must be finite", line=line)
            ticks.setdefault(row[1].strip(), ([], []))
            ticks[row[1].strip()][0].append(t)
            ticks[row[1].strip()][1].append(p)
    if not ticks:
        raise ParseError("no ticks found", line=1)
    grids, values, meta = [], [], {"assets": list(ticks), "rescale": {}, "duplicates-dropped": {}}
    for name, (times, prices) in ticks.items():
        cleaned = clean_ticks(times, prices, rescale=normalize)
        try:
            grid = TimeGrid(cleaned.times)
        except ArgumentError as exc:
            raise ArgumentError(f"asset {name!r}: {exc} (use normalization for raw timestamps)") from exc
        grids.append(grid)
        values.append(cleaned.values)
        meta["rescale"][name] = {"offset": cleaned.offset, "scale": cleaned.scale}
        meta["duplicates-dropped"][name] = cleaned.duplicates_dropped
    return ObservationSet(grids, values, meta)


def write_observations_csv(obs, path, names=None):
    names = names or obs.metadata.get("assets") or [f"asset{j}" for j in range(obs.n_assets)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "asset", "price"])
        for j in range(obs.n_assets):
            for t, v in zip(obs.times(j), obs.values[j]):
                w.writerow([repr(float(t)), names[j], repr(float(v))])


# ---------------------------------------------------------------------------
# reports


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report file: {exc.strerror}", path) from exc


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path, config, results, checks, runtime):
    doc = {"config": config, "results": results, "checks": checks, "runtime-seconds": runtime}
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(_json_safe(doc), fh, indent=2, sort_keys=False, allow_nan=False)
            fh.write("\n")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report file: {exc.strerror}", path) from exc


def environment_info():
    import scipy

    return {"siml": siml.__version__, "numpy": np.__version__, "scipy": scipy.__version__, "backend": BACKEND_NAME}


def emit_report(summary, out_dir, timing=True):
    """Write the CSV tables, the long-format curves and the JSON report.

    Returns the list of files written. With ``timing=False`` the runtime
    is reported as null so that reruns are byte-identical.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    rows = summary.rows
    kind = summary.kind

    def out(name):
        p = os.path.join(out_dir, name)
        written.append(p)
        return p

    curves = []
    if kind in ("consistency", "normality"):
        _write_csv(out("consistency.csv" if kind == "consistency" else "normality.csv"),
                   ["n", "m", "bias", "rmse", "se"] if kind == "consistency"
                   else ["n", "m", "mean", "center", "m-var", "theory-var", "ks-stat", "ks-p"],
                   [(r.n, r.m, r.bias, r.rmse, r.se) if kind == "consistency"
                    else (r.n, r.m, r.mean, r.center, r.m_var, r.theory_var, r.ks_stat, r.ks_p) for r in rows])
        for r in rows:
            for metric in ("bias", "rmse", "se"):
                curves.append((r.n, metric, getattr(r, metric)))
        if kind == "normality":
            ecdf_rows = []
            for n, z in summary.scaled_errors.items():
                zs = np.sort(z)
                for i, v in enumerate(zs, start=1):
                    ecdf_rows.append((n, float(v), i / zs.size, float(ndtr(v))))
            _write_csv(out("ecdf.csv"), ["n", "z", "ecdf", "normal-cdf"], ecdf_rows)
    else:
        _write_csv(out("noise.csv"),
                   ["n", "m", "truth", "siml-mean", "siml-bias", "siml-se", "rv-mean", "rv-bias", "rv-se"],
                   [(r.n, r.m, r.truth, r.siml_mean, r.siml_bias, r.siml_se, r.rv_mean, r.rv_bias, r.rv_se)
                    for r in rows])
        for r in rows:
            curves.append((r.n, "siml-bias", r.siml_bias))
            curves.append((r.n, "rv-bias", r.rv_bias))
    _write_csv(out("curves.csv"), ["n", "metric", "value"], curves)

    config = {
        "experiment": summary.config.to_dict() if summary.config is not None else None,
        "seed": summary.config.seed if summary.config is not None else None,
        "versions": environment_info(),
    }
    # the worker count does not influence results, so it is not echoed
    if config["experiment"] is not None:
        config["experiment"].pop("workers", None)
        config["experiment"].pop("out", None)
    results = {"kind": kind, "rows": [asdict(r) for r in rows]}
    write_json(out("report.json"), config, results, summary_checks(summary), summary.runtime if timing else None)
    return written
