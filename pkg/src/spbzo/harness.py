"""Experiment orchestration: multi-seed runs, persistence, and verification.

An :class:`ExperimentConfig` fully determines a run: catalog member,
algorithm, start point, smoothing radius (explicit or derived from a
selection rule), stepsize scale, horizon, seed fan-out, feasible set, and
the diagnostic metric to aggregate.  :func:`run_experiment` executes every
seed from an independent substream of the master seed, persists one JSONL
trajectory file per seed plus ``config.json``/``summary.json``/``aggregate.csv``,
and compares the aggregate metric against the matching guaranteed bound.

Aggregation is idempotent: :func:`aggregate_run` recomputes every summary
number from the persisted files alone, and :func:`run_experiment` itself
builds its record through that same path, so re-aggregating a run directory
reproduces ``summary.json`` bit for bit.  All floats are serialized with
shortest round-trip ``repr``, which parses back to the identical double.

:func:`verify_suite` bundles the numerical certificates of the theory —
smoothing error, descent inequality, moment bounds, the fractional-power
reduction, Gaussian tail radii, negative-branch Lambert evaluation, and the
reach-set inclusion — into machine-readable pass/fail reports.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from types import SimpleNamespace
from typing import Optional

import numpy as np

from .catalog import evaluate, function_ids, get_function, validate_certificate
from .constants import (
    RateInputs,
    convex_rate_rhs,
    fractional_power_bound,
    goldstein_schedule,
    goldstein_sigma_rule,
    tail_radius,
    tail_radius_check,
    unconstrained_rate_rhs,
)
from .lambertw import w_minus1
from .optimizers import (
    FeasibleSet,
    Schedule,
    best_index,
    relative_gap_series,
    run_algorithm1,
    run_algorithm2,
    wtilde_sq_series,
)
from .seeding import derive_seed, make_rng
from .smoothing import (
    check_approx_error,
    check_descent_lemma,
    check_moment_bound,
)
from .stationarity import (
    check_goldstein_inclusion,
    goldstein_distance,
    goldstein_interval_1d,
    gradient_consistency_probe,
)
from .util import canonical_json, ceil_half, jsonable, short_hash

__all__ = [
    "OUTPUT_DIR_ENV",
    "METRICS",
    "SUITE_NAMES",
    "ExperimentConfig",
    "RunRecord",
    "resolve_sigma",
    "run_experiment",
    "aggregate_run",
    "verify_suite",
]

#: Environment variable naming the default output directory for runs.
OUTPUT_DIR_ENV = "SPBZO_OUTPUT_DIR"

METRICS = ("relative_gap", "wtilde_sq", "goldstein_dist")

#: Catalog members with oracle-grade smoothed values/gradients (closed form
#: or low-dimensional quadrature), used by the inequality suites.
ORACLE_MEMBER_IDS = ("abs1d", "pw1d", "quad", "quart")


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete, hashable description of a multi-seed experiment.

    Exactly one of ``sigma`` (explicit radius) and ``sigma_rule`` must be
    given.  ``sigma_rule`` is either ``{"kind": "inclusion", "epsilon": e,
    "delta": d}`` (radius from the reach-set inclusion rule) or ``{"kind":
    "schedule", "delta": d}`` (radius from the horizon-indexed stationarity
    schedule).  ``gamma = None`` is allowed only with the schedule rule and
    means "tie the stepsize scale to the resolved radius".
    """

    fn_id: str
    algorithm: int
    x0: tuple
    horizon: int
    gamma: Optional[float] = None
    sigma: Optional[float] = None
    sigma_rule: Optional[dict] = None
    n_seeds: int = 100
    master_seed: int = 0
    feasible: Optional[dict] = None
    metric: str = "relative_gap"
    metric_params: dict = field(default_factory=dict)

    def __post_init__(self):
        get_function(self.fn_id)
        if self.algorithm not in (1, 2):
            raise ValueError(f"algorithm must be 1 or 2, got {self.algorithm}")
        object.__setattr__(self, "x0", tuple(float(t) for t in np.atleast_1d(self.x0)))
        if int(self.horizon) != self.horizon or self.horizon < 0:
            raise ValueError(f"horizon must be a nonnegative integer, got {self.horizon}")
        object.__setattr__(self, "horizon", int(self.horizon))
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if (self.sigma is None) == (self.sigma_rule is None):
            raise ValueError("exactly one of sigma and sigma_rule must be given")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.sigma_rule is not None:
            kind = self.sigma_rule.get("kind")
            required = {"inclusion": ("epsilon", "delta"), "schedule": ("delta",)}
            if kind not in required:
                raise ValueError(f"unknown sigma_rule kind {kind!r}")
            missing = [k for k in required[kind] if k not in self.sigma_rule]
            if missing:
                raise ValueError(f"sigma_rule {kind!r} is missing {missing}")
        if self.gamma is None:
            rule_kind = None if self.sigma_rule is None else self.sigma_rule.get("kind")
            if rule_kind != "schedule":
                raise ValueError("gamma may be omitted only with the schedule sigma rule")
        elif not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.metric == "goldstein_dist" and self._metric_delta() is None:
            raise ValueError("goldstein_dist metric needs delta in metric_params or sigma_rule")
        if self.feasible is not None:
            FeasibleSet.from_dict(self.feasible)
            if self.algorithm == 2:
                raise ValueError("algorithm 2 is unconstrained; feasible must be None")

    def _metric_delta(self):
        if "delta" in self.metric_params:
            return float(self.metric_params["delta"])
        if self.sigma_rule is not None and "delta" in self.sigma_rule:
            return float(self.sigma_rule["delta"])
        return None

    def to_dict(self):
        """Plain-dict form; ``from_dict`` inverts it."""
        return {
            "fn_id": self.fn_id,
            "algorithm": self.algorithm,
            "x0": list(self.x0),
            "horizon": self.horizon,
            "gamma": self.gamma,
            "sigma": self.sigma,
            "sigma_rule": self.sigma_rule,
            "n_seeds": self.n_seeds,
            "master_seed": self.master_seed,
            "feasible": self.feasible,
            "metric": self.metric,
            "metric_params": dict(self.metric_params),
        }

    @classmethod
    def from_dict(cls, spec):
        return cls(
            fn_id=spec["fn_id"],
            algorithm=spec["algorithm"],
            x0=tuple(spec["x0"]),
            horizon=spec["horizon"],
            gamma=spec.get("gamma"),
            sigma=spec.get("sigma"),
            sigma_rule=spec.get("sigma_rule"),
            n_seeds=spec.get("n_seeds", 100),
            master_seed=spec.get("master_seed", 0),
            feasible=spec.get("feasible"),
            metric=spec.get("metric", "relative_gap"),
            metric_params=spec.get("metric_params", {}),
        )

    @property
    def config_hash(self):
        """Hash of every semantic field (changes iff the experiment changes)."""
        return short_hash(canonical_json(self.to_dict()))


@dataclass(frozen=True)
class RunRecord:
    """Aggregated outcome of one experiment."""

    config_hash: str
    run_dir: str
    sigma: float
    gamma: float
    metric: str
    metric_exactness: str
    n_seeds: int
    mean_min: float
    stderr_min: float
    theorem_rhs: Optional[float]
    bound_ok: Optional[bool]
    warnings: int
    sigma_info: dict
    per_seed: tuple

    def to_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["per_seed"] = list(self.per_seed)
        return d


def resolve_sigma(config, fn=None):
    """Resolve the smoothing radius of a config to a number.

    Returns
    -------
    (float, dict)
        The radius and a diagnostics dict (rule kind, rule constants, and the
        guaranteed bound when the rule provides one).  A schedule rule whose
        horizon falls below the validity threshold raises ``ValueError`` —
        such runs must state an explicit ``sigma``.
    """
    fn = get_function(config.fn_id) if fn is None else fn
    if config.sigma is not None:
        return float(config.sigma), {"kind": "explicit", "sigma": float(config.sigma)}
    rule = config.sigma_rule
    cert, d = fn.certificate, fn.dim
    if rule["kind"] == "inclusion":
        sr = goldstein_sigma_rule(cert, d, float(rule["epsilon"]), float(rule["delta"]))
        info = {
            "kind": "inclusion",
            "epsilon": sr.epsilon,
            "delta": sr.delta,
            "sigma_max": sr.sigma_max,
            "tail_radius": sr.tail_radius,
            "window_ok": sr.window_ok,
        }
        return sr.sigma_max, info
    x0 = np.asarray(config.x0, dtype=float)
    f_gap = None
    if fn.inf_value is not None:
        f_gap = evaluate(fn, x0) - fn.inf_value
    sched = goldstein_schedule(
        cert,
        d,
        float(rule["delta"]),
        config.horizon,
        x0=x0,
        f_gap=f_gap,
        growth_mu=fn.growth_mu,
        sup_solution_norm=fn.sup_minimizer_norm,
    )
    if not sched.t_ok:
        raise ValueError(
            f"horizon {config.horizon} is below the schedule threshold "
            f"{sched.t_min:.6g}; rerun with a longer horizon or an explicit sigma"
        )
    info = {
        "kind": "schedule",
        "delta": sched.delta,
        "sigma_coeff": sched.sigma_coeff,
        "sigma": sched.sigma_sched,
        "t_min": sched.t_min,
        "eps_sched": sched.eps_sched,
        "budget_const": sched.budget_const,
        "second_moment_bound": sched.second_moment_bound,
        "rate_rhs": sched.rate_rhs,
    }
    return sched.sigma_sched, info


def _effective_gamma(config, sigma):
    return float(config.gamma) if config.gamma is not None else float(sigma)


def _metric_exactness(config, fn):
    if config.metric != "goldstein_dist":
        return "exact"
    return "exact" if fn.dim == 1 and fn.pieces_1d is not None else "upper_bound"


def _goldstein_dist_at(fn, x, delta, params):
    if fn.dim == 1 and fn.pieces_1d is not None:
        return goldstein_interval_1d(fn, x, delta).distance(0.0)
    budget = int(params.get("budget", 64))
    seed = int(params.get("sample_seed", 0))
    return goldstein_distance(fn, x, delta, budget=budget, seed=seed)["value"]


def _metric_series(config, fn, sigma, xs, fvals):
    """Per-iterate metric for k = 0..T from persisted trajectory arrays.

    ``xs`` has one more row than ``fvals`` (the final iterate has no
    recorded value); the series is a pure function of the persisted data
    plus the config, which is what makes aggregation idempotent.
    """
    shim = SimpleNamespace(xs=xs, fvals=fvals)
    if config.metric == "relative_gap":
        return relative_gap_series(shim, fn)
    if config.metric == "wtilde_sq":
        return wtilde_sq_series(shim, fn, sigma)
    delta = config._metric_delta()
    out = np.empty(fvals.shape[0])
    for k in range(out.shape[0]):
        out[k] = _goldstein_dist_at(fn, xs[k], delta, config.metric_params)
    return out


def _theorem_rhs(config, fn, sigma, sigma_info):
    """Guaranteed bound matching (metric, algorithm), or None if no pairing."""
    cert, d = fn.certificate, fn.dim
    gamma = _effective_gamma(config, sigma)
    x0 = np.asarray(config.x0, dtype=float)
    if config.metric == "relative_gap" and config.algorithm == 1 and fn.minimizer is not None:
        inputs = RateInputs(gamma=gamma, horizon=config.horizon, sigma=sigma, x0=x0, xstar=fn.minimizer)
        return convex_rate_rhs(cert, inputs, d)
    if config.metric == "wtilde_sq" and config.algorithm == 2 and fn.inf_value is not None:
        inputs = RateInputs(
            gamma=gamma,
            horizon=config.horizon,
            sigma=sigma,
            x0=x0,
            inf_value=fn.inf_value,
            f_x0=evaluate(fn, x0),
        )
        return unconstrained_rate_rhs(cert, inputs, d)
    if (
        config.metric == "goldstein_dist"
        and config.algorithm == 2
        and cert.m == 0
        and sigma_info.get("kind") == "schedule"
    ):
        return sigma_info.get("rate_rhs")
    return None


def _dump_row(row):
    return json.dumps(jsonable(row), sort_keys=True, separators=(",", ":"))


def _write_seed_file(path, traj):
    lines = []
    for k in range(traj.fvals.shape[0]):
        lines.append(
            _dump_row(
                {
                    "k": k,
                    "x": traj.xs[k].tolist(),
                    "f": float(traj.fvals[k]),
                    "step": float(traj.steps[k]),
                    "v": traj.vs[k].tolist(),
                }
            )
        )
    lines.append(_dump_row({"k": traj.fvals.shape[0], "x": traj.xs[-1].tolist()}))
    Path(path).write_text("\n".join(lines) + "\n")


def _read_seed_file(path, dim):
    """Parse one trajectory file back to ``(xs, fvals, warning_count)``.

    Malformed lines are skipped and counted.  ``xs`` carries ``len(fvals)+1``
    rows; a missing final position row degrades gracefully by repeating the
    last iterate (the extra row never enters any metric).
    """
    rows = {}
    warnings = 0
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            k = int(row["k"])
            x = np.asarray(row["x"], dtype=float)
            if x.shape != (dim,):
                raise ValueError("bad x length")
        except (KeyError, TypeError, ValueError):
            warnings += 1
            continue
        rows[k] = (x, row.get("f"))
    xs, fvals = [], []
    k = 0
    while k in rows:
        x, f = rows[k]
        xs.append(x)
        if f is None:
            break
        fvals.append(float(f))
        k += 1
    if not fvals:
        raise ValueError(f"{path}: no usable iterate rows")
    if len(xs) == len(fvals):
        xs.append(xs[-1])
    return np.vstack(xs), np.asarray(fvals), warnings


def aggregate_run(run_dir, write_csv=True):
    """Recompute a run's aggregates from its persisted files.

    Reads ``config.json`` and every ``seed_*.jsonl`` under ``run_dir``,
    rebuilds the per-seed metric series, and returns the summary dict
    (identical to what :func:`run_experiment` stores in ``summary.json``).
    With ``write_csv`` it also (re)writes ``aggregate.csv`` with one row per
    iteration: mean metric over seeds, standard error, and the constant
    guaranteed bound.
    """
    run_dir = Path(run_dir)
    spec = json.loads((run_dir / "config.json").read_text())
    config = ExperimentConfig.from_dict(spec["config"])
    fn = get_function(config.fn_id)
    sigma, sigma_info = resolve_sigma(config, fn)
    delta = config._metric_delta()
    seed_files = sorted(run_dir.glob("seed_*.jsonl"))
    if not seed_files:
        raise ValueError(f"{run_dir}: no seed_*.jsonl files to aggregate")
    per_seed, series_rows = [], []
    warnings = 0
    for i, path in enumerate(seed_files):
        xs, fvals, w = _read_seed_file(path, fn.dim)
        warnings += w
        series = _metric_series(config, fn, sigma, xs, fvals)
        k_best = best_index(series)
        entry = {
            "file": path.name,
            "seed_index": i,
            "min_k": k_best,
            "min_value": float(series[k_best]),
        }
        if delta is not None and fn.dim == 1 and fn.pieces_1d is not None:
            entry["goldstein_dist_at_best"] = float(
                goldstein_interval_1d(fn, xs[k_best], delta).distance(0.0)
            )
        per_seed.append(entry)
        series_rows.append(series)
    lengths = {s.shape[0] for s in series_rows}
    horizon_len = min(lengths)
    if len(lengths) > 1:
        warnings += 1
        series_rows = [s[:horizon_len] for s in series_rows]
    S = np.vstack(series_rows)
    n = S.shape[0]
    per_k_mean = S.mean(axis=0)
    per_k_stderr = S.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros(horizon_len)
    mins = S.min(axis=1)
    mean_min = float(np.mean(mins))
    stderr_min = float(np.std(mins, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    rhs = _theorem_rhs(config, fn, sigma, sigma_info)
    bound_ok = None if rhs is None else bool(mean_min <= rhs + 4.0 * stderr_min)
    if write_csv:
        lines = ["k,mean_metric,stderr,theorem_rhs"]
        rhs_text = "" if rhs is None else repr(float(rhs))
        for k in range(horizon_len):
            lines.append(f"{k},{float(per_k_mean[k])!r},{float(per_k_stderr[k])!r},{rhs_text}")
        (run_dir / "aggregate.csv").write_text("\n".join(lines) + "\n")
    return {
        "config_hash": config.config_hash,
        "run_dir": str(run_dir),
        "sigma": float(sigma),
        "gamma": _effective_gamma(config, sigma),
        "metric": config.metric,
        "metric_exactness": _metric_exactness(config, fn),
        "n_seeds": n,
        "mean_min": mean_min,
        "stderr_min": stderr_min,
        "theorem_rhs": None if rhs is None else float(rhs),
        "bound_ok": bound_ok,
        "warnings": warnings,
        "sigma_info": sigma_info,
        "per_seed": per_seed,
    }


def run_experiment(config, output_dir=None):
    """Execute every seed of an experiment and persist + aggregate results.

    Parameters
    ----------
    config : ExperimentConfig
    output_dir : path-like, optional
        Base directory; defaults to ``$SPBZO_OUTPUT_DIR`` or ``./spbzo_runs``.
        The run itself lands in ``<base>/run_<config_hash>/``.

    Returns
    -------
    RunRecord
    """
    base = Path(output_dir) if output_dir is not None else Path(os.environ.get(OUTPUT_DIR_ENV, "spbzo_runs"))
    run_dir = base / f"run_{config.config_hash}"
    run_dir.mkdir(parents=True, exist_ok=True)
    fn = get_function(config.fn_id)
    sigma, sigma_info = resolve_sigma(config, fn)
    gamma = _effective_gamma(config, sigma)
    schedule = Schedule.constant_over_sqrt(gamma, config.horizon)
    (run_dir / "config.json").write_text(
        json.dumps(
            jsonable(
                {
                    "config": config.to_dict(),
                    "config_hash": config.config_hash,
                    "resolved": {"sigma": sigma, "gamma": gamma, "sigma_info": sigma_info},
                }
            ),
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    for i in range(config.n_seeds):
        seed_i = derive_seed(config.master_seed, i)
        if config.algorithm == 1:
            feasible = (
                FeasibleSet.from_dict(config.feasible)
                if config.feasible is not None
                else FeasibleSet.whole_space()
            )
            traj = run_algorithm1(fn, feasible, config.x0, sigma, schedule, seed=seed_i)
        else:
            traj = run_algorithm2(fn, config.x0, sigma, schedule, seed=seed_i)
        _write_seed_file(run_dir / f"seed_{i:04d}.jsonl", traj)
    record = aggregate_run(run_dir)
    (run_dir / "summary.json").write_text(json.dumps(jsonable(record), indent=2, sort_keys=True) + "\n")
    return RunRecord(
        config_hash=record["config_hash"],
        run_dir=record["run_dir"],
        sigma=record["sigma"],
        gamma=record["gamma"],
        metric=record["metric"],
        metric_exactness=record["metric_exactness"],
        n_seeds=record["n_seeds"],
        mean_min=record["mean_min"],
        stderr_min=record["stderr_min"],
        theorem_rhs=record["theorem_rhs"],
        bound_ok=record["bound_ok"],
        warnings=record["warnings"],
        sigma_info=record["sigma_info"],
        per_seed=tuple(record["per_seed"]),
    )


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _scaled(count, scale, floor=2):
    return max(floor, int(round(count * scale)))


def _suite_certificates(scale, seed):
    checks = []
    for fid in function_ids():
        fn = get_function(fid)
        res = validate_certificate(fn, samples=_scaled(10_000, scale, floor=100), seed=seed)
        checks.append(
            {
                "name": f"certificate:{fid}",
                "passed": res["violations"] == 0,
                "details": res,
            }
        )
    return checks


def _suite_descent(scale, seed):
    checks = []
    for fid in ORACLE_MEMBER_IDS:
        fn = get_function(fid)
        res = check_descent_lemma(fn, pairs=_scaled(1000, scale, floor=20), seed=seed)
        checks.append(
            {"name": f"descent:{fid}", "passed": res["violations"] == 0, "details": res}
        )
    return checks


def _suite_approx(scale, seed):
    checks = []
    for fid in ORACLE_MEMBER_IDS:
        fn = get_function(fid)
        res = check_approx_error(fn, points=_scaled(1000, scale, floor=20), seed=seed)
        checks.append(
            {"name": f"approx:{fid}", "passed": res["violations"] == 0, "details": res}
        )
    return checks


def _suite_moments(scale, seed):
    checks = []
    rng = make_rng(seed)
    n = _scaled(100_000, scale, floor=2000)
    for fid in function_ids():
        fn = get_function(fid)
        worst = None
        ok = True
        for i in range(_scaled(10, scale, floor=3)):
            x = rng.uniform(-3.0, 3.0, size=fn.dim)
            for p in (1, 2, 4):
                res = check_moment_bound(fn, x, sigma=float(rng.uniform(0.05, 1.0)), p=p, n=n, seed=seed + i)
                ratio = res["estimate"] / res["bound"]
                if worst is None or ratio > worst:
                    worst = ratio
                ok = ok and res["ok"]
        checks.append(
            {"name": f"moments:{fid}", "passed": ok, "details": {"worst_ratio": worst, "n": n}}
        )
    return checks


def _suite_fractional(scale, seed):
    rng = make_rng(seed)
    trials = _scaled(20, scale, floor=5)
    worst = -math.inf
    passed = True
    for _ in range(trials):
        d = int(rng.integers(1, 6))
        n_exp = int(rng.integers(1, 5))
        count = _scaled(4000, scale, floor=200)
        x = rng.standard_normal((count, d)) * rng.uniform(0.2, 2.0)
        sq = np.einsum("ij,ij->i", x, x)
        beta_c = float(np.mean(sq) * rng.uniform(1.0, 1.5))
        denom = 1.0 + np.linalg.norm(x, axis=1) ** n_exp
        g = rng.uniform(0.0, 1.0, size=count) * denom
        alpha_c = float(np.mean(g / denom) * rng.uniform(1.0, 1.5))
        lhs = float(np.mean(g ** (1.0 / (2.0 * ceil_half(n_exp)))))
        rhs = fractional_power_bound(alpha_c, beta_c, n_exp)
        margin = rhs - lhs
        worst = max(worst, lhs / rhs)
        passed = passed and margin >= -1e-12
    return [
        {
            "name": "fractional:random-distributions",
            "passed": passed,
            "details": {"trials": trials, "worst_ratio": worst},
        }
    ]


def _suite_tail(scale, seed):
    del scale, seed
    cells, passed = [], True
    for d in (1, 2, 5, 10):
        for exp10 in range(1, 7):
            nu = 10.0**-exp10
            m_rad = tail_radius(d, nu)
            res = tail_radius_check(d, nu, m_rad)
            passed = passed and res["bound_satisfied"]
            cells.append({"d": d, "nu": nu, "radius": m_rad, "ok": res["bound_satisfied"]})
    return [{"name": "tail:radius-grid", "passed": passed, "details": {"cells": cells}}]


def _suite_inclusion(scale, seed):
    rng = make_rng(seed)
    checks = []
    count = _scaled(20, scale, floor=3)
    for fid in ("abs1d", "pw1d"):
        fn = get_function(fid)
        worst = math.inf
        passed = True
        for epsilon in (0.3, 0.1, 0.03):
            for delta in (0.5, 0.1):
                for x in rng.uniform(-3.0, 3.0, size=count):
                    res = check_goldstein_inclusion(fn, x, epsilon, delta)
                    worst = min(worst, res["margin"])
                    passed = passed and res["satisfied"]
        checks.append(
            {"name": f"inclusion:{fid}", "passed": passed, "details": {"worst_margin": worst}}
        )
    return checks


def _suite_consistency(scale, seed):
    del scale, seed
    sigmas = [1.0, 0.3, 0.1, 0.03, 0.01]
    checks = []
    quad = gradient_consistency_probe(get_function("quad"), (0.7, -0.3), sigmas)
    checks.append(
        {
            "name": "consistency:quad",
            "passed": max(quad["distances"]) <= 1e-10,
            "details": quad,
        }
    )
    for fid, x in (("abs1d", 1.0), ("pw1d", 0.5)):
        probe = gradient_consistency_probe(get_function(fid), x, sigmas)
        dist = probe["distances"]
        checks.append(
            {
                "name": f"consistency:{fid}",
                "passed": dist[-1] <= 1e-6 and dist[-1] <= dist[0] + 1e-12,
                "details": probe,
            }
        )
    return checks


def _suite_lambert(scale, seed):
    rng = make_rng(seed)
    count = _scaled(1000, scale, floor=50)
    ws = rng.uniform(-50.0, -1.0, size=count)
    worst_rt = 0.0
    worst_res = 0.0
    for w in ws:
        t = w * math.exp(w)
        ev = w_minus1(t)
        worst_rt = max(worst_rt, abs(ev.value - w))
        worst_res = max(worst_res, ev.residual)
    branch = abs(w_minus1(-1.0 / math.e).value - (-1.0))
    two = abs(w_minus1(-2.0 * math.exp(-2.0)).value - (-2.0))
    chain_ok = True
    for h in np.linspace(1e-4, 0.1 - 1e-9, 100):
        w = w_minus1(-float(h)).value
        chain_ok = chain_ok and w >= (math.e / (math.e - 1.0)) * math.log(h) - 1e-12
        chain_ok = chain_ok and w > -1.0 / (2.0 * h)
    passed = worst_rt <= 1e-9 and worst_res <= 1e-12 and branch <= 1e-9 and two <= 1e-9 and chain_ok
    return [
        {
            "name": "lambert:branch",
            "passed": passed,
            "details": {
                "worst_roundtrip": worst_rt,
                "worst_residual": worst_res,
                "branch_point_error": branch,
                "minus_two_error": two,
                "log_chain_ok": chain_ok,
            },
        }
    ]


_SUITES = {
    "certificates": _suite_certificates,
    "descent": _suite_descent,
    "approx": _suite_approx,
    "moments": _suite_moments,
    "fractional": _suite_fractional,
    "tail": _suite_tail,
    "inclusion": _suite_inclusion,
    "consistency": _suite_consistency,
    "lambert": _suite_lambert,
}

SUITE_NAMES = tuple(_SUITES)


def verify_suite(names="all", scale=1.0, seed=0):
    """Run verification suites and collect machine-readable results.

    Parameters
    ----------
    names : str or sequence of str
        ``"all"`` or any subset of :data:`SUITE_NAMES`.
    scale : float
        Multiplier on sample counts (use < 1 for quick smoke runs).
    seed : int

    Returns
    -------
    dict
        ``{"passed": bool, "checks": [{"suite", "name", "passed", "details"}]}``.
    """
    if names == "all":
        selected = list(SUITE_NAMES)
    elif isinstance(names, str):
        selected = [names]
    else:
        selected = list(names)
    unknown = [n for n in selected if n not in _SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; available: {', '.join(SUITE_NAMES)}")
    checks = []
    for name in selected:
        for item in _SUITES[name](scale, seed):
            checks.append({"suite": name, **item})
    return {"passed": all(c["passed"] for c in checks), "checks": checks}
