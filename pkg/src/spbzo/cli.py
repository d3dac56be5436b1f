"""Command-line interface.

Subcommands mirror the library layers: ``catalog`` (members), ``constants``
(certified coefficients, radius rules, guaranteed rates), ``lambert``
(negative-branch evaluation), ``smooth`` (Monte Carlo / oracle smoothing),
``goldstein`` (reach-set geometry and the inclusion check), ``optimize``
(multi-seed experiments), ``verify`` (numerical certification suites), and
``aggregate`` (recompute summaries from persisted runs).

Exit status is 0 iff every check requested by the invocation passed.
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from .catalog import UnsupportedFunctionError, clarke_norm_bound, evaluate, function_ids, get_function
from .constants import (
    RateInputs,
    approx_error_coeff,
    convex_rate_rhs,
    goldstein_schedule,
    goldstein_sigma_rule,
    growth_constants,
    level_bounded_constants,
    moment_coeff,
    sigma_cap_constant,
    smoothing_constants,
    unconstrained_rate_rhs,
)
from .harness import (
    OUTPUT_DIR_ENV,
    SUITE_NAMES,
    ExperimentConfig,
    aggregate_run,
    run_experiment,
    verify_suite,
)
from .lambertw import w_minus1
from .optimizers import FeasibleSet
from .smoothing import gs_grad_oracle, gs_grad_onepoint_mc, gs_grad_twopoint_mc, gs_value_mc, gs_value_oracle
from .stationarity import check_goldstein_inclusion, goldstein_distance, goldstein_interval_1d
from .util import jsonable

__all__ = ["main"]


def _csv_vector(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip() != "")
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated floats, got {text!r}") from exc


def _parse_feasible(spec):
    """Parse a feasible-set spec: whole_space | ball:c1,..,cd:r | box:lo..:hi.."""
    if spec in (None, "", "whole_space"):
        return None
    parts = spec.split(":")
    if parts[0] == "ball" and len(parts) == 3:
        return FeasibleSet.ball(_csv_vector(parts[1]), float(parts[2])).to_dict()
    if parts[0] == "box" and len(parts) == 3:
        return FeasibleSet.box(_csv_vector(parts[1]), _csv_vector(parts[2])).to_dict()
    raise click.BadParameter(
        f"bad feasible set {spec!r}; use whole_space, ball:c1,..:r, or box:lo1,..:hi1,.."
    )


def _echo_kv(label, value):
    if isinstance(value, float):
        value = f"{value:.12g}"
    click.echo(f"  {label:<34} {value}")


@click.group()
def main():
    """Zeroth-order optimization toolkit for polynomially bounded nonsmooth problems."""


@main.command()
def catalog():
    """List catalog members and their gradient-growth certificates."""
    click.echo(f"{'id':<10} {'dim':>3}  {'r1':>8} {'r2':>8} {'m':>2}  properties")
    for fid in function_ids():
        fn = get_function(fid)
        c = fn.certificate
        props = []
        if fn.convex:
            props.append("convex")
        if fn.pieces_1d is not None:
            props.append("piecewise-1d")
        if fn.analytic_gs_value is not None:
            props.append("closed-form-smoothing")
        if fn.growth_mu is not None:
            props.append(f"growth(mu={fn.growth_mu:g})")
        click.echo(f"{fid:<10} {fn.dim:>3}  {c.r1:>8g} {c.r2:>8g} {c.m:>2}  {', '.join(props)}")


@main.command("constants")
@click.option("--fn", "fn_id", required=True, help="Catalog member id.")
@click.option("--sigma", type=float, default=None, help="Smoothing radius.")
@click.option("--eps", "epsilon", type=float, default=None, help="Inclusion accuracy epsilon.")
@click.option("--delta", type=float, default=None, help="Subgradient reach delta.")
@click.option("--gamma", type=float, default=None, help="Stepsize scale in (0,1].")
@click.option("--T", "horizon", type=int, default=None, help="Horizon T.")
@click.option("--x0", type=str, default=None, help="Start point (comma-separated).")
def constants_cmd(fn_id, sigma, epsilon, delta, gamma, horizon, x0):
    """Print certified coefficients, radius rules, and guaranteed rates."""
    fn = get_function(fn_id)
    cert, d = fn.certificate, fn.dim
    x0v = np.zeros(d) if x0 is None else np.asarray(_csv_vector(x0), dtype=float)
    click.echo(f"member {fn.id}: dim={d}, certificate r1={cert.r1:g}, r2={cert.r2:g}, m={cert.m}")
    _echo_kv("gradient-norm bound at x0", clarke_norm_bound(cert, x0v))
    if sigma is not None:
        sc = smoothing_constants(cert, sigma, d)
        click.echo(f"smoothing constants at sigma={sigma:g}:")
        _echo_kv("value envelope offset", sc.value_lip_offset)
        _echo_kv("value envelope base-norm coeff", sc.value_lip_base)
        _echo_kv("value envelope step-norm coeff", sc.value_lip_step)
        _echo_kv("gradient envelope offset", sc.grad_lip_offset)
        _echo_kv("gradient envelope base-norm coeff", sc.grad_lip_base)
        _echo_kv("gradient envelope step-norm coeff", sc.grad_lip_step)
        _echo_kv("smoothing error coeff at x0", approx_error_coeff(cert, sigma, d, x0v))
        _echo_kv("moment coeff p=2", moment_coeff(cert, sigma, d, 2))
        _echo_kv(f"moment coeff p={cert.m + 2}", moment_coeff(cert, sigma, d, cert.m + 2))
    if epsilon is not None and delta is not None:
        rule = goldstein_sigma_rule(cert, d, epsilon, delta)
        click.echo(f"inclusion radius rule at eps={epsilon:g}, delta={delta:g}:")
        _echo_kv("gradient scale", rule.grad_scale)
        _echo_kv("tail mass", rule.tail_mass)
        _echo_kv("tail radius", rule.tail_radius)
        _echo_kv("sigma_max", rule.sigma_max)
        _echo_kv("sigma_max (simplified window)", rule.sigma_simplified)
        _echo_kv("eps cap (branch)", rule.eps_cap_branch)
        _echo_kv("eps cap (small-argument)", rule.eps_cap_small_arg)
        _echo_kv("simplified window valid", rule.window_ok)
    if delta is not None and horizon is not None:
        f_gap = None if fn.inf_value is None else evaluate(fn, x0v) - fn.inf_value
        sched = goldstein_schedule(
            cert,
            d,
            delta,
            horizon,
            x0=x0v,
            f_gap=f_gap,
            growth_mu=fn.growth_mu,
            sup_solution_norm=fn.sup_minimizer_norm,
        )
        click.echo(f"stationarity schedule at delta={delta:g}, T={horizon}:")
        _echo_kv("sigma coefficient", sched.sigma_coeff)
        _echo_kv("sigma at T", sched.sigma_sched)
        _echo_kv("horizon threshold", sched.t_min)
        _echo_kv("horizon valid", sched.t_ok)
        _echo_kv("accuracy at T", sched.eps_sched)
        if sched.budget_const is not None:
            _echo_kv("sigma-free budget constant", sched.budget_const)
        if sched.rate_rhs is not None:
            _echo_kv("guaranteed stationarity rate", sched.rate_rhs)
    if gamma is not None and horizon is not None and sigma is not None:
        click.echo(f"guaranteed rates at gamma={gamma:g}, T={horizon}, sigma={sigma:g}:")
        if fn.minimizer is not None:
            inputs = RateInputs(gamma=gamma, horizon=horizon, sigma=sigma, x0=x0v, xstar=fn.minimizer)
            _echo_kv("convex relative-gap bound", convex_rate_rhs(cert, inputs, d))
            if cert.m >= 1 and horizon >= 1 and fn.level_radius is not None:
                lb = level_bounded_constants(fn, inputs)
                _echo_kv("level-bounded rate bound", lb["rate_bound"])
        if fn.inf_value is not None:
            inputs = RateInputs(
                gamma=gamma,
                horizon=horizon,
                sigma=sigma,
                x0=x0v,
                inf_value=fn.inf_value,
                f_x0=evaluate(fn, x0v),
            )
            _echo_kv("unconstrained gradient bound", unconstrained_rate_rhs(cert, inputs, d))
            if cert.m >= 1 and fn.growth_mu is not None and fn.sup_minimizer_norm is not None:
                inputs = RateInputs(
                    gamma=gamma,
                    horizon=horizon,
                    sigma=sigma,
                    x0=x0v,
                    inf_value=fn.inf_value,
                    f_x0=evaluate(fn, x0v),
                    growth_mu=fn.growth_mu,
                    sup_solution_norm=fn.sup_minimizer_norm,
                )
                gc = growth_constants(cert, inputs, d)
                _echo_kv("growth-condition rate bound", gc["rate_bound"])
            _echo_kv(
                "sigma-free budget constant",
                sigma_cap_constant(cert, d, x0v, evaluate(fn, x0v) - fn.inf_value),
            )


@main.command()
@click.option("--t", "t_value", type=float, required=True, help="Argument t in [-1/e, 0).")
def lambert(t_value):
    """Evaluate the negative real branch of w*exp(w) = t."""
    ev = w_minus1(t_value)
    _echo_kv("input", ev.input)
    _echo_kv("value", ev.value)
    _echo_kv("residual", ev.residual)
    _echo_kv("converged", ev.converged)
    _echo_kv("iterations", ev.iterations)
    if not ev.converged:
        sys.exit(1)


@main.command()
@click.option("--fn", "fn_id", required=True, help="Catalog member id.")
@click.option("--x", required=True, help="Point (comma-separated).")
@click.option("--sigma", type=float, required=True)
@click.option("--n", type=int, default=10_000, show_default=True, help="Monte Carlo samples.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grad", type=click.Choice(["one", "two"]), default=None, help="Estimate the gradient instead of the value.")
def smooth(fn_id, x, sigma, n, seed, grad):
    """Monte Carlo smoothing estimates, with the oracle value when available."""
    fn = get_function(fn_id)
    xv = _csv_vector(x)
    if grad is None:
        est = gs_value_mc(fn, xv, sigma, n, seed)
        _echo_kv("smoothed value (MC)", float(est.mean))
        _echo_kv("stderr", float(est.stderr))
        try:
            _echo_kv("smoothed value (oracle)", gs_value_oracle(fn, xv, sigma))
        except UnsupportedFunctionError:
            pass
    else:
        estimator = gs_grad_onepoint_mc if grad == "one" else gs_grad_twopoint_mc
        est = estimator(fn, xv, sigma, n, seed)
        _echo_kv(f"smoothed gradient ({grad}-point MC)", np.array2string(est.mean, precision=8))
        _echo_kv("stderr (per coordinate)", np.array2string(est.stderr, precision=3))
        try:
            _echo_kv("smoothed gradient (oracle)", np.array2string(gs_grad_oracle(fn, xv, sigma), precision=8))
        except UnsupportedFunctionError:
            pass
    _echo_kv("samples", est.n)


@main.command()
@click.option("--fn", "fn_id", required=True, help="Catalog member id.")
@click.option("--x", required=True, help="Point (comma-separated).")
@click.option("--delta", type=float, required=True, help="Subgradient reach.")
@click.option("--eps", "epsilon", type=float, default=None, help="Check the inclusion at this accuracy.")
@click.option("--sigma", type=float, default=None, help="Explicit radius for the inclusion check.")
@click.option("--budget", type=int, default=64, show_default=True, help="Gradient samples in d > 1.")
def goldstein(fn_id, x, delta, epsilon, sigma, budget):
    """Reach-set geometry at a point, and the inclusion check when --eps is given."""
    fn = get_function(fn_id)
    xv = _csv_vector(x)
    if fn.dim == 1 and fn.pieces_1d is not None:
        interval = goldstein_interval_1d(fn, xv[0], delta)
        _echo_kv("reach interval", f"[{interval.lo:.12g}, {interval.hi:.12g}]")
    dist = goldstein_distance(fn, xv, delta, budget=budget)
    _echo_kv("distance to 0", dist["value"])
    _echo_kv("exactness", dist["exactness"])
    ok = True
    if epsilon is not None:
        res = check_goldstein_inclusion(fn, xv, epsilon, delta, sigma=sigma, budget=budget)
        _echo_kv("smoothing radius used", res["sigma"])
        _echo_kv("radius rule bound", res["sigma_max"])
        _echo_kv("inclusion allowance", res["allowance"])
        _echo_kv("gradient-to-set distance", res["distance"])
        _echo_kv("margin", res["margin"])
        _echo_kv("satisfied", res["satisfied"])
        ok = res["satisfied"]
    if not ok:
        sys.exit(1)


@main.command()
@click.option("--fn", "fn_id", required=True, help="Catalog member id.")
@click.option("--alg", type=click.Choice(["1", "2"]), required=True)
@click.option("--x0", required=True, help="Start point (comma-separated).")
@click.option("--sigma", type=float, default=None, help="Explicit smoothing radius.")
@click.option("--rule-eps", type=float, default=None, help="Inclusion-rule accuracy (with --rule-delta).")
@click.option("--rule-delta", type=float, default=None, help="Reach for a radius rule.")
@click.option("--schedule-rule", is_flag=True, help="Use the horizon-indexed radius schedule (needs --rule-delta).")
@click.option("--gamma", type=float, default=None, help="Stepsize scale in (0,1].")
@click.option("--T", "horizon", type=int, required=True, help="Horizon T.")
@click.option("--seeds", type=int, default=100, show_default=True)
@click.option("--master-seed", type=int, default=0, show_default=True)
@click.option("--set", "feasible_spec", default="whole_space", show_default=True, help="whole_space | ball:c1,..:r | box:lo1,..:hi1,..")
@click.option("--metric", type=click.Choice(["relative_gap", "wtilde_sq", "goldstein_dist"]), default="relative_gap", show_default=True)
@click.option("--metric-delta", type=float, default=None, help="Reach for the goldstein_dist metric.")
@click.option("--out", "output_dir", default=None, help=f"Output base directory (default ${OUTPUT_DIR_ENV} or ./spbzo_runs).")
def optimize(fn_id, alg, x0, sigma, rule_eps, rule_delta, schedule_rule, gamma, horizon, seeds, master_seed, feasible_spec, metric, metric_delta, output_dir):
    """Run a multi-seed experiment and compare against the guaranteed bound."""
    sigma_rule = None
    if schedule_rule:
        if rule_delta is None:
            raise click.BadParameter("--schedule-rule needs --rule-delta")
        sigma_rule = {"kind": "schedule", "delta": rule_delta}
    elif rule_eps is not None or rule_delta is not None:
        if rule_eps is None or rule_delta is None:
            raise click.BadParameter("the inclusion rule needs both --rule-eps and --rule-delta")
        sigma_rule = {"kind": "inclusion", "epsilon": rule_eps, "delta": rule_delta}
    metric_params = {} if metric_delta is None else {"delta": metric_delta}
    config = ExperimentConfig(
        fn_id=fn_id,
        algorithm=int(alg),
        x0=_csv_vector(x0),
        horizon=horizon,
        gamma=gamma,
        sigma=sigma,
        sigma_rule=sigma_rule,
        n_seeds=seeds,
        master_seed=master_seed,
        feasible=_parse_feasible(feasible_spec),
        metric=metric,
        metric_params=metric_params,
    )
    record = run_experiment(config, output_dir)
    click.echo(json.dumps(jsonable({k: v for k, v in record.to_dict().items() if k != "per_seed"}), indent=2, sort_keys=True))
    if record.bound_ok is False:
        sys.exit(1)


@main.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITE_NAMES), help="Suite(s) to run (default: all).")
@click.option("--scale", type=float, default=1.0, show_default=True, help="Sample-count multiplier.")
@click.option("--seed", type=int, default=0, show_default=True)
def verify(suites, scale, seed):
    """Run numerical certification suites; exit 0 iff everything passes."""
    names = "all" if not suites else list(suites)
    report = verify_suite(names, scale=scale, seed=seed)
    width = max(len(c["name"]) for c in report["checks"]) + 2
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        click.echo(f"[{status}] {c['name']:<{width}} (suite {c['suite']})")
    click.echo(f"overall: {'PASS' if report['passed'] else 'FAIL'} ({len(report['checks'])} checks)")
    if not report["passed"]:
        sys.exit(1)


@main.command()
@click.option("--run", "run_dir", required=True, help="Run directory with config.json and seed_*.jsonl.")
def aggregate(run_dir):
    """Recompute a run's summary and aggregate.csv from persisted files."""
    record = aggregate_run(run_dir)
    click.echo(json.dumps(jsonable({k: v for k, v in record.items() if k != "per_seed"}), indent=2, sort_keys=True))
    if record["bound_ok"] is False:
        sys.exit(1)


if __name__ == "__main__":
    main()
