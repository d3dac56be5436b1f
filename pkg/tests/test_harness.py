"""Tests for experiment configs, persistence, aggregation, and verify suites."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from spbzo.catalog import get_function
from spbzo.constants import RateInputs, convex_rate_rhs, goldstein_sigma_rule, unconstrained_rate_rhs
from spbzo.harness import (
    OUTPUT_DIR_ENV,
    ExperimentConfig,
    aggregate_run,
    resolve_sigma,
    run_experiment,
    verify_suite,
)
from spbzo.optimizers import Schedule, run_algorithm1
from spbzo.seeding import derive_seed


def quad_config(**overrides):
    base = dict(
        fn_id="quad",
        algorithm=1,
        x0=(2.0, 0.0),
        horizon=15,
        gamma=0.5,
        sigma=0.05,
        n_seeds=3,
        master_seed=7,
        feasible={"kind": "ball", "center": [0.0, 0.0], "radius": 5.0},
        metric="relative_gap",
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_valid_config_accepted(self):
        cfg = quad_config()
        assert cfg.horizon == 15 and cfg.x0 == (2.0, 0.0)

    def test_exactly_one_radius_source(self):
        with pytest.raises(ValueError, match="exactly one"):
            quad_config(sigma=None, sigma_rule=None)
        with pytest.raises(ValueError, match="exactly one"):
            quad_config(sigma=0.1, sigma_rule={"kind": "inclusion", "epsilon": 0.1, "delta": 0.5})

    def test_rule_kinds_checked(self):
        with pytest.raises(ValueError, match="kind"):
            quad_config(sigma=None, sigma_rule={"kind": "bogus"})
        with pytest.raises(ValueError, match="missing"):
            quad_config(sigma=None, sigma_rule={"kind": "inclusion", "epsilon": 0.1})

    def test_gamma_only_omitted_with_schedule_rule(self):
        with pytest.raises(ValueError, match="gamma"):
            quad_config(gamma=None)
        cfg = ExperimentConfig(
            fn_id="abs1d",
            algorithm=2,
            x0=(0.8,),
            horizon=100,
            gamma=None,
            sigma_rule={"kind": "schedule", "delta": 0.5},
            n_seeds=2,
            metric="goldstein_dist",
        )
        assert cfg.gamma is None

    def test_goldstein_metric_needs_delta(self):
        with pytest.raises(ValueError, match="delta"):
            quad_config(metric="goldstein_dist")
        cfg = quad_config(metric="goldstein_dist", metric_params={"delta": 0.3})
        assert cfg._metric_delta() == 0.3

    def test_unconstrained_scheme_rejects_feasible_set(self):
        with pytest.raises(ValueError, match="unconstrained"):
            quad_config(algorithm=2, feasible={"kind": "ball", "center": [0.0, 0.0], "radius": 1.0})

    def test_unknown_member_and_metric_rejected(self):
        with pytest.raises(ValueError):
            quad_config(fn_id="nope")
        with pytest.raises(ValueError, match="metric"):
            quad_config(metric="nope")

    def test_dict_round_trip_preserves_hash(self):
        cfg = quad_config()
        back = ExperimentConfig.from_dict(cfg.to_dict())
        assert back == cfg
        assert back.config_hash == cfg.config_hash

    def test_hash_sensitivity(self):
        base = quad_config()
        assert base.config_hash != quad_config(sigma=0.06).config_hash
        assert base.config_hash != quad_config(horizon=16).config_hash
        assert base.config_hash != quad_config(master_seed=8).config_hash
        assert base.config_hash != quad_config(gamma=0.4).config_hash
        assert len(base.config_hash) == 16


class TestResolveSigma:
    def test_explicit_radius_passthrough(self):
        sigma, info = resolve_sigma(quad_config())
        assert sigma == 0.05
        assert info["kind"] == "explicit"

    def test_inclusion_rule_uses_selection_radius(self):
        cfg = ExperimentConfig(
            fn_id="abs1d",
            algorithm=2,
            x0=(1.0,),
            horizon=10,
            gamma=0.5,
            sigma_rule={"kind": "inclusion", "epsilon": 0.1, "delta": 0.5},
            n_seeds=2,
        )
        sigma, info = resolve_sigma(cfg)
        rule = goldstein_sigma_rule(get_function("abs1d").certificate, 1, 0.1, 0.5)
        assert sigma == rule.sigma_max
        assert info["kind"] == "inclusion"

    def test_schedule_rule_requires_admissible_horizon(self):
        cfg = ExperimentConfig(
            fn_id="abs1d",
            algorithm=2,
            x0=(0.8,),
            horizon=1,
            gamma=None,
            sigma_rule={"kind": "schedule", "delta": 0.5},
            n_seeds=2,
            metric="goldstein_dist",
        )
        with pytest.raises(ValueError, match="threshold"):
            resolve_sigma(cfg)


class TestRunAndAggregate:
    def test_outputs_and_record(self, tmp_path):
        cfg = quad_config()
        record = run_experiment(cfg, output_dir=tmp_path)
        run_dir = Path(record.run_dir)
        assert run_dir == tmp_path / f"run_{cfg.config_hash}"
        names = sorted(p.name for p in run_dir.iterdir())
        assert names == [
            "aggregate.csv",
            "config.json",
            "seed_0000.jsonl",
            "seed_0001.jsonl",
            "seed_0002.jsonl",
            "summary.json",
        ]
        assert record.n_seeds == 3
        assert record.metric == "relative_gap"
        assert record.metric_exactness == "exact"
        assert record.warnings == 0
        assert record.bound_ok is True
        # The guarantee matches an independent recomputation.
        fn = get_function("quad")
        inputs = RateInputs(
            gamma=0.5, horizon=15, sigma=0.05, x0=np.array([2.0, 0.0]), xstar=fn.minimizer
        )
        assert record.theorem_rhs == pytest.approx(
            convex_rate_rhs(fn.certificate, inputs, 2), rel=1e-15
        )

    def test_seed_files_replay_the_optimizer(self, tmp_path):
        cfg = quad_config()
        record = run_experiment(cfg, output_dir=tmp_path)
        fn = get_function("quad")
        schedule = Schedule.constant_over_sqrt(0.5, 15)
        from spbzo.optimizers import FeasibleSet

        feasible = FeasibleSet.from_dict(cfg.feasible)
        for i in range(3):
            traj = run_algorithm1(
                fn, feasible, cfg.x0, 0.05, schedule, seed=derive_seed(7, i)
            )
            rows = [
                json.loads(line)
                for line in (Path(record.run_dir) / f"seed_{i:04d}.jsonl").read_text().splitlines()
            ]
            assert len(rows) == 17  # k = 0..15 plus the final position row
            for k in range(16):
                assert rows[k]["k"] == k
                assert rows[k]["x"] == traj.xs[k].tolist()
                assert rows[k]["f"] == traj.fvals[k]
            assert rows[16] == {"k": 16, "x": traj.xs[16].tolist()}

    def test_mean_of_per_seed_minima(self, tmp_path):
        cfg = quad_config()
        record = run_experiment(cfg, output_dir=tmp_path)
        mins = [entry["min_value"] for entry in record.per_seed]
        assert record.mean_min == pytest.approx(float(np.mean(mins)), rel=1e-15)
        expected_se = float(np.std(mins, ddof=1) / math.sqrt(len(mins)))
        assert record.stderr_min == pytest.approx(expected_se, rel=1e-15)

    def test_single_seed_has_zero_stderr(self, tmp_path):
        record = run_experiment(quad_config(n_seeds=1), output_dir=tmp_path)
        assert record.n_seeds == 1
        assert record.stderr_min == 0.0

    def test_aggregate_csv_recomputed_from_files(self, tmp_path):
        cfg = quad_config()
        record = run_experiment(cfg, output_dir=tmp_path)
        run_dir = Path(record.run_dir)
        lines = (run_dir / "aggregate.csv").read_text().splitlines()
        assert lines[0] == "k,mean_metric,stderr,theorem_rhs"
        assert len(lines) == 1 + 16
        # Recompute row k=0 by hand: every seed starts at x0.
        fn = get_function("quad")
        gap0 = (fn.eval(np.array(cfg.x0)) - 0.0) / (2.0 + 1.0)
        k0 = lines[1].split(",")
        assert int(k0[0]) == 0
        assert float(k0[1]) == pytest.approx(gap0, rel=1e-15)
        assert float(k0[2]) == 0.0
        assert float(k0[3]) == pytest.approx(record.theorem_rhs, rel=1e-15)

    def test_aggregation_idempotent(self, tmp_path):
        record = run_experiment(quad_config(), output_dir=tmp_path)
        run_dir = Path(record.run_dir)
        csv_first = (run_dir / "aggregate.csv").read_bytes()
        summary_first = json.loads((run_dir / "summary.json").read_text())
        again = aggregate_run(run_dir)
        assert (run_dir / "aggregate.csv").read_bytes() == csv_first
        assert again == summary_first

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = quad_config()
        rec_a = run_experiment(cfg, output_dir=tmp_path / "a")
        rec_b = run_experiment(cfg, output_dir=tmp_path / "b")
        for name in ("seed_0000.jsonl", "seed_0001.jsonl", "seed_0002.jsonl", "aggregate.csv"):
            assert (Path(rec_a.run_dir) / name).read_bytes() == (
                Path(rec_b.run_dir) / name
            ).read_bytes()

    def test_malformed_rows_counted_and_tolerated(self, tmp_path):
        record = run_experiment(quad_config(), output_dir=tmp_path)
        run_dir = Path(record.run_dir)
        path = run_dir / "seed_0001.jsonl"
        lines = path.read_text().splitlines()
        lines[5] = '{"k": 5, "x": "garbage"}'
        path.write_text("\n".join(lines) + "\n")
        redone = aggregate_run(run_dir)
        assert redone["warnings"] >= 1
        assert redone["n_seeds"] == 3

    def test_missing_final_row_degrades_gracefully(self, tmp_path):
        record = run_experiment(quad_config(), output_dir=tmp_path)
        run_dir = Path(record.run_dir)
        path = run_dir / "seed_0002.jsonl"
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        redone = aggregate_run(run_dir)
        assert redone["n_seeds"] == 3

    def test_environment_variable_sets_output_base(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "envbase"))
        record = run_experiment(quad_config())
        assert Path(record.run_dir).parent == tmp_path / "envbase"

    def test_wtilde_metric_pairs_with_unconstrained_guarantee(self, tmp_path):
        cfg = ExperimentConfig(
            fn_id="abs1d",
            algorithm=2,
            x0=(1.5,),
            horizon=30,
            gamma=0.1,
            sigma=0.1,
            n_seeds=3,
            master_seed=1,
            metric="wtilde_sq",
        )
        record = run_experiment(cfg, output_dir=tmp_path)
        fn = get_function("abs1d")
        inputs = RateInputs(
            gamma=0.1,
            horizon=30,
            sigma=0.1,
            x0=np.array([1.5]),
            inf_value=0.0,
            f_x0=1.5,
        )
        assert record.theorem_rhs == pytest.approx(
            unconstrained_rate_rhs(fn.certificate, inputs, 1), rel=1e-15
        )
        assert record.bound_ok is True

    def test_unpaired_metric_reports_no_bound(self, tmp_path):
        cfg = ExperimentConfig(
            fn_id="quad",
            algorithm=1,
            x0=(1.0, 0.0),
            horizon=5,
            gamma=0.5,
            sigma=0.1,
            n_seeds=2,
            metric="wtilde_sq",
        )
        record = run_experiment(cfg, output_dir=tmp_path)
        assert record.theorem_rhs is None
        assert record.bound_ok is None

    def test_goldstein_metric_with_schedule_rule(self, tmp_path):
        cfg = ExperimentConfig(
            fn_id="abs1d",
            algorithm=2,
            x0=(0.8,),
            horizon=40,
            gamma=None,
            sigma_rule={"kind": "schedule", "delta": 0.5},
            n_seeds=2,
            metric="goldstein_dist",
        )
        record = run_experiment(cfg, output_dir=tmp_path)
        assert record.metric_exactness == "exact"
        assert record.sigma == record.gamma
        assert record.theorem_rhs == pytest.approx(record.sigma_info["rate_rhs"])
        assert record.bound_ok is True


class TestVerifySuite:
    def test_all_suites_pass_at_reduced_scale(self):
        report = verify_suite(names="all", scale=0.02, seed=0)
        assert report["passed"] is True
        suites = {c["suite"] for c in report["checks"]}
        assert suites == {
            "certificates",
            "descent",
            "approx",
            "moments",
            "fractional",
            "tail",
            "inclusion",
            "consistency",
            "lambert",
        }
        assert all(c["passed"] for c in report["checks"])

    def test_single_suite_selection(self):
        report = verify_suite(names=("tail",), scale=1.0, seed=0)
        assert report["passed"] is True
        assert {c["suite"] for c in report["checks"]} == {"tail"}

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError):
            verify_suite(names=("bogus",))
