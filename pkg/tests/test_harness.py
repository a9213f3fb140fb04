import hashlib
from pathlib import Path

import numpy as np
import pytest

from smjio import beamformers
from smjio.array_model import ConfigurationError, ScenarioConfig, build_scenario, steering_vector
from smjio.harness import (AlgorithmSpec, ExperimentConfig, bound_sweep_specs, csv_text,
                           emit_plot, load_config, output_sinr, parse_config, run_experiment,
                           run_single, write_csv)
from smjio.harness.runner import ExperimentResult
from smjio.numerics import NumericalError

DATA = Path(__file__).parent / "data"


def small_cfg(**kw):
    base = dict(m=8, q=3, inr_db=20.0, runs=3, snapshots=60, rank=3, seed=11,
                mu_fr=1e-3, mu_T=1e-3, mu_w=1e-3)
    base.update(kw)
    return ExperimentConfig(**base)


class TestOutputSinr:
    def test_array_gain(self):
        sc = ScenarioConfig(m=64, doas=(90.0,), powers=(1.0,), noise_power=1.0)
        lin, db = output_sinr(steering_vector(90.0, 64), sc)
        assert lin == pytest.approx(64.0, rel=1e-12)
        assert db == pytest.approx(18.06, abs=0.005)

    def test_orthogonal_weight_hits_floor(self):
        sc = ScenarioConfig(m=4, doas=(90.0,), powers=(1.0,), noise_power=1.0)
        w = np.array([1, -1, 0, 0], dtype=complex)   # a0 = ones
        lin, db = output_sinr(w, sc)
        assert lin < 1e-30 and db == -100.0

    def test_matches_direct_ratio(self):
        rng = np.random.default_rng(0)
        sc = ScenarioConfig(m=6, doas=(90.0, 35.0, 140.0), powers=(2.0, 5.0, 7.0),
                            noise_power=0.4)
        w = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        a = [steering_vector(t, 6) for t in sc.doas]
        sig = 2.0 * abs(np.vdot(w, a[0])) ** 2
        interf = 5.0 * abs(np.vdot(w, a[1])) ** 2 + 7.0 * abs(np.vdot(w, a[2])) ** 2
        noise = 0.4 * np.vdot(w, w).real
        lin, db = output_sinr(w, sc)
        assert lin == pytest.approx(sig / (interf + noise), rel=1e-12)
        assert db == pytest.approx(10 * np.log10(sig / (interf + noise)), rel=1e-12)

    def test_broken_weight(self):
        sc = ScenarioConfig(m=2, doas=(90.0,), powers=(1.0,), noise_power=1.0)
        with pytest.raises(NumericalError):
            output_sinr(np.ones(2), sc, R_in=-np.eye(2))
        with pytest.raises(ValueError):
            output_sinr(np.zeros(2), sc)


class TestConfig:
    def test_empty_input_gives_default_scenario(self):
        cfg = parse_config("")
        assert (cfg.m, cfg.q, cfg.snr_db, cfg.inr_db, cfg.rank) == (64, 25, 10.0, 30.0, 5)
        assert (cfg.alpha, cfg.beta, cfg.snapshots, cfg.runs) == (22.0, 0.99, 1000, 100)
        assert cfg.bound_mode == "pdb" and cfg.delta_fixed == 1.0

    def test_flags_override_file(self):
        cfg = parse_config("run.runs = 5\nrun.snapshots = 20\n",
                           {"run.runs": "100", "run.snapshots": "1000"})
        assert cfg.runs == 100 and cfg.snapshots == 1000

    def test_file_values_and_comments(self, tmp_path):
        p = tmp_path / "exp.cfg"
        p.write_text("# fig 1\nscenario.m = 16  # small\nscenario.q=4\nbound.mode = fixed\n"
                     "jio.normalized_projector = false\nrun.algorithms = jio-sm-sg, oracle\n",
                     encoding="utf-8")
        cfg = load_config(p)
        assert cfg.m == 16 and cfg.q == 4 and cfg.bound_mode == "fixed"
        assert cfg.normalized_projector is False
        assert cfg.algorithms == ("jio-sm-sg", "oracle")

    def test_alpha_must_exceed_one(self):
        with pytest.raises(ConfigurationError, match=r"bound\.alpha.*> 1"):
            parse_config("bound.alpha = 0.5")

    @pytest.mark.parametrize("text,key", [
        ("run.runs = many", "run.runs"),
        ("run.runs = 0", "run.runs"),
        ("bound.beta = 2", "bound.beta"),
        ("run.algorithms = jio-sm-sg,mswf", "run.algorithms"),
        ("scenario.q = 100", "scenario.q"),
        ("noise.mode = guess", "noise.mode"),
    ])
    def test_bad_values_name_the_key(self, text, key):
        with pytest.raises(ConfigurationError, match=key.replace(".", r"\.")):
            parse_config(text)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown config key"):
            parse_config("bound.gamma = 3")

    def test_missing_equals(self):
        with pytest.raises(ConfigurationError, match="line 2"):
            parse_config("run.runs = 3\nrun.snapshots\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")

    def test_spec_kinds(self):
        with pytest.raises(ConfigurationError):
            AlgorithmSpec("avf")
        assert AlgorithmSpec("fr-sg").label == "fr-sg"


class TestRunner:
    def test_cumulative_fraction_is_exact_ratio(self):
        cfg = small_cfg(runs=1, algorithms=("jio-sm-sg", "fr-sm-sg"))
        res = run_single(cfg, 0)
        exp = run_experiment(cfg)
        for j in range(2):
            ratio = np.cumsum(res.flags[j]) / np.arange(1, cfg.snapshots + 1)
            np.testing.assert_array_equal(exp.cum_update_fraction[j], ratio)
            assert np.all((0 <= ratio) & (ratio <= 1))

    def test_oracle_dominates_every_snapshot(self):
        cfg = small_cfg(runs=4, snapshots=200,
                        algorithms=("jio-sm-sg", "jio-sg", "fr-sg", "fr-sm-sg", "oracle"))
        res = run_experiment(cfg, keep_runs=True)
        for run in res.per_run:
            assert np.all(run.sinr <= run.oracle_sinr * (1 + 1e-9))
            np.testing.assert_array_equal(run.sinr[-1], run.oracle_sinr)

    def test_all_algorithms_consume_identical_stream(self, monkeypatch):
        seen = {}
        originals = {}
        for cls in (beamformers.FullRankSG, beamformers.FullRankSMSG, beamformers.JioSG,
                    beamformers.JioSMSG):
            originals[cls] = cls.iterate

            def spy(self, x, noise_obs=None, _orig=originals[cls], _name=cls.name):
                seen.setdefault(_name, hashlib.sha256()).update(np.asarray(x).tobytes())
                return _orig(self, x, noise_obs)

            monkeypatch.setattr(cls, "iterate", spy)
        run_single(small_cfg(algorithms=("jio-sm-sg", "jio-sg", "fr-sg", "fr-sm-sg")), 0)
        digests = {k: h.hexdigest() for k, h in seen.items()}
        assert len(digests) == 4
        assert len(set(digests.values())) == 1

    def test_run_replayable_in_isolation(self):
        cfg = small_cfg()
        full = run_experiment(cfg, keep_runs=True)
        alone = run_single(cfg, 2)
        np.testing.assert_array_equal(full.per_run[2].sinr, alone.sinr)

    def test_different_seeds_differ(self):
        a = run_experiment(small_cfg(seed=1)).mean_sinr
        b = run_experiment(small_cfg(seed=2)).mean_sinr
        assert not np.array_equal(a, b)

    def test_random_layout_changes_per_run(self):
        cfg = small_cfg(doa_layout="random", algorithms=("oracle",))
        res = run_experiment(cfg, keep_runs=True)
        oracles = {r.oracle_sinr for r in res.per_run}
        assert len(oracles) == cfg.runs

    def test_parallel_matches_serial(self):
        cfg = small_cfg(runs=6)
        serial = csv_text(run_experiment(cfg))
        parallel = csv_text(run_experiment(cfg.replace(workers=3)))
        assert serial == parallel

    def test_sweep_specs(self):
        specs = bound_sweep_specs([0.7, 1.0], "both")
        assert [s.label for s in specs] == [
            "fr-sm-sg[delta=0.7]", "fr-sm-sg[delta=1]", "fr-sm-sg[pdb]",
            "jio-sm-sg[delta=0.7]", "jio-sm-sg[delta=1]", "jio-sm-sg[pdb]"]
        cfg = small_cfg(algorithms=(), extra=specs[:3])
        res = run_experiment(cfg)
        assert res.labels == tuple(s.label for s in specs[:3])

    def test_default_scenario_builds(self):
        sc = ExperimentConfig().scenario()
        assert sc.m == 64 and sc.q == 25
        assert sc == build_scenario()


def _fake_result(labels, n):
    rng = np.random.default_rng(0)
    return ExperimentResult(labels=tuple(labels), mean_sinr=rng.uniform(0.5, 50, (len(labels), n)),
                            cum_update_fraction=rng.uniform(0, 1, (len(labels), n)), runs=1)


class TestCsv:
    def test_one_algorithm_one_snapshot(self):
        lines = csv_text(_fake_result(["fr-sg"], 1)).splitlines()
        assert lines[0] == "snapshot,algorithm,mean_sinr_db,cum_update_fraction"
        assert len(lines) == 2

    def test_two_algorithms_two_snapshots_ordering(self):
        lines = csv_text(_fake_result(["b", "a"], 2)).splitlines()[1:]
        assert [ln.split(",")[:2] for ln in lines] == [["1", "b"], ["1", "a"], ["2", "b"], ["2", "a"]]

    def test_six_significant_digits(self):
        res = ExperimentResult(labels=("x",), mean_sinr=np.array([[10 ** 1.234567891]]),
                               cum_update_fraction=np.array([[1 / 3]]), runs=1)
        assert csv_text(res).splitlines()[1] == "1,x,12.3457,0.333333"

    def test_golden_file(self, tmp_path):
        cfg = ExperimentConfig(runs=1, snapshots=3, seed=7)
        out = tmp_path / "g.csv"
        write_csv(run_experiment(cfg), out)
        assert out.read_bytes() == (DATA / "golden_k1_n3_seed7.csv").read_bytes()

    def test_io_error_names_path(self, tmp_path):
        bad = tmp_path / "missing" / "x.csv"
        with pytest.raises(OSError, match="missing"):
            write_csv(_fake_result(["a"], 2), bad)


class TestPlot:
    def test_writes_svg(self, tmp_path):
        p = tmp_path / "c.svg"
        emit_plot(_fake_result(["jio-sm-sg", "fr-sg"], 50), p)
        text = p.read_text(encoding="utf-8")
        assert text.lstrip().startswith("<?xml") and "<svg" in text
        assert "jio-sm-sg" in text and "fr-sg" in text

    def test_single_point(self, tmp_path):
        p = tmp_path / "one.svg"
        emit_plot(_fake_result(["a"], 1), p)
        assert p.stat().st_size > 0

    def test_pure_function_of_data(self, tmp_path):
        res = _fake_result(["a", "b"], 20)
        emit_plot(res, tmp_path / "1.svg")
        emit_plot(res, tmp_path / "2.svg")
        assert (tmp_path / "1.svg").read_bytes() == (tmp_path / "2.svg").read_bytes()

    def test_empty_after_filter(self, tmp_path):
        with pytest.raises(ValueError):
            emit_plot(_fake_result(["a"], 5), tmp_path / "x.svg", labels=["zzz"])
