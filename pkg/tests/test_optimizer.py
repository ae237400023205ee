import numpy as np
import pytest

from hqwopt.errors import ParameterError
from hqwopt.graphs import make_graph, max_cut_value, random_connected_graph
from hqwopt.hamiltonian import maxcut_hamiltonian, mis_hamiltonian
from hqwopt.optimizer import (
    OptimizerConfig,
    adam_step,
    aggregate,
    approximation_gap,
    classify_pair,
    gradient,
    mix_seed,
    objective_value,
    optimize_run,
    relative_improvement,
)


class TestSeedMixing:
    def test_deterministic(self):
        assert mix_seed(1, 2, "qaoa", 3) == mix_seed(1, 2, "qaoa", 3)

    def test_streams_differ(self):
        seeds = {
            mix_seed(1, 2, "qaoa", 3),
            mix_seed(1, 2, "hqw", 3),
            mix_seed(1, 2, "qaoa", 4),
            mix_seed(1, 3, "qaoa", 3),
            mix_seed(2, 2, "qaoa", 3),
        }
        assert len(seeds) == 5

    def test_u64_range(self):
        s = mix_seed(2**63, 10**6, "hqw", 999)
        assert 0 <= s < 2**64


class TestConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert cfg.learning_rate == 0.1
        assert cfg.steps == 300
        assert cfg.restarts == 100
        assert cfg.init_low == 0.0
        assert cfg.init_high == pytest.approx(2 * np.pi)

    def test_validation(self):
        with pytest.raises(ParameterError):
            OptimizerConfig(steps=0)
        with pytest.raises(ParameterError):
            OptimizerConfig(init_low=1.0, init_high=1.0)


class TestAdam:
    def test_scalar_quadratic_converges(self):
        cfg = OptimizerConfig()
        x = np.array([3.0])
        state = None
        for t in range(1, 301):
            g = 2.0 * x  # d/dx of x^2
            x, state = adam_step(x, g, state, t, cfg)
        assert abs(2.0 * x[0]) < 1e-6

    def test_bounded_step(self):
        cfg = OptimizerConfig()
        x = np.array([0.0])
        state = None
        for t in range(1, 50):
            prev = x.copy()
            x, state = adam_step(x, np.array([1e9]), state, t, cfg)
            assert abs(x[0] - prev[0]) <= cfg.learning_rate * 1.01


class TestGradient:
    @pytest.mark.parametrize("kind,nper", [("qaoa", 2), ("hqw", 5)])
    def test_matches_central_differences(self, kind, nper):
        g = random_connected_graph(5, 6, 9, 3)
        diag, _ = maxcut_hamiltonian(g)
        rng = np.random.default_rng(9)
        for _ in range(5):
            x = rng.uniform(0, 2 * np.pi, nper * 2)
            grad = gradient(kind, x, diag.energies, 5, -1.0)
            h = 1e-6
            fd = np.zeros_like(x)
            for i in range(len(x)):
                xp, xm = x.copy(), x.copy()
                xp[i] += h
                xm[i] -= h
                fd[i] = (
                    objective_value(kind, xp, diag.energies, 5, -1.0)
                    - objective_value(kind, xm, diag.energies, 5, -1.0)
                ) / (2 * h)
            assert np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-9) < 1e-5

    def test_mis_sign(self):
        g = make_graph(3, [(0, 1), (1, 2)])
        diag = mis_hamiltonian(g, 1.0)
        x = np.array([0.3, 0.7])
        v_plus = objective_value("qaoa", x, diag.energies, 3, 1.0)
        v_minus = objective_value("qaoa", x, diag.energies, 3, -1.0)
        assert v_plus == pytest.approx(-v_minus)


class TestOptimizeRun:
    def setup_method(self):
        self.g = random_connected_graph(6, 8, 11, 2)
        self.diag, _ = maxcut_hamiltonian(self.g)
        self.opt = max_cut_value(self.g)

    def test_deterministic(self):
        cfg = OptimizerConfig(restarts=2, steps=50, base_seed=3)
        a = optimize_run("qaoa", "maxcut", self.diag.energies, 6, 2, cfg, 0, 0, self.opt)
        b = optimize_run("qaoa", "maxcut", self.diag.energies, 6, 2, cfg, 0, 0, self.opt)
        assert a.final_energy == b.final_energy
        assert a.seed == b.seed
        np.testing.assert_array_equal(a.final_params, b.final_params)

    def test_restarts_differ(self):
        cfg = OptimizerConfig(restarts=2, steps=50, base_seed=3)
        a = optimize_run("qaoa", "maxcut", self.diag.energies, 6, 2, cfg, 0, 0, self.opt)
        b = optimize_run("qaoa", "maxcut", self.diag.energies, 6, 2, cfg, 0, 1, self.opt)
        assert a.final_energy != b.final_energy

    def test_energy_decreases_for_most_restarts(self):
        cfg = OptimizerConfig(restarts=20, steps=100, base_seed=5)
        improved = 0
        for r in range(20):
            rec = optimize_run(
                "hqw", "maxcut", self.diag.energies, 6, 2, cfg, 0, r, self.opt,
                keep_trace=True,
            )
            if rec.final_energy <= rec.energy_trace[0]:
                improved += 1
        assert improved >= 19  # at least 95 percent

    def test_best_not_worse_than_final(self):
        cfg = OptimizerConfig(restarts=1, steps=80, base_seed=1)
        rec = optimize_run("hqw", "maxcut", self.diag.energies, 6, 2, cfg, 0, 0, self.opt)
        assert rec.best_energy <= rec.final_energy + 1e-12

    def test_mis_gap_is_nan(self):
        diag = mis_hamiltonian(self.g, 1.0)
        cfg = OptimizerConfig(restarts=1, steps=30, base_seed=1)
        rec = optimize_run("qaoa", "mis", diag.energies, 6, 1, cfg, 0, 0)
        assert np.isnan(rec.one_minus_r)

    def test_unknown_problem(self):
        cfg = OptimizerConfig(restarts=1, steps=10)
        with pytest.raises(ParameterError):
            optimize_run("qaoa", "tsp", self.diag.energies, 6, 1, cfg, 0, 0)


class TestMetrics:
    def test_gap(self):
        # final energy -3 on an optimum-4 instance: ratio 0.75, gap 0.25
        assert approximation_gap(-3.0, 4.0, "maxcut") == pytest.approx(0.25)

    def test_gap_requires_maxcut(self):
        with pytest.raises(ParameterError):
            approximation_gap(-3.0, 4.0, "mis")

    def test_aggregate(self):
        mean, best, std = aggregate([0.1, 0.3])
        assert mean == pytest.approx(0.2)
        assert best == pytest.approx(0.1)
        assert std == pytest.approx(np.std([0.1, 0.3], ddof=1))

    def test_aggregate_single_value(self):
        mean, best, std = aggregate([0.4])
        assert (mean, best, std) == (0.4, 0.4, 0.0)

    def test_relative_improvement(self):
        assert relative_improvement(0.2, 0.1) == pytest.approx(50.0)
        assert relative_improvement(0.0, 0.1) is None

    def test_classify_pair(self):
        assert classify_pair(0.2, 0.1) == "hqw"
        assert classify_pair(0.1, 0.2) == "qaoa"
        assert classify_pair(0.1, 0.1 + 5e-7) == "tie"
