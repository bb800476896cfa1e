from fractions import Fraction

import pytest

from certcap.channel import certify_support, noiseless
from certcap.classify import Regime
from certcap.confgraph import confusability_graph, max_independent_set, strong_power
from certcap.simulate import (SimConfig, SimulationError, identity_code,
                              run_estimation, run_stabilization,
                              run_weak_detection, sample_output, witness_code)
from conftest import diagonal_plant, scalar_plant

F = Fraction


def pentagon_block2_code(pentagon):
    g = confusability_graph(certify_support(pentagon), pentagon.inputs, 5)
    result = max_independent_set(strong_power(g, 2))
    return witness_code(pentagon, result.witness)


class TestBoundedTracking:
    def test_noiseless_binary_sup_bound_exact(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), nl2,
                        Regime("se-nofb"), identity_code(nl2),
                        horizon=2_000, seed=7)
        traj = run_estimation(cfg)
        assert traj.summary["bounded"] is True
        # fixed point of r -> (a r / M) + D is 2/5; transient from r0=1 dominates
        assert F(traj.summary["analytic_bound"]) == 1
        assert F(traj.summary["max_error"]) <= 1
        late = traj.error[-100:]
        assert all(e <= F(2, 5) for e in late)
        assert traj.verify_recursion(cfg)
        assert traj.summary["zero_error_transcript"] is True

    def test_pentagon_witness_code_tracks(self, pentagon):
        code = pentagon_block2_code(pentagon)
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), pentagon,
                        Regime("se-nofb"), code, horizon=600, seed=11)
        traj = run_estimation(cfg)
        assert traj.summary["bounded"] is True
        assert traj.summary["zero_error_transcript"] is True
        assert traj.verify_recursion(cfg)

    def test_error_never_exceeds_radius_with_zero_error_code(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), nl2,
                        Regime("se-nofb"), identity_code(nl2),
                        horizon=400, seed=3)
        traj = run_estimation(cfg)
        assert all(e <= r for e, r in zip(traj.error, traj.radius))


class TestDivergenceSmoke:
    def test_bsc_identity_code_diverges_on_most_seeds(self, bsc14):
        diverged = 0
        for seed in range(20):
            cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), bsc14,
                            Regime("se-nofb"), identity_code(bsc14),
                            horizon=10_000, seed=seed)
            traj = run_estimation(cfg)
            if traj.summary["diverged_at"] is not None:
                diverged += 1
        assert diverged >= 19

    def test_divergence_is_recorded_with_step(self, bsc14):
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), bsc14,
                        Regime("se-nofb"), identity_code(bsc14),
                        horizon=10_000, seed=0)
        traj = run_estimation(cfg)
        t = traj.summary["diverged_at"]
        assert t is not None
        assert traj.error[traj.times.index(t)] > F(1000)


class TestStabilization:
    def test_bounded_state(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2), b=1, disturbance=F(1, 10)), nl2,
                        Regime("stab-fb"), identity_code(nl2),
                        horizon=1_000, seed=3)
        traj = run_stabilization(cfg)
        assert traj.summary["bounded"] is True
        assert traj.verify_recursion(cfg)
        # state stays within a * bound(|x - xhat|) + D
        limit = F(3, 2) * F(traj.summary["analytic_bound"]) + F(1, 10)
        assert all(abs(x[0]) <= limit for x in traj.x)

    def test_undisturbed_state_decays_to_zero(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2), b=1, disturbance=0), nl2,
                        Regime("stab-fb"), identity_code(nl2),
                        horizon=120, seed=5)
        traj = run_stabilization(cfg)
        assert abs(traj.x[-1][0]) < F(1, 10 ** 6)

    def test_diverges_over_noisy_channel(self, bsc14):
        diverged = 0
        for seed in range(10):
            cfg = SimConfig(scalar_plant(F(3, 2), b=1, disturbance=F(1, 10)),
                            bsc14, Regime("stab-fb"), identity_code(bsc14),
                            horizon=10_000, seed=seed)
            traj = run_stabilization(cfg)
            if traj.summary["diverged_at"] is not None:
                diverged += 1
        assert diverged >= 9


class TestWeakDetection:
    def test_scalar_three_halves_ratio(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2)), nl2, Regime("weak"),
                        identity_code(nl2), horizon=80, seed=1)
        traj = run_weak_detection(cfg)
        assert F(traj.summary["decay_ratio"]) == F(3, 4)
        assert traj.summary["boundary"] is False
        radii = [rec.radius_after[0] for rec in traj.transcript]
        for a, b in zip(radii[1:], radii[2:]):
            assert b == a * F(3, 4)

    def test_boundary_rate_is_flagged_not_refused(self, nl2):
        cfg = SimConfig(scalar_plant(2), nl2, Regime("weak"),
                        identity_code(nl2), horizon=40, seed=1)
        traj = run_weak_detection(cfg)
        assert F(traj.summary["decay_ratio"]) == 1
        assert traj.summary["boundary"] is True

    def test_pentagon_block_two_ratio(self, pentagon):
        code = pentagon_block2_code(pentagon)
        cfg = SimConfig(scalar_plant(2), pentagon, Regime("weak"), code,
                        horizon=60, seed=2)
        traj = run_weak_detection(cfg)
        assert F(traj.summary["decay_ratio"]) == F(4, 5)
        assert traj.error[-1] < traj.error[0]

    def test_rejects_disturbed_plant(self, nl2):
        cfg = SimConfig(scalar_plant(2, disturbance=F(1, 10)), nl2,
                        Regime("weak"), identity_code(nl2), horizon=10, seed=0)
        with pytest.raises(SimulationError, match="undisturbed"):
            run_weak_detection(cfg)


class TestRefusalsAndShapes:
    def test_rate_at_growth_refused_for_estimation(self, nl2):
        cfg = SimConfig(scalar_plant(2, disturbance=F(1, 10)), nl2,
                        Regime("se-nofb"), identity_code(nl2),
                        horizon=10, seed=0)
        with pytest.raises(SimulationError, match="contraction impossible"):
            run_estimation(cfg)

    def test_non_diagonal_plant_refused(self, nl2):
        from certcap.linalg import as_matrix
        from certcap.plant import Plant
        plant = Plant(as_matrix([[1, 1], [0, 1]]),
                      disturbance_bound=F(1, 10))
        cfg = SimConfig(plant, nl2, Regime("se-nofb"), identity_code(nl2),
                        horizon=10, seed=0)
        with pytest.raises(SimulationError, match="diagonal"):
            run_estimation(cfg)

    def test_diagonal_allocation(self):
        nl4 = noiseless(4)
        plant = diagonal_plant([F(3, 2), F(3, 2)], disturbance=F(1, 10))
        cfg = SimConfig(plant, nl4, Regime("se-nofb"), identity_code(nl4),
                        horizon=200, seed=9)
        traj = run_estimation(cfg)
        assert traj.summary["cells"] == [2, 2]
        assert traj.summary["bounded"] is True

    def test_x0_outside_box_rejected(self, nl2):
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), nl2,
                        Regime("se-nofb"), identity_code(nl2),
                        horizon=10, seed=0, x0=(F(5),))
        with pytest.raises(SimulationError, match="outside"):
            run_estimation(cfg)


class TestDeterminismAndSampling:
    def test_identical_configs_identical_bytes(self, bsc14):
        cfg = SimConfig(scalar_plant(F(3, 2), disturbance=F(1, 10)), bsc14,
                        Regime("se-nofb"), identity_code(bsc14),
                        horizon=300, seed=5)
        assert run_estimation(cfg).to_csv() == run_estimation(cfg).to_csv()

    def test_sampler_honors_probabilities_exactly(self):
        import random
        row = (F(1, 3), F(1, 6), F(1, 2))
        rng = random.Random(123)
        counts = [0, 0, 0]
        draws = 30_000
        for _ in range(draws):
            counts[sample_output(rng, row)] += 1
        for idx, p in enumerate(row):
            assert abs(counts[idx] / draws - float(p)) < 0.02

    def test_sampler_never_returns_zero_probability_output(self):
        import random
        row = (F(1, 2), F(0), F(1, 2))
        rng = random.Random(9)
        for _ in range(2_000):
            assert sample_output(rng, row) != 1
