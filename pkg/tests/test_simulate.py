"""Slot simulator: determinism, exact degenerate paths, agreement with analytics."""

import numpy as np
import pytest

from csma_game.metrics import aoi_node, inter_update_moments, per_node_throughput
from csma_game.model import (
    DSRC,
    WIFI,
    AccessVector,
    NetworkConfig,
    SlotLengths,
    StrategyPair,
    joint_idle_prob,
    success_prob_total,
)
from csma_game.simulate import NoProgressError, SimConfig, SimResult, run_simulation

S001 = SlotLengths.from_beta(0.001)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(horizon_slots=0, seed=1)
    with pytest.raises(ValueError):
        SimConfig(horizon_slots=100, seed=1, warmup_slots=100)
    assert SimConfig(horizon_slots=500, seed=1).resolved_warmup == 5


def test_seed_determinism():
    v = AccessVector((0.2, 0.5), (DSRC, WIFI))
    cfg = SimConfig(horizon_slots=30_000, seed=99)
    a = run_simulation(v, S001, cfg)
    b = run_simulation(v, S001, cfg)
    for field in ("age", "throughput", "inter_update_mean", "inter_update_sq_mean",
                  "age_se", "throughput_se"):
        assert np.array_equal(getattr(a, field), getattr(b, field))
    assert (a.slots_idle, a.slots_success, a.slots_collision) == (
        b.slots_idle, b.slots_success, b.slots_collision)
    c = run_simulation(v, S001, SimConfig(horizon_slots=30_000, seed=100))
    assert not np.array_equal(a.age, c.age)


def test_deterministic_always_transmitting_node():
    # cumulative-time rounding over 1e5 slots leaves ~1e-12 relative noise
    v = AccessVector((1.0,), (DSRC,))
    res = run_simulation(v, S001, SimConfig(horizon_slots=100_000, seed=3))
    assert res.age[0] == pytest.approx(1.5 * 1.001, rel=1e-9)
    assert res.age_se[0] == pytest.approx(0.0, abs=1e-9)
    assert res.throughput[0] == pytest.approx(1.0, rel=1e-9)
    assert res.inter_update_mean[0] == pytest.approx(1.001, rel=1e-9)
    assert res.inter_update_sq_mean[0] == pytest.approx(1.001**2, rel=1e-9)
    assert res.slots_success == res.slots_measured


def test_no_progress_error():
    v = AccessVector((0.0, 0.0), (DSRC, WIFI))
    with pytest.raises(NoProgressError):
        run_simulation(v, S001, SimConfig(horizon_slots=1000, seed=0))


def test_slot_counts_partition_the_window():
    v = AccessVector((0.3, 0.3, 0.3), (DSRC, DSRC, WIFI))
    res = run_simulation(v, S001, SimConfig(horizon_slots=50_000, seed=11))
    assert res.slots_idle + res.slots_success + res.slots_collision == res.slots_measured
    assert res.slots_measured == 50_000 - 500
    assert res.throughput.sum() <= 1.0 + 1e-12


def test_slot_type_frequencies_match_kernels():
    v = AccessVector((0.25, 0.4, 0.1), (DSRC, WIFI, WIFI))
    res = run_simulation(v, S001, SimConfig(horizon_slots=300_000, seed=21))
    p_idle = joint_idle_prob(v)
    p_succ = success_prob_total(v)
    targets = (p_idle, p_succ, 1.0 - p_idle - p_succ)
    for frac, se, target in zip(res.slot_fractions(), res.slot_fraction_se(), targets):
        assert abs(frac - target) <= 3.0 * se


def test_estimates_match_analytics_within_three_standard_errors():
    v = AccessVector((0.15, 0.4, 0.3), (DSRC, DSRC, WIFI))
    res = run_simulation(v, S001, SimConfig(horizon_slots=400_000, seed=13))
    for i in range(3):
        m = inter_update_moments(v, S001, i)
        assert abs(res.age[i] - aoi_node(v, S001, i)) <= 3.0 * res.age_se[i]
        assert abs(res.throughput[i] - per_node_throughput(v, S001, i)) <= 3.0 * res.throughput_se[i]
        assert abs(res.inter_update_mean[i] - m.first) <= 3.0 * res.inter_update_mean_se[i]
        assert abs(res.inter_update_sq_mean[i] - m.second) <= 3.0 * res.inter_update_sq_mean_se[i]


def test_long_horizon_lone_network_age():
    # lone two-node network at its optimal access probability
    cfg = NetworkConfig(2, 0, 0.001)
    v = AccessVector.homogeneous(cfg, StrategyPair(0.0268, 0.0))
    res = run_simulation(v, S001, SimConfig(horizon_slots=10_000_000, seed=23))
    for i in range(2):
        assert abs(res.age[i] - 2.5576) <= 3.0 * res.age_se[i]


def test_silent_node_reports_nan_moments():
    v = AccessVector((0.0, 0.5), (DSRC, WIFI))
    res = run_simulation(v, S001, SimConfig(horizon_slots=20_000, seed=2))
    assert np.isnan(res.inter_update_mean[0])
    assert res.update_counts[0] == 0
    assert res.throughput[0] == 0.0


def test_homogeneous_vector_round_trip():
    config = NetworkConfig(2, 1, 0.001)
    v = AccessVector.homogeneous(config, StrategyPair(0.3, 0.2))
    res = run_simulation(v, S001, SimConfig(horizon_slots=10_000, seed=8))
    assert isinstance(res, SimResult)
    assert res.age.shape == (3,)
