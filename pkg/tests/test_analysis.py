from __future__ import annotations

import numpy as np
import pytest

from memwalk import (
    ValidationError,
    carried_coin_shift,
    directional_partition,
    equivalence_initial_terms,
    evolve,
    hadamard_coin,
    recycled_coin_shift,
    reflect_transmit_partition,
    state_from_terms,
)
from memwalk.analysis import (
    PositionDistribution,
    alpha_distribution,
    alpha_from_beta,
    beta_distribution,
    beta_from_walk_state,
    beta_recurrence_step,
    check_beta_constraint,
    classify_scaling,
    count_distinct_dicycle_carried_walks,
    equivalence_initial_beta,
    late_origin_average,
    marginal_history,
    max_distribution_difference,
    occupancy_rate,
    origin_probability_series,
    partition_center_key,
    position_marginal,
    qwom_initial_alpha,
    qwom_step,
    total_variation,
    variance,
)
from memwalk.analysis import BetaField


def dist(positions, probs, time=0):
    return PositionDistribution(np.array(positions), np.array(probs, dtype=float), time)


def test_distribution_prob_lookup():
    d = dist([-1, 0, 1], [0.25, 0.5, 0.25])
    assert d.prob(0) == 0.5
    assert d.prob(7) == 0.0
    assert d.as_dict() == {-1: 0.25, 0: 0.5, 1: 0.25}


def test_distribution_shape_guard():
    with pytest.raises(ValidationError):
        dist([0, 1], [1.0])


def test_position_marginal_sums_register(host_d1):
    terms = [((-1, 0), 1, 0.5), ((-1, 0), -1, 0.5), ((1, 0), 1, np.sqrt(0.5))]
    d = position_marginal(state_from_terms(host_d1, terms))
    assert d.prob(0) == pytest.approx(1.0)
    assert variance(d) == pytest.approx(0.0)


def test_variance_exact():
    d = dist([-2, 0, 2], [0.25, 0.5, 0.25])
    assert variance(d) == pytest.approx(2.0)
    shifted = dist([0, 1], [0.5, 0.5])
    assert variance(shifted) == pytest.approx(0.25)


def test_occupancy_rate_counts_loaded_sites():
    d = dist([-2, -1, 0, 1, 2], [0.4, 0.1, 0.0, 0.1, 0.4])
    assert occupancy_rate(d, 5) == pytest.approx(2 / 5)
    assert occupancy_rate(d, 10) == pytest.approx(4 / 10)
    with pytest.raises(ValidationError):
        occupancy_rate(d, 0)


def test_origin_series_and_late_average():
    dists = [dist([-1, 0, 1], [0.0, t / 10, 1 - t / 10], time=t) for t in range(11)]
    series = origin_probability_series(dists)
    assert series[3] == pytest.approx(0.3)
    assert late_origin_average(dists, (3, 7)) == pytest.approx(0.5)  # t = 4, 6
    with pytest.raises(ValidationError):
        late_origin_average(dists, (3, 3))


def test_distribution_comparison_aligns_positions():
    a = dist([-1, 0, 1], [0.2, 0.5, 0.3])
    b = dist([0, 1, 2], [0.5, 0.3, 0.2])
    assert max_distribution_difference(a, b) == pytest.approx(0.2)
    assert total_variation(a, b) == pytest.approx(0.2)
    assert total_variation(a, a) == 0.0


def test_classify_scaling_quadratic():
    t = np.arange(20, 81, dtype=float)
    fit = classify_scaling(t, 0.3 * t**2)
    assert fit.verdict == "ballistic"
    assert fit.k2 == pytest.approx(0.3, abs=1e-9)
    assert fit.residual < 1e-8


def test_classify_scaling_linear():
    t = np.arange(20, 81, dtype=float)
    fit = classify_scaling(t, 2.0 * t + 5.0)
    assert fit.verdict == "diffusive"
    assert fit.k1 == pytest.approx(2.0, abs=1e-9)


def test_classify_scaling_needs_long_series():
    t = np.arange(10, 30, dtype=float)
    with pytest.raises(ValidationError):
        classify_scaling(t, t**2)
    with pytest.raises(ValidationError):
        classify_scaling(np.arange(20, 81), np.arange(10))


def test_equivalence_beta_start():
    b = equivalence_initial_beta(9)
    assert b.amps[0, 0, 0] == 0.5
    assert b.amps[0, 1, 0] == -0.5
    assert check_beta_constraint(b) == 0.0
    assert beta_distribution(b).prob(0) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        equivalence_initial_beta(8)


def test_beta_constraint_detects_perturbation():
    b = equivalence_initial_beta(9)
    amps = b.amps.copy()
    amps[2, 0, 0] += 0.1
    assert check_beta_constraint(BetaField(amps, 0)) >= 0.05


def test_beta_recurrence_matches_engine(host_d1):
    p = reflect_transmit_partition(host_d1)
    state = state_from_terms(host_d1, equivalence_initial_terms(host_d1))
    history = evolve(p, carried_coin_shift(p), hadamard_coin(), state, 20)
    field = equivalence_initial_beta(host_d1.base_n)
    for s in history:
        packed = beta_from_walk_state(s)
        assert np.abs(packed.amps - field.amps).max() < 1e-12
        assert check_beta_constraint(field) < 1e-12
        field = beta_recurrence_step(field)


def test_alpha_reconstruction_tracks_memoryless_walk():
    field = equivalence_initial_beta(65)
    alpha = qwom_initial_alpha(65)
    for _ in range(21):
        rebuilt = alpha_from_beta(field)
        assert np.abs(rebuilt.amps - alpha.amps).max() < 1e-10
        assert (
            total_variation(alpha_distribution(rebuilt), alpha_distribution(alpha))
            < 1e-10
        )
        field = beta_recurrence_step(field)
        alpha = qwom_step(alpha)


def test_alpha_map_rejects_off_sublattice():
    amps = np.zeros((9, 2, 2), dtype=np.complex128)
    amps[0, 0, 0] = 1.0  # x = 0 occupied at odd time
    with pytest.raises(ValidationError):
        alpha_from_beta(BetaField(amps, 1))


def test_qwom_step_preserves_norm():
    a = qwom_initial_alpha(33)
    for _ in range(15):
        a = qwom_step(a)
    assert (np.abs(a.amps) ** 2).sum() == pytest.approx(1.0)


def test_walk_respects_parity(host_d1):
    p = directional_partition(host_d1)
    state = state_from_terms(host_d1, [((-1, 0), 1, 1.0)])
    history = evolve(p, recycled_coin_shift(p), hadamard_coin(), state, 15)
    for t, d in enumerate(marginal_history(history)):
        occupied = d.positions[d.probs > 1e-15]
        assert ((occupied + t) % 2 == 0).all()


def test_partition_center_key(host_d1):
    assert partition_center_key(reflect_transmit_partition(host_d1)) == (1, 1, 1)
    assert partition_center_key(directional_partition(host_d1)) == (0, 0, 0)


def test_dicycle_census_small(host_d1):
    report = count_distinct_dicycle_carried_walks(host_d1, list(range(12)), 30)
    assert report.n_classes <= 8
    assert report.keys_consistent
    assert set(report.class_of) == set(range(12))
    assert all(len(k) == 3 for k in report.key_of.values())
