import io

import numpy as np
import pytest

from fpopt import (
    CoefficientPair,
    Covariance,
    InvalidInterval,
    MixedEquilibria,
    NotApplicable2D,
    RateTooLarge,
    Schedule,
    best_constant_2d,
    compare_schedules,
    construct_optimal,
    expm,
    initial_decay_rate,
    make_pair,
    max_initial_decay,
    norm_curve,
    propagator,
    sharp_constant,
    spectral_gap,
    spectral_norm,
    tangency_time,
    validate_pair,
)
from fpopt.benchmarks import case_pairs, rotating_pair, split_schedule, symmetric_pair
from helpers import integrate_flow, random_admissible_pair, random_covariance


# ---------------------------------------------------------------- schedules

def test_schedule_validation():
    pair = rotating_pair(7.0)
    with pytest.raises(ValueError):
        Schedule([pair, pair], [])
    with pytest.raises(ValueError):
        Schedule([pair, pair], [-0.1])
    other = symmetric_pair(eps=0.1)
    with pytest.raises(MixedEquilibria):
        Schedule([pair, other], [0.1])


def test_schedule_segment_lookup():
    schedule = split_schedule(rotating_pair(11.0), 0.1)
    assert schedule.segment_index(0.0) == 0
    assert schedule.segment_index(0.0999) == 0
    assert schedule.segment_index(0.1) == 1
    assert schedule.breakpoints == (0.0, 0.1)


# --------------------------------------------------------------- propagator

def test_propagator_empty_interval_identity():
    schedule = Schedule.constant(rotating_pair(7.0))
    assert np.array_equal(propagator(schedule, 1.3, 1.3), np.eye(2))


def test_propagator_constant_schedule_semigroup():
    pair = rotating_pair(7.0)
    t = 0.8
    direct = propagator(pair, 0.0, t)
    assert np.abs(direct - expm(pair.whitened_drift, t)).max() <= 1e-14
    composed = propagator(pair, 0.4, t) @ propagator(pair, 0.0, 0.4)
    assert np.linalg.norm(direct - composed) <= 1e-10


def test_propagator_identical_pieces_reduce_to_constant():
    pair = rotating_pair(7.0)
    schedule = Schedule([pair, pair], [0.1])
    for t in (0.05, 0.1, 0.31, 2.0):
        expected = expm(pair.whitened_drift, t)
        assert np.linalg.norm(propagator(schedule, 0.0, t) - expected) <= 1e-12


def test_propagator_composition_across_breakpoints():
    rng = np.random.default_rng(41)
    schedule = split_schedule(rotating_pair(11.0), 0.1)
    for _ in range(10):
        t0, t1, t2 = np.sort(rng.uniform(0.0, 0.5, size=3))
        full = propagator(schedule, t0, t2)
        split = propagator(schedule, t1, t2) @ propagator(schedule, t0, t1)
        assert np.linalg.norm(full - split) <= 1e-10


def test_propagator_matches_ode_oracle_across_switch():
    schedule = split_schedule(symmetric_pair(), 0.1)
    for t in (0.05, 0.1, 0.6, 1.7):
        assert np.abs(propagator(schedule, 0.0, t) - integrate_flow(schedule, t)).max() <= 1e-8


def test_propagator_rejects_reversed_interval():
    with pytest.raises(InvalidInterval):
        propagator(Schedule.constant(rotating_pair(7.0)), 1.0, 0.5)


def test_propagator_contraction_bound():
    rng = np.random.default_rng(42)
    cov = random_covariance(rng, 3)
    pairs = [random_admissible_pair(rng, cov) for _ in range(3)]
    schedule = Schedule(pairs, [0.3, 0.7])
    for _ in range(10):
        t1, t2 = np.sort(rng.uniform(0.0, 3.0, size=2))
        assert spectral_norm(propagator(schedule, t1, t2)) <= 1.0 + 1e-12


# ---------------------------------------------------------------- norm curve

def test_norm_curve_symmetric_pair_explicit():
    cov = Covariance(np.array([1.0, 2.0]))
    pair = CoefficientPair(cov, cov.inv, np.eye(2))
    curve = norm_curve(pair, 4.0, 200, rate=0.5)
    assert curve.values[0] == 1.0
    assert np.abs(curve.values - np.exp(-0.5 * curve.times)).max() <= 1e-12
    assert curve.sharp_constant == pytest.approx(1.0, abs=1e-9)


def test_norm_curve_values_in_unit_interval():
    curve = norm_curve(split_schedule(rotating_pair(11.0), 0.1), 6.0, 400)
    assert np.all(curve.values <= 1.0 + 1e-12)
    assert np.all(curve.values > 0.0)
    assert curve.values[0] == 1.0


def test_norm_curve_initial_slope_matches_diffusion_floor():
    # symmetric start: slope -eps; balanced start: slope -2 eps/(1+eps)
    for pair, slope in [(symmetric_pair(), 0.05),
                        (case_pairs()["fp3"], 0.1 / 1.05)]:
        h = 1e-6
        drop = (1.0 - spectral_norm(expm(pair.whitened_drift, h))) / h
        assert drop == pytest.approx(slope, rel=1e-4)
        assert initial_decay_rate(pair) == pytest.approx(slope, rel=1e-12)


def test_norm_curve_stays_below_envelope():
    pair = rotating_pair(7.0)
    curve = norm_curve(pair, 8.0, 600, rate=1.0)
    envelope = curve.envelope
    assert np.all(curve.values <= envelope + 1e-10)
    # the bound is attained on the grid (tangency points are inserted)
    assert np.min(envelope / curve.values) <= 1.0 + 1e-6


def test_norm_curve_csv_format():
    curve = norm_curve(rotating_pair(7.0), 1.0, 5, rate=1.0)
    buffer = io.StringIO()
    curve.write_csv(buffer)
    lines = buffer.getvalue().strip().split("\n")
    assert lines[0] == "t,norm,envelope"
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0
    assert float(first[2]) == pytest.approx(curve.sharp_constant)


# ------------------------------------------------------------ sharp constant

def test_sharp_constant_of_optimal_pairs_equals_budget():
    cov = Covariance(np.array([20.0, 1.0]))
    for budget in (1.5, 2.0, 3.0):
        cert = construct_optimal(cov, budget)
        measured = sharp_constant(cert.pair, 1.0)
        assert measured == pytest.approx(budget, abs=1e-4)


def test_sharp_constant_symmetric_pair_is_one():
    cov = Covariance(np.array([1.0, 2.0]))
    pair = CoefficientPair(cov, cov.inv, np.eye(2))
    assert sharp_constant(pair, 0.5) == pytest.approx(1.0, abs=1e-9)


def test_sharp_constant_split_schedule_at_tangency():
    fast = rotating_pair(11.0)
    switch = tangency_time(fast, 1.0)
    constant = sharp_constant(split_schedule(fast, switch), 1.0)
    assert constant == pytest.approx(np.sqrt(6.0 / 5.0), abs=1e-3)


def test_sharp_constant_below_budget_across_dimensions():
    # the certificate is an upper bound for every budget and dimension;
    # sharpness is only established in 2D
    rng = np.random.default_rng(45)
    for d in (2, 3, 4):
        cov = random_covariance(rng, d)
        for budget in (1.1, 1.5, 2.0, 3.0):
            cert = construct_optimal(cov, budget)
            assert sharp_constant(cert.pair, cert.rate) <= budget + 1e-6


def test_weighted_curve_touches_high_rotation_limit():
    # at full half-rotations the propagator is an exact scalar decay, so the
    # curve touches exp(-t) from above, periodically
    mu = 7.0
    pair = rotating_pair(mu)
    omega = np.sqrt(mu**2 - 1.0)
    for k in (1, 2, 3):
        t = k * np.pi / omega
        assert np.exp(t) * spectral_norm(expm(pair.whitened_drift, t)) \
            == pytest.approx(1.0, abs=1e-10)


def test_sharp_constant_rejects_unsustainable_rate():
    with pytest.raises(RateTooLarge):
        sharp_constant(rotating_pair(7.0), 3.0)


def test_sharp_constant_rejects_short_horizon():
    with pytest.raises(ValueError):
        sharp_constant(rotating_pair(7.0), 1.0, t_max=5.0)


# ---------------------------------------------------------- 2D closed form

def test_best_constant_2d_rotating_family():
    # alpha = 1/mu, hence c_min = sqrt((mu+1)/(mu-1))
    for mu in (3.0, 7.0, 11.0):
        pair = rotating_pair(mu)
        assert best_constant_2d(pair) == pytest.approx(np.sqrt((mu + 1) / (mu - 1)), rel=1e-12)


def test_best_constant_2d_normal_drift_gives_one():
    cov = Covariance(np.eye(2))
    pair = make_pair(cov, np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert best_constant_2d(pair) == pytest.approx(1.0, abs=1e-12)


def test_best_constant_2d_agrees_with_envelope_supremum():
    cov = Covariance(np.array([20.0, 1.0]))
    cert = construct_optimal(cov, np.sqrt(2.0))
    assert best_constant_2d(cert.pair) == pytest.approx(sharp_constant(cert.pair, 1.0), abs=1e-4)


def test_best_constant_2d_preconditions():
    cov = Covariance(np.array([1.0, 2.0]))
    unequal = CoefficientPair(cov, cov.inv, np.eye(2))  # gaps 0.5 and 1.0
    with pytest.raises(NotApplicable2D):
        best_constant_2d(unequal)
    cov3 = Covariance(np.eye(3))
    with pytest.raises(NotApplicable2D):
        best_constant_2d(CoefficientPair(cov3, np.eye(3), np.eye(3)))


# -------------------------------------------------------- initial decay rate

def test_initial_decay_rate_rank_one_certificate_is_zero():
    cov = Covariance(np.array([1.0, 2.0]))
    cert = construct_optimal(cov, 2.0)
    assert abs(initial_decay_rate(cert.pair)) <= 1e-12


def test_initial_decay_rate_symmetric_pair():
    cov = Covariance(np.array([20.0, 1.0]))
    pair = CoefficientPair(cov, cov.inv, np.eye(2))
    assert initial_decay_rate(pair) == pytest.approx(0.05, rel=1e-12)


def test_initial_decay_rate_finite_difference_oracle():
    rng = np.random.default_rng(43)
    cov = random_covariance(rng, 3)
    pair = random_admissible_pair(rng, cov)
    expected = initial_decay_rate(pair)
    estimates = []
    for h in (1e-3, 5e-4):
        estimates.append((1.0 - spectral_norm(expm(pair.whitened_drift, h))) / h)
    # Richardson extrapolation kills the O(h) error term
    extrapolated = 2.0 * estimates[1] - estimates[0]
    assert extrapolated == pytest.approx(expected, abs=5e-6)


def test_max_initial_decay_closed_form():
    cov = Covariance(np.array([20.0, 1.0]))
    rate, pair = max_initial_decay(cov)
    assert rate == pytest.approx(2.0 / 21.0, abs=1e-15)
    assert np.abs(pair.drift - rate * np.eye(2)).max() <= 1e-15
    assert pair.trace_diffusion == pytest.approx(2.0, abs=1e-12)
    assert validate_pair(pair).passed
    assert initial_decay_rate(pair) == pytest.approx(rate, rel=1e-12)


def test_max_initial_decay_identity_covariance():
    rate, pair = max_initial_decay(Covariance(np.eye(3)))
    assert rate == 1.0
    assert np.array_equal(pair.drift, np.eye(3))
    assert np.array_equal(pair.diffusion, np.eye(3))


def test_max_initial_decay_dominates_random_pairs():
    rng = np.random.default_rng(44)
    cov = Covariance(np.array([20.0, 1.0]))
    bound, _ = max_initial_decay(cov)
    for _ in range(100):
        pair = random_admissible_pair(rng, cov)
        assert initial_decay_rate(pair) <= bound + 1e-9


# -------------------------------------------------------------- tangencies

def test_tangency_time_fast_rotation():
    pair = rotating_pair(11.0)
    t = tangency_time(pair, 1.0)
    assert t == pytest.approx(np.pi / (2.0 * np.sqrt(120.0)), abs=1e-4)
    assert t == pytest.approx(0.1434, abs=1e-3)


def test_tangency_time_faster_rotation_matches_bundled_switch():
    pair = rotating_pair(13.8)
    assert tangency_time(pair, 1.0) == pytest.approx(0.11413, abs=1e-4)


def test_tangency_recurrence_period():
    mu = 11.0
    pair = rotating_pair(mu)
    period = np.pi / np.sqrt(mu**2 - 1.0)
    first = tangency_time(pair, 1.0)
    # oracle: locate the second supremum with a dense local grid search
    centre = first + period
    ts = np.linspace(centre - 0.02, centre + 0.02, 801)
    vals = [np.exp(t) * spectral_norm(expm(pair.whitened_drift, t)) for t in ts]
    second = ts[int(np.argmax(vals))]
    assert second - first == pytest.approx(period, abs=1e-3)


# ---------------------------------------------------------------- rankings

def test_compare_schedules_switching_study():
    pairs = case_pairs()
    labels = ["fp1", "fp2", "fp3", "fp4", "fp5"]
    schedules = [split_schedule(pairs[label], 0.1) for label in labels]
    rows = compare_schedules(schedules, 1.0, labels=labels)
    order = [row.label for row in rows]
    constants = {row.label: row.sharp_constant for row in rows}
    assert order[0] == "fp5"
    assert order[1] == "fp1"
    assert constants["fp1"] == pytest.approx(np.sqrt(4.0 / 3.0), abs=1e-4)
    assert constants["fp5"] < constants["fp1"]
    for slower in ("fp2", "fp3", "fp4"):
        assert constants[slower] > constants["fp1"]


def test_compare_schedules_single_entry():
    schedule = Schedule.constant(rotating_pair(7.0))
    rows = compare_schedules([schedule], 1.0, labels=["only"])
    assert len(rows) == 1
    assert rows[0].label == "only"
    assert rows[0].drift_norms == (pytest.approx(np.sqrt(986.45)),)


def test_compare_schedules_rejects_mixed_equilibria():
    with pytest.raises(MixedEquilibria):
        compare_schedules([Schedule.constant(rotating_pair(7.0)),
                           Schedule.constant(symmetric_pair(eps=0.1))], 1.0)


def test_spectral_gap_of_rotating_pairs():
    assert spectral_gap(rotating_pair(7.0)) == pytest.approx(1.0, abs=1e-10)
