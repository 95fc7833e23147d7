"""Tests for the Monte Carlo simulator and fidelity estimation."""

import numpy as np
import pytest

from biverify import (
    build_strategy,
    density_operator,
    depolarize,
    estimate_fidelity,
    exact_pass_rate,
    fidelity,
    make_schmidt_state,
    random_state_at_fidelity,
    run_single_test,
    run_verification,
    target_projector,
    trial_rng,
    two_qubit_state,
    worst_case_state,
)
from biverify.errors import (
    DimensionMismatchError,
    NotHomogeneousError,
    OutOfRangeError,
)
from biverify.simulate import compile_tables


class TestRngStreams:
    def test_same_seed_same_stream_bitwise(self):
        a = trial_rng(42, 3).random(100)
        b = trial_rng(42, 3).random(100)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = trial_rng(42, 0).random(100)
        b = trial_rng(42, 1).random(100)
        assert not np.array_equal(a, b)


class TestRunSingleTest:
    def test_target_always_passes(self):
        rng = trial_rng(7)
        for kind in ("I", "II", "III", "IV", "V", "VI"):
            s = two_qubit_state(np.pi / 6)
            strat = build_strategy(s, kind)
            sigma = density_operator(target_projector(s))
            assert all(run_single_test(strat, sigma, rng) for _ in range(200))

    def test_dimension_mismatch(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "I")
        sigma = density_operator(np.eye(9) / 9)
        with pytest.raises(DimensionMismatchError):
            run_single_test(strat, sigma, trial_rng(0))


class TestRunVerification:
    def test_deterministic_for_equal_seeds(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "II")
        sigma = depolarize(s, 0.1)
        a = run_verification(strat, sigma, 20000, seed=42)
        b = run_verification(strat, sigma, 20000, seed=42)
        assert a == b
        c = run_verification(strat, sigma, 20000, seed=43)
        assert c.n_pass != a.n_pass or c.pass_rate != a.pass_rate

    def test_target_state_passes_every_trial(self):
        s = two_qubit_state(np.pi / 5)
        strat = build_strategy(s, "IV")
        sigma = density_operator(target_projector(s))
        record = run_verification(strat, sigma, 5000, seed=1)
        assert record.n_pass == 5000
        assert record.pass_rate == 1.0
        assert record.std_err == 0.0

    def test_exact_rate_for_maximally_mixed(self):
        """tr(Omega)/4 = (1 + 3p)/4 for the one-way homogeneous strategy."""
        s = two_qubit_state(np.pi / 4)
        strat = build_strategy(s, "V", p=0.5)
        record = run_verification(strat, density_operator(np.eye(4) / 4), 1000, seed=0)
        assert record.exact_rate == pytest.approx(0.625, abs=1e-12)

    def test_worst_case_calibration(self):
        s = two_qubit_state(np.pi / 4)
        strat = build_strategy(s, "I")
        sigma = worst_case_state(s, strat, 0.1)
        record = run_verification(strat, sigma, 10**5, seed=11)
        assert record.exact_rate == pytest.approx(0.95, abs=1e-12)
        assert abs(record.pass_rate - record.exact_rate) <= 3 * record.std_err

    def test_homogeneous_rate_is_affine_in_fidelity(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "VI")
        lam = 0.4 / 3  # depolarizing weight with fidelity exactly 0.9
        sigma = depolarize(s, lam)
        assert fidelity(sigma, s) == pytest.approx(0.9, abs=1e-12)
        record = run_verification(strat, sigma, 1000, seed=5)
        expect = (1 - 1 / np.e) * 0.9 + 1 / np.e
        assert record.exact_rate == pytest.approx(expect, abs=1e-12)

    def test_sampler_targets_the_analyzed_operator(self):
        """The mixture the sampler draws from must reproduce omega exactly."""
        for kind in ("I", "II", "III", "IV", "V", "VI"):
            s = make_schmidt_state([2.0, 1.0, 1.0])
            strat = build_strategy(s, kind)
            mixed = sum(q * t.matrix for q, t in strat.tests)
            assert np.abs(mixed - strat.omega).max() <= 1e-12

    def test_conditional_acceptance_is_one_on_target(self):
        for kind in ("I", "II", "III", "IV", "V", "VI"):
            s = make_schmidt_state([2.0, 1.0, 1.0])
            strat = build_strategy(s, kind)
            sigma = density_operator(target_projector(strat.state))
            _, tables = compile_tables(strat, sigma)
            for probs, accept in tables:
                live = probs > 1e-9
                assert np.abs(accept[live] - 1.0).max() <= 1e-12

    def test_zero_probability_outcomes_never_sampled(self):
        """A source confined to one Schmidt branch never triggers the other
        standard-test outcomes."""
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "I")
        branch = np.zeros((4, 4), dtype=complex)
        branch[0, 0] = 1.0  # |00><00|
        sigma = density_operator(branch)
        record = run_verification(strat, sigma, 4000, seed=3)
        assert record.exact_rate == pytest.approx(
            exact_pass_rate(strat, sigma), abs=1e-12
        )
        assert abs(record.pass_rate - record.exact_rate) <= 4 * record.std_err + 1e-3

    def test_two_way_calibration_on_asymmetric_state(self):
        """The mirrored-direction sampling path must also track the exact
        trace, probed with a source that is not swap-symmetric."""
        rng = np.random.default_rng(77)
        s = make_schmidt_state([2.0, 1.0, 1.0])
        sigma = random_state_at_fidelity(s, 0.9, rng)
        swapped = sigma.matrix.reshape(3, 3, 3, 3).transpose(1, 0, 3, 2).reshape(9, 9)
        assert np.abs(sigma.matrix - swapped).max() > 1e-3
        for kind in ("IV", "VI"):
            strat = build_strategy(s, kind)
            record = run_verification(strat, sigma, 10**5, seed=13)
            assert abs(record.pass_rate - record.exact_rate) <= 4 * record.std_err

    def test_unbiased_over_many_records(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "II")
        sigma = depolarize(s, 0.1)
        n, reps = 10**4, 200
        rates = [
            run_verification(strat, sigma, n, seed=seed).pass_rate
            for seed in range(reps)
        ]
        exact = exact_pass_rate(strat, sigma)
        pooled = np.sqrt(exact * (1 - exact) / (n * reps))
        assert abs(np.mean(rates) - exact) <= 4 * pooled

    def test_trial_count_validated(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "I")
        with pytest.raises(OutOfRangeError):
            run_verification(strat, depolarize(s, 0.1), 0, seed=0)


class TestEstimateFidelity:
    def test_depolarized_estimate(self):
        s = two_qubit_state(np.pi / 4)
        p = float(s.coeffs[0] ** 2 / (1 + s.coeffs[0] ** 2))
        strat = build_strategy(s, "V", p=p)
        sigma = depolarize(s, 0.2)
        out = estimate_fidelity(strat, sigma, 10**5, seed=2)
        assert abs(out.f_hat - 0.85) <= 3 * out.std_err
        assert out.std_err == pytest.approx(out.record.std_err / (1 - p), abs=1e-15)

    def test_target_state_estimates_one_exactly(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "VI")
        sigma = density_operator(target_projector(s))
        out = estimate_fidelity(strat, sigma, 1000, seed=9)
        assert out.f_hat == 1.0
        assert out.std_err == 0.0

    def test_smaller_beta_gives_sharper_estimates(self):
        """The error bar scales as 1/(1 - beta) at fixed trial count."""
        s = two_qubit_state(np.pi / 4)
        sigma = depolarize(s, 0.2)
        tight = estimate_fidelity(build_strategy(s, "V", p=1 / 3), sigma, 10**4, seed=4)
        loose = estimate_fidelity(build_strategy(s, "V", p=0.7), sigma, 10**4, seed=4)
        assert tight.std_err < loose.std_err

    def test_requires_homogeneous_strategy(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "II")
        with pytest.raises(NotHomogeneousError):
            estimate_fidelity(strat, depolarize(s, 0.1), 1000, seed=0)

    def test_requires_enough_trials(self):
        s = two_qubit_state(np.pi / 6)
        strat = build_strategy(s, "V")
        with pytest.raises(OutOfRangeError):
            estimate_fidelity(strat, depolarize(s, 0.1), 50, seed=0)
