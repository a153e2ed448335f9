from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qa_auth.analysis import (
    FrequencyModel,
    GuessingPolicy,
    ObservationLog,
    SimulationFixture,
    effective_entropy_bits,
    expected_observation_success,
    observation_success_oracle,
    online_guess_success,
    simulate_observation_attack,
    simulate_online_bruteforce,
    theoretical_space_bits,
)

LOG2_26 = math.log2(26)


class TestTheoreticalSpace:
    def test_six_probes_is_28_bits(self):
        assert theoretical_space_bits(6, 26) == pytest.approx(28.2026, abs=1e-3)

    def test_zero_probes(self):
        assert theoretical_space_bits(0, 26) == 0.0

    def test_three_probes(self):
        assert theoretical_space_bits(3, 26) == pytest.approx(14.10, abs=0.01)
        # independent identity: 2**bits recovers the count of secrets
        assert 2 ** theoretical_space_bits(3, 26) == pytest.approx(26**3, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            theoretical_space_bits(-1)
        with pytest.raises(ValueError):
            theoretical_space_bits(6, 0)


class TestOnlineGuessSuccess:
    def test_single_guess_six_probes(self):
        # exact integer-arithmetic oracle: 1 / 26**6 = 1 / 308,915,776
        assert 26**6 == 308_915_776
        assert online_guess_success(6, 1) == float(Fraction(1, 308_915_776))
        assert online_guess_success(6, 1) == pytest.approx(3.2371e-9, rel=1e-4)

    def test_single_letter_guess(self):
        assert online_guess_success(1, 1) == pytest.approx(1 / 26)

    def test_ten_attempts_by_binomial_expansion(self):
        # independent high-precision oracle via inclusion-exclusion
        p = Fraction(1, 26**6)
        attempts = 10
        expansion = sum(
            math.comb(attempts, i) * (-1) ** (i + 1) * p**i for i in range(1, attempts + 1)
        )
        assert online_guess_success(6, 10) == float(expansion)
        assert online_guess_success(6, 10) == pytest.approx(3.2371e-8, rel=1e-3)

    def test_zero_attempts(self):
        assert online_guess_success(6, 0) == 0.0

    def test_never_rounds_to_zero(self):
        assert online_guess_success(6, 1) > 0.0


class TestFrequencyModel:
    def test_uniform_sums_to_one(self):
        model = FrequencyModel.uniform()
        assert math.fsum(model.probabilities.values()) == pytest.approx(1.0, abs=1e-9)

    def test_rejects_negative(self):
        probs = {c: 1 / 26 for c in "abcdefghijklmnopqrstuvwxyz"}
        probs["a"], probs["b"] = -0.01, probs["b"] + 0.01 + 1 / 26
        with pytest.raises(ValueError):
            FrequencyModel(probs)

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            FrequencyModel({"a": 0.5, "b": 0.4})

    def test_from_lines(self):
        model = FrequencyModel.from_lines(["a:0.5", "b:0.5", "# comment", ""])
        assert model.probability("a") == 0.5
        assert model.probability("z") == 0.0

    def test_from_lines_renormalizes_rounded_table(self):
        model = FrequencyModel.from_lines(["a:0.50004", "b:0.49999"])
        assert math.fsum(model.probabilities.values()) == pytest.approx(1.0, abs=1e-12)

    def test_from_lines_rejects_garbage(self):
        with pytest.raises(ValueError):
            FrequencyModel.from_lines(["a=0.5"])
        with pytest.raises(ValueError):
            FrequencyModel.from_lines(["a:0.5", "a:0.5"])
        with pytest.raises(ValueError):
            FrequencyModel.from_lines(["a:0.9"])

    def test_packaged_english_table(self):
        from importlib.resources import files

        path = files("qa_auth").joinpath("data/english_letter_frequencies.txt")
        model = FrequencyModel.load(str(path))
        report = effective_entropy_bits(model, 6)
        assert 4.1 < report.effective_bits_per_letter < 4.3
        assert report.effective_bits_total < report.theoretical_bits


class TestEffectiveEntropy:
    def test_uniform_maximizes(self):
        report = effective_entropy_bits(FrequencyModel.uniform(), 6)
        assert report.effective_bits_per_letter == pytest.approx(4.7004, abs=1e-4)
        assert report.effective_bits_total == pytest.approx(28.20, abs=0.01)
        assert not report.degenerate

    def test_degenerate_model_flagged(self):
        model = FrequencyModel({"a": 1.0})
        report = effective_entropy_bits(model, 6)
        assert report.effective_bits_total == 0.0
        assert report.degenerate

    def test_two_point_model(self):
        model = FrequencyModel({"a": 0.5, "b": 0.5})
        report = effective_entropy_bits(model, 6)
        assert report.effective_bits_per_letter == pytest.approx(1.0, abs=1e-12)
        assert report.effective_bits_total == pytest.approx(6.0, abs=1e-12)

    def test_report_embeds_theoretical(self):
        report = effective_entropy_bits(FrequencyModel.uniform(), 4)
        assert report.theoretical_bits == pytest.approx(4 * LOG2_26)
        assert report.k == 4

    @settings(max_examples=80)
    @given(weights=st.lists(st.floats(min_value=0.01, max_value=10.0), min_size=26, max_size=26))
    def test_max_entropy_property(self, weights):
        total = math.fsum(weights)
        probs = {c: w / total for c, w in zip("abcdefghijklmnopqrstuvwxyz", weights)}
        # renormalize exactly to survive the strict sum invariant
        correction = math.fsum(probs.values())
        probs = {c: p / correction for c, p in probs.items()}
        report = effective_entropy_bits(FrequencyModel(probs), 6)
        assert report.effective_bits_per_letter <= 4.7005
        deviation = math.fsum(abs(p - 1 / 26) for p in probs.values())
        if deviation >= 1e-3:
            # equality only at uniform: KL(p||u) >= deviation**2 / (2 ln 2)
            assert report.effective_bits_per_letter < LOG2_26 - deviation**2 / (2 * math.log(2)) / 2


def enumerated_replay_success(lengths: tuple[int, ...], sessions: int) -> Fraction:
    """Exhaustive oracle: mean replay success over all possible observation logs."""
    per_session = list(itertools.product(*[range(1, n + 1) for n in lengths]))
    total = Fraction(0)
    count = 0
    for combo in itertools.product(per_session, repeat=sessions):
        covered = [set() for _ in lengths]
        for session in combo:
            for i, pos in enumerate(session):
                covered[i].add(pos)
        p = Fraction(1)
        for i, n in enumerate(lengths):
            p *= Fraction(len(covered[i]), n)
        total += p
        count += 1
    return total / count


class TestObservationOracles:
    def test_empty_log_is_zero(self):
        assert observation_success_oracle([8] * 6, ObservationLog()) == 0.0

    def test_full_coverage_is_one(self):
        log = ObservationLog()
        for q in range(6):
            for pos in range(1, 9):
                log.add(q, pos, "x")
        assert observation_success_oracle([8] * 6, log) == 1.0

    def test_one_session_single_positions(self):
        log = ObservationLog()
        for q in range(6):
            log.add(q, 1, "a")
        assert observation_success_oracle([8] * 6, log) == pytest.approx((1 / 8) ** 6)

    def test_rejects_position_past_answer(self):
        log = ObservationLog()
        log.add(0, 9, "a")
        with pytest.raises(ValueError):
            observation_success_oracle([8], log)

    def test_closed_form_matches_enumeration(self):
        for lengths, sessions in [((3,), 1), ((3,), 2), ((3, 4), 2), ((3, 3), 3), ((4,), 3)]:
            exact = enumerated_replay_success(lengths, sessions)
            assert expected_observation_success(lengths, sessions) == pytest.approx(float(exact), rel=1e-12)

    def test_closed_form_boundaries(self):
        assert expected_observation_success([8] * 6, 0) == 0.0
        assert expected_observation_success([8] * 6, 1) == pytest.approx((1 / 8) ** 6)
        assert expected_observation_success([8] * 6, 200) >= 0.99


class TestObservationSimulator:
    def test_zero_sessions_exact_zero(self):
        fixture = SimulationFixture.from_lengths([8] * 6)
        record = simulate_observation_attack(fixture, 0, 500, random.Random(1))
        assert record.empirical == 0.0
        assert record.analytic == 0.0

    def test_converges_to_oracle_one_session(self):
        fixture = SimulationFixture.from_lengths([3] * 6)
        record = simulate_observation_attack(fixture, 1, 20_000, random.Random(42))
        assert record.analytic == pytest.approx((1 / 3) ** 6)
        assert record.log_oracle_mean == pytest.approx(record.analytic, rel=1e-9)
        assert record.within_band(3.0)

    def test_converges_multi_session(self):
        fixture = SimulationFixture.from_lengths([3, 3, 3])
        record = simulate_observation_attack(fixture, 2, 5_000, random.Random(7))
        assert record.analytic == pytest.approx((5 / 9) ** 3)
        assert abs(record.log_oracle_mean - record.analytic) < 0.02
        assert record.within_band(3.0)

    def test_saturates_at_many_sessions(self):
        fixture = SimulationFixture.from_lengths([8] * 6)
        record = simulate_observation_attack(fixture, 200, 300, random.Random(3))
        assert record.empirical >= 0.99

    def test_deterministic_for_fixed_seed(self):
        fixture = SimulationFixture.from_lengths([4] * 6)
        first = simulate_observation_attack(fixture, 1, 2_000, random.Random(99), seed=99)
        second = simulate_observation_attack(fixture, 1, 2_000, random.Random(99), seed=99)
        assert first == second


class TestBruteforceSimulator:
    def test_single_letter_single_attempt(self):
        policy = GuessingPolicy(challenge_count=1, max_failed_attempts=1)
        record = simulate_online_bruteforce(50_000, policy, random.Random(5))
        assert record.analytic == pytest.approx(1 / 26)
        assert record.within_band(3.0)

    def test_lockout_window_of_three(self):
        policy = GuessingPolicy(challenge_count=1, max_failed_attempts=3)
        record = simulate_online_bruteforce(30_000, policy, random.Random(6))
        assert record.analytic == pytest.approx(float(1 - Fraction(25, 26) ** 3))
        assert record.within_band(3.0)

    def test_two_probes(self):
        policy = GuessingPolicy(challenge_count=2, max_failed_attempts=1)
        record = simulate_online_bruteforce(100_000, policy, random.Random(8))
        assert record.analytic == pytest.approx(1 / 676)
        assert record.within_band(3.0)

    def test_zero_attempts(self):
        policy = GuessingPolicy(challenge_count=1, max_failed_attempts=0)
        record = simulate_online_bruteforce(1_000, policy, random.Random(9))
        assert record.empirical == 0.0
        assert record.analytic == 0.0

    def test_accepts_real_policy(self):
        from qa_auth import Policy

        policy = Policy(max_failed_attempts=2)
        record = simulate_online_bruteforce(200, policy, random.Random(10))
        assert record.k == 6
        assert record.attempts == 2
        assert record.analytic == online_guess_success(6, 2)

    def test_deterministic_for_fixed_seed(self):
        policy = GuessingPolicy(challenge_count=1, max_failed_attempts=2)
        first = simulate_online_bruteforce(5_000, policy, random.Random(77), seed=77)
        second = simulate_online_bruteforce(5_000, policy, random.Random(77), seed=77)
        assert first == second
