"""Monte-Carlo attackers played against fixture accounts.

Two attacker models:

* Observation attacker: watches `sessions` honest logins (capturing only
  the probed position and the letter typed, the keylogger's view), then
  attempts one fresh challenge. It wins iff every fresh probe lands on a
  position it has seen for that question.
* Online guesser: submits uniform random letters for every probe, up to
  the lockout threshold of attempts per window.

Every simulator pairs its empirical rate with the analytic value it must
converge to, and takes an explicit seeded `random.Random` so runs are
reproducible. Trials are independent; results combine as sums of counts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence, Union

from ..core import (
    AccountRecord,
    NormalizedAnswer,
    Policy,
    enroll,
    generate_challenge,
    letter_at,
    normalize_answer,
)
from ..policy import LockoutState, can_attempt, record_outcome
from ..sealing import SealingKey
from .entropy import ALPHABET, online_guess_success


@dataclass
class ObservationLog:
    """(position, letter) pairs harvested per question from observed sessions."""

    entries: dict[Hashable, set[tuple[int, str]]] = field(default_factory=dict)

    def add(self, question: Hashable, position: int, letter: str) -> None:
        if position < 1:
            raise ValueError("positions are 1-based")
        self.entries.setdefault(question, set()).add((position, letter))

    def covered_positions(self, question: Hashable) -> set[int]:
        return {pos for pos, _ in self.entries.get(question, set())}

    def answers_probe(self, question: Hashable, position: int) -> bool:
        return position in self.covered_positions(question)


def observation_success_oracle(
    answer_lengths: Sequence[int],
    log: ObservationLog,
    question_keys: Optional[Sequence[Hashable]] = None,
) -> float:
    """Probability that a fresh uniform challenge is fully answerable from `log`.

    The product over questions of covered-positions / answer-length; assumes
    every enrolled question is probed (enroll_count == challenge_count).
    `question_keys` names the log keys per answer; defaults to 0..n-1.
    """
    keys = list(question_keys) if question_keys is not None else list(range(len(answer_lengths)))
    if len(keys) != len(answer_lengths):
        raise ValueError("question_keys must align with answer_lengths")
    probability = 1.0
    for key, length in zip(keys, answer_lengths):
        if length < 3:
            raise ValueError("answer lengths are at least 3 by scheme rules")
        covered = log.covered_positions(key)
        if any(pos > length for pos in covered):
            raise ValueError(f"log holds position beyond answer length for {key!r}")
        probability *= len(covered) / length
    return probability


def expected_observation_success(answer_lengths: Sequence[int], sessions: int) -> float:
    """Closed-form mean of the oracle over random logs of `sessions` sessions.

    After k sessions, a given position of a length-L answer has been seen
    with probability 1 - (1 - 1/L)**k, so the expected fraction covered is
    that same value, and expected replay success is the product over
    questions. sessions=0 gives 0; large k approaches 1.
    """
    if sessions < 0:
        raise ValueError("sessions must be >= 0")
    probability = 1.0
    for length in answer_lengths:
        probability *= 1.0 - (1.0 - 1.0 / length) ** sessions
    return probability


@dataclass(frozen=True)
class SimulationFixture:
    """An enrolled account whose plaintext answers the simulator may consult."""

    account: AccountRecord
    answers: dict[str, NormalizedAnswer]
    policy: Policy
    sealing_key: SealingKey

    @property
    def question_ids(self) -> list[str]:
        return [e.question_id for e in self.account.enrolled]

    @property
    def answer_lengths(self) -> list[int]:
        return [e.answer_length for e in self.account.enrolled]

    @classmethod
    def from_answers(cls, raw_answers: Sequence[str], policy: Optional[Policy] = None) -> "SimulationFixture":
        """Enroll a throwaway account over the given answers (one question each)."""
        if policy is None:
            policy = Policy(
                enroll_count=len(raw_answers),
                challenge_count=len(raw_answers),
                bank_size=max(20, len(raw_answers)),
            )
        normalized = [normalize_answer(raw) for raw in raw_answers]
        selections = [(f"q{i + 1}", answer) for i, answer in enumerate(normalized)]
        key = SealingKey.generate()
        account = enroll("fixture", selections, key, policy)
        return cls(account=account, answers=dict(selections), policy=policy, sealing_key=key)

    @classmethod
    def from_lengths(cls, lengths: Sequence[int], policy: Optional[Policy] = None) -> "SimulationFixture":
        """Fixture with one synthetic distinct answer per requested length."""
        answers = ["".join(ALPHABET[(i + j) % 26] for j in range(n)) for i, n in enumerate(lengths)]
        return cls.from_answers(answers, policy=policy)


@dataclass(frozen=True)
class GuessingPolicy:
    """Reduced lockout parameters for desk-scale guessing simulations.

    Production `Policy` enforces the three-probe floor, but the full-size
    success rate (26**-6 per guess) is unobservable by sampling, so the
    brute-force simulator accepts k below the floor through this stand-in.
    Attribute names match what the lockout transition functions read.
    """

    challenge_count: int
    max_failed_attempts: int
    lockout_duration: float = 3600.0

    def __post_init__(self) -> None:
        if self.challenge_count < 1:
            raise ValueError("challenge_count must be >= 1")
        if self.max_failed_attempts < 0:
            raise ValueError("max_failed_attempts must be >= 0")


@dataclass(frozen=True)
class SimulationRecord:
    """One simulation outcome with its analytic companion.

    `stderr` is the binomial standard error sqrt(p(1-p)/trials) at the
    analytic rate; empirical and analytic agree when they differ by at most
    three of these.
    """

    kind: str
    k: int
    trials: int
    successes: int
    empirical: float
    analytic: float
    stderr: float
    sessions: Optional[int] = None
    attempts: Optional[int] = None
    log_oracle_mean: Optional[float] = None
    seed: Optional[int] = None

    CSV_FIELDS = (
        "kind",
        "k",
        "sessions",
        "attempts",
        "trials",
        "successes",
        "empirical",
        "analytic",
        "stderr",
        "log_oracle_mean",
        "seed",
    )

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.CSV_FIELDS}

    def within_band(self, sigmas: float = 3.0) -> bool:
        return abs(self.empirical - self.analytic) <= sigmas * self.stderr


def _binomial_stderr(p: float, trials: int) -> float:
    return (p * (1.0 - p) / trials) ** 0.5 if trials > 0 else 0.0


def simulate_observation_attack(
    fixture: SimulationFixture,
    sessions_observed: int,
    trials: int,
    rng: random.Random,
    seed: Optional[int] = None,
) -> SimulationRecord:
    """Replay attack: observe `sessions_observed` honest logins, try one fresh one.

    Challenges are drawn through the real challenge generator. Also averages
    the per-log closed-form oracle across trials (`log_oracle_mean`), which
    the empirical rate must track.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if sessions_observed < 0:
        raise ValueError("sessions_observed must be >= 0")

    account = fixture.account
    policy = fixture.policy
    answers = fixture.answers
    lengths = fixture.answer_lengths
    keys = fixture.question_ids

    successes = 0
    oracle_sum = 0.0
    for _ in range(trials):
        log = ObservationLog()
        for _ in range(sessions_observed):
            observed = generate_challenge(account, rng, policy, now=0.0)
            for probe in observed.probes:
                log.add(probe.question_id, probe.position, letter_at(answers[probe.question_id], probe.position))
        oracle_sum += observation_success_oracle(lengths, log, question_keys=keys)
        fresh = generate_challenge(account, rng, policy, now=0.0)
        if all(log.answers_probe(p.question_id, p.position) for p in fresh.probes):
            successes += 1

    analytic = expected_observation_success(lengths, sessions_observed)
    return SimulationRecord(
        kind="observe",
        k=policy.challenge_count,
        sessions=sessions_observed,
        trials=trials,
        successes=successes,
        empirical=successes / trials,
        analytic=analytic,
        stderr=_binomial_stderr(analytic, trials),
        log_oracle_mean=oracle_sum / trials,
        seed=seed,
    )


def _default_guess_targets(k: int) -> list[str]:
    # Any valid answers work: a uniform guesser's hit rate is 26**-k per
    # attempt regardless of the stored letters.
    return ["".join(ALPHABET[(i + j) % 26] for j in range(8)) for i in range(k)]


def simulate_online_bruteforce(
    trials: int,
    policy: Union[Policy, GuessingPolicy],
    rng: random.Random,
    answers: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
) -> SimulationRecord:
    """Uniform-random-letter attacker against the lockout policy.

    Each trial is one lockout window: up to `policy.max_failed_attempts`
    whole-challenge guesses, every probe answered with an independent
    uniform letter, stopping at success or lockout. The analytic companion
    is online_guess_success(challenge_count, max_failed_attempts).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k = policy.challenge_count
    window_attempts = policy.max_failed_attempts
    targets = [normalize_answer(a).letters for a in (answers or _default_guess_targets(k))]
    if len(targets) != k:
        raise ValueError(f"need {k} answers, got {len(targets)}")
    lengths = [len(t) for t in targets]
    randint = rng.randint
    choice = rng.choice

    successes = 0
    for _ in range(trials):
        state = LockoutState()
        made = 0
        while made < window_attempts:
            gate = can_attempt(state, 0.0, policy)
            if not gate.allowed:
                break
            made += 1
            hit = True
            for i in range(k):
                position = randint(1, lengths[i])
                if choice(ALPHABET) != targets[i][position - 1]:
                    hit = False  # no early exit: one guess is one full challenge
            if hit:
                successes += 1
                break
            state = record_outcome(gate.state, False, 0.0, policy)

    analytic = online_guess_success(k, window_attempts) if window_attempts > 0 else 0.0
    return SimulationRecord(
        kind="bruteforce",
        k=k,
        attempts=window_attempts,
        trials=trials,
        successes=successes,
        empirical=successes / trials,
        analytic=analytic,
        stderr=_binomial_stderr(analytic, trials),
        seed=seed,
    )
