"""Domain types and operations for cognitive-question authentication.

A user enrolls by answering `enroll_count` questions chosen from a curated
bank. Each login challenge probes `challenge_count` of those questions,
asking for the single letter at a randomly drawn 1-based position of the
stored answer; entering the correct letter for every probe authenticates.
Positions are redrawn per session (variant response), so observing one
login does not replay into the next.

Everything here is an immutable value; operations are pure given explicit
randomness and clock inputs. Persistence and challenge bookkeeping live in
`store` and `service`.
"""

from __future__ import annotations

import enum
import random
import unicodedata
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import policy as policy_mod
from .policy import LockoutState
from .sealing import SealingKey, seal, unseal

ALPHABET = "abcdefghijklmnopqrstuvwxyz"

MIN_ANSWER_LENGTH = 3
MIN_DISTINCT_LETTERS = 2


class QAError(Exception):
    """Base class for scheme-level errors."""


class Rule(str, enum.Enum):
    """Enrollment and response validation rules, by the name reported to clients."""

    TOO_SHORT = "TooShort"
    TOO_FEW_DISTINCT_LETTERS = "TooFewDistinctLetters"
    DUPLICATE_ANSWER = "DuplicateAnswer"
    DUPLICATE_QUESTION = "DuplicateQuestion"
    UNKNOWN_QUESTION = "UnknownQuestion"
    WRONG_COUNT = "WrongCount"
    CONFIRMATION_MISMATCH = "ConfirmationMismatch"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Violation:
    """One broken rule, attributed to a question where applicable."""

    rule: Rule
    question_id: Optional[str] = None
    detail: str = ""


class AnswerRuleError(QAError, ValueError):
    """An answer failed normalization rules; `rule` names the broken one."""

    def __init__(self, rule: Rule, message: str):
        super().__init__(message)
        self.rule = rule


class EnrollmentError(QAError):
    """Enrollment rejected; `violations` lists every broken rule."""

    def __init__(self, violations: Sequence[Violation]):
        super().__init__("; ".join(f"{v.rule}({v.question_id or '-'})" for v in violations))
        self.violations = tuple(violations)


class AccountLockedError(QAError):
    def __init__(self, denied_until: float):
        super().__init__(f"account locked until {denied_until}")
        self.denied_until = denied_until


class NoEnrollmentError(QAError):
    pass


class ChallengeExpiredError(QAError):
    """Challenge TTL passed, or the challenge was already consumed."""


class MalformedResponseError(QAError):
    pass


class PositionOutOfRangeError(QAError, IndexError):
    pass


class FeedbackMode(str, enum.Enum):
    PRODUCTION = "production"
    STUDY = "study"


class PositionStrategy(str, enum.Enum):
    UNIFORM_OVER_ANSWER = "uniform-over-answer"
    UNIFORM_CAPPED = "uniform-capped"


@dataclass(frozen=True)
class Policy:
    """Scheme parameters.

    Defaults mirror the six-of-twenty deployment with a 10-attempt lockout
    window of one hour and five-minute challenge lifetime. Durations are in
    seconds; timestamps everywhere are POSIX epoch seconds.
    """

    enroll_count: int = 6
    challenge_count: int = 6
    bank_size: int = 20
    max_failed_attempts: int = 10
    lockout_duration: float = 3600.0
    challenge_ttl: float = 300.0
    feedback_mode: FeedbackMode = FeedbackMode.PRODUCTION
    position_strategy: PositionStrategy = PositionStrategy.UNIFORM_OVER_ANSWER
    max_position: Optional[int] = None

    def __post_init__(self) -> None:
        if not (3 <= self.challenge_count <= self.enroll_count <= self.bank_size):
            raise ValueError(
                "require 3 <= challenge_count <= enroll_count <= bank_size, got "
                f"{self.challenge_count}/{self.enroll_count}/{self.bank_size}"
            )
        if self.max_failed_attempts < 1:
            raise ValueError("max_failed_attempts must be >= 1")
        if self.challenge_ttl <= 0:
            raise ValueError("challenge_ttl must be positive")
        if self.lockout_duration < 0:
            raise ValueError("lockout_duration must be >= 0")
        if self.position_strategy is PositionStrategy.UNIFORM_CAPPED:
            if self.max_position is None or self.max_position < 1:
                raise ValueError("uniform-capped strategy needs max_position >= 1")


@dataclass(frozen=True)
class Question:
    """One bank entry. `alphabetic` records the editorial check that the
    question asks for a letters-only answer (a name or place)."""

    id: str
    text: str
    answer_hint: Optional[str] = None
    alphabetic: bool = True

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("question id must be non-empty")
        if not self.text.strip():
            raise ValueError("question text must be non-empty")


@dataclass(frozen=True)
class QuestionBank:
    """Ordered, duplicate-free collection of questions users pick from."""

    questions: tuple[Question, ...]

    def __post_init__(self) -> None:
        ids = [q.id for q in self.questions]
        if len(set(ids)) != len(ids):
            raise ValueError("question ids must be distinct")

    def __len__(self) -> int:
        return len(self.questions)

    def __iter__(self):
        return iter(self.questions)

    def __contains__(self, question_id: str) -> bool:
        return any(q.id == question_id for q in self.questions)

    def get(self, question_id: str) -> Question:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise KeyError(question_id)


@dataclass(frozen=True)
class NormalizedAnswer:
    """A case-folded, letters-only answer.

    Invariants: at least 3 letters, at least 2 distinct letters, every
    character in a-z. Construct via :func:`normalize_answer` for raw text.
    """

    letters: str

    def __post_init__(self) -> None:
        if any(c not in ALPHABET for c in self.letters):
            raise ValueError("normalized answer may contain only a-z; use normalize_answer()")
        if len(self.letters) < MIN_ANSWER_LENGTH:
            raise AnswerRuleError(Rule.TOO_SHORT, f"answer has {len(self.letters)} letters, minimum is {MIN_ANSWER_LENGTH}")
        if len(set(self.letters)) < MIN_DISTINCT_LETTERS:
            raise AnswerRuleError(Rule.TOO_FEW_DISTINCT_LETTERS, "answer needs at least 2 different letters")

    def __len__(self) -> int:
        return len(self.letters)

    def letter_at(self, position: int) -> str:
        return letter_at(self, position)


def normalize_answer(raw: str) -> NormalizedAnswer:
    """Case-fold `raw` and drop everything outside a-z.

    Folding is Unicode compatibility folding: accented letters reduce to
    their base letter, case distinctions disappear, and spaces, digits,
    punctuation and symbols are removed ("New York" -> "newyork").
    Idempotent. Raises AnswerRuleError if the result is too short or has
    fewer than two distinct letters.
    """
    folded = unicodedata.normalize("NFKD", raw.casefold())
    letters = "".join(c for c in folded if c in ALPHABET)
    return NormalizedAnswer(letters)


def letter_at(answer: Union[NormalizedAnswer, str], position: int) -> str:
    """Letter at a 1-based position ("anderson", 2) -> 'n'."""
    letters = answer.letters if isinstance(answer, NormalizedAnswer) else answer
    if not 1 <= position <= len(letters):
        raise PositionOutOfRangeError(f"position {position} outside [1, {len(letters)}]")
    return letters[position - 1]


@dataclass(frozen=True)
class EnrolledQuestion:
    """A question the account answered; the answer is sealed at rest."""

    question_id: str
    sealed_answer: bytes
    answer_length: int

    def __post_init__(self) -> None:
        if self.answer_length < MIN_ANSWER_LENGTH:
            raise ValueError("answer_length below scheme minimum")


@dataclass(frozen=True)
class AccountRecord:
    account_id: str
    enrolled: tuple[EnrolledQuestion, ...]
    lockout_state: LockoutState = field(default_factory=LockoutState)

    def __post_init__(self) -> None:
        ids = [e.question_id for e in self.enrolled]
        if len(set(ids)) != len(ids):
            raise ValueError("enrolled question ids must be distinct")

    def enrolled_for(self, question_id: str) -> EnrolledQuestion:
        for e in self.enrolled:
            if e.question_id == question_id:
                return e
        raise KeyError(question_id)


@dataclass(frozen=True)
class Probe:
    """One (question, position) pair; the expected input is a single letter."""

    question_id: str
    position: int

    def __post_init__(self) -> None:
        if self.position < 1:
            raise ValueError("positions are 1-based")


@dataclass(frozen=True)
class Challenge:
    challenge_id: str
    account_id: str
    probes: tuple[Probe, ...]
    issued_at: float
    expires_at: float

    def __post_init__(self) -> None:
        ids = [p.question_id for p in self.probes]
        if len(set(ids)) != len(ids):
            raise ValueError("probe question ids must be distinct")
        if self.expires_at <= self.issued_at:
            raise ValueError("challenge must expire after issuance")


@dataclass(frozen=True)
class Response:
    challenge_id: str
    letters: tuple[str, ...]


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    LOCKED_OUT = "locked_out"
    EXPIRED = "expired"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Verification result.

    `per_probe_results` is populated only under study-mode feedback;
    production verdicts never reveal which probe failed.
    """

    outcome: Outcome
    attempts_remaining: int
    per_probe_results: Optional[tuple[bool, ...]] = None


def _answer_letters(answer: Union[NormalizedAnswer, str]) -> str:
    if isinstance(answer, NormalizedAnswer):
        return answer.letters
    if any(c not in ALPHABET for c in answer):
        raise ValueError(f"selection answers must be normalized first: {answer!r}")
    return answer


def validate_enrollment(
    selections: Sequence[tuple[str, Union[NormalizedAnswer, str]]],
    bank: QuestionBank,
    policy: Policy,
) -> list[Violation]:
    """Check an enrollment selection; an empty list means it is acceptable.

    Enforced rules: exactly `policy.enroll_count` selections, every question
    exists in the bank, no question answered twice, every answer meets the
    minimum-length and distinct-letter floors, and no two answers are equal.
    """
    violations: list[Violation] = []
    if len(selections) != policy.enroll_count:
        violations.append(
            Violation(Rule.WRONG_COUNT, detail=f"expected {policy.enroll_count} selections, got {len(selections)}")
        )

    seen_questions: set[str] = set()
    seen_answers: dict[str, str] = {}
    for question_id, answer in selections:
        if question_id not in bank:
            violations.append(Violation(Rule.UNKNOWN_QUESTION, question_id))
        if question_id in seen_questions:
            violations.append(Violation(Rule.DUPLICATE_QUESTION, question_id))
            continue
        seen_questions.add(question_id)

        letters = _answer_letters(answer)
        if len(letters) < MIN_ANSWER_LENGTH:
            violations.append(Violation(Rule.TOO_SHORT, question_id))
            continue
        if len(set(letters)) < MIN_DISTINCT_LETTERS:
            violations.append(Violation(Rule.TOO_FEW_DISTINCT_LETTERS, question_id))
            continue
        if letters in seen_answers:
            violations.append(
                Violation(Rule.DUPLICATE_ANSWER, question_id, detail=f"same answer as {seen_answers[letters]}")
            )
            continue
        seen_answers[letters] = question_id
    return violations


def _sealing_context(account_id: str, question_id: str) -> bytes:
    # Binds a sealed answer to its slot so blobs cannot be swapped around.
    return f"qa-answer|{account_id}|{question_id}".encode("utf-8")


def enroll(
    account_id: str,
    selections: Sequence[tuple[str, NormalizedAnswer]],
    sealing_key: SealingKey,
    policy: Policy,
    bank: Optional[QuestionBank] = None,
) -> AccountRecord:
    """Seal the selected answers into a fresh account record.

    Callers should have run :func:`validate_enrollment`; this re-checks the
    rules (bank membership only when `bank` is given) and raises
    EnrollmentError rather than build an invalid record. Plaintext answers
    are not retained on the record.
    """
    check_bank = bank if bank is not None else QuestionBank(tuple(Question(id=q, text=q) for q, _ in selections))
    violations = validate_enrollment(selections, check_bank, policy)
    if violations:
        raise EnrollmentError(violations)

    enrolled = tuple(
        EnrolledQuestion(
            question_id=question_id,
            sealed_answer=seal(answer.letters.encode("ascii"), sealing_key, _sealing_context(account_id, question_id)),
            answer_length=len(answer),
        )
        for question_id, answer in selections
    )
    return AccountRecord(account_id=account_id, enrolled=enrolled)


def unseal_answer(account_id: str, enrolled: EnrolledQuestion, sealing_key: SealingKey) -> NormalizedAnswer:
    """Recover the plaintext answer for one enrolled question."""
    plaintext = unseal(enrolled.sealed_answer, sealing_key, _sealing_context(account_id, enrolled.question_id))
    return NormalizedAnswer(plaintext.decode("ascii"))


def _fresh_nonce(rng: random.Random) -> str:
    # 128 bits from the caller's source: SystemRandom in production paths,
    # a seeded Random in tests and simulations.
    return f"{rng.getrandbits(128):032x}"


def position_upper_bound(answer_length: int, policy: Policy) -> int:
    if policy.position_strategy is PositionStrategy.UNIFORM_CAPPED:
        return min(policy.max_position or answer_length, answer_length)
    return answer_length


def generate_challenge(
    account: AccountRecord,
    rng: random.Random,
    policy: Policy,
    now: float,
) -> Challenge:
    """Draw a fresh challenge for the account.

    Probes cover `challenge_count` distinct enrolled questions, sampled
    uniformly without replacement when the account enrolled more than that,
    and presented in enrollment order. Each position is uniform on
    [1, answer_length] (optionally capped). Raises AccountLockedError or
    NoEnrollmentError.
    """
    gate = policy_mod.can_attempt(account.lockout_state, now, policy)
    if not gate.allowed:
        raise AccountLockedError(gate.denied_until or now)
    if len(account.enrolled) < policy.challenge_count:
        raise NoEnrollmentError(
            f"account has {len(account.enrolled)} enrolled questions, challenge needs {policy.challenge_count}"
        )

    if len(account.enrolled) > policy.challenge_count:
        indices = sorted(rng.sample(range(len(account.enrolled)), policy.challenge_count))
    else:
        indices = list(range(len(account.enrolled)))

    probes = []
    for i in indices:
        entry = account.enrolled[i]
        upper = position_upper_bound(entry.answer_length, policy)
        probes.append(Probe(question_id=entry.question_id, position=rng.randint(1, upper)))

    return Challenge(
        challenge_id=_fresh_nonce(rng),
        account_id=account.account_id,
        probes=tuple(probes),
        issued_at=now,
        expires_at=now + policy.challenge_ttl,
    )


def fold_response_letter(raw: str) -> str:
    """Fold one submitted character to lowercase; rejects non-letters."""
    folded = raw.casefold()
    if len(folded) != 1 or folded not in ALPHABET:
        raise MalformedResponseError(f"expected a single letter, got {raw!r}")
    return folded


def verify_response(
    account: AccountRecord,
    challenge: Challenge,
    response: Response,
    sealing_key: SealingKey,
    policy: Policy,
    now: float,
) -> Verdict:
    """Check a response against its challenge.

    Success requires every submitted letter (case-insensitively) to equal
    the letter at the probed position of the corresponding answer. All
    probes are compared before deciding, so timing does not single out the
    failing probe. The verdict's attempts_remaining reflects the lockout
    counter after this attempt; callers persist that transition via
    `policy.record_outcome`.

    Raises AccountLockedError, ChallengeExpiredError (TTL passed), or
    MalformedResponseError. One-shot consumption of challenge ids is the
    caller's bookkeeping duty: this function is pure.
    """
    if challenge.account_id != account.account_id:
        raise ValueError("challenge was issued for a different account")
    if response.challenge_id != challenge.challenge_id:
        raise ValueError("response does not reference this challenge")

    gate = policy_mod.can_attempt(account.lockout_state, now, policy)
    if not gate.allowed:
        raise AccountLockedError(gate.denied_until or now)
    if now >= challenge.expires_at:
        raise ChallengeExpiredError("challenge TTL passed")
    if len(response.letters) != len(challenge.probes):
        raise MalformedResponseError(
            f"expected {len(challenge.probes)} letters, got {len(response.letters)}"
        )

    submitted = [fold_response_letter(ch) for ch in response.letters]
    matches = []
    for probe, got in zip(challenge.probes, submitted):
        answer = unseal_answer(account.account_id, account.enrolled_for(probe.question_id), sealing_key)
        matches.append(got == letter_at(answer, probe.position))
    matched = tuple(matches)

    success = all(matched)
    next_state = policy_mod.record_outcome(gate.state, success, now, policy)
    return Verdict(
        outcome=Outcome.SUCCESS if success else Outcome.FAILURE,
        attempts_remaining=policy_mod.attempts_remaining(next_state, policy),
        per_probe_results=matched if policy.feedback_mode is FeedbackMode.STUDY else None,
    )
