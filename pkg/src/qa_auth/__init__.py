"""Cognitive-question authentication with variant single-letter responses.

Users enroll answers to a handful of personal questions; each login asks
for one letter at a freshly random position of each answer, so observed
sessions do not replay. The `analysis` subpackage checks the scheme's
security arithmetic (theoretical space, guessing and observation attack
rates) against closed-form oracles by simulation.
"""

from .core import (
    AccountLockedError,
    AccountRecord,
    Challenge,
    ChallengeExpiredError,
    EnrolledQuestion,
    EnrollmentError,
    FeedbackMode,
    MalformedResponseError,
    NoEnrollmentError,
    NormalizedAnswer,
    Outcome,
    Policy,
    PositionStrategy,
    Probe,
    QAError,
    Question,
    QuestionBank,
    Response,
    Rule,
    Verdict,
    Violation,
    enroll,
    generate_challenge,
    letter_at,
    normalize_answer,
    validate_enrollment,
    verify_response,
)
from .policy import AttemptDecision, LockoutState, can_attempt, record_outcome
from .sealing import SealingError, SealingKey, seal, unseal

__version__ = "0.1.0"

__all__ = [
    "AccountLockedError",
    "AccountRecord",
    "AttemptDecision",
    "Challenge",
    "ChallengeExpiredError",
    "EnrolledQuestion",
    "EnrollmentError",
    "FeedbackMode",
    "LockoutState",
    "MalformedResponseError",
    "NoEnrollmentError",
    "NormalizedAnswer",
    "Outcome",
    "Policy",
    "PositionStrategy",
    "Probe",
    "QAError",
    "Question",
    "QuestionBank",
    "Response",
    "Rule",
    "SealingError",
    "SealingKey",
    "Verdict",
    "Violation",
    "can_attempt",
    "enroll",
    "generate_challenge",
    "letter_at",
    "normalize_answer",
    "record_outcome",
    "seal",
    "unseal",
    "validate_enrollment",
    "verify_response",
]
