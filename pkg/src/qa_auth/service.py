"""Registration, challenge issuance, and verification.

`AuthService` is the transport-free engine: it owns the one-shot challenge
ledger and drives the store; the FastAPI app in `create_app` is a thin
HTTP facade over it. Answers and answer letters never travel server to
client — challenge bodies carry only question texts and positions, and
verdicts carry at most per-probe booleans (study mode).

Issuing a challenge costs nothing against the lockout budget; only
verification counts as an attempt.
"""

from __future__ import annotations

import random
import threading
import time
from typing import Callable, Optional, Sequence

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import policy as policy_mod
from .config import ServiceConfig
from .core import (
    AccountLockedError,
    AccountRecord,
    Challenge,
    ChallengeExpiredError,
    EnrollmentError,
    MalformedResponseError,
    NoEnrollmentError,
    NormalizedAnswer,
    Outcome,
    Policy,
    QAError,
    QuestionBank,
    Response,
    Rule,
    Verdict,
    Violation,
    enroll,
    generate_challenge,
    normalize_answer,
    validate_enrollment,
    verify_response,
)
from .sealing import SealingError, SealingKey
from .store import AccountStore, CorruptRecordError, NotFoundError, load_question_bank


class AccountExistsError(QAError):
    pass


class AuthService:
    """The scheme wired to a store, a bank, and a challenge ledger.

    The ledger maps challenge_id to the issued challenge until its single
    verification consumes it; expired entries are pruned on issuance.
    """

    def __init__(
        self,
        bank: QuestionBank,
        store: AccountStore,
        policy: Policy,
        sealing_key: SealingKey,
        rng: Optional[random.Random] = None,
        clock: Callable[[], float] = time.time,
    ):
        if len(bank) < policy.enroll_count:
            raise ValueError(f"bank has {len(bank)} questions, policy enrolls {policy.enroll_count}")
        self.bank = bank
        self.store = store
        self.policy = policy
        self._sealing_key = sealing_key
        self._rng = rng if rng is not None else random.SystemRandom()
        self._clock = clock
        self._challenges: dict[str, Challenge] = {}
        self._ledger_lock = threading.Lock()

    # -- registration ------------------------------------------------------

    def register(
        self,
        account_id: str,
        entries: Sequence[tuple[str, str, str]],
        now: Optional[float] = None,
    ) -> AccountRecord:
        """Enroll an account from (question_id, answer, confirmation) triples.

        Answer and confirmation must normalize identically. Raises
        EnrollmentError carrying every violation, or AccountExistsError.
        """
        if account_id in self.store:
            raise AccountExistsError(f"account {account_id!r} already registered")

        violations: list[Violation] = []
        selections: list[tuple[str, NormalizedAnswer]] = []
        for question_id, raw_answer, raw_confirmation in entries:
            try:
                answer = normalize_answer(raw_answer)
            except QAError as exc:
                violations.append(Violation(getattr(exc, "rule", Rule.TOO_SHORT), question_id, str(exc)))
                continue
            try:
                confirmation = normalize_answer(raw_confirmation)
            except QAError:
                confirmation = None
            if confirmation is None or confirmation != answer:
                violations.append(
                    Violation(Rule.CONFIRMATION_MISMATCH, question_id, "confirmation does not match answer")
                )
                continue
            selections.append((question_id, answer))

        if len(entries) != self.policy.enroll_count:
            violations.append(
                Violation(
                    Rule.WRONG_COUNT,
                    detail=f"expected {self.policy.enroll_count} selections, got {len(entries)}",
                )
            )
        if not violations:
            violations = validate_enrollment(selections, self.bank, self.policy)
        if violations:
            raise EnrollmentError(violations)

        record = enroll(account_id, selections, self._sealing_key, self.policy, bank=self.bank)
        self.store.save_account(record)
        return record

    # -- login -------------------------------------------------------------

    def issue_challenge(self, account_id: str, now: Optional[float] = None) -> Challenge:
        """Issue a fresh one-shot challenge; does not spend an attempt."""
        now = self._clock() if now is None else now
        record = self.store.load_account(account_id)
        gate = policy_mod.can_attempt(record.lockout_state, now, self.policy)
        if not gate.allowed:
            raise AccountLockedError(gate.denied_until or now)
        if gate.state != record.lockout_state:
            # lock expired: persist the counter reset
            record = self.store.update_lockout(
                account_id, lambda s: policy_mod.can_attempt(s, now, self.policy).state
            )
        challenge = generate_challenge(record, self._rng, self.policy, now)
        with self._ledger_lock:
            self._challenges = {
                cid: ch for cid, ch in self._challenges.items() if ch.expires_at > now
            }
            self._challenges[challenge.challenge_id] = challenge
        return challenge

    def verify(
        self,
        account_id: str,
        challenge_id: str,
        letters: Sequence[str],
        now: Optional[float] = None,
    ) -> Verdict:
        """Run the single verification a challenge gets, then persist lockout.

        Replays and TTL overruns raise ChallengeExpiredError. A malformed
        submission (wrong count, non-letters) does not consume the
        challenge; an actual verification, success or failure, does.
        """
        now = self._clock() if now is None else now
        record = self.store.load_account(account_id)
        with self._ledger_lock:
            challenge = self._challenges.get(challenge_id)
            if challenge is None or challenge.account_id != account_id:
                raise ChallengeExpiredError("challenge unknown, already used, or expired")
            response = Response(challenge_id=challenge_id, letters=tuple(letters))
            try:
                verdict = verify_response(record, challenge, response, self._sealing_key, self.policy, now)
            except ChallengeExpiredError:
                del self._challenges[challenge_id]
                raise
            except SealingError as exc:
                raise CorruptRecordError(f"sealed answer failed authentication: {exc}") from exc
            del self._challenges[challenge_id]
        success = verdict.outcome is Outcome.SUCCESS
        self.store.update_lockout(
            account_id,
            lambda s: policy_mod.record_outcome(
                policy_mod.can_attempt(s, now, self.policy).state, success, now, self.policy
            ),
        )
        return verdict


def build_service(config: ServiceConfig, rng: Optional[random.Random] = None) -> AuthService:
    """Assemble an AuthService from configuration (bank, store, key)."""
    bank, bank_ref = load_question_bank(config.bank_path)
    store = AccountStore(config.store_path, bank_ref=bank_ref)
    return AuthService(
        bank=bank,
        store=store,
        policy=config.policy,
        sealing_key=config.sealing.resolve(),
        rng=rng,
    )


# -- HTTP layer -------------------------------------------------------------


class EnrollmentEntry(BaseModel):
    question_id: str
    answer: str
    confirmation: str


class RegisterRequest(BaseModel):
    account_id: str = Field(min_length=1)
    answers: list[EnrollmentEntry]


class ViolationBody(BaseModel):
    rule: str
    question_id: Optional[str] = None
    detail: str = ""


class RegisterResponse(BaseModel):
    account_id: str
    enrolled_question_ids: list[str]


class ProbeBody(BaseModel):
    question_id: str
    question_text: str
    position: int


class ChallengeBody(BaseModel):
    challenge_id: str
    expires_at: float
    probes: list[ProbeBody]


class VerifyRequest(BaseModel):
    challenge_id: str
    letters: list[str]


class VerifyBody(BaseModel):
    outcome: str
    attempts_remaining: int
    per_probe: Optional[list[bool]] = None


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message, **extra})


def create_app(service: AuthService) -> FastAPI:
    app = FastAPI(title="qa-auth", version="0.1.0", description="Cognitive-question authentication API")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/accounts", status_code=201, response_model=RegisterResponse)
    def register(request: RegisterRequest):
        try:
            record = service.register(
                request.account_id,
                [(e.question_id, e.answer, e.confirmation) for e in request.answers],
            )
        except AccountExistsError as exc:
            return _error(409, "AccountExists", str(exc))
        except EnrollmentError as exc:
            return JSONResponse(
                status_code=400,
                content={
                    "error": "ValidationFailed",
                    "violations": [
                        ViolationBody(
                            rule=str(v.rule), question_id=v.question_id, detail=v.detail
                        ).model_dump()
                        for v in exc.violations
                    ],
                },
            )
        return RegisterResponse(
            account_id=record.account_id,
            enrolled_question_ids=[e.question_id for e in record.enrolled],
        )

    @app.post("/accounts/{account_id}/challenges", status_code=201, response_model=ChallengeBody)
    def issue_challenge(account_id: str):
        try:
            challenge = service.issue_challenge(account_id)
        except NotFoundError as exc:
            return _error(404, "UnknownAccount", str(exc))
        except AccountLockedError as exc:
            response = _error(423, "AccountLocked", str(exc), denied_until=exc.denied_until)
            response.headers["Retry-After"] = str(max(0, int(exc.denied_until - time.time())))
            return response
        except NoEnrollmentError as exc:
            return _error(409, "NoEnrollment", str(exc))
        return ChallengeBody(
            challenge_id=challenge.challenge_id,
            expires_at=challenge.expires_at,
            probes=[
                ProbeBody(
                    question_id=p.question_id,
                    question_text=service.bank.get(p.question_id).text,
                    position=p.position,
                )
                for p in challenge.probes
            ],
        )

    @app.post("/accounts/{account_id}/verify", response_model=VerifyBody)
    def verify(account_id: str, request: VerifyRequest):
        try:
            verdict = service.verify(account_id, request.challenge_id, request.letters)
        except NotFoundError as exc:
            return _error(404, "UnknownAccount", str(exc))
        except ChallengeExpiredError as exc:
            return _error(410, "ChallengeExpired", str(exc))
        except AccountLockedError as exc:
            response = _error(423, "AccountLocked", str(exc), denied_until=exc.denied_until)
            response.headers["Retry-After"] = str(max(0, int(exc.denied_until - time.time())))
            return response
        except MalformedResponseError as exc:
            return _error(400, "MalformedResponse", str(exc))
        return VerifyBody(
            outcome=str(verdict.outcome),
            attempts_remaining=verdict.attempts_remaining,
            per_probe=list(verdict.per_probe_results) if verdict.per_probe_results is not None else None,
        )

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    return create_app(build_service(config))
