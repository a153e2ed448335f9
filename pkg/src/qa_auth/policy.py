"""Attempt counting and lockout.

A whole-challenge verification (all letters at once) is one attempt. After
`max_failed_attempts` consecutive failures the account locks for
`lockout_duration` seconds. Under a threshold of T attempts per window, a
uniform random guesser succeeds in a window with probability
1 - (1 - 26**-k)**T, about T * 3.24e-9 at the six-probe default, which is
why a ~28-bit space holds up online.

All functions are pure: state and the current time are explicit arguments,
and callers persist the returned state (the store serializes writers per
account).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .core import Policy


@dataclass(frozen=True)
class LockoutState:
    """Consecutive-failure counter plus the lock deadline, if locked."""

    consecutive_failures: int = 0
    locked_until: Optional[float] = None

    def __post_init__(self) -> None:
        if self.consecutive_failures < 0:
            raise ValueError("consecutive_failures must be >= 0")


@dataclass(frozen=True)
class AttemptDecision:
    """Outcome of a lockout check.

    `state` carries the post-check state: an expired lock resets the
    failure counter, and callers should persist it.
    """

    allowed: bool
    denied_until: Optional[float]
    state: LockoutState


def can_attempt(state: LockoutState, now: float, policy: "Policy") -> AttemptDecision:
    """Decide whether an attempt is allowed at `now`.

    Denied iff a lock deadline exists and has not passed. A lock that has
    expired clears: the returned state has zero failures and no deadline.
    """
    if state.locked_until is not None:
        if now < state.locked_until:
            return AttemptDecision(allowed=False, denied_until=state.locked_until, state=state)
        state = LockoutState()
    return AttemptDecision(allowed=True, denied_until=None, state=state)


def record_outcome(state: LockoutState, success: bool, now: float, policy: "Policy") -> LockoutState:
    """Advance lockout state after one verification attempt.

    Success resets the counter and clears any deadline. Failure increments
    the counter; reaching `policy.max_failed_attempts` sets
    locked_until = now + policy.lockout_duration.
    """
    if success:
        return LockoutState()
    failures = state.consecutive_failures + 1
    if failures >= policy.max_failed_attempts:
        return LockoutState(consecutive_failures=failures, locked_until=now + policy.lockout_duration)
    return replace(state, consecutive_failures=failures, locked_until=None)


def attempts_remaining(state: LockoutState, policy: "Policy") -> int:
    """Verifications left before this account locks."""
    return max(0, policy.max_failed_attempts - state.consecutive_failures)
