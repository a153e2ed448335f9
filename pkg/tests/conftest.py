from __future__ import annotations

import random

import pytest

from qa_auth import Policy, SealingKey, enroll, normalize_answer
from qa_auth.store import load_question_bank

# (question_id, raw answer) pairs used by most account fixtures; the first
# one is the worked example answer.
STANDARD_SELECTIONS = [
    ("childhood-teacher", "Anderson"),
    ("parents-met-city", "New York"),
    ("first-pet", "Biscuit"),
    ("mother-born-city", "Springfield"),
    ("father-born-city", "Lisbon"),
    ("childhood-best-friend", "Maya"),
]


@pytest.fixture(scope="session")
def bank():
    return load_question_bank()[0]


@pytest.fixture(scope="session")
def sealing_key():
    return SealingKey.generate()


@pytest.fixture()
def policy():
    return Policy()


@pytest.fixture()
def answers():
    return {qid: normalize_answer(raw) for qid, raw in STANDARD_SELECTIONS}


@pytest.fixture()
def account(bank, policy, sealing_key, answers):
    selections = [(qid, answers[qid]) for qid, _ in STANDARD_SELECTIONS]
    return enroll("alice", selections, sealing_key, policy, bank=bank)


@pytest.fixture()
def rng():
    return random.Random(20240917)
