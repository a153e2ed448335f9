"""Durable persistence for accounts and the question bank.

A single JSON file holds every account record; commits write to a temp
file and atomically rename over the old one, so an interrupted save leaves
the previous version loadable. Sealed answers are stored as base64 — the
sealing key never enters the file. Writes are serialized per account
(one coarse lock; reads come from the in-memory image).

The format is versioned and future versions are rejected, never migrated
silently.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import tempfile
import threading
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional, Union

from .core import AccountRecord, EnrolledQuestion, Question, QuestionBank
from .policy import LockoutState

FORMAT_VERSION = 1

BANK_FORMAT_VERSION = 1


class StoreError(Exception):
    pass


class NotFoundError(StoreError):
    pass


class CorruptRecordError(StoreError):
    """Record bytes do not deserialize, or a sealed answer failed authentication."""


class VersionMismatchError(StoreError):
    pass


def record_to_dict(record: AccountRecord) -> dict:
    return {
        "account_id": record.account_id,
        "enrolled": [
            {
                "question_id": e.question_id,
                "sealed_answer": base64.b64encode(e.sealed_answer).decode("ascii"),
                "answer_length": e.answer_length,
            }
            for e in record.enrolled
        ],
        "lockout": {
            "consecutive_failures": record.lockout_state.consecutive_failures,
            "locked_until": record.lockout_state.locked_until,
        },
    }


def record_from_dict(data: dict) -> AccountRecord:
    try:
        enrolled = tuple(
            EnrolledQuestion(
                question_id=e["question_id"],
                sealed_answer=base64.b64decode(e["sealed_answer"], validate=True),
                answer_length=int(e["answer_length"]),
            )
            for e in data["enrolled"]
        )
        lockout = data["lockout"]
        return AccountRecord(
            account_id=data["account_id"],
            enrolled=enrolled,
            lockout_state=LockoutState(
                consecutive_failures=int(lockout["consecutive_failures"]),
                locked_until=lockout["locked_until"],
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptRecordError(f"malformed account record: {exc}") from exc


class AccountStore:
    """Account records in one atomically rewritten JSON file."""

    def __init__(self, path: Union[str, Path], bank_ref: str = ""):
        self.path = Path(path)
        self._lock = threading.RLock()
        self._accounts: dict[str, dict] = {}
        self.bank_ref = bank_ref
        if self.path.exists():
            self._load_file()

    def _load_file(self) -> None:
        try:
            data = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptRecordError(f"store file unreadable: {exc}") from exc
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise VersionMismatchError(f"store format {version!r} not supported (expected {FORMAT_VERSION})")
        self._accounts = dict(data.get("accounts", {}))
        self.bank_ref = data.get("bank_ref", self.bank_ref)

    def _flush(self) -> None:
        """Write-to-temp then atomic rename; fsyncs file and directory."""
        payload = json.dumps(
            {
                "format_version": FORMAT_VERSION,
                "bank_ref": self.bank_ref,
                "accounts": self._accounts,
            },
            indent=2,
            sort_keys=True,
        )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp_name, self.path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise
        dir_fd = os.open(self.path.parent, os.O_RDONLY)
        try:
            os.fsync(dir_fd)
        finally:
            os.close(dir_fd)

    def __contains__(self, account_id: str) -> bool:
        with self._lock:
            return account_id in self._accounts

    def account_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._accounts)

    def save_account(self, record: AccountRecord) -> None:
        with self._lock:
            self._accounts[record.account_id] = record_to_dict(record)
            self._flush()

    def load_account(self, account_id: str) -> AccountRecord:
        with self._lock:
            data = self._accounts.get(account_id)
        if data is None:
            raise NotFoundError(f"no account {account_id!r}")
        return record_from_dict(data)

    def update_lockout(self, account_id: str, transition: Callable[[LockoutState], LockoutState]) -> AccountRecord:
        """Apply a pure lockout transition atomically and durably.

        Updates are serialized, so concurrent transitions compose as if run
        sequentially in some order.
        """
        with self._lock:
            data = self._accounts.get(account_id)
            if data is None:
                raise NotFoundError(f"no account {account_id!r}")
            record = record_from_dict(data)
            updated = replace(record, lockout_state=transition(record.lockout_state))
            self._accounts[account_id] = record_to_dict(updated)
            self._flush()
            return updated

    def serialized_bytes(self) -> bytes:
        """The exact bytes a flush would write; used by at-rest audits."""
        with self._lock:
            return json.dumps(
                {
                    "format_version": FORMAT_VERSION,
                    "bank_ref": self.bank_ref,
                    "accounts": self._accounts,
                },
                indent=2,
                sort_keys=True,
            ).encode("utf-8")


def default_bank_path() -> Path:
    from importlib.resources import files

    return Path(str(files("qa_auth").joinpath("data/question_bank_v1.json")))


def bank_fingerprint(path: Union[str, Path]) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_question_bank(path: Optional[Union[str, Path]] = None) -> tuple[QuestionBank, str]:
    """Load a bank file; returns the bank and its version fingerprint.

    The file is JSON: {"version": int, "questions": [{id, text, answer_hint?}]}.
    Unknown future versions are rejected.
    """
    bank_path = Path(path) if path is not None else default_bank_path()
    try:
        data = json.loads(bank_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptRecordError(f"bank file unreadable: {exc}") from exc
    version = data.get("version")
    if version != BANK_FORMAT_VERSION:
        raise VersionMismatchError(f"bank format {version!r} not supported (expected {BANK_FORMAT_VERSION})")
    try:
        questions = tuple(
            Question(
                id=q["id"],
                text=q["text"],
                answer_hint=q.get("answer_hint"),
                alphabetic=q.get("alphabetic", True),
            )
            for q in data["questions"]
        )
    except (KeyError, TypeError) as exc:
        raise CorruptRecordError(f"malformed bank file: {exc}") from exc
    return QuestionBank(questions), bank_fingerprint(bank_path)
