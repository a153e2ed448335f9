"""Service configuration: YAML file plus environment overrides.

Key material never lives in the config file itself; the `sealing` block
names an environment variable holding either a raw hex key or a
passphrase to stretch with scrypt (salt and cost are deployment-fixed
config values).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import yaml

from .core import FeedbackMode, Policy, PositionStrategy
from .sealing import DEFAULT_KDF_COST, SealingKey


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SealingConfig:
    """Where the sealing key comes from.

    `key_env` names a variable holding a 64-hex-char key; otherwise
    `passphrase_env` is stretched with scrypt(`kdf_salt_hex`, `kdf_cost`).
    """

    key_env: Optional[str] = None
    passphrase_env: str = "QA_SEALING_PASSPHRASE"
    kdf_salt_hex: str = "71612d617574682d7631"  # "qa-auth-v1"
    kdf_cost: int = DEFAULT_KDF_COST

    def resolve(self) -> SealingKey:
        if self.key_env:
            raw = os.environ.get(self.key_env)
            if not raw:
                raise ConfigError(f"environment variable {self.key_env} is not set")
            try:
                return SealingKey(bytes.fromhex(raw.strip()))
            except ValueError as exc:
                raise ConfigError(f"{self.key_env} must hold a hex-encoded 32-byte key") from exc
        passphrase = os.environ.get(self.passphrase_env)
        if not passphrase:
            raise ConfigError(
                f"environment variable {self.passphrase_env} is not set; "
                "it must hold the sealing passphrase"
            )
        return SealingKey.derive(passphrase, bytes.fromhex(self.kdf_salt_hex), cost=self.kdf_cost)


@dataclass(frozen=True)
class ServiceConfig:
    store_path: Path = Path("qa_store.json")
    bank_path: Optional[Path] = None  # None -> packaged default bank
    listen_addr: str = "127.0.0.1"
    port: int = 8000
    policy: Policy = field(default_factory=Policy)
    sealing: SealingConfig = field(default_factory=SealingConfig)


def _policy_from_dict(data: dict) -> Policy:
    kwargs = dict(data)
    if "feedback_mode" in kwargs:
        kwargs["feedback_mode"] = FeedbackMode(kwargs["feedback_mode"])
    if "position_strategy" in kwargs:
        kwargs["position_strategy"] = PositionStrategy(kwargs["position_strategy"])
    try:
        return Policy(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad policy block: {exc}") from exc


# QA_* variable -> policy field (and the coercion applied to the value)
_POLICY_ENV_OVERRIDES = {
    "QA_FEEDBACK_MODE": ("feedback_mode", FeedbackMode),
    "QA_ENROLL_COUNT": ("enroll_count", int),
    "QA_CHALLENGE_COUNT": ("challenge_count", int),
    "QA_MAX_FAILED_ATTEMPTS": ("max_failed_attempts", int),
    "QA_LOCKOUT_DURATION": ("lockout_duration", float),
    "QA_CHALLENGE_TTL": ("challenge_ttl", float),
}


def load_config(path: Optional[Union[str, Path]] = None) -> ServiceConfig:
    """Load configuration, applying QA_* environment overrides on top.

    Recognized overrides: QA_STORE_PATH, QA_BANK_PATH, QA_LISTEN_ADDR,
    QA_PORT, plus the policy values QA_FEEDBACK_MODE, QA_ENROLL_COUNT,
    QA_CHALLENGE_COUNT, QA_MAX_FAILED_ATTEMPTS, QA_LOCKOUT_DURATION, and
    QA_CHALLENGE_TTL.
    """
    data: dict = {}
    if path is not None:
        try:
            loaded = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if loaded is not None:
            if not isinstance(loaded, dict):
                raise ConfigError("config root must be a mapping")
            data = loaded

    policy_data = dict(data.get("policy", {}))
    for variable, (field_name, coerce) in _POLICY_ENV_OVERRIDES.items():
        raw = os.environ.get(variable)
        if raw:
            try:
                policy_data[field_name] = coerce(raw)
            except ValueError as exc:
                raise ConfigError(f"bad {variable}: {exc}") from exc
    policy = _policy_from_dict(policy_data)

    sealing_data = data.get("sealing", {})
    try:
        sealing = SealingConfig(**sealing_data)
    except TypeError as exc:
        raise ConfigError(f"bad sealing block: {exc}") from exc

    store_path = os.environ.get("QA_STORE_PATH", data.get("store_path", "qa_store.json"))
    bank_path = os.environ.get("QA_BANK_PATH", data.get("bank_path"))
    listen_addr = os.environ.get("QA_LISTEN_ADDR", data.get("listen_addr", "127.0.0.1"))
    port = int(os.environ.get("QA_PORT", data.get("port", 8000)))

    return ServiceConfig(
        store_path=Path(store_path),
        bank_path=Path(bank_path) if bank_path else None,
        listen_addr=listen_addr,
        port=port,
        policy=policy,
        sealing=sealing,
    )
