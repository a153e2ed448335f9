from __future__ import annotations

import pytest

from qa_auth import FeedbackMode, PositionStrategy
from qa_auth.config import ConfigError, SealingConfig, load_config
from qa_auth.sealing import SealingKey


class TestLoadConfig:
    def test_defaults_without_file(self):
        config = load_config(None)
        assert config.policy.enroll_count == 6
        assert config.store_path.name == "qa_store.json"
        assert config.bank_path is None

    def test_yaml_values(self, tmp_path):
        path = tmp_path / "qa.yaml"
        path.write_text(
            "\n".join(
                [
                    "listen_addr: 0.0.0.0",
                    "port: 9001",
                    f"store_path: {tmp_path / 'accounts.json'}",
                    "policy:",
                    "  enroll_count: 8",
                    "  challenge_count: 6",
                    "  max_failed_attempts: 5",
                    "  feedback_mode: study",
                    "  position_strategy: uniform-capped",
                    "  max_position: 4",
                ]
            )
        )
        config = load_config(path)
        assert config.port == 9001
        assert config.policy.enroll_count == 8
        assert config.policy.feedback_mode is FeedbackMode.STUDY
        assert config.policy.position_strategy is PositionStrategy.UNIFORM_CAPPED
        assert config.policy.max_position == 4

    def test_env_overrides(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QA_PORT", "7777")
        monkeypatch.setenv("QA_STORE_PATH", str(tmp_path / "o.json"))
        monkeypatch.setenv("QA_FEEDBACK_MODE", "study")
        monkeypatch.setenv("QA_MAX_FAILED_ATTEMPTS", "4")
        monkeypatch.setenv("QA_CHALLENGE_TTL", "60")
        config = load_config(None)
        assert config.port == 7777
        assert config.store_path.name == "o.json"
        assert config.policy.feedback_mode is FeedbackMode.STUDY
        assert config.policy.max_failed_attempts == 4
        assert config.policy.challenge_ttl == 60.0

    def test_bad_policy_block(self, tmp_path):
        path = tmp_path / "qa.yaml"
        path.write_text("policy:\n  no_such_field: 1\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_invalid_policy_values_rejected(self, tmp_path):
        path = tmp_path / "qa.yaml"
        path.write_text("policy:\n  challenge_count: 2\n")
        with pytest.raises(ValueError):
            load_config(path)

    def test_non_mapping_root_rejected(self, tmp_path):
        path = tmp_path / "qa.yaml"
        path.write_text("- just\n- a\n- list\n")
        with pytest.raises(ConfigError):
            load_config(path)


class TestSealingConfig:
    def test_passphrase_derivation_is_stable(self, monkeypatch):
        monkeypatch.setenv("QA_SEALING_PASSPHRASE", "open sesame")
        sealing = SealingConfig(kdf_cost=2**10)
        assert sealing.resolve() == sealing.resolve()

    def test_missing_passphrase(self, monkeypatch):
        monkeypatch.delenv("QA_SEALING_PASSPHRASE", raising=False)
        with pytest.raises(ConfigError):
            SealingConfig().resolve()

    def test_raw_key_env(self, monkeypatch):
        key = SealingKey.generate()
        monkeypatch.setenv("MY_KEY", key.material.hex())
        sealing = SealingConfig(key_env="MY_KEY")
        assert sealing.resolve() == key

    def test_bad_hex_key(self, monkeypatch):
        monkeypatch.setenv("MY_KEY", "zz-not-hex")
        with pytest.raises(ConfigError):
            SealingConfig(key_env="MY_KEY").resolve()
