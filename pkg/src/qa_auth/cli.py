"""Operator and researcher command line.

`serve`, `register`, and `login` drive the scheme itself (registration and
login are interactive, with echo-suppressed answer entry); `entropy`,
`simulate`, and `report` front the analysis harness. Simulation commands
print the empirical rate next to its analytic oracle and the three-sigma
band, and identical seeds and arguments reproduce byte-identical output.

Failures exit nonzero after printing a single machine-readable JSON error
line to stderr.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from .analysis import (
    FrequencyModel,
    GuessingPolicy,
    SimulationRecord,
    effective_entropy_bits,
    simulate_observation_attack,
    simulate_online_bruteforce,
    theoretical_space_bits,
)
from .analysis.report import generate_report
from .analysis.simulate import SimulationFixture
from .config import ConfigError, load_config
from .core import EnrollmentError, Outcome, QAError
from .store import StoreError


def _fail(exc: Exception, code: Optional[str] = None) -> None:
    line = {"error": code or type(exc).__name__, "message": str(exc)}
    click.echo(json.dumps(line), err=True)
    sys.exit(1)


def cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (QAError, StoreError, ConfigError, OSError, ValueError) as exc:
            _fail(exc)

    return wrapper


@click.group()
def main() -> None:
    """Cognitive-question authentication: service, enrollment, and analysis."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="YAML config file.")
@cli_errors
def serve(config_path: Optional[str]) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app_from_config

    config = load_config(config_path)
    app = create_app_from_config(config)
    uvicorn.run(app, host=config.listen_addr, port=config.port)


def _build_local_service(config_path: Optional[str]):
    from .service import build_service

    return build_service(load_config(config_path))


@main.command()
@click.option("--account", required=True, help="Account id to create.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@cli_errors
def register(account: str, config_path: Optional[str]) -> None:
    """Interactively pick questions and enroll answers (input is masked)."""
    service = _build_local_service(config_path)
    bank = list(service.bank)
    count = service.policy.enroll_count

    click.echo(f"Pick {count} questions for account '{account}':")
    for i, question in enumerate(bank, start=1):
        hint = f"  ({question.answer_hint})" if question.answer_hint else ""
        click.echo(f"  {i:2d}. {question.text}{hint}")

    chosen: list[int] = []
    while len(chosen) < count:
        number = click.prompt(f"Question {len(chosen) + 1} of {count} (number)", type=int)
        if not 1 <= number <= len(bank):
            click.echo(f"Enter a number between 1 and {len(bank)}.")
            continue
        if number - 1 in chosen:
            click.echo("Already chosen; pick a different question.")
            continue
        chosen.append(number - 1)

    entries = []
    for index in chosen:
        question = bank[index]
        click.echo(question.text)
        answer = click.prompt("Answer", hide_input=True)
        confirmation = click.prompt("Confirm answer", hide_input=True)
        entries.append((question.id, answer, confirmation))

    try:
        record = service.register(account, entries)
    except EnrollmentError as exc:
        for violation in exc.violations:
            where = violation.question_id or "-"
            click.echo(f"rejected: {violation.rule} question={where} {violation.detail}".rstrip(), err=True)
        _fail(exc, code="ValidationFailed")
        return
    click.echo(f"registered '{record.account_id}' with {len(record.enrolled)} questions")


@main.command()
@click.option("--account", required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@cli_errors
def login(account: str, config_path: Optional[str]) -> None:
    """Answer one single-letter probe per question; masked input."""
    service = _build_local_service(config_path)
    challenge = service.issue_challenge(account)

    letters = []
    for i, probe in enumerate(challenge.probes, start=1):
        question = service.bank.get(probe.question_id)
        click.echo(f"[{i}/{len(challenge.probes)}] {question.text}")
        letter = click.prompt(f"Letter at position {probe.position} of your answer", hide_input=True)
        letters.append(letter)

    verdict = service.verify(account, challenge.challenge_id, letters)
    click.echo(f"outcome={verdict.outcome} attempts_remaining={verdict.attempts_remaining}")
    if verdict.per_probe_results is not None:
        marks = " ".join("ok" if hit else "miss" for hit in verdict.per_probe_results)
        click.echo(f"per_probe: {marks}")
    if verdict.outcome is not Outcome.SUCCESS:
        sys.exit(1)


@main.command()
@click.option("--k", default=6, show_default=True, help="Probes per challenge.")
@click.option("--model", "model_path", type=click.Path(exists=True), default=None, help="letter:probability file.")
@cli_errors
def entropy(k: int, model_path: Optional[str]) -> None:
    """Print theoretical bits, and effective bits under a letter model."""
    click.echo(f"theoretical_bits={theoretical_space_bits(k):.2f}")
    if model_path is not None:
        report = effective_entropy_bits(FrequencyModel.load(model_path), k)
        click.echo(f"effective_bits_per_letter={report.effective_bits_per_letter:.4f}")
        click.echo(f"effective_bits_total={report.effective_bits_total:.2f}")
        click.echo(f"model={report.model_id}")
        if report.degenerate:
            click.echo("degenerate=true")


def _format_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _render_records(records: Sequence[SimulationRecord], output: str) -> str:
    rows = [{k: _format_value(v) for k, v in r.as_dict().items()} for r in records]
    if output == "json":
        return json.dumps([r.as_dict() for r in records], indent=2)
    if output == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=SimulationRecord.CSV_FIELDS)
        writer.writeheader()
        # empty cells for absent fields, matching the report files
        writer.writerows([{k: ("" if v == "-" else v) for k, v in row.items()} for row in rows])
        return buffer.getvalue().rstrip("\n")
    widths = {
        name: max(len(name), *(len(row[name]) for row in rows)) for name in SimulationRecord.CSV_FIELDS
    }
    lines = ["  ".join(name.ljust(widths[name]) for name in SimulationRecord.CSV_FIELDS)]
    for row in rows:
        lines.append("  ".join(row[name].ljust(widths[name]) for name in SimulationRecord.CSV_FIELDS))
    return "\n".join(line.rstrip() for line in lines)


def _echo_record(record: SimulationRecord, output: str) -> None:
    click.echo(_render_records([record], output))
    if output == "table":  # csv/json stay machine-parseable as-is
        band = 3 * record.stderr
        click.echo(f"empirical={record.empirical:.10g} analytic={record.analytic:.10g} band_3se=±{band:.10g}")


@main.group()
def simulate() -> None:
    """Monte-Carlo attacker simulations with analytic oracles."""


@simulate.command()
@click.option("--sessions", required=True, type=int, help="Observed honest logins per trial.")
@click.option("--trials", required=True, type=int)
@click.option("--seed", default=1, show_default=True, type=int)
@click.option("--lengths", default="8,8,8,8,8,8", show_default=True, help="Comma-separated answer lengths.")
@click.option("--output", type=click.Choice(["table", "csv", "json"]), default="table", show_default=True)
@cli_errors
def observe(sessions: int, trials: int, seed: int, lengths: str, output: str) -> None:
    """Replay attack from an observation log against a fresh challenge."""
    answer_lengths = [int(part) for part in lengths.split(",") if part.strip()]
    fixture = SimulationFixture.from_lengths(answer_lengths)
    record = simulate_observation_attack(fixture, sessions, trials, random.Random(seed), seed=seed)
    _echo_record(record, output)


@simulate.command()
@click.option("--k", required=True, type=int, help="Probes per challenge.")
@click.option("--attempts", required=True, type=int, help="Attempt budget per lockout window (T).")
@click.option("--trials", required=True, type=int)
@click.option("--seed", default=1, show_default=True, type=int)
@click.option("--output", type=click.Choice(["table", "csv", "json"]), default="table", show_default=True)
@cli_errors
def bruteforce(k: int, attempts: int, trials: int, seed: int, output: str) -> None:
    """Uniform random guessing against the lockout window."""
    policy = GuessingPolicy(challenge_count=k, max_failed_attempts=attempts)
    record = simulate_online_bruteforce(trials, policy, random.Random(seed), seed=seed)
    _echo_record(record, output)


@main.command()
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--seed", default=1, show_default=True, type=int)
@click.option("--trials", default=20000, show_default=True, type=int)
@click.option("--model", "model_path", type=click.Path(exists=True), default=None)
@cli_errors
def report(out_dir: str, seed: int, trials: int, model_path: Optional[str]) -> None:
    """Run the standard sweeps; write figures beside CSV/JSON records."""
    model = FrequencyModel.load(model_path) if model_path else None
    written = generate_report(Path(out_dir), seed=seed, trials=trials, model=model)
    for path in written:
        click.echo(str(path))


if __name__ == "__main__":
    main()
