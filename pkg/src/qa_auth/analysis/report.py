"""Render simulation sweeps to CSV and matplotlib figures.

The report path runs small parameter sweeps (replay success vs sessions
observed; guessing success vs attempt budget), writes the records as
delimited output plus a structured JSON document, and draws the empirical
points against their analytic curves.
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .entropy import FrequencyModel, effective_entropy_bits
from .simulate import (
    GuessingPolicy,
    SimulationFixture,
    SimulationRecord,
    simulate_observation_attack,
    simulate_online_bruteforce,
)


def observation_sweep(
    fixture: SimulationFixture,
    sessions_list: Sequence[int],
    trials: int,
    seed: int,
) -> list[SimulationRecord]:
    records = []
    for sessions in sessions_list:
        # string seeding is stable across processes (sha512 under the hood)
        rng = random.Random(f"{seed}:observe:{sessions}")
        records.append(simulate_observation_attack(fixture, sessions, trials, rng, seed=seed))
    return records


def bruteforce_sweep(
    k: int,
    attempts_list: Sequence[int],
    trials: int,
    seed: int,
) -> list[SimulationRecord]:
    records = []
    for attempts in attempts_list:
        rng = random.Random(f"{seed}:bruteforce:{k}:{attempts}")
        policy = GuessingPolicy(challenge_count=k, max_failed_attempts=attempts)
        records.append(simulate_online_bruteforce(trials, policy, rng, seed=seed))
    return records


def write_records_csv(records: Sequence[SimulationRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SimulationRecord.CSV_FIELDS)
        writer.writeheader()
        for record in records:
            writer.writerow({k: ("" if v is None else v) for k, v in record.as_dict().items()})


def write_records_json(records: Sequence[SimulationRecord], path: Path) -> None:
    path.write_text(json.dumps([r.as_dict() for r in records], indent=2) + "\n")


def _error_band(records: Sequence[SimulationRecord]) -> tuple[list[float], list[float]]:
    lower = [max(0.0, r.analytic - 3 * r.stderr) for r in records]
    upper = [min(1.0, r.analytic + 3 * r.stderr) for r in records]
    return lower, upper


def render_observation_figure(records: Sequence[SimulationRecord], path: Path) -> None:
    """Replay success vs sessions observed: empirical points on the analytic curve."""
    xs = [r.sessions or 0 for r in records]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    lower, upper = _error_band(records)
    ax.fill_between(xs, lower, upper, alpha=0.2, color="tab:blue", label="analytic ±3 SE")
    ax.plot(xs, [r.analytic for r in records], "-", color="tab:blue", label="analytic")
    ax.plot(xs, [r.empirical for r in records], "o", color="tab:red", label="empirical")
    ax.set_xlabel("sessions observed")
    ax.set_ylabel("replay success probability")
    ax.set_title("Observation attack vs variant response")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bruteforce_figure(records: Sequence[SimulationRecord], path: Path) -> None:
    """Guessing success vs per-window attempt budget."""
    xs = [r.attempts or 0 for r in records]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    lower, upper = _error_band(records)
    ax.fill_between(xs, lower, upper, alpha=0.2, color="tab:blue", label="analytic ±3 SE")
    ax.plot(xs, [r.analytic for r in records], "-", color="tab:blue", label="analytic")
    ax.plot(xs, [r.empirical for r in records], "o", color="tab:red", label="empirical")
    ax.set_xlabel("attempts per lockout window (T)")
    ax.set_ylabel("window success probability")
    k = records[0].k if records else 0
    ax.set_title(f"Online guessing under lockout (k={k})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_entropy_figure(model: FrequencyModel, k: int, path: Path) -> None:
    """Letter distribution with its theoretical vs effective bit counts."""
    report = effective_entropy_bits(model, k)
    letters = sorted(model.probabilities)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(letters, [model.probabilities[c] for c in letters], color="tab:blue")
    ax.axhline(1 / 26, color="tab:gray", linestyle="--", linewidth=1, label="uniform 1/26")
    ax.set_xlabel("letter")
    ax.set_ylabel("probability")
    ax.set_title(
        f"Model '{model.model_id}': {report.effective_bits_per_letter:.3f} bits/letter, "
        f"{report.effective_bits_total:.2f} effective vs {report.theoretical_bits:.2f} theoretical (k={k})"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def generate_report(
    out_dir: Path,
    seed: int = 1,
    trials: int = 20000,
    answer_lengths: Sequence[int] = (8, 8, 8, 8, 8, 8),
    model: Optional[FrequencyModel] = None,
) -> list[Path]:
    """Run the standard sweeps and write figures beside their CSV/JSON records.

    Returns the paths written. Deterministic for a given seed and arguments.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = model or FrequencyModel.uniform()

    fixture = SimulationFixture.from_lengths(answer_lengths)

    obs = observation_sweep(fixture, sessions_list=[0, 1, 2, 4, 8, 16, 32], trials=trials, seed=seed)
    brute = bruteforce_sweep(k=1, attempts_list=[1, 2, 4, 8, 12], trials=trials, seed=seed)

    written = []
    for name, records, renderer in (
        ("observation", obs, render_observation_figure),
        ("bruteforce", brute, render_bruteforce_figure),
    ):
        csv_path = out_dir / f"{name}.csv"
        json_path = out_dir / f"{name}.json"
        fig_path = out_dir / f"{name}.png"
        write_records_csv(records, csv_path)
        write_records_json(records, json_path)
        renderer(records, fig_path)
        written += [csv_path, json_path, fig_path]

    entropy_fig = out_dir / "entropy.png"
    render_entropy_figure(model, k=6, path=entropy_fig)
    written.append(entropy_fig)
    return written
