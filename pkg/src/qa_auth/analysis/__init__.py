"""Security arithmetic and Monte-Carlo attacker simulations.

`entropy` holds the closed-form password-space and letter-entropy
calculations; `simulate` plays guessing and observation attackers against
fixture accounts and pairs every empirical rate with its analytic oracle;
`report` renders sweeps to CSV and matplotlib figures.
"""

from .entropy import (
    EntropyReport,
    FrequencyModel,
    effective_entropy_bits,
    online_guess_success,
    theoretical_space_bits,
)
from .simulate import (
    GuessingPolicy,
    ObservationLog,
    SimulationFixture,
    SimulationRecord,
    expected_observation_success,
    observation_success_oracle,
    simulate_observation_attack,
    simulate_online_bruteforce,
)

__all__ = [
    "EntropyReport",
    "FrequencyModel",
    "GuessingPolicy",
    "ObservationLog",
    "SimulationFixture",
    "SimulationRecord",
    "effective_entropy_bits",
    "expected_observation_success",
    "observation_success_oracle",
    "online_guess_success",
    "simulate_observation_attack",
    "simulate_online_bruteforce",
    "theoretical_space_bits",
]
