"""Password-space and letter-entropy arithmetic.

Six single-letter probes over a 26-letter alphabet give a theoretical
space of 26**6 equally likely secrets, log2(26**6) ~ 28.2 bits. Effective
entropy under a non-uniform letter model is the per-letter Shannon entropy
times the probe count; it never exceeds the theoretical figure.

Probabilities at the 26**-6 scale are computed with rational arithmetic so
tiny rates are reported exactly rather than rounding to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

ALPHABET = "abcdefghijklmnopqrstuvwxyz"

# Loader tolerance for letter-frequency tables rounded to few decimals.
_LOAD_SUM_TOLERANCE = 1e-3
# Post-normalization invariant on the stored distribution.
_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FrequencyModel:
    """Per-letter probability model over the lowercase alphabet."""

    probabilities: Mapping[str, float]
    model_id: str = "custom"

    def __post_init__(self) -> None:
        probs = {letter: 0.0 for letter in ALPHABET}
        for letter, p in dict(self.probabilities).items():
            if letter not in probs:
                raise ValueError(f"model key must be a lowercase letter, got {letter!r}")
            if p < 0:
                raise ValueError(f"probability for {letter!r} is negative")
            probs[letter] = float(p)
        total = math.fsum(probs.values())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1 (got {total!r})")
        object.__setattr__(self, "probabilities", probs)

    def probability(self, letter: str) -> float:
        return self.probabilities[letter]

    @property
    def is_degenerate(self) -> bool:
        """True when a single letter carries all the mass (entropy 0)."""
        return any(p >= 1.0 - _SUM_TOLERANCE for p in self.probabilities.values())

    @classmethod
    def uniform(cls) -> "FrequencyModel":
        return cls({letter: 1.0 / 26.0 for letter in ALPHABET}, model_id="uniform")

    @classmethod
    def from_lines(cls, lines: Iterable[str], model_id: str = "custom") -> "FrequencyModel":
        """Parse `letter:probability` lines; '#' starts a comment.

        Tables rounded to a few decimals are renormalized, but a sum off by
        more than 0.1% is rejected as a malformed file.
        """
        raw: dict[str, float] = {}
        for lineno, line in enumerate(lines, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                letter, value = text.split(":")
                letter = letter.strip().lower()
                p = float(value)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: expected 'letter:probability', got {line!r}") from exc
            if letter in raw:
                raise ValueError(f"line {lineno}: duplicate entry for {letter!r}")
            raw[letter] = p
        if not raw:
            raise ValueError("frequency file defines no letters")
        total = math.fsum(raw.values())
        if abs(total - 1.0) > _LOAD_SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        return cls({k: v / total for k, v in raw.items()}, model_id=model_id)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FrequencyModel":
        path = Path(path)
        return cls.from_lines(path.read_text().splitlines(), model_id=path.stem)


@dataclass(frozen=True)
class EntropyReport:
    """Theoretical vs effective bits for a k-probe challenge."""

    theoretical_bits: float
    effective_bits_per_letter: float
    effective_bits_total: float
    k: int
    alphabet_size: int
    model_id: str
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "theoretical_bits": self.theoretical_bits,
            "effective_bits_per_letter": self.effective_bits_per_letter,
            "effective_bits_total": self.effective_bits_total,
            "k": self.k,
            "alphabet_size": self.alphabet_size,
            "model_id": self.model_id,
            "degenerate": self.degenerate,
        }


def theoretical_space_bits(k: int, alphabet_size: int = 26) -> float:
    """k * log2(alphabet_size): bits in the space of k uniform letters."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    return k * math.log2(alphabet_size)


def online_guess_success(k: int, attempts: int, alphabet_size: int = 26) -> float:
    """Probability a uniform guesser wins within `attempts` tries.

    1 - (1 - alphabet_size**-k)**attempts, evaluated with exact rational
    arithmetic before the final float conversion.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if attempts < 0:
        raise ValueError("attempts must be >= 0")
    per_attempt = Fraction(1, alphabet_size**k)
    return float(1 - (1 - per_attempt) ** attempts)


def effective_entropy_bits(model: FrequencyModel, k: int) -> EntropyReport:
    """Shannon entropy of one probe letter under `model`, scaled to k probes.

    A degenerate model (one letter with probability 1) yields 0 bits and is
    flagged on the report rather than raising.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    per_letter = -math.fsum(p * math.log2(p) for p in model.probabilities.values() if p > 0.0)
    per_letter = max(0.0, per_letter)  # clamp -0.0 from the degenerate case
    return EntropyReport(
        theoretical_bits=theoretical_space_bits(k),
        effective_bits_per_letter=per_letter,
        effective_bits_total=k * per_letter,
        k=k,
        alphabet_size=26,
        model_id=model.model_id,
        degenerate=model.is_degenerate,
    )
