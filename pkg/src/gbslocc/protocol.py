"""Monte-Carlo simulation of the computational-basis protocol for F-type sets.

Alice and Bob both measure in {|a>} and compare: |X^m Z^n> has support only on
|a + m>|a>, each with probability 1/d, so a_A - a_B = m identifies the state
whenever the m_i are distinct.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .criterion import is_f_type
from .weyl import GbsSet, WeylOp
from .zmod import DomainError


@dataclass(frozen=True)
class TrialRecord:
    true_index: int
    alice_outcome: int
    bob_outcome: int
    decoded_index: Optional[int]


@dataclass(eq=False)
class DiscriminationResult:
    trials: int
    success_rate: float
    confusion: np.ndarray      # confusion[true, decoded]
    failures: int = 0

    def to_dict(self) -> dict:
        return {"trials": self.trials, "success_rate": self.success_rate, "confusion": self.confusion.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> DiscriminationResult:
        conf = np.asarray(obj["confusion"], dtype=np.int64)
        return cls(int(obj["trials"]), float(obj["success_rate"]), conf, int(obj["trials"] - np.trace(conf)))


def sample_outcomes(w: WeylOp, rng: np.random.Generator, size: Optional[int] = None):
    """Joint computational-basis outcomes (a_A, a_B) for |X^m Z^n>.

    The phase exponent n never enters: every amplitude has modulus 1/sqrt(d).
    """
    b = rng.integers(0, w.d, size=size)
    a = (b + w.m) % w.d
    if size is None:
        return int(a), int(b)
    return a, b


def decode_table(s: GbsSet) -> dict[int, int]:
    """Outcome difference m_i -> state index i."""
    if not is_f_type(s):
        raise DomainError("the computational-basis protocol needs distinct m_i (an F-type set)")
    return {m: i for i, (m, _) in enumerate(s.pairs)}


def run_trials(s: GbsSet, trials: int, rng: np.random.Generator) -> list[TrialRecord]:
    """Per-trial records; for inspection and small runs."""
    table = decode_table(s)
    ops = s.ops()
    out = []
    for _ in range(trials):
        i = int(rng.integers(0, len(s)))
        a, b = sample_outcomes(ops[i], rng)
        out.append(TrialRecord(i, a, b, table.get((a - b) % s.d)))
    return out


def simulate_discrimination(s: GbsSet, trials: int, seed: int, batch: int = 1 << 16) -> DiscriminationResult:
    if trials < 0:
        raise DomainError("trials must be non-negative")
    table = decode_table(s)
    d, ell = s.d, len(s)
    lookup = np.full(d, -1, dtype=np.int64)
    for m, i in table.items():
        lookup[m] = i
    ms = np.asarray(s.ms, dtype=np.int64)
    rng = np.random.default_rng(seed)
    confusion = np.zeros((ell, ell), dtype=np.int64)
    failures = 0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        truth = rng.integers(0, ell, size=k)
        bob = rng.integers(0, d, size=k)
        alice = (bob + ms[truth]) % d
        decoded = lookup[(alice - bob) % d]
        miss = decoded < 0
        failures += int(miss.sum())
        np.add.at(confusion, (truth[~miss], decoded[~miss]), 1)
        done += k
    hits = int(np.trace(confusion))
    rate = hits / trials if trials else 1.0
    return DiscriminationResult(trials, rate, confusion, trials - hits)
