"""Weyl (generalized Pauli) operators omega^p X^m Z^n and generalized Bell states.

Phases are exponents of omega_d = exp(2 pi i / d) and are combined exactly;
floats only appear in the dense realizations.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .zmod import DomainError, _check_modulus, _same_modulus, _value

MAX_DIMENSION = 64


def omega(d: int) -> complex:
    return cmath.exp(2j * math.pi / d)


def root_of_unity(k: int, d: int) -> complex:
    """omega_d**k evaluated from the reduced exponent."""
    return cmath.exp(2j * math.pi * (k % d) / d)


@dataclass(frozen=True, order=True)
class WeylOp:
    """omega_d**phase * X**m * Z**n in normal order (X powers left of Z powers)."""

    m: int
    n: int
    phase: int = 0
    d: int = 2

    def __post_init__(self):
        d = _check_modulus(self.d)
        for name in ("m", "n", "phase"):
            object.__setattr__(self, name, _value(getattr(self, name), d))

    @classmethod
    def identity(cls, d: int) -> WeylOp:
        return cls(0, 0, 0, d)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.m, self.n)

    def __matmul__(self, other: WeylOp) -> WeylOp:
        return weyl_compose(self, other)


def weyl_compose(a: WeylOp, b: WeylOp) -> WeylOp:
    # Z^n X^m = omega^(n m) X^m Z^n
    d = _same_modulus(a.d, b.d)
    return WeylOp(a.m + b.m, a.n + b.n, a.phase + b.phase + a.n * b.m, d)


def weyl_adjoint(a: WeylOp) -> WeylOp:
    return WeylOp(-a.m, -a.n, -a.phase + a.n * a.m, a.d)


def weyl_power(a: WeylOp, k: int) -> WeylOp:
    if k < 0:
        a, k = weyl_adjoint(a), -k
    out = WeylOp.identity(a.d)
    for _ in range(k):
        out = weyl_compose(out, a)
    return out


def shift_matrix(d: int) -> np.ndarray:
    """X = sum_a |a+1><a|."""
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_matrix(d: int) -> np.ndarray:
    """Z = sum_a omega^a |a><a|."""
    return np.diag([root_of_unity(a, d) for a in range(d)])


def weyl_matrix(a: WeylOp) -> np.ndarray:
    d = a.d
    out = np.zeros((d, d), dtype=complex)
    # X^m Z^n |k> = omega^(n k) |k + m>
    for k in range(d):
        out[(k + a.m) % d, k] = root_of_unity(a.phase + a.n * k, d)
    return out


def mes_inner(w1: WeylOp, w2: WeylOp) -> complex:
    """<W1|W2> = tr(W1^dagger W2) / d, evaluated exactly on exponents."""
    _same_modulus(w1.d, w2.d)
    prod = weyl_compose(weyl_adjoint(w1), w2)
    if prod.m or prod.n:
        return 0j
    return root_of_unity(prod.phase, prod.d)


def gbs_state_vector(a: WeylOp) -> np.ndarray:
    """Amplitudes W_ab / sqrt(d) of |W> on |a>|b>, flattened with index a*d + b."""
    return weyl_matrix(a).reshape(-1) / math.sqrt(a.d)


@dataclass(frozen=True)
class GbsSet:
    """Distinct index pairs (m_i, n_i) naming the states |X^m_i Z^n_i>, sorted."""

    d: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        d = _check_modulus(self.d)
        if d > MAX_DIMENSION:
            raise DomainError(f"dimension {d} above the supported limit {MAX_DIMENSION}")
        reduced = [(_value(m, d), _value(n, d)) for m, n in self.pairs]
        canon = tuple(sorted(set(reduced)))
        if len(canon) != len(reduced):
            raise DomainError("duplicate states in GBS set")
        if not 1 <= len(canon) <= d * d:
            raise DomainError(f"GBS set size must be in [1, {d * d}], got {len(canon)}")
        object.__setattr__(self, "pairs", canon)

    @classmethod
    def of(cls, pairs: Iterable, d: int) -> GbsSet:
        return cls(d, tuple(tuple(p) for p in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    @property
    def ms(self) -> list[int]:
        return [m for m, _ in self.pairs]

    @property
    def ns(self) -> list[int]:
        return [n for _, n in self.pairs]

    def ops(self) -> list[WeylOp]:
        return [WeylOp(m, n, 0, self.d) for m, n in self.pairs]

    def to_dict(self) -> dict:
        return {"d": self.d, "states": [list(p) for p in self.pairs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj) -> GbsSet:
        if not isinstance(obj, dict) or "d" not in obj or "states" not in obj:
            raise DomainError('GBS set JSON must look like {"d": 4, "states": [[0,0], ...]}')
        d = obj["d"]
        states = obj["states"]
        if not isinstance(states, list) or not all(
            isinstance(p, (list, tuple)) and len(p) == 2 and all(_is_int(x) for x in p)
            for p in states
        ):
            raise DomainError('"states" must be a list of integer pairs')
        if not _is_int(d):
            raise DomainError('"d" must be an integer')
        return cls.of(states, d)

    @classmethod
    def from_json(cls, text: str) -> GbsSet:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed JSON: {exc}") from None
        return cls.from_dict(obj)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)
