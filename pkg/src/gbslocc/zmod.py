"""Residue arithmetic mod d and the group Sp(d) of unit-determinant 2x2 matrices.

Every value carries its modulus; combining values with different moduli raises
:class:`ModulusMismatch`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator


class DomainError(ValueError):
    """Input outside the domain of an operation (bad modulus, wrong set size, ...)."""


class ModulusMismatch(DomainError):
    pass


class NotSymplectic(DomainError):
    """Raised by :func:`sp_new` when the determinant is not 1 mod d."""

    def __init__(self, det: int, d: int):
        super().__init__(f"determinant {det} != 1 (mod {d})")
        self.det = det
        self.d = d


def _check_modulus(d: int) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"modulus must be an integer >= 2, got {d!r}")
    return d


def _same_modulus(*ds: int) -> int:
    first = ds[0]
    for other in ds[1:]:
        if other != first:
            raise ModulusMismatch(f"modulus mismatch: {first} vs {other}")
    return first


def is_prime(d: int) -> bool:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"is_prime needs an integer >= 2, got {d!r}")
    if d < 4:
        return True
    if d % 2 == 0:
        return False
    for p in range(3, math.isqrt(d) + 1, 2):
        if d % p == 0:
            return False
    return True


@dataclass(frozen=True, order=True)
class Residue:
    value: int
    d: int

    def __post_init__(self):
        _check_modulus(self.d)
        object.__setattr__(self, "value", int(self.value) % self.d)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            _same_modulus(self.d, other.d)
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return v if v is NotImplemented else Residue(self.value + v, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return v if v is NotImplemented else Residue(self.value - v, self.d)

    def __rsub__(self, other):
        v = self._coerce(other)
        return v if v is NotImplemented else Residue(v - self.value, self.d)

    def __mul__(self, other):
        v = self._coerce(other)
        return v if v is NotImplemented else Residue(self.value * v, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.d)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


def _value(x, d: int) -> int:
    """Reduce an int or same-modulus Residue to a plain int in [0, d)."""
    if isinstance(x, Residue):
        _same_modulus(x.d, d)
        return x.value
    return int(x) % d


@dataclass(frozen=True)
class SpMatrix:
    """[[alpha, beta], [gamma, delta]] mod d with determinant 1.

    Build through :func:`sp_new`; direct construction also validates.
    """

    alpha: int
    beta: int
    gamma: int
    delta: int
    d: int

    def __post_init__(self):
        d = _check_modulus(self.d)
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, _value(getattr(self, name), d))
        det = (self.alpha * self.delta - self.beta * self.gamma) % d
        if det != 1:
            raise NotSymplectic(det, d)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def rows(self) -> list[list[int]]:
        return [[self.alpha, self.beta], [self.gamma, self.delta]]

    def __matmul__(self, other: SpMatrix) -> SpMatrix:
        return sp_compose(self, other)


def sp_new(alpha, beta, gamma, delta, d: int) -> SpMatrix:
    return SpMatrix(alpha, beta, gamma, delta, d)


def sp_identity(d: int) -> SpMatrix:
    return SpMatrix(1, 0, 0, 1, d)


def sp_compose(a: SpMatrix, b: SpMatrix) -> SpMatrix:
    d = _same_modulus(a.d, b.d)
    return SpMatrix(
        a.alpha * b.alpha + a.beta * b.gamma,
        a.alpha * b.beta + a.beta * b.delta,
        a.gamma * b.alpha + a.delta * b.gamma,
        a.gamma * b.beta + a.delta * b.delta,
        d,
    )


def sp_inverse(m: SpMatrix) -> SpMatrix:
    return SpMatrix(m.delta, -m.beta, -m.gamma, m.alpha, m.d)


def sp_elements(d: int) -> Iterator[SpMatrix]:
    """All elements of Sp(d) in lexicographic order of (alpha, beta, gamma, delta)."""
    _check_modulus(d)
    for a, b, c, e in itertools.product(range(d), repeat=4):
        if (a * e - b * c) % d == 1:
            yield SpMatrix(a, b, c, e, d)


def sp_order(d: int) -> int:
    """|Sp(d)| = d^3 * prod_{p | d} (1 - 1/p^2)."""
    _check_modulus(d)
    n = d**3
    for p in range(2, d + 1):
        if d % p == 0 and is_prime(p):
            n = n // (p * p) * (p * p - 1)
    return n


def random_sp(d: int, rng) -> SpMatrix:
    """Uniform element of Sp(d) by rejection sampling; ``rng`` is a numpy Generator."""
    _check_modulus(d)
    while True:
        a, b, c, e = (int(x) for x in rng.integers(0, d, size=4))
        if (a * e - b * c) % d == 1:
            return SpMatrix(a, b, c, e, d)


def complete_row(alpha: int, beta: int, d: int) -> SpMatrix:
    """An Sp(d) matrix whose top row is (alpha, beta) / gcd(alpha, beta).

    Dividing by the gcd keeps distinct values ``m*alpha + n*beta`` distinct, and
    a coprime row always extends to determinant 1 over the integers.  A zero
    row is replaced by (1, 0).
    """
    _check_modulus(d)
    a1, b1 = alpha % d, beta % d
    c = math.gcd(a1, b1)
    if c == 0:
        return sp_identity(d)
    a2, b2 = a1 // c, b1 // c
    # a2*x + b2*y = 1  ->  delta = x, gamma = -y
    g, x, y = _ext_gcd(a2, b2)
    assert g == 1
    return SpMatrix(a2, b2, -y, x, d)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class AffineAction:
    """(m, n) -> matrix @ (m, n) + shift, mod d."""

    matrix: SpMatrix
    shift: tuple[int, int] = (0, 0)

    def __post_init__(self):
        d = self.matrix.d
        mu0, nu0 = self.shift
        object.__setattr__(self, "shift", (_value(mu0, d), _value(nu0, d)))

    @property
    def d(self) -> int:
        return self.matrix.d

    def __call__(self, pair):
        return affine_apply(self, pair)


def affine_apply(a: AffineAction, pair) -> tuple[int, int]:
    d = a.d
    m, n = (_value(x, d) for x in pair)
    s = a.matrix
    mu0, nu0 = a.shift
    return ((s.alpha * m + s.beta * n + mu0) % d, (s.gamma * m + s.delta * n + nu0) % d)


def random_affine(d: int, rng, shift: bool = True) -> AffineAction:
    mat = random_sp(d, rng)
    if shift:
        mu0, nu0 = (int(x) for x in rng.integers(0, d, size=2))
    else:
        mu0 = nu0 = 0
    return AffineAction(mat, (mu0, nu0))
