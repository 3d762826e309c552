"""Decision procedures for GBS sets.

F-type and F-equivalence tests, exact character sums in Z[omega_d], the
Yu-Oh indistinguishability detector and the prime-dimension classifier.
Every zero test on a character sum is exact: the sum is reduced modulo the
d-th cyclotomic polynomial over the integers.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import kernels
from .weyl import GbsSet, root_of_unity
from .zmod import DomainError, _check_modulus, is_prime

# --- integer polynomials (coefficient lists, lowest degree first) -------------


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials by a monic divisor."""
    den = _trim(list(den))
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    if len(rem) <= dd:
        return [0], _trim(rem or [0])
    quot = [0] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c:
            quot[k - dd] = c
            for j, a in enumerate(den):
                rem[k - dd + j] -= c * a
    return _trim(quot), _trim(rem[:dd] or [0])


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Phi_n: (x^n - 1) divided by Phi_e for every proper divisor e of n."""
    if n < 1:
        raise DomainError(f"cyclotomic_poly needs n >= 1, got {n}")
    p = [-1] + [0] * (n - 1) + [1]
    for e in range(1, n):
        if n % e == 0:
            p, r = poly_divmod(p, cyclotomic_poly(e))
            assert r == [0]
    return tuple(p)


# --- Z[omega_d] ---------------------------------------------------------------


@dataclass(frozen=True)
class CyclotomicInt:
    """sum_k coeffs[k] * omega_d**k with integer coefficients."""

    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_modulus(self.d)
        c = tuple(int(x) for x in self.coeffs)
        if len(c) != self.d:
            raise DomainError(f"need {self.d} coefficients, got {len(c)}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], d: int) -> CyclotomicInt:
        c = [0] * d
        for e in exponents:
            c[e % d] += 1
        return cls(d, tuple(c))

    def __add__(self, other: CyclotomicInt) -> CyclotomicInt:
        if self.d != other.d:
            raise DomainError("cyclotomic integers of different order")
        return CyclotomicInt(self.d, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def is_zero(self) -> bool:
        return vanishing_sum_is_zero(self)

    def __complex__(self) -> complex:
        return sum(c * root_of_unity(k, self.d) for k, c in enumerate(self.coeffs))


def vanishing_sum_is_zero(c: CyclotomicInt) -> bool:
    _, rem = poly_divmod(c.coeffs, cyclotomic_poly(c.d))
    return not any(rem)


def character_exponents(s: GbsSet, m: int, n: int) -> list[int]:
    """Exponents n_i*m - m_i*n mod d of the character sum at (m, n)."""
    d = s.d
    return [(ni * m - mi * n) % d for mi, ni in s.pairs]


def kappa(s: GbsSet, m: int, n: int) -> CyclotomicInt:
    """d * kappa_mn = sum_i omega^(n_i m - m_i n), as an exact cyclotomic integer."""
    return CyclotomicInt.from_exponents(character_exponents(s, m, n), s.d)


def lemma2_check(exponents: Sequence[int], d: int) -> bool:
    """Whether d roots of unity omega_d**e sum to zero, for prime d.

    For prime d this holds exactly when the exponents are a permutation of
    0..d-1; the exact reduction is what gets evaluated.
    """
    _check_modulus(d)
    if not is_prime(d):
        raise DomainError(f"lemma2_check needs a prime dimension, got {d}")
    if len(exponents) != d:
        raise DomainError(f"need exactly {d} exponents, got {len(exponents)}")
    return vanishing_sum_is_zero(CyclotomicInt.from_exponents(exponents, d))


def vanishing_table(s: GbsSet):
    """(d, d) uint8 array flagging the (m, n) whose character sum vanishes."""
    return kernels.vanishing_table(s.ms, s.ns, s.d, cyclotomic_poly(s.d))


def distinct_vanishing_character(s: GbsSet) -> Optional[tuple[int, int]]:
    """First (m, n) != (0, 0) whose character sum vanishes with all exponents distinct."""
    d = s.d
    for m in range(d):
        for n in range(d):
            if (m, n) == (0, 0):
                continue
            ex = character_exponents(s, m, n)
            if len(set(ex)) == len(ex) and kappa(s, m, n).is_zero():
                return (m, n)
    return None


def difference_pairs(s: GbsSet) -> set[tuple[int, int]]:
    d = s.d
    return {
        ((mi - mj) % d, (ni - nj) % d)
        for i, (mi, ni) in enumerate(s.pairs)
        for j, (mj, nj) in enumerate(s.pairs)
        if i != j
    }


def yu_oh_indistinguishable(s: GbsSet) -> bool:
    """True when every vanishing character (m, n) is a difference pair of the set.

    A true result certifies that the d states cannot be distinguished by LOCC,
    including two-way protocols.
    """
    if len(s) != s.d:
        raise DomainError(f"the Yu-Oh detector needs exactly d={s.d} states, got {len(s)}")
    table = vanishing_table(s)
    diffs = difference_pairs(s)
    d = s.d
    return all(
        (m, n) in diffs for m in range(d) for n in range(d) if table[m, n]
    )


# --- F-type and F-equivalence -------------------------------------------------


@dataclass(frozen=True)
class FWitness:
    alpha: int
    beta: int

    def values(self, s: GbsSet) -> list[int]:
        return [(m * self.alpha + n * self.beta) % s.d for m, n in s.pairs]

    def as_list(self) -> list[int]:
        return [self.alpha, self.beta]


def is_f_type(s: GbsSet) -> bool:
    ms = s.ms
    return len(set(ms)) == len(ms)


def f_equivalence_witness(s: GbsSet) -> Optional[FWitness]:
    """Lexicographically first (alpha, beta) making m_i alpha + n_i beta distinct mod d."""
    w = kernels.first_witness(s.ms, s.ns, s.d)
    return None if w is None else FWitness(int(w[0]), int(w[1]))


def witness_is_valid(s: GbsSet, w: FWitness) -> bool:
    vals = w.values(s)
    return len(set(vals)) == len(vals)


# --- verdicts -----------------------------------------------------------------


class Status(str, enum.Enum):
    DISTINGUISHABLE = "Distinguishable"
    INDISTINGUISHABLE = "Indistinguishable"
    ONE_WAY_CERTIFIED = "DistinguishableOneWayCertified"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Optional[FWitness] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else self.witness.as_list(),
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> Verdict:
        w = obj.get("witness")
        return cls(Status(obj["status"]), None if w is None else FWitness(*w), obj.get("detail", ""))


SUFFICIENCY_ONLY = "sufficiency only"


def classify_prime(s: GbsSet) -> Verdict:
    """LOCC verdict for d states in prime dimension d (necessary and sufficient)."""
    d = s.d
    if not is_prime(d) or len(s) != d:
        raise DomainError(
            f"classify_prime needs prime d and exactly d states (got d={d}, {len(s)} states); "
            "use f_equivalence_witness, which is a sufficient condition only"
        )
    w = f_equivalence_witness(s)
    if w is None:
        return Verdict(Status.INDISTINGUISHABLE, None, "not F-equivalent; prime d with d states")
    return Verdict(Status.DISTINGUISHABLE, w, "F-equivalent; prime d with d states")


def classify(s: GbsSet) -> Verdict:
    """Best verdict available for any set.

    Outside prime d with d states only the sufficient direction is known, so
    the result is a one-way certificate or Unknown.
    """
    d = s.d
    if is_prime(d) and len(s) == d:
        return classify_prime(s)
    if len(s) > d:
        return Verdict(Status.UNKNOWN, None, f"more than d={d} states; outside the classifier")
    w = f_equivalence_witness(s)
    if w is not None:
        return Verdict(Status.ONE_WAY_CERTIFIED, w, f"F-equivalent ({SUFFICIENCY_ONLY})")
    return Verdict(Status.UNKNOWN, None, f"no F-equivalence witness ({SUFFICIENCY_ONLY})")
