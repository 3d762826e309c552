"""Unitaries realizing Sp(d) elements by conjugation, and local transformations of GBS sets."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .criterion import FWitness
from .weyl import GbsSet, WeylOp, clock_matrix, shift_matrix, weyl_matrix, weyl_power
from .zmod import AffineAction, SpMatrix, _same_modulus, affine_apply, complete_row

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CliffordUnitary:
    """U with U X U^dag ~ X^alpha Z^gamma and U Z U^dag ~ X^beta Z^delta."""

    sp: SpMatrix
    matrix: np.ndarray

    @property
    def d(self) -> int:
        return self.sp.d

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "sp": self.sp.rows(),
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> CliffordUnitary:
        (a, b), (c, e) = obj["sp"]
        sp = SpMatrix(a, b, c, e, obj["d"])
        mat = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        return cls(sp, mat)


def unit_order_phase(op: WeylOp) -> complex:
    """Scalar lam with (lam * op)^d = 1, of smallest non-negative angle.

    (X^m Z^n)^d = omega_d^p; the admissible angles are 2 pi (k d - p) / d^2 and
    the smallest non-negative one is 2 pi ((-p) mod d) / d^2.
    """
    d = op.d
    p = weyl_power(WeylOp(op.m, op.n, 0, d), d).phase
    return cmath.exp(2j * math.pi * ((-p) % d) / (d * d))


def _fixed(m: int, n: int, d: int) -> np.ndarray:
    op = WeylOp(m, n, 0, d)
    return unit_order_phase(op) * weyl_matrix(op)


def build_unitary(sp: SpMatrix) -> CliffordUnitary:
    d = sp.d
    xp = _fixed(sp.alpha, sp.gamma, d)
    zp = _fixed(sp.beta, sp.delta, d)
    vals, vecs = np.linalg.eig(zp)
    ks = np.rint(np.angle(vals) * d / (2 * math.pi)).astype(int) % d
    if not np.allclose(vals, np.exp(2j * math.pi * ks / d), atol=1e-8):
        raise np.linalg.LinAlgError("eigenvalues of Z' are not d-th roots of unity")
    first = int(np.argsort(ks, kind="stable")[0])
    k0 = int(ks[first])
    psi = vecs[:, first]
    psi = psi / np.linalg.norm(psi)
    j = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[j]) / psi[j])
    # columns psi_j = X'^j psi_0; U = sum_k |psi_{k - k0}><k|
    cols = [psi]
    for _ in range(d - 1):
        cols.append(xp @ cols[-1])
    u = np.empty((d, d), dtype=complex)
    for k in range(d):
        u[:, k] = cols[(k - k0) % d]
    return CliffordUnitary(sp, u)


def _fit_residual(actual: np.ndarray, target: np.ndarray) -> float:
    idx = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    if abs(actual[idx]) == 0:
        return float(np.linalg.norm(actual - target))
    lam = actual[idx] / target[idx]
    lam /= abs(lam)
    return float(np.linalg.norm(actual - lam * target))


def conjugation_residuals(u: np.ndarray, sp: SpMatrix) -> tuple[float, float]:
    d = sp.d
    uh = u.conj().T
    rx = _fit_residual(u @ shift_matrix(d) @ uh, weyl_matrix(WeylOp(sp.alpha, sp.gamma, 0, d)))
    rz = _fit_residual(u @ clock_matrix(d) @ uh, weyl_matrix(WeylOp(sp.beta, sp.delta, 0, d)))
    return rx, rz


def verify_clifford(u: CliffordUnitary, tol: float = TOL) -> tuple[bool, tuple[float, float]]:
    res = conjugation_residuals(u.matrix, u.sp)
    return (res[0] < tol and res[1] < tol), res


def unitarity_residual(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def transform_set(s: GbsSet, a: AffineAction) -> GbsSet:
    _same_modulus(s.d, a.d)
    return GbsSet.of((affine_apply(a, p) for p in s.pairs), s.d)


def witness_action(w: FWitness, d: int) -> AffineAction:
    """Shift-free action whose first row is the witness divided by its gcd.

    It sends a set witnessed by ``w`` to an F-type set.
    """
    return AffineAction(complete_row(w.alpha, w.beta, d), (0, 0))
