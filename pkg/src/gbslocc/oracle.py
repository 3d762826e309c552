"""One-way LOCC certificates via the Ghosh criterion.

A set is one-way distinguishable iff some |phi> makes the states
X^m_i Z^n_i |phi> pairwise orthogonal, i.e. <phi| X^(m_i-m_j) Z^(n_i-n_j) |phi> = 0
for all i != j.  Certificates come from an analytic eigenstate (F-equivalent
sets), the block ansatz for d = d1^2, or a numerical search on the unit sphere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from . import kernels
from .criterion import FWitness, witness_is_valid
from .weyl import GbsSet, WeylOp, weyl_matrix
from .zmod import DomainError

CERT_TOL = 1e-9


class OracleStatus(str, enum.Enum):
    CERTIFIED = "CertifiedOneWay"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SearchBudget:
    restarts: int = 64
    max_iters: int = 2000
    tol: float = CERT_TOL

    def to_dict(self) -> dict:
        return {"restarts": self.restarts, "max_iters": self.max_iters, "tol": self.tol}


@dataclass(eq=False)
class OracleReport:
    status: OracleStatus
    phi: Optional[np.ndarray]
    residual: float
    restarts: int = 0
    seed: Optional[int] = None
    max_iters: int = 0
    tol: float = CERT_TOL
    restart_index: Optional[int] = None
    iterations: int = 0

    @property
    def certified(self) -> bool:
        return self.status is OracleStatus.CERTIFIED

    def to_dict(self, with_phi: bool = True) -> dict:
        out = {"status": self.status.value, "residual": self.residual}
        if with_phi:
            phi = self.phi if self.phi is not None else np.zeros(0, dtype=complex)
            out["phi_re"] = phi.real.tolist()
            out["phi_im"] = phi.imag.tolist()
        out.update(
            restarts=self.restarts,
            seed=self.seed,
            max_iters=self.max_iters,
            tol=self.tol,
            restart_index=self.restart_index,
            iterations=self.iterations,
        )
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> OracleReport:
        phi = None
        if obj.get("phi_re") is not None:
            phi = np.asarray(obj["phi_re"], dtype=float) + 1j * np.asarray(obj["phi_im"], dtype=float)
            if phi.size == 0:
                phi = None
        return cls(
            OracleStatus(obj["status"]),
            phi,
            float(obj["residual"]),
            restarts=obj.get("restarts", 0),
            seed=obj.get("seed"),
            max_iters=obj.get("max_iters", 0),
            tol=obj.get("tol", CERT_TOL),
            restart_index=obj.get("restart_index"),
            iterations=obj.get("iterations", 0),
        )


def difference_terms(s: GbsSet) -> tuple[list[int], list[int], list[int]]:
    """Distinct (m_i - m_j, n_i - n_j), i != j, with their multiplicities."""
    d = s.d
    counts: dict[tuple[int, int], int] = {}
    for i, (mi, ni) in enumerate(s.pairs):
        for j, (mj, nj) in enumerate(s.pairs):
            if i != j:
                key = ((mi - mj) % d, (ni - nj) % d)
                counts[key] = counts.get(key, 0) + 1
    keys = sorted(counts)
    return [k[0] for k in keys], [k[1] for k in keys], [counts[k] for k in keys]


def ghosh_objective(s: GbsSet, phi) -> tuple[float, np.ndarray]:
    """f(phi) = sum_{i != j} |<phi|X^(m_i-m_j) Z^(n_i-n_j)|phi>|^2 and its gradient.

    The gradient is returned as the complex vector df/dRe(phi) + i df/dIm(phi).
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (s.d,):
        raise DomainError(f"phi must have shape ({s.d},), got {phi.shape}")
    da, db, c = difference_terms(s)
    f, g = kernels.value_grad(phi, da, db, c, s.d)
    return float(f), np.asarray(g)


def verify_ghosh(s: GbsSet, phi, tol: float = CERT_TOL) -> tuple[bool, float]:
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (s.d,):
        raise DomainError(f"phi must have shape ({s.d},), got {phi.shape}")
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"phi must be normalized (norm {norm})")
    residual = 0.0
    pairs = s.pairs
    for i, (mi, ni) in enumerate(pairs):
        for j, (mj, nj) in enumerate(pairs):
            if i != j:
                op = weyl_matrix(WeylOp(mi - mj, ni - nj, 0, s.d))
                residual = max(residual, abs(np.vdot(phi, op @ phi)))
    return bool(residual < tol), float(residual)


def _first_eigenvector(mat: np.ndarray) -> np.ndarray:
    # complex Schur form of a normal matrix: orthonormal eigenvectors even when degenerate
    t, z = scipy.linalg.schur(mat, output="complex")
    angles = np.angle(np.diag(t)) % (2 * math.pi)
    angles[angles > 2 * math.pi - 1e-9] = 0.0
    angles = np.round(angles, 9)
    vec = z[:, int(np.argsort(angles, kind="stable")[0])]
    vec = vec / np.linalg.norm(vec)
    j = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[j]) / vec[j])


def eigenstate_phi(s: GbsSet, w: FWitness) -> np.ndarray:
    """Eigenstate of X^(-beta) Z^alpha; it anticommutes (up to a phase != 1) with every difference."""
    if not witness_is_valid(s, w):
        raise DomainError(f"({w.alpha}, {w.beta}) is not an F-equivalence witness for this set")
    v = weyl_matrix(WeylOp(-w.beta, w.alpha, 0, s.d))
    return _first_eigenvector(v)


def block_ansatz_phi(d1: int) -> np.ndarray:
    """Uniform superposition of the first d1 basis states of C^(d1^2)."""
    if d1 < 2:
        raise DomainError(f"d1 must be >= 2, got {d1}")
    phi = np.zeros(d1 * d1, dtype=complex)
    phi[:d1] = 1 / math.sqrt(d1)
    return phi


def block_family(d1: int) -> GbsSet:
    """{X^(mu d1) Z^(nu d1)}, mu, nu < d1: not F-equivalent yet one-way distinguishable."""
    d = d1 * d1
    return GbsSet.of(((mu * d1, nu * d1) for mu in range(d1) for nu in range(d1)), d)


def random_unit_vectors(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    x = rng.standard_normal((count, 2, d))
    phi = x[:, 0] + 1j * x[:, 1]
    return phi / np.linalg.norm(phi, axis=1, keepdims=True)


def search_phi(
    s: GbsSet,
    restarts: int = 64,
    max_iters: int = 2000,
    tol: float = CERT_TOL,
    seed: int = 0,
    *,
    step0: float = 0.1,
    window: int = 50,
    rtol: float = 1e-6,
    min_step: float = 1e-14,
    chunk: int = 8,
) -> OracleReport:
    """Minimize the Ghosh objective from ``restarts`` seeded random starts.

    Restarts are processed in index order and the lowest-index restart whose
    objective drops below tol**2 (and passes :func:`verify_ghosh`) is reported.
    A restart stops early once its objective improves by less than ``rtol``
    (relative) over ``window`` iterations.  Inconclusive never asserts
    indistinguishability.
    """
    if restarts < 1 or max_iters < 0:
        raise DomainError("restarts must be >= 1 and max_iters >= 0")
    d = s.d
    da, db, c = difference_terms(s)
    starts = random_unit_vectors(np.random.default_rng(seed), restarts, d)
    best = None  # (f, index, phi, iters)
    for lo in range(0, restarts, chunk):
        block = starts[lo : lo + chunk]
        phis, fs, its, sts = kernels.descend_batch(
            block, da, db, c, d, max_iters, tol, step0, window, rtol, min_step
        )
        for r in range(block.shape[0]):
            idx = lo + r
            if sts[r] == kernels.CERTIFIED:
                ok, res = verify_ghosh(s, phis[r], tol)
                if ok:
                    return OracleReport(
                        OracleStatus.CERTIFIED, phis[r], res, restarts, seed, max_iters, tol, idx, int(its[r])
                    )
            if best is None or fs[r] < best[0]:
                best = (float(fs[r]), idx, phis[r], int(its[r]))
    _, idx, phi, its = best
    _, res = verify_ghosh(s, phi, tol)
    return OracleReport(OracleStatus.INCONCLUSIVE, phi, res, restarts, seed, max_iters, tol, idx, its)
