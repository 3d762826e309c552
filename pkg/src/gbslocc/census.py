"""Census of all (or sampled) l-subsets of the d^2 generalized Bell states.

Subsets are identified with lexicographic combination ranks of the pairs
(m, n) ordered as m*d + n.  Rows are written as JSON lines in rank order, so
the output does not depend on the number of workers, and a checkpoint file
allows a killed run to resume with byte-identical output.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .criterion import (
    FWitness,
    Status,
    Verdict,
    classify,
    f_equivalence_witness,
    is_f_type,
    witness_is_valid,
    yu_oh_indistinguishable,
)
from .oracle import SearchBudget, search_phi
from .weyl import GbsSet
from .zmod import DomainError, is_prime, sp_elements, sp_order

log = logging.getLogger(__name__)

MAX_CENSUS_DIMENSION = 8
DEFAULT_CEILING = 5_000_000
ORBIT_CEILING = 200_000


class CensusError(RuntimeError):
    pass


# --- combination ranks --------------------------------------------------------


def unrank_combination(rank: int, n: int, k: int) -> tuple[int, ...]:
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    if not 0 <= rank < math.comb(n, k):
        raise DomainError(f"rank {rank} out of range for C({n}, {k})")
    out = []
    c = 0
    for i in range(k):
        while True:
            block = math.comb(n - c - 1, k - i - 1)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


def rank_combination(combo, n: int) -> int:
    k = len(combo)
    rank = 0
    prev = -1
    for i, c in enumerate(combo):
        for skipped in range(prev + 1, c):
            rank += math.comb(n - skipped - 1, k - i - 1)
        prev = c
    return rank


def _subset(combo, d: int) -> GbsSet:
    return GbsSet(d, tuple(divmod(x, d) for x in combo))


def enumerate_subsets(d: int, ell: int, start: int = 0, ceiling: Optional[int] = DEFAULT_CEILING) -> Iterator[GbsSet]:
    """All C(d^2, ell) subsets in lexicographic order, beginning at rank ``start``."""
    n = d * d
    if not 1 <= ell <= n:
        raise DomainError(f"ell must be in [1, {n}], got {ell}")
    total = math.comb(n, ell)
    if ceiling is not None and total > ceiling:
        raise DomainError(f"C({n}, {ell}) = {total} exceeds the ceiling {ceiling}")
    if start >= total:
        return
    combo = list(unrank_combination(start, n, ell))
    while True:
        yield _subset(combo, d)
        # lexicographic successor
        i = ell - 1
        while i >= 0 and combo[i] == n - ell + i:
            i -= 1
        if i < 0:
            return
        combo[i] += 1
        for j in range(i + 1, ell):
            combo[j] = combo[j - 1] + 1


# --- orbits under the affine Sp(d) action -------------------------------------


@functools.lru_cache(maxsize=None)
def _group(d: int) -> tuple[tuple[int, int, int, int], ...]:
    return tuple(m.entries for m in sp_elements(d))


def orbit_canonical(s: GbsSet, ceiling: int = ORBIT_CEILING) -> GbsSet:
    """Lexicographically least set in the orbit of ``s`` under all affine Sp(d) actions."""
    d = s.d
    size = sp_order(d) * d * d
    if size > ceiling:
        raise DomainError(f"affine group of order {size} exceeds the ceiling {ceiling}")
    best = None
    pairs = s.pairs
    for a, b, c, e in _group(d):
        img = [((a * m + b * n) % d, (c * m + e * n) % d) for m, n in pairs]
        for mu in range(d):
            for nu in range(d):
                cand = tuple(sorted(((x + mu) % d, (y + nu) % d) for x, y in img))
                if best is None or cand < best:
                    best = cand
    return GbsSet(d, best)


# --- configuration and rows ---------------------------------------------------


@dataclass
class CensusConfig:
    d: int
    l: int  # noqa: E741  (set size, named as in the CLI flag)
    mode: str = "exhaustive"
    count: int = 0
    seed: int = 0
    oracle: bool = True
    budget: SearchBudget = field(default_factory=SearchBudget)
    out: Optional[str] = None
    checkpoint_every: int = 1000
    ceiling: int = DEFAULT_CEILING
    jobs: int = 1

    def validate(self) -> None:
        if not 2 <= self.d <= MAX_CENSUS_DIMENSION:
            raise DomainError(f"census dimension must be in [2, {MAX_CENSUS_DIMENSION}], got {self.d}")
        if not 1 <= self.l <= self.d:
            raise DomainError(f"census set size must be in [1, d={self.d}], got {self.l}")
        total = math.comb(self.d * self.d, self.l)
        if self.mode == "exhaustive":
            if total > self.ceiling:
                raise DomainError(f"exhaustive census of {total} sets exceeds the ceiling {self.ceiling}")
        elif self.mode == "sample":
            if not 1 <= self.count <= total:
                raise DomainError(f"sample count must be in [1, {total}], got {self.count}")
        else:
            raise DomainError(f"unknown census mode {self.mode!r}")
        if self.checkpoint_every < 1 or self.jobs < 1:
            raise DomainError("checkpoint_every and jobs must be positive")

    def identity(self) -> dict:
        """Fields that determine the output bytes."""
        return {
            "d": self.d,
            "l": self.l,
            "mode": self.mode,
            "count": self.count if self.mode == "sample" else None,
            "seed": self.seed if self.mode == "sample" or self.oracle else None,
            "oracle": self.oracle,
            "budget": self.budget.to_dict() if self.oracle else None,
        }

    @property
    def total(self) -> int:
        return math.comb(self.d * self.d, self.l)


def work_ranks(cfg: CensusConfig) -> np.ndarray:
    """Ranks to classify, ascending: all of them, or a seeded sample without replacement."""
    if cfg.mode == "exhaustive":
        return np.arange(cfg.total, dtype=np.int64)
    rng = np.random.default_rng(cfg.seed)
    return np.sort(rng.choice(cfg.total, size=cfg.count, replace=False)).astype(np.int64)


def classify_set(s: GbsSet, cfg: CensusConfig, rank: Optional[int] = None) -> dict:
    """One census row as a JSON-ready dict."""
    d, ell = s.d, len(s)
    witness = f_equivalence_witness(s)
    verdict = classify(s)
    oracle = None
    if cfg.oracle and witness is None:
        b = cfg.budget
        rep = search_phi(s, b.restarts, b.max_iters, b.tol, seed=cfg.seed)
        oracle = {
            "status": rep.status.value,
            "residual": rep.residual,
            "restart_index": rep.restart_index,
            "iterations": rep.iterations,
        }
        if rep.certified and verdict.status is Status.UNKNOWN:
            verdict = Verdict(Status.ONE_WAY_CERTIFIED, None, "numerical Ghosh certificate (no F-equivalence witness)")
    return {
        "rank": rank,
        "set": s.to_dict(),
        "f_type": is_f_type(s),
        "f_equivalent": witness is not None,
        "witness": None if witness is None else witness.as_list(),
        "yu_oh": yu_oh_indistinguishable(s) if ell == d else None,
        "oracle_status": oracle,
        "verdict": verdict.to_dict(),
    }


def row_line(row: dict) -> str:
    return json.dumps(row, separators=(",", ":")) + "\n"


def _rows_for_ranks(cfg: CensusConfig, ranks) -> list[str]:
    n = cfg.d * cfg.d
    return [
        row_line(classify_set(_subset(unrank_combination(int(r), n, cfg.l), cfg.d), cfg, int(r)))
        for r in ranks
    ]


def check_row(row: dict) -> None:
    """Re-verify a loaded row; raises CensusError on any inconsistency."""
    s = GbsSet.from_dict(row["set"])
    if row["f_type"] != is_f_type(s):
        raise CensusError(f"row {row.get('rank')}: f_type flag disagrees with the set")
    if row["f_type"]:
        if not witness_is_valid(s, FWitness(1, 0)):
            raise CensusError(f"row {row.get('rank')}: F-type but (1, 0) is not a witness")
        if not row["f_equivalent"]:
            raise CensusError(f"row {row.get('rank')}: F-type but not marked F-equivalent")
    w = row["witness"]
    if (w is not None) != row["f_equivalent"]:
        raise CensusError(f"row {row.get('rank')}: witness and f_equivalent disagree")
    if w is not None and not witness_is_valid(s, FWitness(*w)):
        raise CensusError(f"row {row.get('rank')}: stored witness {w} fails re-verification")
    status = Status(row["verdict"]["status"])
    if status in (Status.DISTINGUISHABLE, Status.INDISTINGUISHABLE):
        if not (is_prime(s.d) and len(s) == s.d):
            raise CensusError(f"row {row.get('rank')}: {status.value} outside prime d with d states")
        if (status is Status.DISTINGUISHABLE) != row["f_equivalent"]:
            raise CensusError(f"row {row.get('rank')}: verdict inconsistent with F-equivalence")


def load_rows(path, check: bool = True) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            if check:
                check_row(row)
            yield row


def summarize(rows, cfg: CensusConfig) -> dict:
    verdicts: dict[str, int] = {}
    n = f_type = f_eq = yu = oracle_runs = oracle_cert = conflicts = 0
    oracle_only = []
    indist = 0
    for row in rows:
        n += 1
        f_type += row["f_type"]
        f_eq += row["f_equivalent"]
        if row["yu_oh"]:
            yu += 1
        st = row["verdict"]["status"]
        verdicts[st] = verdicts.get(st, 0) + 1
        indist += st == Status.INDISTINGUISHABLE.value
        o = row["oracle_status"]
        if o is not None:
            oracle_runs += 1
            if o["status"] == "CertifiedOneWay":
                oracle_cert += 1
                if not row["f_equivalent"]:
                    oracle_only.append(row["set"]["states"])
                    if st == Status.INDISTINGUISHABLE.value:
                        conflicts += 1
    prime_square = is_prime(cfg.d) and cfg.l == cfg.d
    return {
        "d": cfg.d,
        "l": cfg.l,
        "mode": cfg.mode,
        "count": cfg.count if cfg.mode == "sample" else None,
        "seed": cfg.seed,
        "space": cfg.total,
        "total": n,
        "f_type": f_type,
        "f_equivalent": f_eq,
        "no_witness": n - f_eq,
        "yu_oh_fires": yu if cfg.l == cfg.d else None,
        "indistinguishable": indist if prime_square else None,
        "tallies_agree": (indist == n - f_eq == yu) if prime_square else None,
        "verdicts": dict(sorted(verdicts.items())),
        "oracle": cfg.oracle,
        "oracle_budget": cfg.budget.to_dict() if cfg.oracle else None,
        "oracle_runs": oracle_runs,
        "oracle_certified": oracle_cert,
        "oracle_only_certified": len(oracle_only),
        "oracle_only_sets": oracle_only,
        "prime_verdict_conflicts": conflicts,
        "backend": kernels.BACKEND,
    }


# --- driver -------------------------------------------------------------------


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _paths(out) -> tuple[Path, Path, Path, Path]:
    out = Path(out)
    return (
        out,
        out.with_name(out.name + ".partial"),
        out.with_name(out.name + ".ckpt"),
        out.with_name(out.name + ".summary.json"),
    )


def _resume_point(cfg: CensusConfig, partial: Path, ckpt: Path):
    """(next work index, running sha256) from a valid checkpoint, else a fresh start."""
    if not (ckpt.exists() and partial.exists()):
        partial.write_bytes(b"")
        return 0, hashlib.sha256()
    state = json.loads(ckpt.read_text(encoding="utf-8"))
    if state.get("config") != cfg.identity():
        raise CensusError(f"checkpoint {ckpt} belongs to a different census configuration")
    nbytes = int(state["bytes"])
    with open(partial, "r+b") as fh:
        data = fh.read(nbytes)
        if len(data) != nbytes:
            raise CensusError(f"{partial} is shorter than its checkpoint ({len(data)} < {nbytes} bytes)")
        h = hashlib.sha256(data)
        if h.hexdigest() != state["sha256"]:
            raise CensusError(f"{partial} does not match the checkpoint hash")
        fh.truncate(nbytes)
    log.info("resuming census at work item %d (%d bytes)", state["next"], nbytes)
    return int(state["next"]), h


def run_census(cfg: CensusConfig, stop_after: Optional[int] = None) -> Optional[dict]:
    """Classify every work item, persisting rows, checkpoints and a summary.

    ``stop_after`` ends the invocation after roughly that many new rows (at a
    checkpoint boundary) and returns None, as an interrupted run would.
    """
    cfg.validate()
    if cfg.out is None:
        raise DomainError("census needs an output path")
    out, partial, ckpt, summary_path = _paths(cfg.out)
    ranks = work_ranks(cfg)
    start, digest = _resume_point(cfg, partial, ckpt)
    nbytes = partial.stat().st_size
    done_now = 0
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        pos = start
        while pos < len(ranks):
            if stop_after is not None and done_now >= stop_after:
                return None
            chunk = ranks[pos : pos + cfg.checkpoint_every]
            if pool is None:
                lines = _rows_for_ranks(cfg, chunk)
            else:
                parts = np.array_split(chunk, cfg.jobs)
                lines = [ln for part in pool.map(_rows_for_ranks, [cfg] * len(parts), parts) for ln in part]
            blob = "".join(lines).encode("utf-8")
            with open(partial, "ab") as fh:
                fh.write(blob)
                fh.flush()
                os.fsync(fh.fileno())
            digest.update(blob)
            nbytes += len(blob)
            pos += len(chunk)
            done_now += len(chunk)
            _atomic_write_text(
                ckpt,
                json.dumps(
                    {
                        "config": cfg.identity(),
                        "next": pos,
                        "last_rank": int(chunk[-1]),
                        "bytes": nbytes,
                        "sha256": digest.hexdigest(),
                    }
                ),
            )
            log.info("census %d/%d", pos, len(ranks))
    finally:
        if pool is not None:
            pool.shutdown()
    os.replace(partial, out)
    ckpt.unlink(missing_ok=True)
    summary = summarize(load_rows(out), cfg)
    _atomic_write_text(summary_path, json.dumps(summary, indent=2) + "\n")
    return summary


def census_rows_in_memory(cfg: CensusConfig) -> list[dict]:
    """Rows for small censuses without touching the filesystem."""
    cfg.validate()
    return [json.loads(line) for line in _rows_for_ranks(cfg, work_ranks(cfg))]


def subsets_from_ranks(d: int, ell: int, ranks) -> list[GbsSet]:
    n = d * d
    return [_subset(unrank_combination(int(r), n, ell), d) for r in ranks]


def all_subsets(d: int, ell: int) -> list[GbsSet]:
    return [_subset(c, d) for c in itertools.combinations(range(d * d), ell)]

