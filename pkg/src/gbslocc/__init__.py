"""Local distinguishability of generalized Bell states X^m Z^n in C^d x C^d."""

__version__ = "0.1.0"

from .criterion import (  # noqa: E402
    CyclotomicInt,
    FWitness,
    Status,
    Verdict,
    classify,
    classify_prime,
    cyclotomic_poly,
    f_equivalence_witness,
    is_f_type,
    kappa,
    lemma2_check,
    vanishing_sum_is_zero,
    yu_oh_indistinguishable,
)
from .kernels import BACKEND  # noqa: E402
from .weyl import GbsSet, WeylOp  # noqa: E402
from .zmod import AffineAction, DomainError, SpMatrix, sp_new  # noqa: E402
