"""Numerical tolerances shared by every module.

All comparisons in the package take an explicit tolerance; the defaults live here.
"""
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-10          # state normalisation
    herm: float = 1e-10          # Hermiticity / trace / PSD of density matrices
    eig_orth: float = 1e-9       # orthonormality of returned eigenvectors
    unitary: float = 1e-9        # is_unitary and unitary preconditions
    rank: float = 1e-9           # coherence-rank zero threshold (amplitude magnitude)
    superop: float = 1e-9        # superoperator equality on the matrix-unit basis
    kraus_drop: float = 1e-12    # Kraus operators below this Frobenius norm are discarded
    branch_prune: float = 1e-12  # measurement branches below this probability are pruned
    phase_equal: float = 1e-9    # |tr(A^dag B)|/d >= 1 - phase_equal counts as equal
    max_dim: int = 4096          # largest Hilbert-space dimension kron will build

    def override(self, **kwargs) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT = Tolerances()
