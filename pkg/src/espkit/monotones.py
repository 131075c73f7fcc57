"""Entanglement quantifiers on two-qubit reduced density matrices.

Negativity is the absolute sum of the negative eigenvalues of the partial
transpose (0 for separable states, 1/2 for maximally entangled ones);
the trace-norm variant equals 1 + 2N for trace-one inputs.  Concurrence
follows the spin-flip construction, with the gamma values computed as the
square roots of the eigenvalues of rho * rho' via a Hermitian-similar
matrix.  Both are local-unitary invariants and, for two qubits, vanish
together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .densemat import as_complex_matrix
from .errors import DimensionError, NumericalError
from .hilbert import DensityOperator

ENTANGLED_THRESHOLD = 1e-9
CLIP_BUDGET = 1e-9


@dataclass(frozen=True)
class MonotoneSample:
    """The three quantifiers of one reduced density matrix."""

    cne: float
    negativity: float
    concurrence: float
    negative_count: int


def _as_pair_matrix(rho) -> np.ndarray:
    m = as_complex_matrix(rho.matrix if isinstance(rho, DensityOperator) else rho)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 two-qubit matrix, got {m.shape}")
    return m


def cne(rho) -> tuple[float, int]:
    """Smallest eigenvalue of the partial transpose and the negative count.

    The count includes eigenvalues below -1e-12; two-qubit partial
    transposes carry at most one.
    """
    m = _as_pair_matrix(rho)
    lam, _, count = _kernels.pair_pt_stats(m)
    if np.isnan(lam):
        raise NumericalError("partial-transpose eigensolver did not converge")
    return float(lam), int(count)


def negativity(rho) -> float:
    """Absolute sum of the negative partial-transpose eigenvalues (in [0, 1/2])."""
    m = _as_pair_matrix(rho)
    lam, nsum, _ = _kernels.pair_pt_stats(m)
    if np.isnan(lam):
        raise NumericalError("partial-transpose eigensolver did not converge")
    return float(nsum)


def concurrence(rho) -> float:
    """Spin-flip concurrence max(0, 2 gamma_max - sum gamma), in [0, 1].

    Negative eigenvalue dust on the input is clipped to zero before the
    matrix square root; a clipped mass beyond 1e-9 signals a numerics
    problem and raises.
    """
    m = _as_pair_matrix(rho)
    value, clip = _kernels.pair_concurrence(m)
    if np.isnan(value):
        raise NumericalError("concurrence eigensolver did not converge")
    if clip > CLIP_BUDGET:
        raise NumericalError(f"PSD repair clipped {clip:.3e} of spectral mass (budget {CLIP_BUDGET})")
    return float(value)


def monotone_sample(rho) -> MonotoneSample:
    """Bundle cne, negativity and concurrence for one density matrix."""
    m = _as_pair_matrix(rho)
    lam, nsum, count = _kernels.pair_pt_stats(m)
    if np.isnan(lam):
        raise NumericalError("partial-transpose eigensolver did not converge")
    value, clip = _kernels.pair_concurrence(m)
    if np.isnan(value):
        raise NumericalError("concurrence eigensolver did not converge")
    if clip > CLIP_BUDGET:
        raise NumericalError(f"PSD repair clipped {clip:.3e} of spectral mass (budget {CLIP_BUDGET})")
    return MonotoneSample(float(lam), float(nsum), float(value), int(count))


def is_entangled(rho, threshold: float = ENTANGLED_THRESHOLD) -> bool:
    """Negativity test with the package-wide zero threshold."""
    return negativity(rho) > threshold
