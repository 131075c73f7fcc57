"""Minimal dense complex-matrix layer for operators up to 32x32.

Provides the Hermitian eigendecomposition (cyclic Jacobi, high relative
accuracy for the small eigenvalues the entanglement monotones depend on),
spectral evolution operators exp(-iHt), Kronecker products and norms.
Matrices are plain contiguous ``complex128`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError, NumericalError

HERMITICITY_RTOL = 1e-12


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigendecomposition A = V diag(w) V† with ``w`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a contiguous complex128 2-D array."""
    m = np.ascontiguousarray(np.asarray(a, dtype=np.complex128))
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={m.ndim}")
    return m


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_defect(a) -> float:
    """max_ij |A_ij - conj(A_ji)|."""
    a = np.asarray(a)
    return max_abs(a - a.conj().T)


def hermitian_eig(a, *, check: bool = True) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.

    The input is symmetrized to (A + A†)/2 before diagonalization.  With
    ``check`` (default) the Hermiticity defect must stay below
    ``1e-12 * max(1, ||A||_F)``.

    Raises
    ------
    DimensionError
        If the input is not square.
    NumericalError
        If the sweep cap is reached before convergence.
    """
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    if check:
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_RTOL * max(1.0, frobenius(m)):
            raise ValueError(f"matrix is not Hermitian within tolerance (defect {defect:.3e})")
    sym = np.ascontiguousarray((m + m.conj().T) / 2.0)
    w, v, sweeps, converged = _kernels.jacobi_eigh(sym)
    if not converged:
        raise NumericalError(f"Jacobi eigensolver did not converge in {sweeps} sweeps")
    return HermitianSpectrum(eigenvalues=w, eigenvectors=v)


def hermitian_eigvals(a, *, check: bool = True) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return hermitian_eig(a, check=check).eigenvalues


def propagator(spectrum: HermitianSpectrum, t: float) -> np.ndarray:
    """exp(-iHt) from a precomputed spectrum of H."""
    return _kernels.unitary_from_spectrum(spectrum.eigenvalues, spectrum.eigenvectors, float(t))


def spectral_exp_skew(h, t: float) -> np.ndarray:
    """Evolution operator exp(-iHt) for Hermitian H, via the spectral theorem.

    Unitary to ~1e-12 and exactly the identity (up to roundoff) at t = 0.
    """
    return propagator(hermitian_eig(h), t)


def kron(a, b) -> np.ndarray:
    """Kronecker product with complex128 output."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def kron_all(*ops) -> np.ndarray:
    out = as_complex_matrix(ops[0])
    for op in ops[1:]:
        out = np.kron(out, as_complex_matrix(op))
    return out
