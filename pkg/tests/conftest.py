"""Shared fixtures and independent numerical oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from espkit.hilbert import random_two_qubit_dm

SEED = 20240917


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_dm(rng: np.random.Generator) -> np.ndarray:
    return random_two_qubit_dm(rng)


def charpoly_eigvals(h: np.ndarray) -> np.ndarray:
    """Eigenvalues via characteristic-polynomial roots (Faddeev-LeVerrier
    coefficients, companion-matrix root finding) - independent of any
    rotation-based eigensolver."""
    n = h.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    m = np.zeros_like(h)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = h @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(h @ m) / k
    return np.sort(np.roots(coeffs).real)


def expm_taylor(a: np.ndarray, terms: int = 64) -> np.ndarray:
    """Scaling-and-squaring Taylor series for exp(a)."""
    norm = np.linalg.norm(a)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm))) + 1
    b = a / (2.0**s)
    out = np.eye(a.shape[0], dtype=np.complex128)
    term = np.eye(a.shape[0], dtype=np.complex128)
    for k in range(1, terms + 1):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def ptrace_first_loop(rho: np.ndarray, dim_c: int) -> np.ndarray:
    """Index-summation partial trace over the leading factor."""
    out = np.zeros((4, 4), dtype=np.complex128)
    for a in range(4):
        for b in range(4):
            for m in range(dim_c):
                out[a, b] += rho[m * 4 + a, m * 4 + b]
    return out


def rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)
