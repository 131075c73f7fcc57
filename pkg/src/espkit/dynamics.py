"""Time evolution engines and trajectory sampling.

Exact propagation diagonalizes the Hamiltonian once and reuses the spectrum
for every sample time; the commutator-series truncation feeds the analytic
short-time validators; a fourth-order one-step integrator provides an
independent cross-check.  Negative sample times run the exact propagator
backwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _kernels
from .densemat import (
    HermitianSpectrum,
    as_complex_matrix,
    hermitian_eig,
    kron_all,
)
from .densemat import propagator as _propagator_from_spectrum
from .errors import DimensionError, NumericalError
from .hilbert import (
    PAULI_Y,
    DensityOperator,
    Ket,
    SpinMagnitude,
    SystemDims,
    spin_operators,
)
from .monotones import CLIP_BUDGET, MonotoneSample

INTEGRATOR_STEP = 1e-4

InitialState = Union[DensityOperator, Ket]


@dataclass(frozen=True)
class EvolutionSpec:
    """Sampling plan for a trajectory.

    The grid is ``n_steps + 1`` evenly spaced times on [t_min, t_max];
    ``t_min`` defaults to 0, or to -t_max when ``emit_negative_times`` is
    set (the near-past branch used by the time-symmetry checks).
    """

    t_max: float
    n_steps: int
    method: str = "exact"
    series_order: int = 3
    emit_negative_times: bool = False
    t_min: float | None = None

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if self.method not in ("exact", "series", "integrator"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.series_order not in (1, 2, 3):
            raise ValueError("series_order must be 1, 2 or 3")

    def time_grid(self) -> np.ndarray:
        t_min = self.t_min
        if t_min is None:
            t_min = -self.t_max if self.emit_negative_times else 0.0
        if not t_min < self.t_max:
            raise ValueError(f"empty time window [{t_min}, {self.t_max}]")
        return np.linspace(t_min, self.t_max, self.n_steps + 1)


@dataclass(frozen=True)
class Trajectory:
    """Sampled monotone time series with bookkeeping metadata."""

    times: np.ndarray
    cne: np.ndarray
    negativity: np.ndarray
    concurrence: np.ndarray
    negative_count: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.shape[0]

    def sample(self, i: int) -> MonotoneSample:
        return MonotoneSample(
            float(self.cne[i]),
            float(self.negativity[i]),
            float(self.concurrence[i]),
            int(self.negative_count[i]),
        )

    @property
    def spacing(self) -> float:
        return float(np.max(np.diff(self.times)))


class SpectralPropagator:
    """Exact evolution under a fixed Hermitian generator.

    Diagonalizes once; every unitary is then V diag(exp(-i w t)) V†.
    """

    def __init__(self, h):
        self.h = as_complex_matrix(h)
        self.spectrum: HermitianSpectrum = hermitian_eig(self.h)

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        if t == 0.0:
            return np.eye(self.dim, dtype=np.complex128)
        return _propagator_from_spectrum(self.spectrum, t)

    def evolve_matrix(self, rho: np.ndarray, t: float) -> np.ndarray:
        if t == 0.0:
            return rho.copy()
        u = self.unitary(t)
        return u @ rho @ u.conj().T


def _initial_matrix(state: InitialState) -> tuple[np.ndarray, SystemDims]:
    if isinstance(state, Ket):
        return state.to_density().matrix, state.dims
    if isinstance(state, DensityOperator):
        return state.matrix, state.dims
    raise TypeError("initial state must be a DensityOperator or Ket")


def evolve_exact(h, rho0: InitialState, t: float) -> DensityOperator:
    """Unitary evolution rho(t) = U rho U† with U = exp(-iHt).

    Preserves trace, Hermiticity and the spectrum; energy is conserved.
    """
    m, dims = _initial_matrix(rho0)
    h = as_complex_matrix(h)
    if h.shape != m.shape:
        raise DimensionError(f"Hamiltonian shape {h.shape} does not match state shape {m.shape}")
    prop = SpectralPropagator(h)
    return DensityOperator(prop.evolve_matrix(m, t), dims, validate=False)


def evolve_series(h, rho0: InitialState, dt: float, order: int = 3) -> np.ndarray:
    """Commutator-series truncation of the equation of motion.

    ``order`` counts the retained terms: 1 keeps rho0, 2 adds
    -i[H, rho0] dt, 3 adds -(1/2)[H, [H, rho0]] dt².  The result is
    Hermitian and trace-one but deliberately not positive: it feeds the
    short-time analytic validators, which are derived from exactly these
    truncations.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    m, _ = _initial_matrix(rho0)
    h = as_complex_matrix(h)
    if h.shape != m.shape:
        raise DimensionError(f"Hamiltonian shape {h.shape} does not match state shape {m.shape}")
    out = m.astype(np.complex128, copy=True)
    if order >= 2:
        comm1 = h @ m - m @ h
        out = out + (-1j * dt) * comm1
        if order >= 3:
            comm2 = h @ comm1 - comm1 @ h
            out = out + (-0.5 * dt * dt) * comm2
    return out


def integrate_vonneumann(h, rho0: InitialState, t: float, max_step: float = INTEGRATOR_STEP) -> DensityOperator:
    """Fourth-order one-step integration of the equation of motion.

    Independent of the spectral path; fixed step (default 1e-4) adjusted to
    land exactly on t.  Used as the test oracle for exact evolution.
    """
    m, dims = _initial_matrix(rho0)
    h = as_complex_matrix(h)
    if h.shape != m.shape:
        raise DimensionError(f"Hamiltonian shape {h.shape} does not match state shape {m.shape}")
    out = _kernels.rk4_commutator_evolve(h, m, float(t), float(max_step))
    return DensityOperator(out, dims, validate=False)


def time_reversal_unitary(s: SpinMagnitude) -> np.ndarray:
    """Unitary part of the all-spin flip on environment ⊗ A ⊗ B.

    exp(-i pi Sy) on the environment and sigma_y on each qubit; composing
    with complex conjugation in the product basis realizes the antiunitary
    spin flip (the global phase is irrelevant at the density-matrix level).
    """
    _, sy, _ = spin_operators(s)
    env_flip = _propagator_from_spectrum(hermitian_eig(sy), np.pi)
    return kron_all(env_flip, PAULI_Y, PAULI_Y)


def time_reversed_state(rho: DensityOperator, s: SpinMagnitude) -> DensityOperator:
    """Theta rho* Theta†: the all-spin-flipped, conjugated state."""
    theta = time_reversal_unitary(s)
    return DensityOperator(theta @ rho.matrix.conj() @ theta.conj().T, rho.dims, validate=False)


def sample_trajectory(h, initial: InitialState, spec: EvolutionSpec) -> Trajectory:
    """Evolve, trace out the environment and record the monotones per time.

    Metadata records the maximum trace/Hermiticity deviations of the
    reduced matrices and the largest PSD clip spent by the concurrence.
    """
    m, dims = _initial_matrix(initial)
    h = as_complex_matrix(h)
    if h.shape != m.shape:
        raise DimensionError(f"Hamiltonian shape {h.shape} does not match state shape {m.shape}")
    times = spec.time_grid()
    dim_c = dims.dim_c

    if spec.method == "exact":
        prop = SpectralPropagator(h)
        out = _kernels.trajectory_monotones(
            prop.spectrum.eigenvalues, prop.spectrum.eigenvectors, m, dim_c, times
        )
        cne_arr, neg, conc, ncount, trace_dev, herm_dev, clip_max, ok = out
    else:
        nt = times.shape[0]
        cne_arr = np.empty(nt)
        neg = np.empty(nt)
        conc = np.empty(nt)
        ncount = np.empty(nt, dtype=np.int64)
        trace_dev = herm_dev = clip_max = 0.0
        ok = True
        rho_prev = m
        t_prev = 0.0
        for k, t in enumerate(times):
            if spec.method == "series":
                rho_t = evolve_series(h, initial, float(t), spec.series_order)
            else:
                rho_t = _kernels.rk4_commutator_evolve(h, rho_prev, float(t - t_prev), INTEGRATOR_STEP)
                rho_prev, t_prev = rho_t, float(t)
            red = _kernels.reduce_to_pair(np.ascontiguousarray(rho_t), dim_c)
            trace_dev = max(trace_dev, abs(np.trace(red).real - 1.0))
            herm_dev = max(herm_dev, float(np.max(np.abs(red - red.conj().T))))
            lam, ns, nc = _kernels.pair_pt_stats(red)
            cv, clip = _kernels.pair_concurrence(red)
            if np.isnan(lam) or np.isnan(cv):
                ok = False
                break
            clip_max = max(clip_max, clip)
            cne_arr[k], neg[k], conc[k], ncount[k] = lam, ns, cv, nc

    if not ok:
        raise NumericalError("monotone evaluation failed during trajectory sampling")
    if clip_max > CLIP_BUDGET:
        raise NumericalError(f"PSD repair clipped {clip_max:.3e} of spectral mass during sampling")

    meta = {
        "method": spec.method,
        "series_order": spec.series_order if spec.method == "series" else None,
        "dim_c": dim_c,
        "max_trace_deviation": float(trace_dev),
        "max_hermiticity_deviation": float(herm_dev),
        "max_psd_clip": float(clip_max),
    }
    return Trajectory(times, cne_arr, neg, conc, ncount, meta)
