import numpy as np
import pytest

from espkit.densemat import hermitian_eigvals
from espkit.dynamics import (
    EvolutionSpec,
    SpectralPropagator,
    evolve_exact,
    evolve_series,
    integrate_vonneumann,
    sample_trajectory,
    time_reversed_state,
)
from espkit.errors import DimensionError
from espkit.hilbert import SpinMagnitude, partial_trace_c
from espkit.model import ExchangeCoupling, spin_star_hamiltonian
from espkit.monotones import negativity
from espkit.states import bell_ket_by_label, esp_weighting, mixed_initial, product_basis_initial
from espkit.hilbert import DensityOperator, SystemDims, basis_ket_c


def seeded_configs():
    return [
        (ExchangeCoupling(1, 1, 1), SpinMagnitude(1), "uud"),
        (ExchangeCoupling(1, -1, 1), SpinMagnitude(1), "udd"),
        (ExchangeCoupling(1, 0.5, 1), SpinMagnitude(2), "uuu"),
        (ExchangeCoupling(-0.5, -0.5, -1), SpinMagnitude(1), "uud"),
        (ExchangeCoupling(0.7, -0.3, 1.2), SpinMagnitude(2), "udd"),
    ]


def test_exact_at_zero_is_identity():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 1, 1), s)
    rho0 = product_basis_initial("uud", s)
    assert np.array_equal(evolve_exact(h, rho0, 0.0).matrix, rho0.matrix)


def test_exact_stationary_state():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(0, 0, 1), s)
    rho0 = product_basis_initial("uud", s)  # z-product state commutes with the zz coupling
    for t in (0.5, 2.0, 7.0):
        assert np.max(np.abs(evolve_exact(h, rho0, t).matrix - rho0.matrix)) <= 1e-12


def test_exact_matches_integrator_oracle():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 1, 1), s)
    rho0 = product_basis_initial("uud", s)
    got = evolve_exact(h, rho0, 0.5)
    oracle = integrate_vonneumann(h, rho0, 0.5)
    assert np.linalg.norm(got.matrix - oracle.matrix) <= 1e-8


def test_exact_vs_integrator_seeded_sweep():
    for j, s, state in seeded_configs():
        h = spin_star_hamiltonian(j, s)
        rho0 = product_basis_initial(state, s)
        for t in (0.5, 1.0, 5.0):
            exact = evolve_exact(h, rho0, t)
            rk = integrate_vonneumann(h, rho0, t)
            assert np.linalg.norm(exact.matrix - rk.matrix) <= 1e-8


def test_exact_preserves_trace_spectrum_energy():
    s = SpinMagnitude(2)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s)
    rho0 = product_basis_initial("uuu", s)
    rho_t = evolve_exact(h, rho0, 1.7)
    assert abs(np.trace(rho_t.matrix) - 1.0) <= 1e-12
    w0 = hermitian_eigvals(rho0.matrix)
    wt = hermitian_eigvals(rho_t.matrix)
    assert np.max(np.abs(w0 - wt)) <= 1e-10
    e0 = np.trace(h @ rho0.matrix).real
    et = np.trace(h @ rho_t.matrix).real
    assert abs(e0 - et) <= 1e-10


def test_exact_dimension_mismatch():
    h = spin_star_hamiltonian(ExchangeCoupling(1, 1, 1), SpinMagnitude(1))
    rho0 = product_basis_initial("uuu", SpinMagnitude(2))
    with pytest.raises(DimensionError):
        evolve_exact(h, rho0, 0.1)


def test_series_order_one_is_initial_state():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, -1, 1), s)
    rho0 = product_basis_initial("udd", s)
    assert np.array_equal(evolve_series(h, rho0, 0.05, 1), rho0.matrix)


def test_series_hermitian_trace_one():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, -1), s)
    rho0 = mixed_initial(esp_weighting("W9", 0.01), s)
    for order in (2, 3):
        out = evolve_series(h, rho0, 0.05, order)
        assert abs(np.trace(out) - 1.0) <= 1e-14
        assert np.max(np.abs(out - out.conj().T)) <= 1e-14


def test_series_third_order_accuracy():
    """Richardson order estimate of the two-commutator truncation error."""
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 1, 1), s)
    rho0 = product_basis_initial("uud", s)
    gaps = []
    for dt in (1e-2, 5e-3, 2.5e-3):
        exact = evolve_exact(h, rho0, dt).matrix
        series = evolve_series(h, rho0, dt, 3)
        gaps.append(np.linalg.norm(series - exact))
    order1 = np.log2(gaps[0] / gaps[1])
    order2 = np.log2(gaps[1] / gaps[2])
    assert order1 >= 2.7
    assert order2 >= 2.7


def test_trajectory_isotropic_inplane_coupling():
    """At Jx = Jy the quadratic growth is suppressed: the all-up state is an
    exact eigenstate (flat zero negativity), while up-down-down grows at
    fourth order and then oscillates periodically."""
    from espkit.analysis import exact_cne_function, fit_short_time

    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 1, 1), s)

    rho_uuu = product_basis_initial("uuu", s)
    assert np.max(np.abs(h @ rho_uuu.matrix - rho_uuu.matrix @ h)) == 0.0
    traj_uuu = sample_trajectory(h, rho_uuu, EvolutionSpec(t_max=10.0, n_steps=1000))
    assert np.all(traj_uuu.negativity <= 1e-9)
    fit_uuu = fit_short_time(exact_cne_function(h, rho_uuu))
    assert abs(fit_uuu.c2) <= 1e-6

    rho_udd = product_basis_initial("udd", s)
    fit_udd = fit_short_time(exact_cne_function(h, rho_udd))
    assert abs(fit_udd.c2) <= 1e-6  # leading order beyond dt²
    assert fit_udd.c4 < -0.5
    traj_udd = sample_trajectory(h, rho_udd, EvolutionSpec(t_max=10.0, n_steps=1000))
    peak = traj_udd.negativity.max()
    assert peak > 0.1
    peaks = np.flatnonzero(
        (traj_udd.negativity[1:-1] > traj_udd.negativity[:-2])
        & (traj_udd.negativity[1:-1] >= traj_udd.negativity[2:])
        & (traj_udd.negativity[1:-1] > 0.5 * peak)
    )
    assert len(peaks) >= 3  # recurring oscillation over the window


def test_trajectory_initial_sample_singlet():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s)
    env = basis_ket_c(s, s.s)
    ab = bell_ket_by_label("beta-").to_density().matrix
    rho0 = DensityOperator(np.kron(np.outer(env, env.conj()), ab), SystemDims.for_spin(s))
    traj = sample_trajectory(h, rho0, EvolutionSpec(t_max=1.0, n_steps=10))
    first = traj.sample(0)
    assert np.allclose(
        (first.cne, first.negativity, first.concurrence, first.negative_count),
        (-0.5, 0.5, 1.0, 1),
        atol=1e-12,
    )


def test_trajectory_zero_interval_near_t4():
    s = SpinMagnitude(2)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s)
    traj = sample_trajectory(h, product_basis_initial("uuu", s), EvolutionSpec(t_max=6.0, n_steps=1200))
    window = (traj.times >= 3.9) & (traj.times <= 4.1)
    assert np.all(traj.negativity[window] <= 1e-9)


def test_trajectory_negative_times_grid():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(-0.5, -0.5, -1), s)
    rho0 = mixed_initial(esp_weighting("W9", 0.01), s)
    traj = sample_trajectory(h, rho0, EvolutionSpec(t_max=0.5, n_steps=100, emit_negative_times=True))
    assert traj.times[0] == -0.5 and traj.times[-1] == 0.5
    assert len(traj) == 101
    assert traj.meta["max_trace_deviation"] <= 1e-12


def test_trajectory_methods_agree():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, -0.5, 1), s)
    rho0 = product_basis_initial("udd", s)
    spec_exact = EvolutionSpec(t_max=0.5, n_steps=10)
    spec_rk = EvolutionSpec(t_max=0.5, n_steps=10, method="integrator")
    t_exact = sample_trajectory(h, rho0, spec_exact)
    t_rk = sample_trajectory(h, rho0, spec_rk)
    assert np.max(np.abs(t_exact.negativity - t_rk.negativity)) <= 1e-8


def test_series_trajectory_short_window():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(-0.5, -0.5, -1), s)
    rho0 = mixed_initial(esp_weighting("W1", 0.01), s)
    spec = EvolutionSpec(t_max=0.01, n_steps=10, method="series", series_order=3)
    traj = sample_trajectory(h, rho0, spec)
    exact = sample_trajectory(h, rho0, EvolutionSpec(t_max=0.01, n_steps=10))
    assert np.max(np.abs(traj.cne - exact.cne)) <= 1e-9


def test_coupling_negation_equals_time_reversal():
    s = SpinMagnitude(1)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s)
    h_neg = spin_star_hamiltonian(-ExchangeCoupling(1, 0.5, 1), s)
    prop = SpectralPropagator(h)
    prop_neg = SpectralPropagator(h_neg)
    for t in (0.3, 1.0, 2.5):
        assert np.max(np.abs(prop.unitary(-t) - prop_neg.unitary(t))) <= 1e-12


def test_time_reversal_closure():
    s = SpinMagnitude(1)
    j = ExchangeCoupling(1, -0.5, 1)
    h = spin_star_hamiltonian(j, s)
    rho0 = product_basis_initial("udd", s)
    n0 = negativity(partial_trace_c(rho0))
    rho_t = evolve_exact(h, rho0, 2.0)
    flipped = time_reversed_state(rho_t, s)
    rho_back = evolve_exact(h, flipped, 2.0)
    assert abs(negativity(partial_trace_c(rho_back)) - n0) <= 1e-8


def test_evolution_spec_validation():
    with pytest.raises(ValueError):
        EvolutionSpec(t_max=1.0, n_steps=0)
    with pytest.raises(ValueError):
        EvolutionSpec(t_max=1.0, n_steps=10, method="magic")
    with pytest.raises(ValueError):
        EvolutionSpec(t_max=-1.0, n_steps=10).time_grid()
