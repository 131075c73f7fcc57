"""Benchmark the jit-compiled kernels against the pure-numpy fallback.

Runs the same three workloads twice, in subprocesses: once with numba
enabled (default) and once with ESPKIT_NO_NUMBA=1.

    python benchmarks/bench_kernels.py            # both modes, comparison table
    python benchmarks/bench_kernels.py --single   # current mode only (internal)
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def run_workloads() -> dict[str, float]:
    import numpy as np

    from espkit import (
        EvolutionSpec,
        ExchangeCoupling,
        SpinMagnitude,
        hermitian_eig,
        integrate_vonneumann,
        sample_trajectory,
        spin_star_hamiltonian,
    )
    from espkit.states import esp_weighting, mixed_initial, product_basis_initial

    results: dict[str, float] = {}
    rng = np.random.default_rng(11)

    # warm-up (compilation in jit mode)
    warm = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    hermitian_eig((warm + warm.conj().T) / 2)
    s_half = SpinMagnitude(1)
    h_warm = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s_half)
    sample_trajectory(h_warm, product_basis_initial("uud", s_half), EvolutionSpec(t_max=0.1, n_steps=4))
    integrate_vonneumann(h_warm, product_basis_initial("uud", s_half), 0.01)

    # 1: Hermitian eigensolver, 300 matrices up to 32x32
    mats = []
    for k in range(300):
        n = (2, 4, 8, 12, 16, 24, 32)[k % 7]
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        mats.append((g + g.conj().T) / 2)
    t0 = time.perf_counter()
    for m in mats:
        hermitian_eig(m)
    results["eigensolver_300_matrices"] = time.perf_counter() - t0

    # 2: trajectory sampling, 16 dim-12 curves x 2000 samples
    s_one = SpinMagnitude(2)
    h = spin_star_hamiltonian(ExchangeCoupling(1, 0.5, 1), s_one)
    spec = EvolutionSpec(t_max=10.0, n_steps=2000)
    t0 = time.perf_counter()
    for state in ("uuu", "uud", "udd"):
        sample_trajectory(h, product_basis_initial(state, s_one), spec)
    h_mixed = spin_star_hamiltonian(ExchangeCoupling(-0.5, -0.5, -1.0), s_half)
    for i in (1, 6, 9, 10, 13, 14):
        rho0 = mixed_initial(esp_weighting(f"W{i}", 0.01), s_half)
        sample_trajectory(h_mixed, rho0, spec)
    results["trajectories_9x2000_samples"] = time.perf_counter() - t0

    # 3: fourth-order integrator, 20000 steps at dimension 12
    t0 = time.perf_counter()
    integrate_vonneumann(h, product_basis_initial("uuu", s_one), 2.0)
    results["integrator_20000_steps"] = time.perf_counter() - t0

    return results


def run_mode(disable_numba: bool) -> dict[str, float]:
    env = dict(os.environ)
    env["ESPKIT_NO_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run(
        [sys.executable, __file__, "--single"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout.splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--single", action="store_true", help="run workloads in the current mode and print JSON")
    args = parser.parse_args()
    if args.single:
        from espkit import NUMBA_ENABLED

        results = run_workloads()
        results["numba_enabled"] = float(NUMBA_ENABLED)
        print(json.dumps(results))
        return 0

    jit = run_mode(disable_numba=False)
    plain = run_mode(disable_numba=True)
    if not jit.pop("numba_enabled"):
        print("warning: numba unavailable; both runs used the fallback path")
    plain.pop("numba_enabled")
    width = max(len(k) for k in jit)
    print(f"{'workload':<{width}}  {'jit (s)':>9}  {'numpy (s)':>9}  {'speedup':>8}")
    for key in jit:
        ratio = plain[key] / jit[key] if jit[key] > 0 else float("inf")
        print(f"{key:<{width}}  {jit[key]:>9.3f}  {plain[key]:>9.3f}  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
