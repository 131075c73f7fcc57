"""Hot numeric kernels: Jacobi eigensolver, spectral propagation, monotones.

All functions take contiguous complex128/float64 arrays and run under numba
(default) or as plain numpy (``ESPKIT_NO_NUMBA=1``).  No validation happens
here; wrappers in :mod:`espkit.densemat` and friends own the contracts.
Failures are signalled through sentinel return values, never exceptions.
"""

from __future__ import annotations

import numpy as np

from ._accel import jit_kernel

MAX_SWEEPS = 100
OFFDIAG_TOL_FACTOR = 1e-14


@jit_kernel
def jacobi_eigh(a):
    """Cyclic Jacobi diagonalization of a Hermitian matrix, in place.

    Returns ``(eigenvalues, eigenvectors, sweeps, converged)`` with the
    eigenvalues sorted ascending and the matching unitary columns.  ``a`` is
    destroyed.  Convergence: off-diagonal Frobenius mass below
    ``1e-14 * ||a||_F`` within 100 sweeps.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm_f = 0.0
    for i in range(n):
        for j in range(n):
            norm_f += abs(a[i, j]) ** 2
    norm_f = np.sqrt(norm_f)
    w = np.empty(n, dtype=np.float64)
    if norm_f == 0.0:
        for i in range(n):
            w[i] = 0.0
        return w, v, 0, True

    tol = OFFDIAG_TOL_FACTOR * norm_f
    skip = 1e-18 * norm_f
    converged = False
    sweeps = 0
    while sweeps < MAX_SWEEPS:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * abs(a[i, j]) ** 2
        if np.sqrt(off) <= tol:
            converged = True
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = s * np.conj(phase)
                # A <- R† A R with R = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - spc * aiq
                    a[i, q] = sp * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - sp * aqi
                    a[q, i] = spc * api + c * aqi
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - spc * viq
                    v[i, q] = sp * vip + c * viq

    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w)
    ws = np.empty(n, dtype=np.float64)
    vs = np.empty((n, n), dtype=np.complex128)
    for k in range(n):
        ws[k] = w[order[k]]
        for i in range(n):
            vs[i, k] = v[i, order[k]]
    return ws, vs, sweeps, converged


@jit_kernel
def unitary_from_spectrum(evals, evecs, t):
    """exp(-i H t) from the eigendecomposition H = V diag(evals) V†."""
    n = evals.shape[0]
    ph = np.empty(n, dtype=np.complex128)
    for i in range(n):
        ph[i] = np.exp(-1j * evals[i] * t)
    return (evecs * ph) @ np.conj(evecs).T


@jit_kernel
def reduce_to_pair(rho, dim_c):
    """Trace out the leading dim_c-dimensional factor of a (4*dim_c) density matrix."""
    red = np.zeros((4, 4), dtype=np.complex128)
    for m in range(dim_c):
        base = 4 * m
        for i in range(4):
            for j in range(4):
                red[i, j] += rho[base + i, base + j]
    return red


@jit_kernel
def transpose_second_qubit(red):
    """Partial transpose on the right qubit: out[ab,a'b'] = in[ab',a'b]."""
    pt = np.empty((4, 4), dtype=np.complex128)
    for ia in range(2):
        for ib in range(2):
            for ja in range(2):
                for jb in range(2):
                    pt[2 * ia + ib, 2 * ja + jb] = red[2 * ia + jb, 2 * ja + ib]
    return pt


@jit_kernel
def pair_pt_stats(red):
    """(min eigenvalue, negativity, count of eigenvalues < -1e-12) of the partial transpose."""
    pt = transpose_second_qubit(red)
    w, v, sweeps, ok = jacobi_eigh(pt)
    if not ok:
        return np.nan, np.nan, -1
    lam_min = w[0]
    nsum = 0.0
    ncnt = 0
    for i in range(4):
        if w[i] < -1e-12:
            ncnt += 1
        if w[i] < 0.0:
            nsum -= w[i]
    return lam_min, nsum, ncnt


@jit_kernel
def pair_concurrence(red):
    """Concurrence of a two-qubit density matrix and the clipped negative mass.

    The square roots of the eigenvalues of rho * rho' are obtained from the
    Hermitian-similar matrix sqrt(rho) rho' sqrt(rho); negative eigenvalue
    dust on rho is clipped to zero and its total magnitude reported.
    """
    sy2 = np.zeros((4, 4), dtype=np.complex128)
    sy2[0, 3] = -1.0
    sy2[1, 2] = 1.0
    sy2[2, 1] = 1.0
    sy2[3, 0] = -1.0
    flipped = sy2 @ np.conj(red) @ sy2

    work = red.copy()
    w1, v1, s1, ok1 = jacobi_eigh(work)
    if not ok1:
        return np.nan, np.nan
    clip = 0.0
    sq = np.empty(4, dtype=np.complex128)
    for i in range(4):
        if w1[i] < 0.0:
            clip -= w1[i]
            sq[i] = 0.0
        else:
            sq[i] = np.sqrt(w1[i])
    sqrt_rho = (v1 * sq) @ np.conj(v1).T
    m = sqrt_rho @ flipped @ sqrt_rho
    w2, v2, s2, ok2 = jacobi_eigh(m)
    if not ok2:
        return np.nan, np.nan
    gmax = 0.0
    gsum = 0.0
    for i in range(4):
        g = np.sqrt(w2[i]) if w2[i] > 0.0 else 0.0
        gsum += g
        if g > gmax:
            gmax = g
    c = 2.0 * gmax - gsum
    if c < 0.0:
        c = 0.0
    return c, clip


@jit_kernel
def trajectory_monotones(evals, evecs, rho0, dim_c, times):
    """Monotone time series under exact spectral propagation.

    Returns (cne, negativity, concurrence, negative_count, max trace deviation,
    max Hermiticity deviation, max clipped mass, ok flag).
    """
    nt = times.shape[0]
    cne = np.empty(nt, dtype=np.float64)
    neg = np.empty(nt, dtype=np.float64)
    conc = np.empty(nt, dtype=np.float64)
    ncount = np.empty(nt, dtype=np.int64)
    trace_dev = 0.0
    herm_dev = 0.0
    clip_max = 0.0
    ok = True
    for k in range(nt):
        u = unitary_from_spectrum(evals, evecs, times[k])
        rho_t = u @ rho0 @ np.conj(u).T
        red = reduce_to_pair(rho_t, dim_c)

        tr = 0.0
        for i in range(4):
            tr += red[i, i].real
        d = abs(tr - 1.0)
        if d > trace_dev:
            trace_dev = d
        for i in range(4):
            for j in range(4):
                e = abs(red[i, j] - np.conj(red[j, i]))
                if e > herm_dev:
                    herm_dev = e

        lam, ns, nc = pair_pt_stats(red)
        cv, clip = pair_concurrence(red)
        if np.isnan(lam) or np.isnan(cv):
            ok = False
            lam = np.nan
            ns = np.nan
            cv = np.nan
            nc = -1
        if clip > clip_max:
            clip_max = clip
        cne[k] = lam
        neg[k] = ns
        conc[k] = cv
        ncount[k] = nc
    return cne, neg, conc, ncount, trace_dev, herm_dev, clip_max, ok


@jit_kernel
def rk4_commutator_evolve(h, rho0, t_final, max_step):
    """Fourth-order one-step integration of d(rho)/dt = -i[h, rho].

    Fixed step of magnitude at most ``max_step``, adjusted to land exactly on
    ``t_final``.  Used as the independent cross-check for spectral evolution.
    """
    rho = rho0.copy()
    if t_final == 0.0:
        return rho
    n_steps = int(np.ceil(abs(t_final) / max_step))
    dt = t_final / n_steps
    for _ in range(n_steps):
        k1 = -1j * (h @ rho - rho @ h)
        r = rho + (0.5 * dt) * k1
        k2 = -1j * (h @ r - r @ h)
        r = rho + (0.5 * dt) * k2
        k3 = -1j * (h @ r - r @ h)
        r = rho + dt * k3
        k4 = -1j * (h @ r - r @ h)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho
