"""Compiled inner loops for the frontier search.

These mirror the reference evaluations in :mod:`hadamard_bc.entropic` on the
flat parameter layout described in :mod:`hadamard_bc.region`; the test-suite
checks the two against each other.
"""

import numba
import numpy as np

from .linalg import _jacobi_eigvalsh

CC, CQ, EAC = 0, 1, 2


@numba.njit(cache=True)
def _xlogx(lam):
    if lam > 1e-12:
        return -lam * np.log2(lam)
    return 0.0


@numba.njit(cache=True)
def _entropy(rho):
    n = rho.shape[0]
    if n == 1:
        return _xlogx(rho[0, 0].real)
    if n == 2:
        a = rho[0, 0].real
        d = rho[1, 1].real
        half = 0.5 * (a - d)
        r = np.sqrt(half * half + abs(rho[0, 1]) ** 2)
        mid = 0.5 * (a + d)
        return _xlogx(mid + r) + _xlogx(mid - r)
    ev = _jacobi_eigvalsh(rho, 1e-15, 100)
    h = 0.0
    for lam in ev:
        h += _xlogx(lam)
    return h


@numba.njit(cache=True)
def _softmax(x):
    m = x.max()
    e = np.exp(x - m)
    return e / e.sum()


@numba.njit(cache=True)
def _unit_vector(theta, start, dim):
    v = np.empty(dim, dtype=np.complex128)
    nrm = 0.0
    for i in range(dim):
        re = theta[start + 2 * i]
        im = theta[start + 2 * i + 1]
        v[i] = re + 1j * im
        nrm += re * re + im * im
    if nrm == 0.0:
        v[0] = 1.0
        return v
    return v / np.sqrt(nrm)


@numba.njit(cache=True)
def _charlie_state(q, psi, rho):
    n, d_c = psi.shape
    rho[:, :] = 0.0
    for x in range(n):
        if q[x] == 0.0:
            continue
        for i in range(d_c):
            for j in range(d_c):
                rho[i, j] += q[x] * psi[x, i] * np.conj(psi[x, j])
    return rho


@numba.njit(cache=True)
def _amplitudes(meas, theta, start, d_a, a):
    # a = meas @ v for the normalized vector encoded at theta[start:]
    nrm = 0.0
    for i in range(2 * d_a):
        nrm += theta[start + i] ** 2
    n = meas.shape[0]
    if nrm == 0.0:
        for x in range(n):
            a[x] = meas[x, 0]
        return
    scale = 1.0 / np.sqrt(nrm)
    for x in range(n):
        acc = 0.0j
        for i in range(d_a):
            acc += meas[x, i] * (theta[start + 2 * i] + 1j * theta[start + 2 * i + 1])
        a[x] = acc * scale


@numba.njit(cache=True)
def cc_rates(theta, num_w, num_z, meas, psi, gram_t):
    n, d_a = meas.shape
    d_c = psi.shape[1]
    pw = _softmax(theta[:num_w])
    off = num_w + num_w * num_z
    a = np.empty(n, dtype=np.complex128)
    q = np.empty(n)
    q_w = np.empty(n)
    q_avg = np.zeros(n)
    rb = np.empty((n, n), dtype=np.complex128)
    rho_bw = np.empty((n, n), dtype=np.complex128)
    rho_c = np.empty((d_c, d_c), dtype=np.complex128)
    h_cw_avg = 0.0
    rate_b = 0.0
    for w in range(num_w):
        pz = _softmax(theta[num_w + w * num_z: num_w + (w + 1) * num_z])
        rho_bw[:, :] = 0.0
        q_w[:] = 0.0
        h_pure = 0.0
        for z in range(num_z):
            _amplitudes(meas, theta, off + 2 * d_a * (w * num_z + z), d_a, a)
            for x in range(n):
                q[x] = a[x].real ** 2 + a[x].imag ** 2
                q_w[x] += pz[z] * q[x]
                for y in range(n):
                    rb[x, y] = a[x] * np.conj(a[y]) * gram_t[x, y]
                    rho_bw[x, y] += pz[z] * rb[x, y]
            # pure input: H(B) = H(C), use the smaller side
            if d_c <= n:
                h_pure += pz[z] * _entropy(_charlie_state(q, psi, rho_c))
            else:
                h_pure += pz[z] * _entropy(rb)
        h_cw = _entropy(_charlie_state(q_w, psi, rho_c))
        rate_b += pw[w] * (_entropy(rho_bw) - h_pure)
        for x in range(n):
            q_avg[x] += pw[w] * q_w[x]
        h_cw_avg += pw[w] * h_cw
    rate_c = _entropy(_charlie_state(q_avg, psi, rho_c)) - h_cw_avg
    return rate_b, rate_c


@numba.njit(cache=True)
def purified_rates(theta, num_w, with_reference, meas, psi, gram_t):
    n, d_a = meas.shape
    pw = _softmax(theta[:num_w])
    q_avg = np.zeros(n)
    rho_c = np.empty((psi.shape[1], psi.shape[1]), dtype=np.complex128)
    h_cw_avg = 0.0
    rate_b = 0.0
    for w in range(num_w):
        v = _unit_vector(theta, num_w + 2 * d_a * d_a * w, d_a * d_a)
        m = v.reshape(d_a, d_a)
        sigma = m.T @ np.conj(m)
        g = meas @ sigma @ np.conj(meas).T
        q_w = np.empty(n)
        for x in range(n):
            q_w[x] = g[x, x].real
        h_b = _entropy(g * gram_t)
        h_c = _entropy(_charlie_state(q_w, psi, rho_c))
        term = h_b - h_c
        if with_reference:
            term += _entropy(sigma)
        rate_b += pw[w] * term
        q_avg += pw[w] * q_w
        h_cw_avg += pw[w] * h_c
    rate_c = _entropy(_charlie_state(q_avg, psi, rho_c)) - h_cw_avg
    return rate_b, rate_c


@numba.njit(cache=True)
def task_rates(task, theta, num_w, num_z, meas, psi, gram_t):
    if task == CC:
        return cc_rates(theta, num_w, num_z, meas, psi, gram_t)
    return purified_rates(theta, num_w, task == EAC, meas, psi, gram_t)


@numba.njit(cache=True)
def _loss(task, lam, theta, num_w, num_z, meas, psi, gram_t):
    rb, rc = task_rates(task, theta, num_w, num_z, meas, psi, gram_t)
    return -(lam * rb + (1.0 - lam) * rc)


@numba.njit(cache=True)
def nelder_mead(task, lam, simplex, max_iters, tol, num_w, num_z, meas, psi, gram_t):
    """Minimize the negated scalarized rate from the given initial simplex.

    Standard reflection/expansion/contraction/shrink coefficients (1, 2, 1/2,
    1/2). Stops when the spread of simplex values drops below ``tol`` or after
    ``max_iters`` iterations. Returns (best point, best loss, iterations).
    """
    sim = simplex.copy()
    npts, dim = sim.shape
    f = np.empty(npts)
    for i in range(npts):
        f[i] = _loss(task, lam, sim[i], num_w, num_z, meas, psi, gram_t)
    it = 0
    while it < max_iters:
        order = np.argsort(f)
        sim = sim[order]
        f = f[order]
        if f[-1] - f[0] <= tol:
            break
        it += 1
        centroid = np.zeros(dim)
        for i in range(npts - 1):
            centroid += sim[i]
        centroid /= npts - 1
        xr = 2.0 * centroid - sim[-1]
        fr = _loss(task, lam, xr, num_w, num_z, meas, psi, gram_t)
        if fr < f[0]:
            xe = 3.0 * centroid - 2.0 * sim[-1]
            fe = _loss(task, lam, xe, num_w, num_z, meas, psi, gram_t)
            if fe < fr:
                sim[-1] = xe
                f[-1] = fe
            else:
                sim[-1] = xr
                f[-1] = fr
            continue
        if fr < f[-2]:
            sim[-1] = xr
            f[-1] = fr
            continue
        if fr < f[-1]:
            xc = centroid + 0.5 * (xr - centroid)
        else:
            xc = centroid + 0.5 * (sim[-1] - centroid)
        fc = _loss(task, lam, xc, num_w, num_z, meas, psi, gram_t)
        if fc < min(fr, f[-1]):
            sim[-1] = xc
            f[-1] = fc
            continue
        for i in range(1, npts):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            f[i] = _loss(task, lam, sim[i], num_w, num_z, meas, psi, gram_t)
    best = np.argmin(f)
    return sim[best].copy(), f[best], it
