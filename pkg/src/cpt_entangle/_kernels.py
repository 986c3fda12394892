"""Hot numeric kernels.

Every function here is compiled by numba when it is available (see
:mod:`cpt_entangle._accel`); otherwise it runs as ordinary numpy code.  Only
the |h| grid has a separate vectorized numpy body, because a loop nest is the
right shape for numba and the wrong one for numpy.

The kernels take and return plain arrays and never raise; callers turn the
status flags into exceptions.
"""
import numpy as np

from ._accel import USE_NUMBA, jit


@jit
def offdiag_norm(a):
    return np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))


@jit
def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues
    ascending.  ``sweeps`` is -1 when the off-diagonal norm did not drop
    below ``tol * ||a||_F`` within ``max_sweeps`` sweeps.
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = np.sqrt(np.sum(np.abs(a) ** 2))
    sweeps = -1
    for sweep in range(max_sweeps + 1):
        if offdiag_norm(a) <= tol * scale:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = np.abs(apq)
                if mag < 1e-300:
                    continue
                # D = diag(1, conj(phase)) makes the (p, q) entry real, then a
                # real Jacobi rotation finishes the 2x2 block.
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                j00 = complex(c, 0.0)
                j01 = complex(s, 0.0)
                j10 = -s * np.conj(phase)
                j11 = c * np.conj(phase)

                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * j00 + colq * j10
                a[:, q] = colp * j01 + colq * j11

                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = np.conj(j00) * rowp + np.conj(j10) * rowq
                a[q, :] = np.conj(j01) * rowp + np.conj(j11) * rowq

                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * j00 + vq * j10
                v[:, q] = vp * j01 + vq * j11

    w = np.diag(a).real.copy()
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


@jit
def expm_taylor(a, max_squarings):
    """Scaling-and-squaring matrix exponential with a truncated Taylor series.

    The matrix is scaled so its 1-norm is at most 1/2, the series is summed
    until a term's largest entry falls below 1e-18, and the result is squared
    back.  Returns ``(result, ok)``; ``ok`` is False when the required
    scaling depth exceeds ``max_squarings`` or the result is not finite.
    """
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    norm = 0.0
    for j in range(n):
        col = np.sum(np.abs(a[:, j]))
        if col > norm:
            norm = col
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
    if squarings > max_squarings:
        return eye, False
    b = a / (2.0 ** squarings)
    result = eye.copy()
    term = eye.copy()
    for k in range(1, 64):
        term = (term @ b) / k
        result = result + term
        if np.max(np.abs(term)) < 1e-18:
            break
    for _ in range(squarings):
        result = result @ result
    ok = bool(np.all(np.isfinite(result.real)) and np.all(np.isfinite(result.imag)))
    return result, ok


@jit
def qubit_pair(theta, phi):
    """Dirac-unit qubit (cos(theta/2), e^{i phi} sin(theta/2)) and its orthocomplement."""
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    e = complex(np.cos(phi), np.sin(phi))
    u = np.empty(2, dtype=np.complex128)
    w = np.empty(2, dtype=np.complex128)
    u[0] = c
    u[1] = e * s
    w[0] = -np.conj(e) * s
    w[1] = c
    return u, w


@jit
def h_abs(ht, x):
    """|<u1 v1| ht |u2 v2>| in whitened (Dirac) coordinates.

    ``x`` holds (theta_a, phi_a, theta_b, phi_b); u and v are the qubits they
    parameterize, u2 and v2 their orthocomplements.
    """
    u1, u2 = qubit_pair(x[0], x[1])
    v1, v2 = qubit_pair(x[2], x[3])
    left = np.empty(4, dtype=np.complex128)
    right = np.empty(4, dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            left[2 * i + j] = u1[i] * v1[j]
            right[2 * i + j] = u2[i] * v2[j]
    acc = 0.0 + 0.0j
    for j in range(4):
        row = 0.0 + 0.0j
        for k in range(4):
            row += ht[j, k] * right[k]
        acc += np.conj(left[j]) * row
    return np.abs(acc)


@jit
def nelder_mead_h(ht, x0, step, fatol, xatol, maxfev):
    """Maximize :func:`h_abs` over the four angles by Nelder-Mead.

    Standard coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2).
    Returns ``(x_best, h_best, nfev, converged)``.
    """
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += step
    for i in range(n + 1):
        fs[i] = -h_abs(ht, sim[i])
    nfev = n + 1
    converged = False
    while True:
        order = np.argsort(fs)
        sim = sim[order].copy()
        fs = fs[order].copy()
        fspread = np.max(np.abs(fs[1:] - fs[0]))
        xspread = np.max(np.abs(sim[1:] - sim[0]))
        if fspread <= fatol and xspread <= xatol:
            converged = True
            break
        if nfev >= maxfev:
            break

        xbar = np.zeros(n)
        for i in range(n):
            xbar += sim[i]
        xbar /= n

        xr = xbar + (xbar - sim[n])
        fr = -h_abs(ht, xr)
        nfev += 1
        shrink = False
        if fr < fs[0]:
            xe = xbar + 2.0 * (xr - xbar)
            fe = -h_abs(ht, xe)
            nfev += 1
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
        elif fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
        elif fr < fs[n]:
            xc = xbar + 0.5 * (xr - xbar)
            fc = -h_abs(ht, xc)
            nfev += 1
            if fc <= fr:
                sim[n] = xc
                fs[n] = fc
            else:
                shrink = True
        else:
            xcc = xbar - 0.5 * (xbar - sim[n])
            fcc = -h_abs(ht, xcc)
            nfev += 1
            if fcc < fs[n]:
                sim[n] = xcc
                fs[n] = fcc
            else:
                shrink = True
        if shrink:
            for i in range(1, n + 1):
                sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                fs[i] = -h_abs(ht, sim[i])
            nfev += n

    best = np.argmin(fs)
    return sim[best].copy(), -fs[best], nfev, converged


@jit
def _h_grid_loops(ht, th_a, ph_a, th_b, ph_b):
    na, ma, nb, mb = th_a.shape[0], ph_a.shape[0], th_b.shape[0], ph_b.shape[0]
    vb1 = np.empty((nb, mb, 2), dtype=np.complex128)
    vb2 = np.empty((nb, mb, 2), dtype=np.complex128)
    for k in range(nb):
        for m in range(mb):
            v1, v2 = qubit_pair(th_b[k], ph_b[m])
            vb1[k, m] = np.conj(v1)
            vb2[k, m] = v2
    out = np.empty((na, ma, nb, mb))
    a = np.empty((2, 2), dtype=np.complex128)
    for i in range(na):
        for j in range(ma):
            u1, u2 = qubit_pair(th_a[i], ph_a[j])
            # a[p, q] = sum_rs conj(u1_r) ht[(r, p), (s, q)] u2_s
            for p in range(2):
                for q in range(2):
                    acc = 0.0 + 0.0j
                    for r in range(2):
                        for s_ in range(2):
                            acc += np.conj(u1[r]) * ht[2 * r + p, 2 * s_ + q] * u2[s_]
                    a[p, q] = acc
            for k in range(nb):
                for m in range(mb):
                    c = vb1[k, m]
                    d = vb2[k, m]
                    val = c[0] * (a[0, 0] * d[0] + a[0, 1] * d[1]) + c[1] * (a[1, 0] * d[0] + a[1, 1] * d[1])
                    out[i, j, k, m] = np.abs(val)
    return out


def _qubit_pairs_vec(theta, phi):
    t = theta[:, None]
    e = np.exp(1j * phi)[None, :]
    c = np.broadcast_to(np.cos(0.5 * t), (theta.size, phi.size))
    s = np.sin(0.5 * t)
    u = np.stack([c.astype(np.complex128), e * s], axis=-1)
    w = np.stack([-np.conj(e) * s, c.astype(np.complex128)], axis=-1)
    return u, w


def _h_grid_vectorized(ht, th_a, ph_a, th_b, ph_b):
    u1, u2 = _qubit_pairs_vec(np.asarray(th_a, float), np.asarray(ph_a, float))
    v1, v2 = _qubit_pairs_vec(np.asarray(th_b, float), np.asarray(ph_b, float))
    t = ht.reshape(2, 2, 2, 2)
    # h = sum conj(u1_i v1_j) t[i, j, k, l] u2_k v2_l, contracted b-side first
    left_b = np.einsum("ijkl,cdl->ijkcd", t, v2)
    left_b = np.einsum("ijkcd,cdj->ikcd", left_b, np.conj(v1))
    out = np.einsum("ikcd,abk,abi->abcd", left_b, u2, np.conj(u1))
    return np.abs(out)


h_abs_grid = _h_grid_loops if USE_NUMBA else _h_grid_vectorized
