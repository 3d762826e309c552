"""Pure-Python / numpy implementations of the hot kernels.

Mirrors ``_core.pyx`` function for function; ``gbslocc.kernels`` picks one.
"""

from __future__ import annotations

import numpy as np

CERTIFIED, STALLED, EXHAUSTED = 0, 1, 2


def first_witness(ms, ns, d):
    """Lexicographically first (alpha, beta) with m*alpha + n*beta distinct mod d, or None."""
    ell = len(ms)
    if ell > d:
        return None
    for alpha in range(d):
        for beta in range(d):
            seen = set()
            for m, n in zip(ms, ns):
                v = (m * alpha + n * beta) % d
                if v in seen:
                    break
                seen.add(v)
            else:
                return (alpha, beta)
    return None


def vanishing_table(ms, ns, d, phi):
    """uint8 (d, d) array: 1 where sum_i omega^(n_i m - m_i n) is exactly zero.

    ``phi`` holds the integer coefficients of the d-th cyclotomic polynomial,
    lowest degree first.
    """
    deg = len(phi) - 1
    out = np.zeros((d, d), dtype=np.uint8)
    for m in range(d):
        for n in range(d):
            h = [0] * d
            for mi, ni in zip(ms, ns):
                h[(ni * m - mi * n) % d] += 1
            for k in range(d - 1, deg - 1, -1):
                c = h[k]
                if c:
                    for j in range(deg + 1):
                        h[k - deg + j] -= c * phi[j]
            if not any(h[:deg]):
                out[m, n] = 1
    return out


class _Tables:
    def __init__(self, da, db, d):
        da = np.asarray(da, dtype=np.int64)
        db = np.asarray(db, dtype=np.int64)
        k = np.arange(d)
        roots = np.exp(2j * np.pi * np.arange(d) / d)
        self.src = (k[None, :] - da[:, None]) % d          # X^a Z^b phi: read phi[k - a]
        self.fwd = roots[(db[:, None] * self.src) % d]
        self.dst = (k[None, :] + da[:, None]) % d          # (X^a Z^b)^dagger phi: read phi[k + a]
        self.bwd = roots[(-db[:, None] * k[None, :]) % d]


def _value_grad(phi, tab, counts):
    # phi: (R, d)
    dphi = tab.fwd[None] * phi[:, tab.src]                 # (R, P, d)
    e = np.einsum("rk,rpk->rp", phi.conj(), dphi)
    ce = counts[None] * e
    dhphi = tab.bwd[None] * phi[:, tab.dst]
    g = 2.0 * (np.einsum("rp,rpk->rk", ce.conj(), dphi) + np.einsum("rp,rpk->rk", ce, dhphi))
    f = (counts[None] * (e.real**2 + e.imag**2)).sum(axis=1)
    return f, g


def value_grad(phi, da, db, counts, d):
    """f(phi) = sum_p c_p |<phi|X^a_p Z^b_p|phi>|^2 and its gradient 2 df/d(conj phi)."""
    tab = _Tables(da, db, d)
    f, g = _value_grad(np.asarray(phi, dtype=complex)[None], tab, np.asarray(counts, dtype=float))
    return float(f[0]), g[0]


def descend_batch(phi0, da, db, counts, d, max_iters, tol, step0, window, rtol, min_step):
    """Projected gradient descent on the unit sphere, one independent run per row.

    Returns (phi, f, iterations, status) arrays with status in
    {CERTIFIED, STALLED, EXHAUSTED}.
    """
    phi = np.array(phi0, dtype=complex, copy=True)
    phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    r = phi.shape[0]
    counts = np.asarray(counts, dtype=float)
    tab = _Tables(da, db, d)
    f, g = _value_grad(phi, tab, counts)
    step = np.full(r, float(step0))
    fref = f.copy()
    iters = np.zeros(r, dtype=np.int64)
    status = np.full(r, EXHAUSTED, dtype=np.int64)
    target = tol * tol
    done = f < target
    status[done] = CERTIFIED
    active = np.flatnonzero(~done)
    it = 0
    while active.size and it < max_iters:
        it += 1
        p = phi[active]
        fa = f[active]
        ga = g[active]
        sa = step[active]
        radial = np.real(np.sum(p.conj() * ga, axis=1))
        trial = p - sa[:, None] * (ga - radial[:, None] * p)
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        ft, gt = _value_grad(trial, tab, counts)
        acc = ft < fa
        phi[active] = np.where(acc[:, None], trial, p)
        f[active] = np.where(acc, ft, fa)
        g[active] = np.where(acc[:, None], gt, ga)
        step[active] = np.where(acc, np.minimum(2.0 * sa, 1.0), 0.5 * sa)
        iters[active] = it
        fin = f[active] < target
        status[active[fin]] = CERTIFIED
        keep = ~fin
        if it % window == 0:
            fa = f[active]
            moving = (fref[active] - fa > rtol * fa) & (step[active] > min_step)
            status[active[keep & ~moving]] = STALLED
            keep &= moving
            fref[active] = fa
        active = active[keep]
    return phi, f, iters, status
