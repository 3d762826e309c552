# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: witness search, exact character-sum vanishing, Ghosh descent.

Same contracts as ``gbslocc._pycore``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef enum:
    MAXD = 64

cdef enum:
    CERTIFIED = 0
    STALLED = 1
    EXHAUSTED = 2


cdef inline cnp.int64_t _mod(cnp.int64_t x, cnp.int64_t d) nogil:
    cdef cnp.int64_t r = x % d
    return r + d if r < 0 else r


def first_witness(ms, ns, int d):
    cdef cnp.int64_t[::1] m = np.ascontiguousarray(ms, dtype=np.int64)
    cdef cnp.int64_t[::1] n = np.ascontiguousarray(ns, dtype=np.int64)
    cdef Py_ssize_t ell = m.shape[0], i
    cdef int alpha, beta, v
    cdef unsigned char seen[MAXD]
    cdef bint ok
    if ell > d:
        return None
    for alpha in range(d):
        for beta in range(d):
            for i in range(d):
                seen[i] = 0
            ok = True
            for i in range(ell):
                v = <int>_mod(m[i] * alpha + n[i] * beta, d)
                if seen[v]:
                    ok = False
                    break
                seen[v] = 1
            if ok:
                return (alpha, beta)
    return None


def vanishing_table(ms, ns, int d, phi):
    cdef cnp.int64_t[::1] m = np.ascontiguousarray(ms, dtype=np.int64)
    cdef cnp.int64_t[::1] n = np.ascontiguousarray(ns, dtype=np.int64)
    cdef cnp.int64_t[::1] p = np.ascontiguousarray(phi, dtype=np.int64)
    cdef Py_ssize_t ell = m.shape[0], i, k, j
    cdef Py_ssize_t deg = p.shape[0] - 1
    cdef cnp.int64_t h[MAXD]
    cdef cnp.int64_t c
    cdef int mm, nn
    cdef bint zero
    out = np.zeros((d, d), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    for mm in range(d):
        for nn in range(d):
            for k in range(d):
                h[k] = 0
            for i in range(ell):
                h[_mod(n[i] * mm - m[i] * nn, d)] += 1
            for k in range(d - 1, deg - 1, -1):
                c = h[k]
                if c:
                    for j in range(deg + 1):
                        h[k - deg + j] -= c * p[j]
            zero = True
            for k in range(deg):
                if h[k] != 0:
                    zero = False
                    break
            if zero:
                o[mm, nn] = 1
    return out


cdef struct Ctx:
    int d
    int np_
    cnp.int64_t* src      # np_ * d
    cnp.int64_t* dst      # np_ * d
    double* fre    # phase tables, np_ * d
    double* fim
    double* bre
    double* bim
    double* counts
    double* ere    # scratch, np_
    double* eim


cdef double _value_grad(Ctx* c, double* xr, double* xi, double* gr, double* gi) nogil:
    cdef int d = c.d, p, k, s, off
    cdef double f = 0.0, er, ei, ar, ai, w
    for p in range(c.np_):
        off = p * d
        er = 0.0
        ei = 0.0
        for k in range(d):
            s = c.src[off + k]
            # (fre + i fim) * x[s]
            ar = c.fre[off + k] * xr[s] - c.fim[off + k] * xi[s]
            ai = c.fre[off + k] * xi[s] + c.fim[off + k] * xr[s]
            # conj(x[k]) * a
            er += xr[k] * ar + xi[k] * ai
            ei += xr[k] * ai - xi[k] * ar
        c.ere[p] = er
        c.eim[p] = ei
        f += c.counts[p] * (er * er + ei * ei)
    if gr == NULL:
        return f
    for k in range(d):
        gr[k] = 0.0
        gi[k] = 0.0
    for p in range(c.np_):
        off = p * d
        w = 2.0 * c.counts[p]
        er = w * c.ere[p]
        ei = w * c.eim[p]
        for k in range(d):
            s = c.src[off + k]
            ar = c.fre[off + k] * xr[s] - c.fim[off + k] * xi[s]
            ai = c.fre[off + k] * xi[s] + c.fim[off + k] * xr[s]
            # conj(e) * a
            gr[k] += er * ar + ei * ai
            gi[k] += er * ai - ei * ar
            s = c.dst[off + k]
            ar = c.bre[off + k] * xr[s] - c.bim[off + k] * xi[s]
            ai = c.bre[off + k] * xi[s] + c.bim[off + k] * xr[s]
            # e * a
            gr[k] += er * ar - ei * ai
            gi[k] += er * ai + ei * ar
    return f


cdef class _Kernel:
    cdef Ctx c
    cdef object keep

    def __cinit__(self, da, db, counts, int d):
        cdef cnp.int64_t[::1] a = np.ascontiguousarray(da, dtype=np.int64)
        cdef cnp.int64_t[::1] b = np.ascontiguousarray(db, dtype=np.int64)
        cdef Py_ssize_t P = a.shape[0]
        kk = np.arange(d)
        src = np.ascontiguousarray((kk[None, :] - np.asarray(a)[:, None]) % d, dtype=np.int64)
        dst = np.ascontiguousarray((kk[None, :] + np.asarray(a)[:, None]) % d, dtype=np.int64)
        roots = np.exp(2j * np.pi * np.arange(d) / d)
        fwd = roots[(np.asarray(b)[:, None] * src) % d]
        bwd = roots[(-np.asarray(b)[:, None] * kk[None, :]) % d]
        fre = np.ascontiguousarray(fwd.real)
        fim = np.ascontiguousarray(fwd.imag)
        bre = np.ascontiguousarray(bwd.real)
        bim = np.ascontiguousarray(bwd.imag)
        cnt = np.ascontiguousarray(counts, dtype=np.float64)
        ere = np.zeros(max(P, 1))
        eim = np.zeros(max(P, 1))
        self.keep = (src, dst, fre, fim, bre, bim, cnt, ere, eim)
        self.c.d = d
        self.c.np_ = <int>P
        self.c.src = <cnp.int64_t*>cnp.PyArray_DATA(src)
        self.c.dst = <cnp.int64_t*>cnp.PyArray_DATA(dst)
        self.c.fre = <double*>cnp.PyArray_DATA(fre)
        self.c.fim = <double*>cnp.PyArray_DATA(fim)
        self.c.bre = <double*>cnp.PyArray_DATA(bre)
        self.c.bim = <double*>cnp.PyArray_DATA(bim)
        self.c.counts = <double*>cnp.PyArray_DATA(cnt)
        self.c.ere = <double*>cnp.PyArray_DATA(ere)
        self.c.eim = <double*>cnp.PyArray_DATA(eim)


def value_grad(phi, da, db, counts, int d):
    cdef _Kernel kern = _Kernel(da, db, counts, d)
    x = np.asarray(phi, dtype=complex)
    cdef double[::1] xr = np.ascontiguousarray(x.real)
    cdef double[::1] xi = np.ascontiguousarray(x.imag)
    cdef double[::1] gr = np.zeros(d)
    cdef double[::1] gi = np.zeros(d)
    f = _value_grad(&kern.c, &xr[0], &xi[0], &gr[0], &gi[0])
    return f, np.asarray(gr) + 1j * np.asarray(gi)


cdef inline void _normalize(double* xr, double* xi, int d) nogil:
    cdef double s = 0.0
    cdef int k
    for k in range(d):
        s += xr[k] * xr[k] + xi[k] * xi[k]
    s = sqrt(s)
    for k in range(d):
        xr[k] /= s
        xi[k] /= s


def descend_batch(phi0, da, db, counts, int d, long max_iters, double tol,
                  double step0, long window, double rtol, double min_step):
    cdef _Kernel kern = _Kernel(da, db, counts, d)
    x0 = np.array(phi0, dtype=complex)
    cdef Py_ssize_t R = x0.shape[0], r
    out_phi = np.empty((R, d), dtype=complex)
    out_f = np.empty(R)
    out_it = np.zeros(R, dtype=np.int64)
    out_st = np.empty(R, dtype=np.int64)
    cdef double[::1] xr = np.empty(d), xi = np.empty(d)
    cdef double[::1] gr = np.empty(d), gi = np.empty(d)
    cdef double[::1] tr = np.empty(d), ti = np.empty(d)
    cdef double[::1] hr = np.empty(d), hi = np.empty(d)
    cdef double f, ft, fref, step, radial, target = tol * tol
    cdef long it
    cdef int k, status
    cdef Ctx* c = &kern.c
    for r in range(R):
        for k in range(d):
            xr[k] = x0[r, k].real
            xi[k] = x0[r, k].imag
        _normalize(&xr[0], &xi[0], d)
        f = _value_grad(c, &xr[0], &xi[0], &gr[0], &gi[0])
        fref = f
        step = step0
        it = 0
        status = EXHAUSTED
        if f < target:
            status = CERTIFIED
        with nogil:
            while status == EXHAUSTED and it < max_iters:
                it += 1
                radial = 0.0
                for k in range(d):
                    radial += xr[k] * gr[k] + xi[k] * gi[k]
                for k in range(d):
                    tr[k] = xr[k] - step * (gr[k] - radial * xr[k])
                    ti[k] = xi[k] - step * (gi[k] - radial * xi[k])
                _normalize(&tr[0], &ti[0], d)
                ft = _value_grad(c, &tr[0], &ti[0], &hr[0], &hi[0])
                if ft < f:
                    for k in range(d):
                        xr[k] = tr[k]
                        xi[k] = ti[k]
                        gr[k] = hr[k]
                        gi[k] = hi[k]
                    f = ft
                    step = 2.0 * step if 2.0 * step < 1.0 else 1.0
                else:
                    step = 0.5 * step
                if f < target:
                    status = CERTIFIED
                elif it % window == 0:
                    if not (fref - f > rtol * f and step > min_step):
                        status = STALLED
                    fref = f
        for k in range(d):
            out_phi[r, k] = xr[k] + 1j * xi[k]
        out_f[r] = f
        out_it[r] = it
        out_st[r] = status
    return out_phi, out_f, out_it, out_st
