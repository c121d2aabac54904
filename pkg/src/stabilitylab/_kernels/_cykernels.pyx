# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python kernels (same semantics, same order)."""

from libc.math cimport fabs, sqrt

import numpy as np

BACKEND = "cython"


def jacobi_eigvals_hermitian(a, double tol=1e-14, int max_sweeps=60):
    """Eigenvalues of a Hermitian matrix, ascending (cyclic Jacobi)."""
    cdef double complex[:, ::1] m = np.array(a, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("jacobi_eigvals_hermitian expects a square matrix")
    if n == 1:
        return np.array([m[0, 0].real])
    cdef double scale = 0.0, off, mag, tau, t, c, s, re, im
    cdef double complex apq, alpha, vp, vq
    cdef Py_ssize_t i, p, q, sweep
    for p in range(n):
        for q in range(n):
            re = m[p, q].real
            im = m[p, q].imag
            scale += re * re + im * im
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n)
    cdef double threshold = tol * scale
    cdef double small = threshold / (n * n)
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    re = m[p, q].real
                    im = m[p, q].imag
                    off += re * re + im * im
        if sqrt(off) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                mag = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag <= small:
                    continue
                alpha = apq / mag
                tau = (m[q, q].real - m[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0.0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    vp = m[i, p]
                    vq = m[i, q]
                    m[i, p] = c * vp - s * alpha * vq
                    m[i, q] = s * alpha.conjugate() * vp + c * vq
                for i in range(n):
                    vp = m[p, i]
                    vq = m[q, i]
                    m[p, i] = c * vp - s * alpha.conjugate() * vq
                    m[q, i] = s * alpha * vp + c * vq
                m[p, q] = 0.0
                m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
    out = np.empty(n)
    for i in range(n):
        out[i] = m[i, i].real
    out.sort()
    return out


def count_words(values, region_shape, box_shape, window_offsets, alphabet):
    """Count window words over all box shifts; see the pure twin."""
    cdef long long[::1] vals = np.ascontiguousarray(values, dtype=np.int64).ravel()
    cdef Py_ssize_t d = len(region_shape)
    cdef long long[::1] rshape = np.asarray(region_shape, dtype=np.int64)
    cdef long long[::1] bshape = np.asarray(box_shape, dtype=np.int64)
    offs_nd = np.asarray(window_offsets, dtype=np.int64).reshape(len(window_offsets), d)
    cdef Py_ssize_t w = offs_nd.shape[0]
    # strides of the flattened row-major region
    strides_np = np.empty(d, dtype=np.int64)
    cdef long long acc = 1
    cdef Py_ssize_t axis
    for axis in range(d - 1, -1, -1):
        strides_np[axis] = acc
        acc *= rshape[axis]
    cdef long long[::1] strides = strides_np
    # flat offset and power for each window cell
    flat_offs_np = np.empty(w, dtype=np.int64)
    pows_np = np.empty(w, dtype=np.int64)
    cdef long long po = 1
    cdef Py_ssize_t j
    for j in range(w):
        flat_offs_np[j] = (offs_nd[j] * strides_np).sum()
        pows_np[j] = po
        po *= alphabet
    cdef long long[::1] flat_offs = flat_offs_np
    cdef long long[::1] pows = pows_np
    cdef long long total = 1
    for axis in range(d):
        total *= bshape[axis]
    idx_np = np.zeros(d, dtype=np.int64)
    cdef long long[::1] idx = idx_np
    counts = {}
    cdef long long cell, code, step
    cdef Py_ssize_t k
    for step in range(total):
        cell = 0
        for axis in range(d):
            cell += idx[axis] * strides[axis]
        code = 0
        for j in range(w):
            code += vals[cell + flat_offs[j]] * pows[j]
        if code in counts:
            counts[code] += 1
        else:
            counts[code] = 1
        for axis in range(d - 1, -1, -1):
            idx[axis] += 1
            if idx[axis] < bshape[axis]:
                break
            idx[axis] = 0
    return counts
