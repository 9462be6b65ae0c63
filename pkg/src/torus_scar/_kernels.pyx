# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for lattice permutations and monomial operators.

Signatures mirror ``torus_scar._pykernels`` exactly; ``torus_scar._core``
picks one of the two at import time.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def lattice_image(long a, long b, long c, long d, long N):
    """Row-major index of B Q mod N for every Q in (Z/NZ)^2."""
    cdef long n2 = N * N
    cdef cnp.ndarray[cnp.int64_t, ndim=1] image = np.empty(n2, dtype=np.int64)
    cdef cnp.int64_t[::1] out = image
    cdef long ar = a % N, br = b % N, cr = c % N, dr = d % N
    cdef long x1, x2, y1, y2
    if ar < 0:
        ar += N
    if br < 0:
        br += N
    if cr < 0:
        cr += N
    if dr < 0:
        dr += N
    for x1 in range(N):
        for x2 in range(N):
            y1 = (ar * x1 + br * x2) % N
            y2 = (cr * x1 + dr * x2) % N
            out[x1 * N + x2] = y1 * N + y2
    return image


def cycle_decompose(cnp.int64_t[::1] image):
    """Split a permutation into cycles.

    Returns ``(order, starts)``: cycle ``k`` occupies
    ``order[starts[k]:starts[k+1]]`` and is listed as ``[p(r), p(p(r)), ..., r]``
    where ``r`` is its smallest element. Cycles come sorted by ``r``.
    """
    cdef Py_ssize_t n = image.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] order = order_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] starts_arr = np.empty(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] starts = starts_arr
    cdef Py_ssize_t r, pos = 0, ncyc = 0, steps
    cdef cnp.int64_t cur
    for r in range(n):
        if seen[r]:
            continue
        starts[ncyc] = pos
        ncyc += 1
        cur = r
        steps = 0
        while True:
            cur = image[cur]
            if cur < 0 or cur >= n or seen[cur]:
                raise ValueError("image is not a permutation")
            seen[cur] = 1
            order[pos] = cur
            pos += 1
            steps += 1
            if cur == r:
                break
    starts[ncyc] = pos
    return order_arr, starts_arr[: ncyc + 1].copy()


def apply_monomial(cnp.complex128_t[::1] phases, cnp.int64_t[::1] image,
                   cnp.complex128_t[::1] psi, int nthreads=1):
    """out[i] = phases[i] * psi[image[i]]; rows are split across threads."""
    cdef Py_ssize_t n = phases.shape[0], i
    if image.shape[0] != n or psi.shape[0] != n:
        raise ValueError("length mismatch")
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out_arr = np.empty(n, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = out_arr
    cdef double *po = <double *> &out[0] if n else NULL
    cdef const double *pp = <const double *> &phases[0] if n else NULL
    cdef const double *px = <const double *> &psi[0] if n else NULL
    cdef const cnp.int64_t *im = &image[0] if n else NULL
    if nthreads <= 1:
        with nogil:
            for i in range(n):
                _cmul(pp, px, im, po, i)
    else:
        for i in prange(n, nogil=True, num_threads=nthreads, schedule="static"):
            _cmul(pp, px, im, po, i)
    return out_arr


cdef inline void _cmul(const double *pp, const double *px, const cnp.int64_t *im,
                       double *po, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t j = 2 * im[i]
    cdef double ar = pp[2 * i], ai = pp[2 * i + 1], br = px[j], bi = px[j + 1]
    po[2 * i] = ar * br - ai * bi
    po[2 * i + 1] = ar * bi + ai * br
