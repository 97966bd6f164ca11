# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``."""

from libc.math cimport sqrt, log2, sin, cos, fabs

cdef double BRANCH_CUTOFF = 1e-12


cdef inline double _h(double x) noexcept nogil:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * log2(x) - (1.0 - x) * log2(1.0 - x)


cdef inline double _branch(double v0, double v1, double v2, double v3) noexcept nogil:
    cdef double p = 0.5 * v0
    cdef double r
    if p < BRANCH_CUTOFF:
        return 0.0
    r = sqrt(v1 * v1 + v2 * v2 + v3 * v3) / v0
    if r > 1.0:
        r = 1.0
    return p * _h(0.5 * (1.0 + r))


def measured_entropy_batch(const double[:, ::1] T, const double[::1] theta,
                           const double[::1] phi, double[::1] out):
    cdef Py_ssize_t i, mu, n = theta.shape[0]
    cdef double nx, ny, nz, st
    cdef double w[4]
    with nogil:
        for i in range(n):
            st = sin(theta[i])
            nx = st * cos(phi[i])
            ny = st * sin(phi[i])
            nz = cos(theta[i])
            for mu in range(4):
                w[mu] = T[mu, 1] * nx + T[mu, 2] * ny + T[mu, 3] * nz
            out[i] = (_branch(T[0, 0] + w[0], T[1, 0] + w[1], T[2, 0] + w[2], T[3, 0] + w[3])
                      + _branch(T[0, 0] - w[0], T[1, 0] - w[1], T[2, 0] - w[2], T[3, 0] - w[3]))
    return out


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double _csq(double complex a00z0, double complex a00z1,
                        double complex a01z0, double complex a01z1,
                        double complex a10z0, double complex a10z1,
                        double complex a11z0, double complex a11z1) noexcept nogil:
    # K[z, z'] = -t00[z] t11[z'] + t01[z] t10[z'] + t10[z] t01[z'] - t11[z] t00[z']
    cdef double complex k00, k01, k10, k11, det
    cdef double fro, res
    k00 = -a00z0 * a11z0 + a01z0 * a10z0 + a10z0 * a01z0 - a11z0 * a00z0
    k01 = -a00z0 * a11z1 + a01z0 * a10z1 + a10z0 * a01z1 - a11z0 * a00z1
    k10 = -a00z1 * a11z0 + a01z1 * a10z0 + a10z1 * a01z0 - a11z1 * a00z0
    k11 = -a00z1 * a11z1 + a01z1 * a10z1 + a10z1 * a01z1 - a11z1 * a00z1
    fro = _abs2(k00) + _abs2(k01) + _abs2(k10) + _abs2(k11)
    det = k00 * k11 - k01 * k10
    res = fro - 2.0 * sqrt(_abs2(det))
    return res if res > 0.0 else 0.0


cdef inline void _single(double complex* p, int axis, double* s, double* c2) noexcept nogil:
    cdef int stride = 4 >> axis
    cdef int j, i0
    cdef double p0 = 0.0, p1 = 0.0, disc, lam, det
    cdef double complex x = 0.0
    cdef int others[4]
    cdef int k = 0
    for j in range(8):
        if (j & stride) == 0:
            others[k] = j
            k += 1
    for j in range(4):
        i0 = others[j]
        p0 += _abs2(p[i0])
        p1 += _abs2(p[i0 + stride])
        x += p[i0] * p[i0 + stride].conjugate()
    disc = sqrt((p0 - p1) * (p0 - p1) + 4.0 * _abs2(x))
    lam = 0.5 * (1.0 + disc)
    if lam > 1.0:
        lam = 1.0
    s[0] = _h(lam)
    det = p0 * p1 - _abs2(x)
    c2[0] = 4.0 * det if det > 0.0 else 0.0


def pure3_constituents(const double complex[:, ::1] amps, double[:, ::1] out):
    cdef Py_ssize_t r, n = amps.shape[0]
    cdef int j
    cdef double complex p[8]
    cdef double s, c2, dummy
    with nogil:
        for r in range(n):
            for j in range(8):
                p[j] = amps[r, j]
            _single(p, 0, &s, &c2)
            out[r, 0] = s
            out[r, 5] = c2
            _single(p, 1, &s, &dummy)
            out[r, 1] = s
            _single(p, 2, &s, &dummy)
            out[r, 2] = s
            # index = 4a + 2b + c
            out[r, 3] = _csq(p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7])
            out[r, 4] = _csq(p[0], p[2], p[1], p[3], p[4], p[6], p[5], p[7])
    return out
