# Compiled segment-product kernel. Mirrors _pykernels.cell_products.
from libc.math cimport sin, cos, frexp, ldexp, fabs

import numpy as np

BACKEND = "cython"

cdef double _RESCALE_AT = 2.0 ** 200


def cell_products(const double[::1] widths, const unsigned char[::1] wells,
                  const double[::1] k0, const double[::1] k1):
    """Scaled coefficients of the layer product, one row per energy.

    Every layer contributes [[cos, i sin/k], [i k sin, cos]]; products of such
    matrices keep the pattern [[q11, i q12], [i q21, q22]] with real q's.
    Row p holds (q11, q12, q21, q22, e) with the true product equal to
    2**e times the stored q's.
    """
    cdef Py_ssize_t n_seg = widths.shape[0]
    cdef Py_ssize_t n_pts = k0.shape[0]
    if wells.shape[0] != n_seg or k1.shape[0] != n_pts:
        raise ValueError("shape mismatch between widths/wells or k0/k1")
    out = np.empty((n_pts, 5), dtype=np.float64)
    cdef double[:, ::1] q = out
    cdef Py_ssize_t p, s
    cdef double q11, q12, q21, q22, t11, t12, t21, t22
    cdef double k, phase, c, sn, x12, x21, big
    cdef int e, shift
    with nogil:
        for p in range(n_pts):
            q11 = 1.0
            q12 = 0.0
            q21 = 0.0
            q22 = 1.0
            shift = 0
            for s in range(n_seg):
                k = k1[p] if wells[s] else k0[p]
                phase = k * widths[s]
                c = cos(phase)
                sn = sin(phase)
                x12 = sn / k
                x21 = k * sn
                t11 = q11 * c - q12 * x21
                t12 = q11 * x12 + q12 * c
                t21 = q21 * c + q22 * x21
                t22 = q22 * c - q21 * x12
                q11 = t11
                q12 = t12
                q21 = t21
                q22 = t22
                big = fabs(q11) + fabs(q12) + fabs(q21) + fabs(q22)
                if big > _RESCALE_AT:
                    frexp(big, &e)
                    q11 = ldexp(q11, -e)
                    q12 = ldexp(q12, -e)
                    q21 = ldexp(q21, -e)
                    q22 = ldexp(q22, -e)
                    shift += e
            q[p, 0] = q11
            q[p, 1] = q12
            q[p, 2] = q21
            q[p, 3] = q22
            q[p, 4] = shift
    return out
