# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled truncated-series convolution kernel over F_{p^m}."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "speedups"


def series_mul(const cnp.int64_t[:, :] a, const cnp.int64_t[:, :] b, int nout, int p,
               const cnp.int64_t[:, :] red_rows):
    cdef int na = a.shape[0]
    cdef int m = a.shape[1]
    cdef int nb = b.shape[0]
    cdef int width = 2 * m - 1
    cdef int upto = na + nb - 1
    if upto > nout:
        upto = nout
    full_arr = np.zeros((upto if upto > 0 else 0, width), dtype=np.int64)
    cdef cnp.int64_t[:, :] full = full_arr
    cdef int i, j, k, l, jmax
    cdef cnp.int64_t aik
    for i in range(min(na, upto)):
        jmax = nb
        if jmax > upto - i:
            jmax = upto - i
        for k in range(m):
            aik = a[i, k]
            if aik == 0:
                continue
            for j in range(jmax):
                for l in range(m):
                    full[i + j, k + l] += aik * b[j, l]
    out_arr = np.zeros((nout, m), dtype=np.int64)
    cdef cnp.int64_t[:, :] out = out_arr
    cdef cnp.int64_t c
    for i in range(upto):
        for k in range(m):
            out[i, k] = full[i, k] % p
        for k in range(m - 1):
            c = full[i, m + k] % p
            if c != 0:
                for l in range(m):
                    out[i, l] = (out[i, l] + c * red_rows[k, l]) % p
    return out_arr
