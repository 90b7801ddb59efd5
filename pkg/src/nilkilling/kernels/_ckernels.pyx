# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular elimination kernel (same contract as ``_pykernels``)."""

import numpy as np
from libc.stdint cimport int64_t

BACKEND = "cython"


cdef inline int64_t _modpow(int64_t base, int64_t exp, int64_t p) nogil:
    cdef int64_t result = 1
    base %= p
    while exp > 0:
        if exp & 1:
            result = (result * base) % p
        base = (base * base) % p
        exp >>= 1
    return result


def rref_mod_p(rows, int64_t p):
    """Row-reduce an integer matrix modulo the prime ``p`` (``p < 2**31``)."""
    cdef int64_t[:, ::1] src = np.ascontiguousarray(rows, dtype=np.int64)
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t n = src.shape[1]
    cdef Py_ssize_t cap = min(m, n)
    basis_arr = np.zeros((max(cap, 1), n), dtype=np.int64)
    piv_arr = np.zeros(max(cap, 1), dtype=np.int64)
    buf_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[:, ::1] basis = basis_arr
    cdef int64_t[::1] piv = piv_arr
    cdef int64_t[::1] buf = buf_arr
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t r, i, j, lead
    cdef int64_t c, inv

    with nogil:
        for r in range(m):
            if rank == n:
                break
            for j in range(n):
                buf[j] = src[r, j]
            for i in range(rank):
                c = buf[piv[i]]
                if c != 0:
                    for j in range(n):
                        if basis[i, j] != 0:
                            buf[j] = (buf[j] - c * basis[i, j]) % p
                            if buf[j] < 0:
                                buf[j] += p
            lead = -1
            for j in range(n):
                if buf[j] != 0:
                    lead = j
                    break
            if lead < 0:
                continue
            inv = _modpow(buf[lead], p - 2, p)
            for j in range(n):
                if buf[j] != 0:
                    buf[j] = (buf[j] * inv) % p
            for i in range(rank):
                c = basis[i, lead]
                if c != 0:
                    for j in range(n):
                        if buf[j] != 0:
                            basis[i, j] = (basis[i, j] - c * buf[j]) % p
                            if basis[i, j] < 0:
                                basis[i, j] += p
            for j in range(n):
                basis[rank, j] = buf[j]
            piv[rank] = lead
            rank += 1

    order = np.argsort(piv_arr[:rank], kind="stable")
    return basis_arr[:rank][order].copy(), [int(piv_arr[k]) for k in order]
