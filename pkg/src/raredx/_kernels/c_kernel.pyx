# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scoring kernel; mirrors py_kernel.score_candidates exactly.

Arithmetic must stay IEEE-identical to the pure-Python kernel and to
ranking.term_prob_* (no fast-math, same operation order, libm log).
"""

from cpython cimport array
from libc.math cimport INFINITY, log

import array

NAME = "c"

JM = 0
DIRICHLET = 1

cdef array.array _INT_TEMPLATE = array.array("i")
cdef array.array _DOUBLE_TEMPLATE = array.array("d")


def score_candidates(int n_docs, doc_len, terms, mask, int model, double lam,
                     double mu, long long c_total):
    """See py_kernel.score_candidates; identical contract and results."""
    cdef int[:] dl = doc_len
    cdef int k = len(terms)
    cdef bytearray matched_b = bytearray(n_docs)
    cdef unsigned char[:] matched = matched_b
    cdef int[:] idx
    cdef int[:] tfv
    cdef signed char[:] maskv
    cdef Py_ssize_t j, m
    cdef int d, t, tf, n_cand, ci
    cdef double s, p, cqc
    cdef double lam1 = 1.0 - lam
    cdef bint dead

    for t in range(k):
        idx = terms[t][2]
        m = idx.shape[0]
        for j in range(m):
            matched[idx[j]] = 1
    if mask is not None:
        maskv = mask
        for d in range(n_docs):
            if matched[d] and not maskv[d]:
                matched[d] = 0

    # Dense per-term tf buffers, flattened to one k*n_docs block.
    cdef array.array tfbuf_arr = array.clone(_INT_TEMPLATE, k * n_docs, zero=True)
    cdef int[:] tfbuf = tfbuf_arr
    cdef array.array mults_arr = array.clone(_DOUBLE_TEMPLATE, k, zero=False)
    cdef double[:] mults = mults_arr
    cdef array.array bgs_arr = array.clone(_DOUBLE_TEMPLATE, k, zero=False)
    cdef double[:] bgs = bgs_arr
    cdef long long cq
    for t in range(k):
        mults[t] = <double> terms[t][0]
        cq = terms[t][1]
        cqc = (<double> cq) / (<double> c_total)
        bgs[t] = lam * cqc if model == JM else mu * cqc
        idx = terms[t][2]
        tfv = terms[t][3]
        m = idx.shape[0]
        for j in range(m):
            tfbuf[t * n_docs + idx[j]] = tfv[j]

    n_cand = 0
    for d in range(n_docs):
        if matched[d]:
            n_cand += 1
    cdef array.array cand_arr = array.clone(_INT_TEMPLATE, n_cand, zero=False)
    cdef int[:] cand = cand_arr
    cdef array.array scores_arr = array.clone(_DOUBLE_TEMPLATE, n_cand, zero=False)
    cdef double[:] scores = scores_arr

    ci = 0
    for d in range(n_docs):
        if not matched[d]:
            continue
        s = 0.0
        dead = False
        for t in range(k):
            tf = tfbuf[t * n_docs + d]
            if model == JM:
                p = lam1 * ((<double> tf) / (<double> dl[d])) + bgs[t]
            else:
                p = ((<double> tf) + bgs[t]) / ((<double> dl[d]) + mu)
            if p <= 0.0:
                dead = True
                break
            s += mults[t] * log(p)
        cand[ci] = d
        scores[ci] = -INFINITY if dead else s
        ci += 1
    return cand_arr, scores_arr
