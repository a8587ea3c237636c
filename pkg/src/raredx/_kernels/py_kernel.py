"""Pure-Python scoring kernel.

The arithmetic must match ranking.term_prob_jm / term_prob_dirichlet
bit-for-bit (same IEEE operations in the same order), so that a ranking
produced here is exactly the order a score_document sweep would give.
c_kernel.pyx mirrors this file; keep the two in sync.
"""

from __future__ import annotations

from array import array
from math import inf, log

NAME = "python"

JM = 0
DIRICHLET = 1


def score_candidates(n_docs, doc_len, terms, mask, model, lam, mu, c_total):
    """Score every document matching at least one query term.

    terms: one (multiplicity, collection_tf, doc_idx_array, tf_array) tuple
    per unique query token, in first-occurrence order. mask, when given, is
    a per-document 0/1 array restricting the candidate set.

    Returns (candidate dense indices ascending, parallel score array);
    a document with any zero term probability scores -inf.
    """
    matched = bytearray(n_docs)
    for _mult, _cq, idx, _tf in terms:
        for d in idx:
            matched[d] = 1
    if mask is not None:
        for d in range(n_docs):
            if matched[d] and not mask[d]:
                matched[d] = 0

    k = len(terms)
    # Dense tf buffer per term: O(1) lookup in the per-candidate loop.
    buffers = []
    mults = []
    bgs = []  # JM: lam * cq/|C|;  Dirichlet: mu * cq/|C|
    for mult, cq, idx, tf in terms:
        buf = array("i", bytes(4 * n_docs))
        for j in range(len(idx)):
            buf[idx[j]] = tf[j]
        buffers.append(buf)
        mults.append(float(mult))
        cqc = cq / c_total
        bgs.append(lam * cqc if model == JM else mu * cqc)

    cand = array("i", (d for d in range(n_docs) if matched[d]))
    scores = array("d", bytes(8 * len(cand)))
    lam1 = 1.0 - lam
    for ci in range(len(cand)):
        d = cand[ci]
        dl = doc_len[d]
        s = 0.0
        dead = False
        for t in range(k):
            tf = buffers[t][d]
            if model == JM:
                p = lam1 * (tf / dl) + bgs[t]
            else:
                p = (tf + bgs[t]) / (dl + mu)
            if p <= 0.0:
                dead = True
                break
            s += mults[t] * log(p)
        scores[ci] = -inf if dead else s
    return cand, scores
