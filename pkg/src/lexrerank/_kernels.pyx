# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. ``_kernels_py`` is the reference twin; keep the
arithmetic of both in the same order so results agree bit for bit."""

import numpy as np

from libc.math cimport exp, fabs, log, INFINITY


def estep(const int[::1] src_len, const int[::1] tgt_len,
          const double[::1] link_prob, double null_prob, double tension,
          bint diagonal, double[::1] post):
    """Posterior link weights for every (target position, source slot).

    Links are laid out sentence by sentence, target position by target
    position, each row holding ``n + 1`` slots with slot 0 the null word.
    Writes normalized posteriors into ``post`` and returns
    ``(loglik, empirical_h, model_h)``; loglik is NaN on underflow.
    """
    cdef Py_ssize_t n_pairs = src_len.shape[0]
    cdef Py_ssize_t k, i, j, n, m, pos = 0
    cdef double ll = 0.0, emp = 0.0, mod = 0.0
    cdef double z, eh, total, w, h, e, mass, prior0, uniform
    cdef int max_n = 0
    for k in range(n_pairs):
        if src_len[k] > max_n:
            max_n = src_len[k]
    cdef double[::1] hbuf = np.zeros(max_n + 1)
    cdef double[::1] ebuf = np.zeros(max_n + 1)

    for k in range(n_pairs):
        n = src_len[k]
        m = tgt_len[k]
        for i in range(m):
            z = 0.0
            eh = 0.0
            if diagonal and n > 0:
                prior0 = null_prob
                for j in range(1, n + 1):
                    h = -fabs((i + 1.0) / m - (<double>j) / n)
                    e = exp(tension * h)
                    hbuf[j] = h
                    ebuf[j] = e
                    z += e
                    eh += h * e
            elif diagonal:
                prior0 = 1.0
            else:
                prior0 = 1.0 / (n + 1)
            uniform = 1.0 / (n + 1)

            w = prior0 * link_prob[pos]
            post[pos] = w
            total = w
            for j in range(1, n + 1):
                if diagonal:
                    w = (1.0 - null_prob) * ebuf[j] / z * link_prob[pos + j]
                else:
                    w = uniform * link_prob[pos + j]
                post[pos + j] = w
                total += w
            if not (total > 0.0 and total < INFINITY):
                return float("nan"), 0.0, 0.0
            ll += log(total)
            for j in range(n + 1):
                post[pos + j] = post[pos + j] / total
            if diagonal and n > 0:
                mass = 0.0
                for j in range(1, n + 1):
                    emp += post[pos + j] * hbuf[j]
                    mass += post[pos + j]
                mod += mass * (eh / z)
            pos += n + 1
    return ll, emp, mod


def levenshtein(const long[::1] a, const long[::1] b):
    """Unit-cost edit distance between two integer sequences."""
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0], i, j
    cdef long sub, best
    cdef long[::1] prev = np.arange(lb + 1, dtype=np.int_)
    cdef long[::1] cur = np.zeros(lb + 1, dtype=np.int_)
    cdef long[::1] tmp
    for i in range(1, la + 1):
        cur[0] = i
        for j in range(1, lb + 1):
            sub = prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            if sub < best:
                best = sub
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[lb])
