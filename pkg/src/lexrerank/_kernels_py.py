"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np


def estep(src_len, tgt_len, link_prob, null_prob, tension, diagonal, post):
    src_len = np.asarray(src_len).tolist()
    tgt_len = np.asarray(tgt_len).tolist()
    lp = np.asarray(link_prob).tolist()
    out = [0.0] * len(lp)
    ll = emp = mod = 0.0
    pos = 0
    for n, m in zip(src_len, tgt_len):
        hbuf = [0.0] * (n + 1)
        ebuf = [0.0] * (n + 1)
        for i in range(m):
            z = 0.0
            eh = 0.0
            if diagonal and n > 0:
                prior0 = null_prob
                for j in range(1, n + 1):
                    h = -abs((i + 1.0) / m - float(j) / n)
                    e = math.exp(tension * h)
                    hbuf[j] = h
                    ebuf[j] = e
                    z += e
                    eh += h * e
            elif diagonal:
                prior0 = 1.0
            else:
                prior0 = 1.0 / (n + 1)
            uniform = 1.0 / (n + 1)

            w = prior0 * lp[pos]
            out[pos] = w
            total = w
            for j in range(1, n + 1):
                if diagonal:
                    w = (1.0 - null_prob) * ebuf[j] / z * lp[pos + j]
                else:
                    w = uniform * lp[pos + j]
                out[pos + j] = w
                total += w
            if not (0.0 < total < math.inf):
                return math.nan, 0.0, 0.0
            ll += math.log(total)
            for j in range(n + 1):
                out[pos + j] = out[pos + j] / total
            if diagonal and n > 0:
                mass = 0.0
                for j in range(1, n + 1):
                    emp += out[pos + j] * hbuf[j]
                    mass += out[pos + j]
                mod += mass * (eh / z)
            pos += n + 1
    post[:] = out
    return ll, emp, mod


def levenshtein(a, b):
    a = list(a)
    b = list(b)
    prev = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        cur = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            sub = prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, sub)
        prev = cur
    return prev[len(b)]
