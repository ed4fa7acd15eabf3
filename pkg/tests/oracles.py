"""Independent reference computations used as test oracles.

Nothing here imports the code under test: each oracle recomputes its
quantity the slow, obvious way.
"""

import itertools
import math
from collections import Counter, defaultdict
from fractions import Fraction

NULL = "<null>"


def prior(kind, i, m, n, p0=0.08, tension=4.0):
    """Alignment prior over [NULL, 1..n] for 0-based target position i."""
    if kind == "ibm1":
        return [1.0 / (n + 1)] * (n + 1)
    if n == 0:
        return [1.0]
    w = [math.exp(-tension * abs((i + 1) / m - j / n)) for j in range(1, n + 1)]
    z = sum(w)
    return [p0] + [(1 - p0) * x / z for x in w]


def enumerate_pair(t, src, tgt, kind, p0, tension):
    """Expected link counts and marginal likelihood of one pair by summing
    over all (n + 1) ** m alignments."""
    fs = [NULL] + list(src)
    n, m = len(src), len(tgt)
    priors = [prior(kind, i, m, n, p0, tension) for i in range(m)]
    joint = []
    for a in itertools.product(range(n + 1), repeat=m):
        p = 1.0
        for i, j in enumerate(a):
            p *= priors[i][j] * t.get(fs[j], {}).get(tgt[i], 0.0)
        joint.append((a, p))
    total = sum(p for _, p in joint)
    counts = defaultdict(float)
    for a, p in joint:
        for i, j in enumerate(a):
            counts[(fs[j], tgt[i])] += p / total
    return counts, total


def brute_force_expected_counts(t, corpus, kind="ibm1", p0=0.08, tension=4.0):
    counts = defaultdict(float)
    ll = 0.0
    for src, tgt in corpus:
        c, total = enumerate_pair(t, src, tgt, kind, p0, tension)
        for k, v in c.items():
            counts[k] += v
        ll += math.log(total) if tgt else 0.0
    return dict(counts), ll


def brute_force_em(corpus, iterations, kind="ibm1", p0=0.08, tension=4.0):
    """EM with enumeration E-steps and a fixed tension. Returns (t, loglik of final t)."""
    targets = {e for _, tgt in corpus for e in tgt}
    t = defaultdict(dict)
    for src, tgt in corpus:
        for f in [NULL] + list(src):
            for e in tgt:
                t[f][e] = 1.0 / len(targets)
    for _ in range(iterations):
        counts, _ = brute_force_expected_counts(t, corpus, kind, p0, tension)
        totals = defaultdict(float)
        for (f, e), c in counts.items():
            totals[f] += c
        new = defaultdict(dict)
        for f, row in t.items():
            for e in row:
                c = counts.get((f, e), 0.0)
                new[f][e] = c / totals[f] if totals[f] > 0 else 1.0 / len(row)
        t = new
    _, ll = brute_force_expected_counts(t, corpus, kind, p0, tension)
    return t, ll


def expected_complete_loglik(t, corpus, p0, tension_post, tension_eval):
    """Q(tension_eval) with posteriors frozen at tension_post (diagonal model)."""
    q = 0.0
    for src, tgt in corpus:
        fs = [NULL] + list(src)
        n, m = len(src), len(tgt)
        for i, e in enumerate(tgt):
            pr = prior("diagonal", i, m, n, p0, tension_post)
            w = [pr[j] * t.get(fs[j], {}).get(e, 0.0) for j in range(n + 1)]
            z = sum(w)
            pe = prior("diagonal", i, m, n, p0, tension_eval)
            q += sum(wj / z * math.log(pe[j]) for j, wj in enumerate(w) if wj > 0)
    return q


# --- BLEU ----------------------------------------------------------------

def _ngrams(toks, n):
    return Counter(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))


def bleu_fractions(hyps, refs):
    """Exact corpus precisions as Fractions plus (c, r)."""
    matches = [0] * 4
    totals = [0] * 4
    c = r = 0
    for h, ref in zip(hyps, refs):
        for n in range(1, 5):
            hn, rn = _ngrams(h, n), _ngrams(ref, n)
            matches[n - 1] += sum(min(v, rn[g]) for g, v in hn.items())
            totals[n - 1] += max(len(h) - n + 1, 0)
        c += len(h)
        r += len(ref)
    precisions = [Fraction(mm, tt) if tt else Fraction(0) for mm, tt in zip(matches, totals)]
    return precisions, c, r


def sentence_bleu_oracle(hyp, ref):
    """Add-one smoothing on orders 2-4, floats composed in the usual order."""
    if not hyp:
        return 0.0
    logs = 0.0
    for n in range(1, 5):
        hn, rn = _ngrams(hyp, n), _ngrams(ref, n)
        m = sum(min(v, rn[g]) for g, v in hn.items())
        t = max(len(hyp) - n + 1, 0)
        p = m / t if n == 1 else (m + 1) / (t + 1)
        if p <= 0.0:
            return 0.0
        logs += math.log(p)
    c, r = len(hyp), len(ref)
    bp = 1.0 if c >= r else math.exp(1.0 - r / c)
    return bp * math.exp(logs / 4)


def strip_bpe(text, marker="@@"):
    return text.replace(marker + " ", "").removesuffix(marker).split()


# --- BPE -----------------------------------------------------------------

SENT = object()


def naive_bpe(words_with_counts, num_merges, min_frequency=2):
    """Recount every pair from scratch before each merge.

    Ties: lexicographic on (left, right) with the end-of-word sentinel
    ordered after every ordinary symbol.
    """
    state = {w: [*w, SENT] for w in words_with_counts}

    def key(sym):
        # symbols are strings or tuples ending in SENT
        if sym is SENT:
            return (1, "")
        if isinstance(sym, tuple):
            return (0, sym[0] + "\U0010ffff")
        return (0, sym)

    merges = []
    for _ in range(num_merges):
        stats = Counter()
        for w, syms in state.items():
            for p in zip(syms, syms[1:]):
                stats[p] += words_with_counts[w]
        stats = {p: c for p, c in stats.items() if p not in merges}
        if not stats:
            break
        best = min(stats, key=lambda p: (-stats[p], key(p[0]), key(p[1])))
        if stats[best] < min_frequency:
            break
        merges.append(best)
        a, b = best
        for w, syms in state.items():
            out, i = [], 0
            while i < len(syms):
                if i + 1 < len(syms) and syms[i] == a and syms[i + 1] == b:
                    out.append(_join(a, b))
                    i += 2
                else:
                    out.append(syms[i])
                    i += 1
            state[w] = out
    return [(_render(a), _render(b)) for a, b in merges], state


def _join(a, b):
    if b is SENT:
        return (a,)
    if isinstance(b, tuple):
        return (a + b[0],)
    return a + b


def naive_segments(state_syms):
    """Final symbols of one word with the sentinel removed."""
    out = []
    for s in state_syms:
        if s is SENT:
            continue
        out.append(s[0] if isinstance(s, tuple) else s)
    return tuple(out)


def _render(sym):
    if sym is SENT:
        return "</w>"
    if isinstance(sym, tuple):
        return sym[0] + "</w>"
    return sym


# --- METEOR --------------------------------------------------------------

def meteor_brute(hyp, ref):
    """(matches, min chunks) over every maximum exact matching."""
    best_m, best_ch = 0, 0
    n = len(ref)
    # assign each hyp position a ref position or None, injectively, same word
    choices = [[None] + [j for j in range(n) if ref[j] == w] for w in hyp]
    for assign in itertools.product(*choices):
        used = [j for j in assign if j is not None]
        if len(used) != len(set(used)):
            continue
        m = len(used)
        ch = 0
        prev = None
        for j in assign:
            if j is None:
                prev = None
                continue
            if prev is None or j != prev + 1:
                ch += 1
            prev = j
        if m > best_m or (m == best_m and ch < best_ch):
            best_m, best_ch = m, ch
    return best_m, best_ch


# --- chrF ----------------------------------------------------------------

def chrf_brute(hyp, ref, order=6, beta=2.0):
    ps, rs = [], []
    for n in range(1, order + 1):
        hg = [w[i:i + n] for w in hyp for i in range(len(w) - n + 1)]
        rg = [w[i:i + n] for w in ref for i in range(len(w) - n + 1)]
        if not rg:
            continue
        pool = list(rg)
        match = 0
        for g in hg:
            if g in pool:
                pool.remove(g)
                match += 1
        ps.append(match / len(hg) if hg else 0.0)
        rs.append(match / len(rg))
    if not ps:
        return None
    p, r = sum(ps) / len(ps), sum(rs) / len(rs)
    if p + r == 0:
        return 0.0
    return (1 + beta ** 2) * p * r / (beta ** 2 * p + r)


# --- edit distance -------------------------------------------------------

def edit_distance_recursive(a, b):
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))
