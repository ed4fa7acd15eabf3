"""BLEU with its precision/brevity breakdown, sentence BLEU, chrF, TER and METEOR.

All functions take tokenized sentences (sequences of strings) and return
scores on a 0..1 scale.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels

MAX_ORDER = 4
METRIC_NAMES = ("sent_bleu", "chrf", "ter_basic", "meteor_lite")
CLI_METRIC_NAMES = {"sentbleu": "sent_bleu", "chrf": "chrf", "ter": "ter_basic", "meteor": "meteor_lite"}

# exact-search budget for METEOR chunk minimization
MATCH_STATE_BUDGET = 200_000


@dataclass(frozen=True)
class MetricKind:
    name: str = "sent_bleu"
    chrf_order: int = 6
    chrf_beta: float = 2.0
    meteor_alpha: float = 0.9
    meteor_beta: float = 3.0
    meteor_gamma: float = 0.5

    def __post_init__(self):
        name = CLI_METRIC_NAMES.get(self.name, self.name)
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {self.name!r}; choose from {METRIC_NAMES}")
        object.__setattr__(self, "name", name)
        if self.chrf_order < 1:
            raise ValueError("chrf_order must be >= 1")
        if self.chrf_beta <= 0:
            raise ValueError("chrf_beta must be > 0")
        if not 0.0 < self.meteor_alpha < 1.0:
            raise ValueError("meteor_alpha must be in (0, 1)")
        if self.meteor_beta <= 0 or not 0.0 <= self.meteor_gamma <= 1.0:
            raise ValueError("meteor_beta must be > 0 and meteor_gamma in [0, 1]")


@dataclass(frozen=True)
class BleuBreakdown:
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    bleu: float
    matches: tuple[int, ...] = field(default=(), compare=False)
    totals: tuple[int, ...] = field(default=(), compare=False)
    # empty hypothesis side: BP and BLEU are set to 0 by convention
    degenerate: bool = False


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _match_stats(hyp, ref, max_order=MAX_ORDER):
    matches, totals = [], []
    for n in range(1, max_order + 1):
        h = ngram_counts(hyp, n)
        r = ngram_counts(ref, n)
        matches.append(sum(min(c, r[g]) for g, c in h.items()))
        totals.append(max(len(hyp) - n + 1, 0))
    return matches, totals


def brevity_penalty(hyp_length: int, ref_length: int) -> float:
    if hyp_length == 0:
        return 0.0
    if hyp_length >= ref_length:
        return 1.0
    return math.exp(1.0 - ref_length / hyp_length)


def compose_bleu(precisions: Sequence[float], bp: float) -> float:
    """BP * exp(mean log p_n); zero as soon as any precision is zero."""
    if any(p <= 0.0 for p in precisions):
        return 0.0
    return bp * math.exp(sum(math.log(p) for p in precisions) / len(precisions))


def corpus_bleu(hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]]) -> BleuBreakdown:
    """Unsmoothed corpus BLEU-4 from clipped n-gram counts summed over sentences."""
    if len(hypotheses) != len(references):
        raise ValueError(f"length mismatch {len(hypotheses)} vs {len(references)}")
    if not hypotheses:
        raise ValueError("corpus_bleu needs at least one sentence")
    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    c = r = 0
    for hyp, ref in zip(hypotheses, references):
        m, t = _match_stats(hyp, ref)
        matches = [a + b for a, b in zip(matches, m)]
        totals = [a + b for a, b in zip(totals, t)]
        c += len(hyp)
        r += len(ref)
    precisions = tuple(m / t if t else 0.0 for m, t in zip(matches, totals))
    bp = brevity_penalty(c, r)
    return BleuBreakdown(precisions, bp, c, r, compose_bleu(precisions, bp),
                         tuple(matches), tuple(totals), degenerate=(c == 0))


def sentence_bleu(hyp: Sequence[str], ref: Sequence[str]) -> float:
    """BLEU-4 with add-one smoothing on orders 2-4; unigrams unsmoothed."""
    if not hyp:
        return 0.0
    m, t = _match_stats(hyp, ref)
    precisions = [m[0] / t[0]] + [(m[n] + 1) / (t[n] + 1) for n in range(1, MAX_ORDER)]
    return compose_bleu(precisions, brevity_penalty(len(hyp), len(ref)))


def char_ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    """Character n-grams taken inside each word, never across a space."""
    out = Counter()
    for w in tokens:
        for i in range(len(w) - n + 1):
            out[w[i:i + n]] += 1
    return out


def chrf(hyp: Sequence[str], ref: Sequence[str], order: int = 6, beta: float = 2.0) -> float:
    """Character n-gram F-beta; precision and recall are averaged over the
    orders for which the reference has any n-grams."""
    p_sum = r_sum = 0.0
    effective = 0
    for n in range(1, order + 1):
        r = char_ngram_counts(ref, n)
        r_total = sum(r.values())
        if r_total == 0:
            continue
        h = char_ngram_counts(hyp, n)
        h_total = sum(h.values())
        match = sum(min(c, r[g]) for g, c in h.items())
        p_sum += match / h_total if h_total else 0.0
        r_sum += match / r_total
        effective += 1
    if effective == 0:
        return 1.0 if not any(hyp) else 0.0
    p, r = p_sum / effective, r_sum / effective
    if p + r == 0.0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


def ter_basic(hyp: Sequence[str], ref: Sequence[str]) -> float:
    """Word edit distance (no shifts) divided by reference length."""
    if not ref:
        raise ValueError("ter_basic needs a non-empty reference")
    return kernels.levenshtein(hyp, ref) / len(ref)


@dataclass(frozen=True)
class MeteorStats:
    matches: int
    chunks: int
    hyp_length: int
    ref_length: int


def _max_matches(hyp, ref) -> int:
    rc = Counter(ref)
    return sum(min(c, rc[w]) for w, c in Counter(hyp).items())


def meteor_alignment(hyp: Sequence[str], ref: Sequence[str]) -> MeteorStats:
    """Exact-match unigram alignment with the most matches and, among those,
    the fewest chunks.

    Searched exhaustively with memoization; inputs with so many repeated
    words that the search exceeds its budget fall back to a greedy
    left-to-right matching that keeps the match count maximal.
    """
    hyp, ref = list(hyp), list(ref)
    target = _max_matches(hyp, ref)
    if target == 0:
        return MeteorStats(0, 0, len(hyp), len(ref))
    best = _min_chunks_exact(hyp, ref, target)
    if best is None:
        best = _min_chunks_greedy(hyp, ref)
    return MeteorStats(target, best, len(hyp), len(ref))


def _min_chunks_exact(hyp, ref, target):
    positions = {}
    for j, w in enumerate(ref):
        positions.setdefault(w, []).append(j)
    need = Counter()
    rc = Counter(ref)
    hc = Counter(hyp)
    for w in hc:
        need[w] = min(hc[w], rc[w])
    # hyp occurrences of each word still ahead of position i (inclusive)
    ahead = [None] * (len(hyp) + 1)
    run = Counter()
    ahead[len(hyp)] = Counter()
    for i in range(len(hyp) - 1, -1, -1):
        run[hyp[i]] += 1
        ahead[i] = run[hyp[i]]
    memo = {}

    def used_of(mask, w):
        return sum(1 for j in positions.get(w, ()) if mask >> j & 1)

    def solve(i, prev, mask):
        # max continuations achievable from hyp position i onward
        if i == len(hyp):
            return 0
        key = (i, prev, mask)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) > MATCH_STATE_BUDGET:
            raise _BudgetExceeded
        w = hyp[i]
        still = need[w] - used_of(mask, w)
        best = -1
        if still > 0:
            for j in positions[w]:
                if not mask >> j & 1:
                    sub = solve(i + 1, j, mask | (1 << j))
                    if sub >= 0:
                        best = max(best, sub + (1 if prev >= 0 and j == prev + 1 else 0))
        # skipping is allowed only while the remaining occurrences can still
        # supply every match this word owes
        if still < ahead[i]:
            sub = solve(i + 1, -1, mask)
            best = max(best, sub)
        memo[key] = best
        return best

    try:
        cont = solve(0, -1, 0)
    except (_BudgetExceeded, RecursionError):
        return None
    return target - cont


class _BudgetExceeded(Exception):
    pass


def _min_chunks_greedy(hyp, ref):
    free = {}
    for j, w in enumerate(ref):
        free.setdefault(w, []).append(j)
    prev = -2
    chunks = 0
    for w in hyp:
        cands = free.get(w)
        if not cands:
            prev = -2
            continue
        j = prev + 1 if prev + 1 in cands else cands[0]
        cands.remove(j)
        if j != prev + 1:
            chunks += 1
        prev = j
    return chunks


def meteor_from_stats(stats: MeteorStats, alpha=0.9, beta=3.0, gamma=0.5) -> float:
    if stats.matches == 0:
        return 0.0
    p = stats.matches / stats.hyp_length
    r = stats.matches / stats.ref_length
    fmean = p * r / (alpha * p + (1 - alpha) * r)
    penalty = gamma * (stats.chunks / stats.matches) ** beta
    return fmean * (1 - penalty)


def meteor_lite(hyp: Sequence[str], ref: Sequence[str], alpha=0.9, beta=3.0, gamma=0.5) -> float:
    """METEOR restricted to exact matches (no stemming, synonyms or paraphrases)."""
    return meteor_from_stats(meteor_alignment(hyp, ref), alpha, beta, gamma)


def corpus_meteor_lite(hypotheses, references, alpha=0.9, beta=3.0, gamma=0.5) -> float:
    """System-level METEOR: matches, chunks and lengths summed before scoring."""
    if len(hypotheses) != len(references):
        raise ValueError(f"length mismatch {len(hypotheses)} vs {len(references)}")
    m = ch = hl = rl = 0
    for hyp, ref in zip(hypotheses, references):
        s = meteor_alignment(hyp, ref)
        m, ch, hl, rl = m + s.matches, ch + s.chunks, hl + s.hyp_length, rl + s.ref_length
    return meteor_from_stats(MeteorStats(m, ch, hl, rl), alpha, beta, gamma)


def similarity(kind: MetricKind, hyp: Sequence[str], ref: Sequence[str]) -> float:
    """Metric value oriented so that larger means more similar."""
    if kind.name == "sent_bleu":
        return sentence_bleu(hyp, ref)
    if kind.name == "chrf":
        return chrf(hyp, ref, kind.chrf_order, kind.chrf_beta)
    if kind.name == "ter_basic":
        if not ref:
            return 1.0 if not hyp else 0.0
        return max(0.0, 1.0 - ter_basic(hyp, ref))
    return meteor_lite(hyp, ref, kind.meteor_alpha, kind.meteor_beta, kind.meteor_gamma)
