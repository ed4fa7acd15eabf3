"""EM training of IBM Model 1 and the diagonal-prior (fast_align style) model.

The diagonal prior for target position i (1-based, of m) and source
position j (1-based, of n) is

    delta(NULL) = p0
    delta(j)    = (1 - p0) * exp(tension * h(i, j)) / Z_i,   h = -|i/m - j/n|

with Z_i summed exactly over j = 1..n. IBM Model 1 uses the uniform
prior 1 / (n + 1) over {NULL, 1..n}.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .corpus import ParallelCorpus
from .errors import InputFormatError, ToolkitError, UnseenTokenError

NULL = "<null>"
FLOOR_PROB = 1e-20
MODEL_TYPES = ("ibm1", "diagonal")
TENSION_MIN = 0.1
TENSION_MAX = 20.0


@dataclass(frozen=True)
class TranslationTable:
    """Conditional distributions t(target | source), including the null source."""

    probs: Mapping[str, Mapping[str, float]]

    def prob(self, source: str, target: str, default: float = 0.0) -> float:
        row = self.probs.get(source)
        if row is None:
            return default
        return row.get(target, default)

    def sources(self) -> list[str]:
        return list(self.probs)

    def targets(self) -> set[str]:
        out = set()
        for row in self.probs.values():
            out.update(row)
        return out

    def max_normalization_error(self) -> float:
        return max((abs(sum(row.values()) - 1.0) for row in self.probs.values()), default=0.0)

    def transpose(self) -> "TranslationTable":
        """Re-index by target: ``out.prob(e, f) == self.prob(f, e)``. Drops the null row."""
        out = defaultdict(dict)
        for f, row in self.probs.items():
            if f == NULL:
                continue
            for e, p in row.items():
                out[e][f] = p
        return TranslationTable({e: dict(sorted(r.items())) for e, r in sorted(out.items())})


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 5
    model: str = "diagonal"
    null_prob: float = 0.08
    tension_init: float = 4.0
    learn_tension: bool = True
    tension_step: float = 0.1
    smoothing_alpha: float = 0.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.model not in MODEL_TYPES:
            raise ValueError(f"model must be one of {MODEL_TYPES}, got {self.model!r}")
        if not 0.0 <= self.null_prob < 1.0:
            raise ValueError(f"null_prob must be in [0, 1), got {self.null_prob}")
        if not self.tension_init > 0:
            raise ValueError(f"tension_init must be > 0, got {self.tension_init}")
        if self.tension_step < 0:
            raise ValueError(f"tension_step must be >= 0, got {self.tension_step}")
        if self.smoothing_alpha < 0:
            raise ValueError(f"smoothing_alpha must be >= 0, got {self.smoothing_alpha}")


@dataclass(frozen=True)
class AlignmentModel:
    ttable: TranslationTable
    model: str = "diagonal"
    tension: float = 4.0
    null_prob: float = 0.08
    iterations_run: int = 0

    def __post_init__(self):
        if self.model not in MODEL_TYPES:
            raise ValueError(f"unknown model type {self.model!r}")
        if not self.tension > 0:
            raise ValueError(f"tension must be > 0, got {self.tension}")
        if not 0.0 <= self.null_prob < 1.0:
            raise ValueError(f"null_prob must be in [0, 1), got {self.null_prob}")

    @property
    def diagonal(self) -> bool:
        return self.model == "diagonal"

    def with_tension(self, tension: float) -> "AlignmentModel":
        return replace(self, tension=tension)


@dataclass(frozen=True)
class SentenceAlignment:
    links: tuple[tuple[int, int | None], ...]

    def pharaoh(self) -> str:
        """``i-j`` pairs (target-source, 0-based), null links omitted."""
        return " ".join(f"{i}-{j}" for i, j in self.links if j is not None)


@dataclass
class _Encoding:
    src_len: np.ndarray
    tgt_len: np.ndarray
    link_slot: np.ndarray
    slot_src: np.ndarray
    slot_tgt: np.ndarray
    sources: list[str]
    targets: list[str]


def _check_nonempty(corpus: ParallelCorpus):
    if len(corpus) == 0:
        raise ValueError("corpus must contain at least one sentence pair")


def _encode_training(corpus: ParallelCorpus) -> _Encoding:
    # Slots are numbered by first occurrence so training never depends on
    # how tokens are spelled.
    src_ids = {NULL: 0}
    tgt_ids = {}
    slots = {}
    slot_src = []
    slot_tgt = []
    link_slot = []
    for src, tgt in corpus:
        fs = [0] + [src_ids.setdefault(f, len(src_ids)) for f in src]
        for e in tgt:
            ei = tgt_ids.setdefault(e, len(tgt_ids))
            for fi in fs:
                key = (fi, ei)
                s = slots.get(key)
                if s is None:
                    s = slots[key] = len(slot_src)
                    slot_src.append(fi)
                    slot_tgt.append(ei)
                link_slot.append(s)
    return _Encoding(
        src_len=np.array([len(s) for s, _ in corpus], dtype=np.intc),
        tgt_len=np.array([len(t) for _, t in corpus], dtype=np.intc),
        link_slot=np.array(link_slot, dtype=np.int64),
        slot_src=np.array(slot_src, dtype=np.int64),
        slot_tgt=np.array(slot_tgt, dtype=np.int64),
        sources=list(src_ids),
        targets=list(tgt_ids),
    )


def _table_from_slots(enc: _Encoding, prob: np.ndarray) -> TranslationTable:
    rows = defaultdict(dict)
    for s, p in enumerate(prob.tolist()):
        rows[enc.sources[enc.slot_src[s]]][enc.targets[enc.slot_tgt[s]]] = p
    return TranslationTable({f: dict(sorted(rows[f].items())) for f in sorted(rows)})


def _m_step(enc: _Encoding, posteriors: np.ndarray, alpha: float) -> np.ndarray:
    n_slots = len(enc.slot_src)
    counts = np.bincount(enc.link_slot, weights=posteriors, minlength=n_slots) + alpha
    n_src = len(enc.sources)
    totals = np.bincount(enc.slot_src, weights=counts, minlength=n_src)
    slots_per_src = np.bincount(enc.slot_src, minlength=n_src)
    denom = totals[enc.slot_src]
    # A source with no expected mass (e.g. the null word when p0 = 0)
    # keeps a uniform row so the table stays normalized.
    empty = denom <= 0.0
    prob = np.where(empty, 0.0, counts / np.where(empty, 1.0, denom))
    prob[empty] = 1.0 / slots_per_src[enc.slot_src[empty]]
    return prob


def em_trajectory(corpus: ParallelCorpus, cfg: TrainConfig) -> Iterator[AlignmentModel]:
    """Yield the model after each EM iteration."""
    for model in _run_em(corpus, cfg, every=True):
        yield model


def train(corpus: ParallelCorpus, cfg: TrainConfig | None = None) -> AlignmentModel:
    cfg = cfg or TrainConfig()
    return next(_run_em(corpus, cfg, every=False))


def _run_em(corpus, cfg, every):
    _check_nonempty(corpus)
    enc = _encode_training(corpus)
    diagonal = cfg.model == "diagonal"
    n_target_tokens = int(enc.tgt_len.sum())
    prob = np.full(len(enc.slot_src), 1.0 / max(len(enc.targets), 1))
    tension = cfg.tension_init
    for it in range(1, cfg.iterations + 1):
        post, ll, emp, mod = kernels.estep(
            enc.src_len, enc.tgt_len, prob[enc.link_slot], cfg.null_prob, tension, diagonal)
        if not math.isfinite(ll):
            raise ToolkitError(f"non-finite log-likelihood in EM iteration {it}")
        prob = _m_step(enc, post, cfg.smoothing_alpha)
        if diagonal and cfg.learn_tension and n_target_tokens:
            # step on the per-token objective so the step size is corpus-size free
            tension += cfg.tension_step * (emp - mod) / n_target_tokens
            tension = min(max(tension, TENSION_MIN), TENSION_MAX)
        if every or it == cfg.iterations:
            yield AlignmentModel(_table_from_slots(enc, prob), cfg.model, tension,
                                 cfg.null_prob, it)


def _encode_against(model: AlignmentModel, corpus: ParallelCorpus, unseen: str):
    if unseen not in ("floor", "error"):
        raise ValueError(f"unseen must be 'floor' or 'error', got {unseen!r}")
    table = model.ttable.probs
    known_targets = model.ttable.targets() if unseen == "error" else None
    probs = []
    keys = []
    for k, (src, tgt) in enumerate(corpus):
        fs = (NULL, *src)
        if unseen == "error":
            for f in src:
                if f not in table:
                    raise UnseenTokenError(f"pair {k}: source token {f!r} not in model")
            for e in tgt:
                if e not in known_targets:
                    raise UnseenTokenError(f"pair {k}: target token {e!r} not in model")
        for e in tgt:
            for f in fs:
                row = table.get(f)
                p = row.get(e) if row is not None else None
                if p is None:
                    p = FLOOR_PROB if unseen == "floor" else 0.0
                probs.append(p)
                keys.append((f, e))
    src_len = np.array([len(s) for s, _ in corpus], dtype=np.intc)
    tgt_len = np.array([len(t) for _, t in corpus], dtype=np.intc)
    return src_len, tgt_len, np.array(probs, dtype=np.float64), keys


def _estep_against(model, corpus, unseen):
    src_len, tgt_len, link_prob, keys = _encode_against(model, corpus, unseen)
    post, ll, emp, mod = kernels.estep(src_len, tgt_len, link_prob, model.null_prob,
                                       model.tension, model.diagonal)
    if not math.isfinite(ll):
        raise ToolkitError("non-finite log-likelihood (zero-probability target token)")
    return post, ll, emp, mod, keys


def log_likelihood(model: AlignmentModel, corpus: ParallelCorpus, unseen: str = "floor") -> float:
    """Sum over target tokens of log sum_j delta(j) t(e_i | f_j).

    ``unseen="floor"`` scores missing table entries with 1e-20;
    ``unseen="error"`` raises on tokens the model has never seen.
    """
    return _estep_against(model, corpus, unseen)[1]


def expected_counts(model: AlignmentModel, corpus: ParallelCorpus,
                    unseen: str = "floor") -> dict[tuple[str, str], float]:
    """E-step expected link counts keyed by (source, target)."""
    post, _, _, _, keys = _estep_against(model, corpus, unseen)
    counts = defaultdict(float)
    for key, p in zip(keys, post.tolist()):
        counts[key] += p
    return dict(counts)


def tension_gradient(model: AlignmentModel, corpus: ParallelCorpus, unseen: str = "floor") -> float:
    """d/d(tension) of the expected complete-data log-likelihood.

    Posteriors are taken at the model's current parameters, so this is also
    the derivative of :func:`log_likelihood` with respect to the tension.
    """
    if not model.diagonal:
        raise ValueError("tension_gradient requires a diagonal model")
    _, _, emp, mod, _ = _estep_against(model, corpus, unseen)
    return emp - mod


def alignment_prior(model: AlignmentModel, i: int, m: int, n: int) -> list[float]:
    """Prior over [NULL, 1..n] for 0-based target position ``i`` of ``m``."""
    if not model.diagonal:
        return [1.0 / (n + 1)] * (n + 1)
    if n == 0:
        return [1.0]
    es = [math.exp(model.tension * -abs((i + 1.0) / m - float(j) / n)) for j in range(1, n + 1)]
    z = sum(es)
    return [model.null_prob] + [(1.0 - model.null_prob) * e / z for e in es]


def viterbi_align(model: AlignmentModel, source: Sequence[str], target: Sequence[str],
                  unseen: str = "floor") -> SentenceAlignment:
    """Best source position per target token; smaller j wins ties, NULL loses them."""
    if not source or not target:
        raise ValueError("viterbi_align needs non-empty source and target")
    table = model.ttable.probs
    if unseen == "error":
        known = model.ttable.targets()
        for tok in source:
            if tok not in table:
                raise UnseenTokenError(f"source token {tok!r} not in model")
        for tok in target:
            if tok not in known:
                raise UnseenTokenError(f"target token {tok!r} not in model")
    missing = FLOOR_PROB if unseen == "floor" else 0.0
    n, m = len(source), len(target)
    links = []
    for i, e in enumerate(target):
        prior = alignment_prior(model, i, m, n)
        best_j, best_w = None, -1.0
        for j in range(1, n + 1):
            w = prior[j] * model.ttable.prob(source[j - 1], e, missing)
            if w > best_w:
                best_j, best_w = j - 1, w
        if prior[0] * model.ttable.prob(NULL, e, missing) > best_w:
            best_j = None
        links.append((i, best_j))
    return SentenceAlignment(tuple(links))


def write_model(model: AlignmentModel, path) -> None:
    lines = [f"#model={model.model} tension={model.tension:.17g} "
             f"null_prob={model.null_prob:.17g} iterations={model.iterations_run}"]
    for f in sorted(model.ttable.probs):
        row = model.ttable.probs[f]
        for e in sorted(row):
            lines.append(f"{f} {e} {row[e]:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_model(path) -> AlignmentModel:
    from .corpus import read_lines

    lines = read_lines(path)
    if not lines or not lines[0].startswith("#model="):
        raise InputFormatError("missing '#model=' header", path=path, line=1)
    try:
        header = dict(kv.split("=", 1) for kv in lines[0][1:].split())
        kind = header["model"]
        tension = float(header["tension"])
        null_prob = float(header["null_prob"])
        iterations = int(header["iterations"])
    except (KeyError, ValueError) as exc:
        raise InputFormatError(f"bad header ({exc})", path=path, line=1) from None
    rows = defaultdict(dict)
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise InputFormatError("expected 'source target probability'", path=path, line=number)
        try:
            rows[parts[0]][parts[1]] = float(parts[2])
        except ValueError:
            raise InputFormatError(f"bad probability {parts[2]!r}", path=path, line=number) from None
    return AlignmentModel(TranslationTable(dict(rows)), kind, tension, null_prob, iterations)

