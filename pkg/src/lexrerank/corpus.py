"""Parallel corpora, vocabularies and domain-distance statistics."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputFormatError, LengthMismatchError

# A sentence is an immutable sequence of whitespace-free tokens.
Sentence = tuple[str, ...]


def sentence(text: str) -> Sentence:
    return tuple(text.split())


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: tuple[tuple[Sentence, Sentence], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((tuple(s), tuple(t)) for s, t in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def sources(self) -> list[Sentence]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> list[Sentence]:
        return [t for _, t in self.pairs]

    def swapped(self) -> "ParallelCorpus":
        return ParallelCorpus(tuple((t, s) for s, t in self.pairs))

    @classmethod
    def from_strings(cls, pairs: Iterable[tuple[str, str]]) -> "ParallelCorpus":
        return cls(tuple((sentence(s), sentence(t)) for s, t in pairs))


@dataclass(frozen=True)
class Vocabulary:
    entries: dict[str, int] = field(default_factory=dict)
    min_count: int = 1

    def __len__(self):
        return len(self.entries)

    def __contains__(self, token):
        return token in self.entries

    def __iter__(self):
        return iter(self.entries)

    def most_common(self, n: int) -> list[str]:
        """The ``n`` most frequent tokens, ties broken lexicographically."""
        ranked = sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))
        return [tok for tok, _ in ranked[:n]]


@dataclass(frozen=True)
class DomainStats:
    num_sentences: int
    avg_len_before: float
    avg_len_after: float
    vocab_size: int
    overlap_with_reference: int
    inflation_ratio: float


def read_lines(path) -> list[str]:
    """Read a UTF-8 text file as a list of lines without their terminators.

    Decoding errors are reported with the 1-based line number.
    """
    path = Path(path)
    data = path.read_bytes()
    raw = data.split(b"\n")
    if raw and raw[-1] == b"":
        raw.pop()
    lines = []
    for number, chunk in enumerate(raw, start=1):
        if chunk.endswith(b"\r"):
            chunk = chunk[:-1]
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise InputFormatError(f"invalid UTF-8 ({exc.reason})", path=path, line=number) from None
    return lines


def read_sentences(path) -> list[Sentence]:
    return [sentence(line) for line in read_lines(path)]


def load_parallel(source_path, target_path) -> ParallelCorpus:
    src = read_sentences(source_path)
    tgt = read_sentences(target_path)
    if len(src) != len(tgt):
        raise LengthMismatchError(len(src), len(tgt), source_path, target_path)
    return ParallelCorpus(tuple(zip(src, tgt)))


def build_vocab(sentences: Iterable[Sequence[str]], min_count: int = 1) -> Vocabulary:
    """Count tokens and keep those seen at least ``min_count`` times.

    The corpus tables use "more than 20 occurrences", i.e. ``min_count=21``.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts = Counter()
    for s in sentences:
        counts.update(s)
    kept = {tok: c for tok, c in sorted(counts.items()) if c >= min_count}
    return Vocabulary(kept, min_count)


def vocab_overlap(a: Vocabulary, b: Vocabulary) -> int:
    return len(a.entries.keys() & b.entries.keys())


def sample_sentences(sentences: Sequence, fraction: float, seed: int = 1) -> list:
    """Seeded down-sampling that preserves corpus order."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"sample fraction must be in (0, 1], got {fraction}")
    k = max(1, round(len(sentences) * fraction)) if sentences else 0
    keep = sorted(random.Random(seed).sample(range(len(sentences)), k))
    return [sentences[i] for i in keep]


def domain_stats(corpus_side: Sequence[Sentence], bpe, reference_vocab: Vocabulary,
                 min_count: int = 21) -> DomainStats:
    """Length, vocabulary and overlap statistics for one side of a corpus.

    Vocabulary and overlap are computed on the original tokens; the
    post-segmentation length uses ``bpe``.
    """
    from .bpe import apply_bpe

    if not corpus_side:
        raise ValueError("domain_stats needs at least one sentence")
    n = len(corpus_side)
    before = sum(len(s) for s in corpus_side)
    after = sum(len(apply_bpe(bpe, s)) for s in corpus_side)
    vocab = build_vocab(corpus_side, min_count)
    return DomainStats(
        num_sentences=n,
        avg_len_before=before / n,
        avg_len_after=after / n,
        vocab_size=len(vocab),
        overlap_with_reference=vocab_overlap(vocab, reference_vocab),
        inflation_ratio=after / before if before else 1.0,
    )


def format_stats_table(rows: dict[str, DomainStats], min_count: int = 21) -> str:
    """Tab-separated table with one column per domain."""
    names = list(rows)
    lines = ["\t".join(["Domain", *names])]

    def row(label, fmt, attr):
        lines.append("\t".join([label, *(fmt.format(getattr(rows[d], attr)) for d in names)]))

    row("Number of sentences", "{}", "num_sentences")
    row("Avg. original sentence length", "{:.4f}", "avg_len_before")
    row("Avg. BPE sentence length", "{:.4f}", "avg_len_after")
    row("Inflation ratio", "{:.4f}", "inflation_ratio")
    row(f"Vocab size (count >= {min_count})", "{}", "vocab_size")
    row("Vocab overlap with reference", "{}", "overlap_with_reference")
    return "\n".join(lines) + "\n"
