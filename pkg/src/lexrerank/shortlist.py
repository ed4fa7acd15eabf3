"""Per-token lexical shortlists and the output-vocabulary coverage they allow."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .align import NULL, TranslationTable
from .corpus import ParallelCorpus, Vocabulary
from .errors import InputFormatError

RESERVED_MARKERS = ("</s>", "<unk>")


@dataclass(frozen=True)
class Shortlist:
    per_source: Mapping[str, tuple[tuple[str, float], ...]]
    k: int
    always_include: tuple[str, ...] = ()
    frequent_f: int = 0


@dataclass(frozen=True)
class CoverageReport:
    reachable_tokens: int
    total_tokens: int
    coverage: float
    per_sentence: tuple[float, ...]


def rank_candidates(row: Mapping[str, float]) -> list[tuple[str, float]]:
    """Probability descending, ties by target token."""
    return sorted(((e, p) for e, p in row.items() if p > 0.0), key=lambda ep: (-ep[1], ep[0]))


def build_shortlist(ttable: TranslationTable, k: int = 10, frequent_f: int = 0,
                    target_counts: Vocabulary | None = None,
                    reserved: Sequence[str] = RESERVED_MARKERS) -> Shortlist:
    """Top-``k`` targets per source token plus an always-allowed set.

    The always-allowed set is ``reserved`` followed by the ``frequent_f``
    most frequent tokens of ``target_counts``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if frequent_f < 0:
        raise ValueError(f"frequent_f must be >= 0, got {frequent_f}")
    if frequent_f and target_counts is None:
        raise ValueError("frequent_f > 0 needs target_counts")
    always = list(dict.fromkeys(reserved))
    if frequent_f:
        always.extend(t for t in target_counts.most_common(frequent_f) if t not in always)
    per_source = {}
    for f in sorted(ttable.probs):
        if f == NULL:
            continue
        per_source[f] = tuple(rank_candidates(ttable.probs[f])[:k])
    return Shortlist(per_source, k, tuple(always), frequent_f)


def sentence_candidates(sl: Shortlist, source: Sequence[str]) -> list[str]:
    """Allowed output tokens for one source sentence, in deterministic order."""
    seen = dict.fromkeys(sl.always_include)
    for f in source:
        for e, _ in sl.per_source.get(f, ()):
            seen.setdefault(e)
    return list(seen)


def coverage(sl: Shortlist, corpus: ParallelCorpus) -> CoverageReport:
    """Share of reference target tokens reachable from their source's candidates."""
    if len(corpus) == 0:
        raise ValueError("coverage needs a non-empty corpus")
    reachable = total = 0
    per_sentence = []
    for src, tgt in corpus:
        allowed = set(sentence_candidates(sl, src))
        hit = sum(1 for e in tgt if e in allowed)
        reachable += hit
        total += len(tgt)
        per_sentence.append(hit / len(tgt) if tgt else 1.0)
    return CoverageReport(reachable, total, reachable / total if total else 1.0,
                          tuple(per_sentence))


def write_shortlist(sl: Shortlist, path) -> None:
    lines = [f"#shortlist k={sl.k} f={sl.frequent_f}",
             "#always" + "".join(f" {t}" for t in sl.always_include)]
    for f, cands in sl.per_source.items():
        lines.extend(f"{f} {e} {p:.17g}" for e, p in cands)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_triples(sl: Shortlist, path) -> None:
    """Bare ``source target probability`` lines, no header."""
    lines = [f"{f} {e} {p:.17g}" for f, cands in sl.per_source.items() for e, p in cands]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_shortlist(path) -> Shortlist:
    from .corpus import read_lines

    lines = read_lines(path)
    if not lines or not lines[0].startswith("#shortlist"):
        raise InputFormatError("missing '#shortlist' header", path=path, line=1)
    try:
        header = dict(kv.split("=", 1) for kv in lines[0].split()[1:])
        k, f = int(header["k"]), int(header["f"])
    except (KeyError, ValueError) as exc:
        raise InputFormatError(f"bad header ({exc})", path=path, line=1) from None
    always = ()
    body_start = 1
    if len(lines) > 1 and lines[1].startswith("#always"):
        always = tuple(lines[1].split()[1:])
        body_start = 2
    groups: dict[str, list] = {}
    for number, line in enumerate(lines[body_start:], start=body_start + 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise InputFormatError("expected 'source target probability'", path=path, line=number)
        try:
            p = float(parts[2])
        except ValueError:
            raise InputFormatError(f"bad probability {parts[2]!r}", path=path, line=number) from None
        groups.setdefault(parts[0], []).append((parts[1], p))
    return Shortlist({src: tuple(c) for src, c in groups.items()}, k, always, f)
