"""Byte-pair encoding: learning, application and removal of segmentation."""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Sentence
from .errors import InputFormatError

# Internal end-of-word symbol. The highest code point sorts after every
# ordinary symbol, so frequency ties never favour boundary merges.
EOW = "\U0010ffff"
_EOW_FILE = "</w>"
VERSION_HEADER = "#version: 1"


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...]
    continuation_marker: str = "@@"
    _ranks: dict = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        merges = tuple((str(a), str(b)) for a, b in self.merges)
        object.__setattr__(self, "merges", merges)
        ranks = {}
        for r, pair in enumerate(merges):
            if pair in ranks:
                raise ValueError(f"duplicate merge rule {pair}")
            ranks[pair] = r
        object.__setattr__(self, "_ranks", ranks)
        object.__setattr__(self, "_cache", {})

    def segment_word(self, word: str) -> tuple[str, ...]:
        """Sub-word units of ``word`` without continuation markers."""
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        symbols = _apply_merges(list(word) + [EOW], self._ranks)
        result = tuple(_strip_eow(symbols))
        self._cache[word] = result
        return result


def _merge_pair(symbols: list[str], left: str, right: str) -> list[str]:
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i < n - 1 and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _apply_merges(symbols: list[str], ranks: dict) -> list[str]:
    # Same result as replaying the whole merge list in order: jump to the
    # lowest-ranked rule present that has not been passed yet.
    floor = 0
    while len(symbols) > 1:
        best = None
        best_rank = None
        for pair in zip(symbols, symbols[1:]):
            r = ranks.get(pair)
            if r is not None and r >= floor and (best_rank is None or r < best_rank):
                best, best_rank = pair, r
        if best is None:
            break
        symbols = _merge_pair(symbols, *best)
        floor = best_rank + 1
    return symbols


def _strip_eow(symbols: list[str]) -> list[str]:
    last = symbols[-1]
    if last == EOW:
        return symbols[:-1]
    return symbols[:-1] + [last[: -len(EOW)]]


def learn_bpe(sentences: Iterable[Sequence[str]], num_merges: int,
              min_frequency: int = 2) -> BpeModel:
    """Greedy most-frequent-pair merges over word types.

    Ties on frequency go to the lexicographically smallest (left, right)
    pair. Learning stops early once no pair reaches ``min_frequency``.
    """
    if num_merges < 0:
        raise ValueError(f"num_merges must be >= 0, got {num_merges}")
    word_counts = Counter()
    for s in sentences:
        word_counts.update(s)
    if not word_counts:
        raise ValueError("cannot learn BPE from an empty corpus")

    words = [list(w) + [EOW] for w in sorted(word_counts)]
    freqs = [word_counts[w] for w in sorted(word_counts)]
    stats = Counter()
    index = defaultdict(set)
    for wi, (symbols, f) in enumerate(zip(words, freqs)):
        for pair in zip(symbols, symbols[1:]):
            stats[pair] += f
            index[pair].add(wi)
    heap = [(-c, a, b) for (a, b), c in stats.items()]
    heapq.heapify(heap)

    merges = []
    done = set()
    while len(merges) < num_merges and heap:
        negc, a, b = heapq.heappop(heap)
        count = stats.get((a, b), 0)
        if count != -negc or count <= 0 or (a, b) in done:
            continue
        if count < min_frequency:
            break
        merges.append((a, b))
        done.add((a, b))
        touched = set()
        for wi in sorted(index.pop((a, b), ())):
            old = words[wi]
            new = _merge_pair(old, a, b)
            if len(new) == len(old):
                continue
            f = freqs[wi]
            for pair in zip(old, old[1:]):
                stats[pair] -= f
                touched.add(pair)
            for pair in zip(new, new[1:]):
                stats[pair] += f
                index[pair].add(wi)
                touched.add(pair)
            words[wi] = new
        for pair in touched:
            c = stats[pair]
            if c > 0:
                heapq.heappush(heap, (-c, *pair))
            else:
                del stats[pair]
    return BpeModel(tuple(merges))


def training_segmentation(sentences: Iterable[Sequence[str]], num_merges: int,
                          min_frequency: int = 2) -> dict[str, tuple[str, ...]]:
    """Word segmentations as they stand at the end of learning.

    Replays the merges naively (one pass over all words per merge), which
    makes it an independent check on :func:`learn_bpe` and
    :meth:`BpeModel.segment_word`.
    """
    model = learn_bpe(sentences, num_merges, min_frequency)
    word_counts = Counter()
    for s in sentences:
        word_counts.update(s)
    state = {w: list(w) + [EOW] for w in word_counts}
    for a, b in model.merges:
        for w in state:
            state[w] = _merge_pair(state[w], a, b)
    return {w: tuple(_strip_eow(sym)) for w, sym in state.items()}


def apply_bpe(model: BpeModel, s: Sequence[str]) -> Sentence:
    marker = model.continuation_marker
    out = []
    for word in s:
        units = model.segment_word(word)
        out.extend(u + marker for u in units[:-1])
        out.append(units[-1])
    return tuple(out)


def de_bpe(s: Sequence[str], marker: str = "@@") -> Sentence:
    """Join sub-word units: every token ending in ``marker`` glues to the next."""
    out = []
    buf = ""
    for tok in s:
        if tok.endswith(marker):
            buf += tok[: -len(marker)]
        else:
            out.append(buf + tok)
            buf = ""
    if buf:
        out.append(buf)
    return tuple(out)


def write_bpe(model: BpeModel, path) -> None:
    lines = [VERSION_HEADER]
    for a, b in model.merges:
        lines.append(f"{_to_file(a)} {_to_file(b)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_bpe(path, continuation_marker: str = "@@") -> BpeModel:
    from .corpus import read_lines

    lines = read_lines(path)
    if not lines or lines[0].strip() != VERSION_HEADER:
        raise InputFormatError(f"expected header {VERSION_HEADER!r}", path=path, line=1)
    merges = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise InputFormatError("merge rule must have two symbols", path=path, line=number)
        merges.append((_from_file(parts[0]), _from_file(parts[1])))
    try:
        return BpeModel(tuple(merges), continuation_marker)
    except ValueError as exc:
        raise InputFormatError(str(exc), path=path) from None


def _to_file(symbol: str) -> str:
    return symbol[:-1] + _EOW_FILE if symbol.endswith(EOW) else symbol


def _from_file(symbol: str) -> str:
    return symbol[: -len(_EOW_FILE)] + EOW if symbol.endswith(_EOW_FILE) else symbol
