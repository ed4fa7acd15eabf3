"""N-best re-ranking by agreement with the rest of the beam.

A hypothesis' agreement score is the sum of its similarity to every other
hypothesis for the same source sentence, with the other hypothesis in the
reference role. Similarities are computed on de-segmented tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bpe import de_bpe
from .corpus import Sentence, read_lines, sentence
from .errors import InputFormatError
from .metrics import MetricKind, similarity

DEFAULT_BEAM = 6
FIELD_SEP = "|||"


@dataclass(frozen=True)
class Hypothesis:
    tokens: Sentence
    model_score: float
    original_rank: int
    features: str = ""


@dataclass(frozen=True)
class NBestList:
    sentence_id: int
    hypotheses: tuple[Hypothesis, ...]


@dataclass(frozen=True)
class RerankedHypothesis:
    hypothesis: Hypothesis
    agreement_score: float
    final_rank: int


def parse_nbest_lines(lines: Sequence[str], beam: int = DEFAULT_BEAM, path=None) -> list[NBestList]:
    if beam < 1:
        raise ValueError(f"beam must be >= 1, got {beam}")
    groups: list[tuple[int, list[Hypothesis]]] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(FIELD_SEP)]
        if len(fields) < 4:
            raise InputFormatError(
                f"expected 'id ||| text ||| features ||| score', got {len(fields)} field(s)",
                path=path, line=number)
        try:
            sid = int(fields[0])
            score = float(fields[-1])
        except ValueError as exc:
            raise InputFormatError(f"bad id or score ({exc})", path=path, line=number) from None
        if sid < 0:
            raise InputFormatError(f"negative sentence id {sid}", path=path, line=number)
        if groups and groups[-1][0] == sid:
            hyps = groups[-1][1]
        else:
            if groups and sid <= groups[-1][0]:
                raise InputFormatError(
                    f"sentence id {sid} after {groups[-1][0]}; ids must increase",
                    path=path, line=number)
            hyps = []
            groups.append((sid, hyps))
        if len(hyps) >= beam:
            raise InputFormatError(f"sentence {sid} has more than beam={beam} hypotheses",
                                   path=path, line=number)
        features = f" {FIELD_SEP} ".join(fields[2:-1])
        hyps.append(Hypothesis(sentence(fields[1]), score, len(hyps), features))
    return [NBestList(sid, tuple(h)) for sid, h in groups]


def parse_nbest(path, beam: int = DEFAULT_BEAM) -> list[NBestList]:
    return parse_nbest_lines(read_lines(path), beam, path=path)


def agreement_scores(nbest: NBestList, metric: MetricKind | None = None,
                     marker: str = "@@") -> list[float]:
    metric = metric or MetricKind()
    plain = [de_bpe(h.tokens, marker) for h in nbest.hypotheses]
    scores = []
    for i, hi in enumerate(plain):
        total = 0.0
        for j, hj in enumerate(plain):
            if j != i:
                total += similarity(metric, hi, hj)
        scores.append(total)
    return scores


def rerank(nbest: NBestList, metric: MetricKind | None = None,
           marker: str = "@@") -> list[RerankedHypothesis]:
    """Sort by agreement score, highest first; ties keep decoder order."""
    scores = agreement_scores(nbest, metric, marker)
    order = sorted(range(len(scores)),
                   key=lambda i: (-scores[i], nbest.hypotheses[i].original_rank))
    return [RerankedHypothesis(nbest.hypotheses[i], scores[i], r) for r, i in enumerate(order)]


def _check_contiguous(lists: Sequence[NBestList]):
    if not lists:
        raise ValueError("no n-best lists given")
    for expected, nb in enumerate(lists):
        if nb.sentence_id != expected:
            raise ValueError(f"missing sentence id {expected} (found {nb.sentence_id})")


def select_top(lists: Sequence[NBestList], metric: MetricKind | None = None,
               passthrough: bool = False, marker: str = "@@") -> list[Sentence]:
    """One de-segmented translation per source sentence.

    With ``passthrough`` the decoder's own first hypothesis is returned.
    """
    _check_contiguous(lists)
    out = []
    for nb in lists:
        if passthrough:
            best = min(nb.hypotheses, key=lambda h: h.original_rank)
        else:
            best = rerank(nb, metric, marker)[0].hypothesis
        out.append(de_bpe(best.tokens, marker))
    return out


def format_annotated(nbest: NBestList, ranked: Sequence[RerankedHypothesis]) -> list[str]:
    """N-best lines in re-ranked order with the agreement score appended."""
    return [f"{nbest.sentence_id} ||| {' '.join(r.hypothesis.tokens)} ||| "
            f"{r.hypothesis.features} ||| {r.hypothesis.model_score!r} ||| "
            f"{r.agreement_score!r}" for r in ranked]


def write_lines(lines: Sequence[str], path) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
