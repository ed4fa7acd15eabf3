"""Statistical tooling for domain-robust machine translation.

IBM-model alignment training, lexical shortlists, agreement-based n-best
re-ranking, BLEU/METEOR breakdowns and domain-distance statistics.
"""

__version__ = "0.1.0"

from .align import (AlignmentModel, SentenceAlignment, TrainConfig, TranslationTable,
                    em_trajectory, expected_counts, log_likelihood, tension_gradient,
                    train, viterbi_align)
from .bpe import BpeModel, apply_bpe, de_bpe, learn_bpe
from .corpus import (DomainStats, ParallelCorpus, Vocabulary, build_vocab, domain_stats,
                     load_parallel, sentence, vocab_overlap)
from .kernels import BACKEND
from .metrics import (BleuBreakdown, MetricKind, chrf, corpus_bleu, meteor_lite,
                      sentence_bleu, ter_basic)
from .rerank import (Hypothesis, NBestList, RerankedHypothesis, agreement_scores,
                     parse_nbest, rerank, select_top)
from .shortlist import CoverageReport, Shortlist, build_shortlist, coverage, sentence_candidates

__all__ = [
    "__version__",
    "AlignmentModel",
    "SentenceAlignment",
    "TrainConfig",
    "TranslationTable",
    "em_trajectory",
    "expected_counts",
    "log_likelihood",
    "tension_gradient",
    "train",
    "viterbi_align",
    "BpeModel",
    "apply_bpe",
    "de_bpe",
    "learn_bpe",
    "DomainStats",
    "ParallelCorpus",
    "Vocabulary",
    "build_vocab",
    "domain_stats",
    "load_parallel",
    "sentence",
    "vocab_overlap",
    "BACKEND",
    "BleuBreakdown",
    "MetricKind",
    "chrf",
    "corpus_bleu",
    "meteor_lite",
    "sentence_bleu",
    "ter_basic",
    "Hypothesis",
    "NBestList",
    "RerankedHypothesis",
    "agreement_scores",
    "parse_nbest",
    "rerank",
    "select_top",
    "CoverageReport",
    "Shortlist",
    "build_shortlist",
    "coverage",
    "sentence_candidates",
]
