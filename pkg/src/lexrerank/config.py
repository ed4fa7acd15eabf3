"""Run configuration shared by the CLI subcommands.

A config file is INI-style: one ``[section]`` per subcommand holding
``key = value`` lines whose keys are the subcommand's long option names
(dashes or underscores). Command-line flags override file values.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .align import TrainConfig


@dataclass(frozen=True)
class PipelineConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    shortlist_k: int = 10
    shortlist_f: int = 0
    rerank_metric: str = "sentbleu"
    beam: int = 6
    stats_min_count: int = 21
    seed: int = 1
    bpe_merges: int = 32000
    # decoder setting of the translation runs; recorded, never consumed
    length_normalisation: float = 0.6


DEFAULTS = PipelineConfig()


def read_config(path) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    out = {}
    for section in parser.sections():
        out[section] = {k.replace("-", "_"): v for k, v in parser.items(section)}
    return out
