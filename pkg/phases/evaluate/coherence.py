"""
PMI topic coherence against a reference co-occurrence corpus.

A window is either a whole document or a sliding span of k tokens. Word
probabilities are window frequencies: p(w) = windows containing w / total
windows, p(a, b) = windows containing both / total windows.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, Optional, Sequence, Set, Tuple, Union

import numpy as np

from utils.errors import CheckpointError, ConfigurationError
from utils.file_operations import ensure_directory, hash_token_sequences
from utils.json_handler import check_versioned, load_json, save_json, versioned

from .topics import TopicReport

logger = logging.getLogger(__name__)

DOCUMENT_WINDOW = "document"
Window = Union[str, int]

COOCCURRENCE_FORMAT = "ghlda-cooccurrence"
COOCCURRENCE_VERSION = 1


def _pair_key(a: str, b: str) -> Tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class CooccurrenceStats:
    """Window counts per word and per unordered word pair."""
    word_counts: Dict[str, int] = field(default_factory=dict)
    pair_counts: Dict[Tuple[str, str], int] = field(default_factory=dict)
    total_windows: int = 0

    def count(self, word: str) -> int:
        return self.word_counts.get(word, 0)

    def pair_count(self, a: str, b: str) -> int:
        return self.pair_counts.get(_pair_key(a, b), 0)

    def __contains__(self, word: str) -> bool:
        return self.word_counts.get(word, 0) > 0

    def add_window(self, words: Set[str]) -> None:
        self.total_windows += 1
        for word in words:
            self.word_counts[word] = self.word_counts.get(word, 0) + 1
        for a, b in itertools.combinations(sorted(words), 2):
            self.pair_counts[(a, b)] = self.pair_counts.get((a, b), 0) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_windows": self.total_windows,
            "word_counts": dict(sorted(self.word_counts.items())),
            "pair_counts": [[a, b, c] for (a, b), c in sorted(self.pair_counts.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CooccurrenceStats":
        return cls(
            word_counts={w: int(c) for w, c in data["word_counts"].items()},
            pair_counts={(a, b): int(c) for a, b, c in data["pair_counts"]},
            total_windows=int(data["total_windows"]),
        )


def iter_windows(tokens: Sequence[str], window: Window) -> Iterator[Set[str]]:
    """
    Word sets of the windows over one document. A document no longer than
    the sliding window yields a single window.
    """
    if window == DOCUMENT_WINDOW:
        yield set(tokens)
        return
    size = int(window)
    if size < 1:
        raise ConfigurationError(f"Sliding window must be >= 1, got {size}")
    if len(tokens) <= size:
        yield set(tokens)
        return
    for start in range(len(tokens) - size + 1):
        yield set(tokens[start:start + size])


def build_cooccurrence(docs: Iterable[Sequence[str]], window: Window = DOCUMENT_WINDOW,
                       vocabulary: Optional[Iterable[str]] = None) -> CooccurrenceStats:
    """
    Count word presence and pair co-presence per window.

    When `vocabulary` is given only those words are counted; windows are
    still counted even if none of their words survive.
    """
    keep = set(vocabulary) if vocabulary is not None else None
    stats = CooccurrenceStats()
    for tokens in docs:
        for words in iter_windows(list(tokens), window):
            stats.add_window(words & keep if keep is not None else words)
    logger.info(
        f"Co-occurrence over {stats.total_windows} windows: "
        f"{len(stats.word_counts)} words, {len(stats.pair_counts)} pairs"
    )
    return stats


def cooccurrence_cache_path(cache_dir: Path, docs: Sequence[Sequence[str]], window: Window,
                            vocabulary: Optional[Sequence[str]] = None) -> Path:
    key = hash_token_sequences(list(docs) + [[f"window={window}"], sorted(vocabulary or [])])
    return Path(cache_dir) / f"cooccurrence_{key[:16]}.json"


def load_or_build_cooccurrence(docs: Sequence[Sequence[str]], window: Window, cache_dir: Optional[Path],
                               vocabulary: Optional[Sequence[str]] = None) -> CooccurrenceStats:
    """Reuse a cached table for the same reference corpus, window and vocabulary."""
    if cache_dir is None:
        return build_cooccurrence(docs, window, vocabulary)

    path = cooccurrence_cache_path(cache_dir, docs, window, vocabulary)
    if path.exists():
        data = load_json(path)
        try:
            check_versioned(data, COOCCURRENCE_FORMAT, COOCCURRENCE_VERSION, path)
            logger.info(f"Using cached co-occurrence table {path}")
            return CooccurrenceStats.from_dict(data["stats"])
        except CheckpointError as e:
            logger.warning(f"Ignoring co-occurrence cache: {e}")

    stats = build_cooccurrence(docs, window, vocabulary)
    ensure_directory(path.parent)
    save_json(versioned(COOCCURRENCE_FORMAT, COOCCURRENCE_VERSION, window=window, stats=stats.to_dict()), path)
    return stats


def pmi(cooc: CooccurrenceStats, a: str, b: str, epsilon: float) -> float:
    """log[(p(a, b) + epsilon) / (p(a) p(b))]; both words must occur."""
    total = cooc.total_windows
    p_a = cooc.count(a) / total
    p_b = cooc.count(b) / total
    p_ab = cooc.pair_count(a, b) / total
    joint = p_ab + epsilon
    if joint <= 0.0:
        return -math.inf
    return math.log(joint) - math.log(p_a) - math.log(p_b)


@dataclass
class CoherenceResult:
    per_topic: Dict[int, Optional[float]]
    mean: Optional[float]
    top_n: int
    epsilon: float
    skipped_pairs: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "top_n": self.top_n,
            "epsilon": self.epsilon,
            "skipped_pairs": self.skipped_pairs,
            "per_topic": [{"topic_id": k, "pmi": v} for k, v in self.per_topic.items()],
        }


def pmi_coherence(topics: Sequence[TopicReport], cooc: CooccurrenceStats, top_n: int = 10,
                  epsilon: Optional[float] = None) -> CoherenceResult:
    """
    Mean PMI over unordered pairs of each topic's top words, and the mean
    over topics.

    `epsilon` defaults to 1 / total windows; pass 0 for unsmoothed values.
    Pairs with a word absent from the reference counts are skipped. A topic
    with fewer than two resolvable words has no score (None), and is left
    out of the model mean.

    Raises:
        ConfigurationError: if top_n < 2
    """
    if top_n < 2:
        raise ConfigurationError(f"top_n must be >= 2 for pairwise coherence, got {top_n}")
    if cooc.total_windows == 0:
        raise ConfigurationError("Co-occurrence table has no windows")
    if epsilon is None:
        epsilon = 1.0 / cooc.total_windows

    per_topic: Dict[int, Optional[float]] = {}
    skipped = 0
    for report in topics:
        words = report.words[:top_n]
        resolvable = [w for w in words if w in cooc]
        missing = len(words) - len(resolvable)
        if missing:
            pairs_lost = len(words) * (len(words) - 1) // 2 - len(resolvable) * (len(resolvable) - 1) // 2
            skipped += pairs_lost
            logger.info(f"Topic {report.topic_id}: {missing} top words absent from reference, {pairs_lost} pairs skipped")
        if len(resolvable) < 2:
            per_topic[report.topic_id] = None
            continue
        values = [pmi(cooc, a, b, epsilon) for a, b in itertools.combinations(resolvable, 2)]
        per_topic[report.topic_id] = float(np.mean(values))

    scored = [v for v in per_topic.values() if v is not None]
    mean = float(np.mean(scored)) if scored else None
    logger.info(f"PMI coherence over {len(scored)}/{len(per_topic)} topics: mean={mean}")
    return CoherenceResult(per_topic=per_topic, mean=mean, top_n=top_n, epsilon=float(epsilon),
                           skipped_pairs=skipped)
