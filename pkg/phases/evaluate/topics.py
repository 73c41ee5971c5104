"""
Topic reports and top-word extraction.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from models.state import ModelState

logger = logging.getLogger(__name__)


@dataclass
class TopicReport:
    """
    Ranked words of one topic. `score` is the word's assignment count to
    the topic; equal counts are ordered by the model's predictive density.
    """
    topic_id: int
    top_words: List[Tuple[str, float]]
    assignment_count: int
    level: Optional[int] = None
    path: Optional[Tuple[int, ...]] = None
    doc_count: Optional[int] = None

    @property
    def words(self) -> List[str]:
        return [word for word, _ in self.top_words]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "topic_id": self.topic_id,
            "assignment_count": self.assignment_count,
            "top_words": [{"word": w, "score": s} for w, s in self.top_words],
        }
        if self.level is not None:
            data["level"] = self.level
            data["path"] = list(self.path)
            data["doc_count"] = self.doc_count
        return data


def topic_word_counts(state: ModelState) -> Dict[int, np.ndarray]:
    """Per-topic word counts recovered from the assignments."""
    vocab_size = len(state.corpus.vocab)
    counts = {topic_id: np.zeros(vocab_size, dtype=np.int64) for topic_id in state.topic_ids()}
    for d, doc in enumerate(state.documents):
        tokens = np.asarray(doc.tokens, dtype=np.int64)
        for topic_id, word in zip(state.token_topics(d), tokens):
            counts[int(topic_id)][word] += 1
    return counts


def top_words(state: ModelState, topic_id: int, n: int,
              counts: Optional[Dict[int, np.ndarray]] = None) -> List[Tuple[str, float]]:
    """
    Up to n words ranked by assignment count to the topic, ties broken by
    the topic's predictive density of the word. Empty topics give [].
    """
    if counts is None:
        counts = topic_word_counts(state)
    word_counts = counts[topic_id]
    present = np.flatnonzero(word_counts)
    if present.size == 0:
        return []

    scores = state.emission.word_log_scores(state.topic_payload(topic_id))[present]
    order = np.lexsort((-scores, -word_counts[present]))
    ranked = present[order][:n]
    words = state.corpus.vocab.words
    return [(words[v], float(word_counts[v])) for v in ranked]


def topic_reports(state: ModelState, n: int = 10) -> List[TopicReport]:
    """One report per topic (flat) or tree node (hierarchical, depth-first)."""
    counts = topic_word_counts(state)
    reports = []
    for topic_id in state.topic_ids():
        report = TopicReport(
            topic_id=topic_id,
            top_words=top_words(state, topic_id, n, counts),
            assignment_count=int(counts[topic_id].sum()),
        )
        if state.is_hierarchical:
            node = state.tree.nodes[topic_id]
            report.level = node.level
            report.path = state.tree.path_to(topic_id)
            report.doc_count = node.doc_count
        reports.append(report)
    logger.debug(f"Built {len(reports)} topic reports")
    return reports
