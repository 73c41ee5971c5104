"""
Polysemy audit: how each frequent word's tokens spread over topics.

Flat models group tokens by topic; hierarchical models by (path, level),
so two paths sharing a node at some level still count as distinct groups.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Tuple

from models.state import ModelState

logger = logging.getLogger(__name__)

DEFAULT_MIN_SHARE = 0.05


def group_label(key: Hashable) -> str:
    if isinstance(key, tuple):
        path, level = key
        return f"{'-'.join(str(n) for n in path)}@{level}"
    return f"topic {key}"


@dataclass
class PolysemyEntry:
    word: str
    total: int
    groups: List[Tuple[Hashable, int]]
    polysemous: bool

    def shares(self) -> List[float]:
        return [count / self.total for _, count in self.groups]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "word": self.word,
            "total": self.total,
            "polysemous": self.polysemous,
            "groups": [{"group": group_label(key), "count": count, "share": count / self.total}
                       for key, count in self.groups],
        }


def assignment_groups(state: ModelState) -> Dict[int, Counter]:
    """word id -> Counter over assignment groups."""
    groups: Dict[int, Counter] = defaultdict(Counter)
    for d, doc in enumerate(state.documents):
        if state.is_hierarchical:
            path = state.assignments.paths[d]
            for word, level in zip(doc.tokens, state.assignments.levels[d]):
                groups[int(word)][(path, int(level))] += 1
        else:
            for word, topic in zip(doc.tokens, state.assignments.topics[d]):
                groups[int(word)][int(topic)] += 1
    return groups


def polysemy_report(state: ModelState, min_count: int = 10,
                    min_share: float = DEFAULT_MIN_SHARE) -> List[PolysemyEntry]:
    """
    Assignment distribution of every word with at least `min_count` tokens.

    A word is polysemous when two or more groups each hold at least
    `min_share` of its tokens. Entries are ordered by total count, then word.
    """
    words = state.corpus.vocab.words
    entries = []
    for word_id, counter in assignment_groups(state).items():
        total = sum(counter.values())
        if total < min_count:
            continue
        ranked = sorted(counter.items(), key=lambda item: (-item[1], group_label(item[0])))
        strong = sum(1 for _, count in ranked if count >= min_share * total)
        entries.append(PolysemyEntry(word=words[word_id], total=total, groups=ranked, polysemous=strong >= 2))

    entries.sort(key=lambda e: (-e.total, e.word))
    flagged = sum(1 for e in entries if e.polysemous)
    logger.info(f"Polysemy: {flagged} of {len(entries)} words with >= {min_count} tokens flagged")
    return entries
