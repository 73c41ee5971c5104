"""
Corpus data types: vocabulary, documents and the aligned embedding table.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from utils.errors import ConfigurationError, IngestionError


class Vocabulary:
    """Dense 0-based word <-> id mapping."""

    def __init__(self, words: Iterable[str]):
        self.words: List[str] = list(words)
        self.index: Dict[str, int] = {}
        for i, word in enumerate(self.words):
            if word in self.index:
                raise IngestionError(f"Duplicate vocabulary entry: {word!r}")
            self.index[word] = i

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self.words == other.words

    def lookup(self, word: str) -> int:
        return self.index[word]

    def decode(self, ids: Iterable[int]) -> List[str]:
        return [self.words[i] for i in ids]

    def encode(self, tokens: Iterable[str]) -> List[int]:
        """Ids of in-vocabulary tokens; others are dropped."""
        return [self.index[t] for t in tokens if t in self.index]


@dataclass
class RawDocument:
    """Tokenized document before vocabulary encoding."""
    tokens: List[str]
    doc_id: int
    label: Optional[str] = None


@dataclass
class Document:
    tokens: List[int]
    doc_id: int
    label: Optional[str] = None

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class Corpus:
    train: List[Document]
    test: List[Document]
    vocab: Vocabulary

    @property
    def num_tokens(self) -> int:
        return sum(len(d) for d in self.train)

    def word_frequencies(self) -> np.ndarray:
        """Training-set token count per vocabulary id."""
        counts = np.zeros(len(self.vocab), dtype=np.int64)
        for doc in self.train:
            np.add.at(counts, np.asarray(doc.tokens, dtype=np.int64), 1)
        return counts

    def summary(self) -> str:
        return f"V={len(self.vocab)}, D_train={len(self.train)}, D_test={len(self.test)}"


@dataclass
class EmbeddingTable:
    """V x M embedding matrix; row i belongs to vocabulary id i."""
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2:
            raise ConfigurationError(f"Embedding table must be 2-D, got shape {self.matrix.shape}")
        if not np.all(np.isfinite(self.matrix)):
            raise IngestionError("Embedding table contains non-finite entries")

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.matrix.shape[0]

