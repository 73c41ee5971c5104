"""
Ingest statistics tracking.
"""

from typing import Any, Dict, List


class IngestStats:
    """Counts collected while building the corpus cache."""

    def __init__(self):
        # Raw input
        self.raw_documents = 0
        self.raw_tokens = 0
        self.raw_word_types = 0

        # After frequency filtering and alignment
        self.vocab_size = 0
        self.train_documents = 0
        self.test_documents = 0
        self.train_tokens = 0
        self.embedding_dim = 0
        self.words_without_embedding = 0

        self.errors: List[str] = []
        self.duration = 0.0

    def summary_line(self) -> str:
        return f"V={self.vocab_size}, D_train={self.train_documents}, D_test={self.test_documents}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "raw_documents": self.raw_documents,
            "raw_tokens": self.raw_tokens,
            "raw_word_types": self.raw_word_types,
            "vocab_size": self.vocab_size,
            "train_documents": self.train_documents,
            "test_documents": self.test_documents,
            "train_tokens": self.train_tokens,
            "embedding_dim": self.embedding_dim,
            "words_without_embedding": self.words_without_embedding,
            "duration": self.duration,
            "errors": self.errors,
        }
