"""Data models for the topic modeling engine"""

from .corpus import Corpus, Document, EmbeddingTable, RawDocument, Vocabulary
from .state import (
    FLAT_MODELS,
    GAUSSIAN_MODELS,
    HIERARCHICAL_MODELS,
    MODELS,
    Assignments,
    ModelState,
)

__all__ = [
    'Corpus',
    'Document',
    'EmbeddingTable',
    'RawDocument',
    'Vocabulary',
    'Assignments',
    'ModelState',
    'MODELS',
    'FLAT_MODELS',
    'HIERARCHICAL_MODELS',
    'GAUSSIAN_MODELS',
]
