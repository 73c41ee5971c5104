"""
Deterministic train/test splitting.
"""

import logging
from typing import List, Sequence, Tuple, TypeVar

import numpy as np

from models.corpus import Corpus
from utils.errors import IngestionError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def split_documents(documents: Sequence[T], n_test: int, seed: int) -> Tuple[List[T], List[T]]:
    """
    Shuffle with a seeded generator; the last n_test documents are the test set.

    Raises:
        IngestionError: if n_test is negative or not smaller than the document count
    """
    if n_test < 0:
        raise IngestionError(f"n_test must be >= 0, got {n_test}")
    if n_test >= len(documents):
        raise IngestionError(f"n_test={n_test} must be smaller than the document count {len(documents)}")
    order = np.random.default_rng(seed).permutation(len(documents))
    shuffled = [documents[i] for i in order]
    cut = len(shuffled) - n_test
    return shuffled[:cut], shuffled[cut:]


def split(corpus: Corpus, n_test: int, seed: int) -> Corpus:
    """Split the training documents of an unsplit corpus; any existing test set is kept in front."""
    train, test = split_documents(corpus.train, n_test, seed)
    logger.info(f"Split {len(corpus.train)} documents into {len(train)} train / {len(test)} test (seed={seed})")
    return Corpus(train=train, test=list(corpus.test) + test, vocab=corpus.vocab)
