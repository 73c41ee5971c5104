"""
Vocabulary construction and document encoding.
"""

import logging
from collections import Counter
from typing import List, Sequence, Union

from models.corpus import Corpus, Document, RawDocument, Vocabulary
from utils.errors import IngestionError

logger = logging.getLogger(__name__)

RawInput = Union[RawDocument, Sequence[str]]


def as_raw_documents(documents: Sequence[RawInput], first_doc_id: int = 0) -> List[RawDocument]:
    """Wrap plain token lists as RawDocument with sequential ids."""
    return [
        doc if isinstance(doc, RawDocument) else RawDocument(tokens=list(doc), doc_id=first_doc_id + i)
        for i, doc in enumerate(documents)
    ]


def build_vocabulary(documents: Sequence[RawDocument], min_count: int) -> Vocabulary:
    """
    Words with corpus frequency >= min_count, most frequent first
    (ties broken alphabetically so the order is reproducible).
    """
    counts = Counter(token for doc in documents for token in doc.tokens)
    kept = [word for word, count in counts.items() if count >= min_count]
    kept.sort(key=lambda w: (-counts[w], w))
    logger.debug(f"{len(kept)}/{len(counts)} word types reach min_count={min_count}")
    return Vocabulary(kept)


def encode_documents(documents: Sequence[RawDocument], vocab: Vocabulary) -> List[Document]:
    """Drop out-of-vocabulary tokens, then drop documents left empty."""
    encoded = []
    dropped = 0
    for raw in documents:
        ids = vocab.encode(raw.tokens)
        if ids:
            encoded.append(Document(tokens=ids, doc_id=raw.doc_id, label=raw.label))
        else:
            dropped += 1
    if dropped:
        logger.info(f"Dropped {dropped} documents with no in-vocabulary tokens")
    return encoded


def ingest(raw_documents: Sequence[RawInput], min_count: int,
           raw_test: Sequence[RawInput] = ()) -> Corpus:
    """
    Build the training vocabulary and encode both splits through it.

    Raises:
        IngestionError: if no training document survives filtering
    """
    raw_documents = as_raw_documents(raw_documents)
    raw_test = as_raw_documents(raw_test, first_doc_id=len(raw_documents))
    if min_count < 1:
        raise IngestionError(f"min_count must be >= 1, got {min_count}")
    vocab = build_vocabulary(raw_documents, min_count)
    train = encode_documents(raw_documents, vocab)
    if not train:
        raise IngestionError(
            f"Corpus is empty after filtering with min_count={min_count} "
            f"({len(raw_documents)} input documents)"
        )
    test = encode_documents(raw_test, vocab)
    corpus = Corpus(train=train, test=test, vocab=vocab)
    logger.info(f"Ingested corpus: {corpus.summary()}")
    return corpus
