"""
Serialized corpus cache so training never re-tokenizes.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from models.corpus import Corpus, Document, EmbeddingTable, Vocabulary
from utils.file_operations import hash_token_sequences
from utils.json_handler import check_versioned, load_json, save_json, versioned

logger = logging.getLogger(__name__)

CACHE_FORMAT = "ghlda-corpus-cache"
CACHE_VERSION = 1


def _documents_to_list(docs: List[Document]) -> List[Dict[str, Any]]:
    return [{"doc_id": d.doc_id, "label": d.label, "tokens": list(d.tokens)} for d in docs]


def _documents_from_list(entries: List[Dict[str, Any]]) -> List[Document]:
    return [Document(tokens=[int(t) for t in e["tokens"]], doc_id=int(e["doc_id"]), label=e.get("label"))
            for e in entries]


def corpus_hash(corpus: Corpus) -> str:
    """Content key of the training documents as surface words."""
    return hash_token_sequences(corpus.vocab.decode(doc.tokens) for doc in corpus.train)


def save_corpus_cache(path: Path, corpus: Corpus, embeddings: Optional[EmbeddingTable] = None) -> None:
    data = versioned(
        CACHE_FORMAT,
        CACHE_VERSION,
        corpus_hash=corpus_hash(corpus),
        vocabulary=list(corpus.vocab.words),
        train=_documents_to_list(corpus.train),
        test=_documents_to_list(corpus.test),
        embeddings=embeddings.matrix if embeddings is not None else None,
    )
    save_json(data, Path(path))
    logger.info(f"Wrote corpus cache to {path} ({corpus.summary()})")


def load_corpus_cache(path: Path) -> Tuple[Corpus, Optional[EmbeddingTable]]:
    """
    Raises:
        CheckpointError: if the file is not a corpus cache or comes from a newer version
    """
    data = load_json(Path(path))
    check_versioned(data, CACHE_FORMAT, CACHE_VERSION, path)

    corpus = Corpus(
        train=_documents_from_list(data["train"]),
        test=_documents_from_list(data["test"]),
        vocab=Vocabulary(data["vocabulary"]),
    )
    embeddings = EmbeddingTable(data["embeddings"]) if data.get("embeddings") is not None else None
    logger.info(f"Loaded corpus cache {path}: {corpus.summary()}")
    return corpus, embeddings
