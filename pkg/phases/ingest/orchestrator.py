"""
Ingest Orchestrator Module.
Reads the raw corpus, builds the vocabulary, aligns embeddings and writes the cache.
"""

import logging
import time
from typing import Optional, Tuple

from config import RunConfig
from models.corpus import Corpus, EmbeddingTable

from .cache import save_corpus_cache
from .embeddings import align, load_embeddings
from .splitter import split
from .stats import IngestStats
from .tokenizer import Tokenizer, read_corpus_file, simple_tokenize
from .vocabulary import ingest

logger = logging.getLogger(__name__)


def run_ingest(
    config: RunConfig,
    tokenizer: Tokenizer = simple_tokenize,
) -> Tuple[IngestStats, Corpus, Optional[EmbeddingTable]]:
    """
    Run the ingest phase.

    Steps:
    1. Read and tokenize the corpus file(s)
    2. Build the vocabulary and encode the documents (a separate test
       file is encoded through the training vocabulary)
    3. Intersect with the embedding vocabulary
    4. Split off the test set (unless a test file is given)
    5. Write the corpus cache

    Returns:
        Tuple of (IngestStats, Corpus, EmbeddingTable or None)
    """
    stats = IngestStats()
    start = time.time()
    logger.info("=" * 60)
    logger.info("Starting Ingest: corpus and embeddings")
    logger.info("=" * 60)

    raw_docs = read_corpus_file(config.corpus_path, tokenizer)
    stats.raw_documents = len(raw_docs)
    stats.raw_tokens = sum(len(d.tokens) for d in raw_docs)
    stats.raw_word_types = len({t for d in raw_docs for t in d.tokens})

    raw_test = []
    if config.test_corpus_path is not None:
        raw_test = read_corpus_file(config.test_corpus_path, tokenizer, first_doc_id=len(raw_docs))
    corpus = ingest(raw_docs, config.min_count, raw_test)

    table: Optional[EmbeddingTable] = None
    if config.embedding_path is not None:
        logger.info(f"\n--- Aligning with {config.embedding_format} embeddings ---")
        vectors = load_embeddings(config.embedding_path, config.embedding_format,
                                  vocabulary=set(corpus.vocab.words))
        before = len(corpus.vocab)
        corpus, table = align(corpus, vectors)
        stats.words_without_embedding = before - len(corpus.vocab)
        stats.embedding_dim = table.dim

    if config.test_corpus_path is None:
        corpus = split(corpus, config.n_test, config.seed)

    stats.vocab_size = len(corpus.vocab)
    stats.train_documents = len(corpus.train)
    stats.test_documents = len(corpus.test)
    stats.train_tokens = corpus.num_tokens

    save_corpus_cache(config.cache_path, corpus, table)
    stats.duration = time.time() - start

    logger.info("=" * 60)
    logger.info("Ingest Summary:")
    logger.info(f"  Raw documents: {stats.raw_documents} ({stats.raw_tokens} tokens, {stats.raw_word_types} types)")
    logger.info(f"  {stats.summary_line()}")
    logger.info(f"  Training tokens: {stats.train_tokens}")
    if table is not None:
        logger.info(f"  Embedding dimension: {stats.embedding_dim}, words dropped: {stats.words_without_embedding}")
    logger.info("=" * 60)
    return stats, corpus, table
