"""
Ingest: corpus reading, vocabulary, embeddings, splitting and the corpus cache.
"""

# Main entry point
from .orchestrator import run_ingest

# Statistics
from .stats import IngestStats

# Tokenization
from .tokenizer import read_corpus_file, simple_tokenize, split_label

# Vocabulary
from .vocabulary import as_raw_documents, build_vocabulary, encode_documents, ingest

# Embeddings
from .embeddings import SUPPORTED_FORMATS, align, load_embeddings

# Splitting
from .splitter import split, split_documents

# Cache
from .cache import corpus_hash, load_corpus_cache, save_corpus_cache

__all__ = [
    'run_ingest',
    'IngestStats',

    'read_corpus_file',
    'simple_tokenize',
    'split_label',

    'as_raw_documents',
    'build_vocabulary',
    'encode_documents',
    'ingest',

    'SUPPORTED_FORMATS',
    'align',
    'load_embeddings',

    'split',
    'split_documents',

    'corpus_hash',
    'load_corpus_cache',
    'save_corpus_cache',
]
