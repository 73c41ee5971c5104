"""
Pre-trained embedding loading and vocabulary alignment.

Supported text formats:
    glove_text     `word v1 ... vM` on every line
    word2vec_text  `count dim` header, then GloVe-style rows
    fasttext_text  same layout as word2vec_text
"""

import logging
from pathlib import Path
from typing import Container, Dict, Optional, Tuple

import numpy as np

from models.corpus import Corpus, Document, EmbeddingTable, Vocabulary
from utils.errors import EmbeddingParseError, IngestionError

logger = logging.getLogger(__name__)

FORMATS_WITH_HEADER = ("word2vec_text", "fasttext_text")
SUPPORTED_FORMATS = ("glove_text",) + FORMATS_WITH_HEADER


def _parse_header(line: str, path: Path) -> int:
    parts = line.split()
    if len(parts) != 2:
        raise EmbeddingParseError(f"Expected a 'count dim' header, got {line[:60]!r}", path, 1)
    try:
        int(parts[0])
        return int(parts[1])
    except ValueError:
        raise EmbeddingParseError(f"Non-numeric header {line[:60]!r}", path, 1) from None


def load_embeddings(path: Path, format: str = "glove_text",
                    vocabulary: Optional[Container[str]] = None) -> Dict[str, np.ndarray]:
    """
    Read a text embedding file into a word -> vector map.

    Args:
        path: embedding file
        format: one of glove_text, word2vec_text, fasttext_text
        vocabulary: when given, rows for other words are skipped (their
            dimension is still checked)

    Raises:
        FileNotFoundError: if the file is missing
        EmbeddingParseError: on inconsistent dimensions or non-numeric fields
    """
    path = Path(path)
    if format not in SUPPORTED_FORMATS:
        raise IngestionError(f"Unsupported embedding format {format!r}; expected one of {SUPPORTED_FORMATS}")
    if not path.exists():
        raise FileNotFoundError(f"Embedding file not found: {path}")

    vectors: Dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    duplicates = 0

    with open(path, "r", encoding="utf-8", errors="replace") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip("\n").rstrip()
            if not line:
                continue
            if line_number == 1 and format in FORMATS_WITH_HEADER:
                dim = _parse_header(line, path)
                continue

            parts = line.split()
            word, fields = parts[0], parts[1:]
            if dim is None:
                dim = len(fields)
            if len(fields) != dim:
                raise EmbeddingParseError(
                    f"Row for {word!r} has dimension {len(fields)}, expected {dim}", path, line_number
                )
            if vocabulary is not None and word not in vocabulary:
                continue
            if word in vectors:
                duplicates += 1
                continue
            try:
                vector = np.array([float(x) for x in fields])
            except ValueError:
                raise EmbeddingParseError(f"Non-numeric field in row for {word!r}", path, line_number) from None
            if not np.all(np.isfinite(vector)):
                raise EmbeddingParseError(f"Non-finite value in row for {word!r}", path, line_number)
            vectors[word] = vector

    if duplicates:
        logger.warning(f"{duplicates} duplicate words in {path}; kept first occurrences")
    logger.info(f"Loaded {len(vectors)} embeddings of dimension {dim} from {path}")
    return vectors


def align(corpus: Corpus, embeddings: Dict[str, np.ndarray]) -> Tuple[Corpus, EmbeddingTable]:
    """
    Restrict the vocabulary to words with an embedding and re-encode documents.

    Vocabulary order is preserved, so aligning twice is a no-op.

    Raises:
        IngestionError: if no vocabulary word has an embedding
    """
    kept_words = [w for w in corpus.vocab.words if w in embeddings]
    if not kept_words:
        raise IngestionError(
            f"No overlap between the {len(corpus.vocab)}-word vocabulary and {len(embeddings)} embeddings"
        )
    vocab = Vocabulary(kept_words)
    remap = {corpus.vocab.lookup(w): i for i, w in enumerate(kept_words)}

    def reencode(docs):
        out = []
        for doc in docs:
            ids = [remap[t] for t in doc.tokens if t in remap]
            if ids:
                out.append(Document(tokens=ids, doc_id=doc.doc_id, label=doc.label))
        return out

    train = reencode(corpus.train)
    if not train:
        raise IngestionError("Every training document became empty after embedding alignment")
    aligned = Corpus(train=train, test=reencode(corpus.test), vocab=vocab)
    table = EmbeddingTable(np.vstack([embeddings[w] for w in kept_words]))

    dropped = len(corpus.vocab) - len(vocab)
    if dropped:
        logger.info(f"Alignment dropped {dropped} words without embeddings")
    logger.info(f"Aligned corpus: {aligned.summary()}, M={table.dim}")
    return aligned, table
