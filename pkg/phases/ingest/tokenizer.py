"""
Tokenization and corpus-file reading.

Corpus files hold one document per line with an optional leading
`label<TAB>` field.
"""

import logging
import string
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Tuple

from models.corpus import RawDocument

logger = logging.getLogger(__name__)

Tokenizer = Callable[[str], List[str]]

_STRIP = string.punctuation + "“”‘’"


def simple_tokenize(text: str) -> List[str]:
    """Lowercase, split on whitespace, strip surrounding punctuation. Stop words are kept."""
    tokens = []
    for piece in text.lower().split():
        token = piece.strip(_STRIP)
        if token:
            tokens.append(token)
    return tokens


def split_label(line: str) -> Tuple[Optional[str], str]:
    if "\t" in line:
        label, text = line.split("\t", 1)
        return label.strip() or None, text
    return None, line


def iter_corpus_lines(path: Path) -> Iterator[Tuple[Optional[str], str]]:
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.strip():
                yield split_label(line)


def read_corpus_file(path: Path, tokenizer: Tokenizer = simple_tokenize,
                     first_doc_id: int = 0) -> List[RawDocument]:
    """Read and tokenize a corpus file; blank lines are skipped."""
    if not Path(path).exists():
        raise FileNotFoundError(f"Corpus file not found: {path}")
    docs = [
        RawDocument(tokens=tokenizer(text), doc_id=first_doc_id + i, label=label)
        for i, (label, text) in enumerate(iter_corpus_lines(path))
    ]
    logger.info(f"Read {len(docs)} documents from {path}")
    return docs
