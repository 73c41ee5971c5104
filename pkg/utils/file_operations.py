"""
Output directories and content hashes (determinism checks, cache keys).
"""

import hashlib
import logging
from pathlib import Path
from typing import Iterable

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16


def ensure_directory(path: Path) -> None:
    """mkdir -p, logging the failure before re-raising."""
    try:
        Path(path).mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"Failed to create directory {path}: {e}")
        raise


def calculate_file_hash(file_path: Path, algorithm: str = "sha256") -> str:
    """Hex digest of a file read in chunks; checkpoints can be large."""
    hasher = hashlib.new(algorithm)
    with open(file_path, 'rb') as f:
        for chunk in iter(lambda: f.read(CHUNK_SIZE), b""):
            hasher.update(chunk)
    return hasher.hexdigest()


def hash_token_sequences(sequences: Iterable[Iterable[str]]) -> str:
    """
    Hash a corpus given as token sequences.

    Token and document boundaries are both encoded, so re-segmenting the
    same tokens gives a different key.
    """
    hasher = hashlib.sha256()
    for tokens in sequences:
        for token in tokens:
            hasher.update(str(token).encode("utf-8"))
            hasher.update(b"\x1f")
        hasher.update(b"\x1e")
    return hasher.hexdigest()
